"""Mixing coefficients of finite sequence measures.

The central quantity is eta(mu, i, j, y, w, w'): the total variation distance
between the conditional laws of the future block (X_j, ..., X_n) given two
length-i pasts that share the first i-1 symbols y and differ only in the last
symbol (w vs w').  Its worst case over pasts,

    eta_bar(mu, i, j) = max over y, w, w' of eta(mu, i, j, y, w, w'),

fills the strictly-upper-triangular mixing matrix of mu.  Realizable matrices
are exactly those with zeros on and below the diagonal, entries in [0, 1],
and rows nonincreasing to the right; `validate_target` checks those three
properties on prospective targets.

Also here: the uniform-mixing coefficient phi (conditional law of a future
block against the unconditional law, worst case over single positive-mass
pasts), the inequality eta_bar_{ij} <= 2 * phi_{j-i}, and an informational
scan comparing 0.5 * sum_g phi_g against 1 + max_i sum_{j>i} eta_bar_{ij}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import FiniteMeasure, conditional, marginal, tv_distance


@dataclass(frozen=True, eq=False)
class MixingMatrix:
    """n-by-n matrix of worst-case conditional TV coefficients.

    ``entries[i-1, j-1]`` holds the coefficient for the 1-based position pair
    (i, j).  Instances built from user data may violate the realizability
    properties; run :func:`validate_target` to find out.  Matrices produced by
    :func:`mixing_matrix` satisfy them by construction (checked in tests).
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        e = np.array(self.entries, dtype=np.float64)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"entries must be square, got shape {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def zeros(cls, n: int) -> "MixingMatrix":
        return cls(np.zeros((n, n)))


@dataclass(frozen=True)
class Violation:
    """One violated realizability property at a (1-based) cell."""

    kind: str  # "lower-triangle", "range", or "row-increase"
    i: int
    j: int
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at ({self.i},{self.j}): {self.detail}"


class TargetInvalid(ValueError):
    """A prospective mixing matrix fails the realizability properties."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        lines = "; ".join(str(v) for v in violations[:8])
        more = "" if len(violations) <= 8 else f" (+{len(violations) - 8} more)"
        super().__init__(f"invalid mixing target: {lines}{more}")


def eta(mu: FiniteMeasure, i: int, j: int, y, w: int, wp: int) -> float:
    """TV distance between laws of (X_j, ..., X_n) given pasts y+w and y+w'.

    Positions are 1-based with 1 <= i < j <= n; y supplies the first i-1
    symbols.  Raises ZeroProbabilityPrefix when either past carries no mass.
    """
    _check_pair(mu.n, i, j)
    y = tuple(y)
    if len(y) != i - 1:
        raise ValueError(f"y has length {len(y)}, expected {i - 1}")
    return tv_distance(_block_law(mu, y + (int(w),), j), _block_law(mu, y + (int(wp),), j))


def _block_law(mu: FiniteMeasure, prefix: tuple[int, ...], j: int) -> FiniteMeasure:
    """Law of (X_j, ..., X_n) given a length-i prefix, i < j."""
    i = len(prefix)
    suffix = conditional(mu, prefix)  # law of X_{i+1}..X_n
    return marginal(suffix, j - i, mu.n - i)


def _check_pair(n: int, i: int, j: int) -> None:
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= n, got i={i} j={j} n={n}")


def eta_bar(mu: FiniteMeasure, i: int, j: int) -> float:
    """Worst case of :func:`eta` over all pasts and symbol pairs.

    Pasts with zero probability are skipped; with no admissible pair the
    value is 0.  Vectorized over all length-(i-1) stems at once.
    """
    _check_pair(mu.n, i, j)
    return _cell(mu.probs, mu.q, mu.n, i, j)


def _cell(probs: np.ndarray, q: int, n: int, i: int, j: int) -> float:
    heads = q ** (i - 1)          # shared stems y
    mid = q ** (j - 1 - i)        # positions marginalized out of the block
    tail = q ** (n - j + 1)       # size of the future block law
    mass = probs.reshape(heads * q, mid * tail).sum(axis=1)
    block = probs.reshape(heads * q, mid, tail).sum(axis=1)
    cond = np.divide(
        block, mass[:, None], out=np.zeros_like(block), where=mass[:, None] > 0.0
    ).reshape(heads, q, tail)
    alive = (mass > 0.0).reshape(heads, q)

    best = 0.0
    for a in range(q):
        for b in range(a + 1, q):
            both = alive[:, a] & alive[:, b]
            if not both.any():
                continue
            d = 0.5 * np.abs(cond[:, a, :] - cond[:, b, :]).sum(axis=1)
            m = float(d[both].max())
            if m > best:
                best = m
    return best


def mixing_matrix(mu: FiniteMeasure) -> MixingMatrix:
    """Full matrix of eta_bar coefficients for all position pairs i < j."""
    n = mu.n
    ent = np.zeros((n, n))
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            ent[i - 1, j - 1] = _cell(mu.probs, mu.q, n, i, j)
    return MixingMatrix(ent)


def validate_target(h: MixingMatrix, tol: float = 0.0) -> list[Violation]:
    """Check the three realizability properties, reporting every bad cell.

    lower-triangle: entries on and below the diagonal are exactly zero.
    range: entries above the diagonal lie in [0, 1] (inclusive).
    row-increase: within each row, entries may not increase left to right.

    The default ``tol = 0`` is the right reading for hand-written targets.
    Matrices computed from a measure carry float noise of order 1e-16 in
    cells that are equal in exact arithmetic, so pass a small positive tol
    when validating those.
    """
    e = h.entries
    n = h.n
    out: list[Violation] = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            v = float(e[i - 1, j - 1])
            if i >= j:
                if abs(v) > tol:
                    out.append(
                        Violation("lower-triangle", i, j, f"expected 0, got {v!r}")
                    )
            else:
                if not -tol <= v <= 1.0 + tol:
                    out.append(Violation("range", i, j, f"{v!r} outside [0, 1]"))
        for j in range(i + 1, n):
            a, b = float(e[i - 1, j - 1]), float(e[i - 1, j])
            if b > a + tol:
                out.append(
                    Violation(
                        "row-increase", i, j + 1, f"{b!r} exceeds {a!r} at ({i},{j})"
                    )
                )
    return out


def check_monotonicity(mu: FiniteMeasure, tol: float = 1e-12) -> bool:
    """True when every realized row is nonincreasing to the right within tol."""
    e = mixing_matrix(mu).entries
    n = mu.n
    for i in range(n - 1):
        row = e[i, i + 1 : n]
        if np.any(np.diff(row) > tol):
            return False
    return True


def phi(mu: FiniteMeasure, g: int) -> float:
    """Uniform-mixing coefficient at gap g >= 1.

    Worst case, over positions i with i + g <= n and single positive-mass
    pasts y of length i, of the TV distance between the law of
    (X_{i+g}, ..., X_n) given X_1..X_i = y and its unconditional law.  The
    worst case over past *events* equals the worst case over atoms, since a
    conditional law given a union is a convex mixture of the atom laws.
    """
    n, q = mu.n, mu.q
    if not 1 <= g <= n - 1:
        raise ValueError(f"gap {g} outside 1..{n - 1}")
    best = 0.0
    for i in range(1, n - g + 1):
        j = i + g
        heads = q ** i
        mid = q ** (j - 1 - i)
        tail = q ** (n - j + 1)
        mass = mu.probs.reshape(heads, mid * tail).sum(axis=1)
        block = mu.probs.reshape(heads, mid, tail).sum(axis=1)
        uncond = block.sum(axis=0)
        cond = np.divide(
            block, mass[:, None], out=np.zeros_like(block), where=mass[:, None] > 0.0
        )
        d = 0.5 * np.abs(cond - uncond[None, :]).sum(axis=1)
        alive = mass > 0.0
        if alive.any():
            m = float(d[alive].max())
            if m > best:
                best = m
    return best


@dataclass(frozen=True, eq=False)
class PhiVector:
    """phi at every gap g = 1..n-1; nonincreasing in g."""

    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64)
        if v.shape != (self.n - 1,):
            raise ValueError(f"expected {self.n - 1} gaps, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def phi_vector(mu: FiniteMeasure) -> PhiVector:
    return PhiVector(mu.n, np.array([phi(mu, g) for g in range(1, mu.n)]))


def check_samson_inequality(mu: FiniteMeasure, slack: float = 1e-9) -> bool:
    """True when eta_bar(i, j) <= 2 * phi_{j-i} + slack for every pair."""
    e = mixing_matrix(mu).entries
    n = mu.n
    if n == 1:
        return True
    phis = phi_vector(mu).values
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            if e[i - 1, j - 1] > 2.0 * phis[j - i - 1] + slack:
                return False
    return True


@dataclass(frozen=True)
class ConjectureRow:
    """One scanned measure: lhs = 0.5 * sum of phi, rhs = 1 + max row sum."""

    measure_id: int
    n: int
    q: int
    lhs: float
    rhs: float
    satisfied: bool


def conjecture_scan(mus) -> list[ConjectureRow]:
    """Evaluate the open inequality lhs <= rhs on a batch of measures.

    Purely informational: rows report both sides and the comparison, and a
    violation is interesting rather than an error.
    """
    rows = []
    for mid, mu in enumerate(mus):
        n = mu.n
        if n == 1:
            lhs, rhs = 0.0, 1.0
        else:
            lhs = 0.5 * float(phi_vector(mu).values.sum())
            e = mixing_matrix(mu).entries
            rhs = 1.0 + max(float(e[i, i + 1 : n].sum()) for i in range(n - 1))
        rows.append(ConjectureRow(mid, n, mu.q, lhs, rhs, lhs <= rhs))
    return rows
