"""Synthesis of binary measures with a prescribed mixing-matrix row.

Given a target row h_{k+1} >= h_{k+2} >= ... >= h_n in [0, 1], we build a
measure on {0,1}^n whose mixing matrix is exactly h on row k and zero
elsewhere ("pure row k").  Starting from the uniform measure, positions are
visited in descending order t = n, n-1, ..., k+1; each visit multiplies the
current measure by a two-point weight on the agreement indicator of
(x_k, x_t),

    new(x) = alpha * (v * [x_k == x_t] + (1 - v) * [x_k != x_t]) * old(x),

and v is chosen by bisection so that eta_bar(new, k, t) equals h_t.  The
descending order matters: a visit at position t-1 leaves every conditional
law of (X_t, ..., X_n) given the first k symbols untouched, so the cells
already matched at t, t+1, ..., n stay matched.  Visiting positions in
ascending order offers no such protection and in general overshoots earlier
cells (kept available as order="forward" for demonstration).

Stacking one pure-row component per row k = 1..n-1 in parallel realizes any
valid target matrix; see :func:`construct_from_target`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import FiniteMeasure, SeqSpace, uniform
from .mixing import MixingMatrix, TargetInvalid, eta_bar, validate_target
from .products import ProductMeasure

#: Default bisection tolerance on |achieved - target|.  Tighter than the
#: 1e-9 verification tolerances so that drift across steps stays invisible.
SOLVE_TOL = 1e-12

SOLVE_MAX_ITER = 80


class BracketError(RuntimeError):
    """The bisection bracket [1/2, 1] does not contain the target value."""


@dataclass(frozen=True)
class ValidRow:
    """Target row for a pure row-k construction on {0,1}^n.

    ``h[0]`` targets the pair (k, k+1), ``h[-1]`` the pair (k, n).  Entries
    must lie in [0, 1] and be nonincreasing.
    """

    n: int
    k: int
    h: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "h", tuple(float(x) for x in self.h))
        if not 1 <= self.k < self.n:
            raise ValueError(f"need 1 <= k < n, got k={self.k} n={self.n}")
        if len(self.h) != self.n - self.k:
            raise ValueError(
                f"row for k={self.k}, n={self.n} needs {self.n - self.k} entries, "
                f"got {len(self.h)}"
            )
        for x in self.h:
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"row entry {x!r} outside [0, 1]")
        if any(b > a for a, b in zip(self.h, self.h[1:])):
            raise ValueError(f"row entries must be nonincreasing, got {self.h}")

    def target(self, t: int) -> float:
        """Target coefficient for the pair (k, t)."""
        if not self.k < t <= self.n:
            raise ValueError(f"need k < t <= n, got t={t} for k={self.k} n={self.n}")
        return self.h[t - self.k - 1]


@dataclass(frozen=True)
class TraceStep:
    """Record of one solved position: chosen v, effort, achieved value."""

    t: int
    v_star: float
    iterations: int
    achieved: float
    alpha: float


@dataclass(frozen=True)
class ConstructionTrace:
    k: int
    steps: tuple[TraceStep, ...]


def _agreement_weights(n: int, k: int, t: int, v: float) -> np.ndarray:
    idx = np.arange(1 << n)
    bit_k = (idx >> (n - k)) & 1
    bit_t = (idx >> (n - t)) & 1
    return np.where(bit_k == bit_t, v, 1.0 - v)


def _reweight(mu: FiniteMeasure, k: int, t: int, v: float) -> tuple[np.ndarray, float]:
    if mu.q != 2:
        raise ValueError("reweighting is defined for binary alphabets only")
    if not 1 <= k < t <= mu.n:
        raise ValueError(f"need 1 <= k < t <= n, got k={k} t={t} n={mu.n}")
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"v={v!r} outside [0, 1]")
    w = _agreement_weights(mu.n, k, t, v) * mu.probs
    total = float(w.sum())
    if total <= 0.0:
        raise ValueError(f"reweighting with v={v!r} leaves no mass")
    # alpha is the normalization 1 / (v * P[x_k == x_t] + (1-v) * P[x_k != x_t])
    return w / total, 1.0 / total


def reweight(mu: FiniteMeasure, k: int, t: int, v: float) -> FiniteMeasure:
    """Tilt mu by the two-point agreement weight on (x_k, x_t), renormalized."""
    probs, _ = _reweight(mu, k, t, v)
    return FiniteMeasure(mu.space, probs)


def row_objective(mu: FiniteMeasure, k: int, t: int, v: float) -> float:
    """eta_bar(reweight(mu, k, t, v), k, t), the function bisection drives.

    On the uniform measure at the first visited position this is |2v - 1|:
    0 at v = 1/2 and 1 at both endpoints.  At later positions its value at
    v = 1/2 is the coefficient already achieved at the previously visited
    position.
    """
    return eta_bar(reweight(mu, k, t, v), k, t)


def solve_v(
    mu: FiniteMeasure,
    k: int,
    t: int,
    target: float,
    tol: float = SOLVE_TOL,
    max_iter: int = SOLVE_MAX_ITER,
) -> tuple[float, TraceStep]:
    """Find v in [1/2, 1] with row_objective(mu, k, t, v) = target.

    Endpoints are returned without bisection when they already meet the
    tolerance.  Otherwise a sign bracket of f(v) - target is maintained; the
    last midpoint is returned after ``max_iter`` halvings even if the
    tolerance was not met (the trace records what was achieved).
    """
    if not 0.0 <= target <= 1.0:
        raise ValueError(f"target {target!r} outside [0, 1]")

    def f(v: float) -> float:
        return row_objective(mu, k, t, v)

    def step(v: float, iters: int, achieved: float) -> tuple[float, TraceStep]:
        _, alpha = _reweight(mu, k, t, v)
        return v, TraceStep(t, v, iters, achieved, alpha)

    f_lo = f(0.5)
    if abs(f_lo - target) <= tol:
        return step(0.5, 0, f_lo)
    f_hi = f(1.0)
    if abs(f_hi - target) <= tol:
        return step(1.0, 0, f_hi)
    if not f_lo < target < f_hi:
        raise BracketError(
            f"target {target!r} for pair ({k},{t}) outside bracket "
            f"[f(1/2)={f_lo!r}, f(1)={f_hi!r}]"
        )

    lo, hi = 0.5, 1.0
    mid, f_mid = lo, f_lo
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid - target) <= tol:
            return step(mid, it, f_mid)
        if f_mid < target:
            lo = mid
        else:
            hi = mid
    return step(mid, max_iter, f_mid)


def pure_row_measure(
    n: int,
    row: ValidRow,
    tol: float = SOLVE_TOL,
    max_iter: int = SOLVE_MAX_ITER,
    order: str = "backward",
    return_iterates: bool = False,
):
    """Binary measure on {0,1}^n whose mixing matrix is ``row`` on row k and
    zero elsewhere.

    Returns (measure, trace), or (measure, trace, iterates) with the full
    list of intermediate measures when ``return_iterates`` is set.  The
    iterates let callers verify that each step preserved the conditional
    laws of the not-yet-visited future blocks.

    ``order="forward"`` visits positions in ascending order instead.  That
    variant has no preservation guarantee and exists to demonstrate that the
    descending order is essential, not as a usable constructor.
    """
    if row.n != n:
        raise ValueError(f"row was built for n={row.n}, not n={n}")
    if order not in ("backward", "forward"):
        raise ValueError(f"unknown order {order!r}")
    k = row.k
    mu = uniform(SeqSpace(2, n))
    iterates = [mu]
    steps = []
    ts = range(n, k, -1) if order == "backward" else range(k + 1, n + 1)
    for t in ts:
        v_star, trace_step = solve_v(mu, k, t, row.target(t), tol, max_iter)
        mu = reweight(mu, k, t, v_star)
        steps.append(trace_step)
        iterates.append(mu)
    trace = ConstructionTrace(k, tuple(steps))
    if return_iterates:
        return mu, trace, iterates
    return mu, trace


def check_conditional_preservation(
    before: FiniteMeasure,
    after: FiniteMeasure,
    k: int,
    t: int,
    tol: float = 1e-10,
) -> bool:
    """Did the law of (X_t, ..., X_n) given each first-k prefix survive?

    Compares the two conditional block laws for every length-k prefix with
    positive mass; prefixes alive in only one measure count as failure.
    """
    if before.space != after.space:
        raise ValueError("measures live on different spaces")
    q, n = before.q, before.n
    if not 1 <= k < t <= n:
        raise ValueError(f"need 1 <= k < t <= n, got k={k} t={t} n={n}")

    def block_laws(mu: FiniteMeasure) -> tuple[np.ndarray, np.ndarray]:
        heads = q ** k
        mid = q ** (t - 1 - k)
        tail = q ** (n - t + 1)
        mass = mu.probs.reshape(heads, mid * tail).sum(axis=1)
        block = mu.probs.reshape(heads, mid, tail).sum(axis=1)
        laws = np.divide(
            block, mass[:, None], out=np.zeros_like(block), where=mass[:, None] > 0.0
        )
        return laws, mass > 0.0

    laws_b, alive_b = block_laws(before)
    laws_a, alive_a = block_laws(after)
    if not np.array_equal(alive_b, alive_a):
        return False
    if not alive_b.any():
        return True
    return float(np.abs(laws_b[alive_b] - laws_a[alive_b]).max()) <= tol


def construct_from_target(
    h: MixingMatrix,
    tol: float = SOLVE_TOL,
    max_iter: int = SOLVE_MAX_ITER,
) -> tuple[ProductMeasure, list[ConstructionTrace]]:
    """Measure over the packed alphabet {0,1}^(n-1) realizing a valid target.

    Row k of the target is delegated to an independent pure row-k component
    on {0,1}^n; the parallel product of the components then reproduces the
    whole matrix because each cell is nonzero in at most one component.
    Raises :class:`TargetInvalid` when the target fails validation.
    """
    violations = validate_target(h)
    if violations:
        raise TargetInvalid(violations)
    n = h.n
    if n == 1:
        return ProductMeasure((uniform(SeqSpace(2, 1)),)), []
    components = []
    traces = []
    for k in range(1, n):
        row = ValidRow(n, k, tuple(h.entries[k - 1, k:n]))
        mu, trace = pure_row_measure(n, row, tol, max_iter)
        components.append(mu)
        traces.append(trace)
    return ProductMeasure(tuple(components)), traces
