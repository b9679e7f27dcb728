"""Processes whose mixing rate follows a prescribed growth function.

The mixing rate of a measure at horizon n is R(n) = the max row sum of the
unit-diagonal coefficient matrix Delta_n = I + [eta_bar of the length-n
prefix].  Given a valid rate r (integer, nondecreasing, 1 <= r(n) <= n), we
build one pure-row component per checkpoint k: the scan find_nk picks the
smallest horizon n_k and a constant row value h_k with

    1 - eps_k  <=  h_k * (n_k - k) / r(n_k)  <=  1,

and component k is the pure row-k measure on {0,1}^(n_k) with constant row
h_k.  Components run in parallel and are padded beyond their natural length
by independent fair bits, so prefix matrices stay exact without ever
materializing the joint: row k holds h_k out to column n_k and nothing
after, and horizons shorter than n_k fall back to the marginal measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .concentration import op_norm_inf
from .construction import ValidRow, pure_row_measure
from .measures import FiniteMeasure, marginal
from .mixing import mixing_matrix


class HorizonTooSmall(ValueError):
    """No admissible checkpoint horizon within n_max; carries the fix."""

    def __init__(self, k: int, eps: float, n_max: int, required: int):
        self.k = k
        self.eps = eps
        self.n_max = n_max
        self.required_n_max = required
        super().__init__(
            f"no horizon <= {n_max} admits checkpoint k={k} at eps={eps}; "
            f"n_max >= {required} suffices"
        )


@dataclass(frozen=True)
class RateFunction:
    """Tabulated integer rate r(1), ..., r(n_max)."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values:
            raise ValueError("rate table is empty")

    @property
    def n_max(self) -> int:
        return len(self.values)

    def __call__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n={n} outside 1..{self.n_max}")
        return self.values[n - 1]

    @classmethod
    def from_callable(cls, fn, n_max: int) -> "RateFunction":
        return cls(tuple(int(fn(n)) for n in range(1, n_max + 1)))

    @classmethod
    def sqrt(cls, n_max: int) -> "RateFunction":
        return cls.from_callable(lambda n: math.isqrt(n - 1) + 1, n_max)

    @classmethod
    def linear(cls, n_max: int) -> "RateFunction":
        return cls.from_callable(lambda n: n, n_max)

    @classmethod
    def constant(cls, c: int, n_max: int) -> "RateFunction":
        return cls.from_callable(lambda n: min(n, c), n_max)


def validate_rate(r: RateFunction) -> list[str]:
    """Violations of the validity conditions: 1 <= r(n) <= n, nondecreasing."""
    out = []
    for n, v in enumerate(r.values, start=1):
        if not 1 <= v <= n:
            out.append(f"r({n}) = {v} outside [1, {n}]")
    for n in range(2, r.n_max + 1):
        if r.values[n - 1] < r.values[n - 2]:
            out.append(f"r({n}) = {r.values[n - 1]} < r({n - 1}) = {r.values[n - 2]}")
    return out


def find_nk(r: RateFunction, k: int, eps: float) -> tuple[int, float]:
    """Smallest horizon n and constant row value h admitting checkpoint k.

    Scans n = k+1, k+2, ... for h = min(1, r(n) / (n - k)) whose ratio
    h * (n - k) / r(n) lands in [1 - eps, 1].  Any n >= k / eps works, so a
    failed scan reports that bound as the horizon fix.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    for n in range(k + 1, r.n_max + 1):
        rn = r(n)
        h = min(1.0, rn / (n - k))
        ratio = h * (n - k) / rn
        if 1.0 - eps <= ratio <= 1.0:
            return n, h
    raise HorizonTooSmall(k, eps, r.n_max, max(k + 1, math.ceil(k / eps)))


@dataclass(frozen=True)
class Checkpoint:
    k: int
    eps: float
    n: int
    h: float


@dataclass(frozen=True, eq=False)
class TruncatedProcess:
    """Parallel family of pure-row components padded by independent fair bits.

    ``components[k-1]`` lives on {0,1}^(n_k) at its natural length; padding
    beyond n_k is implicit.  ``component_matrices[k-1]`` caches its full
    mixing matrix.
    """

    rate: RateFunction
    n_max: int
    checkpoints: tuple[Checkpoint, ...]
    components: tuple[FiniteMeasure, ...]
    component_matrices: tuple[np.ndarray, ...]

    @property
    def k_max(self) -> int:
        return len(self.components)


def build_process(
    r: RateFunction,
    k_max: int,
    n_max: int,
    eps: tuple[float, ...] | None = None,
) -> TruncatedProcess:
    """Assemble a process whose rate tracks r at k_max checkpoints.

    ``eps`` defaults to (1/2, 1/3, ..., 1/(k_max+1)) and must be strictly
    decreasing within (0, 1).
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    if r.n_max < n_max:
        raise ValueError(f"rate table covers 1..{r.n_max}, need 1..{n_max}")
    bad = validate_rate(r)
    if bad:
        raise ValueError("invalid rate: " + "; ".join(bad))
    if eps is None:
        eps = tuple(1.0 / (k + 1) for k in range(1, k_max + 1))
    eps = tuple(float(e) for e in eps)
    if len(eps) != k_max:
        raise ValueError(f"need {k_max} eps values, got {len(eps)}")
    if any(not 0.0 < e < 1.0 for e in eps):
        raise ValueError(f"eps values must lie in (0, 1), got {eps}")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError(f"eps values must be strictly decreasing, got {eps}")

    checkpoints = []
    components = []
    matrices = []
    sub = RateFunction(r.values[:n_max])
    for k in range(1, k_max + 1):
        n_k, h_k = find_nk(sub, k, eps[k - 1])
        row = ValidRow(n_k, k, (h_k,) * (n_k - k))
        comp, _ = pure_row_measure(n_k, row)
        checkpoints.append(Checkpoint(k, eps[k - 1], n_k, h_k))
        components.append(comp)
        matrices.append(mixing_matrix(comp).entries)
    return TruncatedProcess(
        r, n_max, tuple(checkpoints), tuple(components), tuple(matrices)
    )


def _component_matrix(p: TruncatedProcess, k: int, n: int) -> np.ndarray:
    """Mixing matrix of component k's length-n prefix, as an n-by-n block.

    Beyond the natural length the fair-bit padding contributes nothing, so
    the cached matrix embeds in the top-left corner; shorter horizons use
    the marginal measure directly.
    """
    comp = p.components[k - 1]
    nat = comp.n
    out = np.zeros((n, n))
    if n >= nat:
        out[:nat, :nat] = p.component_matrices[k - 1]
    elif n >= 2:
        out[:, :] = mixing_matrix(marginal(comp, 1, n)).entries
    return out


def delta_matrix(p: TruncatedProcess, n: int) -> np.ndarray:
    """Unit-diagonal coefficient matrix of the length-n prefix, built
    cell-by-cell from the components (rows are disjoint, so the per-cell sum
    is the exact joint coefficient)."""
    if not 1 <= n <= p.n_max:
        raise ValueError(f"n={n} outside 1..{p.n_max}")
    delta = np.eye(n)
    for k in range(1, p.k_max + 1):
        delta += _component_matrix(p, k, n)
    return delta


def rate_R(p: TruncatedProcess, n: int) -> float:
    """Mixing rate at horizon n: max row sum of the prefix Delta matrix."""
    return op_norm_inf(delta_matrix(p, n))


@dataclass(frozen=True)
class CheckpointReport:
    """Checkpoint audit row.

    ``ratio`` compares the worst off-diagonal row sum of Delta at the
    checkpoint horizon against r(n_k); ``norm_ratio`` reports the companion
    convention that keeps the unit diagonal in the numerator.
    """

    k: int
    eps: float
    n: int
    h: float
    ratio: float
    norm_ratio: float
    passed: bool


def check_checkpoints(p: TruncatedProcess, tol: float = 1e-9) -> list[CheckpointReport]:
    """Audit every checkpoint: ratio must land in [1 - eps_k, 1 + tol]."""
    out = []
    for cp in p.checkpoints:
        big_r = rate_R(p, cp.n)
        rn = p.rate(cp.n)
        ratio = (big_r - 1.0) / rn
        out.append(
            CheckpointReport(
                cp.k, cp.eps, cp.n, cp.h, ratio, big_r / rn,
                1.0 - cp.eps <= ratio <= 1.0 + tol,
            )
        )
    return out
