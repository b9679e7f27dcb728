"""Series and parallel products of sequence measures.

The series product concatenates two independent sequences over the same
alphabet: (mu (+) nu)(xy) = mu(x) * nu(y) on Sigma^(m+n).  The parallel
product runs several equal-length measures side by side over the product
alphabet: each position of the joint sequence carries one symbol from every
component, component 1 most significant in the packed symbol.

For a parallel product the mixing matrix obeys the sandwich

    max_c eta_bar_c(i, j)  <=  eta_bar(i, j)  <=  min(1, sum_c eta_bar_c(i, j))

per cell.  When at most one component is nonzero at each cell ("disjoint
rows", as with pure-row components) the two sides collapse and the factored
matrix is exact without materializing the joint.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .measures import DEFAULT_STATE_CAP, FiniteMeasure, SeqSpace
from .mixing import MixingMatrix, mixing_matrix


@dataclass(frozen=True, eq=False)
class ProductMeasure:
    """Parallel product of equal-length component measures, kept factored."""

    components: tuple[FiniteMeasure, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a product needs at least one component")
        n = comps[0].n
        for c in comps:
            if c.n != n:
                raise ValueError("components must share the same length n")

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return tuple(c.q for c in self.components)

    @property
    def alphabet_size(self) -> int:
        return prod(self.alphabet_sizes)


def series_product(mu: FiniteMeasure, nu: FiniteMeasure) -> FiniteMeasure:
    """Concatenation measure on Sigma^(m+n): independent blocks, same alphabet."""
    if mu.q != nu.q:
        raise ValueError(f"alphabet mismatch: {mu.q} vs {nu.q}")
    cap = max(mu.space.state_cap, nu.space.state_cap)
    space = SeqSpace(mu.q, mu.n + nu.n, cap)
    return FiniteMeasure(space, np.outer(mu.probs, nu.probs).ravel())


def parallel_product(mu: FiniteMeasure, nu: FiniteMeasure) -> ProductMeasure:
    """Two equal-length measures run side by side, kept factored."""
    return ProductMeasure((mu, nu))


def materialize(pm: ProductMeasure, state_cap: int | None = None) -> FiniteMeasure:
    """Dense joint measure of a parallel product on the packed alphabet.

    The packed symbol at each position is the mixed-radix combination of the
    component symbols, component 1 most significant.  Refuses to build more
    than ``state_cap`` atoms.
    """
    n = pm.n
    if state_cap is None:
        state_cap = max(c.space.state_cap for c in pm.components)
    space = SeqSpace(pm.alphabet_size, n, state_cap)  # raises on cap breach

    acc = pm.components[0].tensor()
    q_acc = pm.components[0].q
    for comp in pm.components[1:]:
        outer = np.multiply.outer(acc, comp.tensor())
        # axes are (a_1..a_n, b_1..b_n); interleave to (a_1, b_1, a_2, b_2, ...)
        perm = [ax for pair in zip(range(n), range(n, 2 * n)) for ax in pair]
        q_acc *= comp.q
        acc = outer.transpose(perm).reshape((q_acc,) * n)
    return FiniteMeasure(space, acc.ravel())


@dataclass(frozen=True, eq=False)
class FactoredMixing:
    """Per-cell interval for the mixing matrix of a parallel product.

    ``lower`` is the max over component cells, ``upper`` is min(1, sum).
    When the components have disjoint nonzero rows the interval width is
    (numerically) zero and either bound serves as the exact matrix.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        for name in ("lower", "upper"):
            v = np.array(getattr(self, name), dtype=np.float64)
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @property
    def width(self) -> float:
        return float(np.max(self.upper - self.lower)) if self.lower.size else 0.0

    def is_exact(self, tol: float = 1e-9) -> bool:
        return self.width <= tol

    def exact(self, tol: float = 1e-9) -> MixingMatrix:
        """The collapsed matrix; raises when the interval is wider than tol."""
        if not self.is_exact(tol):
            raise ValueError(
                f"factored mixing interval has width {self.width:.3e} > {tol:.3e}; "
                "component rows are not disjoint"
            )
        return MixingMatrix(self.lower)


def factored_mixing_matrix(pm: ProductMeasure) -> FactoredMixing:
    """Mixing-matrix bounds of a parallel product from its components alone."""
    n = pm.n
    cells = np.stack([mixing_matrix(c).entries for c in pm.components])
    lower = cells.max(axis=0)
    upper = np.minimum(1.0, cells.sum(axis=0))
    return FactoredMixing(lower, upper)
