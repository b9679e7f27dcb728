"""Concentration bounds driven by a mixing matrix.

For a function of n coordinates that is 1-Lipschitz in Hamming distance (or
convex 1-Lipschitz for the spectral bound), deviation probabilities obey

    2 * exp(-t**2 / (2 * ||Gamma||_2**2))      with Gamma = I + sqrt(H)
    2 * exp(-t**2 / (2 * ||Delta||**2))        with Delta = I + H

where H is the strictly-upper-triangular mixing matrix, the square root is
entrywise, and ||Delta|| is taken either as the max row sum or as the
spectral norm.  Matrix norms here are hand-rolled: the max row sum directly,
the spectral norm by power iteration on M^T M.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mixing import MixingMatrix, TargetInvalid, validate_target

POWER_ITER_REL_TOL = 1e-10
POWER_ITER_MAX = 10_000


@dataclass(frozen=True, eq=False)
class CouplingMatrices:
    """Unit-diagonal dependency matrices derived from a mixing matrix."""

    gamma: np.ndarray  # I + entrywise sqrt of the coefficients
    delta: np.ndarray  # I + the coefficients

    def __post_init__(self) -> None:
        for name in ("gamma", "delta"):
            v = np.array(getattr(self, name), dtype=np.float64)
            v.setflags(write=False)
            object.__setattr__(self, name, v)


def coupling_matrices(h: MixingMatrix) -> CouplingMatrices:
    """Build Gamma and Delta from a mixing matrix.

    Requires zeros on and below the diagonal and entries in [0, 1]; row
    monotonicity is not needed here and is not enforced.
    """
    violations = [v for v in validate_target(h) if v.kind != "row-increase"]
    if violations:
        raise TargetInvalid(violations)
    eye = np.eye(h.n)
    return CouplingMatrices(eye + np.sqrt(h.entries), eye + h.entries)


def op_norm_inf(m: np.ndarray) -> float:
    """Max row sum of a nonnegative matrix; rejects negative entries."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if np.any(m < 0.0):
        raise ValueError("negative entry")
    return float(m.sum(axis=1).max())


def op_norm_2(
    m: np.ndarray,
    rel_tol: float = POWER_ITER_REL_TOL,
    max_iter: int = POWER_ITER_MAX,
) -> float:
    """Spectral norm by power iteration on M^T M.

    Deterministic all-ones start; stops when the Rayleigh quotient moves by
    at most ``rel_tol`` relatively, errors out after ``max_iter`` rounds.
    The start vector has positive overlap with the dominant eigenvector for
    the nonnegative matrices used here.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    gram = m.T @ m
    x = np.ones(gram.shape[0]) / math.sqrt(gram.shape[0])
    lam = float(x @ gram @ x)
    for _ in range(max_iter):
        y = gram @ x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return 0.0
        x = y / norm
        lam_new = float(x @ gram @ x)
        if abs(lam_new - lam) <= rel_tol * max(abs(lam_new), 1e-300):
            return math.sqrt(max(lam_new, 0.0))
        lam = lam_new
    raise RuntimeError(f"power iteration did not converge in {max_iter} rounds")


def samson_bound(gamma: np.ndarray, t: float) -> float:
    """Deviation bound 2 * exp(-t^2 / (2 * ||Gamma||_2^2))."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    s = op_norm_2(gamma)
    return 2.0 * math.exp(-(t * t) / (2.0 * s * s))


def kontram_bound(delta: np.ndarray, t: float, norm_choice: str = "inf") -> float:
    """Deviation bound 2 * exp(-t^2 / (2 * ||Delta||^2)), norm selectable."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if norm_choice == "inf":
        s = op_norm_inf(delta)
    elif norm_choice == "2":
        s = op_norm_2(delta)
    else:
        raise ValueError(f"norm_choice must be 'inf' or '2', got {norm_choice!r}")
    return 2.0 * math.exp(-(t * t) / (2.0 * s * s))


def bounds_report(h: MixingMatrix, t: float) -> dict:
    """All bounds for one deviation level t, plus the Delta norms used.

    ``norm_inf`` and ``norm_2`` describe Delta; the spectral norm entering
    the Gamma-based bound is recomputed internally from Gamma.
    """
    cm = coupling_matrices(h)
    return {
        "t": float(t),
        "norm_inf": op_norm_inf(cm.delta),
        "norm_2": op_norm_2(cm.delta),
        "samson": samson_bound(cm.gamma, t),
        "kontram_inf": kontram_bound(cm.delta, t, "inf"),
        "kontram_2": kontram_bound(cm.delta, t, "2"),
    }
