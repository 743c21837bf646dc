"""Local priority vectors and consistency statistics for comparison matrices.

The default prioritization is the principal (Perron) eigenvector obtained by
power iteration; the row geometric mean is available as a cross-check. Both
attach lambda_max, CI, and CR so callers can apply the 0.1 revision gate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, StructureError
from .model import ComparisonMatrix

#: Saaty random consistency index by matrix order. Orders 11..15 follow the
#: later published extensions of the table; override via the ``ri`` argument
#: when working with alternative RI estimates.
SAATY_RANDOM_INDEX: dict[int, float] = {
    1: 0.00, 2: 0.00, 3: 0.58, 4: 0.90, 5: 1.12,
    6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49,
    11: 1.51, 12: 1.54, 13: 1.56, 14: 1.57, 15: 1.59,
}

#: Conventional acceptance threshold: judgments with CR above this are sent
#: back for revision. Inclusive: cr == 0.1 passes.
CR_THRESHOLD = 0.1

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


class Method(str, enum.Enum):
    EIGENVECTOR = "eigenvector"
    GEOMETRIC_MEAN = "geometric-mean"


@dataclass(frozen=True)
class PriorityVector:
    """Normalized local weights for one matrix, with consistency statistics."""

    context: str
    weights: tuple[float, ...]
    lambda_max: float
    ci: float
    cr: float
    method: Method

    @property
    def order(self) -> int:
        return len(self.weights)


def consistency_ratio(lambda_max: float, n: int,
                      ri: dict[int, float] = SAATY_RANDOM_INDEX) -> tuple[float, float]:
    """(CI, CR) for a matrix of order ``n`` with principal eigenvalue ``lambda_max``.

    Orders 1 and 2 are always consistent by construction, so both values are
    defined as 0 there.
    """
    if n < 1 or n not in ri:
        known = max(ri)
        raise StructureError(
            f"matrix order {n} is outside the random-index table domain (1..{known})",
            code="priority/ri-domain")
    if n <= 2:
        return 0.0, 0.0
    ci = (lambda_max - n) / (n - 1)
    return ci, ci / ri[n]


def _positive_array(matrix: ComparisonMatrix) -> np.ndarray:
    a = matrix.as_array()
    if not np.all(a > 0.0):
        raise StructureError(f"matrix for context {matrix.context!r} has a non-positive entry",
                             code="priority/non-positive", locus=matrix.context)
    return a


def _finish(matrix: ComparisonMatrix, a: np.ndarray, w: np.ndarray, method: Method,
            ri: dict[int, float]) -> PriorityVector:
    n = a.shape[0]
    # The Perron root of a positive reciprocal matrix is at least n; the mean
    # of component ratios can dip a few ulps below it, so floor at n.
    lam = max(float(np.mean((a @ w) / w)), float(n))
    ci, cr = consistency_ratio(lam, n, ri)
    return PriorityVector(context=matrix.context, weights=tuple(float(x) for x in w),
                          lambda_max=lam, ci=ci, cr=cr, method=method)


def principal_eigenvector(matrix: ComparisonMatrix,
                          tol: float = DEFAULT_TOL,
                          max_iter: int = DEFAULT_MAX_ITER,
                          start: tuple[float, ...] | None = None,
                          ri: dict[int, float] = SAATY_RANDOM_INDEX) -> PriorityVector:
    """Normalized Perron eigenvector by power iteration.

    Iterates w -> normalize(A w) until successive normalized iterates differ
    by less than ``tol`` in max-norm. lambda_max is estimated as the mean of
    the component-wise ratios (A w)_i / w_i at convergence.
    """
    if not tol > 0.0:
        raise StructureError(f"tol must be positive, got {tol}", code="priority/tol")
    if max_iter < 1:
        raise StructureError(f"max_iter must be >= 1, got {max_iter}", code="priority/max-iter")
    a = _positive_array(matrix)
    n = a.shape[0]
    if start is None:
        w = np.full(n, 1.0 / n)
    else:
        w = np.asarray(start, dtype=float)
        if w.shape != (n,) or not np.all(w > 0.0):
            raise StructureError("start vector must be positive with one entry per member",
                                 code="priority/start-vector")
        w = w / w.sum()
    residual = float("inf")
    for _ in range(max_iter):
        v = a @ w
        v /= v.sum()
        residual = float(np.max(np.abs(v - w)))
        w = v
        if residual < tol:
            return _finish(matrix, a, w, Method.EIGENVECTOR, ri)
    raise ConvergenceError(
        f"power iteration on context {matrix.context!r} did not converge "
        f"within {max_iter} iterations (residual {residual:.3e})",
        last_iterate=tuple(float(x) for x in w), residual=residual, locus=matrix.context)


def geometric_mean_priorities(matrix: ComparisonMatrix,
                              ri: dict[int, float] = SAATY_RANDOM_INDEX) -> PriorityVector:
    """Row geometric means, normalized to sum 1."""
    a = _positive_array(matrix)
    w = np.exp(np.mean(np.log(a), axis=1))
    w /= w.sum()
    return _finish(matrix, a, w, Method.GEOMETRIC_MEAN, ri)


def priorities(matrix: ComparisonMatrix, method: Method | str = Method.EIGENVECTOR,
               tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
               ri: dict[int, float] = SAATY_RANDOM_INDEX) -> PriorityVector:
    """Dispatch to the requested prioritization method."""
    method = Method(method)
    if method is Method.GEOMETRIC_MEAN:
        return geometric_mean_priorities(matrix, ri=ri)
    return principal_eigenvector(matrix, tol=tol, max_iter=max_iter, ri=ri)


def passes_gate(pv: PriorityVector, threshold: float = CR_THRESHOLD) -> bool:
    """True iff the vector's CR is at or below the revision threshold.

    The gate drives revision prompts and warnings; it never blocks
    computation.
    """
    return pv.cr <= threshold
