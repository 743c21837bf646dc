"""Bottom-up aggregation of local priorities into global weights and scores.

Distributive mode only: each node's global weight is its parent's global
weight times its local weight, and an alternative's final score is the sum of
its local priorities over the criteria-tree leaves, weighted by the leaves'
global weights.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConvergenceError, IncompleteModelError, StructureError
from .model import DecisionModel, matrix_for, validate
from .priority import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    SAATY_RANDOM_INDEX,
    Method,
    PriorityVector,
    priorities,
)


@dataclass(frozen=True)
class SynthesisResult:
    """Global weights for every criteria-tree node, final alternative scores,
    and the overall hierarchical inconsistency, with the scale and method the
    numbers were computed under."""

    theta: float
    method: Method
    global_weights: dict[str, float]
    alternative_scores: dict[str, float]
    overall_inconsistency: float
    per_context: dict[str, PriorityVector]

    def ranking(self) -> tuple[str, ...]:
        """Alternatives ordered by score, ties broken by declaration order."""
        order = list(self.alternative_scores)
        return tuple(sorted(order, key=lambda a: (-self.alternative_scores[a], order.index(a))))


def local_priorities(model: DecisionModel, method: Method | str = Method.EIGENVECTOR,
                     tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                     ri: dict[int, float] = SAATY_RANDOM_INDEX) -> dict[str, PriorityVector]:
    """Local priority vector for every comparison context."""
    missing = {c: model.missing_pairs(c) for c in model.contexts() if model.missing_pairs(c)}
    if missing:
        raise IncompleteModelError(
            f"{len(missing)} context(s) have unanswered judgments", missing=missing)
    out: dict[str, PriorityVector] = {}
    for ctx in model.contexts():
        try:
            out[ctx] = priorities(matrix_for(model, ctx), method=method,
                                  tol=tol, max_iter=max_iter, ri=ri)
        except ConvergenceError as err:
            raise ConvergenceError(f"context {ctx!r}: {err}", last_iterate=err.last_iterate,
                                   residual=err.residual, locus=ctx) from err
    return out


def global_weights(model: DecisionModel,
                   locals_: dict[str, PriorityVector]) -> dict[str, float]:
    """Propagate weights down the criteria tree; the goal carries weight 1."""
    weights: dict[str, float] = {model.goal: 1.0}
    stack = [model.goal]
    while stack:
        nid = stack.pop()
        kids = model.node(nid).children
        if not kids:
            continue
        pv = locals_.get(nid)
        if pv is None:
            raise IncompleteModelError(f"no local priority vector for context {nid!r}",
                                       code="synthesis/missing-local", locus=nid)
        for kid, w in zip(kids, pv.weights):
            weights[kid] = weights[nid] * w
            stack.append(kid)
    return weights


def alternative_scores(model: DecisionModel, locals_: dict[str, PriorityVector],
                       weights: dict[str, float]) -> dict[str, float]:
    """score_a = sum over leaf criteria L of weight(L) * local_priority(a | L)."""
    scores = {a: 0.0 for a in model.alternatives}
    for leaf in model.criteria_leaves():
        pv = locals_.get(leaf)
        if pv is None:
            raise IncompleteModelError(f"no local priority vector for context {leaf!r}",
                                       code="synthesis/missing-local", locus=leaf)
        for a, w in zip(model.alternatives, pv.weights):
            scores[a] += weights[leaf] * w
    return scores


def overall_inconsistency(model: DecisionModel, locals_: dict[str, PriorityVector],
                          weights: dict[str, float],
                          ri: dict[int, float] = SAATY_RANDOM_INDEX) -> float:
    """Hierarchical consistency ratio: weighted CI over weighted RI.

    Sums g(c) * CI(c) and g(c) * RI(order(c)) over every comparison context,
    where g is the context node's global weight (1 for the goal). Returns 0
    when the denominator vanishes (all contexts of order <= 2).
    """
    num = 0.0
    den = 0.0
    for ctx in model.contexts():
        pv = locals_[ctx]
        g = weights[ctx]
        num += g * pv.ci
        den += g * ri[pv.order]
    return num / den if den > 0.0 else 0.0


def synthesize(model: DecisionModel, method: Method | str = Method.EIGENVECTOR,
               tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
               ri: dict[int, float] = SAATY_RANDOM_INDEX) -> SynthesisResult:
    """Validate, prioritize every context, and aggregate to final scores."""
    report = validate(model)
    if not report.ok:
        incomplete = report.by_code("model/incomplete")
        if len(incomplete) == len(report.issues):
            missing = {c: model.missing_pairs(c) for c in model.contexts()
                       if model.missing_pairs(c)}
            raise IncompleteModelError(
                f"{len(missing)} context(s) have unanswered judgments", missing=missing)
        raise StructureError("model does not validate:\n" + str(report),
                             code="model/structure")
    locals_ = local_priorities(model, method=method, tol=tol, max_iter=max_iter, ri=ri)
    weights = global_weights(model, locals_)
    scores = alternative_scores(model, locals_, weights)
    incons = overall_inconsistency(model, locals_, weights, ri=ri)
    return SynthesisResult(theta=model.theta, method=Method(method),
                           global_weights=weights, alternative_scores=scores,
                           overall_inconsistency=incons, per_context=locals_)
