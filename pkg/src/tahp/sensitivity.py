"""What-if analysis on top-level criterion weights.

Perturbing one criterion's weight to t redistributes the remaining mass over
the other criteria proportionally. Every alternative's score is then exactly
linear in t, so crossover points and rank-reversal intervals are computed in
closed form; any grid is presentation only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateInputError, StructureError
from .model import DecisionModel
from .priority import DEFAULT_MAX_ITER, DEFAULT_TOL, SAATY_RANDOM_INDEX, Method
from .synthesis import SynthesisResult, synthesize

#: Crossover parameters closer than this collapse into one (degenerate) point.
_T_GROUP_EPS = 1e-9


@dataclass(frozen=True)
class ScoreLine:
    """Exact linear response of one alternative to one criterion's weight.

    score(t) = t * p + (1 - t) * rest, where p is the alternative's aggregate
    local priority inside the perturbed criterion's branch and rest is the
    renormalized contribution of all other criteria.
    """

    alternative: str
    criterion: str
    p: float
    rest: float

    def score(self, t: float) -> float:
        return t * self.p + (1.0 - t) * self.rest


@dataclass(frozen=True)
class Crossover:
    """Perturbation weight where two alternatives' lines intersect.

    ``degenerate`` marks points where three or more lines meet at once.
    """

    a: str
    b: str
    t: float
    degenerate: bool = False


@dataclass(frozen=True)
class RankSegment:
    lo: float
    hi: float
    ranking: tuple[str, ...]


@dataclass(frozen=True)
class SensitivityReport:
    criterion: str
    base_weight: float
    lines: tuple[ScoreLine, ...]
    crossovers: tuple[Crossover, ...]
    rank_segments: tuple[RankSegment, ...]
    base_ranking: tuple[str, ...]
    ranking_at_zero: tuple[str, ...]
    standing_ties: tuple[tuple[str, str], ...]
    rank_one_changes: bool

    @property
    def reversal_at_zero(self) -> bool:
        return self.ranking_at_zero != self.base_ranking

    def segment_at(self, t: float) -> RankSegment:
        for seg in self.rank_segments:
            if seg.lo <= t <= seg.hi:
                return seg
        raise ValueError(f"t={t} outside [0, 1]")


def perturb_weights(weights: Sequence[float], k: int, t: float) -> tuple[float, ...]:
    """Set weight k to t and rescale the others proportionally.

    The input must be a distribution; the result is one too.
    """
    w = [float(x) for x in weights]
    if abs(sum(w) - 1.0) > 1e-9:
        raise StructureError(f"weights must sum to 1, got {sum(w)!r}",
                             code="sensitivity/weights-sum")
    if not 0 <= k < len(w):
        raise StructureError(f"criterion index {k} out of range", code="sensitivity/index")
    if not 0.0 <= t <= 1.0:
        raise StructureError(f"perturbation weight must lie in [0, 1], got {t}",
                             code="sensitivity/t-range")
    wk = w[k]
    if wk == 1.0:
        if t < 1.0:
            raise DegenerateInputError(
                "criterion already carries all the weight; no other mass to rescale")
        return tuple(w)
    scale = (1.0 - t) / (1.0 - wk)
    out = [x * scale for x in w]
    out[k] = t
    return tuple(out)


def score_lines(model: DecisionModel, result: SynthesisResult,
                criterion: str) -> tuple[ScoreLine, ...]:
    """Exact linear coefficients for every alternative under one criterion.

    p aggregates the alternative's local priorities over the criterion's
    subtree with the sub-criteria weights renormalized within the branch;
    rest is what the base score implies for the remaining criteria.
    """
    if criterion not in model.criteria:
        raise StructureError(f"{criterion!r} is not a top-level criterion",
                             code="sensitivity/unknown-criterion", locus=criterion)
    w0 = result.global_weights[criterion]
    if w0 >= 1.0:
        raise DegenerateInputError(
            f"criterion {criterion!r} carries the whole weight; sensitivity undefined",
            locus=criterion)

    # within-branch weight of each leaf: product of local weights from the
    # criterion down (renormalized view of the branch)
    branch: dict[str, float] = {criterion: 1.0}
    stack = [criterion]
    leaf_weight: dict[str, float] = {}
    while stack:
        nid = stack.pop()
        kids = model.node(nid).children
        if not kids:
            leaf_weight[nid] = branch[nid]
            continue
        for kid, w in zip(kids, result.per_context[nid].weights):
            branch[kid] = branch[nid] * w
            stack.append(kid)

    lines = []
    for idx, alt in enumerate(model.alternatives):
        p = sum(bw * result.per_context[leaf].weights[idx]
                for leaf, bw in leaf_weight.items())
        s = result.alternative_scores[alt]
        rest = (s - w0 * p) / (1.0 - w0)
        lines.append(ScoreLine(alternative=alt, criterion=criterion, p=p, rest=rest))
    return tuple(lines)


def crossovers(lines: Sequence[ScoreLine]) -> tuple[Crossover, ...]:
    """Closed-form intersections strictly inside (0, 1).

    Parallel or coincident lines yield no crossover; coincident pairs are
    standing ties, reported separately by the full report.
    """
    found: list[Crossover] = []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            la, lb = lines[i], lines[j]
            denom = (la.p - lb.p) - (la.rest - lb.rest)
            if denom == 0.0:
                continue
            t = (lb.rest - la.rest) / denom
            if 0.0 < t < 1.0:
                found.append(Crossover(a=la.alternative, b=lb.alternative, t=t))
    found.sort(key=lambda c: c.t)
    # mark groups of crossovers that collapse onto one parameter value
    out: list[Crossover] = []
    i = 0
    while i < len(found):
        j = i
        while j + 1 < len(found) and found[j + 1].t - found[i].t <= _T_GROUP_EPS:
            j += 1
        degenerate = j > i
        for c in found[i:j + 1]:
            out.append(Crossover(a=c.a, b=c.b, t=c.t, degenerate=degenerate))
        i = j + 1
    return tuple(out)


def standing_ties(lines: Sequence[ScoreLine]) -> tuple[tuple[str, str], ...]:
    """Pairs whose lines coincide: tied at every perturbation weight."""
    ties = []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            la, lb = lines[i], lines[j]
            if la.p == lb.p and la.rest == lb.rest:
                ties.append((la.alternative, lb.alternative))
    return tuple(ties)


def ranking_at(lines: Sequence[ScoreLine], t: float,
               order: Sequence[str]) -> tuple[str, ...]:
    """Ranking at one weight; ties break by alternative declaration order."""
    pos = {a: i for i, a in enumerate(order)}
    scored = {line.alternative: line.score(t) for line in lines}
    return tuple(sorted(scored, key=lambda a: (-scored[a], pos[a])))


def rank_segments(lines: Sequence[ScoreLine],
                  points: Sequence[Crossover],
                  order: Sequence[str]) -> tuple[RankSegment, ...]:
    """Partition [0, 1] into intervals of constant ranking.

    Boundaries are exactly the crossover parameters; each segment's ranking is
    evaluated at its midpoint.
    """
    cuts: list[float] = []
    for c in points:
        if not cuts or c.t - cuts[-1] > _T_GROUP_EPS:
            cuts.append(c.t)
    bounds = [0.0, *cuts, 1.0]
    segments = []
    for lo, hi in zip(bounds, bounds[1:]):
        mid = (lo + hi) / 2.0
        segments.append(RankSegment(lo=lo, hi=hi, ranking=ranking_at(lines, mid, order)))
    return tuple(segments)


def sensitivity_report(model: DecisionModel, result: SynthesisResult,
                       criterion: str) -> SensitivityReport:
    """Full what-if report for one top-level criterion."""
    lines = score_lines(model, result, criterion)
    points = crossovers(lines)
    order = tuple(model.alternatives)
    segments = rank_segments(lines, points, order)
    base_ranking = result.ranking()
    return SensitivityReport(
        criterion=criterion,
        base_weight=result.global_weights[criterion],
        lines=lines,
        crossovers=points,
        rank_segments=segments,
        base_ranking=base_ranking,
        ranking_at_zero=ranking_at(lines, 0.0, order),
        standing_ties=standing_ties(lines),
        rank_one_changes=any(seg.ranking[0] != base_ranking[0] for seg in segments),
    )


def reversal_report(model: DecisionModel, result: SynthesisResult | None = None,
                    method: Method | str = Method.EIGENVECTOR,
                    tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                    ri: dict[int, float] = SAATY_RANDOM_INDEX
                    ) -> tuple[SensitivityReport, ...]:
    """One SensitivityReport per top-level criterion."""
    if result is None:
        result = synthesize(model, method=method, tol=tol, max_iter=max_iter, ri=ri)
    return tuple(sensitivity_report(model, result, c) for c in model.criteria)
