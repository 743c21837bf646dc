"""The bundled evaluation fixture and the search tool that constructs it.

The information-security case ships only aggregate results (criteria weights,
alternative scores), never the underlying judgment matrices. ``fit_fixture``
searches the finite space of ternary judgment assignments for a model whose
synthesis reproduces those aggregates within a tolerance and satisfies the
stated what-if constraints, then emits the document together with a
provenance report (achieved values, residuals, search statistics) so the
fixture is explicit about being fitted rather than elicited.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Mapping, Sequence

import numpy as np

from .document import serialize, parse
from .errors import FitError
from .model import DEFAULT_THETA, DecisionModel, TernaryValue, build_model, set_judgment
from .priority import CR_THRESHOLD, SAATY_RANDOM_INDEX
from .sensitivity import reversal_report
from .synthesis import SynthesisResult, synthesize

_EXPONENT_VALUE = {0: TernaryValue.EQUAL, 1: TernaryValue.MORE_IMPORTANT,
                   -1: TernaryValue.LESS_IMPORTANT}

#: Exhaustive-search guard: a branch whose candidate grid would exceed this is
#: rejected rather than silently subsampled.
_MAX_BRANCH_GRID = 2_000_000

#: Joint optimization bounds: product of the small pools, and of the two
#: pools broadcast against each other. Beyond these, coordinate descent.
_JOINT_SMALL_LIMIT = 20_000
_JOINT_PAIR_LIMIT = 2_000_000

_SWEEPS = 50
_ZERO_MARGINS = (0.012, 0.02, 0.006)
_RANK_ONE_MARGIN = 0.005


@dataclass(frozen=True)
class FixtureTargets:
    """Aggregate results a fitted model must reproduce.

    ``theta`` fixes the scale parameter; None tries the default first and
    then scans (1, 9]. ``rank_one_stable`` requires the top alternative to
    stay on top under every criterion sweep; ``swap_criterion`` names the one
    criterion whose zeroing must swap ranks 2 and 3 (every other criterion's
    zeroing must leave the ranking unchanged).
    """

    criteria_weights: Mapping[str, float]
    alternative_scores: Mapping[str, float]
    tolerance: float = 0.005
    theta: float | None = None
    rank_one_stable: bool = False
    swap_criterion: str | None = None


@dataclass(frozen=True)
class FitResult:
    model: DecisionModel
    document: str
    provenance: dict


@dataclass(frozen=True)
class _Catalog:
    """All gate-passing ternary matrices of one order, with priority data."""

    order: int
    combos: tuple[tuple[int, ...], ...]
    weights: np.ndarray  # (k, order)
    ci: np.ndarray       # (k,)


def _ternary_catalog(n: int, theta: float, gate: float = CR_THRESHOLD) -> _Catalog:
    if n == 1:
        return _Catalog(1, ((),), np.ones((1, 1)), np.zeros(1))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    combos = list(itertools.product((0, 1, -1), repeat=len(pairs)))
    mats = np.ones((len(combos), n, n))
    for k, combo in enumerate(combos):
        for (i, j), e in zip(pairs, combo):
            mats[k, i, j] = theta ** e
            mats[k, j, i] = theta ** (-e)
    values, vectors = np.linalg.eig(mats)
    lead = np.argmax(values.real, axis=1)
    lam = np.maximum(values.real[np.arange(len(combos)), lead], float(n))
    w = np.abs(vectors.real[np.arange(len(combos)), :, lead])
    w /= w.sum(axis=1, keepdims=True)
    ci = (lam - n) / (n - 1)
    cr = ci / SAATY_RANDOM_INDEX[n] if n >= 3 else np.zeros(len(combos))
    keep = cr <= gate + 1e-12
    return _Catalog(n, tuple(c for c, k in zip(combos, keep) if k),
                    w[keep], ci[keep])


@dataclass
class _Branch:
    """Candidate aggregates for one criterion's subtree."""

    criterion: str
    leaves: tuple[str, ...]
    group: _Catalog | None          # None when the criterion is itself a leaf
    leaf_catalog: _Catalog
    p: np.ndarray = field(init=False)        # (N, n_alt) branch-local aggregates
    ci_num: np.ndarray = field(init=False)   # (N,) per-unit-weight CI contribution
    picks: list[tuple[int, tuple[int, ...]]] = field(init=False)

    def __post_init__(self) -> None:
        leaf_w = self.leaf_catalog.weights
        leaf_ci = self.leaf_catalog.ci
        n_leafopt = len(leaf_w)
        if self.group is None:
            self.p = leaf_w.copy()
            self.ci_num = leaf_ci.copy()
            self.picks = [(-1, (i,)) for i in range(n_leafopt)]
            return
        m = len(self.leaves)
        if len(self.group.weights) * n_leafopt ** m > _MAX_BRANCH_GRID:
            raise FitError(f"branch {self.criterion!r} is too large for exhaustive "
                           f"fitting ({m} sub-criteria)", code="fixture/branch-size",
                           locus=self.criterion)
        combo_idx = np.array(list(itertools.product(range(n_leafopt), repeat=m)))
        blocks_p, blocks_ci, picks = [], [], []
        for gi, (u, gci) in enumerate(zip(self.group.weights, self.group.ci)):
            p = np.zeros((len(combo_idx), leaf_w.shape[1]))
            ci = np.full(len(combo_idx), gci)
            for col in range(m):
                p += u[col] * leaf_w[combo_idx[:, col]]
                ci += u[col] * leaf_ci[combo_idx[:, col]]
            blocks_p.append(p)
            blocks_ci.append(ci)
            picks.extend((gi, tuple(row)) for row in combo_idx)
        self.p = np.vstack(blocks_p)
        self.ci_num = np.concatenate(blocks_ci)
        self.picks = picks

    def restrict(self, mask: np.ndarray) -> "_Branch | None":
        if not mask.any():
            return None
        clone = object.__new__(_Branch)
        clone.criterion = self.criterion
        clone.leaves = self.leaves
        clone.group = self.group
        clone.leaf_catalog = self.leaf_catalog
        clone.p = self.p[mask]
        clone.ci_num = self.ci_num[mask]
        clone.picks = [pk for pk, keep in zip(self.picks, mask) if keep]
        return clone


def _optimize_picks(pools: list[np.ndarray], w: np.ndarray, target: np.ndarray,
                    stats: dict) -> list[int]:
    """Candidate assignment minimizing the max-abs residual of the weighted sum.

    Exhaustive joint search when pool sizes permit (the two largest pools are
    broadcast against each other, the rest enumerated), otherwise coordinate
    descent from nearest-candidate starts.
    """
    sizes = [len(p) for p in pools]
    if len(pools) == 1:
        stats["optimizer"] = "joint"
        return [int(np.argmin(np.max(np.abs(w[0] * pools[0] - target[None, :]), axis=1)))]
    order = sorted(range(len(pools)), key=lambda i: sizes[i])
    small, big = order[:-2], order[-2:]
    n_small = int(np.prod([sizes[i] for i in small])) if small else 1
    n_big = sizes[big[0]] * sizes[big[1]]
    if n_small <= _JOINT_SMALL_LIMIT and n_big <= _JOINT_PAIR_LIMIT:
        stats["optimizer"] = "joint"
        return _joint_picks(pools, w, target, small, big)
    stats["optimizer"] = "descent"
    return _descent_picks(pools, w, target, stats)


def _joint_picks(pools: list[np.ndarray], w: np.ndarray, target: np.ndarray,
                 small: list[int], big: list[int]) -> list[int]:
    b0, b1 = big
    pair = w[b0] * pools[b0][:, None, :] + w[b1] * pools[b1][None, :, :]
    best_err = np.inf
    best: list[int] | None = None
    for combo in itertools.product(*(range(len(pools[i])) for i in small)):
        base = sum((w[i] * pools[i][j] for i, j in zip(small, combo)),
                   np.zeros(target.shape))
        err = np.max(np.abs(base[None, None, :] + pair - target[None, None, :]), axis=2)
        i0, i1 = np.unravel_index(np.argmin(err), err.shape)
        if err[i0, i1] < best_err:
            best_err = float(err[i0, i1])
            picks = [0] * len(pools)
            for i, j in zip(small, combo):
                picks[i] = j
            picks[b0], picks[b1] = int(i0), int(i1)
            best = picks
    assert best is not None
    return best


def _descent_picks(pools: list[np.ndarray], w: np.ndarray, target: np.ndarray,
                   stats: dict) -> list[int]:
    picks = [int(np.argmin(np.max(np.abs(p - target[None, :]), axis=1))) for p in pools]
    for sweep in range(_SWEEPS):
        changed = False
        total = sum(w[k] * pools[k][picks[k]] for k in range(len(pools)))
        for k, pool in enumerate(pools):
            base = total - w[k] * pool[picks[k]]
            err = np.max(np.abs(base[None, :] + w[k] * pool - target[None, :]), axis=1)
            j = int(np.argmin(err))
            if j != picks[k]:
                total = base + w[k] * pool[j]
                picks[k] = j
                changed = True
        if not changed:
            stats["sweeps"] = sweep + 1
            break
    return picks


def _zero_order_mask(p: np.ndarray, scores: np.ndarray, w: float,
                     required: Sequence[int], margin: float) -> np.ndarray:
    """Candidates whose ranking at t=0 matches ``required`` with slack."""
    z = scores[None, :] - w * p
    mask = np.ones(len(p), dtype=bool)
    for hi, lo in zip(required, required[1:]):
        mask &= z[:, hi] >= z[:, lo] + margin
    return mask


def _validate_targets(model: DecisionModel, targets: FixtureTargets) -> None:
    crit = list(targets.criteria_weights)
    if crit != list(model.criteria):
        raise FitError("criteria_weights keys must match the hierarchy's top criteria "
                       f"in order: {list(model.criteria)}", code="fixture/targets")
    alts = list(targets.alternative_scores)
    if alts != list(model.alternatives):
        raise FitError("alternative_scores keys must match the hierarchy's alternatives "
                       f"in order: {list(model.alternatives)}", code="fixture/targets")
    for label, values in (("criteria_weights", targets.criteria_weights),
                          ("alternative_scores", targets.alternative_scores)):
        total = sum(values.values())
        if abs(total - 1.0) > 1e-6:
            raise FitError(f"{label} must sum to 1, got {total!r}",
                           code="fixture/targets", locus=label)
        if any(v < 0 for v in values.values()):
            raise FitError(f"{label} must be non-negative", code="fixture/targets",
                           locus=label)
    if not targets.tolerance > 0:
        raise FitError("tolerance must be positive", code="fixture/targets",
                       locus="tolerance")
    if targets.swap_criterion is not None:
        if targets.swap_criterion not in model.criteria:
            raise FitError(f"swap_criterion {targets.swap_criterion!r} is not a "
                           "top-level criterion", code="fixture/targets",
                           locus="swap_criterion")
        if len(model.alternatives) < 3:
            raise FitError("a ranks-2/3 swap needs at least three alternatives",
                           code="fixture/targets", locus="swap_criterion")


def _apply_matrix(model: DecisionModel, context: str,
                  combo: Sequence[int]) -> DecisionModel:
    for (i, j), e in zip(model.required_pairs(context), combo):
        model = set_judgment(model, context, i, j, _EXPONENT_VALUE[e])
    return model


def _fit_at_theta(scaffold: DecisionModel, targets: FixtureTargets, theta: float,
                  stats: dict) -> tuple[DecisionModel, float] | None:
    """Best assembly at one theta, or None when nothing satisfies everything."""
    crit_ids = list(scaffold.criteria)
    alt_ids = list(scaffold.alternatives)
    w_target = np.array([targets.criteria_weights[c] for c in crit_ids])
    s_target = np.array([targets.alternative_scores[a] for a in alt_ids])
    tol = targets.tolerance

    crit_catalog = _ternary_catalog(len(crit_ids), theta)
    stats["criteria_candidates"] = len(crit_catalog.combos)
    if not crit_catalog.combos:
        return None
    resid = np.max(np.abs(crit_catalog.weights - w_target[None, :]), axis=1)
    best_c = int(np.argmin(resid))
    if resid[best_c] > tol:
        stats["criteria_residual"] = float(resid[best_c])
        return None
    w = crit_catalog.weights[best_c]
    stats["criteria_residual"] = float(resid[best_c])

    leaf_catalog = _ternary_catalog(len(alt_ids), theta)
    group_catalogs: dict[int, _Catalog] = {}
    branches: list[_Branch] = []
    for cid in crit_ids:
        kids = scaffold.node(cid).children
        group = None
        if kids:
            group = group_catalogs.setdefault(len(kids), _ternary_catalog(len(kids), theta))
        branches.append(_Branch(criterion=cid, leaves=kids or (cid,),
                                group=group, leaf_catalog=leaf_catalog))

    base_order = sorted(range(len(alt_ids)), key=lambda i: (-s_target[i], i))
    top = base_order[0]

    for zero_margin in _ZERO_MARGINS:
        filtered: list[_Branch] = []
        feasible = True
        for k, branch in enumerate(branches):
            mask = np.ones(len(branch.p), dtype=bool)
            if targets.rank_one_stable:
                others = [i for i in range(len(alt_ids)) if i != top]
                mask &= branch.p[:, top] >= branch.p[:, others].max(axis=1) + _RANK_ONE_MARGIN
            if targets.swap_criterion is not None:
                required = list(base_order)
                if branch.criterion == targets.swap_criterion:
                    required[1], required[2] = required[2], required[1]
                mask &= _zero_order_mask(branch.p, s_target, float(w[k]),
                                         required, zero_margin)
            kept = branch.restrict(mask)
            if kept is None:
                feasible = False
                break
            filtered.append(kept)
        if not feasible:
            continue
        stats.setdefault("branch_candidates", {}).update(
            {b.criterion: len(b.p) for b in filtered})

        picks = _optimize_picks([b.p for b in filtered], w, s_target, stats)
        achieved = sum(w[k] * filtered[k].p[picks[k]] for k in range(len(filtered)))
        if float(np.max(np.abs(achieved - s_target))) > tol:
            continue

        # assemble the actual model and verify through the real pipeline
        model = with_theta_scaffold(scaffold, theta)
        model = _apply_matrix(model, model.goal, crit_catalog.combos[best_c])
        for k, branch in enumerate(filtered):
            gi, leaf_idx = branch.picks[picks[k]]
            if gi >= 0:
                model = _apply_matrix(model, branch.criterion,
                                      branch.group.combos[gi])
            for leaf, li in zip(branch.leaves, leaf_idx):
                model = _apply_matrix(model, leaf, leaf_catalog.combos[li])
        ok, residual = _verify(model, targets)
        if ok:
            stats["zero_margin"] = zero_margin
            return model, residual
    return None


def with_theta_scaffold(scaffold: DecisionModel, theta: float) -> DecisionModel:
    """Fresh judgment-free copy of the scaffold at the requested scale."""
    return replace(scaffold, theta=float(theta), judgments={})


def _verify(model: DecisionModel, targets: FixtureTargets) -> tuple[bool, float]:
    result = synthesize(model)
    residual = _max_residual(result, targets)
    if residual > targets.tolerance:
        return False, residual
    if any(pv.cr > CR_THRESHOLD + 1e-12 for pv in result.per_context.values()):
        return False, residual
    if result.overall_inconsistency > CR_THRESHOLD:
        return False, residual
    if targets.rank_one_stable or targets.swap_criterion is not None:
        base = result.ranking()
        for rep in reversal_report(model, result):
            if targets.rank_one_stable and rep.rank_one_changes:
                return False, residual
            if targets.swap_criterion is not None:
                expected = list(base)
                if rep.criterion == targets.swap_criterion:
                    expected[1], expected[2] = expected[2], expected[1]
                if list(rep.ranking_at_zero) != expected:
                    return False, residual
    return True, residual


def _max_residual(result: SynthesisResult, targets: FixtureTargets) -> float:
    crit = max(abs(result.global_weights[c] - t)
               for c, t in targets.criteria_weights.items())
    alt = max(abs(result.alternative_scores[a] - t)
              for a, t in targets.alternative_scores.items())
    return max(crit, alt)


def fit_fixture(name: str, goal: tuple[str, str], criteria: Sequence,
                alternatives: Sequence[tuple[str, str]],
                targets: FixtureTargets) -> FitResult:
    """Search ternary judgment space for a model matching the targets.

    The criteria matrix is fitted exhaustively; each criterion branch is
    fitted by exhaustive per-branch enumeration combined through coordinate
    descent. When ``targets.theta`` is None the default scale is tried first,
    then a 0.1-step scan of (1, 9]. Raises FitError with the best residual
    found when no admissible theta works.
    """
    scaffold = build_model(name, goal, criteria, alternatives)
    _validate_targets(scaffold, targets)

    if targets.theta is not None:
        thetas = [float(targets.theta)]
    else:
        thetas = [DEFAULT_THETA] + [round(t, 2) for t in np.arange(1.1, 9.001, 0.1)
                                    if abs(t - DEFAULT_THETA) > 1e-9]
    best_residual = float("inf")
    best_theta = None
    for theta in thetas:
        stats: dict = {}
        fit = _fit_at_theta(scaffold, targets, theta, stats)
        if fit is not None:
            model, residual = fit
            return FitResult(model=model, document=serialize(model),
                             provenance=_provenance(model, targets, stats))
        achieved = stats.get("criteria_residual", float("inf"))
        if achieved < best_residual:
            best_residual = achieved
            best_theta = theta
    raise FitError(
        f"no ternary judgment assignment reaches tolerance {targets.tolerance} at any "
        f"admissible theta (best criteria residual {best_residual:.4f} at "
        f"theta={best_theta})",
        best={"residual": best_residual, "theta": best_theta})


def _provenance(model: DecisionModel, targets: FixtureTargets, stats: dict) -> dict:
    result = synthesize(model)
    reports = reversal_report(model, result)
    crit_achieved = {c: result.global_weights[c] for c in targets.criteria_weights}
    alt_achieved = {a: result.alternative_scores[a] for a in targets.alternative_scores}
    return {
        "schema": "tahp-fixture-provenance/1",
        "theta": model.theta,
        "tolerance": targets.tolerance,
        "targets": {"criteria_weights": dict(targets.criteria_weights),
                    "alternative_scores": dict(targets.alternative_scores)},
        "achieved": {"criteria_weights": crit_achieved,
                     "alternative_scores": alt_achieved,
                     "overall_inconsistency": result.overall_inconsistency},
        "residuals": {
            "criteria_weights": {c: crit_achieved[c] - t
                                 for c, t in targets.criteria_weights.items()},
            "alternative_scores": {a: alt_achieved[a] - t
                                   for a, t in targets.alternative_scores.items()},
            "max_abs": _max_residual(result, targets),
        },
        "per_context_cr": {ctx: pv.cr for ctx, pv in result.per_context.items()},
        "constraints": {
            "rank_one_stable": targets.rank_one_stable,
            "swap_criterion": targets.swap_criterion,
            "base_ranking": list(result.ranking()),
            "ranking_at_zero": {rep.criterion: list(rep.ranking_at_zero)
                                for rep in reports},
            "rank_one_changes": {rep.criterion: rep.rank_one_changes
                                 for rep in reports},
        },
        "search": stats,
    }


# -- the bundled information-security evaluation case ------------------------

def infosec_hierarchy() -> dict:
    """Hierarchy of the bundled case: four criteria, ten sub-criteria, the
    CIA alternatives.

    The published case names only Culture's two sub-criteria; the remaining
    eight carry explicit placeholder labels rather than invented ones.
    """
    return {
        "name": "infosec-evaluation",
        "goal": ("goal", "Information Security Evaluation"),
        "criteria": [
            ("culture", "Culture", [
                ("cul_edu", "Security education"),
                ("cul_reward", "Reward/punishment"),
            ]),
            ("management", "Management", [
                ("mgt_a", "Management factor A (placeholder)"),
                ("mgt_b", "Management factor B (placeholder)"),
                ("mgt_c", "Management factor C (placeholder)"),
            ]),
            ("technology", "Technology", [
                ("tech_a", "Technology factor A (placeholder)"),
                ("tech_b", "Technology factor B (placeholder)"),
                ("tech_c", "Technology factor C (placeholder)"),
            ]),
            ("economy", "Economy", [
                ("eco_a", "Economy factor A (placeholder)"),
                ("eco_b", "Economy factor B (placeholder)"),
            ]),
        ],
        "alternatives": [
            ("confidentiality", "Confidentiality"),
            ("integrity", "Integrity"),
            ("availability", "Availability"),
        ],
    }


def infosec_targets() -> FixtureTargets:
    """Published aggregates the bundled fixture reproduces."""
    return FixtureTargets(
        criteria_weights={"culture": 0.409, "management": 0.241,
                          "technology": 0.175, "economy": 0.175},
        alternative_scores={"confidentiality": 0.409, "integrity": 0.314,
                            "availability": 0.277},
        tolerance=0.005,
        theta=None,
        rank_one_stable=True,
        swap_criterion="culture",
    )


def fit_bundled_fixture() -> FitResult:
    """Run the full search for the bundled case (the dev tool entry point)."""
    return fit_fixture(targets=infosec_targets(), **infosec_hierarchy())


def load_fixture_document() -> str:
    """Raw document text of the bundled fixture."""
    return resources.files("tahp.data").joinpath("fixture.json").read_text("utf-8")


def load_fixture() -> DecisionModel:
    """The bundled fixture as a parsed model."""
    return parse(load_fixture_document())


def load_fixture_provenance() -> dict:
    """Recorded residual report emitted when the bundled fixture was fitted."""
    text = resources.files("tahp.data").joinpath("fixture_provenance.json").read_text("utf-8")
    return json.loads(text)
