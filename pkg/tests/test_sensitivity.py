from __future__ import annotations

import numpy as np
import pytest

from tahp.errors import DegenerateInputError, StructureError
from tahp.fixture import load_fixture
from tahp.model import build_model
from tahp.sensitivity import (
    ScoreLine,
    crossovers,
    perturb_weights,
    ranking_at,
    reversal_report,
    score_lines,
    sensitivity_report,
    standing_ties,
)
from tahp.synthesis import synthesize

from conftest import fill_equal, random_model, resynthesize_scores


# -- perturb_weights ----------------------------------------------------------

def test_perturb_zeroing_redistributes_proportionally():
    base = (0.409, 0.241, 0.175, 0.175)
    out = perturb_weights(base, 0, 0.0)
    assert out[0] == 0.0
    assert out[1] == pytest.approx(0.4078, abs=5e-5)
    assert out[2] == pytest.approx(0.2961, abs=5e-5)
    assert out[3] == pytest.approx(0.2961, abs=5e-5)
    assert sum(out) == pytest.approx(1.0, abs=1e-12)


def test_perturb_fixed_point_at_base_weight():
    base = (0.409, 0.241, 0.175, 0.175)
    assert perturb_weights(base, 2, 0.175) == base


def test_perturb_full_concentration():
    assert perturb_weights((0.409, 0.241, 0.175, 0.175), 0, 1.0) == (1.0, 0.0, 0.0, 0.0)


def test_perturb_preserves_distribution(rng):
    for _ in range(20):
        w = rng.dirichlet(np.ones(int(rng.integers(2, 6))))
        k = int(rng.integers(0, len(w)))
        t = float(rng.uniform())
        out = perturb_weights(tuple(w), k, t)
        assert sum(out) == pytest.approx(1.0, abs=1e-9)
        assert out[k] == pytest.approx(t, abs=1e-12)


def test_perturb_degenerate_and_invalid_inputs():
    with pytest.raises(DegenerateInputError):
        perturb_weights((1.0,), 0, 0.5)
    assert perturb_weights((1.0,), 0, 1.0) == (1.0,)
    with pytest.raises(StructureError):
        perturb_weights((0.5, 0.6), 0, 0.5)
    with pytest.raises(StructureError):
        perturb_weights((0.5, 0.5), 2, 0.5)
    with pytest.raises(StructureError):
        perturb_weights((0.5, 0.5), 0, 1.5)


# -- score lines ---------------------------------------------------------------

def test_line_evaluates_to_base_score_at_base_weight():
    line = ScoreLine(alternative="a", criterion="c", p=0.6, rest=0.3)
    assert line.score(0.25) == pytest.approx(0.375, abs=1e-15)


def test_constant_line_when_p_equals_rest():
    line = ScoreLine(alternative="a", criterion="c", p=0.4, rest=0.4)
    for t in np.linspace(0, 1, 11):
        assert line.score(float(t)) == pytest.approx(0.4, abs=1e-15)


def test_lines_reproduce_base_scores_on_fixture():
    model = load_fixture()
    result = synthesize(model)
    for criterion in model.criteria:
        w0 = result.global_weights[criterion]
        for line in score_lines(model, result, criterion):
            assert line.score(w0) == pytest.approx(
                result.alternative_scores[line.alternative], abs=1e-10)


def test_lines_match_full_resynthesis_on_grid():
    model = load_fixture()
    result = synthesize(model)
    lines = score_lines(model, result, "culture")
    for t in np.linspace(0.0, 1.0, 11):
        oracle = resynthesize_scores(model, result, "culture", float(t))
        for line in lines:
            assert line.score(float(t)) == pytest.approx(
                oracle[line.alternative], abs=1e-10)


def test_lines_sum_to_one_for_all_t(rng):
    model = random_model(rng)
    result = synthesize(model)
    for criterion in model.criteria:
        lines = score_lines(model, result, criterion)
        for t in np.linspace(0.0, 1.0, 21):
            assert sum(line.score(float(t)) for line in lines) == pytest.approx(
                1.0, abs=1e-10)


def test_linearity_is_exact(rng):
    model = random_model(rng)
    result = synthesize(model)
    lines = score_lines(model, result, model.criteria[0])
    for _ in range(50):
        t1, t2, lam = rng.uniform(), rng.uniform(), rng.uniform()
        for line in lines:
            mixed = line.score(lam * t1 + (1 - lam) * t2)
            assert mixed == pytest.approx(
                lam * line.score(t1) + (1 - lam) * line.score(t2), abs=1e-12)


def test_score_lines_rejects_non_top_criteria():
    model = load_fixture()
    result = synthesize(model)
    with pytest.raises(StructureError):
        score_lines(model, result, "cul_edu")
    with pytest.raises(StructureError):
        score_lines(model, result, "confidentiality")


def test_single_criterion_model_is_degenerate():
    model = fill_equal(build_model("one", ("goal", "G"), [("c", "C")],
                                   [("a", "A"), ("b", "B")]))
    result = synthesize(model)
    with pytest.raises(DegenerateInputError):
        score_lines(model, result, "c")


# -- crossovers ----------------------------------------------------------------

def _line(alt: str, p: float, rest: float) -> ScoreLine:
    return ScoreLine(alternative=alt, criterion="k", p=p, rest=rest)


def test_crossover_closed_form():
    lines = [_line("a", 0.6, 0.3), _line("b", 0.2, 0.5)]
    (c,) = crossovers(lines)
    assert c.t == pytest.approx(1 / 3, abs=1e-12)
    assert lines[0].score(c.t) == pytest.approx(lines[1].score(c.t), abs=1e-12)
    assert lines[0].score(c.t) == pytest.approx(0.4, abs=1e-12)


def test_identical_lines_are_a_standing_tie_not_a_crossover():
    lines = [_line("a", 0.4, 0.2), _line("b", 0.4, 0.2)]
    assert crossovers(lines) == ()
    assert standing_ties(lines) == (("a", "b"),)


def test_parallel_lines_never_cross():
    lines = [_line("a", 0.5, 0.3), _line("b", 0.4, 0.2)]
    assert crossovers(lines) == ()


def test_crossovers_outside_unit_interval_are_dropped():
    # equal at t = 0 exactly: not strictly inside
    lines = [_line("a", 0.6, 0.3), _line("b", 0.2, 0.3)]
    assert crossovers(lines) == ()


def test_three_lines_meeting_at_one_point_are_degenerate():
    lines = [_line("a", 0.2, 0.4), _line("b", 0.3, 0.35), _line("c", 0.4, 0.3)]
    found = crossovers(lines)
    assert len(found) == 3
    assert all(c.degenerate for c in found)
    assert all(c.t == pytest.approx(1 / 3, abs=1e-12) for c in found)


def _has_exact_tie(lines, t: float) -> bool:
    scores = sorted(line.score(t) for line in lines)
    return any(b - a < 1e-12 for a, b in zip(scores, scores[1:]))


def test_crossovers_agree_with_fine_grid_scan(rng):
    # scan the open interval: at t=0/t=1 lines may tie exactly, which is a
    # boundary tie (reported as such), not an interior crossing
    for _ in range(20):
        model = random_model(rng)
        result = synthesize(model)
        criterion = model.criteria[int(rng.integers(0, len(model.criteria)))]
        lines = score_lines(model, result, criterion)
        points = crossovers(lines)
        order = tuple(model.alternatives)
        ts = np.arange(0.001, 1.0 - 1e-12, 0.001)
        previous = None
        t_prev = None
        for t in ts:
            t = float(t)
            if _has_exact_tie(lines, t):
                previous, t_prev = None, None
                continue
            current = ranking_at(lines, t, order)
            if previous is not None and current != previous:
                assert any(t_prev - 1e-12 <= c.t <= t + 1e-12 for c in points), \
                    f"rank change at {t} without a computed crossover"
            previous, t_prev = current, t


# -- segments and reports -------------------------------------------------------

def test_rank_segments_partition_unit_interval(rng):
    model = random_model(rng)
    result = synthesize(model)
    for criterion in model.criteria:
        rep = sensitivity_report(model, result, criterion)
        assert rep.rank_segments[0].lo == 0.0
        assert rep.rank_segments[-1].hi == 1.0
        for a, b in zip(rep.rank_segments, rep.rank_segments[1:]):
            assert a.hi == b.lo
            assert a.ranking != b.ranking  # ranking changes only at crossovers


def test_segments_agree_with_direct_evaluation(rng):
    model = random_model(rng)
    result = synthesize(model)
    for criterion in model.criteria:
        rep = sensitivity_report(model, result, criterion)
        order = tuple(model.alternatives)
        boundaries = {round(c.t, 9) for c in rep.crossovers}
        for t in np.arange(0.0, 1.0001, 0.01):
            t = float(min(t, 1.0))
            if any(abs(t - b) < 1e-6 for b in boundaries):
                continue  # on a crossover the ranking is changing hands
            if _has_exact_tie(rep.lines, t):
                continue  # exactly tied pairs order by declaration, not score
            assert rep.segment_at(t).ranking == ranking_at(rep.lines, t, order)


def test_report_base_ranking_contains_segment_at_base_weight():
    model = load_fixture()
    result = synthesize(model)
    rep = sensitivity_report(model, result, "culture")
    assert rep.segment_at(rep.base_weight).ranking == rep.base_ranking


def test_fixture_culture_report_swaps_ranks_two_and_three():
    model = load_fixture()
    reports = {r.criterion: r for r in reversal_report(model)}
    culture = reports["culture"]
    assert culture.base_ranking == ("confidentiality", "integrity", "availability")
    assert culture.ranking_at_zero == ("confidentiality", "availability", "integrity")
    assert culture.reversal_at_zero
    assert any({c.a, c.b} == {"integrity", "availability"} for c in culture.crossovers)
    for criterion in ("management", "technology", "economy"):
        rep = reports[criterion]
        assert rep.ranking_at_zero == rep.base_ranking
        assert not rep.reversal_at_zero
    for rep in reports.values():
        assert not rep.rank_one_changes


def test_symmetric_model_has_no_crossovers(rng):
    model = fill_equal(random_model(rng))
    for rep in reversal_report(model):
        assert rep.crossovers == ()
        assert len(rep.rank_segments) == 1
        assert rep.ranking_at_zero == rep.base_ranking
        assert rep.standing_ties  # every pair is tied
        assert not rep.rank_one_changes


def test_reversal_report_covers_every_top_criterion(rng):
    model = random_model(rng)
    reports = reversal_report(model)
    assert tuple(r.criterion for r in reports) == model.criteria
