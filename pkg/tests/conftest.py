"""Shared builders: ternary matrices, random hierarchies, tiny models."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from tahp.model import (
    ComparisonMatrix,
    DecisionModel,
    TernaryValue,
    build_model,
    set_judgment,
)

VALUES = (TernaryValue.EQUAL, TernaryValue.MORE_IMPORTANT, TernaryValue.LESS_IMPORTANT)


def make_matrix(n: int, combo, theta: float = 3.0, context: str = "ctx") -> ComparisonMatrix:
    """ComparisonMatrix from upper-triangle exponents (0 -> 1, 1 -> theta, -1 -> 1/theta)."""
    th = Fraction(theta)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    assert len(combo) == len(pairs)
    entries = [[Fraction(1)] * n for _ in range(n)]
    for (i, j), e in zip(pairs, combo):
        entries[i][j] = th ** e
        entries[j][i] = th ** (-e)
    return ComparisonMatrix(context=context,
                            members=tuple(f"m{k}" for k in range(n)),
                            entries=tuple(tuple(row) for row in entries))


def random_combo(rng: np.random.Generator, n: int) -> tuple[int, ...]:
    return tuple(int(rng.integers(-1, 2)) for _ in range(n * (n - 1) // 2))


def random_ternary_matrix(rng: np.random.Generator, n: int,
                          theta: float = 3.0) -> ComparisonMatrix:
    return make_matrix(n, random_combo(rng, n), theta)


def is_consistent(matrix: ComparisonMatrix) -> bool:
    """Exact cardinal consistency: a_ij * a_jk == a_ik for all triples."""
    e = matrix.entries
    n = len(e)
    return all(e[i][j] * e[j][k] == e[i][k]
               for i in range(n) for j in range(n) for k in range(n))


def fill_random(model: DecisionModel, rng: np.random.Generator) -> DecisionModel:
    for ctx in model.contexts():
        for i, j in model.required_pairs(ctx):
            model = set_judgment(model, ctx, i, j, VALUES[int(rng.integers(0, 3))])
    return model


def fill_equal(model: DecisionModel) -> DecisionModel:
    for ctx in model.contexts():
        for i, j in model.required_pairs(ctx):
            model = set_judgment(model, ctx, i, j, TernaryValue.EQUAL)
    return model


def random_model(rng: np.random.Generator, theta: float = 3.0,
                 max_branch: int = 5, min_criteria: int = 2) -> DecisionModel:
    """Random judged hierarchy: depth <= 3, branching <= max_branch."""
    criteria = []
    for c in range(int(rng.integers(min_criteria, max_branch + 1))):
        kids = []
        if rng.random() < 0.5:
            kids = [(f"c{c}s{s}", f"C{c} sub {s}")
                    for s in range(int(rng.integers(1, max_branch + 1)))]
        criteria.append((f"c{c}", f"Criterion {c}", kids))
    alts = [(f"a{k}", f"Alt {k}") for k in range(int(rng.integers(2, 6)))]
    model = build_model("random", ("goal", "Goal"), criteria, alts, theta=theta)
    return fill_random(model, rng)


def two_level_model(n_criteria: int = 2, n_alternatives: int = 2,
                    theta: float = 3.0) -> DecisionModel:
    """Flat model: goal -> criteria -> shared alternatives, no judgments."""
    return build_model(
        "flat", ("goal", "Goal"),
        [(f"c{k}", f"Criterion {k}") for k in range(n_criteria)],
        [(f"a{k}", f"Alt {k}") for k in range(n_alternatives)],
        theta=theta)


def resynthesize_scores(model: DecisionModel, result, criterion: str,
                        t: float) -> dict[str, float]:
    """Brute-force oracle: rescale leaf weights and redo the weighted sum.

    Independent of the score-line algebra: leaves inside the perturbed
    criterion's branch get weight t * (g / w0), the rest g * (1-t) / (1-w0).
    """
    w0 = result.global_weights[criterion]
    in_branch = set(model.subtree_leaves(criterion))
    scores = {a: 0.0 for a in model.alternatives}
    for leaf in model.criteria_leaves():
        g = result.global_weights[leaf]
        g = t * (g / w0) if leaf in in_branch else g * (1.0 - t) / (1.0 - w0)
        for a, w in zip(model.alternatives, result.per_context[leaf].weights):
            scores[a] += g * w
    return scores


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
