"""Ternary AHP decision analysis.

Hierarchical multicriteria evaluation with a three-grade judgment scale:
pairwise judgments in {equal, more important, less important} realized as
{1, theta, 1/theta}, eigenvector priority derivation with consistency
gating, four-level hierarchical synthesis, and weight-perturbation
sensitivity analysis with exact rank-crossover detection.
"""

from .errors import (
    ConvergenceError,
    DegenerateInputError,
    DocumentError,
    FitError,
    IncompleteModelError,
    JudgmentError,
    StructureError,
    TahpError,
)
from .model import (
    DEFAULT_THETA,
    ComparisonMatrix,
    DecisionModel,
    HierarchyNode,
    Level,
    TernaryValue,
    ValidationIssue,
    ValidationReport,
    build_model,
    matrix_for,
    set_judgment,
    validate,
    with_theta,
)
from .priority import (
    CR_THRESHOLD,
    SAATY_RANDOM_INDEX,
    Method,
    PriorityVector,
    consistency_ratio,
    geometric_mean_priorities,
    passes_gate,
    principal_eigenvector,
    priorities,
)
from .synthesis import (
    SynthesisResult,
    alternative_scores,
    global_weights,
    local_priorities,
    overall_inconsistency,
    synthesize,
)
from .sensitivity import (
    Crossover,
    RankSegment,
    ScoreLine,
    SensitivityReport,
    crossovers,
    perturb_weights,
    rank_segments,
    reversal_report,
    score_lines,
    sensitivity_report,
    standing_ties,
)
from .document import FORMAT_VERSION, parse, serialize
from .export import ExportFormat, export_results
from .fixture import (
    FitResult,
    FixtureTargets,
    fit_fixture,
    infosec_hierarchy,
    infosec_targets,
    load_fixture,
    load_fixture_document,
    load_fixture_provenance,
)

__version__ = "0.1.0"
