"""Exception types shared across the package.

Every error carries a machine-readable ``code`` and, where it makes sense,
a ``locus`` naming the offending node, context, field, or line.
"""

from __future__ import annotations


class TahpError(Exception):
    """Base class for all package errors."""

    default_code = "tahp/error"

    def __init__(self, message: str, *, code: str | None = None, locus: str | None = None):
        super().__init__(message)
        self.code = code or self.default_code
        self.locus = locus

    def __str__(self) -> str:
        base = super().__str__()
        if self.locus:
            return f"{base} (at {self.locus})"
        return base


class StructureError(TahpError):
    """The hierarchy itself is malformed (levels, ids, theta bound, ...)."""

    default_code = "model/structure"


class JudgmentError(TahpError):
    """A judgment refers to an invalid pair, context, or value."""

    default_code = "model/judgment"


class IncompleteModelError(TahpError):
    """A computation needs judgments that have not been elicited yet.

    ``missing`` maps context id -> tuple of (i, j) pairs still unanswered.
    """

    default_code = "model/incomplete"

    def __init__(self, message: str, *, missing: dict[str, tuple[tuple[str, str], ...]] | None = None,
                 code: str | None = None, locus: str | None = None):
        super().__init__(message, code=code, locus=locus)
        self.missing = missing or {}


class DocumentError(TahpError):
    """A model document cannot be parsed or violates the document schema."""

    default_code = "document/malformed"


class ConvergenceError(TahpError):
    """Power iteration did not converge within the iteration budget."""

    default_code = "priority/no-convergence"

    def __init__(self, message: str, *, last_iterate: tuple[float, ...] = (),
                 residual: float = float("nan"), code: str | None = None, locus: str | None = None):
        super().__init__(message, code=code, locus=locus)
        self.last_iterate = last_iterate
        self.residual = residual


class DegenerateInputError(TahpError):
    """Sensitivity analysis asked on an input with no mass to redistribute."""

    default_code = "sensitivity/degenerate"


class FitError(TahpError):
    """Fixture fitting rejected its targets or found them infeasible.

    ``best`` carries the best residual report found before giving up.
    """

    default_code = "fixture/infeasible"

    def __init__(self, message: str, *, best: dict | None = None,
                 code: str | None = None, locus: str | None = None):
        super().__init__(message, code=code, locus=locus)
        self.best = best
