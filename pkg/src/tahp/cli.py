"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 I/O or parse error,
3 computational failure (non-convergence, degenerate input, infeasible fit).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import NoReturn

import click

from . import fixture as fixture_mod
from .document import parse, serialize
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
from .export import ExportFormat, export_results
from .model import build_model, validate, with_theta
from .priority import CR_THRESHOLD, Method, passes_gate
from .sensitivity import reversal_report, sensitivity_report
from .synthesis import synthesize

EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_COMPUTE = 3


def _exit_code(err: Exception) -> int:
    if isinstance(err, (DocumentError, OSError)):
        return EXIT_IO
    if isinstance(err, (ConvergenceError, DegenerateInputError, FitError)):
        return EXIT_COMPUTE
    if isinstance(err, (StructureError, JudgmentError, IncompleteModelError, TahpError)):
        return EXIT_VALIDATION
    return EXIT_COMPUTE


def _fail(err: Exception) -> NoReturn:
    click.echo(f"error: {err}", err=True)
    sys.exit(_exit_code(err))


def _load_model(path: str, theta: float | None):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        _fail(err)
    try:
        model = parse(text)
        if theta is not None:
            model = with_theta(model, theta)
    except TahpError as err:
        _fail(err)
    return model


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


_format_option = click.option(
    "--format", "fmt", type=click.Choice([f.value for f in ExportFormat]),
    default=ExportFormat.TABLE.value, show_default=True, help="Output format.")
_method_option = click.option(
    "--method", type=click.Choice([m.value for m in Method]),
    default=Method.EIGENVECTOR.value, show_default=True,
    help="Prioritization method.")
_theta_option = click.option(
    "--theta", type=float, default=None,
    help="Override the document's scale parameter.")
_threshold_option = click.option(
    "--cr-threshold", type=float, default=CR_THRESHOLD, show_default=True,
    help="Consistency-ratio gate used for warnings.")


@click.group()
def main() -> None:
    """Ternary AHP decision analysis: ternary pairwise judgments, eigenvector
    priorities with consistency gating, hierarchical synthesis, and
    weight-perturbation sensitivity."""


def _parse_spec(text: str) -> tuple[str, str]:
    nid, sep, label = text.partition("=")
    if not sep or not nid or not label:
        raise click.BadParameter(f"expected id=Label, got {text!r}")
    return nid.strip(), label.strip()


@main.command()
@click.option("--name", required=True, help="Model name.")
@click.option("--goal", required=True, help="Goal as id=Label.")
@click.option("--criterion", "criteria", multiple=True, required=True,
              help="Criterion as id=Label or id=Label/sub=Label,sub2=Label.")
@click.option("--alternative", "alternatives", multiple=True, required=True,
              help="Alternative as id=Label (give at least two).")
@click.option("--theta", type=float, default=3.0, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
              help="Write the document here instead of stdout.")
def new(name: str, goal: str, criteria: tuple[str, ...],
        alternatives: tuple[str, ...], theta: float, output: str | None) -> None:
    """Scaffold an empty-judgment model document from a hierarchy outline."""
    crit_specs = []
    for item in criteria:
        head, sep, subs = item.partition("/")
        cid, clabel = _parse_spec(head)
        kids = [_parse_spec(s) for s in subs.split(",")] if sep and subs else []
        crit_specs.append((cid, clabel, kids))
    try:
        model = build_model(name, _parse_spec(goal), crit_specs,
                            [_parse_spec(a) for a in alternatives], theta=theta)
        _emit(serialize(model), output)
    except TahpError as err:
        _fail(err)


@main.command("validate")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=False, dir_okay=False), help="Model document.")
@_theta_option
def validate_cmd(model_path: str, theta: float | None) -> None:
    """Check a model document; exit 1 when it is not solvable."""
    model = _load_model(model_path, theta)
    report = validate(model)
    if report.ok:
        click.echo("ok")
        return
    click.echo(str(report), err=True)
    sys.exit(EXIT_VALIDATION)


def _solve(model, method: str):
    try:
        return synthesize(model, method=method)
    except TahpError as err:
        _fail(err)


def _gate_warnings(result, cr_threshold: float) -> None:
    for ctx, pv in result.per_context.items():
        if not passes_gate(pv, cr_threshold):
            click.echo(f"warning: context {ctx!r} CR={pv.cr:.3f} exceeds the "
                       f"{cr_threshold:g} gate; judgments should be reviewed", err=True)


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=False, dir_okay=False), help="Model document.")
@_format_option
@_method_option
@_theta_option
@_threshold_option
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
def solve(model_path: str, fmt: str, method: str, theta: float | None,
          cr_threshold: float, output: str | None) -> None:
    """Synthesize the model and print criteria weights, scores, and CRs."""
    model = _load_model(model_path, theta)
    result = _solve(model, method)
    _gate_warnings(result, cr_threshold)
    _emit(export_results(model, result, fmt=fmt, cr_threshold=cr_threshold), output)


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=False, dir_okay=False), help="Model document.")
@click.option("--criterion", default=None,
              help="Single top-level criterion (default: all).")
@_format_option
@_method_option
@_theta_option
@_threshold_option
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
def sensitivity(model_path: str, criterion: str | None, fmt: str, method: str,
                theta: float | None, cr_threshold: float, output: str | None) -> None:
    """Per-criterion what-if report: score lines, crossovers, rank segments."""
    model = _load_model(model_path, theta)
    result = _solve(model, method)
    try:
        if criterion is None:
            reports = reversal_report(model, result)
        else:
            reports = (sensitivity_report(model, result, criterion),)
    except TahpError as err:
        _fail(err)
    _emit(export_results(model, result, reports=reports, fmt=fmt,
                         cr_threshold=cr_threshold), output)


@main.command("fit-fixture")
@click.option("--output", "-o", type=click.Path(dir_okay=False),
              default="fixture.json", show_default=True)
@click.option("--provenance", type=click.Path(dir_okay=False),
              default="fixture_provenance.json", show_default=True)
@click.option("--theta", type=float, default=None,
              help="Fix the scale parameter instead of searching.")
def fit_fixture_cmd(output: str, provenance: str, theta: float | None) -> None:
    """Search ternary judgments reproducing the bundled case's aggregates.

    Dev tool: regenerates the bundled fixture document plus its residual
    report.
    """
    targets = fixture_mod.infosec_targets()
    if theta is not None:
        targets = fixture_mod.FixtureTargets(
            criteria_weights=targets.criteria_weights,
            alternative_scores=targets.alternative_scores,
            tolerance=targets.tolerance, theta=theta,
            rank_one_stable=targets.rank_one_stable,
            swap_criterion=targets.swap_criterion)
    try:
        fit = fixture_mod.fit_fixture(targets=targets, **fixture_mod.infosec_hierarchy())
    except TahpError as err:
        _fail(err)
    Path(output).write_text(fit.document, encoding="utf-8")
    Path(provenance).write_text(json.dumps(fit.provenance, indent=2) + "\n",
                                encoding="utf-8")
    res = fit.provenance["residuals"]["max_abs"]
    click.echo(f"fixture written to {output} (theta={fit.model.theta:g}, "
               f"max residual {res:.5f}); provenance in {provenance}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--model", "model_path", type=click.Path(dir_okay=False), default=None,
              help="Preload a session from this document at startup.")
@click.option("--fixture", "use_fixture", is_flag=True,
              help="Preload a session with the bundled evaluation fixture.")
@click.option("--ui-dir", type=click.Path(file_okay=False), default=None,
              help="Serve a built UI bundle from this directory at /.")
@click.option("--snapshot-dir", type=click.Path(file_okay=False), default=None,
              help="Default directory for session save snapshots.")
@_threshold_option
def serve(host: str, port: int, model_path: str | None, use_fixture: bool,
          ui_dir: str | None, snapshot_dir: str | None, cr_threshold: float) -> None:
    """Run the HTTP service (and optionally the static UI)."""
    import uvicorn

    from .service import create_app, preload_session

    app = create_app(snapshot_dir=snapshot_dir, ui_dir=ui_dir,
                     cr_threshold=cr_threshold)
    if use_fixture:
        sid = preload_session(app, fixture_mod.load_fixture())
        click.echo(f"fixture session: {sid}")
    if model_path:
        model = _load_model(model_path, None)
        sid = preload_session(app, model)
        click.echo(f"session for {model.name!r}: {sid}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
