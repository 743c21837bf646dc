"""Result export in table-text, CSV, and JSON-lines form.

Table text rounds to 3 decimals; CSV and JSON-lines keep full precision.
Output is a pure function of its inputs: no clock, no randomness.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from typing import Sequence

from .errors import StructureError
from .model import DecisionModel
from .priority import CR_THRESHOLD
from .sensitivity import SensitivityReport
from .synthesis import SynthesisResult


class ExportFormat(str, enum.Enum):
    TABLE = "table"
    CSV = "csv"
    JSON_LINES = "jsonl"


def _criteria_rows(model: DecisionModel, result: SynthesisResult) -> list[tuple[str, int]]:
    """(node id, depth) for every criteria-tree node below the goal, preorder."""
    rows: list[tuple[str, int]] = []
    stack = [(c, 0) for c in reversed(model.criteria)]
    while stack:
        nid, depth = stack.pop()
        rows.append((nid, depth))
        stack.extend((kid, depth + 1) for kid in reversed(model.node(nid).children))
    return rows


def _ranking_text(ranking: Sequence[str]) -> str:
    return " > ".join(ranking)


def _table(model: DecisionModel, result: SynthesisResult | None,
           reports: Sequence[SensitivityReport], cr_threshold: float) -> str:
    out: list[str] = []
    if result is not None:
        out.append(f"Model: {model.name}    theta={model.theta:g}    "
                   f"method={result.method.value}")
        out.append("")
        out.append("Criteria weights")
        for nid, depth in _criteria_rows(model, result):
            pad = "  " * (depth + 1)
            out.append(f"{pad}{nid:<18s} {model.label(nid):<34s} "
                       f"{result.global_weights[nid]:.3f}")
        out.append("")
        out.append("Alternative scores")
        for aid, score in result.alternative_scores.items():
            out.append(f"  {aid:<18s} {model.label(aid):<34s} {score:.3f}")
        out.append("")
        out.append("Context consistency")
        for ctx, pv in result.per_context.items():
            gate = "pass" if pv.cr <= cr_threshold else "FAIL"
            out.append(f"  {ctx:<18s} n={pv.order}  lambda_max={pv.lambda_max:.3f}  "
                       f"CI={pv.ci:.3f}  CR={pv.cr:.3f}  {gate}")
        out.append("")
        out.append(f"Overall inconsistency: {result.overall_inconsistency:.3f}")
    for rep in reports:
        if out:
            out.append("")
        out.append(f"Sensitivity: {model.label(rep.criterion)} "
                   f"(base weight {rep.base_weight:.3f})")
        if rep.crossovers:
            for c in rep.crossovers:
                mark = "  [degenerate]" if c.degenerate else ""
                out.append(f"  crossover {c.a}/{c.b} at t={c.t:.3f}{mark}")
        else:
            out.append("  no crossovers")
        for a, b in rep.standing_ties:
            out.append(f"  standing tie {a}/{b}")
        zero_note = "  (rank reversal vs base)" if rep.reversal_at_zero else ""
        out.append(f"  ranking at t=0: {_ranking_text(rep.ranking_at_zero)}{zero_note}")
        out.append("  rank segments")
        for seg in rep.rank_segments:
            out.append(f"    [{seg.lo:.3f}, {seg.hi:.3f}]  {_ranking_text(seg.ranking)}")
    return "\n".join(out) + "\n"


def _csv(model: DecisionModel, result: SynthesisResult | None,
         reports: Sequence[SensitivityReport], cr_threshold: float) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    sections = 0

    def blank() -> None:
        nonlocal sections
        if sections:
            buf.write("\n")
        sections += 1

    if result is not None:
        blank()
        writer.writerow(["criterion", "label", "level", "global_weight"])
        for nid, _ in _criteria_rows(model, result):
            node = model.node(nid)
            writer.writerow([nid, node.label, node.level.value,
                             repr(result.global_weights[nid])])
        blank()
        writer.writerow(["alternative", "label", "score"])
        for aid, score in result.alternative_scores.items():
            writer.writerow([aid, model.label(aid), repr(score)])
        blank()
        writer.writerow(["context", "order", "lambda_max", "ci", "cr", "gate"])
        for ctx, pv in result.per_context.items():
            writer.writerow([ctx, pv.order, repr(pv.lambda_max), repr(pv.ci),
                             repr(pv.cr), "pass" if pv.cr <= cr_threshold else "fail"])
        blank()
        writer.writerow(["metric", "value"])
        writer.writerow(["theta", repr(model.theta)])
        writer.writerow(["method", result.method.value])
        writer.writerow(["overall_inconsistency", repr(result.overall_inconsistency)])
    if reports:
        blank()
        writer.writerow(["criterion", "alternative_a", "alternative_b", "t", "degenerate"])
        for rep in reports:
            for c in rep.crossovers:
                writer.writerow([rep.criterion, c.a, c.b, repr(c.t),
                                 "true" if c.degenerate else "false"])
    return buf.getvalue()


def _jsonl(model: DecisionModel, result: SynthesisResult | None,
           reports: Sequence[SensitivityReport], cr_threshold: float) -> str:
    records: list[dict] = []
    if result is not None:
        records.append({"record": "summary", "model": model.name, "theta": model.theta,
                        "method": result.method.value,
                        "overall_inconsistency": result.overall_inconsistency})
        for nid, _ in _criteria_rows(model, result):
            node = model.node(nid)
            records.append({"record": "criterion_weight", "id": nid, "label": node.label,
                            "level": node.level.value,
                            "weight": result.global_weights[nid]})
        for aid, score in result.alternative_scores.items():
            records.append({"record": "alternative_score", "id": aid,
                            "label": model.label(aid), "score": score})
        for ctx, pv in result.per_context.items():
            records.append({"record": "context_consistency", "id": ctx, "order": pv.order,
                            "lambda_max": pv.lambda_max, "ci": pv.ci, "cr": pv.cr,
                            "gate": pv.cr <= cr_threshold})
    for rep in reports:
        records.append({"record": "sensitivity", "criterion": rep.criterion,
                        "base_weight": rep.base_weight,
                        "ranking_at_zero": list(rep.ranking_at_zero),
                        "reversal_at_zero": rep.reversal_at_zero,
                        "rank_one_changes": rep.rank_one_changes})
        for c in rep.crossovers:
            records.append({"record": "crossover", "criterion": rep.criterion,
                            "a": c.a, "b": c.b, "t": c.t, "degenerate": c.degenerate})
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)


def export_results(model: DecisionModel, result: SynthesisResult | None = None,
                   reports: Sequence[SensitivityReport] = (),
                   fmt: ExportFormat | str = ExportFormat.TABLE,
                   cr_threshold: float = CR_THRESHOLD) -> str:
    """Render synthesis results and/or sensitivity reports as text."""
    if result is None and not reports:
        raise StructureError("nothing to export: neither results nor reports given",
                             code="export/empty")
    fmt = ExportFormat(fmt)
    if fmt is ExportFormat.CSV:
        return _csv(model, result, reports, cr_threshold)
    if fmt is ExportFormat.JSON_LINES:
        return _jsonl(model, result, reports, cr_threshold)
    return _table(model, result, reports, cr_threshold)
