"""Model document serialization: a versioned, diff-stable JSON text format.

Judgments are stored symbolically ("eq"/"gt"/"lt"), so re-scaling theta never
invalidates a document. Serialization is deterministic: stable key order,
nodes in preorder, judgments in canonical pair order; two serializations of
the same model are byte-identical.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import DocumentError, JudgmentError, StructureError
from .model import (
    DecisionModel,
    HierarchyNode,
    Level,
    TernaryValue,
    set_judgment,
    validate,
)

FORMAT_VERSION = "1"


def serialize(model: DecisionModel) -> str:
    """Render a model as canonical document text."""
    nodes = []
    stack = [(model.goal, None)]
    while stack:
        nid, parent = stack.pop()
        node = model.node(nid)
        nodes.append({"id": node.id, "label": node.label,
                      "level": node.level.value, "parent": parent})
        stack.extend((kid, nid) for kid in reversed(node.children))

    judgments = []
    for ctx in model.contexts():
        for i, j in model.required_pairs(ctx):
            value = model.judgment(ctx, i, j)
            if value is not None:
                judgments.append({"context": ctx, "i": i, "j": j, "value": value.code})

    doc = {
        "format_version": FORMAT_VERSION,
        "name": model.name,
        "theta": model.theta,
        "nodes": nodes,
        "alternatives": [{"id": a, "label": model.label(a)} for a in model.alternatives],
        "judgments": judgments,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _expect(obj: Any, key: str, kind: type, locus: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(f"missing field {key!r}", code="document/missing-field",
                            locus=f"{locus}.{key}" if locus else key)
    value = obj[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise DocumentError(f"field {key!r} must be a number",
                                code="document/field-type",
                                locus=f"{locus}.{key}" if locus else key)
        return float(value)
    if not isinstance(value, kind):
        raise DocumentError(f"field {key!r} must be {kind.__name__}",
                            code="document/field-type",
                            locus=f"{locus}.{key}" if locus else key)
    return value


def parse(text: str) -> DecisionModel:
    """Parse document text into a validated model.

    Judgment sets may be incomplete (documents are also the elicitation
    scaffold); every other structural defect is a hard error with a field or
    line locus.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentError(f"not valid JSON: {err.msg}",
                            locus=f"line {err.lineno}, column {err.colno}") from err
    if not isinstance(raw, dict):
        raise DocumentError("document root must be an object", locus="(root)")

    version = _expect(raw, "format_version", str, "")
    if version != FORMAT_VERSION:
        raise DocumentError(
            f"unsupported format_version {version!r}; this build reads version "
            f"{FORMAT_VERSION!r} — re-export the model with a matching tool",
            code="document/unsupported-version", locus="format_version")

    name = _expect(raw, "name", str, "")
    theta = _expect(raw, "theta", float, "")
    if not theta > 1.0:
        raise DocumentError(f"theta must be > 1, got {theta}",
                            code="document/theta", locus="theta")

    nodes_raw = _expect(raw, "nodes", list, "")
    alts_raw = _expect(raw, "alternatives", list, "")
    judgments_raw = _expect(raw, "judgments", list, "")

    nodes: dict[str, HierarchyNode] = {}
    children: dict[str, list[str]] = {}
    goal_id: str | None = None
    levels = {lv.value: lv for lv in Level}
    for idx, entry in enumerate(nodes_raw):
        locus = f"nodes[{idx}]"
        nid = _expect(entry, "id", str, locus)
        label = _expect(entry, "label", str, locus)
        level_code = _expect(entry, "level", str, locus)
        if level_code not in levels or level_code == Level.ALTERNATIVE.value:
            raise DocumentError(f"bad level {level_code!r} for node {nid!r}",
                                code="document/level", locus=f"{locus}.level")
        parent = entry.get("parent")
        if parent is not None and not isinstance(parent, str):
            raise DocumentError("parent must be a node id or null",
                                code="document/field-type", locus=f"{locus}.parent")
        if nid in nodes:
            raise DocumentError(f"duplicate node id {nid!r}",
                                code="document/duplicate-id", locus=locus)
        nodes[nid] = HierarchyNode(nid, label, levels[level_code])
        children.setdefault(nid, [])
        if levels[level_code] is Level.GOAL:
            if goal_id is not None:
                raise DocumentError(f"second goal node {nid!r}",
                                    code="document/goal", locus=locus)
            if parent is not None:
                raise DocumentError("goal node cannot have a parent",
                                    code="document/goal", locus=f"{locus}.parent")
            goal_id = nid
        else:
            if parent is None:
                raise DocumentError(f"node {nid!r} needs a parent",
                                    code="document/orphan", locus=f"{locus}.parent")
            if parent not in nodes:
                raise DocumentError(
                    f"node {nid!r} references unknown parent {parent!r} "
                    "(parents must be declared first)",
                    code="document/unknown-parent", locus=f"{locus}.parent")
            children[parent].append(nid)
    if goal_id is None:
        raise DocumentError("no goal node declared", code="document/goal", locus="nodes")

    alternatives: list[str] = []
    for idx, entry in enumerate(alts_raw):
        locus = f"alternatives[{idx}]"
        aid = _expect(entry, "id", str, locus)
        label = _expect(entry, "label", str, locus)
        if aid in nodes:
            raise DocumentError(f"duplicate node id {aid!r}",
                                code="document/duplicate-id", locus=locus)
        nodes[aid] = HierarchyNode(aid, label, Level.ALTERNATIVE)
        alternatives.append(aid)

    nodes = {nid: HierarchyNode(n.id, n.label, n.level, tuple(children.get(nid, ())))
             for nid, n in nodes.items()}
    model = DecisionModel(name=name, theta=theta, nodes=nodes, goal=goal_id,
                          alternatives=tuple(alternatives), judgments={},
                          version=FORMAT_VERSION)

    report = validate(model)
    structural = [i for i in report.issues if i.code != "model/incomplete"]
    if structural:
        first = structural[0]
        raise DocumentError(first.message, code=first.code.replace("model/", "document/"),
                            locus=first.locus)

    for idx, entry in enumerate(judgments_raw):
        locus = f"judgments[{idx}]"
        ctx = _expect(entry, "context", str, locus)
        i = _expect(entry, "i", str, locus)
        j = _expect(entry, "j", str, locus)
        code = _expect(entry, "value", str, locus)
        try:
            value = TernaryValue.from_code(code)
        except JudgmentError as err:
            raise DocumentError(str(err), code="document/judgment-value",
                                locus=f"{locus}.value") from err
        if ctx not in nodes or nodes[ctx].level is Level.ALTERNATIVE:
            raise DocumentError(f"judgment references unknown context {ctx!r}",
                                code="document/unknown-context", locus=f"{locus}.context")
        try:
            model = set_judgment(model, ctx, i, j, value)
        except (JudgmentError, StructureError) as err:
            raise DocumentError(str(err), code="document/judgment", locus=locus) from err

    return model
