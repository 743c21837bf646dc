"""Decision hierarchy, ternary judgment scale, and comparison-matrix assembly.

A decision model is a four-level tree (goal, criteria, optional sub-criteria,
alternatives) plus a set of ternary pairwise judgments. Alternatives are a
single shared ordered set referenced by every leaf of the criteria tree, not
duplicated subtrees. Models are immutable from the caller's perspective:
mutating operations return a new model.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import IncompleteModelError, JudgmentError, StructureError

DEFAULT_THETA = 3.0


class TernaryValue(enum.Enum):
    """One of the three judgment grades: equal, more important, less important.

    The enum value doubles as the wire code used in model documents. The
    numeric realization under a scale parameter theta is exactly one of
    {1, theta, 1/theta}.
    """

    EQUAL = "eq"
    MORE_IMPORTANT = "gt"
    LESS_IMPORTANT = "lt"

    @property
    def code(self) -> str:
        return self.value

    @classmethod
    def from_code(cls, code: str) -> "TernaryValue":
        try:
            return cls(code)
        except ValueError:
            raise JudgmentError(
                f"unknown judgment value {code!r}; expected one of 'eq', 'gt', 'lt'",
                code="model/judgment-value",
            ) from None

    def reciprocal(self) -> "TernaryValue":
        if self is TernaryValue.MORE_IMPORTANT:
            return TernaryValue.LESS_IMPORTANT
        if self is TernaryValue.LESS_IMPORTANT:
            return TernaryValue.MORE_IMPORTANT
        return TernaryValue.EQUAL

    def realize(self, theta: float) -> Fraction:
        """Numeric matrix entry for this grade, as an exact rational."""
        scale = Fraction(theta)
        if self is TernaryValue.MORE_IMPORTANT:
            return scale
        if self is TernaryValue.LESS_IMPORTANT:
            return 1 / scale
        return Fraction(1)


class Level(enum.Enum):
    GOAL = "goal"
    CRITERION = "criterion"
    SUBCRITERION = "subcriterion"
    ALTERNATIVE = "alternative"


#: Allowed child level per parent level within the criteria tree.
_CHILD_LEVEL = {Level.GOAL: Level.CRITERION, Level.CRITERION: Level.SUBCRITERION}


@dataclass(frozen=True)
class HierarchyNode:
    id: str
    label: str
    level: Level
    children: tuple[str, ...] = ()


@dataclass(frozen=True)
class ComparisonMatrix:
    """Positive reciprocal matrix over one comparison context.

    Entries are exact rationals so that ``a[i][j] * a[j][i] == 1`` holds
    exactly, independent of how theta rounds in binary floating point.
    """

    context: str
    members: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries], dtype=float)


@dataclass(frozen=True)
class DecisionModel:
    """The hierarchy plus all judgment sets and the theta scale parameter.

    ``judgments`` stores both orientations of every answered pair, keyed by
    (context id, row id, column id); the diagonal is implicit.
    """

    name: str
    theta: float
    nodes: Mapping[str, HierarchyNode]
    goal: str
    alternatives: tuple[str, ...]
    judgments: Mapping[tuple[str, str, str], TernaryValue] = field(default_factory=dict)
    version: str = "1"

    # -- structure queries ------------------------------------------------

    def node(self, node_id: str) -> HierarchyNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise StructureError(f"unknown node {node_id!r}", code="model/unknown-node",
                                 locus=node_id) from None

    def label(self, node_id: str) -> str:
        return self.node(node_id).label

    @property
    def criteria(self) -> tuple[str, ...]:
        """Top-level criteria, i.e. the goal's children."""
        return self.node(self.goal).children

    def contexts(self) -> tuple[str, ...]:
        """Every comparison context id, in preorder over the criteria tree.

        Each criteria-tree node is exactly one context: a node with children
        compares those children, a leaf compares the shared alternatives.
        """
        out: list[str] = []
        stack = [self.goal]
        while stack:
            nid = stack.pop()
            out.append(nid)
            stack.extend(reversed(self.node(nid).children))
        return tuple(out)

    def criteria_leaves(self) -> tuple[str, ...]:
        """Criteria-tree leaves, i.e. the contexts that compare alternatives."""
        return tuple(c for c in self.contexts() if not self.node(c).children)

    def context_members(self, context: str) -> tuple[str, ...]:
        node = self.node(context)
        if node.level is Level.ALTERNATIVE:
            raise JudgmentError(f"{context!r} is an alternative, not a comparison context",
                                code="model/unknown-context", locus=context)
        return node.children if node.children else self.alternatives

    def subtree_leaves(self, node_id: str) -> tuple[str, ...]:
        """Criteria-tree leaves at or below ``node_id``, in preorder."""
        out: list[str] = []
        stack = [node_id]
        while stack:
            nid = stack.pop()
            kids = self.node(nid).children
            if kids:
                stack.extend(reversed(kids))
            else:
                out.append(nid)
        return tuple(out)

    # -- judgment queries -------------------------------------------------

    def required_pairs(self, context: str) -> tuple[tuple[str, str], ...]:
        members = self.context_members(context)
        return tuple((members[i], members[j])
                     for i in range(len(members)) for j in range(i + 1, len(members)))

    def judgment(self, context: str, i: str, j: str) -> TernaryValue | None:
        return self.judgments.get((context, i, j))

    def missing_pairs(self, context: str) -> tuple[tuple[str, str], ...]:
        return tuple((i, j) for i, j in self.required_pairs(context)
                     if (context, i, j) not in self.judgments)

    def is_complete(self, context: str | None = None) -> bool:
        if context is not None:
            return not self.missing_pairs(context)
        return all(not self.missing_pairs(c) for c in self.contexts())


def _coerce_nodes(items: Iterable) -> list[tuple[str, str, list]]:
    """Accept (id, label) or (id, label, children) tuples."""
    out = []
    for item in items:
        if len(item) == 2:
            nid, label = item
            kids: list = []
        elif len(item) == 3:
            nid, label, kids = item
        else:
            raise StructureError(f"expected (id, label[, children]), got {item!r}")
        out.append((str(nid), str(label), list(kids)))
    return out


def build_model(name: str,
                goal: tuple[str, str],
                criteria: Sequence,
                alternatives: Sequence[tuple[str, str]],
                theta: float = DEFAULT_THETA,
                version: str = "1") -> DecisionModel:
    """Build a validated model with empty judgment sets.

    ``goal`` and ``alternatives`` entries are (id, label) pairs; ``criteria``
    entries are (id, label) or (id, label, [(id, label), ...]) with one
    optional layer of sub-criteria.
    """
    theta = float(theta)
    if not theta > 1.0:
        raise StructureError(f"theta must be > 1, got {theta}", code="model/theta")
    crit_items = _coerce_nodes(criteria)
    alt_items = _coerce_nodes(alternatives)
    if len(crit_items) < 1:
        raise StructureError("at least one criterion is required", code="model/criteria")
    if len(alt_items) < 2:
        raise StructureError("at least two alternatives are required", code="model/alternatives")

    goal_id, goal_label = str(goal[0]), str(goal[1])
    nodes: dict[str, HierarchyNode] = {}

    def add(node: HierarchyNode) -> None:
        if node.id in nodes:
            raise StructureError(f"duplicate node id {node.id!r}",
                                 code="model/duplicate-id", locus=node.id)
        nodes[node.id] = node

    add(HierarchyNode(goal_id, goal_label, Level.GOAL,
                      tuple(cid for cid, _, _ in crit_items)))
    for cid, clabel, kids in crit_items:
        sub = _coerce_nodes(kids)
        add(HierarchyNode(cid, clabel, Level.CRITERION, tuple(sid for sid, _, _ in sub)))
        for sid, slabel, grandkids in sub:
            if grandkids:
                raise StructureError(f"sub-criterion {sid!r} cannot have children",
                                     code="model/depth", locus=sid)
            add(HierarchyNode(sid, slabel, Level.SUBCRITERION))
    for aid, alabel, kids in alt_items:
        if kids:
            raise StructureError(f"alternative {aid!r} cannot have children",
                                 code="model/depth", locus=aid)
        add(HierarchyNode(aid, alabel, Level.ALTERNATIVE))

    return DecisionModel(name=name, theta=theta, nodes=nodes, goal=goal_id,
                         alternatives=tuple(aid for aid, _, _ in alt_items),
                         judgments={}, version=version)


def set_judgment(model: DecisionModel, context: str, i: str, j: str,
                 value: TernaryValue | str) -> DecisionModel:
    """Store a judgment and its reciprocal; returns the updated model.

    Overwrites any prior judgment for the pair; re-setting the same value is
    a no-op in terms of model state.
    """
    if isinstance(value, str):
        value = TernaryValue.from_code(value)
    if i == j:
        raise JudgmentError(f"self-comparison {i!r} vs itself (diagonal is implicit)",
                            code="model/self-judgment", locus=f"{context}:{i}")
    members = model.context_members(context)
    for nid in (i, j):
        if nid not in members:
            raise JudgmentError(f"node {nid!r} is not a member of context {context!r}",
                                code="model/pair-membership", locus=f"{context}:{nid}")
    judgments = dict(model.judgments)
    judgments[(context, i, j)] = value
    judgments[(context, j, i)] = value.reciprocal()
    return replace(model, judgments=judgments)


def with_theta(model: DecisionModel, theta: float) -> DecisionModel:
    """Re-scale the model; judgments are symbolic so nothing else changes."""
    theta = float(theta)
    if not theta > 1.0:
        raise StructureError(f"theta must be > 1, got {theta}", code="model/theta")
    return replace(model, theta=theta)


def matrix_for(model: DecisionModel, context: str) -> ComparisonMatrix:
    """Assemble the full reciprocal matrix for one context.

    Raises IncompleteModelError naming the missing pairs if any judgment
    is absent.
    """
    members = model.context_members(context)
    missing = model.missing_pairs(context)
    if missing:
        names = ", ".join(f"({i}, {j})" for i, j in missing)
        raise IncompleteModelError(
            f"context {context!r} is missing judgments for: {names}",
            missing={context: missing}, locus=context)
    one = Fraction(1)
    n = len(members)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            if a == b:
                row.append(one)
            else:
                key = (context, members[a], members[b])
                row.append(model.judgments[key].realize(model.theta))
        rows.append(tuple(row))
    return ComparisonMatrix(context=context, members=members, entries=tuple(rows))


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    locus: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.message} (at {self.locus})"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues

    def by_code(self, code: str) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.code == code)

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(i) for i in self.issues)


def validate(model: DecisionModel) -> ValidationReport:
    """Structural sweep over an arbitrary model value; always returns a report.

    An empty report means the model is solvable: the tree is well-formed,
    theta is in range, and every context has a complete judgment set.
    """
    issues: list[ValidationIssue] = []

    def issue(code: str, message: str, locus: str) -> None:
        issues.append(ValidationIssue(code, message, locus))

    if not model.theta > 1.0:
        issue("model/theta", f"theta must be > 1, got {model.theta}", "theta")

    goal = model.nodes.get(model.goal)
    if goal is None or goal.level is not Level.GOAL:
        issue("model/goal", f"goal node {model.goal!r} missing or mislabeled", model.goal)
        return ValidationReport(tuple(issues))
    extra_goals = [n.id for n in model.nodes.values() if n.level is Level.GOAL and n.id != model.goal]
    for nid in extra_goals:
        issue("model/goal", f"extra goal node {nid!r}", nid)

    if len(model.alternatives) < 2:
        issue("model/alternatives",
              f"need at least two alternatives, got {len(model.alternatives)}", model.goal)
    for aid in model.alternatives:
        alt = model.nodes.get(aid)
        if alt is None:
            issue("model/unknown-node", f"alternative {aid!r} not in node table", aid)
        elif alt.level is not Level.ALTERNATIVE or alt.children:
            issue("model/level", f"alternative {aid!r} mislabeled or has children", aid)

    # walk the criteria tree, checking level descent and cycles
    seen: set[str] = set()
    stack: list[str] = [model.goal]
    order_ok = True
    while stack:
        nid = stack.pop()
        if nid in seen:
            issue("model/cycle", f"node {nid!r} reached twice (cycle or shared child)", nid)
            order_ok = False
            continue
        seen.add(nid)
        node = model.nodes.get(nid)
        if node is None:
            issue("model/unknown-node", f"child reference {nid!r} not in node table", nid)
            continue
        want_child = _CHILD_LEVEL.get(node.level)
        for kid in node.children:
            child = model.nodes.get(kid)
            if child is None:
                issue("model/unknown-node", f"child reference {kid!r} not in node table", kid)
                continue
            if want_child is None or child.level is not want_child:
                issue("model/level",
                      f"{node.level.value} node {nid!r} cannot have "
                      f"{child.level.value} child {kid!r}", kid)
            stack.append(kid)
    orphans = [n.id for n in model.nodes.values()
               if n.id not in seen and n.level is not Level.ALTERNATIVE]
    for nid in orphans:
        issue("model/orphan", f"node {nid!r} is not reachable from the goal", nid)

    # judgment sweep: membership, reciprocity, completeness; only meaningful
    # once the tree itself is sound
    tree_codes = {"model/level", "model/cycle", "model/unknown-node",
                  "model/orphan", "model/goal"}
    tree_sound = order_ok and not any(i.code in tree_codes for i in issues)
    if tree_sound:
        contexts = set(model.contexts())
        for (ctx, i, j), value in model.judgments.items():
            if ctx not in contexts:
                issue("model/unknown-context", f"judgment stored for unknown context {ctx!r}", ctx)
                continue
            members = model.context_members(ctx)
            if i == j or i not in members or j not in members:
                issue("model/pair-membership",
                      f"judgment ({i!r}, {j!r}) invalid for context {ctx!r}", f"{ctx}:{i}:{j}")
                continue
            mirror = model.judgments.get((ctx, j, i))
            if mirror is None or mirror is not value.reciprocal():
                issue("model/reciprocity",
                      f"judgment ({i!r}, {j!r}) lacks a consistent reciprocal", f"{ctx}:{i}:{j}")
        for ctx in model.contexts():
            missing = model.missing_pairs(ctx)
            if missing:
                names = ", ".join(f"({i}, {j})" for i, j in missing)
                issue("model/incomplete",
                      f"context {ctx!r} is missing {len(missing)} judgment(s): {names}", ctx)

    return ValidationReport(tuple(issues))
