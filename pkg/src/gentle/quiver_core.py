"""Quivers with relations: data model, text format, gentleness checks, isomorphism.

A presentation is a finite quiver together with a set of length-two zero
relations ``(g, f)``, read right to left: the path ``f`` then ``g`` is zero.

The text format is line oriented::

    quiver A2          # optional header
    vertex u v         # optional; once present, arrows must use declared vertices
    arrow a: u -> v
    rel g f            # g after f is zero
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from . import kernels
from ._tokens import SignConflict, propagate_signs, token_arrays

__all__ = [
    "Arrow",
    "CompositionError",
    "DSLSyntaxError",
    "GentlePresentation",
    "Isomorphism",
    "NotGentleError",
    "Quiver",
    "QuiverError",
    "ValidationReport",
    "Violation",
    "are_isomorphic",
    "canonical_form",
    "cycle_number",
    "ensure_gentle",
    "from_json",
    "is_connected",
    "opposite",
    "parse_quiver",
    "presentation",
    "rename",
    "spanning_tree_complement",
    "to_dsl",
    "to_json",
    "validate_gentle",
]


class QuiverError(ValueError):
    """Malformed quiver or relation data."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class DSLSyntaxError(QuiverError):
    """The text does not follow the quiver grammar."""


class CompositionError(QuiverError):
    """A relation ``g f`` whose arrows do not compose."""


class NotGentleError(QuiverError):
    """An operation that needs a gentle presentation received something else."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex name")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow name")
        known = set(self.vertices)
        for a in self.arrows:
            for v in (a.source, a.target):
                if v not in known:
                    raise QuiverError(f"arrow {a.name!r} uses unknown vertex {v!r}")


@dataclass(frozen=True)
class GentlePresentation:
    """A quiver with relations; ``validated`` records a passed gentleness check."""

    quiver: Quiver
    relations: tuple[tuple[str, str], ...] = ()
    validated: bool = False
    name: str = ""

    def __post_init__(self) -> None:
        if len(set(self.relations)) != len(self.relations):
            raise QuiverError("duplicate relation")
        arrows = {a.name: a for a in self.quiver.arrows}
        for g, f in self.relations:
            for x in (g, f):
                if x not in arrows:
                    raise QuiverError(f"relation uses unknown arrow {x!r}")
            if arrows[f].target != arrows[g].source:
                raise CompositionError(f"{g} {f}: target({f}) != source({g})")

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    @cached_property
    def arrow_map(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.quiver.arrows}

    @cached_property
    def relation_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.relations)

    @cached_property
    def _incidence(self) -> tuple[dict[str, list[str]], dict[str, list[str]]]:
        outs: dict[str, list[str]] = {v: [] for v in self.vertices}
        ins: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            outs[a.source].append(a.name)
            ins[a.target].append(a.name)
        return outs, ins

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrow_map[name]
        except KeyError:
            raise QuiverError(f"unknown arrow {name!r}") from None

    def out_arrows(self, v: str) -> list[str]:
        return list(self._incidence[0][v])

    def in_arrows(self, v: str) -> list[str]:
        return list(self._incidence[1][v])

    def is_relation(self, g: str, f: str) -> bool:
        return (g, f) in self.relation_set

    @cached_property
    def token_data(self) -> TokenData:
        return _token_data(self)


@dataclass(frozen=True)
class TokenData:
    """Integer token arrays of a presentation (see ``kernels``)."""

    vertices: tuple[str, ...]
    sigma: dict[str, int]
    eps: dict[str, int]
    succ: tuple[int, ...]
    fsucc: tuple[int, ...]
    start_token: dict[str, int] = field(default_factory=dict)


def _token_data(p: GentlePresentation) -> TokenData:
    triples = [(a.name, a.source, a.target) for a in p.arrows]
    try:
        sigma, eps = propagate_signs(triples, p.relations)
    except SignConflict as exc:
        raise NotGentleError(str(exc)) from None
    verts = list(p.vertices)
    succ, fsucc = token_arrays(verts, triples, sigma, eps)
    index = {v: k for k, v in enumerate(verts)}
    start = {a.name: 2 * index[a.source] + (0 if sigma[a.name] > 0 else 1) for a in p.arrows}
    return TokenData(tuple(verts), sigma, eps, tuple(succ), tuple(fsucc), start)


def presentation(
    vertices: list[str] | tuple[str, ...],
    arrows: list[tuple[str, str, str]],
    relations: list[tuple[str, str]] | tuple[tuple[str, str], ...] = (),
    name: str = "",
) -> GentlePresentation:
    """Convenience constructor from plain tuples ``(name, source, target)``."""
    q = Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))
    return GentlePresentation(q, tuple(tuple(r) for r in relations), name=name)


# --------------------------------------------------------------------------- DSL

_NAME = r"[A-Za-z0-9_][A-Za-z0-9_'.]*"
_NAME_RE = re.compile(_NAME)
_ARROW_RE = re.compile(rf"\s*({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})\s*$")


def parse_quiver(text: str) -> GentlePresentation:
    """Parse the line-oriented quiver format; gentleness is not checked."""
    name = ""
    declared: list[str] = []
    arrows: list[tuple[str, str, str, int, int]] = []
    rels: list[tuple[str, str, int, int]] = []
    saw_header = False
    statements = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        statements += 1
        col0 = len(line) - len(line.lstrip()) + 1
        keyword, _, rest = stripped.partition(" ")
        rest_col = col0 + len(keyword) + 1
        words = rest.split()

        if keyword == "quiver":
            if saw_header:
                raise DSLSyntaxError("repeated quiver header", lineno, col0)
            if len(words) != 1 or not _NAME_RE.fullmatch(words[0]):
                raise DSLSyntaxError("expected 'quiver <name>'", lineno, rest_col)
            saw_header = True
            name = words[0]
        elif keyword == "vertex":
            if not words:
                raise DSLSyntaxError("expected at least one vertex name", lineno, rest_col)
            for w in words:
                if not _NAME_RE.fullmatch(w):
                    raise DSLSyntaxError(f"bad vertex name {w!r}", lineno, col0 + line[col0 - 1:].find(w))
                if w in declared:
                    raise QuiverError(f"duplicate vertex {w!r}", lineno, col0 + line[col0 - 1:].find(w))
                declared.append(w)
        elif keyword == "arrow":
            m = _ARROW_RE.fullmatch(rest)
            if not m:
                raise DSLSyntaxError("expected 'arrow <a>: <u> -> <v>'", lineno, rest_col)
            arrows.append((m.group(1), m.group(2), m.group(3), lineno, rest_col))
        elif keyword == "rel":
            if len(words) != 2 or not all(_NAME_RE.fullmatch(w) for w in words):
                raise DSLSyntaxError("expected 'rel <g> <f>'", lineno, rest_col)
            rels.append((words[0], words[1], lineno, rest_col))
        else:
            raise DSLSyntaxError(f"unknown statement {keyword!r}", lineno, col0)

    if statements == 0:
        raise DSLSyntaxError("empty document", 1, 1)

    strict = bool(declared)
    vertices = list(declared)
    seen = set(vertices)
    arrow_at: dict[str, tuple[str, str]] = {}
    for a, u, v, lineno, col in arrows:
        if a in arrow_at:
            raise QuiverError(f"duplicate arrow {a!r}", lineno, col)
        for x in (u, v):
            if x not in seen:
                if strict:
                    raise QuiverError(f"arrow {a!r} uses undeclared vertex {x!r}", lineno, col)
                seen.add(x)
                vertices.append(x)
        arrow_at[a] = (u, v)

    pairs: list[tuple[str, str]] = []
    for g, f, lineno, col in rels:
        for x in (g, f):
            if x not in arrow_at:
                raise QuiverError(f"relation uses unknown arrow {x!r}", lineno, col)
        if arrow_at[f][1] != arrow_at[g][0]:
            raise CompositionError(f"{g} {f}: target({f}) != source({g})", lineno, col)
        if (g, f) in pairs:
            raise QuiverError(f"duplicate relation {g} {f}", lineno, col)
        pairs.append((g, f))

    return presentation(vertices, [(a, u, v) for a, u, v, _, _ in arrows], pairs, name)


def to_dsl(p: GentlePresentation) -> str:
    """Serialize with names in lexicographic order."""
    lines = []
    if p.name:
        lines.append(f"quiver {p.name}")
    lines.append("vertex " + " ".join(sorted(p.vertices)))
    for a in sorted(p.arrows, key=lambda a: a.name):
        lines.append(f"arrow {a.name}: {a.source} -> {a.target}")
    for g, f in sorted(p.relations):
        lines.append(f"rel {g} {f}")
    return "\n".join(lines) + "\n"


def to_json(p: GentlePresentation) -> dict[str, Any]:
    return {
        "vertices": sorted(p.vertices),
        "arrows": [
            {"name": a.name, "source": a.source, "target": a.target}
            for a in sorted(p.arrows, key=lambda a: a.name)
        ],
        "relations": [list(r) for r in sorted(p.relations)],
    }


def from_json(data: dict[str, Any] | str) -> GentlePresentation:
    if isinstance(data, str):
        data = json.loads(data)
    return presentation(
        data["vertices"],
        [(a["name"], a["source"], a["target"]) for a in data["arrows"]],
        [tuple(r) for r in data.get("relations", [])],
    )


# -------------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    condition: int | str
    site: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set[int | str]:
        return {v.condition for v in self.violations}


def is_connected(q: Quiver | GentlePresentation) -> bool:
    if isinstance(q, GentlePresentation):
        q = q.quiver
    if not q.vertices:
        return False
    adj: dict[str, set[str]] = {v: set() for v in q.vertices}
    for a in q.arrows:
        adj[a.source].add(a.target)
        adj[a.target].add(a.source)
    seen = {q.vertices[0]}
    queue = deque(seen)
    while queue:
        for w in adj[queue.popleft()]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(q.vertices)


def check_degrees(p: GentlePresentation) -> list[Violation]:
    out = []
    for v in p.vertices:
        if len(p.out_arrows(v)) > 2:
            out.append(Violation(1, f"vertex {v} has {len(p.out_arrows(v))} outgoing arrows"))
        if len(p.in_arrows(v)) > 2:
            out.append(Violation(1, f"vertex {v} has {len(p.in_arrows(v))} incoming arrows"))
    return out


def check_unique_continuation(p: GentlePresentation) -> list[Violation]:
    out = []
    for b in p.arrows:
        before = [a for a in p.in_arrows(b.source) if not p.is_relation(b.name, a)]
        after = [g for g in p.out_arrows(b.target) if not p.is_relation(g, b.name)]
        if len(before) > 1:
            out.append(Violation(2, f"arrow {b.name} has {len(before)} non-zero predecessors"))
        if len(after) > 1:
            out.append(Violation(2, f"arrow {b.name} has {len(after)} non-zero successors"))
    return out


def check_finite_dimensional(p: GentlePresentation) -> list[Violation]:
    """Kahn's algorithm on the graph of non-zero compositions between arrows."""
    succ: dict[str, list[str]] = {a.name: [] for a in p.arrows}
    indeg = dict.fromkeys(succ, 0)
    for b in p.arrows:
        for g in p.out_arrows(b.target):
            if not p.is_relation(g, b.name):
                succ[b.name].append(g)
                indeg[g] += 1
    queue = deque(a for a, d in indeg.items() if d == 0)
    removed = 0
    while queue:
        a = queue.popleft()
        removed += 1
        for g in succ[a]:
            indeg[g] -= 1
            if indeg[g] == 0:
                queue.append(g)
    if removed == len(succ):
        return []
    on_cycle = sorted(a for a, d in indeg.items() if d > 0)
    return [Violation(3, "oriented cycle without relations through " + ", ".join(on_cycle))]


def check_unique_relation(p: GentlePresentation) -> list[Violation]:
    out = []
    for b in p.arrows:
        before = [a for a in p.in_arrows(b.source) if p.is_relation(b.name, a)]
        after = [g for g in p.out_arrows(b.target) if p.is_relation(g, b.name)]
        if len(before) > 1:
            out.append(Violation(5, f"arrow {b.name} has {len(before)} zero predecessors"))
        if len(after) > 1:
            out.append(Violation(5, f"arrow {b.name} has {len(after)} zero successors"))
    return out


CONDITION_CHECKS = {
    1: check_degrees,
    2: check_unique_continuation,
    3: check_finite_dimensional,
    5: check_unique_relation,
}


def validate_gentle(p: GentlePresentation) -> ValidationReport:
    """Connectivity plus the local gentleness conditions.

    Relations are stored as composable length-two pairs, so the monomial
    condition (number 4) holds by construction and has no checker.
    """
    violations: list[Violation] = []
    if not is_connected(p):
        violations.append(Violation("disconnected", "quiver is not connected"))
    for check in CONDITION_CHECKS.values():
        violations.extend(check(p))
    return ValidationReport(tuple(violations))


def ensure_gentle(p: GentlePresentation) -> GentlePresentation:
    """Return ``p`` marked validated, or raise ``NotGentleError``."""
    if p.validated:
        return p
    report = validate_gentle(p)
    if not report.ok:
        v = report.violations[0]
        raise NotGentleError(f"condition {v.condition}: {v.site}")
    return GentlePresentation(p.quiver, p.relations, True, p.name)


def cycle_number(q: Quiver | GentlePresentation) -> int:
    if isinstance(q, GentlePresentation):
        q = q.quiver
    if not is_connected(q):
        raise QuiverError("cycle number needs a connected quiver")
    return len(q.arrows) - len(q.vertices) + 1


def spanning_tree_complement(q: Quiver | GentlePresentation) -> list[str]:
    """Arrows outside a breadth-first spanning tree; removing them leaves a tree."""
    if isinstance(q, GentlePresentation):
        q = q.quiver
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        adj[a.source].append((a.name, a.target))
        adj[a.target].append((a.name, a.source))
    seen = {q.vertices[0]}
    tree: set[str] = set()
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for name, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(name)
                queue.append(w)
    return [a.name for a in q.arrows if a.name not in tree]


# -------------------------------------------------------------- transformations


def rename(
    p: GentlePresentation,
    vertex_map: dict[str, str] | None = None,
    arrow_map: dict[str, str] | None = None,
) -> GentlePresentation:
    vm = vertex_map or {}
    am = arrow_map or {}
    return presentation(
        [vm.get(v, v) for v in p.vertices],
        [(am.get(a.name, a.name), vm.get(a.source, a.source), vm.get(a.target, a.target)) for a in p.arrows],
        [(am.get(g, g), am.get(f, f)) for g, f in p.relations],
        p.name,
    )


def opposite(p: GentlePresentation) -> GentlePresentation:
    """Reverse every arrow; relation ``g f`` becomes ``f g``."""
    return presentation(
        p.vertices,
        [(a.name, a.target, a.source) for a in p.arrows],
        [(f, g) for g, f in p.relations],
        p.name,
    )


# ------------------------------------------------------------------ isomorphism


def canonical_form(p: GentlePresentation) -> str:
    """Isomorphism-invariant key.

    Each presentation is encoded by its permitted-successor map on vertex
    tokens; the key is the least breadth-first labelling code over all start
    tokens, which is a complete invariant for connected gentle presentations.
    """
    td = p.token_data
    code, _ = kernels.canonical_code(td.succ)
    return f"{len(p.vertices)}:" + ",".join(map(str, code))


@dataclass(frozen=True)
class Isomorphism:
    vertex_map: dict[str, str]
    arrow_map: dict[str, str]


def are_isomorphic(
    p1: GentlePresentation, p2: GentlePresentation
) -> tuple[bool, Isomorphism | None]:
    if (len(p1.vertices), len(p1.arrows), len(p1.relations)) != (
        len(p2.vertices), len(p2.arrows), len(p2.relations)
    ):
        return False, None
    t1, t2 = p1.token_data, p2.token_data
    c1, s1 = kernels.canonical_code(t1.succ)
    c2, s2 = kernels.canonical_code(t2.succ)
    if c1 != c2:
        return False, None
    o1 = kernels.traversal_order(s1, t1.succ)
    o2 = kernels.traversal_order(s2, t2.succ)
    token_map = dict(zip(o1, o2))
    vmap = {t1.vertices[a // 2]: t2.vertices[b // 2] for a, b in token_map.items()}
    by_start = {t: name for name, t in t2.start_token.items()}
    amap = {name: by_start[token_map[t]] for name, t in t1.start_token.items()}
    return True, Isomorphism(vmap, amap)
