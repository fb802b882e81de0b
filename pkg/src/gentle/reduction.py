"""Vertex removal and reduction to the representative presentations.

Removing a vertex ``x`` comes in two shapes:

* ``transition``: ``u -a-> x -b-> v`` with ``b a`` allowed.  The two arrows
  are spliced into one arrow ``u -> v`` which keeps the relations that ``a``
  had at ``u`` and that ``b`` had at ``v``.
* ``hanging-start``: ``x`` has degree one and is the source of ``t: x -> w``.
  The arrow and any relation through it are deleted.

Both keep the cycle number, and the invariant of the smaller presentation is
the original one with a single pair lowered by ``(1, 1)``.

A third pattern, a degree-two vertex on a cycle whose two arrows compose to
zero, is located but cannot be removed this way.

``reduce_to_normal_form`` looks for a path of elementary steps to the
representative with the same invariant.  From six vertices on it first
descends: it removes a vertex, reduces the smaller presentation, lifts each
step back, and finishes with a short search.  Small inputs, or failed
descents, fall back to breadth-first search over canonical keys.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any, Literal

from .invariant import PhiInvariant, compute_phi
from .normal_forms import InvariantTriple, build_normal_form, is_normal_form
from .quiver_core import (
    GentlePresentation,
    QuiverError,
    canonical_form,
    cycle_number,
    ensure_gentle,
    is_connected,
    presentation,
)
from .transforms import StepError, TransformStep, applicable_steps, apply_step

__all__ = [
    "DEFAULT_BUDGET",
    "ReductionError",
    "ReductionTrace",
    "RemovalSite",
    "Verdict",
    "decide_derived_equivalence",
    "find_removable_vertex",
    "reduce_to_normal_form",
    "removal_sites",
    "remove_vertex",
    "vertex_degree",
]

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 100_000
DESCENT_THRESHOLD = 6
_LIFT_DEPTH = 3
_PREFIX_BUDGET = 2_000

Pattern = Literal["transition", "hanging-start", "cycle-transition-with-relations"]


class ReductionError(QuiverError):
    def __init__(self, message: str, trace: ReductionTrace | None = None):
        super().__init__(message)
        self.trace = trace


def vertex_degree(p: GentlePresentation, v: str) -> int:
    """Arrows starting at ``v`` plus arrows ending at ``v``; loops count twice."""
    if v not in p.vertices:
        raise QuiverError(f"unknown vertex {v!r}")
    return len(p.out_arrows(v)) + len(p.in_arrows(v))


@dataclass(frozen=True)
class RemovalSite:
    vertex: str
    pattern: Pattern
    arrows: tuple[str, ...]

    @property
    def removable(self) -> bool:
        return self.pattern != "cycle-transition-with-relations"

    def __str__(self) -> str:
        return f"{self.pattern} at {self.vertex} ({', '.join(self.arrows)})"


def _on_cycle(p: GentlePresentation, a: str) -> bool:
    rest = [(b.name, b.source, b.target) for b in p.arrows if b.name != a]
    return is_connected(presentation(p.vertices, rest))


def removal_sites(p: GentlePresentation) -> list[RemovalSite]:
    sites = []
    for x in p.vertices:
        ins, outs = p.in_arrows(x), p.out_arrows(x)
        if len(ins) == 1 and len(outs) == 1:
            a, b = ins[0], outs[0]
            if a == b:
                continue
            if not p.is_relation(b, a):
                sites.append(RemovalSite(x, "transition", (a, b)))
            elif _on_cycle(p, a) and _on_cycle(p, b):
                sites.append(RemovalSite(x, "cycle-transition-with-relations", (a, b)))
        elif not ins and len(outs) == 1 and len(p.vertices) > 1:
            sites.append(RemovalSite(x, "hanging-start", (outs[0],)))
    return sites


def _fresh(p: GentlePresentation, base: str) -> str:
    name = base + "'"
    while name in p.arrow_map:
        name += "'"
    return name


def remove_vertex(p: GentlePresentation, site: RemovalSite) -> GentlePresentation:
    """The presentation with ``site.vertex`` removed."""
    p = ensure_gentle(p)
    if len(p.vertices) < 3:
        raise QuiverError("vertex removal needs at least three vertices")
    if site not in removal_sites(p):
        raise QuiverError(f"no {site.pattern} site at {site.vertex!r}")
    if not site.removable:
        raise QuiverError(f"{site.pattern} sites are not removed")
    x = site.vertex
    vertices = [v for v in p.vertices if v != x]

    if site.pattern == "hanging-start":
        (t,) = site.arrows
        arrows = [(a.name, a.source, a.target) for a in p.arrows if a.name != t]
        rels = [r for r in p.relations if t not in r]
        return ensure_gentle(presentation(vertices, arrows, rels, p.name))

    a, b = site.arrows
    spliced = _fresh(p, a)
    arrows = []
    for arr in p.arrows:
        if arr.name == a:
            arrows.append((spliced, arr.source, p.arrow(b).target))
        elif arr.name != b:
            arrows.append((arr.name, arr.source, arr.target))

    def heir(name: str) -> str:
        return spliced if name in (a, b) else name

    # relations of a at its source and of b at its target survive
    rels = [
        (heir(g), heir(f))
        for g, f in p.relations
        if not ({g, f} & {a, b}) or g == a or f == b
    ]
    return ensure_gentle(presentation(vertices, arrows, rels, p.name))


def _removable(p: GentlePresentation) -> list[RemovalSite]:
    if len(p.vertices) < 3:
        return []
    return [s for s in removal_sites(p) if s.removable]


def _can_shrink(phi: PhiInvariant) -> bool:
    # removal lowers one pair by (1, 1) and (0, 0) never occurs
    return any(n >= 1 and m >= 1 and (n, m) != (1, 1) for n, m in phi.pairs)


def _neighbours(p: GentlePresentation) -> Iterator[tuple[TransformStep, GentlePresentation]]:
    for step in applicable_steps(p):
        try:
            yield step, apply_step(p, step)
        except StepError:
            continue


def _search(
    p: GentlePresentation,
    goal,
    budget: int,
    depth: int | None = None,
) -> tuple[list[TransformStep], GentlePresentation, Any] | None:
    """Breadth-first search for a presentation on which ``goal`` is truthy."""
    hit = goal(p)
    if hit:
        return [], p, hit
    seen = {canonical_form(p)}
    queue = deque([(p, [])])
    expanded = 0
    while queue:
        cur, path = queue.popleft()
        if depth is not None and len(path) >= depth:
            continue
        expanded += 1
        if expanded > budget:
            return None
        for step, nxt in _neighbours(cur):
            key = canonical_form(nxt)
            if key in seen:
                continue
            seen.add(key)
            route = [*path, step]
            hit = goal(nxt)
            if hit:
                return route, nxt, hit
            queue.append((nxt, route))
    return None


def find_removable_vertex(
    p: GentlePresentation, budget: int = _PREFIX_BUDGET
) -> tuple[list[TransformStep], RemovalSite] | None:
    """Steps after which a removable vertex exists, and that vertex.

    Returns ``None`` when no presentation reachable from ``p`` can have one,
    which happens exactly when no pair of the invariant can drop by ``(1, 1)``.
    """
    p = ensure_gentle(p)
    if not _can_shrink(compute_phi(p)):
        return None
    found = _search(p, lambda q: next(iter(_removable(q)), None), budget)
    if found is None:
        return None
    steps, _, site = found
    return steps, site


@dataclass
class ReductionTrace:
    steps: list[TransformStep]
    final: GentlePresentation
    notes: list[str] = field(default_factory=list)
    family: int | None = None

    def replay(self, p: GentlePresentation, check_phi: bool = True) -> GentlePresentation:
        cur = ensure_gentle(p)
        phi = compute_phi(cur) if check_phi else None
        for step in self.steps:
            cur = apply_step(cur, step)
            if check_phi and compute_phi(cur) != phi:
                raise ReductionError(f"step {step} changed the invariant")
        return cur

    def to_json(self) -> dict[str, Any]:
        from .quiver_core import to_json

        return {
            "steps": [s.to_json() for s in self.steps],
            "notes": self.notes,
            "family": self.family,
            "final": to_json(self.final),
        }


def _bfs_to(p: GentlePresentation, target: str, budget: int) -> tuple[list[TransformStep], GentlePresentation] | None:
    found = _search(p, lambda q: canonical_form(q) == target, budget)
    return None if found is None else found[:2]


def _lift(
    cur: GentlePresentation, goal_key: str, budget: int
) -> tuple[list[TransformStep], GentlePresentation] | None:
    """Steps on ``cur`` to a presentation that shrinks to ``goal_key``."""

    def goal(q: GentlePresentation) -> bool:
        return any(canonical_form(remove_vertex(q, s)) == goal_key for s in _removable(q))

    found = _search(cur, goal, budget, depth=_LIFT_DEPTH)
    return None if found is None else found[:2]


def _descend(p: GentlePresentation, target: str, budget: int, notes: list[str]) -> list[TransformStep] | None:
    found = find_removable_vertex(p)
    if found is None:
        return None
    prefix, site = found
    cur = p
    for step in prefix:
        cur = apply_step(cur, step)
    smaller = remove_vertex(cur, site)
    notes.append(f"removed {site} after {len(prefix)} steps")
    try:
        sub = reduce_to_normal_form(smaller, budget)
    except ReductionError:
        return None
    steps = list(prefix)
    small = smaller
    for t in sub.steps:
        small = apply_step(small, t)
        lifted = _lift(cur, canonical_form(small), budget)
        if lifted is None:
            notes.append(f"could not lift {t}")
            return None
        more, cur = lifted
        steps.extend(more)
    notes.append(f"lifted {len(sub.steps)} steps into {len(steps) - len(prefix)}")
    tail = _bfs_to(cur, target, budget)
    if tail is None:
        return None
    notes.append(f"re-added the vertex with {len(tail[0])} steps")
    return steps + tail[0]


def reduce_to_normal_form(p: GentlePresentation, budget: int = DEFAULT_BUDGET) -> ReductionTrace:
    """Elementary steps from ``p`` to the representative of its invariant."""
    p = ensure_gentle(p)
    if cycle_number(p) != 2:
        raise ReductionError("reduction needs cycle number 2")
    phi = compute_phi(p)
    if len(phi) != 3:
        raise ReductionError(f"reduction needs three invariant pairs, got {phi}")
    nf = build_normal_form(InvariantTriple.of(phi))
    target = canonical_form(nf)
    notes: list[str] = []

    def finish(steps: list[TransformStep]) -> ReductionTrace:
        trace = ReductionTrace(steps, p, notes)
        trace.final = trace.replay(p, check_phi=False)
        match = is_normal_form(trace.final)
        trace.family = match.family if match else None
        return trace

    if canonical_form(p) == target:
        return finish([])
    if len(p.vertices) >= DESCENT_THRESHOLD:
        steps = _descend(p, target, budget, notes)
        if steps is not None:
            return finish(steps)
        notes.append("descent failed, searching directly")
    found = _bfs_to(p, target, budget)
    if found is None:
        raise ReductionError(
            f"no path to the representative of {phi} within {budget} expansions",
            ReductionTrace([], p, notes),
        )
    return finish(found[0])


@dataclass(frozen=True)
class Verdict:
    verdict: Literal["equivalent", "not-equivalent", "out-of-scope"]
    reason: str
    phi_a: PhiInvariant
    phi_b: PhiInvariant

    @property
    def exit_code(self) -> int:
        return {"equivalent": 0, "not-equivalent": 1, "out-of-scope": 2}[self.verdict]


def decide_derived_equivalence(pa: GentlePresentation, pb: GentlePresentation) -> Verdict:
    pa, pb = ensure_gentle(pa), ensure_gentle(pb)
    fa, fb = compute_phi(pa), compute_phi(pb)
    ca, cb = cycle_number(pa), cycle_number(pb)
    if fa != fb:
        return Verdict("not-equivalent", "the invariants differ", fa, fb)
    if ca == cb == 2 and len(fa) == 3:
        return Verdict("equivalent", "two cycles with three equal invariant pairs", fa, fb)
    if ca <= 1 and cb <= 1:
        return Verdict("equivalent", "at most one cycle with equal invariants", fa, fb)
    if ca == cb == 2:
        reason = "two cycles with a single invariant pair are not classified by the invariant"
    else:
        reason = f"cycle numbers {ca} and {cb} are not classified by the invariant"
    return Verdict("out-of-scope", reason, fa, fb)
