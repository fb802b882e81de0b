"""Elementary transformations and their token-move counterparts.

Two independent engines live here.

* The quiver engine rewrites arrows and relations around a vertex (``V``),
  a non-loop arrow (``F``) or a loop (``L``).  New arrows inherit the
  relation slots of the arrows they replace at the far ends, so relations
  away from the site travel with them.
* The token engine relocates single signed-vertex tokens inside the thread
  array.  A forward move takes token ``u`` whose successor is ``w^d`` and
  reinserts it right after ``w^-d``; the inverse move takes ``u`` whose
  predecessor is ``w^d`` and reinserts it right before ``w^-d``.

Inverse transformations are conjugates by the opposite quiver.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Any, Literal

from .quiver_core import (
    GentlePresentation,
    QuiverError,
    ensure_gentle,
    opposite,
    presentation,
)
from .threads import ThreadArray, Token, decode_thread_array, thread_array

__all__ = [
    "MoveSpec",
    "StepError",
    "TransformStep",
    "applicable_steps",
    "apply_inverse",
    "apply_step",
    "apply_step_renamed",
    "apply_step_tokens",
    "arrow_transform",
    "invert",
    "loop_transform",
    "move_thread",
    "parse_move",
    "step_moves",
    "vertex_transform",
]

Kind = Literal["vertex", "arrow", "loop"]
_LETTER = {"vertex": "V", "arrow": "F", "loop": "L"}
_KIND = {v: k for k, v in _LETTER.items()}


class StepError(QuiverError):
    """A transformation or move whose local pattern is absent."""


@dataclass(frozen=True)
class TransformStep:
    kind: Kind
    site: str
    inverse: bool = False

    def __str__(self) -> str:
        return f"{_LETTER[self.kind]}{'-' if self.inverse else ''} {self.site}"

    @classmethod
    def parse(cls, text: str) -> TransformStep:
        m = re.fullmatch(r"\s*([VFL])(-?)\s+(\S+)\s*", text)
        if not m:
            raise StepError(f"cannot parse step {text!r}")
        return cls(_KIND[m.group(1)], m.group(3), bool(m.group(2)))

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "direction": "inverse" if self.inverse else "forward",
            "site": self.site,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> TransformStep:
        return cls(data["kind"], data["site"], data["direction"] == "inverse")


@dataclass(frozen=True)
class MoveSpec:
    token: Token
    direction: Literal["forward", "inverse"] = "forward"

    def __str__(self) -> str:
        return f"m{'' if self.direction == 'forward' else '-'} {self.token}"


# ------------------------------------------------------------------ rewriting


@dataclass(frozen=True)
class _New:
    key: str
    name_from: str
    source: str
    target: str
    start_from: str | None = None
    end_from: str | None = None


def _rewrite(
    p: GentlePresentation,
    removed: list[str],
    new: list[_New],
    removed_rels: set[tuple[str, str]],
    new_rels: list[tuple[str, str]],
) -> tuple[GentlePresentation, dict[str, str]]:
    gone = set(removed)
    taken = {a.name for a in p.arrows if a.name not in gone}
    names: dict[str, str] = {}
    for n in new:
        nm = n.name_from + "'"
        while nm in taken:
            nm += "'"
        taken.add(nm)
        names[n.key] = nm
    start_heir = {n.start_from: names[n.key] for n in new if n.start_from}
    end_heir = {n.end_from: names[n.key] for n in new if n.end_from}

    rels: dict[tuple[str, str], None] = {}
    for g, f in p.relations:
        if (g, f) in removed_rels:
            continue
        g2 = start_heir.get(g) if g in gone else g
        f2 = end_heir.get(f) if f in gone else f
        if g2 and f2:
            rels[(g2, f2)] = None
    for gk, fk in new_rels:
        if gk in names and fk in names:
            rels[(names[gk], names[fk])] = None

    by_origin: dict[str, list[_New]] = {}
    for n in new:
        by_origin.setdefault(n.name_from, []).append(n)
    arrows: list[tuple[str, str, str]] = []
    for a in p.arrows:
        if a.name in gone:
            arrows.extend((names[n.key], n.source, n.target) for n in by_origin.pop(a.name, []))
        else:
            arrows.append((a.name, a.source, a.target))
    for rest in by_origin.values():
        arrows.extend((names[n.key], n.source, n.target) for n in rest)

    q = presentation(p.vertices, arrows, list(rels), p.name)
    renames = {n.name_from: names[n.key] for n in new}
    return q, renames


def _zero_successor(p: GentlePresentation, a: str) -> str | None:
    """The arrow ``g`` with ``g a`` a relation, if any."""
    for g in p.out_arrows(p.arrow(a).target):
        if p.is_relation(g, a):
            return g
    return None


def _zero_predecessor(p: GentlePresentation, a: str) -> str | None:
    """The arrow ``f`` with ``a f`` a relation, if any."""
    for f in p.in_arrows(p.arrow(a).source):
        if p.is_relation(a, f):
            return f
    return None


def _present(*names: str | None) -> list[str]:
    return [n for n in names if n is not None]


# ----------------------------------------------------------- vertex transform


def _vertex_pair(p: GentlePresentation, i: str) -> tuple[str, str]:
    if i not in p.vertices:
        raise StepError(f"unknown vertex {i!r}")
    outs = sorted(p.out_arrows(i))
    if len(outs) != 2:
        raise StepError(f"vertex {i} needs two outgoing arrows")
    if any(p.arrow(a).target == i for a in outs):
        raise StepError(f"vertex {i} has an outgoing loop")
    return outs[0], outs[1]


def _vertex_rewrite(p: GentlePresentation, i: str) -> tuple[GentlePresentation, dict[str, str]]:
    a = list(_vertex_pair(p, i))
    sig = [_zero_successor(p, x) for x in a]
    ends_at_i = [s is not None and p.arrow(s).target == i for s in sig]
    if all(ends_at_i):
        return p, {}
    if ends_at_i[1]:
        a.reverse()
        sig.reverse()
    pi = [_zero_predecessor(p, x) for x in a]
    j = [p.arrow(x).target for x in a]
    a1, a2 = a
    s1, s2 = sig
    p1, p2 = pi

    def src(x: str | None) -> str:
        return p.arrow(x).source

    def tgt(x: str | None) -> str:
        return p.arrow(x).target

    new: list[_New] = []
    if not any(ends_at_i):
        for m in (0, 1):
            new.append(_New(f"a{m}", a[m], j[m], i, start_from=sig[m]))
            other = pi[1 - m]
            if other is not None:
                new.append(_New(f"p{m}", other, src(other), j[m], start_from=other, end_from=a[m]))
            if sig[m] is not None:
                new.append(_New(f"s{m}", sig[m], i, tgt(sig[m]), end_from=sig[m]))
        removed = _present(a1, a2, p1, p2, s1, s2)
        removed_rels = {(s1, a1), (s2, a2), (a1, p1), (a2, p2)}
        new_rels = [("s0", "a1"), ("s1", "a0"), ("a0", "p0"), ("a1", "p1")]
        return _rewrite(p, removed, new, removed_rels, new_rels)

    if s1 == p1:
        # the first arrow and its zero successor form a two-cycle of relations
        new.append(_New("a0", a1, j[0], i, start_from=p1))
        new.append(_New("a1", a2, j[1], i, start_from=s2))
        new.append(_New("p1", p1, i, j[1], end_from=a2))
        if p2 is not None:
            new.append(_New("p0", p2, src(p2), j[0], start_from=p2, end_from=a1))
        if s2 is not None:
            new.append(_New("s1", s2, i, tgt(s2), end_from=s2))
        removed = _present(a1, a2, p1, p2, s2)
        removed_rels = {(p1, a1), (s2, a2), (a1, p1), (a2, p2)}
        new_rels = [("p1", "a1"), ("s1", "a0"), ("a0", "p0"), ("a1", "p1")]
        return _rewrite(p, removed, new, removed_rels, new_rels)

    if s1 != p2:
        raise StepError(f"vertex {i}: relations do not match a known local pattern")
    new.append(_New("a0", p2, j[0], i, start_from=p2))
    new.append(_New("p0", a1, i, j[0], end_from=a1))
    new.append(_New("a1", a2, j[1], i, start_from=s2))
    if p1 is not None:
        new.append(_New("p1", p1, src(p1), j[1], start_from=p1, end_from=a2))
    if s2 is not None:
        new.append(_New("s1", s2, i, tgt(s2), end_from=s2))
    removed = _present(a1, a2, p1, p2, s2)
    removed_rels = {(p2, a1), (s2, a2), (a1, p1), (a2, p2)}
    new_rels = [("p0", "a1"), ("s1", "a0"), ("a0", "p0"), ("a1", "p1")]
    return _rewrite(p, removed, new, removed_rels, new_rels)


def vertex_transform(p: GentlePresentation, i: str) -> GentlePresentation:
    return apply_step(p, TransformStep("vertex", i))


# ------------------------------------------------------------ arrow transform


def _components(p: GentlePresentation, skip: set[str]) -> dict[str, int]:
    adj: dict[str, list[str]] = {v: [] for v in p.vertices}
    for a in p.arrows:
        if a.name not in skip:
            adj[a.source].append(a.target)
            adj[a.target].append(a.source)
    comp: dict[str, int] = {}
    for v in p.vertices:
        if v in comp:
            continue
        comp[v] = len(comp)
        label = comp[v]
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in comp:
                    comp[y] = label
                    queue.append(y)
    return comp


def _arrow_local(p: GentlePresentation, delta: str):
    d = p.arrow(delta)
    if d.is_loop:
        raise StepError(f"arrow {delta} is a loop")
    i, j = d.source, d.target
    beta = _zero_predecessor(p, delta)
    others = [g for g in p.out_arrows(i) if g != delta]
    gamma = others[0] if others else None
    # the incoming arrow that composes non-trivially with delta
    rest = [f for f in p.in_arrows(i) if f != beta]
    lam = rest[0] if rest else None
    xi = _zero_successor(p, delta)
    comp = _components(p, set(_present(beta, gamma)))
    ends = _present(p.arrow(beta).source if beta else None, p.arrow(gamma).target if gamma else None)
    if any(comp[v] == comp[i] for v in ends):
        raise StepError(f"arrow {delta}: the split components meet")
    return i, j, beta, gamma, lam, xi


def _arrow_rewrite(p: GentlePresentation, delta: str) -> tuple[GentlePresentation, dict[str, str]]:
    i, j, beta, gamma, lam, xi = _arrow_local(p, delta)
    if xi is not None and xi == lam:
        return p, {}
    new = [_New("d", delta, j, i, start_from=xi)]
    if beta:
        new.append(_New("b", beta, p.arrow(beta).source, i, start_from=beta))
    if gamma:
        new.append(_New("g", gamma, i, p.arrow(gamma).target, end_from=gamma))
    if lam:
        new.append(_New("l", lam, p.arrow(lam).source, j, start_from=lam, end_from=delta))
    if xi:
        new.append(_New("x", xi, i, p.arrow(xi).target, end_from=xi))
    removed = _present(delta, beta, gamma, lam, xi)
    removed_rels = {(delta, beta), (gamma, lam), (xi, delta)}
    new_rels = [("g", "d"), ("x", "b"), ("d", "l")]
    return _rewrite(p, removed, new, removed_rels, new_rels)


def arrow_transform(p: GentlePresentation, delta: str) -> GentlePresentation:
    return apply_step(p, TransformStep("arrow", delta))


# ------------------------------------------------------------- loop transform


def _loop_local(p: GentlePresentation, lam: str):
    loop = p.arrow(lam)
    if not loop.is_loop:
        raise StepError(f"arrow {lam} is not a loop")
    i = loop.source
    others = [g for g in p.out_arrows(i) if g != lam]
    if len(others) != 1 or p.arrow(others[0]).is_loop:
        raise StepError(f"loop {lam} needs exactly one other outgoing arrow at {i}")
    delta = others[0]
    ins = [f for f in p.in_arrows(i) if f != lam]
    alpha = ins[0] if ins else None
    xi = _zero_successor(p, delta)
    return i, delta, alpha, xi


def _loop_rewrite(p: GentlePresentation, lam: str) -> tuple[GentlePresentation, dict[str, str]]:
    i, delta, alpha, xi = _loop_local(p, lam)
    if xi is not None and xi == alpha:
        return p, {}
    j = p.arrow(delta).target
    new = [_New("d", delta, j, i, start_from=xi)]
    if alpha:
        new.append(_New("a", alpha, p.arrow(alpha).source, j, start_from=alpha, end_from=delta))
    if xi:
        new.append(_New("x", xi, i, p.arrow(xi).target, end_from=xi))
    removed = _present(alpha, delta, xi)
    removed_rels = {(delta, alpha), (xi, delta)}
    new_rels = [("d", "a"), ("x", "d")]
    return _rewrite(p, removed, new, removed_rels, new_rels)


def loop_transform(p: GentlePresentation, lam: str) -> GentlePresentation:
    return apply_step(p, TransformStep("loop", lam))


# ------------------------------------------------------------------- dispatch

_REWRITE = {"vertex": _vertex_rewrite, "arrow": _arrow_rewrite, "loop": _loop_rewrite}


def _check_site(p: GentlePresentation, step: TransformStep) -> None:
    if step.kind == "vertex":
        if step.site not in p.vertices:
            raise StepError(f"unknown vertex {step.site!r}")
    elif step.site not in p.arrow_map:
        raise StepError(f"unknown arrow {step.site!r}")


def apply_step_renamed(
    p: GentlePresentation, step: TransformStep
) -> tuple[GentlePresentation, dict[str, str]]:
    """Apply ``step`` and report how replaced arrows were renamed."""
    p = ensure_gentle(p)
    _check_site(p, step)
    rewrite = _REWRITE[step.kind]
    if step.inverse:
        q, renames = rewrite(opposite(p), step.site)
        q = opposite(q)
    else:
        q, renames = rewrite(p, step.site)
    try:
        return ensure_gentle(q), renames
    except QuiverError as exc:
        raise StepError(f"internal: {step} produced a non-gentle result ({exc})") from None


def apply_step(p: GentlePresentation, step: TransformStep) -> GentlePresentation:
    return apply_step_renamed(p, step)[0]


def invert(step: TransformStep, renames: dict[str, str] | None = None) -> TransformStep:
    """The step that undoes ``step``; arrow sites follow ``renames``."""
    site = step.site
    if step.kind != "vertex" and renames:
        site = renames.get(site, site)
    return TransformStep(step.kind, site, not step.inverse)


def apply_inverse(p: GentlePresentation, step: TransformStep) -> GentlePresentation:
    """Undo ``step``, given as it was applied; ``p`` is its result."""
    return apply_step(p, TransformStep(step.kind, step.site, not step.inverse))


def _applicable(p: GentlePresentation, kind: Kind, site: str) -> bool:
    try:
        if kind == "vertex":
            _vertex_pair(p, site)
        elif kind == "arrow":
            _arrow_local(p, site)
        else:
            _loop_local(p, site)
    except StepError:
        return False
    return True


def applicable_steps(p: GentlePresentation) -> list[TransformStep]:
    """Every forward and inverse step whose local pattern is present."""
    p = ensure_gentle(p)
    op = opposite(p)
    steps = []
    for inverse, q in ((False, p), (True, op)):
        for v in sorted(q.vertices):
            if _applicable(q, "vertex", v):
                steps.append(TransformStep("vertex", v, inverse))
        for a in sorted(x.name for x in q.arrows):
            kind: Kind = "loop" if q.arrow(a).is_loop else "arrow"
            if _applicable(q, kind, a):
                steps.append(TransformStep(kind, a, inverse))
    return steps


# --------------------------------------------------------------- token engine


def _locate(cols: list[list[Token]], t: Token) -> tuple[int, int]:
    for c, col in enumerate(cols):
        for k, x in enumerate(col):
            if x == t:
                return c, k
    raise StepError(f"token {t} not in the array")


def move_thread(a: ThreadArray, spec: MoveSpec) -> ThreadArray:
    cols = [list(c) for c in a.columns]
    c, k = _locate(cols, spec.token)
    col = cols[c]
    if spec.direction == "forward":
        if k + 1 >= len(col):
            raise StepError(f"token {spec.token} has no successor")
        w = col[k + 1]
    else:
        if k == 0:
            raise StepError(f"token {spec.token} has no predecessor")
        w = col[k - 1]
    if w.vertex == spec.token.vertex:
        raise StepError(f"token {spec.token} is followed by its own vertex")
    del col[k]
    c2, k2 = _locate(cols, w.partner)
    cols[c2].insert(k2 + 1 if spec.direction == "forward" else k2, spec.token)
    return ThreadArray(tuple(tuple(x) for x in cols if x))


_MOVE_RE = re.compile(r"\s*m\s+(\S+[+-])\s+(after|before)\s+(\S+[+-])\s*")


def parse_move(text: str, a: ThreadArray) -> MoveSpec:
    """``m u+ after w-`` or ``m u+ before w+``; the anchor must match the array."""
    m = _MOVE_RE.fullmatch(text)
    if not m:
        raise StepError(f"cannot parse move {text!r}")
    token, where, anchor = Token.parse(m.group(1)), m.group(2), Token.parse(m.group(3))
    spec = MoveSpec(token, "forward" if where == "after" else "inverse")
    c, k = _locate([list(x) for x in a.columns], token)
    col = a.columns[c]
    near = k + 1 if spec.direction == "forward" else k - 1
    if not 0 <= near < len(col) or col[near].partner != anchor:
        raise StepError(f"{token} cannot be moved {where} {anchor} in this array")
    return spec


def step_moves(p: GentlePresentation, step: TransformStep) -> list[MoveSpec]:
    """Token moves that realize ``step`` on the thread array of ``p``."""
    p = ensure_gentle(p)
    td = p.token_data
    verts = td.vertices

    def tok(t: int) -> Token:
        return Token(verts[t // 2], 1 if t % 2 == 0 else -1)

    def start(a: str) -> Token:
        return tok(td.start_token[a])

    def end(a: str) -> Token:
        return tok(td.succ[td.start_token[a]])

    q = opposite(p) if step.inverse else p
    direction: Literal["forward", "inverse"] = "inverse" if step.inverse else "forward"
    # arrows leaving a vertex of the opposite quiver start at their end tokens in p
    first, last = (end, start) if step.inverse else (start, end)
    if step.kind == "vertex":
        a1, a2 = _vertex_pair(q, step.site)
        return [MoveSpec(first(a2), direction), MoveSpec(first(a1), direction)]
    if step.kind == "arrow":
        _arrow_local(q, step.site)
        return [MoveSpec(first(step.site), direction)]
    _loop_local(q, step.site)
    return [MoveSpec(last(step.site), direction), MoveSpec(first(step.site), direction)]


def apply_step_tokens(p: GentlePresentation, step: TransformStep) -> GentlePresentation:
    """Realize ``step`` by token moves and decode the resulting array."""
    arr = thread_array(p)
    for spec in step_moves(p, step):
        arr = move_thread(arr, spec)
    return decode_thread_array(arr, p.name)
