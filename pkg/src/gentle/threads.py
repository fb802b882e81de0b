"""Sign functions, permitted and forbidden threads, and the two array encodings.

Every vertex ``v`` carries two tokens ``v+`` and ``v-``.  An arrow ``a``
leaves through ``source^sigma(a)`` and, seen as part of a permitted thread,
arrives at ``target^-eps(a)``; seen as part of a forbidden thread it arrives
at ``target^eps(a)``.  Permitted threads are then the maximal chains of
tokens, and every token lies on exactly one of them.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any, Literal

from ._tokens import SignConflict, propagate_signs, token_arrays
from .quiver_core import (
    GentlePresentation,
    NotGentleError,
    QuiverError,
    ensure_gentle,
    presentation,
)

__all__ = [
    "PartitionEncoding",
    "RelationCycle",
    "SignAssignment",
    "Thread",
    "ThreadArray",
    "ThreadArrayError",
    "Token",
    "assign_signs",
    "check_signs",
    "decode_partition_encoding",
    "decode_thread_array",
    "forbidden_threads",
    "partition_encoding",
    "permitted_threads",
    "relation_cycles",
    "thread_array",
    "threads_json",
]


class ThreadArrayError(QuiverError):
    """A thread array that does not describe a gentle presentation."""


@dataclass(frozen=True, order=True)
class Token:
    vertex: str
    sign: int

    def __str__(self) -> str:
        return f"{self.vertex}{'+' if self.sign > 0 else '-'}"

    @property
    def partner(self) -> Token:
        return Token(self.vertex, -self.sign)

    @classmethod
    def parse(cls, text: str) -> Token:
        text = text.strip()
        if len(text) < 2 or text[-1] not in "+-":
            raise ThreadArrayError(f"bad token {text!r}")
        return cls(text[:-1], 1 if text[-1] == "+" else -1)


@dataclass(frozen=True)
class SignAssignment:
    sigma: dict[str, int]
    epsilon: dict[str, int]
    trivial: dict[tuple[str, str], int]

    def flipped(self, vertices: Iterable[str], p: GentlePresentation) -> SignAssignment:
        """Swap the two sides at the given vertices (a gauge transformation)."""
        flip = set(vertices)
        sigma = {a: -s if p.arrow(a).source in flip else s for a, s in self.sigma.items()}
        eps = {a: -e if p.arrow(a).target in flip else e for a, e in self.epsilon.items()}
        return _with_trivial(p, sigma, eps)


@dataclass(frozen=True)
class Thread:
    kind: Literal["permitted", "forbidden"]
    arrows: tuple[str, ...]
    start: str
    end: str
    sigma: int
    eps: int

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @property
    def anchor(self) -> str | None:
        return self.start if not self.arrows else None

    @property
    def length(self) -> int:
        return len(self.arrows)

    def to_json(self) -> dict[str, Any]:
        return {
            "arrows": list(self.arrows),
            "start": self.start,
            "end": self.end,
            "sigma": self.sigma,
            "eps": self.eps,
        }


@dataclass(frozen=True)
class RelationCycle:
    """An oriented cycle all of whose consecutive compositions are zero."""

    arrows: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)


@dataclass(frozen=True)
class ThreadArray:
    """Columns of tokens, one per permitted thread, listed from its start."""

    columns: tuple[tuple[Token, ...], ...]

    @property
    def tokens(self) -> list[Token]:
        return [t for col in self.columns for t in col]

    def __str__(self) -> str:
        return "[" + " | ".join(" ".join(map(str, c)) for c in self.columns) + "]"

    def layout(self) -> str:
        """Bracketed layout with one column per thread, read top to bottom."""
        cells = [[str(t) for t in c] for c in self.columns]
        width = max((len(x) for c in cells for x in c), default=1)
        depth = max((len(c) for c in cells), default=0)
        rows = []
        for i in range(depth):
            row = [c[i].ljust(width) if i < len(c) else " " * width for c in cells]
            rows.append("  ".join(row).rstrip())
        return "[\n" + "\n".join("  " + r for r in rows) + "\n]"

    @classmethod
    def parse(cls, text: str) -> ThreadArray:
        """Inverse of ``str``: columns separated by ``|``, tokens by spaces."""
        body = text.strip()
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
        cols = tuple(
            tuple(Token.parse(t) for t in part.split()) for part in body.split("|")
        )
        if any(not c for c in cols):
            raise ThreadArrayError("empty column")
        return cls(cols)

    def ordered(self) -> ThreadArray:
        return ThreadArray(tuple(sorted(self.columns, key=_column_key)))

    def same_threads(self, other: ThreadArray) -> bool:
        return sorted(self.columns, key=_column_key) == sorted(other.columns, key=_column_key)


@dataclass(frozen=True)
class PartitionEncoding:
    lam: tuple[int, ...]
    gamma: tuple[tuple[int, int], ...]

    def to_json(self) -> dict[str, Any]:
        return {"lambda": list(self.lam), "gamma": [list(b) for b in self.gamma]}


def _column_key(col: tuple[Token, ...]) -> tuple[int, tuple[str, ...]]:
    return (-len(col), tuple(str(t) for t in col))


# ------------------------------------------------------------------------ signs


def _with_trivial(p: GentlePresentation, sigma: dict[str, int], eps: dict[str, int]) -> SignAssignment:
    trivial: dict[tuple[str, str], int] = {}
    for v in p.vertices:
        outs, ins = p.out_arrows(v), p.in_arrows(v)
        if len(outs) + len(ins) > 2:
            continue
        gamma = outs[0] if outs else None
        beta = ins[0] if ins else None
        if gamma is not None:
            h_sign = -sigma[gamma]
            if beta is not None and not p.is_relation(gamma, beta) and h_sign != eps[beta]:
                raise NotGentleError(f"trivial thread signs disagree at {v!r}")
        elif beta is not None:
            h_sign = eps[beta]
        else:
            continue
        p_sign = -sigma[gamma] if gamma is not None else -eps[beta]
        relation = gamma is not None and beta is not None and p.is_relation(gamma, beta)
        transition = gamma is not None and beta is not None and not relation
        if not relation and (len(outs) <= 1 and len(ins) <= 1):
            trivial[(v, "permitted")] = h_sign
        if not transition and (len(outs) <= 1 and len(ins) <= 1):
            trivial[(v, "forbidden")] = p_sign
    return SignAssignment(dict(sigma), dict(eps), trivial)


def assign_signs(p: GentlePresentation) -> SignAssignment:
    """Deterministic sign functions: arrows in name order, seeds set to +1."""
    p = ensure_gentle(p)
    if len(p.vertices) < 2:
        raise QuiverError("sign functions need at least two vertices")
    try:
        sigma, eps = propagate_signs(
            [(a.name, a.source, a.target) for a in p.arrows], p.relations
        )
    except SignConflict as exc:
        raise NotGentleError(f"internal: {exc}") from None
    return _with_trivial(p, sigma, eps)


def check_signs(p: GentlePresentation, signs: SignAssignment) -> list[str]:
    """Return the sign constraints that ``signs`` breaks (empty when consistent)."""
    bad = []
    for v in p.vertices:
        outs, ins = p.out_arrows(v), p.in_arrows(v)
        if len(outs) == 2 and signs.sigma[outs[0]] == signs.sigma[outs[1]]:
            bad.append(f"outgoing arrows at {v} share a start sign")
        if len(ins) == 2 and signs.epsilon[ins[0]] == signs.epsilon[ins[1]]:
            bad.append(f"incoming arrows at {v} share an end sign")
        for f in ins:
            for g in outs:
                want = signs.epsilon[f] if p.is_relation(g, f) else -signs.epsilon[f]
                if signs.sigma[g] != want:
                    bad.append(f"sign mismatch between {f} and {g} at {v}")
    return bad


def _arrays(p: GentlePresentation, signs: SignAssignment | None) -> tuple[SignAssignment, list[int], list[int]]:
    if signs is None:
        signs = assign_signs(p)
    elif check_signs(p, signs):
        raise NotGentleError("inconsistent sign assignment: " + check_signs(p, signs)[0])
    succ, fsucc = token_arrays(
        list(p.vertices), [(a.name, a.source, a.target) for a in p.arrows], signs.sigma, signs.epsilon
    )
    return signs, succ, fsucc


def _arrow_by_start(p: GentlePresentation, signs: SignAssignment) -> dict[int, str]:
    index = {v: k for k, v in enumerate(p.vertices)}
    return {
        2 * index[a.source] + (0 if signs.sigma[a.name] > 0 else 1): a.name for a in p.arrows
    }


def _token(p: GentlePresentation, t: int) -> Token:
    return Token(p.vertices[t // 2], 1 if t % 2 == 0 else -1)


def _chains(succ: list[int]) -> list[list[int]]:
    pred = [-1] * len(succ)
    for t, s in enumerate(succ):
        if s >= 0:
            pred[s] = t
    chains = []
    for t in range(len(succ)):
        if pred[t] >= 0:
            continue
        chain = [t]
        while succ[chain[-1]] >= 0:
            chain.append(succ[chain[-1]])
        chains.append(chain)
    return chains


def _threads(p, signs, succ, kind) -> list[Thread]:
    by_start = _arrow_by_start(p, signs)
    out = []
    for chain in _chains(succ):
        if len(chain) == 1:
            tok = _token(p, chain[0])
            out.append(Thread(kind, (), tok.vertex, tok.vertex, tok.sign, tok.sign if kind == "forbidden" else -tok.sign))
            continue
        arrows = tuple(by_start[t] for t in chain[:-1])
        first, last = p.arrow(arrows[0]), p.arrow(arrows[-1])
        out.append(
            Thread(kind, arrows, first.source, last.target, signs.sigma[arrows[0]], signs.epsilon[arrows[-1]])
        )
    return out


def permitted_threads(p: GentlePresentation, signs: SignAssignment | None = None) -> list[Thread]:
    """Maximal relation-free paths plus trivial permitted threads, by start token."""
    signs, succ, _ = _arrays(p, signs)
    return _threads(p, signs, succ, "permitted")


def forbidden_threads(p: GentlePresentation, signs: SignAssignment | None = None) -> list[Thread]:
    """Maximal relation chains plus trivial forbidden threads; cycles excluded."""
    signs, _, fsucc = _arrays(p, signs)
    return _threads(p, signs, fsucc, "forbidden")


def relation_cycles(p: GentlePresentation, signs: SignAssignment | None = None) -> list[RelationCycle]:
    signs, _, fsucc = _arrays(p, signs)
    by_start = _arrow_by_start(p, signs)
    on_path = set(t for chain in _chains(fsucc) for t in chain)
    cycles = []
    for t in range(len(fsucc)):
        if t in on_path:
            continue
        cyc = [t]
        on_path.add(t)
        while fsucc[cyc[-1]] != t:
            cyc.append(fsucc[cyc[-1]])
            on_path.add(cyc[-1])
        cycles.append(RelationCycle(tuple(by_start[x] for x in cyc)))
    return cycles


# --------------------------------------------------------------------- encodings


def thread_array(p: GentlePresentation, signs: SignAssignment | None = None) -> ThreadArray:
    _, succ, _ = _arrays(p, signs)
    cols = tuple(tuple(_token(p, t) for t in chain) for chain in _chains(succ))
    return ThreadArray(cols).ordered()


def partition_encoding(p: GentlePresentation, signs: SignAssignment | None = None) -> PartitionEncoding:
    arr = thread_array(p, signs)
    lam = tuple(len(c) for c in arr.columns)
    position = {tok: i for i, tok in enumerate(arr.tokens, start=1)}
    gamma = tuple(
        sorted(tuple(sorted((position[Token(v, 1)], position[Token(v, -1)]))) for v in p.vertices)
    )
    return PartitionEncoding(lam, gamma)


def decode_thread_array(a: ThreadArray, name: str = "", *, check: bool = True) -> GentlePresentation:
    """Rebuild the presentation whose permitted threads are the columns of ``a``.

    Consecutive tokens in a column become an arrow; at a vertex an incoming
    and an outgoing arrow compose to zero exactly when they touch different
    tokens.  Arrows are named ``a1, a2, ...`` in column order.
    """
    tokens = a.tokens
    if len(set(tokens)) != len(tokens):
        raise ThreadArrayError("token repeated")
    vertices: list[str] = []
    for t in tokens:
        if t.vertex not in vertices:
            vertices.append(t.vertex)
    for v in vertices:
        if Token(v, 1) not in tokens or Token(v, -1) not in tokens:
            raise ThreadArrayError(f"vertex {v!r} is missing a token")
    arrows = []
    start_tok: dict[str, Token] = {}
    end_tok: dict[str, Token] = {}
    for col in a.columns:
        for x, y in zip(col, col[1:]):
            name_ = f"a{len(arrows) + 1}"
            arrows.append((name_, x.vertex, y.vertex))
            start_tok[name_] = x
            end_tok[name_] = y
    relations = []
    for g, gs, _ in arrows:
        for f, _, ft in arrows:
            if ft == gs and end_tok[f] != start_tok[g]:
                relations.append((g, f))
    p = presentation(vertices, arrows, relations, name)
    if not check:
        return p
    try:
        return ensure_gentle(p)
    except NotGentleError as exc:
        raise ThreadArrayError(f"array does not decode to a gentle presentation ({exc})") from None


def decode_partition_encoding(enc: PartitionEncoding, *, check: bool = True) -> GentlePresentation:
    """Columns from ``lam``, token identity from the matching ``gamma``."""
    size = sum(enc.lam)
    if sorted(x for b in enc.gamma for x in b) != list(range(1, size + 1)):
        raise ThreadArrayError("gamma is not a perfect matching of the positions")
    label: dict[int, Token] = {}
    for k, (i, j) in enumerate(sorted(enc.gamma), start=1):
        label[i] = Token(f"v{k}", 1)
        label[j] = Token(f"v{k}", -1)
    cols, pos = [], 1
    for n in enc.lam:
        cols.append(tuple(label[x] for x in range(pos, pos + n)))
        pos += n
    return decode_thread_array(ThreadArray(tuple(cols)), check=check)


def threads_json(p: GentlePresentation, signs: SignAssignment | None = None) -> dict[str, Any]:
    signs = signs or assign_signs(p)
    return {
        "permitted": [t.to_json() for t in permitted_threads(p, signs)],
        "forbidden": [t.to_json() for t in forbidden_threads(p, signs)],
        "cycles": [{"arrows": list(c.arrows)} for c in relation_cycles(p, signs)],
    }
