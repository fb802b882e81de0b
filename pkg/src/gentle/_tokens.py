"""Sign propagation and integer token arrays for a quiver with relations.

At every vertex the incidences (arrow starts and arrow ends) split into two
sides, the tokens ``v+`` and ``v-``.  Two arrows leaving ``v`` sit on
opposite sides, as do two arrows entering ``v``.  An arrow ``f`` entering
and ``g`` leaving ``v`` sit on the same side exactly when ``g f`` is not a
relation.  In sign language: ``sigma(g) = -eps(f)`` for a non-relation and
``sigma(g) = eps(f)`` for a relation.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable


class SignConflict(RuntimeError):
    """The sign constraints are unsatisfiable (the input is not gentle)."""


def propagate_signs(
    arrows: Iterable[tuple[str, str, str]],
    relations: Iterable[tuple[str, str]],
) -> tuple[dict[str, int], dict[str, int]]:
    """Return ``(sigma, eps)`` seeded with +1 in arrow-name order."""
    arrows = list(arrows)
    rels = set(relations)
    out_at: dict[str, list[str]] = {}
    in_at: dict[str, list[str]] = {}
    for name, src, tgt in arrows:
        out_at.setdefault(src, []).append(name)
        in_at.setdefault(tgt, []).append(name)

    # Constraint graph on ("s", arrow) / ("e", arrow); weight -1 means opposite.
    edges: dict[tuple[str, str], list[tuple[tuple[str, str], int]]] = {}

    def link(x: tuple[str, str], y: tuple[str, str], w: int) -> None:
        edges.setdefault(x, []).append((y, w))
        edges.setdefault(y, []).append((x, w))

    vertices = set(out_at) | set(in_at)
    for v in vertices:
        outs = out_at.get(v, [])
        ins = in_at.get(v, [])
        for i, a in enumerate(outs):
            for b in outs[i + 1:]:
                link(("s", a), ("s", b), -1)
        for i, a in enumerate(ins):
            for b in ins[i + 1:]:
                link(("e", a), ("e", b), -1)
        for f in ins:
            for g in outs:
                link(("s", g), ("e", f), 1 if (g, f) in rels else -1)

    value: dict[tuple[str, str], int] = {}
    for name in sorted(a[0] for a in arrows):
        for node in (("s", name), ("e", name)):
            if node in value:
                continue
            value[node] = 1
            queue = deque([node])
            while queue:
                x = queue.popleft()
                for y, w in edges.get(x, ()):
                    want = value[x] * w
                    if y not in value:
                        value[y] = want
                        queue.append(y)
                    elif value[y] != want:
                        raise SignConflict(f"sign constraints conflict at {y[1]!r}")
    sigma = {name: value[("s", name)] for name, _, _ in arrows}
    eps = {name: value[("e", name)] for name, _, _ in arrows}
    return sigma, eps


def token_arrays(
    vertices: list[str],
    arrows: Iterable[tuple[str, str, str]],
    sigma: dict[str, int],
    eps: dict[str, int],
) -> tuple[list[int], list[int]]:
    """Permitted and forbidden successor arrays over tokens ``2k``/``2k+1``."""
    index = {v: k for k, v in enumerate(vertices)}

    def tok(v: str, sign: int) -> int:
        return 2 * index[v] + (0 if sign > 0 else 1)

    size = 2 * len(vertices)
    succ = [-1] * size
    fsucc = [-1] * size
    for name, src, tgt in arrows:
        start = tok(src, sigma[name])
        succ[start] = tok(tgt, -eps[name])
        fsucc[start] = tok(tgt, eps[name])
    return succ, fsucc
