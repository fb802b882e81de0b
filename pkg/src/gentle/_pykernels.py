"""Pure-Python token kernels.

A presentation is reduced to ``2n`` integer tokens: vertex ``k`` owns tokens
``2k`` and ``2k + 1`` (partners, ``t ^ 1``).  ``succ[t]`` is the token that
follows ``t`` in its permitted thread (or ``-1``); ``fsucc`` is the same for
forbidden threads.  The compiled module ``_ckernels`` mirrors this file
function for function.
"""

from __future__ import annotations

from collections.abc import Sequence


def _code_from(start: int, succ: Sequence[int], pred: Sequence[int]) -> list[int]:
    size = len(succ)
    label = [-1] * size
    order = [start]
    label[start] = 0
    i = 0
    while i < len(order):
        t = order[i]
        i += 1
        for nb in (succ[t], pred[t], t ^ 1):
            if nb >= 0 and label[nb] < 0:
                label[nb] = len(order)
                order.append(nb)
    code = []
    for t in order:
        s = succ[t]
        code.append(label[s] if s >= 0 else -1)
        code.append(label[t ^ 1])
    return code


def canonical_code(succ: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Lexicographically least traversal code over all start tokens.

    Returns the code and the start token that realizes it.
    """
    size = len(succ)
    pred = [-1] * size
    for t, s in enumerate(succ):
        if s >= 0:
            pred[s] = t
    best: list[int] | None = None
    best_start = -1
    for start in range(size):
        code = _code_from(start, succ, pred)
        if best is None or code < best:
            best = code
            best_start = start
    return tuple(best or ()), best_start


def traversal_order(start: int, succ: Sequence[int]) -> list[int]:
    """Tokens in the order the canonical traversal from ``start`` labels them."""
    size = len(succ)
    pred = [-1] * size
    for t, s in enumerate(succ):
        if s >= 0:
            pred[s] = t
    label = [-1] * size
    order = [start]
    label[start] = 0
    i = 0
    while i < len(order):
        t = order[i]
        i += 1
        for nb in (succ[t], pred[t], t ^ 1):
            if nb >= 0 and label[nb] < 0:
                label[nb] = len(order)
                order.append(nb)
    return order


def phi_pairs(succ: Sequence[int], fsucc: Sequence[int]) -> list[tuple[int, int]]:
    """The pairing walk on token arrays, sorted ascending."""
    size = len(succ)
    pred = [-1] * size
    fpred = [-1] * size
    for t in range(size):
        if succ[t] >= 0:
            pred[succ[t]] = t
        if fsucc[t] >= 0:
            fpred[fsucc[t]] = t
    used = [False] * size
    pairs = []
    for head in range(size):
        if pred[head] >= 0 or used[head]:
            continue
        n = m = 0
        h = head
        while True:
            used[h] = True
            t = h
            while succ[t] >= 0:
                t = succ[t]
            length = 0
            while fpred[t] >= 0:
                t = fpred[t]
                length += 1
            n += 1
            m += length
            h = t ^ 1
            if h == head:
                break
            if pred[h] >= 0:
                raise RuntimeError("pairing walk left the thread heads")
        pairs.append((n, m))
    seen = [False] * size
    for t in range(size):
        if seen[t] or fsucc[t] < 0:
            continue
        path = []
        u = t
        while u >= 0 and not seen[u]:
            seen[u] = True
            path.append(u)
            u = fsucc[u]
        if u >= 0 and u in path:
            pairs.append((0, len(path) - path.index(u)))
    pairs.sort()
    return pairs
