"""The derived invariant: a multiset of pairs of naturals.

Starting from a permitted thread ``H``, walk to the forbidden thread that
ends where ``H`` ends (on the other side), follow it back to its start, and
continue with the permitted thread starting on the other side there.  When
the walk closes after ``n`` permitted threads it emits ``(n, m)`` where ``m``
counts the forbidden arrows traversed.  Each oriented cycle of relations
contributes ``(0, length)``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from . import kernels
from .quiver_core import GentlePresentation, QuiverError, ensure_gentle
from .threads import (
    SignAssignment,
    Thread,
    assign_signs,
    forbidden_threads,
    permitted_threads,
    relation_cycles,
)

__all__ = [
    "PhiInvariant",
    "compute_phi",
    "compute_phi_by_threads",
    "parse_phi",
    "phi_cardinality",
    "phi_equal",
]


@dataclass(frozen=True)
class PhiInvariant:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(sorted(tuple(p) for p in self.pairs)))
        if any(n < 0 or m < 0 for n, m in self.pairs):
            raise ValueError("pairs must be natural numbers")

    def __str__(self) -> str:
        return "[" + ",".join(f"({n},{m})" for n, m in self.pairs) + "]"

    def __len__(self) -> int:
        return len(self.pairs)

    def gap(self) -> str:
        return "[ " + ", ".join(f"[ {n}, {m} ]" for n, m in self.pairs) + " ]"

    @property
    def n_total(self) -> int:
        return sum(n for n, _ in self.pairs)

    @property
    def m_total(self) -> int:
        return sum(m for _, m in self.pairs)


_PAIR_RE = re.compile(r"[\(\[]\s*(\d+)\s*,\s*(\d+)\s*[\)\]]")


def parse_phi(text: str) -> PhiInvariant:
    """Accept ``[(1,1),(0,2)]``, ``(1,1),(0,2)`` or ``[ [ 1, 1 ], [ 0, 2 ] ]``."""
    body = text.strip()
    pairs = [(int(a), int(b)) for a, b in _PAIR_RE.findall(body)]
    leftover = _PAIR_RE.sub("", body).replace(",", "").replace("[", "").replace("]", "").strip()
    if leftover or (not pairs and body not in ("", "[]")):
        raise ValueError(f"cannot parse pairs from {text!r}")
    return PhiInvariant(tuple(pairs))


def compute_phi(p: GentlePresentation) -> PhiInvariant:
    """Pairing walk on the token arrays (compiled kernel when available)."""
    p = ensure_gentle(p)
    td = p.token_data
    return PhiInvariant(tuple(kernels.phi_pairs(td.succ, td.fsucc)))


def compute_phi_by_threads(
    p: GentlePresentation,
    signs: SignAssignment | None = None,
    start_order: Sequence[int] | None = None,
) -> PhiInvariant:
    """The same walk over explicit ``Thread`` records.

    ``start_order`` permutes the permitted threads tried as walk starts; the
    result does not depend on it.
    """
    p = ensure_gentle(p)
    signs = signs or assign_signs(p)
    perm = permitted_threads(p, signs)
    forb = forbidden_threads(p, signs)
    by_end = {(t.end, t.eps): t for t in forb}
    by_start = {(t.start, t.sigma): i for i, t in enumerate(perm)}
    if len(by_end) != len(forb) or len(by_start) != len(perm):
        raise QuiverError("internal: thread lookup keys are not unique")

    order = list(start_order) if start_order is not None else range(len(perm))
    used = [False] * len(perm)
    pairs: list[tuple[int, int]] = []
    for first in order:
        if used[first]:
            continue
        n = m = 0
        cur = first
        while True:
            used[cur] = True
            h: Thread = perm[cur]
            try:
                pi = by_end[(h.end, -h.eps)]
                cur = by_start[(pi.start, -pi.sigma)]
            except KeyError:
                raise QuiverError("internal: pairing walk lost its thread") from None
            n += 1
            m += pi.length
            if cur == first:
                break
            if used[cur]:
                raise QuiverError("internal: pairing walk re-entered a used thread")
        pairs.append((n, m))
    pairs.extend((0, c.length) for c in relation_cycles(p, signs))
    return PhiInvariant(tuple(pairs))


def phi_cardinality(phi: PhiInvariant | Iterable[tuple[int, int]]) -> int:
    return len(phi.pairs if isinstance(phi, PhiInvariant) else list(phi))


def phi_equal(a: PhiInvariant, b: PhiInvariant) -> bool:
    return a.pairs == b.pairs
