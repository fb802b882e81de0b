"""Exhaustive generation of gentle presentations and transformation orbits.

Every connected gentle presentation with ``n`` vertices and cycle number
``c`` has ``n - c + 1`` permitted threads, so it is the decoding of a thread
array whose column lengths form a partition of ``2n`` into ``n - c + 1``
parts and whose tokens are paired into vertices by a perfect matching.
Running over all such pairs and keeping the connected decodings gives every
presentation; canonical keys remove isomorphic repeats.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .invariant import PhiInvariant, compute_phi
from .quiver_core import (
    GentlePresentation,
    QuiverError,
    canonical_form,
    cycle_number,
    ensure_gentle,
    is_connected,
    presentation,
    validate_gentle,
)
from .threads import PartitionEncoding, decode_partition_encoding
from .transforms import StepError, applicable_steps, apply_step

__all__ = [
    "EnumerationReport",
    "MAX_VERTICES",
    "enumerate_gentle",
    "naive_enumerate",
    "partitions",
    "perfect_matchings",
    "transformation_orbits",
    "verify_theorems",
]

log = logging.getLogger(__name__)

MAX_VERTICES = 6


def partitions(total: int, parts: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of ``parts`` positive integers summing to ``total``."""
    if largest is None:
        largest = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(largest, total - parts + 1), 0, -1):
        if first * parts < total:
            break
        for rest in partitions(total - first, parts - 1, first):
            yield (first, *rest)


def perfect_matchings(items: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, other in enumerate(rest):
        for tail in perfect_matchings(rest[:k] + rest[k + 1:]):
            yield [(first, other), *tail]


def enumerate_gentle(n: int, c: int) -> Iterator[GentlePresentation]:
    """Connected gentle presentations with ``n`` vertices and cycle number ``c``.

    Yields one representative per isomorphism class, in a deterministic order.
    """
    if n < 1 or c < 0:
        raise QuiverError("need n >= 1 and c >= 0")
    if n > MAX_VERTICES:
        raise QuiverError(f"n = {n} is above the enumeration limit {MAX_VERTICES}")
    columns = n - c + 1
    if columns < 1:
        return
    seen: set[str] = set()
    positions = list(range(1, 2 * n + 1))
    for lam in partitions(2 * n, columns):
        for gamma in perfect_matchings(positions):
            p = decode_partition_encoding(PartitionEncoding(lam, tuple(gamma)), check=False)
            if not is_connected(p):
                continue
            p = ensure_gentle(p)
            key = canonical_form(p)
            if key in seen:
                continue
            seen.add(key)
            yield p


def naive_enumerate(n: int, c: int) -> Iterator[GentlePresentation]:
    """Independent generator: every arrow multiset and relation subset, filtered.

    Exponential; intended as a cross-check for ``n <= 3``.
    """
    vertices = [f"x{k}" for k in range(n)]
    slots = [(u, v) for u in vertices for v in vertices]
    seen: set[str] = set()
    for ends in itertools.combinations_with_replacement(slots, n + c - 1):
        outdeg = Counter(u for u, _ in ends)
        indeg = Counter(v for _, v in ends)
        if max(outdeg.values(), default=0) > 2 or max(indeg.values(), default=0) > 2:
            continue
        arrows = [(f"e{k}", u, v) for k, (u, v) in enumerate(ends)]
        bare = presentation(vertices, arrows)
        if not is_connected(bare):
            continue
        composable = [(g, f) for g, gs, _ in arrows for f, _, ft in arrows if ft == gs]
        for mask in range(1 << len(composable)):
            rels = [pair for k, pair in enumerate(composable) if mask >> k & 1]
            p = presentation(vertices, arrows, rels)
            if not validate_gentle(p).ok:
                continue
            key = canonical_form(p)
            if key not in seen:
                seen.add(key)
                yield ensure_gentle(p)


def transformation_orbits(
    items: Iterable[GentlePresentation],
) -> tuple[list[list[str]], dict[str, GentlePresentation]]:
    """Connected components of the elementary-step graph on ``items``.

    Returns the components as lists of canonical keys plus the key lookup.
    Raises if a step leaves the set (the set must be closed under steps).
    """
    by_key = {canonical_form(p): p for p in items}
    parent = {k: k for k in by_key}

    def find(k: str) -> str:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for key, p in by_key.items():
        for step in applicable_steps(p):
            q = apply_step(p, step)
            other = canonical_form(q)
            if other not in parent:
                raise QuiverError(f"step {step} leaves the enumerated set")
            ra, rb = find(key), find(other)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[str, list[str]] = defaultdict(list)
    for k in by_key:
        groups[find(k)].append(k)
    orbits = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
    return orbits, by_key


@dataclass
class EnumerationReport:
    n: int
    c: int
    count: int = 0
    orbits: list[list[str]] = field(default_factory=list)
    orbit_phi: list[str] = field(default_factory=list)
    collisions: list[dict[str, Any]] = field(default_factory=list)
    single_pair_splits: list[dict[str, Any]] = field(default_factory=list)
    cardinality_violations: list[str] = field(default_factory=list)
    orbit_phi_violations: list[str] = field(default_factory=list)
    sum_violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.cardinality_violations or self.orbit_phi_violations or self.sum_violations)

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "c": self.c,
            "count": self.count,
            "orbit_count": len(self.orbits),
            "orbits": [{"phi": phi, "members": members} for phi, members in zip(self.orbit_phi, self.orbits)],
            "collisions": self.collisions,
            "single_pair_splits": self.single_pair_splits,
            "cardinality_violations": self.cardinality_violations,
            "orbit_phi_violations": self.orbit_phi_violations,
            "sum_violations": self.sum_violations,
            "ok": self.ok,
        }

    def summary(self) -> str:
        lines = [
            f"n={self.n} c={self.c}: {self.count} presentations, {len(self.orbits)} orbits",
            f"three-pair phi values with several orbits: {len(self.collisions)}",
        ]
        for col in self.collisions:
            lines.append(f"  {col['phi']}: {col['orbits']} orbits")
        if self.single_pair_splits:
            lines.append(f"single-pair phi values with several orbits: {len(self.single_pair_splits)}")
            for col in self.single_pair_splits:
                lines.append(f"  {col['phi']}: {col['orbits']} orbits")
        lines.append(f"cardinality violations: {len(self.cardinality_violations)}")
        lines.append(f"phi not constant on an orbit: {len(self.orbit_phi_violations)}")
        lines.append(f"sum identity violations: {len(self.sum_violations)}")
        lines.append("ok" if self.ok else "FAILED")
        return "\n".join(lines)


def _phi_of(p: GentlePresentation) -> str:
    return str(compute_phi(p))


def verify_theorems(n: int, c: int = 2, threads: int = 1) -> EnumerationReport:
    """Enumerate, compute orbits and check the invariant's predicted behaviour."""
    items = list(enumerate_gentle(n, c))
    report = EnumerationReport(n, c, len(items))
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            phis = list(pool.map(_phi_of, items, chunksize=64))
    else:
        phis = [_phi_of(p) for p in items]
    phi_by_key = {canonical_form(p): s for p, s in zip(items, phis)}

    for p, s in zip(items, phis):
        phi = compute_phi(p)
        key = canonical_form(p)
        if c == 2 and len(phi) not in (1, 3):
            report.cardinality_violations.append(key)
        columns = len(p.arrows) - 2 * cycle_number(p) + 2
        if phi.n_total != columns or phi.m_total != len(p.arrows):
            report.sum_violations.append(key)
        elif c == 2 and phi.n_total + 2 != phi.m_total:
            report.sum_violations.append(key)

    orbits, _ = transformation_orbits(items)
    report.orbits = orbits
    per_phi: dict[str, int] = Counter()
    for orbit in orbits:
        values = {phi_by_key[k] for k in orbit}
        if len(values) > 1:
            report.orbit_phi_violations.append(orbit[0])
        value = phi_by_key[orbit[0]]
        report.orbit_phi.append(value)
        per_phi[value] += 1
    # Only three-pair values are expected to determine the orbit; single-pair
    # splits are recorded separately.
    for phi, count in sorted(per_phi.items()):
        if count > 1:
            target = report.collisions if phi.count("(") == 3 else report.single_pair_splits
            target.append({"phi": phi, "orbits": count})
    log.info("verified n=%d c=%d: %d presentations", n, c, len(items))
    return report


def report_json(report: EnumerationReport) -> str:
    return json.dumps(report.to_json(), indent=2)


def phi_of_key(items: dict[str, GentlePresentation], key: str) -> PhiInvariant:
    return compute_phi(items[key])


def safe_steps(p: GentlePresentation):
    """Applicable steps with their results; steps that fail are skipped."""
    for step in applicable_steps(p):
        try:
            yield step, apply_step(p, step)
        except StepError:
            continue
