"""Shared test data: fixture files and cached enumerations."""

from __future__ import annotations

import random
from functools import lru_cache
from pathlib import Path

from gentle.enumeration import enumerate_gentle
from gentle.quiver_core import GentlePresentation, parse_quiver
from gentle.threads import _with_trivial

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"


def fixture(name: str) -> GentlePresentation:
    return parse_quiver((FIXTURES / f"{name}.q").read_text())


@lru_cache(maxsize=None)
def enumerated(n: int, c: int = 2) -> tuple[GentlePresentation, ...]:
    return tuple(enumerate_gentle(n, c))


def small_corpus(max_n: int = 4) -> list[GentlePresentation]:
    """All connected gentle presentations with 2..max_n vertices and c <= 2."""
    return [p for c in (0, 1, 2) for n in range(2, max_n + 1) for p in enumerated(n, c)]


def random_instances(count: int, seed: int = 2024, max_n: int = 5) -> list[GentlePresentation]:
    pool = [p for n in range(2, max_n + 1) for p in enumerated(n, 2)]
    pool += [p for c in (0, 1) for n in range(2, 5) for p in enumerated(n, c)]
    return random.Random(seed).choices(pool, k=count)


def example_signs(p: GentlePresentation):
    """Reference sign table for the ten-vertex fixture."""
    plus_sigma = {1, 2, 3, 4, 5, 6, 8, 10}
    plus_eps = {6, 8, 9, 10, 11}
    sigma = {f"a{k}": 1 if k in plus_sigma else -1 for k in range(1, 12)}
    eps = {f"a{k}": 1 if k in plus_eps else -1 for k in range(1, 12)}
    return _with_trivial(p, sigma, eps)
