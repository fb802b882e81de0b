"""Representatives for two-cycle gentle presentations with three invariant pairs.

Write each pair as ``(n, m)`` and its defect as ``n - m``.  The defects of an
admissible triple sum to ``-2``, and the sign pattern of the three defects
selects one of ten families:

====  ==========================================  ===========================
 id   invariant                                    shape of the defects
====  ==========================================  ===========================
  1   (0,a) (0,b) (a+b-2,0)                        -, -, + (k = q = r = 0)
  2   (a,0) (b,0) (0,a+b+2)                        +, +, - (k = q = r = 0)
  3   (1,1) (b,0) (0,b+2)                          0, +, - (k = 1, q = r = 0)
  4   (1,1) (1,1) (0,2)                            0, 0, - (k = q = 1, r = 0)
  5   (1,1) (0,1) (0,1)                            0, -1, -1 (k = 1, q = r = 0)
  6   (k,a+k) (q,b+q) (a+b-2+r,r)                  -, -, +
  7   (a+k,k) (b+q,q) (r,a+b+2+r)                  +, +, -
  8   (k,k) (b+q,q) (r,b+2+r)                      0, +, -
  9   (k,k) (q,q) (r,r+2)                          0, 0, -2
 10   (k,k) (q,q+1) (r,r+1)                        0, -1, -1
====  ==========================================  ===========================

Families 1 to 5 are the smallest members of 6 to 10 and take precedence.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass, field

from .invariant import PhiInvariant, compute_phi, parse_phi
from .quiver_core import (
    GentlePresentation,
    QuiverError,
    are_isomorphic,
    cycle_number,
    ensure_gentle,
    presentation,
)

__all__ = [
    "FamilyMatch",
    "InadmissibleTriple",
    "InvariantTriple",
    "admissible_triples",
    "build_family",
    "build_normal_form",
    "family_of",
    "is_normal_form",
]


class InadmissibleTriple(QuiverError):
    """The pairs cannot be the invariant of a two-cycle gentle presentation."""


@dataclass(frozen=True)
class InvariantTriple:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple(sorted(tuple(p) for p in self.pairs))
        if len(pairs) != 3:
            raise InadmissibleTriple("a triple needs exactly three pairs")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def parse(cls, text: str) -> InvariantTriple:
        return cls(parse_phi(text).pairs)

    @classmethod
    def of(cls, phi: PhiInvariant) -> InvariantTriple:
        return cls(phi.pairs)

    @property
    def phi(self) -> PhiInvariant:
        return PhiInvariant(self.pairs)

    def problems(self) -> list[str]:
        out = []
        if any(x < 0 for p in self.pairs for x in p):
            out.append("entries must be natural numbers")
        if sum(n for n, _ in self.pairs) + 2 != sum(m for _, m in self.pairs):
            out.append("first entries plus 2 must equal the sum of second entries")
        if (0, 0) in self.pairs:
            out.append("the pair (0,0) does not occur in any invariant")
        return out

    @property
    def admissible(self) -> bool:
        return not self.problems()

    def __str__(self) -> str:
        return str(self.phi)


@dataclass(frozen=True)
class FamilyMatch:
    family: int
    params: dict[str, int] = field(default_factory=dict)

    def __str__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"family {self.family}" + (f" ({args})" if args else "")


def family_of(t: InvariantTriple) -> FamilyMatch:
    bad = t.problems()
    if bad:
        raise InadmissibleTriple(f"{t}: {bad[0]}")
    pairs = list(t.pairs)
    zero = [p for p in pairs if p[0] == p[1]]
    rest = [p for p in pairs if p[0] != p[1]]

    if len(zero) == 2:
        (k, _), (q, _) = sorted(zero)
        r = rest[0][0]
        if (k, q, r) == (1, 1, 0):
            return FamilyMatch(4)
        return FamilyMatch(9, {"k": k, "q": q, "r": r})

    if len(zero) == 1:
        k = zero[0][0]
        if all(n - m == -1 for n, m in rest):
            (q, _), (r, _) = sorted(rest)
            if (k, q, r) == (1, 0, 0):
                return FamilyMatch(5)
            return FamilyMatch(10, {"k": k, "q": q, "r": r})
        (pn, pm), (rn, _) = sorted(rest, key=lambda p: p[1] - p[0])
        b, q, r = pn - pm, pm, rn
        if (k, q, r) == (1, 0, 0):
            return FamilyMatch(3, {"b": b})
        return FamilyMatch(8, {"k": k, "b": b, "q": q, "r": r})

    negative = [p for p in rest if p[0] < p[1]]
    positive = [p for p in rest if p[0] > p[1]]
    if len(negative) == 2:
        # (k, a+k), (q, b+q) ordered so that a >= b and k >= q on ties
        (k, ak), (q, bq) = sorted(negative, key=lambda p: (p[1] - p[0], p[0]), reverse=True)
        a, b, r = ak - k, bq - q, positive[0][1]
        if (k, q, r) == (0, 0, 0):
            return FamilyMatch(1, {"a": min(a, b), "b": max(a, b)})
        return FamilyMatch(6, {"a": a, "b": b, "k": k, "q": q, "r": r})
    (ak, k), (bq, q) = sorted(positive, key=lambda p: (p[0] - p[1], p[1]), reverse=True)
    a, b, r = ak - k, bq - q, negative[0][0]
    if (k, q, r) == (0, 0, 0):
        return FamilyMatch(2, {"a": min(a, b), "b": max(a, b)})
    return FamilyMatch(7, {"a": a, "b": b, "k": k, "q": q, "r": r})


# ------------------------------------------------------------------ builders


class _Builder:
    def __init__(self, name: str):
        self.name = name
        self.vertices: list[str] = []
        self.arrows: list[tuple[str, str, str]] = []
        self.relations: list[tuple[str, str]] = []

    def _vertex(self, v: str) -> None:
        if v not in self.vertices:
            self.vertices.append(v)

    def arrow(self, u: str, v: str) -> str:
        self._vertex(u)
        self._vertex(v)
        name = f"e{len(self.arrows) + 1}"
        self.arrows.append((name, u, v))
        return name

    def chain(self, vertices: list[str]) -> list[str]:
        for v in vertices:
            self._vertex(v)
        return [self.arrow(u, v) for u, v in zip(vertices, vertices[1:])]

    def cycle(self, vertices: list[str], zero_at: set[str]) -> dict[str, tuple[str, str]]:
        """Oriented cycle through ``vertices``; relations at the listed vertices.

        Returns, per vertex, its (incoming, outgoing) cycle arrows.
        """
        arrows = [self.arrow(u, v) for u, v in zip(vertices, vertices[1:] + vertices[:1])]
        around = {}
        for k, v in enumerate(vertices):
            inc, out = arrows[k - 1], arrows[k]
            around[v] = (inc, out)
            if v in zero_at:
                self.relations.append((out, inc))
        return around

    def build(self) -> GentlePresentation:
        return ensure_gentle(presentation(self.vertices, self.arrows, self.relations, self.name))


def _names(prefix: str, lo: int, hi: int) -> list[str]:
    return [f"{prefix}{x}" for x in range(lo, hi + 1)]


def _two_negative(a: int, b: int, k: int, q: int, r: int, name: str) -> GentlePresentation:
    """Two oriented cycles through ``vb`` with a tail of ``r`` arrows."""
    bld = _Builder(name)
    hub = f"v{b}"
    vcycle = [hub, *_names("v", b + 1, b + q), *_names("v", 1, b - 1)]
    ucycle = [hub, *_names("u", a + 1, a + k), *_names("u", 1, a - 1)]
    vz = set(_names("v", 1, b - 1))
    uz = set(_names("u", 1, a - 1))
    around_v = bld.cycle(vcycle, vz)
    around_u = bld.cycle(ucycle, uz)
    bld.relations.append((around_v[hub][1], around_v[hub][0]))
    bld.relations.append((around_u[hub][1], around_u[hub][0]))
    if r:
        bld.chain([*_names("w", 1, r), f"u{a - 1}"])
    return bld.build()


def _two_positive(a: int, b: int, k: int, q: int, r: int, name: str) -> GentlePresentation:
    """Two oriented cycles through ``u0`` crossing with relations, plus two tails."""
    bld = _Builder(name)
    vcycle = ["u0", *_names("v", 1, b)]
    ucycle = ["u0", *_names("u", 1, r + a)]
    around_v = bld.cycle(vcycle, set(vcycle[1:]))
    around_u = bld.cycle(ucycle, set(_names("u", r + 1, r + a)))
    v_in, v_out = around_v["u0"]
    u_in, u_out = around_u["u0"]
    bld.relations.append((u_out, v_in))
    bld.relations.append((v_out, u_in))
    if q:
        bld.chain([*_names("w", 1, q), "v1"])
    if k:
        bld.chain([*_names("z", 1, k), f"u{r + a}"])
    return bld.build()


def _one_positive(k: int, b: int, q: int, r: int, name: str) -> GentlePresentation:
    """Two parallel paths from ``v1`` to ``v(r+2)`` closed by a cycle of relations."""
    bld = _Builder(name)
    top = _names("v", 1, r + 2)
    top_arrows = bld.chain(top)
    bld.chain(["v1", *_names("u", 2, k), top[-1]])
    ring = bld.chain([top[-1], *_names("w", 1, b), "v1"])
    bld.relations.append((ring[0], top_arrows[-1]))
    for inc, out in zip(ring, ring[1:]):
        bld.relations.append((out, inc))
    bld.relations.append((top_arrows[0], ring[-1]))
    if q:
        bld.chain([*_names("z", 1, q), f"w{b}"])
    return bld.build()


def _two_balanced(k: int, q: int, r: int, name: str) -> GentlePresentation:
    """Two paths from ``u0`` into a cycle with two relations."""
    bld = _Builder(name)
    bld.chain(["u0", *_names("w", 1, k)])
    bld.chain(["u0", *_names("u", 1, q - 1), f"v{r}"])
    bld.cycle([f"w{k}", *_names("v", 0, r)], {f"w{k}", f"v{r}"})
    return bld.build()


def _two_unit(k: int, q: int, r: int, name: str) -> GentlePresentation:
    """A path ``u0 .. uk`` with a one-relation cycle at each end."""
    bld = _Builder(name)
    bld.chain(_names("u", 0, k))
    bld.cycle([f"u{k}", *_names("v", 1, q)], {f"u{k}"})
    bld.cycle(["u0", *_names("w", 1, r)], {"u0"})
    return bld.build()


_PARAMS = {
    1: ("a", "b"),
    2: ("a", "b"),
    3: ("b",),
    4: (),
    5: (),
    6: ("a", "b", "k", "q", "r"),
    7: ("a", "b", "k", "q", "r"),
    8: ("k", "b", "q", "r"),
    9: ("k", "q", "r"),
    10: ("k", "q", "r"),
}


def _check_params(family: int, params: dict[str, int]) -> None:
    if family not in _PARAMS:
        raise InadmissibleTriple(f"unknown family {family}")
    want = set(_PARAMS[family])
    if set(params) != want:
        raise InadmissibleTriple(f"family {family} takes parameters {sorted(want)}")
    if any(v < 0 for v in params.values()):
        raise InadmissibleTriple("parameters must be natural numbers")
    a, b = params.get("a"), params.get("b")
    k, q = params.get("k"), params.get("q")
    if family in (1, 2) and (a < 1 or b < 1):
        raise InadmissibleTriple("family needs a, b >= 1")
    if family == 1 and a + b <= 2:
        raise InadmissibleTriple("family 1 needs a + b > 2")
    if family in (6, 7):
        if not a >= b >= 1 or (a == b and k < q):
            raise InadmissibleTriple("family needs a >= b >= 1 and k >= q when a = b")
        if family == 6 and a + b <= 2:
            raise InadmissibleTriple("family 6 needs a + b > 2")
    if family in (3, 8) and b < 1:
        raise InadmissibleTriple("family needs b >= 1")
    if family in (8, 9, 10) and k < 1:
        raise InadmissibleTriple("family needs k >= 1")
    if family == 9 and not 1 <= k <= q:
        raise InadmissibleTriple("family 9 needs 1 <= k <= q")
    if family == 10 and q > params["r"]:
        raise InadmissibleTriple("family 10 needs q <= r")


def build_family(family: int, params: dict[str, int] | None = None) -> GentlePresentation:
    """Construct the representative of ``family`` with the given parameters."""
    params = dict(params or {})
    _check_params(family, params)
    name = f"nf{family}"
    if family == 1:
        return _two_negative(max(params["a"], params["b"]), min(params["a"], params["b"]), 0, 0, 0, name)
    if family == 2:
        return _two_positive(max(params["a"], params["b"]), min(params["a"], params["b"]), 0, 0, 0, name)
    if family == 3:
        return _one_positive(1, params["b"], 0, 0, name)
    if family == 4:
        return _two_balanced(1, 1, 0, name)
    if family == 5:
        return _two_unit(1, 0, 0, name)
    if family == 6:
        return _two_negative(*(params[x] for x in "abkqr"), name)
    if family == 7:
        return _two_positive(*(params[x] for x in "abkqr"), name)
    if family == 8:
        return _one_positive(*(params[x] for x in "kbqr"), name)
    if family == 9:
        return _two_balanced(*(params[x] for x in "kqr"), name)
    return _two_unit(*(params[x] for x in "kqr"), name)


def build_normal_form(t: InvariantTriple | PhiInvariant | str) -> GentlePresentation:
    if isinstance(t, str):
        t = InvariantTriple.parse(t)
    elif isinstance(t, PhiInvariant):
        t = InvariantTriple.of(t)
    match = family_of(t)
    return build_family(match.family, match.params)


def is_normal_form(p: GentlePresentation) -> FamilyMatch | None:
    """Family and parameters when ``p`` is isomorphic to its representative."""
    p = ensure_gentle(p)
    if cycle_number(p) != 2:
        return None
    phi = compute_phi(p)
    if len(phi) != 3:
        return None
    t = InvariantTriple.of(phi)
    if not t.admissible:
        return None
    match = family_of(t)
    ok, _ = are_isomorphic(p, build_family(match.family, match.params))
    return match if ok else None


def admissible_triples(bound: int) -> Iterator[InvariantTriple]:
    """Every admissible triple with entries at most ``bound``, in sorted order."""
    pairs = [(n, m) for n in range(bound + 1) for m in range(bound + 1) if (n, m) != (0, 0)]
    for combo in itertools.combinations_with_replacement(pairs, 3):
        t = InvariantTriple(combo)
        if t.admissible:
            yield t
