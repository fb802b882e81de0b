import json
import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpus import enumerated, fixture
from gentle.enumeration import (
    enumerate_gentle,
    naive_enumerate,
    partitions,
    perfect_matchings,
    report_json,
    transformation_orbits,
    verify_theorems,
)
from gentle.invariant import compute_phi
from gentle.quiver_core import QuiverError, canonical_form, cycle_number, validate_gentle


@pytest.mark.parametrize("n, count", [(1, 0), (2, 3), (3, 38), (4, 312)])
def test_two_cycle_counts(n, count):
    assert len(enumerated(n)) == count


def test_results_are_gentle_connected_and_distinct():
    for c in (0, 1, 2):
        items = enumerated(3, c)
        assert len({canonical_form(p) for p in items}) == len(items)
        for p in items:
            assert validate_gentle(p).ok
            assert cycle_number(p) == c
            assert len(p.vertices) == 3


@pytest.mark.parametrize("n, c", [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2)])
def test_matches_naive_generator(n, c):
    fast = {canonical_form(p) for p in enumerated(n, c)}
    slow = {canonical_form(p) for p in naive_enumerate(n, c)}
    assert fast == slow


def test_single_vertex_cases():
    assert [len(p.arrows) for p in enumerate_gentle(1, 0)] == [0]
    (loop,) = enumerate_gentle(1, 1)
    assert loop.relations == (("a1", "a1"),)
    assert list(enumerate_gentle(1, 2)) == []


def test_bad_sizes():
    with pytest.raises(QuiverError):
        list(enumerate_gentle(0, 2))
    with pytest.raises(QuiverError):
        list(enumerate_gentle(2, -1))


def test_order_is_deterministic():
    assert [canonical_form(p) for p in enumerate_gentle(3, 2)] == [canonical_form(p) for p in enumerated(3)]


@given(st.integers(1, 12), st.integers(1, 6))
def test_partitions_are_non_increasing_and_complete(total, parts):
    got = list(partitions(total, parts))
    assert len(set(got)) == len(got)
    for lam in got:
        assert sum(lam) == total and len(lam) == parts
        assert list(lam) == sorted(lam, reverse=True) and lam[-1] >= 1
    # compare with sorted compositions
    brute = {
        tuple(sorted(x, reverse=True))
        for x in _compositions(total, parts)
    }
    assert set(got) == brute


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


@pytest.mark.parametrize("size", [0, 2, 4, 6, 8])
def test_perfect_matching_count(size):
    # (size - 1)!! matchings
    expected = 1
    for k in range(size - 1, 0, -2):
        expected *= k
    items = list(perfect_matchings(list(range(size))))
    assert len(items) == expected
    assert all(sorted(x for pair in m for x in pair) == list(range(size)) for m in items)


def test_orbits_of_four_vertices():
    orbits, by_key = transformation_orbits(enumerated(4))
    assert sum(len(o) for o in orbits) == 312
    for orbit in orbits:
        assert len({str(compute_phi(by_key[k])) for k in orbit}) == 1
    q1, q2 = canonical_form(fixture("quiver1")), canonical_form(fixture("quiver2"))
    (o1,) = [o for o in orbits if q1 in o]
    (o2,) = [o for o in orbits if q2 in o]
    assert o1 == [q1]
    assert o1 != o2


def test_orbits_need_a_closed_set():
    items = list(enumerated(3))
    p = next(p for p in items if len(compute_phi(p)) == 3)
    with pytest.raises(QuiverError, match="leaves"):
        transformation_orbits([p])


@pytest.mark.parametrize("n", [2, 3])
def test_verify_small_sizes(n):
    report = verify_theorems(n)
    assert report.ok
    assert report.collisions == []
    assert report.count == len(enumerated(n))


def test_verify_three_vertices_records_single_pair_split():
    report = verify_theorems(3)
    assert report.single_pair_splits == [{"phi": "[(2,4)]", "orbits": 3}]


def test_verify_four_vertices_finds_the_collision():
    report = verify_theorems(4)
    assert report.ok
    assert report.collisions == [{"phi": "[(1,1),(1,1),(1,3)]", "orbits": 2}]
    data = json.loads(report_json(report))
    assert data["count"] == 312 and data["ok"]
    assert "three-pair phi values with several orbits: 1" in report.summary()


def test_verify_with_worker_pool_agrees():
    assert verify_theorems(3, threads=2).to_json() == verify_theorems(3).to_json()


def test_other_cycle_numbers_verify():
    for c in (0, 1):
        assert verify_theorems(3, c).ok
