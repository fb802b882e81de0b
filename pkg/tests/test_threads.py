import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import example_signs, fixture, small_corpus
from gentle.quiver_core import QuiverError, canonical_form, parse_quiver
from gentle.threads import (
    PartitionEncoding,
    ThreadArray,
    ThreadArrayError,
    Token,
    assign_signs,
    check_signs,
    decode_partition_encoding,
    decode_thread_array,
    forbidden_threads,
    partition_encoding,
    permitted_threads,
    relation_cycles,
    thread_array,
)

EXAMPLE_ARRAY = (
    "[v1+ v2+ v3+ v4+ v5+ | v6+ v7+ v3- v8+ | v9+ v1- v7- | v10+ v5- | v10- v8- | v2- | v4- | v6- | v9-]"
)
EXAMPLE_GAMMA = (
    (1, 11), (2, 17), (3, 8), (4, 18), (5, 14), (6, 19), (7, 12), (9, 16), (10, 20), (13, 15),
)


def test_example_thread_array_with_reference_signs():
    p = fixture("ten_vertex")
    assert str(thread_array(p, example_signs(p))) == EXAMPLE_ARRAY


def test_example_partition_encoding():
    p = fixture("ten_vertex")
    enc = partition_encoding(p, example_signs(p))
    assert enc.lam == (5, 4, 3, 2, 2, 1, 1, 1, 1)
    assert enc.gamma == EXAMPLE_GAMMA


def test_reference_signs_are_consistent():
    p = fixture("ten_vertex")
    assert check_signs(p, example_signs(p)) == []


def test_example_trivial_threads():
    p = fixture("ten_vertex")
    trivial = [t.start for t in permitted_threads(p, example_signs(p)) if t.is_trivial]
    assert sorted(trivial) == ["v2", "v4", "v6", "v9"]


def test_single_arrow_threads():
    p = fixture("a2")
    signs = assign_signs(p)
    assert (signs.sigma["a"], signs.epsilon["a"]) == (1, 1)
    hs = permitted_threads(p)
    assert len(hs) == 3
    assert partition_encoding(p).lam == (2, 1, 1)
    assert str(thread_array(p)) == "[u+ v- | u- | v+]"


def test_one_vertex_is_rejected():
    with pytest.raises(QuiverError):
        assign_signs(parse_quiver("arrow a: u -> u\nrel a a\n"))


def test_broken_signs_are_reported():
    p = fixture("ten_vertex")
    signs = example_signs(p)
    signs.sigma["a1"] = -signs.sigma["a1"]
    assert check_signs(p, signs)
    with pytest.raises(QuiverError):
        thread_array(p, signs)


def test_relation_cycles_of_two_balanced_form():
    cycles = relation_cycles(fixture("nf4"))
    assert sorted(c.length for c in cycles) == [2]


@settings(max_examples=150)
@given(st.sampled_from(small_corpus(4)))
def test_every_token_lies_on_exactly_one_permitted_thread(p):
    tokens = thread_array(p).tokens
    assert len(tokens) == len(set(tokens)) == 2 * len(p.vertices)


@settings(max_examples=150)
@given(st.sampled_from(small_corpus(4)))
def test_thread_counts_follow_from_cycle_number(p):
    # arrows split the 2n tokens into 2n - |arrows| columns
    n, m = len(p.vertices), len(p.arrows)
    assert len(permitted_threads(p)) == 2 * n - m
    assert sum(partition_encoding(p).lam) == 2 * n
    assert sum(t.length for t in permitted_threads(p)) == m
    cyc = sum(c.length for c in relation_cycles(p))
    assert sum(t.length for t in forbidden_threads(p)) + cyc == m


@settings(max_examples=150)
@given(st.sampled_from(small_corpus(4)))
def test_decoding_the_thread_array_gives_back_the_presentation(p):
    q = decode_thread_array(thread_array(p))
    assert canonical_form(q) == canonical_form(p)
    r = decode_partition_encoding(partition_encoding(p))
    assert canonical_form(r) == canonical_form(p)


@settings(max_examples=150)
@given(st.sampled_from(small_corpus(4)), st.data())
def test_gauge_flip_swaps_columns_only_by_renaming(p, data):
    flip = data.draw(st.sets(st.sampled_from(p.vertices)))
    signs = assign_signs(p).flipped(flip, p)
    assert check_signs(p, signs) == []
    q = decode_thread_array(thread_array(p, signs))
    assert canonical_form(q) == canonical_form(p)
    assert partition_encoding(p, signs).lam == partition_encoding(p).lam


def test_token_parsing():
    assert Token.parse("v10-") == Token("v10", -1)
    assert Token.parse("x'+").partner == Token("x'", -1)
    with pytest.raises(ThreadArrayError):
        Token.parse("v")


def test_array_parse_round_trip():
    arr = ThreadArray.parse(EXAMPLE_ARRAY)
    assert str(arr) == EXAMPLE_ARRAY
    assert arr.same_threads(ThreadArray(tuple(reversed(arr.columns))))


def test_repeated_token_is_rejected():
    with pytest.raises(ThreadArrayError, match="repeated"):
        decode_thread_array(ThreadArray.parse("[u+ v- | u+ | v+]"))


def test_missing_partner_is_rejected():
    with pytest.raises(ThreadArrayError, match="missing"):
        decode_thread_array(ThreadArray.parse("[u+ v- | u-]"))


def test_empty_column_is_rejected():
    with pytest.raises(ThreadArrayError):
        ThreadArray.parse("[u+ v- | | u-]")


def test_disconnected_array_is_rejected():
    with pytest.raises(ThreadArrayError):
        decode_thread_array(ThreadArray.parse("[u+ u- | v+ | v-]"))


def test_bad_matching_is_rejected():
    with pytest.raises(ThreadArrayError):
        decode_partition_encoding(PartitionEncoding((2, 2), ((1, 2), (2, 3))))


def test_layout_has_one_row_per_depth():
    text = thread_array(fixture("ten_vertex"), example_signs(fixture("ten_vertex"))).layout()
    assert text.count("\n") == 5 + 1
