from collections import Counter

import pytest
from hypothesis import given, strategies as st

from docsynth.models.errors import ParameterError
from docsynth.services.sampling import (
    MASK64,
    SplitMix64,
    content_stream,
    fnv1a64,
    mix64,
    partial_shuffle,
    record_seed,
)


def test_fnv1a_reference_values():
    assert fnv1a64("") == 0xCBF29CE484222325
    assert fnv1a64("a") == 0xAF63DC4C8601EC8C
    assert fnv1a64("foobar") == 0x85944171F73967E8


def test_splitmix_reference_sequence():
    stream = SplitMix64(0)
    assert stream.next() == 0xE220A8397B1DCDAF
    assert stream.next() == 0x6E789E6AA1B965F4


def test_seed_is_reduced_mod_2_64():
    assert SplitMix64(-1).state == MASK64
    assert SplitMix64(1 << 64).next() == SplitMix64(0).next()


def test_below_bounds():
    stream = SplitMix64(42)
    assert all(stream.below(1) == 0 for _ in range(10))
    assert {stream.below(3) for _ in range(200)} == {0, 1, 2}
    with pytest.raises(ParameterError):
        stream.below(0)


@given(st.integers(0, MASK64), st.integers(1, 40), st.data())
def test_partial_shuffle_draws_distinct_indices(seed, n, data):
    k = data.draw(st.integers(0, n))
    drawn = partial_shuffle(n, k, SplitMix64(seed))
    assert len(drawn) == k
    assert len(set(drawn)) == k
    assert all(0 <= i < n for i in drawn)


@given(st.integers(0, MASK64), st.integers(1, 30))
def test_partial_shuffle_is_prefix_of_full_shuffle(seed, n):
    full = partial_shuffle(n, n, SplitMix64(seed))
    assert sorted(full) == list(range(n))
    for k in (0, n // 2, n):
        assert partial_shuffle(n, k, SplitMix64(seed)) == full[:k]


def test_partial_shuffle_rejects_k_above_n():
    with pytest.raises(ParameterError):
        partial_shuffle(3, 4, SplitMix64(0))


def test_permutations_are_roughly_uniform():
    stream = SplitMix64(2024)
    counts = Counter(tuple(partial_shuffle(4, 4, stream)) for _ in range(24_000))
    assert len(counts) == 24
    assert all(850 <= c <= 1150 for c in counts.values())


def test_streams_depend_on_seed_and_id():
    a = content_stream(1, "page_x0_y0_t0").next()
    assert a == content_stream(1, "page_x0_y0_t0").next()
    assert a != content_stream(2, "page_x0_y0_t0").next()
    assert a != content_stream(1, "page_x480_y0_t0").next()
    assert record_seed(5, 0) != record_seed(5, 1)
    assert record_seed(5, 3) == mix64(5, 3)
