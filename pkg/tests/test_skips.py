import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circbcast.skips import (
    baseblock,
    canonical_skip_sequence,
    compute_skips,
    from_proc,
    to_proc,
)
from golden import P16_B, P17_B, P17_SKIPS


def test_compute_skips_examples():
    assert compute_skips(16).skips == (1, 2, 4, 8, 16)
    assert compute_skips(16).q == 4
    assert compute_skips(17).skips == P17_SKIPS
    assert compute_skips(17).q == 5
    assert compute_skips(1).skips == (1,)
    assert compute_skips(1).q == 0


def test_compute_skips_rejects_bad_p():
    with pytest.raises(ValueError):
        compute_skips(0)
    with pytest.raises(ValueError):
        compute_skips(-4)


def _check_table_invariants(t):
    p, q, s = t.p, t.q, t.skips
    assert s[q] == p
    assert q == (p - 1).bit_length()
    if p >= 2:
        assert s[0] == 1 and s[1] == 2
    for k in range(q):
        assert s[k] == s[k + 1] - s[k + 1] // 2
        assert s[k] + s[k] >= s[k + 1]
        assert s[k] < s[k + 1]
    for k in range(q):
        assert 1 + sum(s[:k]) >= s[k]
    for k in range(1, q):
        assert sum(s[: k - 1]) < s[k]


@pytest.mark.parametrize("p", list(range(1, 300)) + [1023, 1024, 1025, 2**20 - 1])
def test_table_invariants(p):
    _check_table_invariants(compute_skips(p))


def test_at_most_two_tunnel_indices():
    # s[k-2] + s[k-1] == s[k] can only happen at k = 2 or k = 3
    for p in range(2, 3000):
        s = compute_skips(p).skips
        eq = [k for k in range(2, len(s) - 1) if s[k - 2] + s[k - 1] == s[k]]
        assert len(eq) <= 2
        assert all(k in (2, 3) for k in eq)


def test_cross_sums_dominated_by_endpoints():
    # if s[e] + s[k] < r then every interior pairing s[e-i] + s[k+i] < r too;
    # equivalently the endpoint pairing is the maximum
    for p in range(2, 600):
        s = compute_skips(p).skips
        q = len(s) - 1
        for e in range(1, q):
            for k in range(e):
                bound = s[e] + s[k]
                for i in range(e - k + 1):
                    assert s[e - i] + s[k + i] <= bound


def test_baseblock_goldens():
    t = compute_skips(17)
    assert [baseblock(r, t) for r in range(17)] == P17_B
    assert baseblock(3, t) == 2
    assert baseblock(9, t) == 4
    assert baseblock(0, t) == 5
    t16 = compute_skips(16)
    assert [baseblock(r, t16) for r in range(16)] == P16_B
    assert baseblock(8, t16) == 3


def test_baseblock_rejects_bad_rank():
    t = compute_skips(17)
    with pytest.raises(ValueError):
        baseblock(17, t)
    with pytest.raises(ValueError):
        baseblock(-1, t)


def test_canonical_sequence_examples():
    t = compute_skips(17)
    assert canonical_skip_sequence(0, t).indices == ()
    assert canonical_skip_sequence(14, t).indices == (3, 4)  # 5 + 9
    t16 = compute_skips(16)
    assert canonical_skip_sequence(11, t16).indices == (0, 1, 3)  # 1 + 2 + 8


def test_canonical_prefers_larger_skip():
    # 3 = 1 + 2 = skips[2] for p=17; the canonical choice is the single skip
    t = compute_skips(17)
    assert canonical_skip_sequence(3, t).indices == (2,)
    assert canonical_skip_sequence(5, t).indices == (3,)


@pytest.mark.parametrize("p", list(range(1, 400)) + [1024, 1031])
def test_canonical_sequence_properties(p):
    t = compute_skips(p)
    for r in range(p):
        seq = canonical_skip_sequence(r, t)
        assert seq.target == r
        assert sum(t.skips[e] for e in seq.indices) == r
        assert list(seq.indices) == sorted(set(seq.indices))
        assert (len(seq.indices) == 0) == (r == 0)
        # length is at most q, with equality possible only at r = 2**q - 1
        assert len(seq.indices) <= t.q
        if len(seq.indices) == t.q:
            assert r == (1 << t.q) - 1
        if r > 0:
            assert seq.indices[0] == baseblock(r, t)


def test_power_of_two_sequences_are_bits():
    t = compute_skips(64)
    for r in range(64):
        bits = tuple(i for i in range(6) if r >> i & 1)
        assert canonical_skip_sequence(r, t).indices == bits


def test_to_from_proc():
    t = compute_skips(17)
    assert to_proc(0, 3, t) == 5
    assert from_proc(0, 3, t) == 12
    assert to_proc(16, 1, t) == 1
    assert from_proc(16, 1, t) == 14
    for p in (2, 5, 16, 17, 100):
        tp = compute_skips(p)
        for r in range(p):
            for k in range(tp.q):
                assert from_proc(to_proc(r, k, tp), k, tp) == r


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=1, max_value=2**40))
def test_table_invariants_random_p(p):
    _check_table_invariants(compute_skips(p))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_canonical_sequence_random(data):
    p = data.draw(st.integers(min_value=2, max_value=2**40))
    t = compute_skips(p)
    r = data.draw(st.integers(min_value=0, max_value=p - 1))
    seq = canonical_skip_sequence(r, t)
    assert sum(t.skips[e] for e in seq.indices) == r
    assert len(seq.indices) <= t.q
    if r > 0:
        assert seq.indices[0] == baseblock(r, t)
    k = data.draw(st.integers(min_value=0, max_value=t.q - 1))
    assert from_proc(to_proc(r, k, t), k, t) == r
