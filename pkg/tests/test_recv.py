import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circbcast.recv import DfsCounters, SkipIndexList, dfs_blocks, recv_schedule
from circbcast.skips import baseblock, canonical_skip_sequence, compute_skips
from golden import P17_B, p17_recv_col


def test_skip_index_list_structure():
    links = SkipIndexList(5)
    assert links.live() == [5, 4, 3, 2, 1, 0]
    links.unlink(3)
    assert links.live() == [5, 4, 2, 1, 0]
    links.unlink(5)  # head
    assert links.live() == [4, 2, 1, 0]
    links.unlink(0)  # tail
    assert links.live() == [4, 2, 1]
    # doubly linked consistency over the live nodes
    for e in links.live():
        assert links.prev[links.next[e]] == e or links.next[e] == -1
        assert links.next[links.prev[e]] == e or links.prev[e] == -1
    assert links.prev[links.next[-1]] == -1
    assert links.next[links.prev[-1]] == -1


def test_skip_index_list_stepping_off_removed_node():
    # a walker holding a just-removed index must still step into the live list
    links = SkipIndexList(4)
    links.unlink(4)
    assert links.next[4] == 3
    assert links.live() == [3, 2, 1, 0]


def _raw_dfs(p, r):
    """Run the search exactly as recv_schedule does, without normalization."""
    t = compute_skips(p)
    b = baseblock(r, t)
    links = SkipIndexList(t.q)
    links.unlink(b)
    out = [0] * t.q
    counters = DfsCounters()
    k = dfs_blocks(t, p + r, 0, [2 * p], t.q, 0, out, links, counters)
    return out, b, k, links, counters


def test_dfs_raw_output_p17_r1():
    out, b, k, links, _ = _raw_dfs(17, 1)
    assert b == 0
    assert out == [5, 1, 3, 2, 4]
    assert k == 5


def test_dfs_raw_output_p17_r0():
    out, b, k, _, _ = _raw_dfs(17, 0)
    assert b == 5
    assert sorted(out) == [0, 1, 2, 3, 4]
    assert k == 5


@pytest.mark.parametrize("p", [2, 3, 7, 16, 17, 33, 100])
def test_dfs_accepts_each_index_once(p):
    for r in range(p):
        out, b, k, links, _ = _raw_dfs(p, r)
        q = compute_skips(p).q
        assert k == q
        assert sorted(out + [b]) == list(range(q + 1))
        assert links.live() == []  # everything accepted was also unlinked


def test_recv_goldens_p17():
    t = compute_skips(17)
    for r in range(17):
        rs = recv_schedule(r, t)
        assert rs.b == P17_B[r]
        assert rs.blocks == p17_recv_col(r), r
    assert recv_schedule(1, t).blocks == [0, -4, -2, -3, -1]
    assert recv_schedule(9, t).blocks == [-3, -4, -2, -5, 4]
    assert recv_schedule(0, t).blocks == [-4, -5, -2, -1, -3]


def test_recv_rejects_bad_rank():
    t = compute_skips(8)
    with pytest.raises(ValueError):
        recv_schedule(8, t)
    with pytest.raises(ValueError):
        recv_schedule(-1, t)


def test_recv_p1_empty():
    t = compute_skips(1)
    rs = recv_schedule(0, t)
    assert rs.blocks == [] and rs.b == 0


def _expected_multiset(q, b):
    if b == q:
        return sorted(range(-q, 0))
    return sorted(set(range(-q, 0)) - {b - q} | {b})


@pytest.mark.parametrize("p", list(range(2, 300)) + [512, 1000, 1024])
def test_recv_block_multiset(p):
    t = compute_skips(p)
    for r in range(p):
        rs = recv_schedule(r, t)
        assert sorted(rs.blocks) == _expected_multiset(t.q, rs.b), (p, r)


@pytest.mark.parametrize("p", list(range(2, 300)) + [512, 1000, 1024])
def test_recv_counter_bounds(p):
    t = compute_skips(p)
    for r in range(p):
        c = recv_schedule(r, t).counters
        assert c.recursive_calls <= 2 * t.q, (p, r)
        assert c.admissibility_misses <= 2 * t.q, (p, r)


def test_misses_can_exceed_q():
    # the recursive-call bound is 2q; the miss count is *not* bounded by q
    # (this rank needs 7 > q = 5 failed admissibility checks) but stays
    # within 2q everywhere we test
    t = compute_skips(17)
    c = recv_schedule(2, t).counters
    assert c.admissibility_misses == 7
    assert c.recursive_calls == 5


@pytest.mark.parametrize("q", [1, 2, 3, 4, 6, 10])
def test_power_of_two_rank1_pattern(q):
    # rank 1 receives its baseblock 0 straight away, then trails the
    # previous phase round by round
    p = 1 << q
    rs = recv_schedule(1, compute_skips(p))
    assert rs.blocks == [0] + [k - q for k in range(1, q)]


@pytest.mark.parametrize("p", list(range(2, 300)) + [512, 1024])
def test_baseblock_arrives_at_largest_sequence_index(p):
    t = compute_skips(p)
    for r in range(1, p):
        rs = recv_schedule(r, t)
        e = canonical_skip_sequence(r, t).indices[-1]
        assert rs.blocks[e] == rs.b, (p, r)


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_recv_invariants_random_large_p(data):
    p = data.draw(st.integers(min_value=2, max_value=2**40))
    t = compute_skips(p)
    r = data.draw(st.integers(min_value=0, max_value=p - 1))
    rs = recv_schedule(r, t)
    assert sorted(rs.blocks) == _expected_multiset(t.q, rs.b)
    assert rs.counters.recursive_calls <= 2 * t.q
    assert rs.counters.admissibility_misses <= 2 * t.q
    if r > 0:
        e = canonical_skip_sequence(r, t).indices[-1]
        assert rs.blocks[e] == rs.b
