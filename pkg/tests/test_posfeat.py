import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gen import graphs, random_graph
from tgx.graph import Event, make_graph
from tgx.posfeat import (
    apply_batch,
    brute_force_counts,
    build_store,
    dump_store,
    get_feature,
    init_store,
    normalize_l1,
    shift,
)
from tgx.tct import temporal_diameter


def walk_counts(g, u, t, d) -> dict[int, list[int]]:
    """Count time-decreasing walks from ``u`` by endpoint and length, by direct search."""
    out: dict[int, list[int]] = {}

    def rec(node, bound, k):
        out.setdefault(node, [0] * d)[k] += 1
        if k + 1 == d:
            return
        for e in g.events:
            if e.t < bound and node in (e.u, e.v):
                rec(e.other(node), e.t, k + 1)

    rec(u, t, 0)
    return out


def test_init_store():
    s = init_store([5], 4)
    assert get_feature(s, 5, 5) == (1, 0, 0, 0)
    assert get_feature(s, 5, 6) == (0, 0, 0, 0)
    assert s.reach == {5: {5}} and s.clock == 0
    with pytest.raises(ValueError):
        init_store([1], 0)


def test_shift():
    assert shift((1, 2, 3)) == (0, 1, 2)
    assert shift((7,)) == (0,)


def test_single_event():
    s = init_store([0, 1], 3)
    apply_batch(s, [Event(0, 1, 1)])
    assert get_feature(s, 0, 1) == (0, 1, 0)
    assert get_feature(s, 1, 0) == (0, 1, 0)
    assert get_feature(s, 0, 0) == (1, 0, 0)
    assert s.clock == 1 and s.reach[1] == {0, 1}


def test_empty_batch_is_noop():
    s = init_store([0, 1], 3)
    before = dict(s.vecs)
    apply_batch(s, [])
    assert s.vecs == before


def test_batch_errors():
    s = init_store([0, 1, 2], 3)
    with pytest.raises(ValueError):
        apply_batch(s, [Event(0, 1, 1), Event(1, 2, 2)])
    apply_batch(s, [Event(0, 1, 2)])
    with pytest.raises(ValueError):
        apply_batch(s, [Event(1, 2, 2)])
    with pytest.raises(ValueError):
        apply_batch(s, [Event(1, 2, 1)])


def test_same_time_events_are_simultaneous():
    # a path built at a single time must not chain through the middle node
    s = init_store([0, 1, 2], 3)
    apply_batch(s, [Event(0, 1, 1), Event(1, 2, 1)])
    assert get_feature(s, 0, 2) == (0, 0, 0)
    assert get_feature(s, 0, 1) == (0, 1, 0)


def test_repeated_partner_counts_twice():
    s = build_store(make_graph([(0, 1, 1), (0, 1, 1)]), 3)
    assert get_feature(s, 0, 1) == (0, 2, 0)


def test_chain_example():
    g = make_graph([(0, 1, 1), (1, 2, 2)])
    assert brute_force_counts(g, 0, 2, 3, 4) == (0, 0, 1, 0)
    assert get_feature(build_store(g, 4), 0, 2) == (0, 0, 1, 0)


def test_normalize_l1():
    assert normalize_l1([1, 0, 0, 0]) == [1, 0, 0, 0]
    assert normalize_l1([2, 2, 0, 0]) == [Fraction(1, 2), Fraction(1, 2), 0, 0]
    assert normalize_l1([0, 0]) == [0, 0]


def test_incremental_matches_tree_counts():
    rng = random.Random(21)
    for _ in range(200):
        g = random_graph(rng, max_nodes=8, max_events=30, max_t=8)
        t = g.horizon()
        store = build_store(g, 6)
        for u in g.nodes:
            for i in g.nodes:
                assert get_feature(store, i, u) == brute_force_counts(g, i, u, t, 6)


@settings(max_examples=80)
@given(graphs(max_events=14), st.integers(1, 5))
def test_counts_are_decreasing_walk_counts(g, d):
    t = g.horizon()
    store = build_store(g, d)
    for u in g.nodes:
        walks = walk_counts(g, u, t, d)
        for i in g.nodes:
            assert list(get_feature(store, i, u)) == walks.get(i, [0] * d)


@settings(max_examples=80)
@given(graphs(max_events=14), st.integers(1, 5))
def test_layer_zero_marks_the_root(g, d):
    store = build_store(g, d)
    for u in g.nodes:
        for i in g.nodes:
            assert get_feature(store, i, u)[0] == int(i == u)


@settings(max_examples=60)
@given(graphs(max_events=14))
def test_counts_never_decrease(g):
    times = sorted({e.t for e in g.events}) + [g.horizon()]
    prev = None
    for t in times:
        cur = build_store(g, 5, t)
        if prev is not None:
            for key, v in prev.vecs.items():
                assert all(a <= b for a, b in zip(v, get_feature(cur, *key)))
        prev = cur


@settings(max_examples=60)
@given(graphs(max_events=12), st.integers(1, 6))
def test_batch_touches_only_participants(g, t):
    before = build_store(g, 4, t)
    after = build_store(g, 4, t + 1)
    touched = {x for e in g.events if e.t == t for x in (e.u, e.v)}
    for (i, u), v in after.vecs.items():
        if u not in touched:
            assert v == get_feature(before, i, u)


@settings(max_examples=60)
@given(graphs(max_events=12))
def test_reach_matches_nonzero_when_dimension_covers_diameter(g):
    t = g.horizon()
    d = temporal_diameter(g, t) + 1
    store = build_store(g, d)
    for u in g.nodes:
        nz = {i for i in g.nodes if any(get_feature(store, i, u))}
        assert store.reach[u] == nz | {u}


def test_dump_store():
    g = make_graph([(0, 1, 1), (0, 1, 1)])
    s = build_store(g, 2)
    assert dump_store(s).splitlines() == ["0 0 1,0", "0 1 0,2", "1 0 0,2", "1 1 1,0"]
    assert dump_store(s, normalize=True).splitlines()[1] == "0 1 0,1"
