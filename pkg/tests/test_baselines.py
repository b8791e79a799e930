import itertools
import random

import numpy as np
import pytest

from gen import random_graph
from tgx.baselines import (
    AttentionModel,
    TimeEncoderParams,
    caw_anonymize,
    caw_encode_event,
    caw_walk_set,
    format_walks,
    init_tgn_memory,
    run_tgn_memory,
    tgat_aggregate,
    tgn_att_memory_step,
    time_encode,
)
from tgx.corpus import corpus_build
from tgx.graph import Event, make_graph
from tgx.tct import build_monotone_tct, truncate


def attention_weights(rng, h_dim, t_dim, e_dim, out=4):
    return (
        rng.normal(size=(h_dim + t_dim, out)),
        rng.normal(size=(h_dim + t_dim + e_dim, out)),
        rng.normal(size=(h_dim + t_dim + e_dim, out)),
    )


def test_time_encode():
    p = TimeEncoderParams((1.0, 2.0, 3.0), (0.0, 0.0, 0.0))
    assert np.array_equal(time_encode(0, p), np.ones(3))
    assert np.array_equal(time_encode(2.5, p), time_encode(2.5, p))
    q = TimeEncoderParams.random(5, np.random.default_rng(0))
    assert time_encode(1.0, q).shape == (5,) and q.dim == 5
    with pytest.raises(ValueError):
        TimeEncoderParams((1.0,), ())


def test_single_neighbor_returns_its_value_row():
    rng = np.random.default_rng(1)
    p = TimeEncoderParams.random(3, rng)
    wq, wk, wv = attention_weights(rng, 2, 3, 1)
    h, f, dt = rng.normal(size=2), rng.normal(size=1), 2.0
    got = tgat_aggregate(rng.normal(size=2), [h], [f], [dt], p, wq, wk, wv)
    want = np.concatenate([h, time_encode(dt, p), f]) @ wv
    assert np.allclose(got, want, atol=1e-12)


def test_attention_ignores_neighbor_multiplicity():
    rng = np.random.default_rng(2)
    for _ in range(50):
        p = TimeEncoderParams.random(3, rng)
        wq, wk, wv = attention_weights(rng, 2, 3, 1)
        n = int(rng.integers(1, 4))
        hs = [rng.normal(size=2) for _ in range(n)]
        fs = [rng.normal(size=1) for _ in range(n)]
        dts = [float(rng.integers(0, 4)) for _ in range(n)]
        k = int(rng.integers(2, 5))
        me = rng.normal(size=2)
        once = tgat_aggregate(me, hs, fs, dts, p, wq, wk, wv)
        many = tgat_aggregate(me, hs * k, fs * k, dts * k, p, wq, wk, wv)
        assert np.max(np.abs(once - many)) <= 1e-9


def test_empty_attention_is_zero():
    rng = np.random.default_rng(3)
    p = TimeEncoderParams.random(3, rng)
    wq, wk, wv = attention_weights(rng, 2, 3, 0)
    assert np.array_equal(tgat_aggregate(np.zeros(2), [], [], [], p, wq, wk, wv), np.zeros(4))


def test_attention_models_tie_on_proportion_example():
    case = corpus_build("fig3_left")
    g, n = case.graphs["g"], case.node
    for memory in (False, True):
        for seed in range(10):
            for L in (1, 2):
                h = AttentionModel(L, seed=seed, memory=memory).embeddings(g, 3)
                assert np.max(np.abs(h[n("u")] - h[n("v")])) <= 1e-9


def test_attention_model_is_seeded():
    g = make_graph([(0, 1, 1), (1, 2, 2)], {0: (1,), 1: (0,), 2: (2,)})
    a = AttentionModel(2, seed=3).embeddings(g, 3)
    b = AttentionModel(2, seed=3).embeddings(g, 3)
    c = AttentionModel(2, seed=4).embeddings(g, 3)
    assert all(np.array_equal(a[v], b[v]) for v in g.nodes)
    assert any(not np.allclose(a[v], c[v]) for v in g.nodes)


# --- TGN-Att memory ----------------------------------------------------------------


def test_memory_one_event_uses_its_message():
    g = make_graph([(0, 1, 1)], {0: (1,), 1: (2,)})
    mem = init_tgn_memory(g, dim=3, seed=0)
    assert np.array_equal(mem.states[0], [1.0, 0, 0])
    one = tgn_att_memory_step(mem, [Event(0, 1, 1)])
    twice = tgn_att_memory_step(mem, [Event(0, 1, 1), Event(0, 1, 1)])
    # the mean of two equal messages is that message
    assert np.allclose(one.states[0], twice.states[0], atol=1e-12)
    assert one.last_update[0] == 1


def test_memory_ignores_batch_order():
    rng = random.Random(51)
    for _ in range(40):
        g = random_graph(rng, max_events=12, max_t=3, edge_feats=2)
        mem = init_tgn_memory(g, seed=2)
        for _t, grp in itertools.groupby(g.events, key=lambda e: e.t):
            batch = list(grp)
            other = list(batch)
            rng.shuffle(other)
            a, b = tgn_att_memory_step(mem, batch, 1), tgn_att_memory_step(mem, other, 1)
            for v in g.nodes:
                assert np.max(np.abs(a.states[v] - b.states[v])) <= 1e-12
            mem = a


def test_memory_rejects_stale_batches():
    g = make_graph([(0, 1, 1), (1, 2, 2)])
    mem = run_tgn_memory(g, 3)
    with pytest.raises(ValueError):
        tgn_att_memory_step(mem, [Event(0, 1, 1)])


def test_memory_state_groups_on_proportion_example():
    case = corpus_build("figS2")
    g, n = case.graphs["g"], case.node
    for seed in range(10):
        s = run_tgn_memory(g, 3, seed=seed).states
        for group in (("u", "v", "a"), ("z", "w"), ("b", "c")):
            for x, y in itertools.combinations(group, 2):
                assert np.max(np.abs(s[n(x)] - s[n(y)])) <= 1e-9


# --- CAW ----------------------------------------------------------------------------


def test_isolated_walk_set():
    g = make_graph([(0, 1, 1)], {2: ()})
    s = caw_walk_set(g, 2, 5, 3)
    assert s.walks == (((2, 5),),)
    with pytest.raises(ValueError):
        caw_walk_set(g, 2, 5, 0)


def test_walk_example_listing():
    case = corpus_build("figS3_left")
    g, n = case.graphs["g"], case.node
    su, sv = caw_walk_set(g, n("u"), 3, 3), caw_walk_set(g, n("v"), 3, 3)
    anon = lambda walk: [caw_anonymize(x, su, sv) for x, _ in walk]  # noqa: E731
    got = sorted(anon(w) for w in su.walks + sv.walks)
    u_ = ((0, 1, 0), (1, 0, 0))
    v_ = ((0, 1, 0), (2, 0, 0))
    w_ = ((0, 0, 0), (0, 1, 0))
    z_ = ((0, 0, 0), (0, 0, 1))
    assert got == sorted([[u_, v_], [v_, u_], [v_, w_, z_]])
    assert format_walks(su, sv) == ["{[0, 1, 0], [1, 0, 0]} -> {[0, 1, 0], [2, 0, 0]}  @ 1"]


def test_anonymization_matches_position_recount():
    rng = random.Random(52)
    for _ in range(40):
        g = random_graph(rng, max_events=12)
        t = g.horizon()
        u, v = rng.sample(g.nodes, 2)
        L = rng.randint(1, 4)
        su, sv = caw_walk_set(g, u, t, L), caw_walk_set(g, v, t, L)
        for w in g.nodes:
            tallies = []
            for s in (su, sv):
                c = [0] * L
                for walk in s.walks:
                    for i in range(len(walk)):
                        c[i] += walk[i][0] == w
                tallies.append(tuple(c))
            assert caw_anonymize(w, su, sv) == tuple(sorted(tallies))


def test_walk_counts_match_truncated_tree_leaves():
    rng = random.Random(53)
    for _ in range(40):
        g = random_graph(rng, max_events=12)
        t = g.horizon()
        for v in g.nodes:
            for L in (1, 2, 3):
                tree = truncate(build_monotone_tct(g, v, t), L - 1)
                leaves = sum(1 for x in tree.root.walk() if not x.children)
                assert len(caw_walk_set(g, v, t, L)) == leaves


def test_event_code_is_symmetric_and_label_free():
    rng = random.Random(54)
    for _ in range(40):
        g = random_graph(rng, max_events=12)
        t = g.horizon()
        u, v = rng.sample(g.nodes, 2)
        code = caw_encode_event(g, u, v, t, 3)
        assert code == caw_encode_event(g, v, u, t, 3)
        perm = list(g.nodes)
        rng.shuffle(perm)
        relabel = dict(zip(g.nodes, perm))
        h = make_graph(
            [(relabel[e.u], relabel[e.v], e.t, e.feat) for e in g.events],
            {relabel[x]: f for x, f in g.node_feats.items()},
        )
        assert caw_encode_event(h, relabel[u], relabel[v], t, 3) == code


def test_event_code_examples():
    left = corpus_build("figS3_left")
    g, n = left.graphs["g"], left.node
    assert caw_encode_event(g, n("u"), n("v"), 3, 3) != caw_encode_event(g, n("z"), n("v"), 3, 3)
    right = corpus_build("figS3_right")
    g, n = right.graphs["g"], right.node
    assert caw_encode_event(g, n("u"), n("z"), 4, 2) == caw_encode_event(g, n("u'"), n("z"), 4, 2)
