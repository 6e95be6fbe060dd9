from fractions import Fraction as F
import random

import pytest

import oracles
from ringcast.graph import (
    InfeasibleError, MulticastGraphGame, TooManyTerminalsError, dfs_order,
    graph_sequential_play, random_graph, search_bound4, shortest_path, steiner_tree_approx,
    steiner_tree_exact, tree_distances, verify_bound4,
)
from ringcast.ring import RingGame, optimum
from ringcast.sequential import sequential_play


def G(vertices, edges, sources, target):
    return MulticastGraphGame(vertices, tuple(edges), tuple(sources), target)


def test_validation():
    with pytest.raises(ValueError):
        G(2, [(0, 2, 1)], [0], 1)
    with pytest.raises(ValueError):
        G(2, [(0, 1, -1)], [0], 1)
    with pytest.raises(ValueError):
        G(2, [(0, 1, 1)], [], 1)


def test_json_round_trip_and_errors():
    g = G(3, [(0, 1, F(1, 3)), (1, 2, 2), (0, 2, 5)], [1, 2], 0)
    assert MulticastGraphGame.from_json(g.to_json()) == g
    with pytest.raises(ValueError, match="missing field 'target'"):
        MulticastGraphGame.from_json({"vertices": 2, "edges": [], "sources": [0]})
    with pytest.raises(ValueError, match=r"edges\[0\]"):
        MulticastGraphGame.from_json({"vertices": 2, "edges": [[0, 1]], "sources": [0],
                                      "target": 1})


def test_trivial_steiner_trees():
    g = G(3, [(0, 1, 1), (1, 2, 1)], [0, 0], 0)
    assert steiner_tree_exact(g).cost == 0
    star = G(4, [(0, 1, 2), (0, 2, 3), (0, 3, 5)], [1, 2, 3], 0)
    t = steiner_tree_exact(star)
    assert t.edges == frozenset({0, 1, 2}) and t.cost == 10
    assert dfs_order(t, star) == (0, 1, 2)


def test_path_graph_order():
    g = G(3, [(0, 1, 1), (1, 2, 1)], [1, 2], 0)
    assert dfs_order(steiner_tree_exact(g), g) == (0, 1)


def test_dfs_visits_children_by_vertex_id():
    # target 0 with subtrees rooted at 2 (holding source 4) and 1 (holding source 3)
    g = G(5, [(0, 2, 1), (2, 4, 1), (0, 1, 1), (1, 3, 1)], [4, 3, 1], 0)
    assert dfs_order(steiner_tree_exact(g), g) == (2, 1, 0)


def test_infeasible_and_limits():
    g = G(3, [(0, 1, 1)], [2], 0)
    with pytest.raises(InfeasibleError):
        steiner_tree_exact(g)
    with pytest.raises(InfeasibleError):
        graph_sequential_play(g, (0,))
    big = G(14, [(0, k, 1) for k in range(1, 14)], list(range(1, 14)), 0)
    with pytest.raises(TooManyTerminalsError, match="2-approximation"):
        steiner_tree_exact(big)
    approx = steiner_tree_approx(big)
    assert approx.approximate and approx.cost == 13


def test_independent_paths():
    g = G(3, [(0, 1, 2), (0, 2, 3), (1, 2, 100)], [1, 2], 0)
    out = graph_sequential_play(g, (0, 1))
    assert out.cost == 5
    assert [r.alone_cost for r in out.trace] == [2, 3]


def test_lexicographic_tie_break():
    # two equal routes 1-2-0 and 1-3-0: the smaller vertex sequence wins
    g = G(4, [(1, 3, 1), (3, 0, 1), (1, 2, 1), (2, 0, 1)], [1], 0)
    p = shortest_path(g, 1, 0, [c for _, _, c in g.edges])
    assert p.vertices == (1, 2, 0)
    # parallel edges: lower edge id wins
    h = G(2, [(0, 1, 1), (0, 1, 1)], [1], 0)
    assert shortest_path(h, 1, 0, [1, 1]).edges == (0,)


def test_single_player_bound():
    g = G(3, [(0, 1, 2), (1, 2, 1), (0, 2, 4)], [2], 0)
    rep = verify_bound4(g)
    assert rep.ratio == 1
    assert rep.outcome.trace[0].myopic_cost == rep.outcome.trace[0].alone_cost == 3
    assert rep.tree.cost == 3


def _small_graph(rng):
    v = rng.randint(2, 6)
    edges = [(rng.randrange(k), k, F(rng.randint(0, 9))) for k in range(1, v)]
    for _ in range(rng.randint(0, 4)):
        a, b = rng.sample(range(v), 2)
        edges.append((a, b, F(rng.randint(0, 9))))
    sources = [rng.randrange(v) for _ in range(rng.randint(1, 3))]
    return G(v, edges, sources, rng.randrange(v))


def test_steiner_matches_bruteforce():
    rng = random.Random(0)
    for _ in range(150):
        g = _small_graph(rng)
        t = steiner_tree_exact(g)
        terms = set(g.sources) | {g.target}
        assert t.cost == oracles.steiner_brute(g.vertices, g.edges, terms)
        assert oracles.connected(g.vertices, [g.edges[k][:2] for k in t.edges], terms)
        if t.edges:  # connected with |V| - 1 edges, hence acyclic
            assert len({v for k in t.edges for v in g.edges[k][:2]}) == len(t.edges) + 1


def test_myopic_shares_match_path_enumeration():
    rng = random.Random(1)
    for _ in range(80):
        g = _small_graph(rng)
        order = list(range(g.n))
        rng.shuffle(order)
        out = graph_sequential_play(g, order)
        loads = [0] * len(g.edges)
        for rec in out.trace:
            s = g.sources[rec.player]
            cands = oracles.simple_paths(g.vertices, g.edges, s, g.target)
            best = min(sum(g.edges[k][2] / (loads[k] + 1) for k in p) for p in cands)
            assert rec.myopic_cost == best
            for k in set(out.paths[rec.player].edges):
                loads[k] += 1
        assert sum(r.alone_cost for r in out.trace) == out.cost


def test_ring_embedding_matches_ring_play():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.randint(1, 8)
        ring = RingGame(tuple(F(rng.randint(1, 10 ** 6), rng.randint(1, 997))
                              for _ in range(n + 1)))
        g = MulticastGraphGame.from_ring(ring)
        assert steiner_tree_exact(g).cost == optimum(ring).cost
        order = list(range(n))
        rng.shuffle(order)
        assert graph_sequential_play(g, order).cost == sequential_play(ring, order).cost


def test_bound4_on_random_graphs():
    rng = random.Random(3)
    for _ in range(25):
        g = random_graph(rng, vertices=12)
        rep = verify_bound4(g)
        assert rep.ok, rep.violations
        assert rep.ratio <= 4
        assert all(rep.checks.values())


def test_tree_distances():
    g = G(4, [(0, 1, 2), (1, 2, 3), (1, 3, 1)], [2, 3], 0)
    t = steiner_tree_exact(g)
    d = tree_distances(g, t, 2)
    assert d[3] == 4 and d[0] == 5


def test_search_records_best_ratio():
    res = search_bound4(trials=3, seed=1, vertices=8, steps=10)
    assert res.all_ok
    assert 1 <= res.best_ratio <= 4
    assert verify_bound4(res.best_game).ratio == res.best_ratio
