"""Multicast cost-sharing games on general undirected graphs.

Edges are kept in a list so parallel edges are allowed; an edge is named by
its index. All arithmetic is exact over ``Fraction``.
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .rational import format_fraction, ratio, to_fraction
from .ring import RingGame

MAX_EXACT_TERMINALS = 12


class InfeasibleError(ValueError):
    """Some source cannot reach the target."""


class TooManyTerminalsError(ValueError):
    pass


@dataclass(frozen=True)
class MulticastGraphGame:
    vertices: int
    edges: tuple  # (u, v, cost)
    sources: tuple
    target: int

    def __post_init__(self):
        edges = tuple((int(u), int(v), to_fraction(c)) for u, v, c in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "sources", tuple(int(s) for s in self.sources))
        if self.vertices < 1:
            raise ValueError("graph needs at least one vertex")
        for k, (u, v, c) in enumerate(edges):
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError(f"edge {k} has an endpoint outside 0..{self.vertices - 1}")
            if c < 0:
                raise ValueError(f"edge {k} has negative cost {c}")
        for s in self.sources + (self.target,):
            if not 0 <= s < self.vertices:
                raise ValueError(f"vertex {s} outside 0..{self.vertices - 1}")
        if not self.sources:
            raise ValueError("at least one source is required")

    @property
    def n(self) -> int:
        return len(self.sources)

    def adjacency(self) -> list:
        adj = [[] for _ in range(self.vertices)]
        for k, (u, v, _) in enumerate(self.edges):
            adj[u].append((v, k))
            if v != u:
                adj[v].append((u, k))
        return adj

    def cost_of(self, edge_ids) -> Fraction:
        return sum((self.edges[k][2] for k in set(edge_ids)), Fraction(0))

    @classmethod
    def from_ring(cls, game: RingGame) -> "MulticastGraphGame":
        """Player i at vertex i, target at vertex n; edge i joins i-1 and i."""
        n = game.n
        t = n
        edges = [(t, 0, game[0])]
        edges += [(i - 1, i, game[i]) for i in range(1, n)]
        edges.append((n - 1, t, game[n]))
        return cls(n + 1, tuple(edges), tuple(range(n)), t)

    def to_json(self) -> dict:
        return {"vertices": self.vertices,
                "edges": [[u, v, format_fraction(c)] for u, v, c in self.edges],
                "sources": list(self.sources), "target": self.target}

    @classmethod
    def from_json(cls, data) -> "MulticastGraphGame":
        if isinstance(data, str):
            data = json.loads(data)
        for key in ("vertices", "edges", "sources", "target"):
            if key not in data:
                raise ValueError(f"graph instance: missing field {key!r}")
        edges = []
        for k, item in enumerate(data["edges"]):
            if not isinstance(item, (list, tuple)) or len(item) != 3:
                raise ValueError(f"graph instance: edges[{k}] must be [u, v, cost]")
            try:
                edges.append((item[0], item[1], to_fraction(item[2])))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"graph instance: edges[{k}] cost: {exc}") from None
        return cls(int(data["vertices"]), tuple(edges), tuple(data["sources"]),
                   int(data["target"]))


# --------------------------------------------------------------------------
# shortest paths


@dataclass(frozen=True)
class Path:
    cost: Fraction
    vertices: tuple
    edges: tuple


def shortest_paths(game: MulticastGraphGame, source: int, weights: Sequence[Fraction],
                   adj=None) -> dict:
    """Label-setting search from ``source``.

    Labels are (distance, vertex sequence, edge sequence); among equal
    distances the lexicographically smallest vertex sequence wins.
    """
    adj = adj if adj is not None else game.adjacency()
    best = {}
    heap = [(Fraction(0), (source,), ())]
    while heap:
        d, verts, eds = heapq.heappop(heap)
        v = verts[-1]
        if v in best:
            continue
        best[v] = Path(d, verts, eds)
        for w, k in adj[v]:
            if w not in best:
                heapq.heappush(heap, (d + weights[k], verts + (w,), eds + (k,)))
    return best


def shortest_path(game, source, target, weights, adj=None) -> Path:
    found = shortest_paths(game, source, weights, adj).get(target)
    if found is None:
        raise InfeasibleError(f"vertex {target} is unreachable from {source}")
    return found


# --------------------------------------------------------------------------
# Steiner trees


@dataclass(frozen=True)
class SteinerTree:
    edges: frozenset
    cost: Fraction
    approximate: bool = False

    def to_json(self) -> dict:
        return {"edges": sorted(self.edges), "cost": format_fraction(self.cost),
                "approximate": self.approximate}


def _terminals(game) -> list:
    return sorted(set(game.sources) | {game.target})


def _prune(game, edge_ids, terminals) -> frozenset:
    """Spanning tree of the chosen edges with non-terminal leaves removed."""
    adj = {}
    for k in sorted(edge_ids):
        u, v, _ = game.edges[k]
        if u == v:
            continue
        adj.setdefault(u, []).append((v, k))
        adj.setdefault(v, []).append((u, k))
    root = game.target
    kept, seen, stack = set(), {root}, [root]
    while stack:
        x = stack.pop()
        for y, k in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                kept.add(k)
                stack.append(y)
    terms = set(terminals)
    while True:
        degree = {}
        for k in kept:
            u, v, _ = game.edges[k]
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        leaves = [k for k in kept
                  if any(degree[x] == 1 and x not in terms for x in game.edges[k][:2])]
        if not leaves:
            return frozenset(kept)
        kept.difference_update(leaves)


def steiner_tree_exact(game: MulticastGraphGame,
                       max_terminals: int = MAX_EXACT_TERMINALS) -> SteinerTree:
    """Minimum Steiner tree by dynamic programming over terminal subsets."""
    terminals = _terminals(game)
    if len(terminals) > max_terminals:
        raise TooManyTerminalsError(
            f"{len(terminals)} terminals exceed the exact limit {max_terminals}; "
            "use steiner_tree_approx for a 2-approximation")
    weights = [c for _, _, c in game.edges]
    adj = game.adjacency()
    paths = [shortest_paths(game, v, weights, adj) for v in range(game.vertices)]
    root = game.target
    for s in terminals:
        if s not in paths[root]:
            raise InfeasibleError(f"terminal {s} is not connected to the target {root}")
    others = [s for s in terminals if s != root]
    if not others:
        return SteinerTree(frozenset(), Fraction(0))
    verts = sorted(paths[root])  # component of the target
    m = len(others)
    full = (1 << m) - 1
    inf = None
    # tree[S][v]: cheapest tree joining terminals S and vertex v
    tree = [dict() for _ in range(full + 1)]
    how = [dict() for _ in range(full + 1)]
    for j, s in enumerate(others):
        for v in verts:
            tree[1 << j][v] = paths[s][v].cost
            how[1 << j][v] = ("path", s)
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        low = mask & -mask
        merged = {}
        split = {}
        for v in verts:
            best, arg = inf, None
            sub = (mask - 1) & mask
            while sub:
                if sub & low:
                    val = tree[sub][v] + tree[mask ^ sub][v]
                    if best is None or val < best:
                        best, arg = val, sub
                sub = (sub - 1) & mask
            merged[v], split[v] = best, arg
        for v in verts:
            best, via = None, None
            for u in verts:
                val = merged[u] + paths[u][v].cost
                if best is None or val < best:
                    best, via = val, u
            tree[mask][v] = best
            how[mask][v] = ("join", via, split[via])

    chosen = set()

    def build(mask, v):
        kind = how[mask][v]
        if kind[0] == "path":
            chosen.update(paths[kind[1]][v].edges)
            return
        _, u, sub = kind
        chosen.update(paths[u][v].edges)
        build(sub, u)
        build(mask ^ sub, u)

    build(full, root)
    kept = _prune(game, chosen, terminals)
    cost = game.cost_of(kept)
    if cost != tree[full][root]:
        raise AssertionError("Steiner reconstruction does not match its DP value")
    return SteinerTree(kept, cost)


def steiner_tree_approx(game: MulticastGraphGame) -> SteinerTree:
    """Shortest-path-metric MST over the terminals; a 2-approximation."""
    terminals = _terminals(game)
    weights = [c for _, _, c in game.edges]
    adj = game.adjacency()
    paths = {s: shortest_paths(game, s, weights, adj) for s in terminals}
    for s in terminals:
        if game.target not in paths[s]:
            raise InfeasibleError(f"terminal {s} is not connected to the target")
    in_tree, chosen = {terminals[0]}, set()
    while len(in_tree) < len(terminals):
        _, a, b = min((paths[a][b].cost, a, b) for a in in_tree
                      for b in terminals if b not in in_tree)
        chosen.update(paths[a][b].edges)
        in_tree.add(b)
    kept = _prune(game, chosen, terminals)
    return SteinerTree(kept, game.cost_of(kept), approximate=True)


# --------------------------------------------------------------------------
# arrival order and play


def _tree_adjacency(game, tree: SteinerTree) -> dict:
    adj = {game.target: []}
    for k in tree.edges:
        u, v, c = game.edges[k]
        adj.setdefault(u, []).append((v, c))
        adj.setdefault(v, []).append((u, c))
    return adj


def tree_distances(game, tree: SteinerTree, start: int) -> dict:
    adj = _tree_adjacency(game, tree)
    if start not in adj:
        raise ValueError(f"vertex {start} is not on the tree")
    dist, stack = {start: Fraction(0)}, [start]
    while stack:
        x = stack.pop()
        for y, c in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + c
                stack.append(y)
    return dist


def dfs_order(tree: SteinerTree, game: MulticastGraphGame) -> tuple:
    """Players by first DFS visit of their source, rooted at the target.

    Children are visited in ascending vertex id; players sharing a vertex
    keep index order.
    """
    adj = _tree_adjacency(game, tree)
    first, seen = {}, set()
    stack = [game.target]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        first[x] = len(first)
        for y in sorted((y for y, _ in adj[x]), reverse=True):
            if y not in seen:
                stack.append(y)
    missing = [s for s in game.sources if s not in first]
    if missing:
        raise RuntimeError(f"sources {missing} are not on the Steiner tree")
    return tuple(sorted(range(game.n), key=lambda i: (first[game.sources[i]], i)))


@dataclass(frozen=True)
class Bound4Record:
    player: int
    myopic_cost: Fraction  # S_i
    alone_cost: Fraction  # B_i
    tree_distance: Fraction | None  # d_T to previous source (to t for the first)

    def to_json(self) -> dict:
        return {"player": self.player, "S": format_fraction(self.myopic_cost),
                "B": format_fraction(self.alone_cost),
                "d_T": None if self.tree_distance is None
                else format_fraction(self.tree_distance)}


@dataclass
class GraphOutcome:
    order: tuple
    paths: dict  # player -> Path actually taken (cost = myopic share)
    cost: Fraction
    trace: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"order": list(self.order), "cost": format_fraction(self.cost),
                "paths": {str(p): list(self.paths[p].edges) for p in self.order},
                "trace": [r.to_json() for r in self.trace]}


def graph_sequential_play(game: MulticastGraphGame, order: Sequence[int],
                          tree: SteinerTree | None = None) -> GraphOutcome:
    """Each arrival takes a cheapest path under weights c_e / (load_e + 1).

    When ``tree`` is given, the trace also records tree distances between
    consecutive sources.
    """
    order = tuple(int(p) for p in order)
    if sorted(order) != list(range(game.n)):
        raise ValueError(f"arrival order must be a permutation of 0..{game.n - 1}")
    adj = game.adjacency()
    loads = [0] * len(game.edges)
    taken, trace = {}, []
    prev = game.target
    for p in order:
        s = game.sources[p]
        weights = [c / (loads[k] + 1) for k, (_, _, c) in enumerate(game.edges)]
        path = shortest_path(game, s, game.target, weights, adj)
        alone = sum((game.edges[k][2] for k in set(path.edges) if loads[k] == 0), Fraction(0))
        for k in set(path.edges):
            loads[k] += 1
        taken[p] = path
        d_t = tree_distances(game, tree, s)[prev] if tree is not None else None
        trace.append(Bound4Record(p, path.cost, alone, d_t))
        prev = s
    cost = sum((c for (_, _, c), k in zip(game.edges, loads) if k), Fraction(0))
    return GraphOutcome(order, taken, cost, trace)


@dataclass
class Bound4Report:
    tree: SteinerTree
    outcome: GraphOutcome
    checks: dict
    violations: list

    @property
    def ratio(self) -> Fraction:
        return ratio(self.outcome.cost, self.tree.cost)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"tree": self.tree.to_json(), "outcome": self.outcome.to_json(),
                "ratio": format_fraction(self.ratio), "ratio_decimal": float(self.ratio),
                "checks": self.checks, "violations": self.violations}


def verify_bound4(game: MulticastGraphGame, tree: SteinerTree | None = None) -> Bound4Report:
    """Play the DFS order of an optimal tree and check each step of the 4-bound."""
    tree = tree if tree is not None else steiner_tree_exact(game)
    order = dfs_order(tree, game)
    out = graph_sequential_play(game, order, tree)
    tr = out.trace
    chain = all(tr[i].myopic_cost
                <= tr[i].tree_distance + tr[i - 1].myopic_cost - tr[i - 1].alone_cost / 2
                for i in range(1, len(tr)))
    checks = {
        "S_0 <= d_T(s_0, t)": tr[0].myopic_cost <= tr[0].tree_distance,
        "S_i <= d_T(s_i, s_i-1) + S_i-1 - B_i-1/2": chain,
        "S_last >= B_last/2": tr[-1].myopic_cost >= tr[-1].alone_cost / 2,
        "sum B_i = cost": sum((r.alone_cost for r in tr), Fraction(0)) == out.cost,
        "cost <= 4 cost(T)": out.cost <= 4 * tree.cost,
    }
    violations = [name for name, held in checks.items() if not held]
    return Bound4Report(tree, out, checks, violations)


# --------------------------------------------------------------------------
# instance generation and search


def random_graph(rng: random.Random, vertices: int = 20, players: int | None = None,
                 extra_edges: int | None = None, high: int = 20) -> MulticastGraphGame:
    """Random spanning tree plus extra edges; at most 8 terminals by default."""
    if players is None:
        players = rng.randint(1, 7)
    if extra_edges is None:
        extra_edges = rng.randint(0, vertices)
    edges = []
    for v in range(1, vertices):
        edges.append((rng.randrange(v), v, Fraction(rng.randint(1, high))))
    for _ in range(extra_edges):
        u, v = rng.sample(range(vertices), 2)
        edges.append((u, v, Fraction(rng.randint(1, high))))
    perm = list(range(vertices))
    rng.shuffle(perm)
    edges = [(perm[u], perm[v], c) for u, v, c in edges]
    target = rng.randrange(vertices)
    sources = [rng.randrange(vertices) for _ in range(players)]
    return MulticastGraphGame(vertices, tuple(edges), tuple(sources), target)


@dataclass
class Bound4Search:
    trials: int
    seed: int
    best_ratio: Fraction
    best_game: MulticastGraphGame
    all_ok: bool

    def to_json(self) -> dict:
        return {"trials": self.trials, "seed": self.seed,
                "best_ratio": format_fraction(self.best_ratio),
                "best_ratio_decimal": float(self.best_ratio),
                "instance": self.best_game.to_json(), "all_inequalities_hold": self.all_ok}


def search_bound4(trials: int = 100, seed: int = 0, vertices: int = 12,
                  steps: int = 50) -> Bound4Search:
    """Random instances with cost perturbation; records the worst DFS-order ratio."""
    rng = random.Random(seed)
    best_ratio, best_game, all_ok = Fraction(0), None, True
    for _ in range(trials):
        game = random_graph(rng, vertices)
        rep = verify_bound4(game)
        all_ok &= rep.ok
        cur = rep.ratio
        for _ in range(steps):
            edges = list(game.edges)
            k = rng.randrange(len(edges))
            u, v, _ = edges[k]
            edges[k] = (u, v, Fraction(rng.randint(0, 40)))
            cand = MulticastGraphGame(game.vertices, tuple(edges), game.sources, game.target)
            r = verify_bound4(cand)
            all_ok &= r.ok
            if r.ratio >= cur:
                game, cur = cand, r.ratio
        if best_game is None or cur > best_ratio:
            best_ratio, best_game = cur, game
    return Bound4Search(trials, seed, best_ratio, best_game, all_ok)


def enumerate_simple_paths(game: MulticastGraphGame, source: int, target: int):
    """Every simple path as an edge-id tuple; for small graphs only."""
    adj = game.adjacency()

    def walk(v, seen, eds):
        if v == target:
            yield eds
            return
        for w, k in adj[v]:
            if w not in seen:
                yield from walk(w, seen | {w}, eds + (k,))

    yield from walk(source, {source}, ())

