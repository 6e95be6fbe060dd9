"""Multicast ring game: edge costs, paths, loads, potential and optimum.

Indexing follows the usual ring picture. Player ``i`` sits on node ``i`` and
edge ``i`` joins node ``i - 1`` to node ``i``; edges ``0`` and ``n`` both touch
the target. Going LEFT uses edges ``i, i-1, ..., 0``; going RIGHT uses edges
``i+1, ..., n``.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .rational import RationalLike, format_fraction, harmonic, to_fraction


class Direction(enum.IntEnum):
    LEFT = 0
    RIGHT = 1

    def flip(self) -> "Direction":
        return Direction(1 - self)

    @property
    def letter(self) -> str:
        return "L" if self is Direction.LEFT else "R"


L, R = Direction.LEFT, Direction.RIGHT

Profile = tuple  # tuple[Direction, ...]


@dataclass(frozen=True)
class RingGame:
    edge_costs: tuple

    def __post_init__(self):
        costs = tuple(to_fraction(c) for c in self.edge_costs)
        if len(costs) < 2:
            raise ValueError("a ring game needs n >= 1 players, i.e. >= 2 edges")
        if any(c < 0 for c in costs):
            raise ValueError("edge costs must be nonnegative")
        object.__setattr__(self, "edge_costs", costs)

    @classmethod
    def of(cls, *costs: RationalLike) -> "RingGame":
        return cls(tuple(costs))

    @property
    def n(self) -> int:
        return len(self.edge_costs) - 1

    def __len__(self) -> int:
        return len(self.edge_costs)

    def __getitem__(self, e: int) -> Fraction:
        return self.edge_costs[e]

    def scale(self, factor: RationalLike) -> "RingGame":
        factor = to_fraction(factor)
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return RingGame(tuple(c * factor for c in self.edge_costs))

    def mirror(self) -> "RingGame":
        """Same ring read clockwise: edge e becomes n - e, player i becomes n-1-i."""
        return RingGame(tuple(reversed(self.edge_costs)))

    def __str__(self) -> str:
        return "[" + ", ".join(format_fraction(c) for c in self.edge_costs) + "]"


def mirror_profile(profile: Sequence[Direction]) -> Profile:
    return tuple(Direction(d).flip() for d in reversed(profile))


def profile_from_mask(mask: int, n: int) -> Profile:
    """Bit i set means player i goes RIGHT."""
    return tuple(Direction((mask >> i) & 1) for i in range(n))


def profile_mask(profile: Sequence[Direction]) -> int:
    mask = 0
    for i, d in enumerate(profile):
        if d == R:
            mask |= 1 << i
    return mask


def parse_profile(text: str) -> Profile:
    try:
        return tuple({"L": L, "R": R}[ch] for ch in text.strip().upper())
    except KeyError as exc:
        raise ValueError(f"profile must be a string over L/R, got {text!r}") from exc


def format_profile(profile: Sequence[Direction]) -> str:
    return "".join(Direction(d).letter for d in profile)


def threshold_profile(n: int, unused_edge: int) -> Profile:
    """Players left of ``unused_edge`` go LEFT, the rest go RIGHT."""
    if not 0 <= unused_edge <= n:
        raise ValueError(f"edge {unused_edge} out of range for n={n}")
    return tuple(L if i < unused_edge else R for i in range(n))


def unused_edges(game: RingGame, profile: Sequence[Direction]) -> list[int]:
    return [e for e, load in enumerate(edge_loads(game, profile)) if load == 0]


def _check_profile(game: RingGame, profile: Sequence[Direction]) -> None:
    if len(profile) != game.n:
        raise ValueError(f"profile has {len(profile)} entries, game has {game.n} players")


def path_edges(game: RingGame, player: int, direction: Direction) -> range:
    if not 0 <= player < game.n:
        raise IndexError(f"player {player} out of range for n={game.n}")
    if direction == L:
        return range(0, player + 1)
    return range(player + 1, game.n + 1)


def edge_loads(game: RingGame, profile: Sequence[Direction]) -> list[int]:
    _check_profile(game, profile)
    n = game.n
    # difference array over edge indices
    diff = [0] * (n + 2)
    for i, d in enumerate(profile):
        if d == L:
            diff[0] += 1
            diff[i + 1] -= 1
        else:
            diff[i + 1] += 1
            diff[n + 1] -= 1
    loads, run = [], 0
    for e in range(n + 1):
        run += diff[e]
        loads.append(run)
    return loads


def player_cost(game: RingGame, profile: Sequence[Direction], i: int,
                loads: Sequence[int] | None = None) -> Fraction:
    if loads is None:
        loads = edge_loads(game, profile)
    return sum((game[e] / loads[e] for e in path_edges(game, i, profile[i])), Fraction(0))


def deviation_cost(game: RingGame, profile: Sequence[Direction], i: int,
                   direction: Direction, loads: Sequence[int] | None = None) -> Fraction:
    """Cost player ``i`` would pay on ``direction`` with everyone else fixed."""
    if loads is None:
        loads = edge_loads(game, profile)
    if direction == profile[i]:
        return player_cost(game, profile, i, loads)
    return sum((game[e] / (loads[e] + 1) for e in path_edges(game, i, direction)),
               Fraction(0))


def social_cost(game: RingGame, profile: Sequence[Direction]) -> Fraction:
    loads = edge_loads(game, profile)
    return sum((c for c, k in zip(game.edge_costs, loads) if k > 0), Fraction(0))


def potential(game: RingGame, profile: Sequence[Direction]) -> Fraction:
    """Rosenthal potential: sum over edges of cost * H(load)."""
    loads = edge_loads(game, profile)
    return sum((c * harmonic(k) for c, k in zip(game.edge_costs, loads)), Fraction(0))


@dataclass(frozen=True)
class OptimumResult:
    dropped_edge: int
    cost: Fraction
    profile: Profile


def optimum(game: RingGame) -> OptimumResult:
    """Buy every edge but a most expensive one (lowest index on ties)."""
    costs = game.edge_costs
    top = max(costs)
    o = costs.index(top)
    return OptimumResult(o, sum(costs, Fraction(0)) - top, threshold_profile(game.n, o))


# --------------------------------------------------------------------------
# raw instances and normalization


@dataclass(frozen=True)
class RawNode:
    players: tuple = ()
    target: bool = False


@dataclass(frozen=True)
class RawRingInstance:
    """Cyclic node list; ``edges[k]`` joins node k to node (k+1) mod len."""

    nodes: tuple
    edges: tuple = field(default=())

    def __post_init__(self):
        nodes = tuple(self.nodes)
        edges = tuple(to_fraction(c) for c in self.edges)
        if len(nodes) < 2:
            raise ValueError("a ring needs at least two nodes")
        if len(edges) != len(nodes):
            raise ValueError(f"{len(nodes)} nodes need {len(nodes)} edges, got {len(edges)}")
        if any(c < 0 for c in edges):
            raise ValueError("edge costs must be nonnegative")
        targets = [k for k, node in enumerate(nodes) if node.target]
        if len(targets) != 1:
            raise ValueError(f"exactly one target node required, found {len(targets)}")
        if nodes[targets[0]].players:
            raise ValueError("the target node cannot host players")
        if not any(node.players for node in nodes):
            raise ValueError("at least one player is required")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    @property
    def target_index(self) -> int:
        return next(k for k, node in enumerate(self.nodes) if node.target)


def _walk_from_target(raw: RawRingInstance):
    m = len(raw.nodes)
    t = raw.target_index
    for step in range(1, m + 1):
        yield raw.edges[(t + step - 1) % m], raw.nodes[(t + step) % m]


def canonicalize(raw: RawRingInstance) -> RingGame:
    """Split shared nodes with zero-cost edges and contract empty nodes."""
    costs: list[Fraction] = []
    pending = Fraction(0)
    for cost, node in _walk_from_target(raw):
        pending += cost
        if node.target:
            break
        for _ in node.players:
            costs.append(pending)
            pending = Fraction(0)
    costs.append(pending)
    return RingGame(tuple(costs))


def canonical_players(raw: RawRingInstance) -> list:
    """Player ids in canonical index order (node order from the target)."""
    out = []
    for _, node in _walk_from_target(raw):
        if node.target:
            break
        out.extend(node.players)
    return out


# --------------------------------------------------------------------------
# JSON instance files


def game_to_json(game: RingGame) -> dict:
    return {"n": game.n, "edges": [format_fraction(c) for c in game.edge_costs]}


def raw_to_json(raw: RawRingInstance) -> dict:
    ring = []
    for node in raw.nodes:
        ring.append({"target": True} if node.target else {"players": list(node.players)})
    return {"ring": ring, "edges": [format_fraction(c) for c in raw.edges]}


def instance_from_json(data: Mapping[str, Any]) -> RingGame:
    """Accepts canonical ``{"n", "edges"}`` or raw ``{"ring", "edges"}`` objects."""
    if not isinstance(data, Mapping):
        raise ValueError("instance must be a JSON object")
    if "edges" not in data or not isinstance(data["edges"], list):
        raise ValueError("instance field 'edges' must be a list of rationals")
    edges = []
    for k, text in enumerate(data["edges"]):
        if not isinstance(text, (str, int)) or isinstance(text, bool):
            raise ValueError(f"edges[{k}]: expected 'p/q' string, got {text!r}")
        try:
            edges.append(to_fraction(text))
        except (ValueError, TypeError) as exc:
            raise ValueError(f"edges[{k}]: {exc}") from exc
    if "ring" in data:
        nodes = []
        for k, entry in enumerate(data["ring"]):
            if not isinstance(entry, Mapping):
                raise ValueError(f"ring[{k}]: expected an object")
            if entry.get("target"):
                nodes.append(RawNode(target=True))
            else:
                players = entry.get("players", [])
                if not isinstance(players, list):
                    raise ValueError(f"ring[{k}].players must be a list")
                nodes.append(RawNode(players=tuple(players)))
        return canonicalize(RawRingInstance(tuple(nodes), tuple(edges)))
    if "n" not in data:
        raise ValueError("instance needs either 'n' or 'ring'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"field 'n' must be a positive integer, got {n!r}")
    if len(edges) != n + 1:
        raise ValueError(f"field 'edges' must list n+1 = {n + 1} costs, got {len(edges)}")
    return RingGame(tuple(edges))


def instance_digest(game: RingGame) -> str:
    blob = json.dumps(game_to_json(game), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def costs_from_ints(values: Iterable[int]) -> RingGame:
    return RingGame(tuple(Fraction(v) for v in values))
