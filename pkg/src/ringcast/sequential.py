"""Myopic sequential arrivals on the ring and the ratios they induce."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels
from .equilibrium import TieBreak, scaled_costs
from .rational import format_fraction, ratio
from .ring import Direction, RingGame, format_profile, instance_digest, optimum

DEFAULT_ORDER_LIMIT = 8
FLOAT_TOLERANCE = 1e-9


class OrderLimitError(ValueError):
    pass


@dataclass(frozen=True)
class Arrival:
    player: int
    direction: Direction
    myopic_cost: Fraction  # S_i: what the player pays on arrival
    alone_cost: Fraction  # B_i: cost of edges nobody used before her

    def to_json(self) -> dict:
        return {"player": self.player, "direction": self.direction.letter,
                "myopic_cost": format_fraction(self.myopic_cost),
                "alone_cost": format_fraction(self.alone_cost)}


@dataclass
class SequentialOutcome:
    order: tuple
    tie: TieBreak
    profile: tuple
    arrivals: list
    cost: Fraction
    optimum_cost: Fraction

    @property
    def ratio(self) -> Fraction:
        return ratio(self.cost, self.optimum_cost)

    def to_json(self) -> dict:
        return {"order": list(self.order), "tie": self.tie.value,
                "profile": format_profile(self.profile),
                "cost": format_fraction(self.cost),
                "optimum_cost": format_fraction(self.optimum_cost),
                "ratio": format_fraction(self.ratio),
                "arrivals": [a.to_json() for a in self.arrivals]}


def _check_order(n: int, order: Sequence[int]) -> tuple:
    order = tuple(int(p) for p in order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"arrival order must be a permutation of 0..{n - 1}, got {order}")
    return order


def _prefer_right(tie: TieBreak) -> bool:
    if tie is TieBreak.STAY:
        raise ValueError("arriving players have no current strategy; use PREFER_LEFT/RIGHT")
    return tie is TieBreak.PREFER_RIGHT


def used_edges(n: int, order: Sequence[int], dirs: Sequence[int]) -> tuple[int, int]:
    """(last edge reached from the left, first edge reached from the right).

    Edges 0..a and b..n are bought; a = -1 / b = n+1 when a side is unused.
    """
    a, b = -1, n + 1
    for p, d in zip(order, dirs):
        if d:
            b = min(b, p + 1)
        else:
            a = max(a, p)
    return a, b


def _network_cost(costs: Sequence, order, dirs):
    n = len(costs) - 1
    a, b = used_edges(n, order, dirs)
    return sum(costs[e] for e in range(n + 1) if e <= a or e >= b)


def sequential_play(game: RingGame, order: Sequence[int],
                    tie: TieBreak = TieBreak.PREFER_LEFT) -> SequentialOutcome:
    """Players arrive in ``order``; each picks the cheaper path given earlier arrivals."""
    n = game.n
    order = _check_order(n, order)
    costs, scale = scaled_costs(game, n)
    dirs, paid = kernels.sequential_play(costs, order, _prefer_right(tie), exact=True)
    loads = [0] * (n + 1)
    arrivals = []
    profile = [Direction.LEFT] * n
    for p, d, s in zip(order, dirs, paid):
        d = Direction(d)
        path = range(0, p + 1) if d == Direction.LEFT else range(p + 1, n + 1)
        alone = sum((game[e] for e in path if loads[e] == 0), Fraction(0))
        for e in path:
            loads[e] += 1
        profile[p] = d
        arrivals.append(Arrival(p, d, Fraction(s, scale), alone))
    cost = sum((c for c, k in zip(game.edge_costs, loads) if k), Fraction(0))
    return SequentialOutcome(order, tie, tuple(profile), arrivals, cost, optimum(game).cost)


@dataclass
class OrderSearch:
    """Extreme arrival order found by enumeration (``exact``) or sampling."""

    kind: str  # "worst" or "best"
    ratio: Fraction
    cost: Fraction
    order: tuple
    exact: bool
    orders_evaluated: int

    @property
    def label(self) -> str:
        if self.exact:
            return "exact"
        return "lower estimate" if self.kind == "worst" else "upper estimate"

    def to_json(self) -> dict:
        return {"kind": self.kind, "ratio": format_fraction(self.ratio),
                "ratio_decimal": float(self.ratio), "cost": format_fraction(self.cost),
                "order": list(self.order), "label": self.label,
                "orders_evaluated": self.orders_evaluated}


def order_extremes(game: RingGame, tie: TieBreak = TieBreak.PREFER_LEFT,
                   limit: int = DEFAULT_ORDER_LIMIT, samples: int | None = None,
                   seed: int = 0) -> tuple[OrderSearch, OrderSearch]:
    """(worst, best) arrival orders. Enumerates all n! orders when n <= limit."""
    n = game.n
    exact = n <= limit
    if exact:
        orders = list(itertools.permutations(range(n)))
    elif samples:
        rng = random.Random(seed)
        orders = []
        for _ in range(samples):
            o = list(range(n))
            rng.shuffle(o)
            orders.append(tuple(o))
    else:
        raise OrderLimitError(
            f"n={game.n} exceeds the permutation limit {limit}; pass samples= for an estimate")
    costs, scale = scaled_costs(game, n)
    totals = kernels.sequential_batch(costs, orders, _prefer_right(tie))
    worst = max(range(len(orders)), key=lambda k: (totals[k], -k))
    best = min(range(len(orders)), key=lambda k: (totals[k], k))
    opt = optimum(game).cost
    out = []
    for kind, k in (("worst", worst), ("best", best)):
        c = Fraction(totals[k], scale)
        out.append(OrderSearch(kind, ratio(c, opt), c, orders[k], exact, len(orders)))
    return out[0], out[1]


def ms_poa(game: RingGame, **kwargs) -> OrderSearch:
    return order_extremes(game, **kwargs)[0]


def ms_pos(game: RingGame, **kwargs) -> OrderSearch:
    return order_extremes(game, **kwargs)[1]


def _side_sums(game: RingGame, o: int) -> tuple[Fraction, Fraction]:
    costs = game.edge_costs
    return sum(costs[:o], Fraction(0)), sum(costs[o + 1:], Fraction(0))


def theorem5_order(game: RingGame, o: int | None = None) -> tuple[tuple, bool]:
    """Arrival order (n-1, ..., o, 0, 1, ..., o-1) around the optimum's gap.

    The ring is mirrored first when the edges right of o outweigh those left
    of it. Returns the order in the game's own player indices and whether
    mirroring was applied.
    """
    n = game.n
    if o is None:
        o = optimum(game).dropped_edge
    left, right = _side_sums(game, o)
    mirrored = left < right
    if mirrored:
        o = n - o
    frame = tuple(range(n - 1, o - 1, -1)) + tuple(range(o))
    if mirrored:
        frame = tuple(n - 1 - p for p in frame)
    return frame, mirrored


def opposite_order(game: RingGame, mirrored: bool) -> tuple:
    """The order (n-1, ..., 0) in the same frame as :func:`theorem5_order`."""
    n = game.n
    return tuple(range(n)) if mirrored else tuple(range(n - 1, -1, -1))


# --------------------------------------------------------------------------
# experiments


def random_ring(n: int, rng: random.Random, low: int = 1, high: int = 10 ** 6) -> RingGame:
    return RingGame(tuple(Fraction(rng.randint(low, high)) for _ in range(n + 1)))


@dataclass
class TrialRecord:
    index: int
    digest: str
    mirrored: bool
    anchored_cost: object
    opposite_cost: object
    optimum_cost: Fraction
    ratio: object  # min of the two costs over optimum

    def csv_row(self) -> dict:
        fmt = (lambda v: format_fraction(v) if isinstance(v, Fraction) else repr(v))
        return {"trial": self.index, "instance": self.digest,
                "order": "gap-anchored-mirrored" if self.mirrored else "gap-anchored",
                "anchored_cost": fmt(self.anchored_cost),
                "opposite_cost": fmt(self.opposite_cost),
                "optimum": format_fraction(self.optimum_cost),
                "ratio": fmt(self.ratio), "ratio_decimal": float(self.ratio)}


@dataclass
class TwoPermutationReport:
    n: int
    trials: int
    seed: int
    exact: bool
    tolerance: float
    records: list = field(default_factory=list)

    @property
    def worst_ratio(self):
        return max(r.ratio for r in self.records)

    @property
    def all_within(self) -> bool:
        cap = Fraction(4, 3)
        if self.exact:
            return all(r.ratio <= cap for r in self.records)
        return all(r.ratio <= 4 / 3 + self.tolerance for r in self.records)

    def to_json(self) -> dict:
        w = self.worst_ratio
        return {"experiment": "two-permutation", "n": self.n, "trials": self.trials,
                "seed": self.seed, "mode": "exact" if self.exact else "float64",
                "tolerance": 0 if self.exact else self.tolerance,
                "worst_ratio": format_fraction(w) if isinstance(w, Fraction) else w,
                "worst_ratio_decimal": float(w), "all_within_4_3": self.all_within}


def _two_perm_trial(index: int, game: RingGame, exact: bool, tie: TieBreak) -> TrialRecord:
    n = game.n
    first, mirrored = theorem5_order(game)
    second = opposite_order(game, mirrored)
    opt = optimum(game).cost
    prefer_right = _prefer_right(tie)
    if exact:
        costs, scale = scaled_costs(game, n)
        got = []
        for order in (first, second):
            dirs, _ = kernels.sequential_play(costs, order, prefer_right, exact=True)
            got.append(Fraction(_network_cost(costs, order, dirs), scale))
        best = ratio(min(got), opt)
    else:
        fcosts = [float(c) for c in game.edge_costs]
        got = []
        for order in (first, second):
            dirs, _ = kernels.sequential_play(fcosts, order, prefer_right, exact=False)
            got.append(_network_cost(fcosts, order, dirs))
        best = min(got) / float(opt) if opt else 1.0
    return TrialRecord(index, instance_digest(game), mirrored, got[0], got[1], opt, best)


def two_permutation_experiment(n: int, trials: int, seed: int = 0,
                               exact: bool | None = None,
                               tie: TieBreak = TieBreak.PREFER_LEFT,
                               workers: int = 1) -> TwoPermutationReport:
    """Play the gap-anchored order and its opposite on random rings.

    ``exact`` defaults to True up to n = 200; float mode compares ratios
    against 4/3 with a 1e-9 tolerance and is labeled as such in the report.
    Instances are drawn up front from ``seed``, so the records do not depend
    on ``workers``.
    """
    if exact is None:
        exact = n <= 200
    rng = random.Random(seed)
    games = [random_ring(n, rng) for _ in range(trials)]
    report = TwoPermutationReport(n, trials, seed, exact, FLOAT_TOLERANCE)
    args = (range(trials), games, [exact] * trials, [tie] * trials)
    if workers > 1 and trials > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            report.records.extend(pool.map(_two_perm_trial, *args, chunksize=4))
    else:
        report.records.extend(map(_two_perm_trial, *args))
    return report


@dataclass
class SearchResult:
    objective: str
    n: int
    seed: int
    trials: int
    costs: tuple
    ratio: Fraction
    order: tuple
    evaluations: int

    @property
    def game(self) -> RingGame:
        return RingGame(self.costs)

    def to_json(self) -> dict:
        return {"objective": self.objective, "n": self.n, "seed": self.seed,
                "trials": self.trials, "edges": [format_fraction(c) for c in self.costs],
                "ratio": format_fraction(self.ratio), "ratio_decimal": float(self.ratio),
                "order": list(self.order), "evaluations": self.evaluations}


def extremal_search(objective: str, n: int, trials: int = 200, seed: int = 0,
                    steps: int = 300, high: int = 1000,
                    limit: int = DEFAULT_ORDER_LIMIT) -> SearchResult:
    """Random restarts plus hill climbing on integer costs in [0, high].

    ``objective`` is "mspoa" (maximize the worst-order ratio) or "mspos"
    (maximize the best-order ratio). Every candidate is scored by exact
    enumeration of all arrival orders.
    """
    objective = objective.lower()
    if objective not in ("mspoa", "mspos"):
        raise ValueError("objective must be 'mspoa' or 'mspos'")
    if n > limit:
        raise OrderLimitError(f"n={n} exceeds the permutation limit {limit}")
    pick = 0 if objective == "mspoa" else 1
    rng = random.Random(seed)
    evaluations = 0

    def score(vals):
        nonlocal evaluations
        evaluations += 1
        game = RingGame(tuple(Fraction(v) for v in vals))
        if optimum(game).cost == 0:
            return Fraction(1), ()
        found = order_extremes(game, limit=limit)[pick]
        return found.ratio, found.order

    best_vals, best_ratio, best_order = None, Fraction(0), ()
    for _ in range(trials):
        vals = [rng.choice((0, rng.randint(0, high), rng.randint(0, high)))
                for _ in range(n + 1)]
        cur, cur_order = score(vals)
        for _ in range(steps):
            cand = list(vals)
            e = rng.randrange(n + 1)
            move = rng.random()
            if move < 0.2:
                cand[e] = 0
            elif move < 0.5:
                cand[e] = rng.randint(0, high)
            else:
                step = max(1, high // rng.choice((10, 100, 1000)))
                cand[e] = min(high, max(0, cand[e] + rng.randint(-step, step)))
            r, o = score(cand)
            if r >= cur:
                vals, cur, cur_order = cand, r, o
        if cur > best_ratio:
            best_vals, best_ratio, best_order = list(vals), cur, cur_order
    return SearchResult(objective, n, seed, trials,
                        tuple(Fraction(v) for v in best_vals), best_ratio,
                        tuple(best_order), evaluations)
