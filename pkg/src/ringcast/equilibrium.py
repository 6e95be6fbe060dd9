"""Pure Nash equilibria, potential minimizers and best-response dynamics on rings."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import kernels
from .rational import RationalLike, common_denominator, format_fraction, lcm_upto, ratio, to_fraction
from .ring import (
    Direction,
    L,
    R,
    RingGame,
    deviation_cost,
    edge_loads,
    format_profile,
    optimum,
    player_cost,
    potential,
    profile_from_mask,
    social_cost,
    threshold_profile,
    unused_edges,
)

DEFAULT_LIMIT = 16


class EnumerationLimitError(ValueError):
    """Raised when exhaustive enumeration is asked for more players than allowed."""


class TieBreak(enum.Enum):
    PREFER_LEFT = "left"
    PREFER_RIGHT = "right"
    STAY = "stay"


def _check_limit(game: RingGame, limit: int) -> None:
    if game.n > limit:
        raise EnumerationLimitError(
            f"n={game.n} exceeds the enumeration limit {limit}; "
            "raise --limit-n or analyze sampled profiles instead")


def scaled_costs(game: RingGame, max_divisor: int) -> tuple[list[int], int]:
    """Integer costs c*s where s makes every share c/k (k <= max_divisor) integral."""
    scale = common_denominator(game.edge_costs) * lcm_upto(max_divisor)
    return [int(c * scale) for c in game.edge_costs], scale


@dataclass(frozen=True)
class ProfileTable:
    """Social cost, potential and Nash flag of every profile, indexed by mask."""

    game: RingGame
    scale: int
    social: tuple
    potential: tuple
    nash: tuple

    def social_cost(self, mask: int) -> Fraction:
        return Fraction(self.social[mask], self.scale)

    def potential_value(self, mask: int) -> Fraction:
        return Fraction(self.potential[mask], self.scale)


@lru_cache(maxsize=64)
def _profile_table(game: RingGame) -> ProfileTable:
    costs, scale = scaled_costs(game, game.n + 1)
    social, pot, nash = kernels.profile_table(costs, game.n)
    return ProfileTable(game, scale, tuple(social), tuple(pot), tuple(nash))


def profile_table(game: RingGame, limit: int = DEFAULT_LIMIT) -> ProfileTable:
    _check_limit(game, limit)
    return _profile_table(game)


# --------------------------------------------------------------------------
# single-profile questions


def best_response(game: RingGame, profile: Sequence[Direction], i: int,
                  tie: TieBreak = TieBreak.STAY) -> Direction:
    loads = edge_loads(game, profile)
    left = deviation_cost(game, profile, i, L, loads)
    right = deviation_cost(game, profile, i, R, loads)
    if left < right:
        return L
    if right < left:
        return R
    if tie is TieBreak.PREFER_LEFT:
        return L
    if tie is TieBreak.PREFER_RIGHT:
        return R
    return Direction(profile[i])


def improvement(game: RingGame, profile: Sequence[Direction], i: int,
                loads: Sequence[int] | None = None) -> Fraction:
    """How much player i saves by switching (negative: switching hurts)."""
    if loads is None:
        loads = edge_loads(game, profile)
    current = player_cost(game, profile, i, loads)
    return current - deviation_cost(game, profile, i, Direction(profile[i]).flip(), loads)


def is_nash(game: RingGame, profile: Sequence[Direction]) -> bool:
    """Weak equilibrium test: a tie between the two paths counts as stable."""
    loads = edge_loads(game, profile)
    return all(improvement(game, profile, i, loads) <= 0 for i in range(game.n))


def improving_endpoint(game: RingGame, profile: Sequence[Direction]) -> int | None:
    """Player next to the unused edge who strictly gains by switching, if any."""
    gaps = unused_edges(game, profile)
    if not gaps:
        raise ValueError("profile uses every edge; no endpoint player to check")
    e = gaps[0]
    loads = edge_loads(game, profile)
    for player in (e - 1, e):
        if 0 <= player < game.n and improvement(game, profile, player, loads) > 0:
            return player
    return None


# --------------------------------------------------------------------------
# exhaustive enumeration


@dataclass
class NashReport:
    game: RingGame
    equilibria: list
    optimum_cost: Fraction
    best_cost: Fraction
    worst_cost: Fraction
    best_witness: tuple
    worst_witness: tuple

    @property
    def poa(self) -> Fraction:
        return ratio(self.worst_cost, self.optimum_cost)

    @property
    def pos(self) -> Fraction:
        return ratio(self.best_cost, self.optimum_cost)

    def to_json(self) -> dict:
        return {
            "equilibria": [format_profile(p) for p in self.equilibria],
            "optimum_cost": format_fraction(self.optimum_cost),
            "best_cost": format_fraction(self.best_cost),
            "worst_cost": format_fraction(self.worst_cost),
            "poa": format_fraction(self.poa),
            "pos": format_fraction(self.pos),
            "best_witness": format_profile(self.best_witness),
            "worst_witness": format_profile(self.worst_witness),
        }


def enumerate_nash(game: RingGame, limit: int = DEFAULT_LIMIT) -> NashReport:
    table = profile_table(game, limit)
    masks = [m for m, ok in enumerate(table.nash) if ok]
    # potential minimizers are always equilibria, so masks is never empty
    best = min(masks, key=lambda m: (table.social[m], m))
    worst = max(masks, key=lambda m: (table.social[m], -m))
    n = game.n
    return NashReport(
        game=game,
        equilibria=[profile_from_mask(m, n) for m in masks],
        optimum_cost=optimum(game).cost,
        best_cost=table.social_cost(best),
        worst_cost=table.social_cost(worst),
        best_witness=profile_from_mask(best, n),
        worst_witness=profile_from_mask(worst, n),
    )


def potential_minima(game: RingGame, limit: int = DEFAULT_LIMIT) -> list:
    table = profile_table(game, limit)
    low = min(table.potential)
    return [profile_from_mask(m, game.n) for m, v in enumerate(table.potential) if v == low]


def popoa(game: RingGame, limit: int = DEFAULT_LIMIT) -> tuple[Fraction, Fraction]:
    """(worst, best) social cost over potential minimizers, relative to optimum."""
    table = profile_table(game, limit)
    low = min(table.potential)
    costs = [table.social[m] for m, v in enumerate(table.potential) if v == low]
    opt = optimum(game).cost
    return (ratio(Fraction(max(costs), table.scale), opt),
            ratio(Fraction(min(costs), table.scale), opt))


def threshold_structure_check(game: RingGame, limit: int = DEFAULT_LIMIT) -> dict:
    """Compare global potential minimizers against the best threshold profile.

    Reported only: the POPoA linear program assumes potential minimizers can be
    taken among threshold profiles.
    """
    table = profile_table(game, limit)
    n = game.n
    low = min(table.potential)
    minima = [m for m, v in enumerate(table.potential) if v == low]
    thresholds = [sum(1 << i for i in range(j, n)) for j in range(n + 1)]
    t_low = min(table.potential[m] for m in thresholds)
    t_min = [m for m in thresholds if table.potential[m] == t_low]
    return {
        "global_min_is_threshold": t_low == low,
        "all_minima_threshold": set(minima) <= set(thresholds),
        "minimum_costs_match": sorted({table.social[m] for m in minima})
        == sorted({table.social[m] for m in t_min}),
    }


# --------------------------------------------------------------------------
# dynamics


@dataclass(frozen=True)
class DynamicsStep:
    player: int
    old: Direction
    new: Direction
    cost_before: Fraction
    cost_after: Fraction
    potential_before: Fraction
    potential_after: Fraction

    def to_json(self) -> dict:
        return {
            "player": self.player,
            "old": self.old.letter,
            "new": self.new.letter,
            "cost_before": format_fraction(self.cost_before),
            "cost_after": format_fraction(self.cost_after),
            "potential_before": format_fraction(self.potential_before),
            "potential_after": format_fraction(self.potential_after),
        }


@dataclass
class DynamicsTrace:
    schedule: str
    steps: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def to_json(self) -> dict:
        return {"schedule": self.schedule, "steps": [s.to_json() for s in self.steps]}


def _switch(game, profile, i, trace):
    new_profile = list(profile)
    new_profile[i] = Direction(profile[i]).flip()
    new_profile = tuple(new_profile)
    trace.steps.append(DynamicsStep(
        player=i,
        old=Direction(profile[i]),
        new=new_profile[i],
        cost_before=player_cost(game, profile, i),
        cost_after=player_cost(game, new_profile, i),
        potential_before=potential(game, profile),
        potential_after=potential(game, new_profile),
    ))
    return new_profile


def best_response_dynamics(game: RingGame, start: Sequence[Direction] | None = None,
                           schedule: str = "round-robin",
                           max_steps: int | None = None) -> tuple[tuple, DynamicsTrace]:
    """Let players switch on strict improvement until nobody can.

    ``schedule="chain"`` follows the endpoint chain started from the optimum
    profile (or ``start``): at each step the improving player next to the
    unused edge moves. ``"round-robin"`` sweeps players 0..n-1 repeatedly.
    Termination is guaranteed because each move strictly lowers the potential.
    """
    profile = tuple(optimum(game).profile if start is None else start)
    if len(profile) != game.n:
        raise ValueError("start profile has the wrong length")
    trace = DynamicsTrace(schedule)
    budget = max_steps if max_steps is not None else 1 << 20
    if schedule == "chain":
        while len(trace) < budget:
            mover = improving_endpoint(game, profile)
            if mover is None:
                break
            profile = _switch(game, profile, mover, trace)
    elif schedule == "round-robin":
        moved = True
        while moved and len(trace) < budget:
            moved = False
            for i in range(game.n):
                if improvement(game, profile, i) > 0:
                    profile = _switch(game, profile, i, trace)
                    moved = True
    else:
        raise ValueError(f"unknown schedule {schedule!r}")
    return profile, trace


# --------------------------------------------------------------------------
# named instances


def anarchy_instance(n: int, eps: RationalLike = 0) -> RingGame:
    """Costs [1, 0, ..., 0, n - eps]: everyone on the far edge is an equilibrium."""
    eps = to_fraction(eps)
    if n < 1:
        raise ValueError("n must be positive")
    return RingGame((Fraction(1),) + (Fraction(0),) * (n - 1) + (n - eps,))


def stability_instance(eps: RationalLike = Fraction(1, 1000)) -> RingGame:
    """Two players, costs [2 - eps, 1 + eps, 2]; price of stability (4 - eps)/3."""
    eps = to_fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return RingGame((2 - eps, 1 + eps, Fraction(2)))


def popoa_family_instance(l: int, n: int, exact: bool = True) -> RingGame:
    """Ring game from the POPoA linear program with the minimizer missing edge l-1."""
    from .lp import build_popoa_lp, simplex_solve, solve_float

    if l < 1:
        raise ValueError("the construction needs l >= 1")
    if n <= 2 * l + 2:
        raise ValueError(f"need n > 2l + 2 = {2 * l + 2}, got n={n}")
    lp = build_popoa_lp(n, l - 1)
    if exact:
        out = simplex_solve(lp)
        if out.status != "optimal":
            raise ValueError(f"construction LP is {out.status}")
        return RingGame(tuple(out.primal))
    out = solve_float(lp)
    if out.status != "optimal":
        raise ValueError(f"construction LP is {out.status}")
    return RingGame(tuple(Fraction(max(x, 0.0)).limit_denominator(10 ** 12) for x in out.primal))


__all__ = [
    "DEFAULT_LIMIT",
    "DynamicsStep",
    "DynamicsTrace",
    "EnumerationLimitError",
    "NashReport",
    "ProfileTable",
    "TieBreak",
    "anarchy_instance",
    "best_response",
    "best_response_dynamics",
    "enumerate_nash",
    "improvement",
    "improving_endpoint",
    "is_nash",
    "popoa",
    "popoa_family_instance",
    "potential_minima",
    "profile_table",
    "scaled_costs",
    "social_cost",
    "stability_instance",
    "threshold_profile",
    "threshold_structure_check",
]
