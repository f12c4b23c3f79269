"""Adversary best response in the coalitional game: case classification and split.

A coalitional game (phi1, phi2, x1, x2) pits two players, each on their own
Lotto front, against one adversary holding a unit budget. After normalizing
the adversary budget to 1 and orienting the indices so that
phi2/phi1 <= x2/x1, the adversary's optimal division of its budget between
the two fronts falls into one of four regimes:

  case 1: phi2/phi1 != x2/x1 and phi2/phi1 <= x1*x2      -> all-in on front 1
  case 2: 0 < 1 - sqrt(phi1*x1*x2/phi2) <= x2            -> sqrt(phi1*x1*x2/phi2) on front 1
  case 3: 1 - sqrt(phi1*x1*x2/phi2) > x2                 -> sqrt(phi1*x1)/(sqrt(phi1*x1)+sqrt(phi2*x2))
  case 4: phi2/phi1 == x2/x1 and x1 + x2 >= 1            -> indifferent among splits with x_a_i <= x_i

The adversary always exhausts its budget. In case 4 its payoff is constant
over admissible splits, and this module reports the proportional split
x_a_i = x_i/(x1+x2) as a documented convention; individual player payoffs do
depend on that choice even though the adversary and alliance totals do not.
"""

import math
from dataclasses import dataclass, replace
from enum import IntEnum

from blotto_alliance import lotto_core

# Relative tolerance under which phi2*x1 and phi1*x2 are treated as equal,
# i.e. the game is considered exactly proportional (case 4 candidate).
PROPORTIONAL_RTOL = 1e-9


class Case(IntEnum):
    CASE_1 = 1
    CASE_2 = 2
    CASE_3 = 3
    CASE_4 = 4


@dataclass(frozen=True)
class GameParams:
    """A coalitional game: front valuations, player budgets, adversary budget."""

    phi1: float
    phi2: float
    x1: float
    x2: float
    adversary_budget: float = 1.0

    def __post_init__(self):
        for name in ("phi1", "phi2", "x1", "x2", "adversary_budget"):
            value = getattr(self, name)
            if not (value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value}")


@dataclass(frozen=True)
class Orientation:
    """Records whether player indices were exchanged to reach the oriented frame."""

    swapped: bool


@dataclass(frozen=True)
class PayoffProfile:
    """Equilibrium payoffs of the two players and the adversary (valuation units)."""

    u1: float
    u2: float
    u_adversary: float


@dataclass(frozen=True)
class AdversaryResponse:
    case_label: Case
    x_a1: float
    x_a2: float


def normalize(raw: GameParams) -> tuple[GameParams, Orientation]:
    """Scale budgets so the adversary holds 1, and swap indices if needed.

    The returned game satisfies adversary_budget == 1 and
    phi2/phi1 <= x2/x1 (cross-multiplied to avoid division); the Orientation
    flag records whether players 1 and 2 were exchanged.
    """
    xa = raw.adversary_budget
    x1, x2 = raw.x1 / xa, raw.x2 / xa
    if raw.phi2 * x1 > raw.phi1 * x2:
        return (
            GameParams(phi1=raw.phi2, phi2=raw.phi1, x1=x2, x2=x1),
            Orientation(swapped=True),
        )
    return GameParams(phi1=raw.phi1, phi2=raw.phi2, x1=x1, x2=x2), Orientation(swapped=False)


def _require_normalized_oriented(g: GameParams) -> None:
    if abs(g.adversary_budget - 1.0) > 1e-12:
        raise ValueError(f"game must be normalized (adversary_budget == 1), got {g.adversary_budget}")
    lhs, rhs = g.phi2 * g.x1, g.phi1 * g.x2
    if lhs > rhs * (1.0 + PROPORTIONAL_RTOL):
        raise ValueError("game must be oriented: phi2/phi1 <= x2/x1 is violated")


def _is_proportional(phi1: float, phi2: float, x1: float, x2: float) -> bool:
    a, b = phi2 * x1, phi1 * x2
    return abs(a - b) <= PROPORTIONAL_RTOL * max(a, b)


def _classify_f(phi1: float, phi2: float, x1: float, x2: float) -> int:
    """Case label for an oriented unit-adversary game, as a plain int."""
    proportional = _is_proportional(phi1, phi2, x1, x2)
    if proportional and x1 + x2 >= 1.0:
        return 4
    if not proportional and phi2 / phi1 <= x1 * x2:
        return 1
    # Reaching here forces sqrt(phi1*x1*x2/phi2) < 1: with phi2/phi1 > x1*x2
    # that is immediate, and a proportional game with x1 + x2 < 1 has
    # q = x1 < 1.
    q = math.sqrt(phi1 * x1 * x2 / phi2)
    return 2 if 1.0 - q <= x2 else 3


def _split_f(phi1: float, phi2: float, x1: float, x2: float, case: int) -> float:
    """Adversary's optimal allocation to front 1, given the case label."""
    if case == 1:
        return 1.0
    if case == 2:
        return math.sqrt(phi1 * x1 * x2 / phi2)
    if case == 3:
        s1 = math.sqrt(phi1 * x1)
        s2 = math.sqrt(phi2 * x2)
        return s1 / (s1 + s2)
    return x1 / (x1 + x2)


def _payoffs_f(phi1: float, phi2: float, x1: float, x2: float) -> tuple[float, float]:
    """Player payoffs (u1, u2) for an oriented unit-adversary game."""
    case = _classify_f(phi1, phi2, x1, x2)
    a = _split_f(phi1, phi2, x1, x2, case)
    return lotto_core.payoff(x1, a, phi1), lotto_core.payoff(x2, 1.0 - a, phi2)


def _payoffs_any_f(phi1: float, phi2: float, x1: float, x2: float) -> tuple[float, float]:
    """Player payoffs for a unit-adversary game in either orientation."""
    if phi2 * x1 > phi1 * x2:
        u2, u1 = _payoffs_f(phi2, phi1, x2, x1)
        return u1, u2
    return _payoffs_f(phi1, phi2, x1, x2)


def classify(g: GameParams) -> Case:
    """Classify a normalized, oriented game into one of the four Table regimes.

    Case 4 is tested first because its equality condition overlaps case 1 at
    tolerance boundaries; cases 1, 2, 3 follow in order. Exactly one label is
    returned for every positive parameter tuple.
    """
    _require_normalized_oriented(g)
    return Case(_classify_f(g.phi1, g.phi2, g.x1, g.x2))


def optimal_split(g: GameParams) -> AdversaryResponse:
    """The adversary's optimal division of its unit budget between the fronts."""
    _require_normalized_oriented(g)
    case = _classify_f(g.phi1, g.phi2, g.x1, g.x2)
    x_a1 = _split_f(g.phi1, g.phi2, g.x1, g.x2, case)
    return AdversaryResponse(case_label=Case(case), x_a1=x_a1, x_a2=1.0 - x_a1)


def stage_payoffs(g: GameParams) -> PayoffProfile:
    """Equilibrium payoffs of a normalized, oriented game under the optimal split."""
    _require_normalized_oriented(g)
    u1, u2 = _payoffs_f(g.phi1, g.phi2, g.x1, g.x2)
    _check_bounds(u1, g.phi1)
    _check_bounds(u2, g.phi2)
    return PayoffProfile(u1=u1, u2=u2, u_adversary=g.phi1 + g.phi2 - u1 - u2)


def _check_bounds(u: float, phi: float) -> None:
    if not (-1e-9 * phi <= u <= phi * (1.0 + 1e-9)):
        raise ArithmeticError(f"player payoff {u} escaped [0, {phi}]")


def mirror(g: GameParams) -> GameParams:
    """The same game with player indices exchanged."""
    return replace(g, phi1=g.phi2, phi2=g.phi1, x1=g.x2, x2=g.x1)


__all__ = [
    "AdversaryResponse",
    "Case",
    "GameParams",
    "Orientation",
    "PROPORTIONAL_RTOL",
    "PayoffProfile",
    "classify",
    "mirror",
    "normalize",
    "optimal_split",
    "stage_payoffs",
]
