"""State evaluation shared by every search agent.

Two signals: a combat score (material strength and health, maximize) and
the mean Chebyshev distance between the two armies (minimize). The combat
score gives every living unit a fixed existence bonus of 1 plus its health
fraction, so a kill is always worth more than any amount of chip damage.
Terminal states override the material sum with +/-LARGE or 0.
"""

from __future__ import annotations

from typing import NamedTuple

from .engine import GameState, Status, chebyshev

__all__ = ["LARGE", "ObjectiveVector", "combat_score", "mean_distance", "objectives"]

# Exceeds any achievable material score (max roster x (1 + 1)).
LARGE = 1000.0

UNIT_BONUS = 1.0


class ObjectiveVector(NamedTuple):
    combat: float  # maximize
    distance: float  # minimize


def combat_score(state: GameState, player: int) -> float:
    status = state.status
    if status != Status.ONGOING:
        if status == Status.DRAW:
            return 0.0
        won = status == Status.WIN_P0
        return LARGE if won == (player == 0) else -LARGE
    score = 0.0
    for u in state.units.values():
        v = UNIT_BONUS + u.health / u.max_health
        score += v if u.owner == player else -v
    return score


def mean_distance(state: GameState, player: int) -> float:
    """Mean pairwise own-to-enemy Chebyshev distance; 0 once either side is
    eliminated (distance pressure is meaningless then)."""
    own = [(u.x, u.y) for u in state.units.values() if u.owner == player]
    opp = [(u.x, u.y) for u in state.units.values() if u.owner != player]
    if not own or not opp:
        return 0.0
    total = 0
    for x, y in own:
        for ex, ey in opp:
            total += chebyshev(x, y, ex, ey)
    return total / (len(own) * len(opp))


def objectives(state: GameState, player: int) -> ObjectiveVector:
    return ObjectiveVector(combat_score(state, player), mean_distance(state, player))
