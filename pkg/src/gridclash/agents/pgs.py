"""Portfolio greedy search: alternating hill-climbing over the player's and
the opponent's unit-script assignments.

Both sides start from seed scripts (own units: attack-weakest, opponent
model: attack-closest, both configurable). Each response iteration first
improves the player's assignment one unit at a time over the whole
portfolio, then improves the opponent's assignment the same way to model a
stronger adversary. Values come from a playout of ``individual_length``
rounds scored with the combat heuristic; its antisymmetry makes the
opponent's improvement a minimization of the player's score.
"""

from __future__ import annotations

import random

from ..engine import GameState
from ..scripts import ScriptId
from .base import Agent, acting_unit
from .playout import ForwardModel, rollout_assignment_rounds

__all__ = ["PgsAgent"]


class PgsAgent(Agent):
    kind = "pgs"

    def decide(self, state: GameState, fm: ForwardModel, rng: random.Random):
        me = state.current_player
        uid = acting_unit(state, me)
        if uid is None:
            return self._end_turn(fm)
        p = self.params
        own = {u.uid: p.pgs_own_script for u in state.units.values() if u.owner == me}
        opp = {u.uid: p.opponent_script for u in state.units.values() if u.owner != me}
        rounds = p.individual_length

        def value(own_assign, opp_assign) -> float:
            return rollout_assignment_rounds(state, own_assign, opp_assign, rounds, rng, fm)

        evals = 0
        best_value = None
        for _ in range(p.response_iterations):
            if fm.remaining <= 0:
                break
            for assign, sign in ((own, 1.0), (opp, -1.0)):
                for unit_id in assign:
                    if fm.remaining <= 0:
                        break
                    best_script = assign[unit_id]
                    best = None
                    for script in p.portfolio:
                        assign[unit_id] = script
                        v = sign * value(own, opp)
                        evals += 1
                        if fm.remaining <= 0 and best is not None:
                            break  # possibly truncated playout: ignore it
                        if best is None or v > best:
                            best, best_script = v, script
                        if fm.remaining <= 0:
                            break
                    assign[unit_id] = best_script
                    if sign > 0 and best is not None:
                        best_value = best
        return self._script_move(
            state, uid, own[uid], fm, rng, fitness=best_value, generations=evals,
        )
