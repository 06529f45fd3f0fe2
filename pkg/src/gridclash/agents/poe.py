"""Portfolio online evolution: evolves a unit-to-script assignment for the
current turn, evaluated by a fixed-length playout against the opponent-model
script. With continue-search on, the population is kept (and re-validated
against the surviving units) for the next decision."""

from __future__ import annotations

import random

from ..engine import GameState
from ..scripts import Portfolio, ScriptId
from .base import Agent, acting_unit
from .evolution import evolve
from .playout import ForwardModel, rollout_assignment

__all__ = ["PoeAgent"]

Assignment = dict[int, ScriptId]


def random_assignment(units: list[int], portfolio: Portfolio, rng: random.Random) -> Assignment:
    return {uid: portfolio[rng.randrange(len(portfolio))] for uid in units}


def crossover_assignment(a: Assignment, b: Assignment, rng: random.Random) -> Assignment:
    return {uid: (a[uid] if rng.random() < 0.5 else b[uid]) for uid in a}


def mutate_assignment(
    g: Assignment, portfolio: Portfolio, rate: float, rng: random.Random
) -> Assignment:
    return {
        uid: (portfolio[rng.randrange(len(portfolio))] if rng.random() < rate else s)
        for uid, s in g.items()
    }


def revalidate_assignment(
    g: Assignment, units: list[int], portfolio: Portfolio, rng: random.Random
) -> Assignment:
    """Drop entries for dead units; draw fresh scripts for unseen ones."""
    return {
        uid: g[uid] if uid in g else portfolio[rng.randrange(len(portfolio))]
        for uid in units
    }


class PoeAgent(Agent):
    kind = "poe"

    def __init__(self, params=None):
        super().__init__(params)
        self._carry: list[Assignment] | None = None

    def decide(self, state: GameState, fm: ForwardModel, rng: random.Random):
        me = state.current_player
        uid = acting_unit(state, me)
        if uid is None:
            return self._end_turn(fm)
        p = self.params
        pf = p.portfolio
        units = [u.uid for u in state.units.values() if u.owner == me]
        seed = None
        if p.continue_search and self._carry:
            seed = [revalidate_assignment(g, units, pf, rng) for g in self._carry]
        result = evolve(
            fm,
            rng,
            population_size=p.population_size,
            tournament_size=p.tournament_size,
            elitism=p.elitism,
            random_genome=lambda: random_assignment(units, pf, rng),
            crossover=lambda a, b: crossover_assignment(a, b, rng),
            mutate=lambda g: mutate_assignment(g, pf, p.mutation_rate, rng),
            evaluate=lambda g: rollout_assignment(
                state, g, p.opponent_script, p.individual_length, rng, fm
            ),
            seed_population=seed,
        )
        if p.continue_search:
            self._carry = list(result.population)
        return self._script_move(
            state, uid, result.best[uid], fm, rng,
            fitness=result.best_fitness, generations=result.generations,
        )
