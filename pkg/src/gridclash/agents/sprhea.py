"""Sparse-encoding portfolio evolution: one genome holds a base unit-script
assignment plus a fixed-size list of timed change events.

Each event is ``[ticks_left, unit_id, new_script]``. Every executed action
of the controlling player decrements every counter; an event reaching zero
rewrites the base assignment and is replaced by a fresh random event, so the
list always holds exactly ``num_changes`` entries. Real executed actions
decrement the carried genomes the same way during continue-search.
"""

from __future__ import annotations

import random

from ..engine import GameState
from ..scripts import Portfolio, ScriptId
from .base import Agent, acting_unit
from .evolution import evolve
from .poe import (
    Assignment,
    crossover_assignment,
    mutate_assignment,
    random_assignment,
    revalidate_assignment,
)
from .playout import ForwardModel, rollout_assignment

__all__ = ["SprheaAgent", "MAX_TICKS", "SparseGenome"]

# Upper bound for freshly drawn tick counters; spans a couple of turns of a
# full roster, which is the useful change horizon at our plan lengths.
MAX_TICKS = 10

Change = list  # [ticks_left, unit_id, script]


class SparseGenome:
    __slots__ = ("base", "changes")

    def __init__(self, base: Assignment, changes: list[Change]):
        self.base = base
        self.changes = changes

    def clone(self) -> "SparseGenome":
        return SparseGenome(dict(self.base), [list(c) for c in self.changes])


def random_change(units: list[int], portfolio: Portfolio, rng: random.Random) -> Change:
    return [
        rng.randint(1, MAX_TICKS),
        units[rng.randrange(len(units))],
        portfolio[rng.randrange(len(portfolio))],
    ]


class SprheaAgent(Agent):
    kind = "s-prhea"

    def __init__(self, params=None):
        super().__init__(params)
        self._carry: list[SparseGenome] | None = None

    def _random_genome(self, units, rng) -> SparseGenome:
        p = self.params
        return SparseGenome(
            random_assignment(units, p.portfolio, rng),
            [random_change(units, p.portfolio, rng) for _ in range(p.num_changes)],
        )

    def _mutate(self, g: SparseGenome, units, rng) -> SparseGenome:
        p = self.params
        child = g.clone()
        if rng.random() < 0.5:
            child.base = mutate_assignment(child.base, p.portfolio, p.mutation_rate, rng)
        else:
            i = rng.randrange(len(child.changes))
            child.changes[i] = random_change(units, p.portfolio, rng)
        return child

    def _crossover(self, a: SparseGenome, b: SparseGenome, rng) -> SparseGenome:
        base = crossover_assignment(a.base, b.base, rng)
        changes = [
            list(x) if rng.random() < 0.5 else list(y)
            for x, y in zip(a.changes, b.changes)
        ]
        return SparseGenome(base, changes)

    def decide(self, state: GameState, fm: ForwardModel, rng: random.Random):
        me = state.current_player
        uid = acting_unit(state, me)
        if uid is None:
            return self._end_turn(fm)
        p = self.params
        units = [u.uid for u in state.units.values() if u.owner == me]

        def evaluate(g: SparseGenome) -> float:
            return rollout_assignment(
                state, g.base, p.opponent_script, p.individual_length, rng, fm,
                changes=g.changes,
                change_factory=lambda: random_change(units, p.portfolio, rng),
            )

        seed = None
        if p.continue_search and self._carry:
            seed = []
            for g in self._carry:
                base = revalidate_assignment(g.base, units, p.portfolio, rng)
                changes = [
                    c if c[1] in state.units else random_change(units, p.portfolio, rng)
                    for c in g.changes
                ]
                seed.append(SparseGenome(base, changes))
        result = evolve(
            fm,
            rng,
            population_size=p.population_size,
            tournament_size=p.tournament_size,
            elitism=p.elitism,
            random_genome=lambda: self._random_genome(units, rng),
            crossover=lambda a, b: self._crossover(a, b, rng),
            mutate=lambda g: self._mutate(g, units, rng),
            evaluate=evaluate,
            seed_population=seed,
        )
        best: SparseGenome = result.best
        action = self._script_move(
            state, uid, best.base[uid], fm, rng,
            fitness=result.best_fitness, generations=result.generations,
        )
        if p.continue_search:
            # The action we just returned will execute for real: advance
            # every carried genome's clock by one.
            carried = []
            for g in result.population:
                g = g.clone()
                for ev in g.changes:
                    ev[0] -= 1
                    if ev[0] <= 0:
                        g.base[ev[1]] = ev[2]
                        ev[:] = random_change(units, p.portfolio, rng)
                carried.append(g)
            self._carry = carried
        return action
