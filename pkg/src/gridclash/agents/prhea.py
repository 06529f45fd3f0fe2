"""Rolling-horizon evolution over script sequences, plus the multi-objective
variant.

An individual is a fixed-length list of scripts; evaluating it executes the
scripts one controlled action at a time (lowest-id unit with actions left),
with the opponent answering through the fixed opponent-model script. After a
decision the executed gene is dropped and a random one appended (shift
buffer); with continue-search enabled the shifted population seeds the next
decision's search.
"""

from __future__ import annotations

import random

from ..engine import GameState
from ..scripts import Portfolio, ScriptId
from .base import Agent, DecideTrace, acting_unit
from .evolution import evolve
from .nsga2 import crowding_distances, fast_non_dominated_sort
from .playout import ForwardModel, rollout

__all__ = ["PrheaAgent", "MoPrheaAgent", "shift_buffer"]


def shift_buffer(genes: list[ScriptId], portfolio: Portfolio, rng: random.Random) -> list[ScriptId]:
    """Drop the executed first gene, append a random one."""
    return genes[1:] + [portfolio[rng.randrange(len(portfolio))]]


def random_sequence(length: int, portfolio: Portfolio, rng: random.Random) -> list[ScriptId]:
    return [portfolio[rng.randrange(len(portfolio))] for _ in range(length)]


def crossover_sequence(a: list[ScriptId], b: list[ScriptId], rng: random.Random) -> list[ScriptId]:
    return [x if rng.random() < 0.5 else y for x, y in zip(a, b)]


def mutate_sequence(
    genes: list[ScriptId], portfolio: Portfolio, rate: float, rng: random.Random
) -> list[ScriptId]:
    return [
        portfolio[rng.randrange(len(portfolio))] if rng.random() < rate else g
        for g in genes
    ]


class PrheaAgent(Agent):
    kind = "prhea"

    def __init__(self, params=None):
        super().__init__(params)
        self._carry: list[list[ScriptId]] | None = None

    def decide(self, state: GameState, fm: ForwardModel, rng: random.Random):
        me = state.current_player
        uid = acting_unit(state, me)
        if uid is None:
            return self._end_turn(fm)
        p = self.params
        pf = p.portfolio
        length = p.individual_length
        result = evolve(
            fm,
            rng,
            population_size=p.population_size,
            tournament_size=p.tournament_size,
            elitism=p.elitism,
            random_genome=lambda: random_sequence(length, pf, rng),
            crossover=lambda a, b: crossover_sequence(a, b, rng),
            mutate=lambda g: mutate_sequence(g, pf, p.mutation_rate, rng),
            evaluate=lambda g: rollout(state, g, p.opponent_script, length, rng, fm),
            seed_population=self._carry if p.continue_search else None,
        )
        best = result.best
        if p.continue_search:
            self._carry = [shift_buffer(g, pf, rng) for g in result.population]
        return self._script_move(
            state, uid, best[0], fm, rng,
            fitness=result.best_fitness, generations=result.generations,
        )


def _mo_tournament(indices, ranks, crowding, size, rng):
    best = indices[rng.randrange(len(indices))]
    for _ in range(min(size, len(indices)) - 1):
        i = indices[rng.randrange(len(indices))]
        if ranks[i] < ranks[best] or (
            ranks[i] == ranks[best] and crowding[i] > crowding[best]
        ):
            best = i
    return best


def _rank_population(values):
    fronts = fast_non_dominated_sort(values)
    ranks = [0] * len(values)
    crowding = [0.0] * len(values)
    for depth, front in enumerate(fronts):
        dist = crowding_distances(values, front)
        for i in front:
            ranks[i] = depth
            crowding[i] = dist[i]
    return fronts, ranks, crowding


class MoPrheaAgent(Agent):
    """PRHEA under NSGA-2: maximize the combat score while minimizing the
    mean distance to the opponent. The final action comes from the member of
    the last front 0 with the best combat score (ties: lower distance, then
    population order)."""

    kind = "mo-prhea"

    def __init__(self, params=None):
        super().__init__(params)
        self._carry: list[list[ScriptId]] | None = None

    def decide(self, state: GameState, fm: ForwardModel, rng: random.Random):
        me = state.current_player
        uid = acting_unit(state, me)
        if uid is None:
            return self._end_turn(fm)
        p = self.params
        pf = p.portfolio
        length = p.individual_length

        def evaluate(genes):
            return rollout(state, genes, p.opponent_script, length, rng, fm, multi_objective=True)

        population = list(self._carry) if (p.continue_search and self._carry) else []
        while len(population) < p.population_size:
            population.append(random_sequence(length, pf, rng))
        population = population[: p.population_size]
        values = []
        for g in population:
            v = evaluate(g)
            if fm.remaining <= 0 and values:
                # possibly truncated mid-playout: not comparable, drop it
                population = population[: len(values)]
                break
            values.append(v)
        population = population[: len(values)]

        generations = 0
        while fm.remaining > 0:
            _, ranks, crowding = _rank_population(values)
            indices = list(range(len(population)))
            offspring, off_values = [], []
            while len(offspring) < p.population_size:
                a = population[_mo_tournament(indices, ranks, crowding, p.tournament_size, rng)]
                b = population[_mo_tournament(indices, ranks, crowding, p.tournament_size, rng)]
                child = mutate_sequence(crossover_sequence(a, b, rng), pf, p.mutation_rate, rng)
                v = evaluate(child)
                if fm.remaining <= 0 and (off_values or values):
                    break
                off_values.append(v)
                offspring.append(child)
            if p.elitism:
                pool = population + offspring
                pool_values = values + off_values
                fronts, _, _ = _rank_population(pool_values)
                chosen: list[int] = []
                for front in fronts:
                    if len(chosen) + len(front) <= p.population_size:
                        chosen.extend(front)
                    else:
                        dist = crowding_distances(pool_values, front)
                        front = sorted(front, key=lambda i: -dist[i])
                        chosen.extend(front[: p.population_size - len(chosen)])
                    if len(chosen) >= p.population_size:
                        break
                population = [pool[i] for i in chosen]
                values = [pool_values[i] for i in chosen]
            elif offspring:
                population, values = offspring, off_values
            generations += 1

        fronts, _, _ = _rank_population(values)
        front0 = fronts[0] if fronts else list(range(len(population)))
        best_i = min(front0, key=lambda i: (-values[i].combat, values[i].distance, i))
        best = population[best_i]
        if p.continue_search:
            self._carry = [shift_buffer(g, pf, rng) for g in population]
        return self._script_move(
            state, uid, best[0], fm, rng,
            fitness=values[best_i].combat, generations=generations,
        )
