"""Generic single-objective evolutionary loop shared by the assignment and
sequence portfolio agents.

Population size 1 degenerates to 1+1 hill climbing (mutate, keep if at
least as good); larger populations use tournament selection, uniform
crossover, per-gene mutation, and optional elitism. The loop is anytime:
it evaluates as long as the forward-model budget lasts and always reports
the best individual seen, even if the first generation was cut short.
"""

from __future__ import annotations

import random
from typing import Callable, TypeVar

from .playout import ForwardModel

G = TypeVar("G")

__all__ = ["EvolutionResult", "evolve", "tournament_select"]


class EvolutionResult:
    __slots__ = ("best", "best_fitness", "population", "fitnesses", "generations", "evaluations")

    def __init__(self, best, best_fitness, population, fitnesses, generations, evaluations):
        self.best = best
        self.best_fitness = best_fitness
        self.population = population
        self.fitnesses = fitnesses
        self.generations = generations
        self.evaluations = evaluations


def tournament_select(population: list[G], fitnesses: list[float], size: int, rng: random.Random) -> G:
    n = len(population)
    best = rng.randrange(n)
    for _ in range(min(size, n) - 1):
        i = rng.randrange(n)
        if fitnesses[i] > fitnesses[best]:
            best = i
    return population[best]


def evolve(
    fm: ForwardModel,
    rng: random.Random,
    *,
    population_size: int,
    tournament_size: int,
    elitism: bool,
    random_genome: Callable[[], G],
    crossover: Callable[[G, G], G],
    mutate: Callable[[G], G],
    evaluate: Callable[[G], float],
    seed_population: list[G] | None = None,
) -> EvolutionResult:
    population: list[G] = list(seed_population or ())
    while len(population) < population_size:
        population.append(random_genome())
    population = population[:population_size]

    fitnesses: list[float] = []
    best = None
    best_fit = -float("inf")
    evaluations = 0

    def consider(genome: G, fitness: float) -> None:
        # An evaluation that drained the budget may have been truncated
        # mid-playout; its value is not comparable, so it only drives the
        # best-so-far when nothing untruncated exists yet.
        nonlocal best, best_fit
        if fm.remaining <= 0 and best is not None:
            return
        if fitness > best_fit:
            best, best_fit = genome, fitness

    for g in population:
        f = evaluate(g)
        evaluations += 1
        fitnesses.append(f)
        consider(g, f)
        if fm.remaining <= 0 and len(fitnesses) < len(population):
            population = population[: len(fitnesses)]
            break

    generations = 0
    while fm.remaining > 0:
        if len(population) == 1:
            child = mutate(population[0])
            f = evaluate(child)
            evaluations += 1
            if f >= fitnesses[0] and fm.remaining > 0:
                population[0], fitnesses[0] = child, f
            consider(child, f)
        else:
            next_pop: list[G] = []
            next_fit: list[float] = []
            if elitism:
                i = max(range(len(population)), key=fitnesses.__getitem__)
                next_pop.append(population[i])
                next_fit.append(fitnesses[i])
            while len(next_pop) < population_size:
                p1 = tournament_select(population, fitnesses, tournament_size, rng)
                p2 = tournament_select(population, fitnesses, tournament_size, rng)
                child = mutate(crossover(p1, p2))
                f = evaluate(child)
                evaluations += 1
                next_fit.append(f)
                next_pop.append(child)
                consider(child, f)
                if fm.remaining <= 0:
                    break
            population, fitnesses = next_pop, next_fit
        generations += 1
    return EvolutionResult(best, best_fit, population, fitnesses, generations, evaluations)
