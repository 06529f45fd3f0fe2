"""The bandit-driven tuning loop and the game-based fitness protocol.

Fitness of a parameter point: 20 seeded games against the mode's rule-based
agent, 3 points per win, 1 per draw, 0 per loss (range 0-60). The tuner
evaluates exactly ``budget`` points: evaluate the current point, update the
n-tuple model, pick the best of 50 mutated neighbors by model estimate plus
exploration bonus, repeat; the answer is the evaluated point with the best
exploration-free model estimate.
"""

from __future__ import annotations

import dataclasses
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor

from ..agents import AgentSpec, rule_based_kind
from ..modes import ModeConfig
from ..rng import derive_seed
from ..tournament.match import play_match
from .model import LandscapeModel
from .space import SearchSpace

__all__ = [
    "FITNESS_GAMES",
    "WIN_POINTS",
    "DRAW_POINTS",
    "EXPLORATION_C",
    "EXPLORATION_EPS",
    "NEIGHBORHOOD",
    "evaluate_point",
    "ntbea_run",
    "TuneResult",
]

FITNESS_GAMES = 20
WIN_POINTS = 3
DRAW_POINTS = 1
LOSS_POINTS = 0

EXPLORATION_C = math.sqrt(2)
EXPLORATION_EPS = 0.5
NEIGHBORHOOD = 50


_DEFAULT_BUDGET = 1000


def spec_budget(_spec) -> int:
    return _DEFAULT_BUDGET


def evaluate_point(
    point: tuple[int, ...],
    agent_kind: str,
    cfg: ModeConfig,
    seed: int,
    *,
    space: SearchSpace | None = None,
    games: int = FITNESS_GAMES,
    budget: int = _DEFAULT_BUDGET,
    workers: int | None = None,
) -> float:
    """Total points of the point's agent over the evaluation games.

    Game seeds derive from (seed, game index): pairs of games share a layout
    with seats swapped so starting-position luck cancels.
    """
    space = space or SearchSpace.for_agent(agent_kind)
    spec = AgentSpec(agent_kind, space.to_params(point), name="tuned")
    opponent = AgentSpec(rule_based_kind(cfg.name), name="rule-based")
    total = 0
    jobs = []
    for game in range(games):
        layout = derive_seed(seed, "game", game // 2) % (1 << 31)
        swapped = bool(game % 2)
        jobs.append((layout, swapped))
    workers = workers or os.cpu_count() or 1

    def score(rec, swapped):
        if rec.outcome == "draw":
            return DRAW_POINTS
        won = rec.outcome == ("win1" if swapped else "win0")
        return WIN_POINTS if won else LOSS_POINTS

    if workers <= 1:
        for layout, swapped in jobs:
            a, b = (opponent, spec) if swapped else (spec, opponent)
            rec = play_match(cfg, a, b, layout, swapped, budget)
            total += score(rec, swapped)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    play_match, cfg,
                    *( (opponent, spec) if swapped else (spec, opponent) ),
                    layout, swapped, budget,
                )
                for layout, swapped in jobs
            ]
            for fut, (layout, swapped) in zip(futures, jobs):
                total += score(fut.result(), swapped)
    return float(total)


@dataclasses.dataclass
class TuneResult:
    agent_kind: str
    mode: str
    best_point: tuple[int, ...]
    best_estimate: float
    history: list[tuple[tuple[int, ...], float]]
    model: LandscapeModel
    space: SearchSpace

    def best_params(self):
        return self.space.to_params(self.best_point)


def ntbea_run(
    space: SearchSpace,
    fitness,
    budget: int = 100,
    seed: int = 0,
    *,
    neighborhood: int = NEIGHBORHOOD,
    exploration: float = EXPLORATION_C,
    eps: float = EXPLORATION_EPS,
    on_eval=None,
) -> tuple[tuple[int, ...], LandscapeModel, list[tuple[tuple[int, ...], float]]]:
    """Core loop, independent of what the fitness function does.

    ``fitness(point, eval_index)`` returns a real; exactly ``budget``
    evaluations are performed. Returns (best evaluated point by
    exploration-free estimate, the model, the evaluation history).
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = random.Random(derive_seed(seed, "ntbea"))
    model = LandscapeModel(len(space))
    current = space.random_point(rng)
    history: list[tuple[tuple[int, ...], float]] = []
    for i in range(budget):
        value = fitness(current, i)
        model.update(current, value)
        history.append((current, value))
        if on_eval is not None:
            on_eval(i, current, value)
        if i + 1 >= budget:
            break
        best_cand, best_est = None, None
        for _ in range(neighborhood):
            cand = space.mutate(current, rng)
            est = model.estimate(cand, exploration, eps)
            if best_est is None or est > best_est:
                best_cand, best_est = cand, est
        current = best_cand
    evaluated = {p for p, _ in history}
    best = max(evaluated, key=lambda p: (model.estimate(p, 0.0, eps), p))
    return best, model, history


def tune(
    agent_kind: str,
    cfg: ModeConfig,
    budget: int = 100,
    seed: int = 0,
    *,
    games: int = FITNESS_GAMES,
    game_budget: int = _DEFAULT_BUDGET,
    workers: int | None = None,
    on_eval=None,
) -> TuneResult:
    """Tune an agent's parameters and portfolio for one game mode."""
    space = SearchSpace.for_agent(agent_kind)

    def fitness(point, index):
        return evaluate_point(
            point, agent_kind, cfg, derive_seed(seed, "eval", index),
            space=space, games=games, budget=game_budget, workers=workers,
        )

    best, model, history = ntbea_run(space, fitness, budget, seed, on_eval=on_eval)
    return TuneResult(
        agent_kind=agent_kind,
        mode=cfg.name,
        best_point=best,
        best_estimate=model.estimate(best, 0.0),
        history=history,
        model=model,
        space=space,
    )
