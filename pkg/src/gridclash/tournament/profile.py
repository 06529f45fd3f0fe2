"""Portfolio-usage profiling: how often an agent plays each script when
given the full set, measured over many games against the mode's rule-based
opponent."""

from __future__ import annotations

import dataclasses
import os
from concurrent.futures import ProcessPoolExecutor

from ..agents import AgentSpec, rule_based_kind
from ..modes import ModeConfig
from ..scripts import SCRIPT_CODES
from .match import play_match

__all__ = ["UsageProfile", "usage_profile"]


@dataclasses.dataclass(frozen=True)
class UsageProfile:
    agent: str
    mode: str
    games: int
    counts: tuple[int, ...]  # per script, summed over all games
    error: str | None = None

    @property
    def total_actions(self) -> int:
        return sum(self.counts)

    def frequencies(self) -> tuple[float, ...]:
        total = self.total_actions
        if total == 0:
            return (0.0,) * len(SCRIPT_CODES)
        return tuple(c / total for c in self.counts)


def _profile_job(args):
    cfg, spec, opponent, game, budget = args
    seed = game // 2 + 1
    swapped = bool(game % 2)
    if swapped:
        rec = play_match(cfg, opponent, spec, seed, True, budget)
        return rec.usage[1]
    rec = play_match(cfg, spec, opponent, seed, False, budget)
    return rec.usage[0]


def usage_profile(
    cfg: ModeConfig,
    spec: AgentSpec,
    n_games: int = 1000,
    budget: int = 1000,
    *,
    workers: int | None = None,
    progress=None,
) -> UsageProfile:
    """Normalized script-usage histogram over ``n_games`` seeded games
    against the mode-matched rule-based agent, alternating seats. The agent
    must be configured with all six scripts."""
    if len(spec.params.portfolio) != len(SCRIPT_CODES):
        raise ValueError(
            "usage profiles are defined for the full portfolio; "
            f"agent {spec.display_name!r} has {list(spec.params.portfolio)}"
        )
    opponent = AgentSpec(rule_based_kind(cfg.name), name="rule-based")
    jobs = [(cfg, spec, opponent, game, budget) for game in range(n_games)]
    counts = [0] * len(SCRIPT_CODES)
    workers = workers or os.cpu_count() or 1
    if workers <= 1 or len(jobs) <= 1:
        outputs = map(_profile_job, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        outputs = pool.map(_profile_job, jobs, chunksize=8)
    for done, usage in enumerate(outputs):
        for s, c in zip(SCRIPT_CODES, usage):
            counts[s] += c
        if progress is not None:
            progress(done + 1)
    if workers > 1 and len(jobs) > 1:
        pool.shutdown()
    error = None
    if sum(counts) == 0:
        error = "agent executed no script-mediated actions"
    return UsageProfile(spec.display_name, cfg.name, n_games, tuple(counts), error)
