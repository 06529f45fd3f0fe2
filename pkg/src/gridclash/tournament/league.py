"""Round-robin leagues: every unordered agent pair plays each seed twice,
once per seat arrangement. Matches fan out to a process pool and merge in
job order, so results are independent of completion order; a JSONL
checkpoint makes long leagues resumable match by match."""

from __future__ import annotations

import dataclasses
import json
import os
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from pathlib import Path

from ..agents import AgentSpec
from ..modes import ModeConfig
from .match import MatchRecord, play_match

__all__ = ["LeagueResult", "PairStats", "run_league", "league_jobs"]


@dataclasses.dataclass
class PairStats:
    wins: int = 0
    draws: int = 0
    losses: int = 0

    @property
    def games(self) -> int:
        return self.wins + self.draws + self.losses

    def win_rate(self) -> float:
        return self.wins / self.games if self.games else 0.0


@dataclasses.dataclass
class LeagueResult:
    mode: str
    agents: list[str]
    games_per_pair: int
    budget: int
    records: list[MatchRecord]

    def pair_stats(self, i: int, j: int) -> PairStats:
        """Results of agent i against agent j, aggregated over both seats."""
        a, b = self.agents[i], self.agents[j]
        stats = PairStats()
        for r in self.records:
            if r.agent0 == a and r.agent1 == b:
                stats.wins += r.outcome == "win0"
                stats.losses += r.outcome == "win1"
                stats.draws += r.outcome == "draw"
            elif r.agent0 == b and r.agent1 == a:
                stats.wins += r.outcome == "win1"
                stats.losses += r.outcome == "win0"
                stats.draws += r.outcome == "draw"
        return stats

    def matrix(self) -> list[list[float | None]]:
        """Cell (i, j) is row agent i's win-rate against column agent j."""
        n = len(self.agents)
        out: list[list[float | None]] = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i != j:
                    out[i][j] = self.pair_stats(i, j).win_rate()
        return out

    def totals(self) -> list[PairStats]:
        out = []
        for i in range(len(self.agents)):
            t = PairStats()
            for j in range(len(self.agents)):
                if i == j:
                    continue
                s = self.pair_stats(i, j)
                t.wins += s.wins
                t.draws += s.draws
                t.losses += s.losses
            out.append(t)
        return out


def league_jobs(n_agents: int, games_per_pair: int, seed0: int = 1):
    """(i, j, seed, swapped) for every match of the league: seeds seed0..
    seed0+games_per_pair/2-1, played twice with interchanged positions."""
    if games_per_pair % 2:
        raise ValueError("games_per_pair must be even (each seed plays both seats)")
    half = games_per_pair // 2
    for i in range(n_agents):
        for j in range(i + 1, n_agents):
            for seed in range(seed0, seed0 + half):
                for swapped in (False, True):
                    yield i, j, seed, swapped


def _run_job(args):
    cfg, spec_a, spec_b, seed, swapped, budget = args
    return play_match(cfg, spec_a, spec_b, seed, swapped, budget)


def run_league(
    cfg: ModeConfig,
    specs: list[AgentSpec],
    games_per_pair: int = 200,
    budget: int = 1000,
    *,
    seed0: int = 1,
    workers: int | None = None,
    checkpoint: str | Path | None = None,
    progress=None,
) -> LeagueResult:
    if len(specs) < 2:
        raise ValueError("a league needs at least two agents")
    names = [s.display_name for s in specs]
    if len(set(names)) != len(names):
        raise ValueError(f"agent names must be unique, got {names}")
    jobs = list(league_jobs(len(specs), games_per_pair, seed0))
    results: dict[tuple, MatchRecord] = {}

    done_keys = set()
    ckpt_file = None
    if checkpoint is not None:
        path = Path(checkpoint)
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.exists():
            for line in path.read_text().splitlines():
                if not line.strip():
                    continue
                rec = record_from_json(json.loads(line))
                key = _record_key(rec, names)
                if key is not None:
                    done_keys.add(key)
                    results[key] = rec
        ckpt_file = open(path, "a")

    pending = [
        (i, j, seed, swapped)
        for (i, j, seed, swapped) in jobs
        if (i, j, seed, swapped) not in done_keys
    ]
    try:
        _execute(cfg, specs, pending, budget, workers, results, ckpt_file, progress)
    finally:
        if ckpt_file is not None:
            ckpt_file.close()
    records = [results[key] for key in jobs]
    return LeagueResult(cfg.name, names, games_per_pair, budget, records)


def _execute(cfg, specs, pending, budget, workers, results, ckpt_file, progress):
    def complete(key, record):
        results[key] = record
        if ckpt_file is not None:
            ckpt_file.write(json.dumps(record_to_json(record)) + "\n")
            ckpt_file.flush()
        if progress is not None:
            progress(len(results))

    workers = workers or os.cpu_count() or 1
    if workers <= 1 or len(pending) <= 1:
        for i, j, seed, swapped in pending:
            rec = play_match(cfg, specs[i], specs[j], seed, swapped, budget)
            complete((i, j, seed, swapped), rec)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {}
        queue = list(reversed(pending))
        # keep a bounded number of outstanding jobs so checkpoints stay fresh
        while queue or futures:
            while queue and len(futures) < workers * 4:
                key = queue.pop()
                i, j, seed, swapped = key
                fut = pool.submit(
                    _run_job, (cfg, specs[i], specs[j], seed, swapped, budget)
                )
                futures[fut] = key
            done, _ = wait(futures, return_when=FIRST_COMPLETED)
            for fut in done:
                complete(futures.pop(fut), fut.result())


def record_to_json(r: MatchRecord) -> dict:
    return {
        "mode": r.mode,
        "agent0": r.agent0,
        "agent1": r.agent1,
        "seed": r.seed,
        "seats_swapped": r.seats_swapped,
        "outcome": r.outcome,
        "turns_played": r.turns_played,
        "fm_calls": list(r.fm_calls),
        "usage": [list(r.usage[0]), list(r.usage[1])],
    }


def record_from_json(d: dict) -> MatchRecord:
    return MatchRecord(
        mode=d["mode"],
        agent0=d["agent0"],
        agent1=d["agent1"],
        seed=int(d["seed"]),
        seats_swapped=bool(d["seats_swapped"]),
        outcome=d["outcome"],
        turns_played=int(d["turns_played"]),
        fm_calls=(int(d["fm_calls"][0]), int(d["fm_calls"][1])),
        usage=(tuple(d["usage"][0]), tuple(d["usage"][1])),
    )


def _record_key(rec: MatchRecord, names: list[str]):
    try:
        i = names.index(rec.agent0)
        j = names.index(rec.agent1)
    except ValueError:
        return None
    return (i, j, rec.seed, rec.seats_swapped)
