"""Forward-model throughput measurement."""

from __future__ import annotations

import dataclasses
import random
import time

from ..engine import Status, advance, end_turn, legal_actions, sample_action
from ..modes import ModeConfig, initial_state

__all__ = ["BenchResult", "bench_fm"]


@dataclasses.dataclass(frozen=True)
class BenchResult:
    mode: str
    seconds: float
    playout_calls: int
    playout_rate: float  # advance calls/sec inside full random playouts
    replay_calls: int
    replay_rate: float  # pure advance calls/sec on recorded state-action pairs


def _collect_pairs(cfg: ModeConfig, target: int, rng: random.Random):
    """Record (state, action) pairs from random play for replay timing."""
    pairs = []
    seed = 0
    while len(pairs) < target:
        seed += 1
        state = initial_state(cfg, seed)
        while state.status == Status.ONGOING and len(pairs) < target:
            acted = False
            for u in list(state.units.values()):
                if u.owner != state.current_player or u.ap <= 0:
                    continue
                action = sample_action(state, u, rng)
                if action is None:
                    continue
                pairs.append((state, action))
                state = advance(state, action)
                acted = True
                break
            if not acted:
                state = end_turn(state)
    return pairs


def bench_fm(cfg: ModeConfig, seconds: float = 5.0) -> BenchResult:
    """Single-threaded advance-calls/sec, measured two ways: full random
    playouts (includes action sampling) and pure replay of recorded pairs
    through the validating forward model."""
    rng = random.Random(2024)
    half = seconds / 2

    calls = 0
    t0 = time.perf_counter()
    seed = 0
    while time.perf_counter() - t0 < half:
        seed += 1
        state = initial_state(cfg, seed)
        while state.status == Status.ONGOING:
            acted = False
            for u in list(state.units.values()):
                if u.owner != state.current_player or u.ap <= 0:
                    continue
                action = sample_action(state, u, rng)
                if action is None:
                    continue
                state = advance(state, action, check=False)
                calls += 1
                acted = True
                break
            if not acted:
                state = end_turn(state)
                calls += 1
    playout_elapsed = time.perf_counter() - t0
    playout_rate = calls / playout_elapsed

    pairs = _collect_pairs(cfg, 2000, rng)
    replay_calls = 0
    t1 = time.perf_counter()
    while time.perf_counter() - t1 < half:
        for state, action in pairs:
            advance(state, action)
        replay_calls += len(pairs)
    replay_elapsed = time.perf_counter() - t1
    return BenchResult(
        mode=cfg.name,
        seconds=playout_elapsed + replay_elapsed,
        playout_calls=calls,
        playout_rate=playout_rate,
        replay_calls=replay_calls,
        replay_rate=replay_calls / replay_elapsed,
    )
