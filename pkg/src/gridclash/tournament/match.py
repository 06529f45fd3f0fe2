"""Playing one full game between two agents under the per-decision
forward-model budget, recording everything the experiment pipeline needs."""

from __future__ import annotations

import dataclasses

from ..agents import AgentSpec, ForwardModel, make_agent
from ..engine import Status, Verb, advance, end_turn, observe, player_has_action
from ..modes import ModeConfig, initial_state
from ..rng import spawn_rng

__all__ = ["MatchRecord", "play_match", "OUTCOME_NAMES"]

OUTCOME_NAMES = {Status.WIN_P0: "win0", Status.WIN_P1: "win1", Status.DRAW: "draw"}


@dataclasses.dataclass(frozen=True)
class MatchRecord:
    mode: str
    agent0: str
    agent1: str
    seed: int
    seats_swapped: bool
    outcome: str
    turns_played: int
    fm_calls: tuple[int, int]
    usage: tuple[tuple[int, ...], tuple[int, ...]]  # per seat, 6 script counts


def play_match(
    cfg: ModeConfig,
    spec0: AgentSpec,
    spec1: AgentSpec,
    seed: int,
    swapped: bool = False,
    budget: int = 1000,
) -> MatchRecord:
    """One seeded game: agent0 always moves first; ``swapped`` exchanges the
    spawn layout so rematches cancel starting-position bias. Deterministic
    in all its inputs.
    """
    state = initial_state(cfg, seed, swapped)
    agents = (make_agent(spec0), make_agent(spec1))
    rngs = tuple(
        spawn_rng(cfg.name, seed, swapped, "agent", seat) for seat in (0, 1)
    )
    fm_totals = [0, 0]
    usage = [[0] * 6, [0] * 6]
    while state.status == Status.ONGOING:
        p = state.current_player
        if not player_has_action(state):
            # none of the player's units can act: the turn ends automatically
            state = end_turn(state)
            continue
        fm = ForwardModel(budget=budget)
        action = agents[p].decide(observe(state, p), fm, rngs[p])
        fm_totals[p] += fm.calls
        if action.verb == Verb.END_TURN:
            state = end_turn(state)
            continue
        state = advance(state, action)  # validating: an illegal action is a bug
        script = agents[p].last_trace.script
        if script is not None:
            usage[p][script] += 1
    return MatchRecord(
        mode=cfg.name,
        agent0=spec0.display_name,
        agent1=spec1.display_name,
        seed=seed,
        seats_swapped=swapped,
        outcome=OUTCOME_NAMES[Status(state.status)],
        turns_played=state.turn,
        fm_calls=(fm_totals[0], fm_totals[1]),
        usage=(tuple(usage[0]), tuple(usage[1])),
    )
