"""Agent parameterization, decide-call tracing, and the common base class."""

from __future__ import annotations

import dataclasses
import random

from ..engine import END_TURN, Action, GameState
from ..scripts import Portfolio, ScriptId, script_action
from .playout import ForwardModel, _acting_unit

__all__ = ["AgentParams", "DecideTrace", "Agent", "params_from_config", "params_to_config"]


@dataclasses.dataclass(frozen=True)
class AgentParams:
    """Search-parameter bundle; agents ignore fields that do not apply to
    them (PGS has no population, sequence agents no response iterations).

    Defaults sit at the center of the tuning search space.
    """

    population_size: int = 10
    individual_length: int = 5
    mutation_rate: float = 0.5
    tournament_size: int = 5
    num_changes: int = 5
    response_iterations: int = 3
    elitism: bool = True
    continue_search: bool = True
    portfolio: Portfolio = Portfolio()
    # Opponent model used inside rollouts, and the script PGS seeds its own
    # units with.
    opponent_script: ScriptId = ScriptId.ATTACK_CLOSEST
    pgs_own_script: ScriptId = ScriptId.ATTACK_WEAKEST


@dataclasses.dataclass
class DecideTrace:
    """What a decide call did: the script behind the returned action (None
    for non-script agents or END_TURN), the best fitness seen, generations
    completed, and forward-model calls burned."""

    script: ScriptId | None = None
    fitness: float | None = None
    generations: int = 0
    fm_calls: int = 0


class Agent:
    """One decision-maker bound to one seat for one match.

    Instances may carry search state between decide calls (populations,
    shift buffers), so a fresh instance is built per match; all randomness
    comes from the rng handed to ``decide``.
    """

    kind = "agent"

    def __init__(self, params: AgentParams | None = None):
        self.params = params or AgentParams()
        self.last_trace = DecideTrace()

    def decide(self, state: GameState, fm: ForwardModel, rng: random.Random) -> Action:
        raise NotImplementedError

    def _end_turn(self, fm: ForwardModel) -> Action:
        self.last_trace = DecideTrace(fm_calls=fm.calls)
        return END_TURN

    def _script_move(
        self,
        state: GameState,
        uid: int,
        script: ScriptId,
        fm: ForwardModel,
        rng: random.Random,
        *,
        fitness: float | None = None,
        generations: int = 0,
    ) -> Action:
        action = script_action(script, state, uid, rng)
        self.last_trace = DecideTrace(script, fitness, generations, fm.calls)
        return action


def acting_unit(state: GameState, player: int) -> int | None:
    return _acting_unit(state, player)


def params_from_config(config: dict) -> AgentParams:
    """AgentParams from a config block's ``params``/``portfolio`` fields."""
    fields = dict(config.get("params") or {})
    if "portfolio" in config:
        fields["portfolio"] = Portfolio(ScriptId(s) for s in config["portfolio"])
    elif "portfolio" in fields:
        fields["portfolio"] = Portfolio(ScriptId(s) for s in fields["portfolio"])
    for key in ("opponent_script", "pgs_own_script"):
        if key in fields:
            fields[key] = ScriptId(fields[key])
    known = {f.name for f in dataclasses.fields(AgentParams)}
    unknown = set(fields) - known
    if unknown:
        raise ValueError(f"unknown agent parameters: {sorted(unknown)}")
    return AgentParams(**fields)


def params_to_config(kind: str, params: AgentParams, name: str | None = None) -> dict:
    block = {
        "agent": kind,
        "params": {
            "population_size": params.population_size,
            "individual_length": params.individual_length,
            "mutation_rate": params.mutation_rate,
            "tournament_size": params.tournament_size,
            "num_changes": params.num_changes,
            "response_iterations": params.response_iterations,
            "elitism": params.elitism,
            "continue_search": params.continue_search,
            "opponent_script": int(params.opponent_script),
            "pgs_own_script": int(params.pgs_own_script),
        },
        "portfolio": [int(s) for s in params.portfolio],
    }
    if name:
        block["name"] = name
    return block
