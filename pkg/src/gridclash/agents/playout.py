"""Budgeted forward-model access and the shared playout executor.

All agent search runs through a :class:`ForwardModel`: every ``advance`` and
``end_turn`` costs one unit of budget, which is the compute currency of the
whole framework. Playouts check the remaining budget before every call and
truncate when it runs out, so a decide call can never exceed its allowance.

Playout semantics shared by every portfolio agent: when the controller is to
move, the script for the lowest-id unit that still has usable actions picks
one action; when no unit can act, the turn is ended. The opponent plays its
whole turn the same way from a policy (single fixed script or a per-unit
assignment). Sequence plans stop after a fixed number of controlled actions,
assignment plans after a fixed number of controller-and-reply rounds.
"""

from __future__ import annotations

import random
from typing import Mapping, Sequence

from ..engine import (
    GameState,
    Status,
    advance as _advance,
    end_turn as _end_turn,
    unit_has_action,
)
from ..heuristics import ObjectiveVector, combat_score, objectives
from ..scripts import ScriptId, script_action

__all__ = ["BudgetExhausted", "ForwardModel", "rollout", "rollout_assignment", "rollout_assignment_rounds"]


class BudgetExhausted(RuntimeError):
    pass


class ForwardModel:
    """Counts forward-model calls and enforces a hard per-decision budget."""

    __slots__ = ("calls", "budget")

    def __init__(self, budget: int | None = None):
        self.calls = 0
        self.budget = budget

    @property
    def remaining(self) -> int:
        if self.budget is None:
            return 1 << 30
        return self.budget - self.calls

    def advance(self, state: GameState, action, check: bool = True) -> GameState:
        if self.budget is not None and self.calls >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} forward-model calls spent")
        nxt = _advance(state, action, check)
        self.calls += 1
        return nxt

    def end_turn(self, state: GameState) -> GameState:
        if self.budget is not None and self.calls >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} forward-model calls spent")
        nxt = _end_turn(state)
        self.calls += 1
        return nxt


def _acting_unit(state: GameState, player: int) -> int | None:
    """Lowest-id unit of ``player`` that has action points and at least one
    legal action. Unit dicts keep ascending-id insertion order, so the first
    hit is the lowest id."""
    for uid, u in state.units.items():
        if u.owner == player and u.ap > 0 and unit_has_action(state, uid):
            return uid
    return None


def _playout(
    fm: ForwardModel,
    state: GameState,
    player: int,
    controller_script,
    opponent_policy,
    rng: random.Random,
    *,
    max_actions: int | None = None,
    max_rounds: int | None = None,
    on_controller_action=None,
) -> GameState:
    """Drive the game forward; see module docstring for the exact rules.

    ``controller_script(uid, index)`` supplies the script for the
    controller's next action (``index`` counts controlled actions so far);
    ``opponent_policy`` is a ScriptId or a unit-id -> ScriptId mapping.
    """
    if isinstance(opponent_policy, Mapping):
        opp_lookup = opponent_policy.get
        opp_default = next(iter(opponent_policy.values()), ScriptId.ATTACK_CLOSEST)
    else:
        fixed = ScriptId(opponent_policy)
        opp_lookup = None
        opp_default = fixed
    actions_done = 0
    rounds_done = 0
    exhausted_at = None
    while state.status == Status.ONGOING:
        if max_rounds is not None and rounds_done >= max_rounds:
            break
        if fm.remaining <= 0:
            break
        if state.current_player == player:
            if max_actions is not None and actions_done >= max_actions:
                # plan exhausted: let the opponent answer once, then stop,
                # so every plan is scored after the counterattack it invites
                if exhausted_at is None:
                    exhausted_at = rounds_done
                if rounds_done > exhausted_at:
                    break
                state = fm.end_turn(state)
                continue
            uid = _acting_unit(state, player)
            if uid is None:
                state = fm.end_turn(state)
                continue
            script = controller_script(uid, actions_done)
            action = script_action(script, state, uid, rng)
            state = fm.advance(state, action, check=False)
            actions_done += 1
            if on_controller_action is not None:
                on_controller_action()
        else:
            uid = _acting_unit(state, 1 - player)
            if uid is None:
                state = fm.end_turn(state)
                rounds_done += 1
                continue
            script = opp_lookup(uid, opp_default) if opp_lookup else opp_default
            action = script_action(script, state, uid, rng)
            state = fm.advance(state, action, check=False)
    return state


def rollout(
    state: GameState,
    plan: Sequence[ScriptId],
    opponent_script: ScriptId,
    horizon_actions: int,
    rng: random.Random,
    fm: ForwardModel | None = None,
    *,
    multi_objective: bool = False,
) -> float | ObjectiveVector:
    """Value of executing a script sequence from the controller's seat.

    Runs the plan one controlled action per gene (at most
    ``horizon_actions``), opponent turns interleaved via the fixed script;
    after the last gene the opponent finishes one more reply before the
    reached state is scored, so a plan pays for the counterattack it sets
    up. A terminal state dominates through the heuristic's win/loss
    override; with an exhausted budget the input state itself is scored.
    """
    fm = fm if fm is not None else ForwardModel()
    player = state.current_player
    plan = list(plan)
    end = _playout(
        fm,
        state,
        player,
        lambda uid, i: plan[i],
        opponent_script,
        rng,
        max_actions=min(horizon_actions, len(plan)),
    )
    if multi_objective:
        return objectives(end, player)
    return combat_score(end, player)


def rollout_assignment(
    state: GameState,
    assignment: Mapping[int, ScriptId],
    opponent_policy,
    horizon_actions: int,
    rng: random.Random,
    fm: ForwardModel | None = None,
    *,
    changes: list[list[int]] | None = None,
    change_factory=None,
) -> float:
    """Value of playing a unit-script assignment for a fixed-length playout
    of ``horizon_actions`` controlled actions, followed by one opponent
    reply (same closing rule as the sequence rollout).

    The optional ``changes`` list (timed script-change events of the sparse
    encoding) is consumed against a working copy: each controlled action
    decrements every event's tick counter, events reaching zero rewrite the
    working assignment and are replaced via ``change_factory``.
    """
    fm = fm if fm is not None else ForwardModel()
    player = state.current_player
    work = dict(assignment)
    default = next(iter(work.values()), ScriptId.ATTACK_CLOSEST)
    events = [list(c) for c in changes] if changes else None

    def controller_script(uid: int, _i: int) -> ScriptId:
        return work.get(uid, default)

    on_action = None
    if events:
        def on_action():
            for ev in events:
                ev[0] -= 1
                if ev[0] <= 0:
                    work[ev[1]] = ev[2]
                    ev[:] = change_factory()

    end = _playout(
        fm,
        state,
        player,
        controller_script,
        opponent_policy,
        rng,
        max_actions=horizon_actions,
        on_controller_action=on_action,
    )
    return combat_score(end, player)


def rollout_assignment_rounds(
    state: GameState,
    assignment: Mapping[int, ScriptId],
    opponent_policy,
    rounds: int,
    rng: random.Random,
    fm: ForwardModel | None = None,
    *,
    perspective: int | None = None,
) -> float:
    """Value of playing both sides' assignments for whole rounds; the
    horizon used by the greedy searcher, whose plan length is in turns."""
    fm = fm if fm is not None else ForwardModel()
    player = state.current_player
    work = dict(assignment)
    default = next(iter(work.values()), ScriptId.ATTACK_CLOSEST)
    end = _playout(
        fm,
        state,
        player,
        lambda uid, _i: work.get(uid, default),
        opponent_policy,
        rng,
        max_rounds=rounds,
    )
    return combat_score(end, player if perspective is None else perspective)
