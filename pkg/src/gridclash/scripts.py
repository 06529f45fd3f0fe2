"""The six portfolio scripts.

A script maps (observed state, unit) to a single action. Non-fallback
branches are pure functions of the state; randomness only enters through
the explicit fallbacks (no visible enemy, no applicable ability, no
improving move). Ties are broken by lowest target unit id and then
row-major tile order so repeated calls are reproducible.

Stable integer codes 0-5 identify the scripts in genomes, logs, and CSV
exports.
"""

from __future__ import annotations

import random
from enum import IntEnum

from .engine import (
    Action,
    GameState,
    Unit,
    Verb,
    _attack_targets,
    _heal_targets,
    _push_targets,
    chebyshev,
    legal_actions,
    reachable_tiles,
)

__all__ = ["ScriptId", "SCRIPT_CODES", "Portfolio", "script_action"]


class ScriptId(IntEnum):
    ATTACK_CLOSEST = 0
    ATTACK_WEAKEST = 1
    RUN_AWAY = 2
    RUN_TO_FRIENDS = 3
    USE_SPECIAL_ABILITY = 4
    RANDOM = 5


SCRIPT_CODES = tuple(ScriptId)

# Short labels used in exports and figure axes.
SCRIPT_LABELS = {
    ScriptId.ATTACK_CLOSEST: "AC",
    ScriptId.ATTACK_WEAKEST: "AW",
    ScriptId.RUN_AWAY: "RA",
    ScriptId.RUN_TO_FRIENDS: "RF",
    ScriptId.USE_SPECIAL_ABILITY: "UA",
    ScriptId.RANDOM: "RND",
}


class Portfolio(tuple):
    """Ordered, duplicate-free, non-empty subset of scripts in canonical
    enum order; genome indices stay stable because the order is fixed."""

    def __new__(cls, scripts=SCRIPT_CODES):
        items = sorted({ScriptId(s) for s in scripts})
        if not items:
            raise ValueError("a portfolio needs at least one script")
        return super().__new__(cls, items)

    def __getnewargs__(self):
        return (tuple(self),)

    @classmethod
    def from_mask(cls, mask: int) -> "Portfolio":
        return cls(s for s in SCRIPT_CODES if mask >> s & 1)

    def mask(self) -> int:
        return sum(1 << s for s in self)


def _random_action(state: GameState, unit_id: int, rng: random.Random) -> Action:
    actions = legal_actions(state, unit_id)
    if not actions:
        raise ValueError(f"unit {unit_id} has no legal actions")
    return actions[rng.randrange(len(actions))]


def _enemies(state: GameState, unit: Unit) -> list[Unit]:
    return [u for u in state.units.values() if u.owner != unit.owner]


def _step_toward(state: GameState, unit: Unit, tx: int, ty: int) -> Action | None:
    """Move to the reachable tile closest to (tx, ty), provided it improves
    on standing still; ties row-major via the reachable-tile ordering."""
    best = None
    best_d = chebyshev(unit.x, unit.y, tx, ty)
    for x, y in reachable_tiles(state, unit):
        d = chebyshev(x, y, tx, ty)
        if d < best_d:
            best, best_d = (x, y), d
    if best is None:
        return None
    return Action(Verb.MOVE, unit.uid, best)


def _attack_script(state, unit, rng, key) -> Action:
    in_range = _attack_targets(state, unit)
    if in_range:
        target = min(in_range, key=key)
        return Action(Verb.ATTACK, unit.uid, target.uid)
    enemies = _enemies(state, unit)
    if enemies:
        target = min(enemies, key=key)
        move = _step_toward(state, unit, target.x, target.y)
        if move is not None:
            return move
    return _random_action(state, unit.uid, rng)


def _attack_closest(state, unit, rng) -> Action:
    return _attack_script(
        state, unit, rng, lambda t: (chebyshev(unit.x, unit.y, t.x, t.y), t.uid)
    )


def _attack_weakest(state, unit, rng) -> Action:
    return _attack_script(state, unit, rng, lambda t: (t.health, t.uid))


def _run_away(state, unit, rng) -> Action:
    enemies = _enemies(state, unit)
    if not enemies:
        return _random_action(state, unit.uid, rng)
    best = None
    best_d = sum(chebyshev(unit.x, unit.y, e.x, e.y) for e in enemies)
    for x, y in reachable_tiles(state, unit):
        d = sum(chebyshev(x, y, e.x, e.y) for e in enemies)
        if d > best_d:
            best, best_d = (x, y), d
    if best is None:
        return _random_action(state, unit.uid, rng)
    return Action(Verb.MOVE, unit.uid, best)


def _run_to_friends(state, unit, rng) -> Action:
    friends = [
        u for u in state.units.values() if u.owner == unit.owner and u.uid != unit.uid
    ]
    if not friends:
        return _random_action(state, unit.uid, rng)
    best = None
    best_d = sum(chebyshev(unit.x, unit.y, f.x, f.y) for f in friends)
    for x, y in reachable_tiles(state, unit):
        d = sum(chebyshev(x, y, f.x, f.y) for f in friends)
        if d < best_d:
            best, best_d = (x, y), d
    if best is None:
        return _random_action(state, unit.uid, rng)
    return Action(Verb.MOVE, unit.uid, best)


def _use_special_ability(state, unit, rng) -> Action:
    heals = _heal_targets(state, unit)
    if heals:
        # Most-damaged friendly unit first (self included).
        target = min(heals, key=lambda t: (t.health - t.max_health, t.uid))
        if target.health < target.max_health:
            return Action(Verb.HEAL, unit.uid, target.uid)
    pushes = _push_targets(state, unit)
    if pushes:
        from .engine import HOLE, push_destination

        def rank(t):
            dx, dy = push_destination(state.rules, unit, t)
            lethal = state.rules.grid[dy][dx] == HOLE
            return (not lethal, t.owner == unit.owner, t.uid)

        target = min(pushes, key=rank)
        return Action(Verb.PUSH, unit.uid, target.uid)
    return _random_action(state, unit.uid, rng)


def _random_script(state, unit, rng) -> Action:
    return _random_action(state, unit.uid, rng)


_IMPL = {
    ScriptId.ATTACK_CLOSEST: _attack_closest,
    ScriptId.ATTACK_WEAKEST: _attack_weakest,
    ScriptId.RUN_AWAY: _run_away,
    ScriptId.RUN_TO_FRIENDS: _run_to_friends,
    ScriptId.USE_SPECIAL_ABILITY: _use_special_ability,
    ScriptId.RANDOM: _random_script,
}


def script_action(
    script: ScriptId, state: GameState, unit_id: int, rng: random.Random
) -> Action:
    """One legal action for the unit according to the script's rule.

    The unit must be alive, owned by the current player, and have at least
    one legal action; scripts never return END_TURN.
    """
    unit = state.units.get(unit_id)
    if unit is None:
        raise ValueError(f"unknown unit id {unit_id}")
    if unit.owner != state.current_player:
        raise ValueError(f"unit {unit_id} does not belong to the current player")
    if unit.ap <= 0:
        raise ValueError(f"unit {unit_id} has no action points")
    return _IMPL[ScriptId(script)](state, unit, rng)
