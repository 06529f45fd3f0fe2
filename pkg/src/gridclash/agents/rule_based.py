"""The non-portfolio benchmark agents: a combat policy, a pusher policy, and
a uniform-random baseline.

The combat agent heals the strongest damaged ally in range, otherwise
attacks the most isolated enemy in range (preferring strong targets), and
otherwise advances toward the nearest enemy. The pusher agent plans
(move*, push) sequences that end with an enemy displaced into a hole,
executes the next step of the cheapest plan, and falls back to a cautious
approach that never parks a unit where an enemy could push it into a hole.
"""

from __future__ import annotations

import random
from collections import deque

from ..engine import (
    HOLE,
    PLAIN,
    Action,
    GameState,
    Verb,
    chebyshev,
    legal_actions,
    push_destination,
    reachable_tiles,
)
from .base import Agent, DecideTrace
from .playout import ForwardModel

__all__ = ["CombatAgent", "PusherAgent", "RandomAgent", "best_push_plan"]


def _strength(u) -> int:
    return u.attack + u.max_health


class CombatAgent(Agent):
    kind = "combat"

    def decide(self, state: GameState, fm: ForwardModel, rng: random.Random):
        me = state.current_player
        mine = [u for u in state.units.values() if u.owner == me and u.ap > 0]
        enemies = [u for u in state.units.values() if u.owner != me]

        # 1) heal the strongest damaged ally in range
        best = None
        for h in mine:
            if "heal" not in h.abilities or state.rules.heal_amount <= 0:
                continue
            for ally in state.units.values():
                if ally.owner != me or ally.health >= ally.max_health:
                    continue
                if chebyshev(h.x, h.y, ally.x, ally.y) > h.ability_range:
                    continue
                key = (-_strength(ally), ally.uid, h.uid)
                if best is None or key < best[0]:
                    best = (key, Action(Verb.HEAL, h.uid, ally.uid))
        if best is not None:
            self.last_trace = DecideTrace(fm_calls=fm.calls)
            return best[1]

        # 2) attack the most isolated enemy in range, strong targets first
        def isolation(e) -> int:
            return sum(
                1
                for o in enemies
                if o.uid != e.uid and chebyshev(o.x, o.y, e.x, e.y) <= 1
            )

        best = None
        for a in mine:
            if a.attack <= 0:
                continue
            for e in enemies:
                if chebyshev(a.x, a.y, e.x, e.y) > a.attack_range:
                    continue
                key = (isolation(e), -_strength(e), e.uid, a.uid)
                if best is None or key < best[0]:
                    best = (key, Action(Verb.ATTACK, a.uid, e.uid))
        if best is not None:
            self.last_trace = DecideTrace(fm_calls=fm.calls)
            return best[1]

        # 3) advance toward the nearest enemy
        for u in sorted(mine, key=lambda v: v.uid):
            if not enemies:
                tiles = reachable_tiles(state, u)
                if tiles:
                    self.last_trace = DecideTrace(fm_calls=fm.calls)
                    return Action(Verb.MOVE, u.uid, tiles[rng.randrange(len(tiles))])
                continue
            target = min(enemies, key=lambda e: (chebyshev(u.x, u.y, e.x, e.y), e.uid))
            here = chebyshev(u.x, u.y, target.x, target.y)
            options = [
                (chebyshev(x, y, target.x, target.y), y, x)
                for x, y in reachable_tiles(state, u)
            ]
            if options:
                d, y, x = min(options)
                if d < here:
                    self.last_trace = DecideTrace(fm_calls=fm.calls)
                    return Action(Verb.MOVE, u.uid, (x, y))
        return self._end_turn(fm)


def _blocked(state: GameState, x: int, y: int) -> bool:
    return not state.rules.passable(x, y) or (x, y) in state.pos


def _push_origins(state: GameState, enemy) -> list[tuple[int, int]]:
    """Tiles from which a push displaces ``enemy`` into a hole."""
    rules = state.rules
    out = []
    for px, py in rules.neighbors[enemy.y * rules.width + enemy.x]:
        probe = enemy._replace(x=px, y=py)
        dx, dy = push_destination(rules, probe, enemy)
        if 0 <= dx < rules.width and 0 <= dy < rules.height and rules.grid[dy][dx] == HOLE:
            out.append((px, py))
    return out


def best_push_plan(state: GameState, player: int):
    """Cheapest (move*, push) plan killing an enemy via a hole.

    Returns (cost_in_actions, pusher_id, target_id, first_tile_or_None) or
    None; cost counts the moves plus the final push. Other units are treated
    as frozen obstacles. Ties break on shortest plan, then lowest target id,
    then lowest pusher id.
    """
    rules = state.rules
    enemies = [u for u in state.units.values() if u.owner != player]
    goals: dict[tuple[int, int], list] = {}
    for e in enemies:
        for tile in _push_origins(state, e):
            goals.setdefault(tile, []).append(e.uid)
    if not goals:
        return None
    best = None
    for u in state.units.values():
        if u.owner != player or "push" not in u.abilities:
            continue
        # BFS in single-tile move actions from the pusher's tile over free
        # ground (pusher units have move range 1). Pure geometry: action
        # points are the executor's concern, not the planner's.
        start = (u.x, u.y)
        seen = {start}
        frontier = deque([(start, 0, None)])
        while frontier:
            (cx, cy), dist, first = frontier.popleft()
            if (cx, cy) in goals:
                target = min(goals[(cx, cy)])
                key = (dist + 1, target, u.uid)
                if best is None or key < best[0]:
                    best = (key, u.uid, target, first)
            if best is not None and dist + 1 >= best[0][0]:
                continue
            for nxt in rules.neighbors[cy * rules.width + cx]:
                if nxt in seen or nxt in state.pos:
                    continue
                seen.add(nxt)
                frontier.append((nxt, dist + 1, first or nxt))
    if best is None:
        return None
    (cost, _, _), uid, target_uid, first = best
    return cost, uid, target_uid, first


def _dangerous(state: GameState, x: int, y: int) -> bool:
    """A tile from which some enemy push could land the occupant in a hole.

    Straight pushes only ever reach cardinally adjacent holes. For an
    x-adjacent hole any of the three tiles on the far side works (diagonal
    pushes resolve along x); a y-adjacent hole needs the exactly opposite
    tile. Occupancy is ignored: enemies move.
    """
    rules = state.rules
    grid = rules.grid
    width, height = rules.width, rules.height
    for dx, dy in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        hx, hy = x + dx, y + dy
        if not (0 <= hx < width and 0 <= hy < height) or grid[hy][hx] != HOLE:
            continue
        if dx:
            candidates = ((x - dx, y - 1), (x - dx, y), (x - dx, y + 1))
        else:
            candidates = ((x, y - dy),)
        for ax, ay in candidates:
            if 0 <= ax < width and 0 <= ay < height and grid[ay][ax] == PLAIN:
                return True
    return False


class PusherAgent(Agent):
    kind = "pusher"

    def decide(self, state: GameState, fm: ForwardModel, rng: random.Random):
        me = state.current_player
        plan = best_push_plan(state, me)
        if plan is not None:
            cost, uid, target_uid, first = plan
            u = state.units[uid]
            if cost == 1 and u.ap > 0:
                self.last_trace = DecideTrace(fm_calls=fm.calls)
                return Action(Verb.PUSH, uid, target_uid)
            if first is not None and u.ap > 0 and u.move_range >= 1:
                # step along the plan; re-planned after every action
                self.last_trace = DecideTrace(fm_calls=fm.calls)
                return Action(Verb.MOVE, uid, first)
        # fallback: cautious approach toward the nearest enemy
        enemies = [u for u in state.units.values() if u.owner != me]
        for u in state.units.values():
            if u.owner != me or u.ap <= 0:
                continue
            tiles = [
                (x, y)
                for x, y in reachable_tiles(state, u)
                if not _dangerous(state, x, y)
            ]
            if not tiles:
                continue
            if enemies:
                target = min(
                    enemies, key=lambda e: (chebyshev(u.x, u.y, e.x, e.y), e.uid)
                )
                here = chebyshev(u.x, u.y, target.x, target.y)
                d, y, x = min(
                    (chebyshev(x, y, target.x, target.y), y, x) for x, y in tiles
                )
                if d < here:
                    self.last_trace = DecideTrace(fm_calls=fm.calls)
                    return Action(Verb.MOVE, u.uid, (x, y))
            else:
                self.last_trace = DecideTrace(fm_calls=fm.calls)
                return Action(Verb.MOVE, u.uid, tiles[rng.randrange(len(tiles))])
        return self._end_turn(fm)


class RandomAgent(Agent):
    """Uniform over all unit actions of the side to move."""

    kind = "random"

    def decide(self, state: GameState, fm: ForwardModel, rng: random.Random):
        me = state.current_player
        actions = []
        for u in state.units.values():
            if u.owner == me and u.ap > 0:
                actions.extend(legal_actions(state, u.uid))
        if not actions:
            return self._end_turn(fm)
        self.last_trace = DecideTrace(fm_calls=fm.calls)
        return actions[rng.randrange(len(actions))]
