"""Grid-based, turn-based, multi-action game core.

The engine is deliberately rule-agnostic: everything mode-specific (win
condition, end-of-round decay, ability parameters, per-turn action points)
lives in a :class:`Rules` bundle built by :mod:`gridclash.modes`.

States are treated as immutable snapshots: :func:`advance` and
:func:`end_turn` return fresh states and never touch their input, so any
number of rollouts can share a state safely. Unit records are tuples and the
two dictionaries (units by id, occupancy by position) are shallow-copied on
every transition; this is the hot path of the whole project and is written
accordingly (direct tuple construction instead of ``_replace``, no dataclass
machinery).

Distances are Chebyshev throughout; movement reaches any passable,
unoccupied tile within range via breadth-first search, so obstacles block.
"""

from __future__ import annotations

import random
from enum import IntEnum
from typing import Iterator, NamedTuple

__all__ = [
    "Verb",
    "Status",
    "Action",
    "END_TURN",
    "Unit",
    "Rules",
    "GameState",
    "IllegalAction",
    "chebyshev",
    "legal_actions",
    "unit_has_action",
    "player_has_action",
    "advance",
    "end_turn",
    "outcome",
    "observe",
    "random_unit_action",
    "random_playout",
]

PLAIN, IMPASSABLE, HOLE = ".", "#", "O"

WIN_KING_DEATH = "king_death"
WIN_LAST_SIDE = "last_side_standing"


class Verb(IntEnum):
    MOVE = 0
    ATTACK = 1
    HEAL = 2
    PUSH = 3
    END_TURN = 4


class Status(IntEnum):
    ONGOING = 0
    WIN_P0 = 1
    WIN_P1 = 2
    DRAW = 3


class Action(NamedTuple):
    """A unit-scoped command. ``target`` is a grid position for MOVE and a
    unit id for ATTACK/HEAL/PUSH; END_TURN carries actor -1 and no target."""

    verb: int
    actor: int
    target: tuple[int, int] | int | None


END_TURN = Action(Verb.END_TURN, -1, None)


class Unit(NamedTuple):
    uid: int
    owner: int
    kind: str
    x: int
    y: int
    health: int
    max_health: int
    attack: int
    move_range: int
    attack_range: int
    vision_range: int
    ability_range: int
    abilities: tuple[str, ...]
    ap: int


class Rules:
    """Immutable per-mode rule bundle shared by every state of a match."""

    __slots__ = (
        "name",
        "width",
        "height",
        "grid",
        "ap_per_turn",
        "turn_limit",
        "win_rule",
        "decay",
        "heal_amount",
        "push_enabled",
        "fog_enabled",
        "king_kinds",
        "neighbors",
    )

    def __init__(
        self,
        name: str,
        grid: tuple[str, ...],
        *,
        ap_per_turn: int = 1,
        turn_limit: int = 100,
        win_rule: str = WIN_LAST_SIDE,
        decay: int = 0,
        heal_amount: int = 0,
        push_enabled: bool = False,
        fog_enabled: bool = False,
        king_kinds: frozenset[str] = frozenset(),
    ):
        self.name = name
        self.grid = grid
        self.height = len(grid)
        self.width = len(grid[0])
        self.ap_per_turn = ap_per_turn
        self.turn_limit = turn_limit
        self.win_rule = win_rule
        self.decay = decay
        self.heal_amount = heal_amount
        self.push_enabled = push_enabled
        self.fog_enabled = fog_enabled
        self.king_kinds = king_kinds
        # Passable Chebyshev neighbors per tile index (y * width + x),
        # presorted row-major; the workhorse of move generation.
        width, height = self.width, self.height
        nbrs = []
        for y in range(height):
            for x in range(width):
                cell = [
                    (nx, ny)
                    for ny in (y - 1, y, y + 1)
                    for nx in (x - 1, x, x + 1)
                    if (nx, ny) != (x, y)
                    and 0 <= nx < width
                    and 0 <= ny < height
                    and grid[ny][nx] == PLAIN
                ]
                nbrs.append(tuple(cell))
        self.neighbors = tuple(nbrs)

    def passable(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height and self.grid[y][x] == PLAIN

    def tile(self, x: int, y: int) -> str:
        return self.grid[y][x]


class GameState:
    """One snapshot of a running game. Never mutated after construction."""

    __slots__ = ("rules", "units", "pos", "current_player", "turn", "status", "seed_state")

    def __init__(
        self,
        rules: Rules,
        units: dict[int, Unit],
        pos: dict[tuple[int, int], int],
        current_player: int,
        turn: int,
        status: int,
        seed_state: int,
    ):
        self.rules = rules
        self.units = units
        self.pos = pos
        self.current_player = current_player
        self.turn = turn
        self.status = status
        self.seed_state = seed_state

    def living(self, owner: int) -> Iterator[Unit]:
        for u in self.units.values():
            if u.owner == owner:
                yield u

    def __repr__(self) -> str:
        return (
            f"GameState(mode={self.rules.name}, turn={self.turn}, "
            f"player={self.current_player}, units={len(self.units)}, "
            f"status={Status(self.status).name})"
        )


class IllegalAction(ValueError):
    """Raised when an action fails validation; the input state is untouched."""


def chebyshev(ax: int, ay: int, bx: int, by: int) -> int:
    dx = ax - bx
    dy = ay - by
    if dx < 0:
        dx = -dx
    if dy < 0:
        dy = -dy
    return dx if dx > dy else dy


_STEPS = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))


def reachable_tiles(state: GameState, unit: Unit) -> list[tuple[int, int]]:
    """Empty passable tiles the unit can move to this action, row-major order.

    BFS over the Chebyshev neighborhood; occupied, impassable, and hole
    tiles block both entry and pass-through.
    """
    rng_ = unit.move_range
    if rng_ <= 0:
        return []
    rules = state.rules
    nbrs = rules.neighbors
    width = rules.width
    occupied = state.pos
    if rng_ == 1:
        return [p for p in nbrs[unit.y * width + unit.x] if p not in occupied]
    start = (unit.x, unit.y)
    seen = {start}
    frontier = [start]
    out = []
    for _ in range(rng_):
        if not frontier:
            break
        nxt = []
        for cx, cy in frontier:
            for p in nbrs[cy * width + cx]:
                if p not in seen:
                    seen.add(p)
                    if p not in occupied:
                        nxt.append(p)
                        out.append(p)
        frontier = nxt
    out.sort(key=lambda p: (p[1], p[0]))
    return out


def _attack_targets(state: GameState, unit: Unit) -> list[Unit]:
    """Living enemies within attack range, ordered by id. Units with zero
    attack damage cannot attack at all."""
    if unit.attack <= 0 or unit.attack_range <= 0:
        return []
    ux, uy, owner, rng_ = unit.x, unit.y, unit.owner, unit.attack_range
    out = [
        t
        for t in state.units.values()
        if t.owner != owner and chebyshev(ux, uy, t.x, t.y) <= rng_
    ]
    out.sort(key=lambda t: t.uid)
    return out


def _heal_targets(state: GameState, unit: Unit) -> list[Unit]:
    if state.rules.heal_amount <= 0 or "heal" not in unit.abilities:
        return []
    ux, uy, owner, rng_ = unit.x, unit.y, unit.owner, unit.ability_range
    out = [
        t
        for t in state.units.values()
        if t.owner == owner and chebyshev(ux, uy, t.x, t.y) <= rng_
    ]
    out.sort(key=lambda t: t.uid)
    return out


def push_destination(rules: Rules, pusher: Unit, target: Unit) -> tuple[int, int]:
    """Tile the target is displaced to: one step along the pusher->target
    line. Diagonal pushes resolve along the dominant axis, ties toward x."""
    dx = target.x - pusher.x
    dy = target.y - pusher.y
    adx, ady = abs(dx), abs(dy)
    if adx >= ady:
        step = ((1 if dx > 0 else -1), 0)
    else:
        step = (0, (1 if dy > 0 else -1))
    return target.x + step[0], target.y + step[1]


def _push_targets(state: GameState, unit: Unit) -> list[Unit]:
    """Pushable units (any owner) whose destination tile is free or a hole."""
    if not state.rules.push_enabled or "push" not in unit.abilities:
        return []
    rules = state.rules
    ux, uy, rng_ = unit.x, unit.y, unit.ability_range
    out = []
    for t in state.units.values():
        if t.uid == unit.uid:
            continue
        if not 1 <= chebyshev(ux, uy, t.x, t.y) <= rng_:
            continue
        dx, dy = push_destination(rules, unit, t)
        if not (0 <= dx < rules.width and 0 <= dy < rules.height):
            continue
        tile = rules.grid[dy][dx]
        if tile == HOLE or (tile == PLAIN and (dx, dy) not in state.pos):
            out.append(t)
    out.sort(key=lambda t: t.uid)
    return out


def legal_actions(state: GameState, unit_id: int) -> list[Action]:
    """All actions the unit may take, deterministically ordered by verb,
    then target position row-major, then target id. Excludes END_TURN."""
    if state.status != Status.ONGOING:
        return []
    unit = state.units.get(unit_id)
    if unit is None:
        raise ValueError(f"unknown unit id {unit_id}")
    if unit.owner != state.current_player:
        raise ValueError(f"unit {unit_id} does not belong to the current player")
    if unit.ap <= 0:
        return []
    actions = [Action(Verb.MOVE, unit_id, p) for p in reachable_tiles(state, unit)]
    actions += [Action(Verb.ATTACK, unit_id, t.uid) for t in _attack_targets(state, unit)]
    actions += [Action(Verb.HEAL, unit_id, t.uid) for t in _heal_targets(state, unit)]
    actions += [Action(Verb.PUSH, unit_id, t.uid) for t in _push_targets(state, unit)]
    return actions


def unit_has_action(state: GameState, unit_id: int) -> bool:
    """Cheap check used by playout loops before running a script."""
    unit = state.units.get(unit_id)
    if unit is None or unit.ap <= 0 or state.status != Status.ONGOING:
        return False
    if unit.move_range > 0:
        pos = state.pos
        rules = state.rules
        for p in rules.neighbors[unit.y * rules.width + unit.x]:
            if p not in pos:
                return True
    if _attack_targets(state, unit) or _heal_targets(state, unit) or _push_targets(state, unit):
        return True
    return False


def player_has_action(state: GameState) -> bool:
    """True if any unit of the current player can still act this turn."""
    cp = state.current_player
    return any(
        u.ap > 0 and unit_has_action(state, u.uid)
        for u in state.units.values()
        if u.owner == cp
    )


def _spent(unit: Unit) -> Unit:
    return Unit(
        unit.uid, unit.owner, unit.kind, unit.x, unit.y, unit.health,
        unit.max_health, unit.attack, unit.move_range, unit.attack_range,
        unit.vision_range, unit.ability_range, unit.abilities, unit.ap - 1,
    )


def _evaluate_status(units: dict[int, Unit], turn: int, rules: Rules) -> int:
    if rules.win_rule == WIN_KING_DEATH:
        alive = [False, False]
        for u in units.values():
            if u.kind in rules.king_kinds:
                alive[u.owner] = True
    else:
        alive = [False, False]
        for u in units.values():
            alive[u.owner] = True
    if not alive[0] and not alive[1]:
        return Status.DRAW
    if not alive[1]:
        return Status.WIN_P0
    if not alive[0]:
        return Status.WIN_P1
    if turn >= rules.turn_limit:
        return Status.DRAW
    return Status.ONGOING


def advance(state: GameState, action: Action, check: bool = True) -> GameState:
    """Forward model: return the successor state for one action.

    With ``check`` (the default) the action is fully validated and an
    :class:`IllegalAction` is raised on any violation, leaving the input
    untouched. Search code that only feeds in actions obtained from
    :func:`legal_actions` or the scripts may pass ``check=False``.
    """
    if state.status != Status.ONGOING:
        raise IllegalAction("game is over; no further actions accepted")
    verb = action.verb
    if verb == Verb.END_TURN:
        return end_turn(state)

    unit = state.units.get(action.actor)
    if unit is None:
        raise IllegalAction(f"actor {action.actor} is not a living unit")
    if unit.owner != state.current_player:
        raise IllegalAction(f"unit {unit.uid} does not belong to player {state.current_player}")
    if unit.ap <= 0:
        raise IllegalAction(f"unit {unit.uid} has no action points left")

    rules = state.rules
    units = state.units
    if verb == Verb.MOVE:
        tx, ty = action.target
        if check:
            if not rules.passable(tx, ty) or (tx, ty) in state.pos:
                raise IllegalAction(f"move target {(tx, ty)} is blocked")
            if chebyshev(unit.x, unit.y, tx, ty) > unit.move_range or (
                unit.move_range > 1 and (tx, ty) not in reachable_tiles(state, unit)
            ):
                raise IllegalAction(f"move target {(tx, ty)} is not reachable")
        new_units = dict(units)
        new_units[unit.uid] = Unit(
            unit.uid, unit.owner, unit.kind, tx, ty, unit.health, unit.max_health,
            unit.attack, unit.move_range, unit.attack_range, unit.vision_range,
            unit.ability_range, unit.abilities, unit.ap - 1,
        )
        new_pos = dict(state.pos)
        del new_pos[(unit.x, unit.y)]
        new_pos[(tx, ty)] = unit.uid
        return GameState(
            rules, new_units, new_pos, state.current_player, state.turn,
            state.status, state.seed_state,
        )

    target = units.get(action.target)
    if target is None:
        raise IllegalAction(f"target {action.target} is not a living unit")

    if verb == Verb.ATTACK:
        if check:
            if unit.attack <= 0:
                raise IllegalAction(f"unit {unit.uid} cannot attack")
            if target.owner == unit.owner:
                raise IllegalAction("cannot attack a friendly unit")
            if chebyshev(unit.x, unit.y, target.x, target.y) > unit.attack_range:
                raise IllegalAction(f"target {target.uid} is out of attack range")
        new_units = dict(units)
        new_units[unit.uid] = _spent(unit)
        hp = target.health - unit.attack
        new_pos = state.pos
        status = state.status
        if hp <= 0:
            del new_units[target.uid]
            new_pos = dict(state.pos)
            del new_pos[(target.x, target.y)]
            status = _evaluate_status(new_units, state.turn, rules)
        else:
            new_units[target.uid] = Unit(
                target.uid, target.owner, target.kind, target.x, target.y, hp,
                target.max_health, target.attack, target.move_range,
                target.attack_range, target.vision_range, target.ability_range,
                target.abilities, target.ap,
            )
        return GameState(
            rules, new_units, new_pos, state.current_player, state.turn,
            status, state.seed_state,
        )

    if verb == Verb.HEAL:
        if check:
            if rules.heal_amount <= 0 or "heal" not in unit.abilities:
                raise IllegalAction(f"unit {unit.uid} cannot heal")
            if target.owner != unit.owner:
                raise IllegalAction("can only heal friendly units")
            if chebyshev(unit.x, unit.y, target.x, target.y) > unit.ability_range:
                raise IllegalAction(f"target {target.uid} is out of heal range")
        hp = min(target.max_health, target.health + rules.heal_amount)
        new_units = dict(units)
        new_units[target.uid] = Unit(
            target.uid, target.owner, target.kind, target.x, target.y, hp,
            target.max_health, target.attack, target.move_range,
            target.attack_range, target.vision_range, target.ability_range,
            target.abilities, target.ap,
        )
        # Self-heal must not clobber the AP decrement.
        u2 = new_units[unit.uid]
        new_units[unit.uid] = _spent(u2)
        return GameState(
            rules, new_units, state.pos, state.current_player, state.turn,
            state.status, state.seed_state,
        )

    if verb == Verb.PUSH:
        dx, dy = push_destination(rules, unit, target)
        if check:
            if not rules.push_enabled or "push" not in unit.abilities:
                raise IllegalAction(f"unit {unit.uid} cannot push")
            if not 1 <= chebyshev(unit.x, unit.y, target.x, target.y) <= unit.ability_range:
                raise IllegalAction(f"target {target.uid} is out of push range")
            if not (0 <= dx < rules.width and 0 <= dy < rules.height):
                raise IllegalAction("push destination is outside the map")
            tile = rules.grid[dy][dx]
            if tile == IMPASSABLE or (tile == PLAIN and (dx, dy) in state.pos):
                raise IllegalAction(f"push destination {(dx, dy)} is blocked")
        new_units = dict(units)
        new_units[unit.uid] = _spent(new_units[unit.uid])
        new_pos = dict(state.pos)
        status = state.status
        if rules.grid[dy][dx] == HOLE:
            del new_units[target.uid]
            del new_pos[(target.x, target.y)]
            status = _evaluate_status(new_units, state.turn, rules)
        else:
            new_units[target.uid] = Unit(
                target.uid, target.owner, target.kind, dx, dy, target.health,
                target.max_health, target.attack, target.move_range,
                target.attack_range, target.vision_range, target.ability_range,
                target.abilities, target.ap,
            )
            del new_pos[(target.x, target.y)]
            new_pos[(dx, dy)] = target.uid
        return GameState(
            rules, new_units, new_pos, state.current_player, state.turn,
            status, state.seed_state,
        )

    raise IllegalAction(f"unknown verb {verb}")


def end_turn(state: GameState) -> GameState:
    """Pass control to the other player; close the round when player 1 ends.

    The incoming player's units get their per-turn action points back. When
    both players have ended, the turn counter increments, end-of-round
    effects fire (decay damage in modes that declare it), and the terminal
    check runs after the effects.
    """
    if state.status != Status.ONGOING:
        raise IllegalAction("game is over; no further actions accepted")
    rules = state.rules
    nxt = 1 - state.current_player
    ap = rules.ap_per_turn
    new_units = {}
    for uid, u in state.units.items():
        if u.owner == nxt and u.ap != ap:
            new_units[uid] = Unit(
                u.uid, u.owner, u.kind, u.x, u.y, u.health, u.max_health,
                u.attack, u.move_range, u.attack_range, u.vision_range,
                u.ability_range, u.abilities, ap,
            )
        else:
            new_units[uid] = u
    turn = state.turn
    status = state.status
    pos = state.pos
    if nxt == 0:
        turn += 1
        if rules.decay > 0:
            decayed = {}
            pos = dict(state.pos)
            for uid, u in new_units.items():
                hp = u.health - rules.decay
                if hp <= 0:
                    del pos[(u.x, u.y)]
                    continue
                decayed[uid] = Unit(
                    u.uid, u.owner, u.kind, u.x, u.y, hp, u.max_health,
                    u.attack, u.move_range, u.attack_range, u.vision_range,
                    u.ability_range, u.abilities, u.ap,
                )
            new_units = decayed
        status = _evaluate_status(new_units, turn, rules)
    return GameState(rules, new_units, pos, nxt, turn, status, state.seed_state)


def outcome(state: GameState) -> Status:
    """Terminal status of the state, recomputed from scratch."""
    return Status(_evaluate_status(state.units, state.turn, state.rules))


def observe(state: GameState, player: int) -> GameState:
    """The state as seen by ``player``: with fog of war enabled, enemy units
    outside the union of the player's units' vision ranges are removed.
    Without fog this is the identity."""
    if not state.rules.fog_enabled:
        return state
    own = [u for u in state.units.values() if u.owner == player]
    visible = {}
    pos = {}
    for u in state.units.values():
        if u.owner != player and not any(
            chebyshev(v.x, v.y, u.x, u.y) <= v.vision_range for v in own
        ):
            continue
        visible[u.uid] = u
        pos[(u.x, u.y)] = u.uid
    return GameState(
        state.rules, visible, pos, state.current_player, state.turn,
        state.status, state.seed_state,
    )


def sample_action(state: GameState, unit: Unit, rng: random.Random) -> Action | None:
    """One action drawn uniformly from the unit's legal actions, or None.

    Equivalent to choosing from :func:`legal_actions` but only materializes
    the drawn action; playout loops live on this.
    """
    moves = reachable_tiles(state, unit)
    attacks = _attack_targets(state, unit)
    heals = _heal_targets(state, unit)
    pushes = _push_targets(state, unit)
    total = len(moves) + len(attacks) + len(heals) + len(pushes)
    if total == 0:
        return None
    k = rng.randrange(total)
    if k < len(moves):
        return Action(Verb.MOVE, unit.uid, moves[k])
    k -= len(moves)
    if k < len(attacks):
        return Action(Verb.ATTACK, unit.uid, attacks[k].uid)
    k -= len(attacks)
    if k < len(heals):
        return Action(Verb.HEAL, unit.uid, heals[k].uid)
    return Action(Verb.PUSH, unit.uid, pushes[k - len(heals)].uid)


def random_unit_action(state: GameState, unit: Unit, rng: random.Random) -> Action | None:
    """A random legal action, drawn uniformly over the available action
    kinds first and uniformly within the kind.

    This is the playout policy of the stress suite and benchmark: kind-level
    balancing keeps attacks, heals, and pushes well represented even when
    move targets vastly outnumber them, which both exercises the interesting
    transitions and keeps random games reasonably short.
    """
    buckets = []
    moves = reachable_tiles(state, unit)
    if moves:
        buckets.append((Verb.MOVE, moves))
    attacks = _attack_targets(state, unit)
    if attacks:
        buckets.append((Verb.ATTACK, attacks))
    heals = _heal_targets(state, unit)
    if heals:
        buckets.append((Verb.HEAL, heals))
    pushes = _push_targets(state, unit)
    if pushes:
        buckets.append((Verb.PUSH, pushes))
    if not buckets:
        return None
    verb, options = buckets[rng.randrange(len(buckets))]
    pick = options[rng.randrange(len(options))]
    if verb == Verb.MOVE:
        return Action(Verb.MOVE, unit.uid, pick)
    return Action(verb, unit.uid, pick.uid)


def random_playout(state: GameState, rng: random.Random, fm=None) -> GameState:
    """Play the game to its end with random unit actions (see
    :func:`random_unit_action` for the distribution). When ``fm`` (anything
    with ``advance``/``end_turn``) is given, transitions go through it so
    its call counter advances."""
    adv = fm.advance if fm is not None else advance
    end = fm.end_turn if fm is not None else end_turn
    while state.status == Status.ONGOING:
        cp = state.current_player
        uids = [uid for uid, u in state.units.items() if u.owner == cp]
        i = 0
        while i < len(uids) and state.status == Status.ONGOING:
            u = state.units.get(uids[i])
            if u is None or u.ap <= 0:
                i += 1
                continue
            action = random_unit_action(state, u, rng)
            if action is None:
                i += 1
                continue
            state = adv(state, action, check=False)
        if state.status == Status.ONGOING:
            state = end(state)
    return state
