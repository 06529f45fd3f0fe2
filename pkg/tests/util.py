"""Hand-built states for unit tests."""

from __future__ import annotations

from gridclash.engine import GameState, Rules, Status, Unit


def make_unit(
    uid,
    owner,
    x,
    y,
    *,
    kind="grunt",
    health=10,
    max_health=None,
    attack=5,
    move_range=1,
    attack_range=1,
    vision_range=4,
    ability_range=1,
    abilities=(),
    ap=1,
):
    return Unit(
        uid, owner, kind, x, y, health,
        max_health if max_health is not None else health,
        attack, move_range, attack_range, vision_range, ability_range,
        tuple(abilities), ap,
    )


def make_state(units, *, width=8, height=8, grid=None, current=0, turn=0, **rule_kwargs):
    if grid is None:
        grid = tuple("." * width for _ in range(height))
    else:
        grid = tuple(grid)
    rules = Rules("test", grid, **rule_kwargs)
    by_id = {u.uid: u for u in units}
    pos = {(u.x, u.y): u.uid for u in units}
    assert len(pos) == len(by_id), "test state has overlapping units"
    return GameState(rules, by_id, pos, current, turn, Status.ONGOING, 0)
