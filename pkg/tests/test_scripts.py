import random

import pytest

from gridclash.engine import Action, GameState, Status, Verb, legal_actions
from gridclash.modes import builtin_mode_path, initial_state, load_mode
from gridclash.scripts import Portfolio, ScriptId, script_action

from .util import make_state, make_unit


def test_script_codes_are_stable():
    assert [int(s) for s in ScriptId] == [0, 1, 2, 3, 4, 5]
    assert ScriptId.ATTACK_CLOSEST == 0 and ScriptId.RANDOM == 5


def test_portfolio_is_canonical_and_nonempty():
    p = Portfolio([ScriptId.RANDOM, ScriptId.ATTACK_CLOSEST, ScriptId.RANDOM])
    assert list(p) == [ScriptId.ATTACK_CLOSEST, ScriptId.RANDOM]
    assert Portfolio.from_mask(p.mask()) == p
    with pytest.raises(ValueError):
        Portfolio([])


def test_attack_closest_attacks_adjacent_enemy():
    s = make_state([make_unit(0, 0, 1, 1), make_unit(1, 1, 2, 1)])
    a = script_action(ScriptId.ATTACK_CLOSEST, s, 0, random.Random(0))
    assert a == Action(Verb.ATTACK, 0, 1)


def test_attack_closest_walks_when_out_of_range():
    s = make_state([make_unit(0, 0, 0, 0), make_unit(1, 1, 5, 0)])
    a = script_action(ScriptId.ATTACK_CLOSEST, s, 0, random.Random(0))
    assert a.verb == Verb.MOVE
    assert a.target == (1, 0)  # strictly closer to the enemy


def test_attack_weakest_prefers_low_health():
    units = [
        make_unit(0, 0, 2, 2, attack_range=3),
        make_unit(1, 1, 4, 2, health=7),
        make_unit(2, 1, 2, 4, health=3),
    ]
    s = make_state(units)
    a = script_action(ScriptId.ATTACK_WEAKEST, s, 0, random.Random(0))
    assert a == Action(Verb.ATTACK, 0, 2)


def test_run_away_maximizes_distance_sum():
    units = [
        make_unit(0, 0, 2, 2),
        make_unit(1, 1, 0, 2),
        make_unit(2, 1, 2, 0),
    ]
    s = make_state(units, width=6, height=6)
    a = script_action(ScriptId.RUN_AWAY, s, 0, random.Random(0))
    assert a.verb == Verb.MOVE
    assert a.target == (3, 3)  # away from both enemies


def test_run_away_without_visible_enemy_is_random_but_legal():
    s = make_state([make_unit(0, 0, 3, 3)], fog_enabled=False)
    legal = set(legal_actions(s, 0))
    seen = set()
    for k in range(20):
        seen.add(script_action(ScriptId.RUN_AWAY, s, 0, random.Random(k)))
    assert seen <= legal
    assert len(seen) > 1  # genuinely random fallback


def test_run_to_friends_minimizes_distance_sum():
    units = [
        make_unit(0, 0, 5, 5),
        make_unit(1, 0, 1, 1),
        make_unit(2, 1, 7, 7, attack_range=0),
    ]
    s = make_state(units, width=9, height=9)
    a = script_action(ScriptId.RUN_TO_FRIENDS, s, 0, random.Random(0))
    assert a == Action(Verb.MOVE, 0, (4, 4))


def test_use_ability_heals_most_damaged_ally():
    units = [
        make_unit(0, 0, 2, 2, abilities=("heal",)),
        make_unit(1, 0, 1, 2, health=4, max_health=10),
        make_unit(2, 0, 3, 2, health=8, max_health=10),
    ]
    s = make_state(units, heal_amount=5)
    a = script_action(ScriptId.USE_SPECIAL_ABILITY, s, 0, random.Random(0))
    assert a == Action(Verb.HEAL, 0, 1)


def test_use_ability_prefers_lethal_push():
    grid = ["O....", ".....", ".....", ".....", "....."]
    units = [
        make_unit(0, 0, 2, 0, abilities=("push",)),
        make_unit(1, 1, 1, 0),  # pushed toward (0,0): the hole
        make_unit(2, 1, 2, 1),  # pushable onto open ground
    ]
    s = make_state(units, grid=grid, width=5, height=5, push_enabled=True)
    a = script_action(ScriptId.USE_SPECIAL_ABILITY, s, 0, random.Random(0))
    assert a == Action(Verb.PUSH, 0, 1)


def test_use_ability_falls_back_to_random_without_ability():
    s = make_state([make_unit(0, 0, 1, 1), make_unit(1, 1, 4, 4)])
    legal = set(legal_actions(s, 0))
    a = script_action(ScriptId.USE_SPECIAL_ABILITY, s, 0, random.Random(1))
    assert a in legal


def test_random_script_covers_action_space():
    s = make_state([make_unit(0, 0, 1, 1), make_unit(1, 1, 2, 1)])
    legal = set(legal_actions(s, 0))
    seen = {script_action(ScriptId.RANDOM, s, 0, random.Random(k)) for k in range(200)}
    assert seen == legal


def test_scripts_reject_unit_without_action_points():
    s = make_state([make_unit(0, 0, 1, 1, ap=0)])
    with pytest.raises(ValueError):
        script_action(ScriptId.RANDOM, s, 0, random.Random(0))


def test_scripts_never_return_end_turn_and_stay_legal():
    # Legality property over random reachable states in every mode.
    for mode in ("kings", "pushers", "healers"):
        cfg = load_mode(builtin_mode_path(mode))
        rng = random.Random(99)
        for seed in range(10):
            state = initial_state(cfg, seed)
            steps = 0
            while state.status == Status.ONGOING and steps < 80:
                cp = state.current_player
                movers = [
                    u.uid
                    for u in state.units.values()
                    if u.owner == cp and u.ap > 0 and legal_actions(state, u.uid)
                ]
                if not movers:
                    from gridclash.engine import end_turn

                    state = end_turn(state)
                    continue
                uid = movers[rng.randrange(len(movers))]
                script = ScriptId(rng.randrange(6))
                a = script_action(script, state, uid, rng)
                assert a.verb != Verb.END_TURN
                assert a in legal_actions(state, uid)
                from gridclash.engine import advance

                state = advance(state, a)
                steps += 1


def test_non_fallback_branches_ignore_rng():
    s = make_state([make_unit(0, 0, 1, 1), make_unit(1, 1, 2, 1)])
    for script in (ScriptId.ATTACK_CLOSEST, ScriptId.ATTACK_WEAKEST):
        actions = {script_action(script, s, 0, random.Random(k)) for k in range(10)}
        assert len(actions) == 1


def test_choice_independent_of_unit_insertion_order():
    units = [
        make_unit(0, 0, 2, 2, attack_range=4),
        make_unit(1, 1, 5, 2, health=6),
        make_unit(2, 1, 2, 5, health=6),
    ]
    fwd = make_state(units)
    rev_units = {u.uid: u for u in reversed(units)}
    rev = GameState(
        fwd.rules, rev_units, dict(fwd.pos), fwd.current_player, fwd.turn,
        fwd.status, fwd.seed_state,
    )
    for script in (ScriptId.ATTACK_CLOSEST, ScriptId.ATTACK_WEAKEST, ScriptId.RUN_AWAY):
        a1 = script_action(script, fwd, 0, random.Random(0))
        a2 = script_action(script, rev, 0, random.Random(0))
        assert a1 == a2
