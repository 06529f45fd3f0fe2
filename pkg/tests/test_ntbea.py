import random
import time

import pytest

from gridclash.ntbea import (
    Dimension,
    LandscapeModel,
    SearchSpace,
    ntbea_run,
)
from gridclash.ntbea.tuner import DRAW_POINTS, FITNESS_GAMES, WIN_POINTS
from gridclash.scripts import ScriptId


# --- search spaces ---------------------------------------------------------------


def test_spaces_match_published_domains():
    s = SearchSpace.for_agent("prhea")
    by_name = {d.name: d.values for d in s.dimensions}
    assert by_name["population_size"] == (1, 10, 100)
    assert by_name["individual_length"] == tuple(range(1, 11))
    assert by_name["mutation_rate"] == (0.1, 0.5, 0.9)
    assert by_name["tournament_size"] == (3, 5, 10)
    assert by_name["elitism"] == (False, True)
    assert by_name["continue_search"] == (False, True)
    assert "num_changes" not in by_name
    assert "response_iterations" not in by_name
    assert sum(1 for d in s.dimensions if d.name.startswith("use_")) == 6


def test_sprhea_space_has_num_changes_domain():
    s = SearchSpace.for_agent("s-prhea")
    by_name = {d.name: d.values for d in s.dimensions}
    assert by_name["num_changes"] == (1, 3, 5, 10)


def test_pgs_space_is_length_and_response_only():
    s = SearchSpace.for_agent("pgs")
    names = [d.name for d in s.dimensions]
    assert names[:2] == ["individual_length", "response_iterations"]
    assert all(n.startswith("use_") for n in names[2:])
    by_name = {d.name: d.values for d in s.dimensions}
    assert by_name["response_iterations"] == (1, 2, 3, 4, 5)


def test_points_never_have_empty_portfolio():
    s = SearchSpace.for_agent("poe")
    rng = random.Random(0)
    point = s.random_point(rng)
    for _ in range(500):
        assert s.is_valid(point)
        point = s.mutate(point, rng)
    params = s.to_params(point)
    assert len(params.portfolio) >= 1


def test_mutate_always_changes_something():
    s = SearchSpace.for_agent("prhea")
    rng = random.Random(7)
    p = s.random_point(rng)
    changed = sum(s.mutate(p, rng) != p for _ in range(100))
    assert changed >= 95  # the forced change can only be undone by a rare double flip


def test_to_params_maps_values_and_portfolio():
    s = SearchSpace.for_agent("prhea")
    point = [0] * len(s.dimensions)
    by_name = {d.name: i for i, d in enumerate(s.dimensions)}
    point[by_name["population_size"]] = 2  # -> 100
    point[by_name["use_attack_weakest"]] = 1
    point[by_name["use_random"]] = 1
    params = s.to_params(tuple(point))
    assert params.population_size == 100
    assert list(params.portfolio) == [ScriptId.ATTACK_WEAKEST, ScriptId.RANDOM]


# --- landscape model ---------------------------------------------------------------


def test_model_tracks_counts_and_means():
    m = LandscapeModel(3)
    m.update((0, 1, 2), 10.0)
    m.update((0, 1, 2), 20.0)
    m.update((0, 0, 2), 30.0)
    # 1-tuple on dim 0 saw all three samples
    assert m.tables[0][(0,)] == [3, 20.0]
    assert m.total == 3
    # counts on any 1-tuple sum to the number of evaluations
    for dim in range(3):
        assert sum(cell[0] for key, cell in m.tables[dim].items()) == 3


def test_model_estimate_without_exploration_is_mean():
    m = LandscapeModel(2)  # tuples: (0,), (1,), (0,1)
    m.update((1, 1), 42.0)
    assert m.estimate((1, 1), c=0.0) == pytest.approx(42.0)


def test_unvisited_point_wins_with_large_exploration():
    m = LandscapeModel(2)
    m.update((0, 0), 5.0)
    c = 1000.0
    assert m.estimate((1, 1), c) > m.estimate((0, 0), c)


def test_estimate_matches_hand_calculation():
    import math

    m = LandscapeModel(2)
    m.update((0, 0), 4.0)
    m.update((0, 1), 8.0)
    c, eps = 1.5, 0.5
    log_total = math.log(3)
    # tuples for point (0,0): dim0 (0,) -> count 2, mean 6; dim1 (0,) ->
    # count 1, mean 4; pair (0,0) -> count 1, mean 4. Mean part averages the
    # visited tuples' means, the bonus part averages over all tuples.
    mean_part = (6.0 + 4.0 + 4.0) / 3
    bonus_part = (
        math.sqrt(log_total / 2.5)
        + math.sqrt(log_total / 1.5)
        + math.sqrt(log_total / 1.5)
    ) / 3
    assert m.estimate((0, 0), c, eps) == pytest.approx(mean_part + c * bonus_part)
    # point (1, 0): only dim1's (0,) was ever visited (count 1, mean 4);
    # dim0's (1,) and the pair (1, 0) contribute the maximal bonus
    mean_part = 4.0
    bonus_part = (
        math.sqrt(log_total / eps)
        + math.sqrt(log_total / 1.5)
        + math.sqrt(log_total / eps)
    ) / 3
    assert m.estimate((1, 0), c, eps) == pytest.approx(mean_part + c * bonus_part)


# --- the tuning loop ------------------------------------------------------------------


def _toy_space(cardinalities):
    dims = [Dimension(f"d{i}", tuple(range(c))) for i, c in enumerate(cardinalities)]
    return SearchSpace(dims, portfolio_dims=())


def test_budget_one_returns_the_single_evaluated_point():
    space = _toy_space([4, 4])
    seen = []
    best, model, history = ntbea_run(
        space, lambda p, i: seen.append(p) or 1.0, budget=1, seed=3
    )
    assert len(history) == 1
    assert best == seen[0]
    assert model.total == 1


def test_budget_exactness():
    space = _toy_space([3, 3, 3])
    calls = []
    ntbea_run(space, lambda p, i: calls.append(i) or 0.0, budget=23, seed=1)
    assert calls == list(range(23))


def test_determinism_of_run():
    space = _toy_space([5, 5, 5])

    def fitness(p, i):
        return sum(p) * 1.0

    a = ntbea_run(space, fitness, budget=40, seed=9)
    b = ntbea_run(space, fitness, budget=40, seed=9)
    assert a[0] == b[0]
    assert a[2] == b[2]


def test_separable_landscape_found_in_most_seeded_runs():
    # Independent optimum by construction: per-dimension bonus table; the
    # optimum is the argmax in each dimension. NTBEA with a 100-evaluation
    # budget should find it in at least 80/100 seeded runs, quickly.
    cardinalities = [3, 10, 3, 3, 4]
    bonuses = [
        [0.3, 1.0, 0.1],
        [0.0, 0.2, 0.4, 0.1, 0.9, 0.3, 0.2, 0.1, 0.0, 0.5],
        [0.6, 0.2, 0.9],
        [1.0, 0.3, 0.2],
        [0.1, 0.8, 0.2, 0.4],
    ]
    optimum = tuple(row.index(max(row)) for row in bonuses)
    space = _toy_space(cardinalities)

    def fitness(point, _i):
        return sum(bonuses[d][v] for d, v in enumerate(point))

    t0 = time.perf_counter()
    hits = 0
    for seed in range(100):
        best, _, _ = ntbea_run(space, fitness, budget=100, seed=seed)
        hits += best == optimum
    elapsed = time.perf_counter() - t0
    assert hits >= 80, f"only {hits}/100 runs found the optimum"
    assert elapsed < 10.0, f"took {elapsed:.1f}s"


# --- fitness protocol constants --------------------------------------------------------


def test_protocol_point_values():
    assert FITNESS_GAMES == 20
    assert WIN_POINTS == 3
    assert DRAW_POINTS == 1
    assert 20 * WIN_POINTS == 60
    assert 20 * DRAW_POINTS == 20
