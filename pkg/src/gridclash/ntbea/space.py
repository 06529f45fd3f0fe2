"""Search spaces for agent tuning.

A space is an ordered list of named, finite dimensions: the algorithm
parameters that apply to the agent kind, plus one inclusion flag per
portfolio script. Points are index tuples; every point must keep at least
one script enabled.
"""

from __future__ import annotations

import dataclasses
import random

from ..agents import AgentParams
from ..scripts import SCRIPT_CODES, Portfolio

__all__ = ["Dimension", "SearchSpace", "PARAM_DOMAINS"]

PARAM_DOMAINS: dict[str, tuple] = {
    "population_size": (1, 10, 100),
    "individual_length": tuple(range(1, 11)),
    "mutation_rate": (0.1, 0.5, 0.9),
    "tournament_size": (3, 5, 10),
    "num_changes": (1, 3, 5, 10),
    "response_iterations": (1, 2, 3, 4, 5),
    "elitism": (False, True),
    "continue_search": (False, True),
}

# Which tunable parameters each agent kind actually reads.
_AGENT_PARAMS: dict[str, tuple[str, ...]] = {
    "pgs": ("individual_length", "response_iterations"),
    "poe": (
        "population_size", "individual_length", "mutation_rate",
        "tournament_size", "elitism", "continue_search",
    ),
    "prhea": (
        "population_size", "individual_length", "mutation_rate",
        "tournament_size", "elitism", "continue_search",
    ),
    "mo-prhea": (
        "population_size", "individual_length", "mutation_rate",
        "tournament_size", "elitism", "continue_search",
    ),
    "s-prhea": (
        "population_size", "individual_length", "mutation_rate",
        "tournament_size", "num_changes", "elitism", "continue_search",
    ),
}


@dataclasses.dataclass(frozen=True)
class Dimension:
    name: str
    values: tuple

    def __len__(self) -> int:
        return len(self.values)


class SearchSpace:
    def __init__(self, dimensions: list[Dimension], portfolio_dims: tuple[int, ...]):
        self.dimensions = list(dimensions)
        self.portfolio_dims = portfolio_dims  # indices of the script flags

    @classmethod
    def for_agent(cls, kind: str) -> "SearchSpace":
        if kind not in _AGENT_PARAMS:
            raise ValueError(f"no search space for agent kind {kind!r}")
        dims = [Dimension(p, PARAM_DOMAINS[p]) for p in _AGENT_PARAMS[kind]]
        first_flag = len(dims)
        for script in SCRIPT_CODES:
            dims.append(Dimension(f"use_{script.name.lower()}", (False, True)))
        return cls(dims, tuple(range(first_flag, first_flag + len(SCRIPT_CODES))))

    def __len__(self) -> int:
        return len(self.dimensions)

    def size(self) -> int:
        n = 1
        for d in self.dimensions:
            n *= len(d)
        return n

    def values(self, point: tuple[int, ...]) -> tuple:
        return tuple(d.values[i] for d, i in zip(self.dimensions, point))

    def is_valid(self, point: tuple[int, ...]) -> bool:
        if not self.portfolio_dims:
            return True
        return any(point[i] for i in self.portfolio_dims)

    def _fix_portfolio(self, point: list[int], rng: random.Random) -> None:
        if self.portfolio_dims and not any(point[i] for i in self.portfolio_dims):
            point[rng.choice(self.portfolio_dims)] = 1

    def random_point(self, rng: random.Random) -> tuple[int, ...]:
        point = [rng.randrange(len(d)) for d in self.dimensions]
        self._fix_portfolio(point, rng)
        return tuple(point)

    def mutate(self, point: tuple[int, ...], rng: random.Random) -> tuple[int, ...]:
        """Neighborhood move: each dimension resampled with probability 1/N,
        plus one forced change; the portfolio mask is kept non-empty."""
        n = len(self.dimensions)
        out = list(point)
        for i, d in enumerate(self.dimensions):
            if rng.random() < 1.0 / n:
                out[i] = rng.randrange(len(d))
        forced = rng.randrange(n)
        width = len(self.dimensions[forced])
        if width > 1:
            shift = 1 + rng.randrange(width - 1)
            out[forced] = (out[forced] + shift) % width
        self._fix_portfolio(out, rng)
        return tuple(out)

    def to_params(self, point: tuple[int, ...], base: AgentParams | None = None) -> AgentParams:
        base = base or AgentParams()
        fields = {}
        mask = 0
        for d, i in zip(self.dimensions, point):
            v = d.values[i]
            if d.name.startswith("use_"):
                continue
            fields[d.name] = v
        for flag_index, script in zip(self.portfolio_dims, SCRIPT_CODES):
            if point[flag_index]:
                mask |= 1 << script
        fields["portfolio"] = Portfolio.from_mask(mask)
        return dataclasses.replace(base, **fields)

    def describe(self, point: tuple[int, ...]) -> dict:
        return {d.name: d.values[i] for d, i in zip(self.dimensions, point)}
