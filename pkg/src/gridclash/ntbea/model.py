"""N-tuple landscape model: visit counts and running means over value
combinations of dimension subsets (all 1-tuples, all 2-tuples, and the full
tuple), combined with a UCB-style exploration bonus."""

from __future__ import annotations

import math
from itertools import combinations

__all__ = ["LandscapeModel"]


class LandscapeModel:
    def __init__(self, n_dims: int, tuples: list[tuple[int, ...]] | None = None):
        if tuples is None:
            tuples = [(i,) for i in range(n_dims)]
            tuples += list(combinations(range(n_dims), 2))
            if n_dims > 2:
                tuples.append(tuple(range(n_dims)))
        self.tuples = tuples
        self.tables: list[dict[tuple, list]] = [{} for _ in tuples]
        self.total = 0

    def update(self, point: tuple[int, ...], fitness: float) -> None:
        self.total += 1
        for dims, table in zip(self.tuples, self.tables):
            key = tuple(point[i] for i in dims)
            cell = table.get(key)
            if cell is None:
                table[key] = [1, fitness]
            else:
                cell[0] += 1
                cell[1] += (fitness - cell[1]) / cell[0]

    def estimate(self, point: tuple[int, ...], c: float, eps: float = 0.5) -> float:
        """UCB-style value: the mean of the visited tuples' means plus the
        exploration bonus averaged over all modeled tuples, where a tuple
        never visited contributes the maximal bonus (zero visits)."""
        log_total = math.log(self.total + 1)
        mean_acc = 0.0
        visited = 0
        bonus_acc = 0.0
        for dims, table in zip(self.tuples, self.tables):
            key = tuple(point[i] for i in dims)
            cell = table.get(key)
            if cell is None:
                bonus_acc += math.sqrt(log_total / eps)
            else:
                mean_acc += cell[1]
                visited += 1
                bonus_acc += math.sqrt(log_total / (cell[0] + eps))
        mean = mean_acc / visited if visited else 0.0
        return mean + c * bonus_acc / len(self.tuples)

    def visit_count(self, point: tuple[int, ...]) -> int:
        """Visits of the full point (via the widest modeled tuple)."""
        widest = max(range(len(self.tuples)), key=lambda i: len(self.tuples[i]))
        key = tuple(point[i] for i in self.tuples[widest])
        cell = self.tables[widest].get(key)
        return cell[0] if cell else 0
