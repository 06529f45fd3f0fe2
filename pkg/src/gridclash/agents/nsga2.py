"""Non-dominated sorting and crowding distance for the multi-objective
agent. Objectives are fixed project-wide: maximize the combat score,
minimize the mean distance."""

from __future__ import annotations

from ..heuristics import ObjectiveVector

__all__ = ["dominates", "fast_non_dominated_sort", "crowding_distances"]


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """a dominates b: at least as good in both objectives, better in one."""
    if a.combat < b.combat or a.distance > b.distance:
        return False
    return a.combat > b.combat or a.distance < b.distance


def fast_non_dominated_sort(points: list[ObjectiveVector]) -> list[list[int]]:
    """Indices grouped into fronts; front 0 is the non-dominated set."""
    n = len(points)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    counts = [0] * n
    fronts: list[list[int]] = [[]]
    for i in range(n):
        for j in range(i + 1, n):
            if dominates(points[i], points[j]):
                dominated_by[i].append(j)
                counts[j] += 1
            elif dominates(points[j], points[i]):
                dominated_by[j].append(i)
                counts[i] += 1
    for i in range(n):
        if counts[i] == 0:
            fronts[0].append(i)
    k = 0
    while fronts[k]:
        nxt = []
        for i in fronts[k]:
            for j in dominated_by[i]:
                counts[j] -= 1
                if counts[j] == 0:
                    nxt.append(j)
        fronts.append(nxt)
        k += 1
    fronts.pop()
    return fronts


def crowding_distances(points: list[ObjectiveVector], front: list[int]) -> dict[int, float]:
    """NSGA-2 crowding distance within one front (boundary points infinite)."""
    dist = {i: 0.0 for i in front}
    if len(front) <= 2:
        return {i: float("inf") for i in front}
    for axis in (0, 1):
        ordered = sorted(front, key=lambda i: points[i][axis])
        lo = points[ordered[0]][axis]
        hi = points[ordered[-1]][axis]
        dist[ordered[0]] = dist[ordered[-1]] = float("inf")
        if hi == lo:
            continue
        for a, b, c in zip(ordered, ordered[1:], ordered[2:]):
            dist[b] += (points[c][axis] - points[a][axis]) / (hi - lo)
    return dist
