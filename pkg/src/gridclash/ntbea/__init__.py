"""Bandit-based tuning of agent parameters and portfolio composition."""

from .model import LandscapeModel
from .space import PARAM_DOMAINS, Dimension, SearchSpace
from .tuner import (
    DRAW_POINTS,
    EXPLORATION_C,
    EXPLORATION_EPS,
    FITNESS_GAMES,
    LOSS_POINTS,
    NEIGHBORHOOD,
    TuneResult,
    WIN_POINTS,
    evaluate_point,
    ntbea_run,
    tune,
)

__all__ = [
    "LandscapeModel",
    "PARAM_DOMAINS",
    "Dimension",
    "SearchSpace",
    "TuneResult",
    "FITNESS_GAMES",
    "WIN_POINTS",
    "DRAW_POINTS",
    "LOSS_POINTS",
    "EXPLORATION_C",
    "EXPLORATION_EPS",
    "NEIGHBORHOOD",
    "evaluate_point",
    "ntbea_run",
    "tune",
]
