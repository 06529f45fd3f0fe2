"""gridclash: a turn-based multi-unit strategy arena with portfolio search
agents, a bandit-based parameter tuner, and a tournament service."""

__version__ = "0.1.0"
