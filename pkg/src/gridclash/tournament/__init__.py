"""Experiment harness: matches, round-robin leagues, usage profiling,
forward-model benchmarking, and result export."""

from .bench import BenchResult, bench_fm
from .export import (
    SCHEMA_VERSION,
    export_league,
    export_profiles,
    load_league,
    load_metadata,
    load_profiles,
)
from .league import LeagueResult, PairStats, league_jobs, run_league
from .match import MatchRecord, play_match
from .profile import UsageProfile, usage_profile

__all__ = [
    "BenchResult",
    "bench_fm",
    "SCHEMA_VERSION",
    "export_league",
    "export_profiles",
    "load_league",
    "load_metadata",
    "load_profiles",
    "LeagueResult",
    "PairStats",
    "league_jobs",
    "run_league",
    "MatchRecord",
    "play_match",
    "UsageProfile",
    "usage_profile",
]
