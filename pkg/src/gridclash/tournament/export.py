"""Result files: CSV for anything tabular, JSON for the full payloads, one
metadata file per output directory.

Schema (version 1):

- ``metadata.json``: schema_version, result kind, mode, agent list, the
  echoed run flags, and ``created`` (the only timestamp anywhere).
- ``match_records.csv``: one row per match; columns fixed as in
  ``MATCH_COLUMNS``.
- ``league_matrix.csv``: row agent, win-rate vs each column agent (empty
  diagonal), then total wins/draws/losses.
- ``usage_profiles.csv``: per (agent, mode): games, action count, six script
  counts, six relative frequencies.
- ``results.json``: everything above as one JSON document.

Exports are byte-deterministic given identical inputs (floats emitted with
``repr``, key order fixed) so reruns can be diffed; loaders reconstruct the
in-memory results, and re-exporting a loaded result reproduces the files.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from pathlib import Path

from ..scripts import SCRIPT_CODES, SCRIPT_LABELS
from .league import LeagueResult, record_from_json, record_to_json
from .match import MatchRecord
from .profile import UsageProfile

__all__ = [
    "SCHEMA_VERSION",
    "export_league",
    "export_profiles",
    "load_league",
    "load_profiles",
    "load_metadata",
]

SCHEMA_VERSION = 1

_SCRIPT_TAGS = [SCRIPT_LABELS[s].lower() for s in SCRIPT_CODES]

MATCH_COLUMNS = (
    ["mode", "agent0", "agent1", "seed", "seats_swapped", "outcome", "turns_played",
     "fm_calls0", "fm_calls1"]
    + [f"usage0_{t}" for t in _SCRIPT_TAGS]
    + [f"usage1_{t}" for t in _SCRIPT_TAGS]
)

PROFILE_COLUMNS = (
    ["agent", "mode", "games", "actions"]
    + [f"count_{t}" for t in _SCRIPT_TAGS]
    + [f"freq_{t}" for t in _SCRIPT_TAGS]
)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _metadata(kind: str, mode: str, agents: list[str], flags: dict | None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "mode": mode,
        "agents": agents,
        "flags": flags or {},
        "created": datetime.now(timezone.utc).isoformat(),
    }


def _dump_metadata(meta: dict, outdir: Path) -> None:
    _write(outdir / "metadata.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")


def match_rows(records: list[MatchRecord]) -> list[list]:
    rows = []
    for r in records:
        rows.append(
            [r.mode, r.agent0, r.agent1, r.seed, int(r.seats_swapped), r.outcome,
             r.turns_played, r.fm_calls[0], r.fm_calls[1]]
            + list(r.usage[0])
            + list(r.usage[1])
        )
    return rows


def matrix_rows(result: LeagueResult) -> tuple[list[str], list[list]]:
    header = ["agent"] + result.agents + ["wins", "draws", "losses"]
    matrix = result.matrix()
    totals = result.totals()
    rows = []
    for i, name in enumerate(result.agents):
        cells = [
            "" if matrix[i][j] is None else repr(matrix[i][j])
            for j in range(len(result.agents))
        ]
        t = totals[i]
        rows.append([name] + cells + [t.wins, t.draws, t.losses])
    return header, rows


def export_league(result: LeagueResult, outdir: str | Path, flags: dict | None = None) -> list[Path]:
    outdir = Path(outdir)
    meta = _metadata("league", result.mode, result.agents, flags)
    meta["games_per_pair"] = result.games_per_pair
    meta["budget"] = result.budget
    _dump_metadata(meta, outdir)
    _write(outdir / "match_records.csv", _csv_text(MATCH_COLUMNS, match_rows(result.records)))
    header, rows = matrix_rows(result)
    _write(outdir / "league_matrix.csv", _csv_text(header, rows))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "league",
        "mode": result.mode,
        "agents": result.agents,
        "games_per_pair": result.games_per_pair,
        "budget": result.budget,
        "matrix": [[cell for cell in row] for row in result.matrix()],
        "totals": [
            {"agent": a, "wins": t.wins, "draws": t.draws, "losses": t.losses}
            for a, t in zip(result.agents, result.totals())
        ],
        "records": [record_to_json(r) for r in result.records],
    }
    _write(outdir / "results.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return [outdir / n for n in ("metadata.json", "match_records.csv", "league_matrix.csv", "results.json")]


def load_league(outdir: str | Path) -> LeagueResult:
    outdir = Path(outdir)
    payload = json.loads((outdir / "results.json").read_text())
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"schema mismatch: file has {payload.get('schema_version')}, "
            f"reader wants {SCHEMA_VERSION}"
        )
    return LeagueResult(
        mode=payload["mode"],
        agents=list(payload["agents"]),
        games_per_pair=payload["games_per_pair"],
        budget=payload["budget"],
        records=[record_from_json(d) for d in payload["records"]],
    )


def profile_rows(profiles: list[UsageProfile]) -> list[list]:
    rows = []
    for p in profiles:
        freqs = p.frequencies()
        rows.append(
            [p.agent, p.mode, p.games, p.total_actions]
            + [p.counts[s] for s in SCRIPT_CODES]
            + [repr(freqs[s]) for s in SCRIPT_CODES]
        )
    return rows


def export_profiles(
    profiles: list[UsageProfile], outdir: str | Path, flags: dict | None = None
) -> list[Path]:
    outdir = Path(outdir)
    modes = sorted({p.mode for p in profiles})
    meta = _metadata("profile", ",".join(modes), [p.agent for p in profiles], flags)
    errors = {p.agent: p.error for p in profiles if p.error}
    if errors:
        meta["errors"] = errors
    _dump_metadata(meta, outdir)
    _write(outdir / "usage_profiles.csv", _csv_text(PROFILE_COLUMNS, profile_rows(profiles)))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "profile",
        "profiles": [
            {
                "agent": p.agent,
                "mode": p.mode,
                "games": p.games,
                "counts": list(p.counts),
                "frequencies": list(p.frequencies()),
                "error": p.error,
            }
            for p in profiles
        ],
    }
    _write(outdir / "results.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return [outdir / n for n in ("metadata.json", "usage_profiles.csv", "results.json")]


def load_profiles(outdir: str | Path) -> list[UsageProfile]:
    payload = json.loads((Path(outdir) / "results.json").read_text())
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"schema mismatch: file has {payload.get('schema_version')}, "
            f"reader wants {SCHEMA_VERSION}"
        )
    return [
        UsageProfile(
            agent=d["agent"],
            mode=d["mode"],
            games=d["games"],
            counts=tuple(d["counts"]),
            error=d.get("error"),
        )
        for d in payload["profiles"]
    ]


def load_metadata(outdir: str | Path) -> dict:
    return json.loads((Path(outdir) / "metadata.json").read_text())
