"""Files written by a tuning run: the evaluation history, the landscape
model tables, and the winning point as an agent config block that the
agents module loads directly."""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from pathlib import Path

from ..agents import params_to_config
from .tuner import TuneResult

__all__ = ["export_tune", "load_tuned_agent"]


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def export_tune(result: TuneResult, outdir: str | Path, flags: dict | None = None) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    dim_names = [d.name for d in result.space.dimensions]

    history_rows = []
    for i, (point, fitness) in enumerate(result.history):
        values = result.space.values(point)
        history_rows.append([i] + [_cell(v) for v in values] + [repr(float(fitness))])
    (outdir / "tune_history.csv").write_text(
        _csv_text(["evaluation"] + dim_names + ["fitness"], history_rows)
    )

    model_rows = []
    for dims, table in zip(result.model.tuples, result.model.tables):
        tuple_name = "+".join(dim_names[i] for i in dims)
        for key in sorted(table):
            count, mean = table[key]
            combo = ";".join(
                str(_cell(result.space.dimensions[i].values[v])) for i, v in zip(dims, key)
            )
            model_rows.append([tuple_name, combo, count, repr(float(mean))])
    (outdir / "model.csv").write_text(
        _csv_text(["tuple", "values", "visits", "mean_fitness"], model_rows)
    )

    config = params_to_config(result.agent_kind, result.best_params(),
                              name=f"{result.agent_kind}-tuned-{result.mode}")
    (outdir / "tuned_agent.json").write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")

    meta = {
        "schema_version": 1,
        "kind": "tune",
        "agent": result.agent_kind,
        "mode": result.mode,
        "evaluations": len(result.history),
        "best_estimate": result.best_estimate,
        "flags": flags or {},
        "created": datetime.now(timezone.utc).isoformat(),
    }
    (outdir / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return [outdir / n for n in ("metadata.json", "tune_history.csv", "model.csv", "tuned_agent.json")]


def load_tuned_agent(outdir: str | Path) -> dict:
    return json.loads((Path(outdir) / "tuned_agent.json").read_text())


def _cell(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return repr(v)
    return v
