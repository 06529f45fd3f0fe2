"""The HTTP service: interactive games, one-shot matches, and job-based
leagues, profiles, and tuning runs. Everything here is a thin layer over the
core package; the CLI is a client of these endpoints."""

from __future__ import annotations

import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..agents import ForwardModel, make_agent, spec_from_config
from ..engine import (
    IllegalAction,
    Status,
    Verb,
    advance,
    end_turn,
    legal_actions,
    observe,
)
from ..modes import (
    ModeConfig,
    ModeValidationError,
    builtin_mode_names,
    builtin_mode_path,
    initial_state,
    load_mode,
    loads_mode,
)
from ..ntbea import tune
from ..ntbea.reporting import export_tune
from ..rng import spawn_rng
from ..tournament import (
    bench_fm,
    export_league,
    export_profiles,
    play_match,
    run_league,
    usage_profile,
)
from ..tournament.league import record_to_json
from . import schemas
from .jobs import JobRegistry

app = FastAPI(title="gridclash", version=__version__)

jobs = JobRegistry()

# Interactive games live in process memory: id -> [ModeConfig, GameState].
games: dict[str, list] = {}


def _load_mode_arg(mode: str) -> ModeConfig:
    try:
        if mode in builtin_mode_names():
            return load_mode(builtin_mode_path(mode))
        return load_mode(mode)
    except (OSError, ModeValidationError) as exc:
        raise HTTPException(status_code=400, detail=f"cannot load mode {mode!r}: {exc}")


def _agent_spec(config: schemas.AgentConfig):
    try:
        return spec_from_config(config.as_config())
    except (ValueError, TypeError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.get("/modes")
def list_modes():
    return {"modes": builtin_mode_names()}


@app.post("/modes/validate", response_model=schemas.ValidateResponse)
def validate_mode(req: schemas.ValidateRequest):
    try:
        if req.text is not None:
            cfg = loads_mode(req.text, source="<request>")
        elif req.path is not None:
            cfg = load_mode(req.path)
        else:
            raise HTTPException(status_code=400, detail="need path or text")
        return schemas.ValidateResponse(ok=True, mode=cfg.name)
    except (OSError, ModeValidationError) as exc:
        return schemas.ValidateResponse(ok=False, error=str(exc))


@app.post("/games", response_model=schemas.GameResponse)
def new_game(req: schemas.NewGameRequest):
    cfg = _load_mode_arg(req.mode)
    state = initial_state(cfg, req.seed, req.swapped)
    game_id = uuid.uuid4().hex[:12]
    games[game_id] = [cfg, state]
    return schemas.GameResponse(game_id=game_id, state=schemas.StateView.from_state(state))


def _game(game_id: str):
    if game_id not in games:
        raise HTTPException(status_code=404, detail=f"no game {game_id}")
    return games[game_id]


@app.get("/games/{game_id}", response_model=schemas.GameResponse)
def get_game(game_id: str):
    _, state = _game(game_id)
    return schemas.GameResponse(game_id=game_id, state=schemas.StateView.from_state(state))


@app.get("/games/{game_id}/actions", response_model=schemas.LegalActionsResponse)
def get_actions(game_id: str, unit: int | None = None):
    _, state = _game(game_id)
    if state.status != Status.ONGOING:
        return schemas.LegalActionsResponse(actions=[])
    uids = [unit] if unit is not None else [
        u.uid for u in state.units.values()
        if u.owner == state.current_player and u.ap > 0
    ]
    actions = []
    for uid in uids:
        try:
            actions.extend(legal_actions(state, uid))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
    return schemas.LegalActionsResponse(
        actions=[schemas.ActionModel.from_action(a) for a in actions]
    )


@app.post("/games/{game_id}/step", response_model=schemas.GameResponse)
def step_game(game_id: str, req: schemas.StepRequest):
    entry = _game(game_id)
    _, state = entry
    try:
        action = req.action.to_action()
        state = end_turn(state) if action.verb == Verb.END_TURN else advance(state, action)
    except (IllegalAction, KeyError, TypeError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=f"illegal action: {exc}")
    entry[1] = state
    return schemas.GameResponse(game_id=game_id, state=schemas.StateView.from_state(state))


@app.post("/games/{game_id}/agent-step", response_model=schemas.AgentStepResponse)
def agent_step(game_id: str, req: schemas.AgentStepRequest):
    entry = _game(game_id)
    cfg, state = entry
    if state.status != Status.ONGOING:
        raise HTTPException(status_code=400, detail="game is over")
    spec = _agent_spec(req.agent)
    agent = make_agent(spec)
    fm = ForwardModel(budget=req.budget)
    rng = spawn_rng(cfg.name, state.seed_state, "service", state.turn, state.current_player)
    action = agent.decide(observe(state, state.current_player), fm, rng)
    state = end_turn(state) if action.verb == Verb.END_TURN else advance(state, action)
    entry[1] = state
    trace = agent.last_trace
    return schemas.AgentStepResponse(
        action=schemas.ActionModel.from_action(action),
        trace=schemas.TraceView(
            script=int(trace.script) if trace.script is not None else None,
            script_name=schemas.script_name(trace.script),
            fitness=trace.fitness,
            generations=trace.generations,
            fm_calls=trace.fm_calls,
        ),
        state=schemas.StateView.from_state(state),
    )


@app.delete("/games/{game_id}")
def delete_game(game_id: str):
    games.pop(game_id, None)
    return {"deleted": game_id}


@app.post("/matches", response_model=schemas.MatchRecordModel)
def run_match(req: schemas.MatchRequest):
    cfg = _load_mode_arg(req.mode)
    rec = play_match(
        cfg, _agent_spec(req.agent0), _agent_spec(req.agent1),
        req.seed, req.swapped, req.budget,
    )
    return schemas.MatchRecordModel(**record_to_json(rec))


@app.post("/bench/forward-model", response_model=schemas.BenchResponse)
def bench(req: schemas.BenchRequest):
    cfg = _load_mode_arg(req.mode)
    result = bench_fm(cfg, seconds=req.seconds)
    return schemas.BenchResponse(**result.__dict__)


@app.post("/jobs/league", response_model=schemas.JobView)
def start_league(req: schemas.LeagueRequest):
    cfg = _load_mode_arg(req.mode)
    specs = [_agent_spec(a) for a in req.agents]
    total = len(specs) * (len(specs) - 1) // 2 * req.games_per_pair
    flags = req.model_dump(exclude={"agents"}) | {
        "agents": [a.as_config() for a in req.agents]
    }

    def run(job):
        def progress(done):
            job.progress = done / total if total else 1.0

        checkpoint = Path(req.out) / "league.jsonl" if req.out else None
        result = run_league(
            cfg, specs, req.games_per_pair, req.budget,
            seed0=req.seed0, workers=req.workers,
            checkpoint=checkpoint, progress=progress,
        )
        payload = {
            "mode": result.mode,
            "agents": result.agents,
            "matrix": result.matrix(),
            "totals": [t.__dict__ for t in result.totals()],
            "games": len(result.records),
        }
        if req.out:
            files = export_league(result, req.out, flags=flags)
            payload["files"] = [str(f) for f in files]
        return payload

    job = jobs.submit("league", run, output_dir=req.out)
    return schemas.JobView(**job.view())


@app.post("/jobs/profile", response_model=schemas.JobView)
def start_profile(req: schemas.ProfileRequest):
    cfg = _load_mode_arg(req.mode)
    spec = _agent_spec(req.agent)
    flags = req.model_dump(exclude={"agent"}) | {"agent": req.agent.as_config()}

    def run(job):
        def progress(done):
            job.progress = done / req.games if req.games else 1.0

        profile = usage_profile(
            cfg, spec, req.games, req.budget, workers=req.workers, progress=progress
        )
        payload = {
            "agent": profile.agent,
            "mode": profile.mode,
            "games": profile.games,
            "counts": list(profile.counts),
            "frequencies": list(profile.frequencies()),
            "error": profile.error,
        }
        if req.out:
            files = export_profiles([profile], req.out, flags=flags)
            payload["files"] = [str(f) for f in files]
        return payload

    job = jobs.submit("profile", run, output_dir=req.out)
    return schemas.JobView(**job.view())


@app.post("/jobs/tune", response_model=schemas.JobView)
def start_tune(req: schemas.TuneRequest):
    cfg = _load_mode_arg(req.mode)
    if req.agent not in ("pgs", "poe", "prhea", "mo-prhea", "s-prhea"):
        raise HTTPException(status_code=400, detail=f"cannot tune agent kind {req.agent!r}")
    flags = req.model_dump()

    def run(job):
        def on_eval(i, point, value):
            job.progress = (i + 1) / req.budget
            job.message = f"evaluation {i + 1}/{req.budget}: fitness {value:.0f}"

        result = tune(
            req.agent, cfg, req.budget, req.seed,
            games=req.games_per_eval, game_budget=req.game_budget,
            workers=req.workers, on_eval=on_eval,
        )
        payload = {
            "agent": result.agent_kind,
            "mode": result.mode,
            "best": result.space.describe(result.best_point),
            "best_estimate": result.best_estimate,
            "evaluations": len(result.history),
        }
        if req.out:
            files = export_tune(result, req.out, flags=flags)
            payload["files"] = [str(f) for f in files]
        return payload

    job = jobs.submit("tune", run, output_dir=req.out)
    return schemas.JobView(**job.view())


@app.get("/jobs/{job_id}", response_model=schemas.JobView)
def job_status(job_id: str):
    job = jobs.get(job_id)
    if job is None:
        raise HTTPException(status_code=404, detail=f"no job {job_id}")
    return schemas.JobView(**job.view())
