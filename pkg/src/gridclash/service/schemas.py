"""Request/response models of the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..engine import Action, GameState, Status, Verb
from ..scripts import ScriptId


class AgentConfig(BaseModel):
    """The structured agent block: kind, parameter overrides, portfolio."""

    agent: str
    name: str = ""
    params: dict = Field(default_factory=dict)
    portfolio: list[int] | None = None

    def as_config(self) -> dict:
        block: dict = {"agent": self.agent, "params": dict(self.params)}
        if self.portfolio is not None:
            block["portfolio"] = self.portfolio
        if self.name:
            block["name"] = self.name
        return block


class UnitView(BaseModel):
    uid: int
    owner: int
    kind: str
    x: int
    y: int
    health: int
    max_health: int
    attack: int
    move_range: int
    attack_range: int
    vision_range: int
    ability_range: int
    abilities: list[str]
    action_points: int


class StateView(BaseModel):
    mode: str
    width: int
    height: int
    grid: list[str]
    current_player: int
    turn: int
    status: str
    units: list[UnitView]

    @classmethod
    def from_state(cls, state: GameState) -> "StateView":
        return cls(
            mode=state.rules.name,
            width=state.rules.width,
            height=state.rules.height,
            grid=list(state.rules.grid),
            current_player=state.current_player,
            turn=state.turn,
            status=Status(state.status).name.lower(),
            units=[
                UnitView(
                    uid=u.uid, owner=u.owner, kind=u.kind, x=u.x, y=u.y,
                    health=u.health, max_health=u.max_health, attack=u.attack,
                    move_range=u.move_range, attack_range=u.attack_range,
                    vision_range=u.vision_range, ability_range=u.ability_range,
                    abilities=list(u.abilities), action_points=u.ap,
                )
                for u in state.units.values()
            ],
        )


class ActionModel(BaseModel):
    verb: str
    actor: int = -1
    target: tuple[int, int] | int | None = None

    @classmethod
    def from_action(cls, action: Action) -> "ActionModel":
        return cls(verb=Verb(action.verb).name.lower(), actor=action.actor, target=action.target)

    def to_action(self) -> Action:
        verb = Verb[self.verb.upper()]
        return Action(verb, self.actor, self.target)


class ValidateRequest(BaseModel):
    path: str | None = None
    text: str | None = None


class ValidateResponse(BaseModel):
    ok: bool
    mode: str | None = None
    error: str | None = None


class NewGameRequest(BaseModel):
    mode: str = "kings"
    seed: int = 0
    swapped: bool = False


class GameResponse(BaseModel):
    game_id: str
    state: StateView


class LegalActionsResponse(BaseModel):
    actions: list[ActionModel]


class StepRequest(BaseModel):
    action: ActionModel


class AgentStepRequest(BaseModel):
    agent: AgentConfig
    budget: int = 1000


class TraceView(BaseModel):
    script: int | None = None
    script_name: str | None = None
    fitness: float | None = None
    generations: int = 0
    fm_calls: int = 0


class AgentStepResponse(BaseModel):
    action: ActionModel
    trace: TraceView
    state: StateView


class MatchRequest(BaseModel):
    mode: str = "kings"
    agent0: AgentConfig
    agent1: AgentConfig
    seed: int = 1
    swapped: bool = False
    budget: int = 1000


class MatchRecordModel(BaseModel):
    mode: str
    agent0: str
    agent1: str
    seed: int
    seats_swapped: bool
    outcome: str
    turns_played: int
    fm_calls: tuple[int, int]
    usage: tuple[tuple[int, ...], tuple[int, ...]]


class LeagueRequest(BaseModel):
    mode: str = "kings"
    agents: list[AgentConfig]
    games_per_pair: int = 200
    budget: int = 1000
    seed0: int = 1
    workers: int | None = None
    out: str | None = None


class ProfileRequest(BaseModel):
    mode: str = "kings"
    agent: AgentConfig
    games: int = 1000
    budget: int = 1000
    workers: int | None = None
    out: str | None = None


class TuneRequest(BaseModel):
    agent: str = "prhea"
    mode: str = "kings"
    budget: int = 100
    seed: int = 0
    games_per_eval: int = 20
    game_budget: int = 1000
    workers: int | None = None
    out: str | None = None


class JobView(BaseModel):
    job_id: str
    kind: str
    state: str
    progress: float
    message: str = ""
    result: dict | None = None
    output_dir: str | None = None


class BenchRequest(BaseModel):
    mode: str = "kings"
    seconds: float = 5.0


class BenchResponse(BaseModel):
    mode: str
    seconds: float
    playout_calls: int
    playout_rate: float
    replay_calls: int
    replay_rate: float


def script_name(script: int | None) -> str | None:
    return ScriptId(script).name.lower() if script is not None else None
