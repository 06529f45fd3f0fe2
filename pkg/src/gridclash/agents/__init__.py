"""Decision-makers: the five portfolio search agents, the two rule-based
benchmark agents, and the uniform-random baseline.

Agents are described by a config block ``{"agent": <kind>, "params": {...},
"portfolio": [codes], "name": ...}`` and instantiated fresh per match via
:func:`make_agent`.
"""

from __future__ import annotations

import dataclasses

from .base import Agent, AgentParams, DecideTrace, params_from_config, params_to_config
from .pgs import PgsAgent
from .poe import PoeAgent
from .prhea import MoPrheaAgent, PrheaAgent, shift_buffer
from .playout import BudgetExhausted, ForwardModel, rollout, rollout_assignment
from .rule_based import CombatAgent, PusherAgent, RandomAgent
from .sprhea import SprheaAgent

__all__ = [
    "Agent",
    "AgentParams",
    "AgentSpec",
    "DecideTrace",
    "ForwardModel",
    "BudgetExhausted",
    "rollout",
    "rollout_assignment",
    "shift_buffer",
    "AGENT_KINDS",
    "PORTFOLIO_KINDS",
    "make_agent",
    "spec_from_config",
    "spec_to_config",
    "rule_based_kind",
]

_CLASSES: dict[str, type[Agent]] = {
    cls.kind: cls
    for cls in (
        PgsAgent,
        PoeAgent,
        PrheaAgent,
        MoPrheaAgent,
        SprheaAgent,
        CombatAgent,
        PusherAgent,
        RandomAgent,
    )
}

AGENT_KINDS = tuple(_CLASSES)
PORTFOLIO_KINDS = ("pgs", "poe", "prhea", "mo-prhea", "s-prhea")


@dataclasses.dataclass(frozen=True)
class AgentSpec:
    """Construction recipe for an agent; hashable so leagues can key on it."""

    kind: str
    params: AgentParams = AgentParams()
    name: str = ""

    @property
    def display_name(self) -> str:
        return self.name or self.kind


def make_agent(spec: AgentSpec | str) -> Agent:
    if isinstance(spec, str):
        spec = AgentSpec(spec)
    if spec.kind not in _CLASSES:
        raise ValueError(f"unknown agent kind {spec.kind!r}; known: {sorted(_CLASSES)}")
    return _CLASSES[spec.kind](spec.params)


def spec_from_config(config: dict) -> AgentSpec:
    kind = config.get("agent")
    if kind not in _CLASSES:
        raise ValueError(f"unknown agent kind {kind!r}; known: {sorted(_CLASSES)}")
    return AgentSpec(
        kind=kind,
        params=params_from_config(config),
        name=config.get("name", ""),
    )


def spec_to_config(spec: AgentSpec) -> dict:
    return params_to_config(spec.kind, spec.params, spec.name or None)


def rule_based_kind(mode_name: str) -> str:
    """The benchmark opponent matched to a game mode."""
    return "pusher" if mode_name == "pushers" else "combat"
