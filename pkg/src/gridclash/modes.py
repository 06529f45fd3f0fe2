"""Mode configuration: loading, validation, canonical serialization, and
initial-state construction.

A mode file is plain YAML: scalar rule knobs, a character-grid map
(``.`` plain, ``#`` impassable, ``O`` hole), a unit-type table, a per-player
roster, and two spawn zones. ``serialize_mode`` emits a canonical rendering
(fixed key order, sorted unit types) so load -> serialize -> load is the
identity and the shipped files round-trip byte-for-byte.
"""

from __future__ import annotations

import dataclasses
import importlib.resources
from pathlib import Path

import yaml

from .engine import (
    HOLE,
    IMPASSABLE,
    PLAIN,
    WIN_KING_DEATH,
    WIN_LAST_SIDE,
    GameState,
    Rules,
    Status,
    Unit,
)
from .rng import spawn_rng

__all__ = [
    "UnitType",
    "ModeConfig",
    "ModeValidationError",
    "load_mode",
    "loads_mode",
    "serialize_mode",
    "builtin_mode_path",
    "builtin_mode_names",
    "initial_state",
]

_TILE_CHARS = {PLAIN, IMPASSABLE, HOLE}


class ModeValidationError(ValueError):
    """A mode file parsed but violates a structural invariant."""


@dataclasses.dataclass(frozen=True)
class UnitType:
    name: str
    health: int
    attack: int
    move_range: int
    attack_range: int
    vision_range: int
    ability_range: int = 1
    abilities: tuple[str, ...] = ()
    king: bool = False


@dataclasses.dataclass(frozen=True)
class ModeConfig:
    name: str
    grid: tuple[str, ...]
    action_points: int
    turn_limit: int
    win_rule: str
    round_decay: int
    heal_amount: int
    push_enabled: bool
    fog_enabled: bool
    unit_types: dict[str, UnitType]
    roster: tuple[str, ...]
    spawn_zones: tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]

    @property
    def width(self) -> int:
        return len(self.grid[0])

    @property
    def height(self) -> int:
        return len(self.grid)

    def rules(self) -> Rules:
        king_kinds = frozenset(t.name for t in self.unit_types.values() if t.king)
        return Rules(
            self.name,
            self.grid,
            ap_per_turn=self.action_points,
            turn_limit=self.turn_limit,
            win_rule=self.win_rule,
            decay=self.round_decay,
            heal_amount=self.heal_amount,
            push_enabled=self.push_enabled,
            fog_enabled=self.fog_enabled,
            king_kinds=king_kinds,
        )


def _require(cond: bool, key: str, message: str) -> None:
    if not cond:
        raise ModeValidationError(f"{key}: {message}")


def _validate(cfg: ModeConfig) -> ModeConfig:
    _require(len(cfg.grid) >= 2, "map", "height must be at least 2")
    width = len(cfg.grid[0])
    _require(width >= 2, "map", "width must be at least 2")
    for y, row in enumerate(cfg.grid):
        _require(len(row) == width, "map", f"row {y} has length {len(row)}, expected {width}")
        bad = set(row) - _TILE_CHARS
        _require(not bad, "map", f"row {y} contains unknown tile characters {sorted(bad)}")
    if any(HOLE in row for row in cfg.grid):
        _require(cfg.push_enabled, "map", "hole tiles require push_enabled: true")
    _require(cfg.turn_limit > 0, "turn_limit", "must be positive")
    _require(cfg.action_points > 0, "action_points", "must be positive")
    _require(
        cfg.win_rule in (WIN_KING_DEATH, WIN_LAST_SIDE),
        "win_rule",
        f"must be one of {WIN_KING_DEATH!r}, {WIN_LAST_SIDE!r}",
    )
    _require(cfg.round_decay >= 0, "round_decay", "must be non-negative")
    _require(cfg.heal_amount >= 0, "heal_amount", "must be non-negative")
    _require(len(cfg.unit_types) > 0, "unit_types", "at least one unit type required")
    for name, t in cfg.unit_types.items():
        key = f"unit_types.{name}"
        _require(t.health > 0, key, "health must be positive")
        for field in ("attack", "move_range", "attack_range", "vision_range", "ability_range"):
            _require(getattr(t, field) >= 0, key, f"{field} must be non-negative")
        unknown = set(t.abilities) - {"heal", "push"}
        _require(not unknown, key, f"unknown abilities {sorted(unknown)}")
    _require(len(cfg.roster) > 0, "roster", "must not be empty")
    for kind in cfg.roster:
        _require(kind in cfg.unit_types, "roster", f"unknown unit type {kind!r}")
    if cfg.win_rule == WIN_KING_DEATH:
        kings = sum(1 for kind in cfg.roster if cfg.unit_types[kind].king)
        _require(kings == 1, "roster", f"king_death mode needs exactly one king per player, found {kings}")
    seen: set[tuple[int, int]] = set()
    for side, zone in enumerate(cfg.spawn_zones):
        key = f"spawn_zones.player{side}"
        _require(len(zone) >= len(cfg.roster), key, f"zone smaller than roster ({len(zone)} < {len(cfg.roster)})")
        for x, y in zone:
            _require(0 <= x < width and 0 <= y < len(cfg.grid), key, f"spawn {x},{y} outside the map")
            _require(cfg.grid[y][x] == PLAIN, key, f"spawn {x},{y} is not a passable tile")
            _require((x, y) not in seen, key, f"spawn {x},{y} listed twice")
            seen.add((x, y))
    return cfg


def loads_mode(text: str, source: str = "<string>") -> ModeConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ModeValidationError(f"{source}: not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ModeValidationError(f"{source}: top level must be a mapping")

    def need(key: str):
        if key not in raw:
            raise ModeValidationError(f"{key}: missing required key")
        return raw[key]

    grid = tuple(str(need("map")).strip("\n").split("\n"))
    types = {}
    for name, spec in sorted(need("unit_types").items()):
        types[name] = UnitType(
            name=name,
            health=int(spec.get("health", 0)),
            attack=int(spec.get("attack", 0)),
            move_range=int(spec.get("move_range", 0)),
            attack_range=int(spec.get("attack_range", 0)),
            vision_range=int(spec.get("vision_range", 0)),
            ability_range=int(spec.get("ability_range", 1)),
            abilities=tuple(spec.get("abilities", ())),
            king=bool(spec.get("king", False)),
        )
    zones = need("spawn_zones")
    for side in ("player0", "player1"):
        if side not in zones:
            raise ModeValidationError(f"spawn_zones.{side}: missing required key")
    cfg = ModeConfig(
        name=str(need("name")),
        grid=grid,
        action_points=int(raw.get("action_points", 1)),
        turn_limit=int(raw.get("turn_limit", 100)),
        win_rule=str(need("win_rule")),
        round_decay=int(raw.get("round_decay", 0)),
        heal_amount=int(raw.get("heal_amount", 0)),
        push_enabled=bool(raw.get("push_enabled", False)),
        fog_enabled=bool(raw.get("fog_enabled", False)),
        unit_types=types,
        roster=tuple(need("roster")),
        spawn_zones=(
            tuple((int(x), int(y)) for x, y in zones["player0"]),
            tuple((int(x), int(y)) for x, y in zones["player1"]),
        ),
    )
    return _validate(cfg)


def load_mode(path: str | Path) -> ModeConfig:
    path = Path(path)
    return loads_mode(path.read_text(), source=str(path))


def serialize_mode(cfg: ModeConfig) -> str:
    """Canonical YAML rendering; stable under load -> serialize -> load."""
    lines = [f"name: {cfg.name}", "map: |"]
    lines += [f"  {row}" for row in cfg.grid]
    lines += [
        f"action_points: {cfg.action_points}",
        f"turn_limit: {cfg.turn_limit}",
        f"win_rule: {cfg.win_rule}",
        f"round_decay: {cfg.round_decay}",
        f"heal_amount: {cfg.heal_amount}",
        f"push_enabled: {str(cfg.push_enabled).lower()}",
        f"fog_enabled: {str(cfg.fog_enabled).lower()}",
        "unit_types:",
    ]
    for name in sorted(cfg.unit_types):
        t = cfg.unit_types[name]
        lines.append(f"  {name}:")
        lines.append(f"    health: {t.health}")
        lines.append(f"    attack: {t.attack}")
        lines.append(f"    move_range: {t.move_range}")
        lines.append(f"    attack_range: {t.attack_range}")
        lines.append(f"    vision_range: {t.vision_range}")
        lines.append(f"    ability_range: {t.ability_range}")
        lines.append(f"    abilities: [{', '.join(t.abilities)}]")
        lines.append(f"    king: {str(t.king).lower()}")
    lines.append(f"roster: [{', '.join(cfg.roster)}]")
    lines.append("spawn_zones:")
    for side, zone in enumerate(cfg.spawn_zones):
        tiles = ", ".join(f"[{x}, {y}]" for x, y in zone)
        lines.append(f"  player{side}: [{tiles}]")
    return "\n".join(lines) + "\n"


def builtin_mode_path(name: str) -> Path:
    """Filesystem path of a shipped mode config (kings, pushers, healers)."""
    resource = importlib.resources.files("gridclash") / "configs" / f"{name}.yaml"
    path = Path(str(resource))
    if not path.exists():
        raise FileNotFoundError(f"no builtin mode {name!r}")
    return path


def builtin_mode_names() -> list[str]:
    folder = Path(str(importlib.resources.files("gridclash") / "configs"))
    return sorted(p.stem for p in folder.glob("*.yaml"))


def initial_state(cfg: ModeConfig, seed: int, swapped: bool = False) -> GameState:
    """Deterministic starting state for (config, seed).

    Each side's roster is assigned to its spawn zone by a seeded shuffle.
    With ``swapped`` the same seed produces the same layout with player
    identities exchanged, which is how rematches with interchanged starting
    positions are built.
    """
    rules = cfg.rules()
    rng = spawn_rng(seed, "spawn", cfg.name)
    units: dict[int, Unit] = {}
    pos: dict[tuple[int, int], int] = {}
    uid = 0
    for side, zone in enumerate(cfg.spawn_zones):
        owner = side ^ 1 if swapped else side
        tiles = list(zone)
        rng.shuffle(tiles)
        for kind, (x, y) in zip(cfg.roster, tiles):
            t = cfg.unit_types[kind]
            units[uid] = Unit(
                uid, owner, kind, x, y, t.health, t.health, t.attack,
                t.move_range, t.attack_range, t.vision_range, t.ability_range,
                t.abilities, cfg.action_points,
            )
            pos[(x, y)] = uid
            uid += 1
    return GameState(rules, units, pos, 0, 0, Status.ONGOING, seed)
