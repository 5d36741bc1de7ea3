"""Flat `key = value` experiment configuration files."""

import typing
from pathlib import Path

from pydantic import ValidationError

from buchi_rl.cli.schemas import ExperimentConfig
from buchi_rl.errors import ConfigError

PRESETS: dict[str, dict] = {
    "prob_gate": dict(
        env="prob_gate", automaton="fga_gnc", K=10, episodes=40_000, max_steps=100
    ),
    "frozen_lake": dict(
        env="frozen_lake8", automaton="frozen_lake", K=10, episodes=6000, max_steps=200
    ),
    "office": dict(
        env="office", automaton="office_world", K=5, episodes=6000, max_steps=1000
    ),
}


def _is_list_field(name: str) -> bool:
    return typing.get_origin(ExperimentConfig.model_fields[name].annotation) is list


def preset_config(name: str, **overrides) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return build_config({**PRESETS[name], **overrides})


def build_config(values: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig(**values)
    except ValidationError as exc:
        messages = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in exc.errors()
        )
        raise ConfigError(f"invalid configuration: {messages}") from exc


def parse_config(text: str) -> ExperimentConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key in ExperimentConfig.model_fields and _is_list_field(key):
            values[key] = [item.strip() for item in value.split(",") if item.strip()]
        elif value:
            values[key] = value
    return build_config(values)


def format_config(config: ExperimentConfig) -> str:
    lines = [f"# buchi-rl experiment {config.config_hash()}"]
    for name, value in config.model_dump().items():
        if value is None:
            continue
        if isinstance(value, list):
            value = ", ".join(repr(v) for v in value)
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{name} = {value}")
    return "\n".join(lines) + "\n"


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text)


def save_config(config: ExperimentConfig, path: str | Path) -> None:
    Path(path).write_text(format_config(config), encoding="utf-8")
