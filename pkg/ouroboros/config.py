from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import json

import yaml

from .checker import CheckConfig

DEFAULT_ARITIES = [1, 2, 3, 4, 8, 16]


def load_config(path: str) -> Dict[str, Any]:
    """Load configuration from YAML or JSON file."""

    if path.lower().endswith(('.yaml', '.yml')):
        with open(path, 'r', encoding='utf-8') as f:
            return yaml.safe_load(f) or {}
    if path.lower().endswith('.json'):
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    raise ValueError(f"Unsupported config format: {path}")


@dataclass
class SllnSettings:
    dist: str = "uniform(0,1)"
    n_max: int = 1_000_000
    checkpoints: Optional[List[int]] = None


@dataclass
class Settings:
    """Resolved settings: built-in defaults, then the config file, then CLI flags."""

    check: CheckConfig = field(default_factory=CheckConfig)
    slln: SllnSettings = field(default_factory=SllnSettings)
    arities: List[int] = field(default_factory=lambda: list(DEFAULT_ARITIES))


def settings_from_dict(cfg: Optional[Dict[str, Any]]) -> Settings:
    cfg = dict(cfg or {})
    unknown = sorted(set(cfg) - {"check", "slln", "sweep"})
    if unknown:
        raise ValueError(f"unknown config sections: {', '.join(unknown)}")
    slln_cfg = dict(cfg.get("slln") or {})
    extra = sorted(set(slln_cfg) - {"dist", "n_max", "checkpoints"})
    if extra:
        raise ValueError(f"unknown slln settings: {', '.join(extra)}")
    slln = SllnSettings(
        dist=str(slln_cfg.get("dist", SllnSettings.dist)),
        n_max=int(slln_cfg.get("n_max", SllnSettings.n_max)),
        checkpoints=[int(c) for c in slln_cfg["checkpoints"]] if slln_cfg.get("checkpoints") else None,
    )
    sweep_cfg = dict(cfg.get("sweep") or {})
    arities = [int(n) for n in sweep_cfg.get("arities", DEFAULT_ARITIES)]
    return Settings(CheckConfig.from_dict(cfg.get("check")), slln, arities)


def load_settings(path: Optional[str]) -> Settings:
    if path is None:
        return Settings()
    try:
        data = load_config(path)
    except yaml.YAMLError as exc:
        raise ValueError(f"malformed config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"config {path} must be a mapping of sections")
    return settings_from_dict(data)
