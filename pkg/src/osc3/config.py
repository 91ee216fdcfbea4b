"""Scenario configuration: JSON parsing, validation and the built-in figure sets."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .entropy import DEFAULT_ALPHAS
from .errors import ConfigError, DomainError
from .model import CouplingSchedule

_KEYS = ("k0", "j12", "j13", "j23")


@dataclass(frozen=True)
class ScenarioConfig:
    schedule: CouplingSchedule
    t_start: float = 0.0
    t_end: float = 5.0
    samples: int = 500
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    csv: str | None = None
    plot: str | None = None
    oracle: bool = False
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.t_start) and self.t_start >= 0.0):
            raise ConfigError(f"t_start must be >= 0, got {self.t_start}")
        if not (math.isfinite(self.t_end) and self.t_end > self.t_start):
            raise ConfigError(f"t_end must exceed t_start, got {self.t_end}")
        if self.samples < 2:
            raise ConfigError(f"samples must be >= 2, got {self.samples}")
        for a in self.alphas:
            if not (math.isfinite(a) and a > 0.0):
                raise ConfigError(f"Renyi orders must be positive, got {a}")


def _couplings(obj: Any, where: str) -> tuple[float, float, float, float]:
    if isinstance(obj, Mapping):
        missing = [k for k in _KEYS if k not in obj]
        if missing:
            raise ConfigError(f"{where}: missing {', '.join(missing)}")
        vals = [obj[k] for k in _KEYS]
    elif isinstance(obj, (list, tuple)) and len(obj) == 4:
        vals = list(obj)
    else:
        raise ConfigError(f"{where}: expected an object with k0, j12, j13, j23 or a list of four numbers")
    try:
        out = tuple(float(v) for v in vals)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: couplings must be numbers") from None
    if not all(math.isfinite(v) for v in out):
        raise ConfigError(f"{where}: couplings must be finite")
    return out  # type: ignore[return-value]


def parse_schedule(obj: Any) -> CouplingSchedule:
    if not isinstance(obj, Mapping):
        raise ConfigError("schedule must be an object")
    kind = obj.get("kind")
    try:
        if kind == "quench":
            return CouplingSchedule.quench(
                _couplings(obj.get("initial"), "schedule.initial"),
                _couplings(obj.get("final"), "schedule.final"),
            )
        if kind == "constant":
            return CouplingSchedule.constant(*_couplings(obj.get("couplings"), "schedule.couplings"))
        if kind == "tabulated":
            times = obj.get("times")
            rows = obj.get("rows")
            if not isinstance(times, list) or not isinstance(rows, list):
                raise ConfigError("tabulated schedule needs lists 'times' and 'rows'")
            return CouplingSchedule.tabulated(
                [float(t) for t in times],
                [_couplings(r, f"schedule.rows[{i}]") for i, r in enumerate(rows)],
            )
    except DomainError as exc:
        raise ConfigError(f"schedule: {exc}") from None
    raise ConfigError(f"schedule.kind must be quench, constant or tabulated, got {kind!r}")


def parse_config(obj: Any, name: str = "custom") -> ScenarioConfig:
    if not isinstance(obj, Mapping):
        raise ConfigError("config must be a JSON object")
    known = {"schedule", "t_start", "t_end", "samples", "alphas", "outputs", "oracle", "name"}
    extra = set(obj) - known
    if extra:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
    if "schedule" not in obj:
        raise ConfigError("config needs a 'schedule'")
    outputs = obj.get("outputs", {}) or {}
    if not isinstance(outputs, Mapping) or set(outputs) - {"csv", "plot"}:
        raise ConfigError("outputs must be an object with optional 'csv' and 'plot' paths")
    try:
        samples = obj.get("samples", 500)
        if isinstance(samples, bool) or int(samples) != samples:
            raise ConfigError(f"samples must be an integer, got {samples!r}")
        alphas = obj.get("alphas", list(DEFAULT_ALPHAS))
        if not isinstance(alphas, list):
            raise ConfigError("alphas must be a list")
        oracle = obj.get("oracle", False)
        if not isinstance(oracle, bool):
            raise ConfigError("oracle must be true or false")
        return ScenarioConfig(
            schedule=parse_schedule(obj["schedule"]),
            t_start=float(obj.get("t_start", 0.0)),
            t_end=float(obj.get("t_end", 5.0)),
            samples=int(samples),
            alphas=tuple(float(a) for a in alphas),
            csv=outputs.get("csv"),
            plot=outputs.get("plot"),
            oracle=oracle,
            name=str(obj.get("name", name)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad value in config: {exc}") from None


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_config(obj, name=path.stem)


# quench parameter sets (K0, J12, J13, J23) of the three reference figures
FIGURES = {
    "fig1": ((4.0, 1.0, 3.0, 8.0), (6.0, 2.0, 4.0, 7.0)),
    "fig2": ((0.1, 1.0, 2.5, 3.0), (0.1, 2.0, 3.5, 4.0)),
    "fig3": ((0.1, 1.0, 2.5, 3.0), (-0.1, 2.0, 3.5, 4.0)),
}


def builtin(name: str, **overrides) -> ScenarioConfig:
    """Figure scenario: sudden quench, ``t`` in ``[0, 5]``, 500 samples."""
    if name not in FIGURES:
        raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(FIGURES)}")
    ini, fin = FIGURES[name]
    return ScenarioConfig(schedule=CouplingSchedule.quench(ini, fin), name=name, **overrides)
