"""Run configuration: JSON schema, validation and problem construction."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from fqate.errors import ConfigError

PROBLEMS = ("parabolic", "h2plus", "custom")
SCHEDULE_KINDS = ("linear", "optimal")
BUNDLED = ("parabolic", "h2plus")


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters.

    Defaults describe the one-electron parabolic experiment; the bundled
    ``h2plus.json`` overrides them for the bond-length search.
    """

    problem: str = "parabolic"
    length: float = 10.0
    qubits: int = 6
    dimension: int = 1
    electrons: int = 1
    omega: float = 1.0
    dt: float = 0.1
    steps: tuple[int, ...] = (100, 200, 300, 500, 1000, 2000, 5000, 10000, 20000)
    schedules: tuple[str, ...] = ("linear", "optimal")
    a_points: int = 257
    transverse: float = 0.0
    nuclear_qubits: int = 0
    bond_lengths: tuple[float, ...] = ()
    external: dict | None = None
    electron_interaction: bool = False
    v0: dict | None = None
    stepping: str = "trotter"
    dense_cap: int = 4096
    shots: int = 0
    seed: int = 0
    output_dir: str = "out"

    def to_dict(self) -> dict[str, Any]:
        out = dataclasses.asdict(self)
        for key in ("steps", "schedules", "bond_lengths"):
            out[key] = list(out[key])
        return out

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _positive(name: str, value: Any, integer: bool = False) -> Any:
    kind = int if integer else (int, float)
    if isinstance(value, bool) or not isinstance(value, kind):
        raise ConfigError(f"field '{name}': expected a {'integer' if integer else 'number'}, got {value!r}")
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(f"field '{name}': must be positive, got {value!r}")
    return value


def _validate(raw: dict[str, Any]) -> RunConfig:
    unknown = sorted(set(raw) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    problem = raw.get("problem", "parabolic")
    if problem not in PROBLEMS:
        raise ConfigError(f"field 'problem': expected one of {PROBLEMS}, got {problem!r}")
    values: dict[str, Any] = {"problem": problem}
    if problem == "h2plus":
        values.update(
            length=15.0, transverse=0.1, nuclear_qubits=2, bond_lengths=(2.0, 4.0, 6.0, 8.0),
            steps=(100, 200, 500, 1000, 2000, 5000, 10000),
        )

    for name in ("length", "omega", "dt"):
        if name in raw:
            values[name] = float(_positive(name, raw[name]))
    for name in ("qubits", "electrons", "a_points", "dense_cap"):
        if name in raw:
            values[name] = int(_positive(name, raw[name], integer=True))
    if "dimension" in raw:
        if raw["dimension"] not in (1, 3) or isinstance(raw["dimension"], bool):
            raise ConfigError(f"field 'dimension': must be 1 or 3, got {raw['dimension']!r}")
        values["dimension"] = raw["dimension"]
    for name in ("nuclear_qubits", "shots", "seed"):
        if name in raw:
            v = raw[name]
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ConfigError(f"field '{name}': expected a non-negative integer, got {v!r}")
            values[name] = v
    if "transverse" in raw:
        v = raw["transverse"]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0:
            raise ConfigError(f"field 'transverse': expected a non-negative number, got {v!r}")
        values["transverse"] = float(v)
    if "steps" in raw:
        steps = raw["steps"]
        if isinstance(steps, int) and not isinstance(steps, bool):
            steps = [steps]
        if not isinstance(steps, list) or not steps:
            raise ConfigError("field 'steps': expected a non-empty list of integers")
        for n in steps:
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise ConfigError(f"field 'steps': entries must be non-negative integers, got {n!r}")
        if any(b < a for a, b in zip(steps, steps[1:])):
            raise ConfigError("field 'steps': list must be ascending")
        values["steps"] = tuple(steps)
    if "schedules" in raw:
        kinds = raw["schedules"]
        if not isinstance(kinds, list) or not kinds or any(k not in SCHEDULE_KINDS for k in kinds):
            raise ConfigError(f"field 'schedules': expected a non-empty list drawn from {SCHEDULE_KINDS}")
        values["schedules"] = tuple(kinds)
    if "bond_lengths" in raw:
        d = raw["bond_lengths"]
        if not isinstance(d, list) or not d:
            raise ConfigError("field 'bond_lengths': expected a non-empty list")
        values["bond_lengths"] = tuple(float(_positive("bond_lengths", x)) for x in d)
    if "stepping" in raw:
        if raw["stepping"] not in ("trotter", "exact"):
            raise ConfigError(f"field 'stepping': expected 'trotter' or 'exact', got {raw['stepping']!r}")
        values["stepping"] = raw["stepping"]
    if "electron_interaction" in raw:
        if not isinstance(raw["electron_interaction"], bool):
            raise ConfigError("field 'electron_interaction': expected true or false")
        values["electron_interaction"] = raw["electron_interaction"]
    for name in ("external", "v0"):
        if name in raw and raw[name] is not None:
            values[name] = _validate_potential(name, raw[name])
    if "output_dir" in raw:
        if not isinstance(raw["output_dir"], str) or not raw["output_dir"]:
            raise ConfigError("field 'output_dir': expected a non-empty string")
        values["output_dir"] = raw["output_dir"]

    cfg = RunConfig(**values)
    _check_consistency(cfg)
    return cfg


def _validate_potential(name: str, spec: Any) -> dict:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"field '{name}': expected an object with a 'type'")
    kind = spec["type"]
    if kind == "harmonic":
        extra = set(spec) - {"type", "omegas"}
        omegas = spec.get("omegas")
        if extra or not isinstance(omegas, list) or not omegas:
            raise ConfigError(f"field '{name}': harmonic needs exactly an 'omegas' list")
        return {"type": "harmonic", "omegas": [float(_positive(f"{name}.omegas", w)) for w in omegas]}
    if kind == "soft_coulomb":
        extra = set(spec) - {"type", "centers", "charges"}
        centers, charges = spec.get("centers"), spec.get("charges")
        if extra or not isinstance(centers, list) or not isinstance(charges, list) or len(centers) != len(charges):
            raise ConfigError(f"field '{name}': soft_coulomb needs matching 'centers' and 'charges' lists")
        return {"type": "soft_coulomb", "centers": centers, "charges": [float(z) for z in charges]}
    raise ConfigError(f"field '{name}.type': expected 'harmonic' or 'soft_coulomb', got {kind!r}")


def _check_consistency(cfg: RunConfig) -> None:
    if cfg.problem == "h2plus":
        if cfg.nuclear_qubits < 1:
            raise ConfigError("field 'nuclear_qubits': h2plus needs a nuclear register")
        if len(cfg.bond_lengths) > 1 << cfg.nuclear_qubits:
            raise ConfigError("field 'bond_lengths': more configurations than the nuclear register holds")
        if any(d >= cfg.length for d in cfg.bond_lengths):
            raise ConfigError("field 'bond_lengths': every bond length must be shorter than the cell")
        if cfg.electrons != 1 or cfg.dimension != 1:
            raise ConfigError("h2plus is a single electron in one dimension")
    if cfg.problem == "parabolic" and (cfg.electrons != 1 or cfg.dimension != 1):
        raise ConfigError("parabolic is a single electron in one dimension")
    if cfg.problem == "custom":
        if cfg.external is None and not cfg.electron_interaction:
            raise ConfigError("field 'external': custom problems need a final potential")
        if cfg.electrons > 1 and (cfg.v0 is None or cfg.v0["type"] != "harmonic"):
            raise ConfigError("field 'v0': several electrons need a harmonic v0 for the Slater initial state")
        for name in ("external", "v0"):
            spec = getattr(cfg, name)
            if spec and spec["type"] == "harmonic" and len(spec["omegas"]) != cfg.dimension:
                raise ConfigError(f"field '{name}.omegas': need {cfg.dimension} frequencies")
        if cfg.v0 is not None and cfg.v0["type"] != "harmonic":
            raise ConfigError("field 'v0.type': only harmonic v0 has a preparable ground state")
    if cfg.transverse and cfg.nuclear_qubits == 0:
        raise ConfigError("field 'transverse': needs nuclear_qubits >= 1")


def parse_config(source: str | Path | dict) -> RunConfig:
    """Load and validate a config from a path, a bundled name, or a dict."""
    if isinstance(source, dict):
        return _validate(source)
    path = Path(source)
    if not path.exists() and str(source) in BUNDLED:
        path = bundled_config_path(str(source))
    if not path.exists():
        raise ConfigError(f"config file not found: {source}")
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    try:
        return _validate(raw)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def bundled_config_path(name: str) -> Path:
    if name not in BUNDLED:
        raise ConfigError(f"no bundled config named {name!r}")
    return Path(str(resources.files("fqate") / "configs" / f"{name}.json"))
