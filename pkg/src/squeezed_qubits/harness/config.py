"""Experiment configuration and its JSON form."""

from __future__ import annotations

import ast
import dataclasses
import json
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..bath import BathSpec, QuadratureConfig, correlation_M, occupancy_N
from ..dynamics import IntegratorConfig
from ..qubits import (
    density_from_pure,
    dfs_state_phi1,
    dfs_state_phi2,
    dfs_state_phi3,
    dfs_state_phi4,
    initial_psi1,
    initial_psi2,
)

STATE_KINDS = (
    "psi1", "psi2", "phi1", "phi1_vacuum", "phi1_thermal", "phi2", "phi3", "phi4", "custom",
)
RUN_REGIMES = ("markov", "nonmarkov", "markov_unsqueezed")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class InitialState:
    kind: str = "psi1"
    epsilon: float | None = None
    # custom only: [[re, im], ...] for |00>, |01>, |10>, |11>
    amplitudes: tuple | None = None

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ConfigError(f"unknown initial state {self.kind!r}")
        if self.kind in ("psi1", "psi2"):
            if self.epsilon is None or not 0 <= self.epsilon <= 1:
                raise ConfigError(f"{self.kind} needs epsilon in [0, 1]")
        if self.kind == "custom" and (self.amplitudes is None or len(self.amplitudes) != 4):
            raise ConfigError("custom state needs four amplitudes")

    def vector(self, bath: BathSpec) -> np.ndarray:
        """State vector; r and theta come from the bath."""
        r, th = bath.r, bath.theta
        k = self.kind
        if k == "psi1":
            return initial_psi1(self.epsilon, r, th)
        if k == "psi2":
            return initial_psi2(self.epsilon)
        if k in ("phi1", "phi1_vacuum"):
            return dfs_state_phi1(r, th)
        if k == "phi1_thermal":
            n = float(occupancy_N(bath.omega0, bath))
            m = float(abs(correlation_M(bath.omega0, bath)))
            return dfs_state_phi1(r, th, n=n, m=m)
        if k == "phi2":
            return dfs_state_phi2()
        if k == "phi3":
            return dfs_state_phi3()
        if k == "phi4":
            return dfs_state_phi4(r, th)
        amps = np.array([complex(*a) if np.ndim(a) else complex(a) for a in self.amplitudes])
        return amps / np.linalg.norm(amps)

    def density(self, bath: BathSpec) -> np.ndarray:
        return density_from_pure(self.vector(bath))


@dataclass(frozen=True)
class EsdConfig:
    threshold: float = 1e-3
    min_width: int = 5


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = "custom"
    bath: BathSpec = field(default_factory=lambda: BathSpec(r=0.31))
    markov_gamma: float = 1.0
    initial_state: InitialState = field(default_factory=lambda: InitialState("psi1", 0.0))
    regimes: tuple = ("markov", "nonmarkov")
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    h_coeff: float | None = None
    esd: EsdConfig = field(default_factory=EsdConfig)
    output: str = "out"

    def __post_init__(self):
        regimes = tuple(self.regimes)
        object.__setattr__(self, "regimes", regimes)
        if not regimes:
            raise ConfigError("at least one regime must be selected")
        bad = [r for r in regimes if r not in RUN_REGIMES]
        if bad:
            raise ConfigError(f"unknown regime(s): {bad}")
        if len(set(regimes)) != len(regimes):
            raise ConfigError("duplicate regimes")
        if not self.markov_gamma > 0:
            raise ConfigError("markov_gamma must be positive")
        if self.h_coeff is not None and not self.h_coeff > 0:
            raise ConfigError("h_coeff must be positive")
        if self.initial_state.kind in ("psi1", "phi1", "phi1_vacuum", "phi1_thermal", "phi4") and self.bath.r <= 0:
            raise ConfigError(f"{self.initial_state.kind} requires r > 0")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_SECTIONS = {
    "bath": BathSpec,
    "initial_state": InitialState,
    "integrator": IntegratorConfig,
    "quadrature": QuadratureConfig,
    "esd": EsdConfig,
}


def _build(cls, data):
    if isinstance(data, cls):
        return data
    if not isinstance(data, dict):
        raise ConfigError(f"{cls.__name__} must be a JSON object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown {cls.__name__} field(s): {sorted(unknown)}")
    data = dict(data)
    if cls is InitialState and data.get("amplitudes") is not None:
        data["amplitudes"] = tuple(tuple(a) if isinstance(a, list) else a for a in data["amplitudes"])
    try:
        return cls(**data)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {cls.__name__}: {exc}") from exc


def config_from_dict(data: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Build a config from nested dicts; sections present in ``data`` are merged over ``base``."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    base = base or ExperimentConfig()
    names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown config field(s): {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        if key in _SECTIONS:
            merged = dataclasses.asdict(getattr(base, key))
            if not isinstance(value, dict):
                raise ConfigError(f"{key} must be a JSON object")
            merged.update(value)
            kwargs[key] = _build(_SECTIONS[key], merged)
        elif key == "regimes":
            if not isinstance(value, (list, tuple)):
                raise ConfigError("regimes must be a list")
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    try:
        return dataclasses.replace(base, **kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(data, base)


def set_path(cfg: ExperimentConfig, path: str, value) -> ExperimentConfig:
    """Return a copy of ``cfg`` with the scalar at dotted ``path`` replaced."""
    head, _, rest = path.partition(".")
    names = {f.name for f in dataclasses.fields(cfg)}
    if head not in names:
        raise ConfigError(f"no field {head!r} in {type(cfg).__name__}")
    current = getattr(cfg, head)
    try:
        if rest:
            if not dataclasses.is_dataclass(current):
                raise ConfigError(f"{head!r} is not a section")
            return dataclasses.replace(cfg, **{head: set_path(current, rest, value)})
        if dataclasses.is_dataclass(current) or isinstance(current, (tuple, list)):
            raise ConfigError(f"{path!r} does not address a scalar field")
        return dataclasses.replace(cfg, **{head: value})
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cannot set {path}={value!r}: {exc}") from exc


def get_path(cfg, path: str):
    for part in path.split("."):
        cfg = getattr(cfg, part)
    return cfg


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_number(text: str) -> float:
    """Parse ``"0.5"``, ``"pi/6"``, ``"2*pi"`` and similar arithmetic on pi."""
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ConfigError(f"cannot parse number {text!r}")

    try:
        return ev(ast.parse(text, mode="eval"))
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc
