"""Flat ``key=value`` run configuration with exact-rational physical parameters."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

from .analytic import PhysParams
from .discretize import FORMS, Grid
from .weyl_algebra import SymbolicParams


class ConfigError(ValueError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not an exact rational or decimal: {text!r}") from exc


@dataclass(frozen=True)
class RunConfig:
    m: Fraction = Fraction(1)
    hbar: Fraction = Fraction(1)
    omega: Fraction = Fraction(1)
    lam: Fraction = Fraction(1, 2)
    L: float = 10.0
    N: int = 1200
    form: str = "EQ5"
    k: int = 8
    dt: float = 1e-3
    steps: int = 5000
    state: str = "0"
    q0: float = 1.0
    v0: float = 0.0
    t_max: float = 20.0
    rk4_h: float = 1e-3
    tol: float = 2e-4
    out: str = "out"

    # file key -> field name
    KEYS = {
        "m": "m", "hbar": "hbar", "omega": "omega", "lambda": "lam",
        "L": "L", "N": "N", "form": "form", "k": "k", "levels": "k",
        "dt": "dt", "steps": "steps", "state": "state",
        "q0": "q0", "v0": "v0", "t_max": "t_max", "rk4_h": "rk4_h",
        "tol": "tol", "out": "out",
    }

    def validated(self) -> "RunConfig":
        try:
            self.symbolic()
            self.params()
            self.grid()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.form not in FORMS:
            raise ConfigError(f"form must be one of {FORMS}, got {self.form!r}")
        if not 1 <= self.k <= 12:
            raise ConfigError(f"levels must be in 1..12, got {self.k}")
        if not self.dt > 0 or self.steps < 1:
            raise ConfigError(f"need dt > 0 and steps >= 1, got dt={self.dt}, steps={self.steps}")
        if not 0 < self.rk4_h <= self.t_max:
            raise ConfigError(f"need 0 < rk4_h <= t_max, got {self.rk4_h}, {self.t_max}")
        self.levels_in_state()
        return self

    def symbolic(self) -> SymbolicParams:
        return SymbolicParams(self.m, self.omega, self.lam, self.hbar)

    def params(self) -> PhysParams:
        return PhysParams(float(self.m), float(self.omega), float(self.lam), float(self.hbar))

    def grid(self) -> Grid:
        return Grid(self.L, self.N)

    def levels_in_state(self) -> list[int]:
        try:
            levels = [int(s) for s in self.state.replace("+", ",").split(",") if s.strip()]
        except ValueError as exc:
            raise ConfigError(f"state must list level indices like '0' or '0,1', got {self.state!r}") from exc
        if not levels or min(levels) < 0:
            raise ConfigError(f"state must list non-negative level indices, got {self.state!r}")
        return levels

    def with_values(self, **raw) -> "RunConfig":
        """Override fields from raw strings (config file or CLI flags)."""
        updates = {}
        kinds = {f.name: f.type for f in fields(self)}
        for key, text in raw.items():
            if text is None:
                continue
            name = self.KEYS.get(key, key)
            if name not in kinds:
                raise ConfigError(f"unknown config key {key!r}")
            kind = kinds[name]
            text = str(text).strip()
            try:
                if kind == "Fraction":
                    updates[name] = _rational(text)
                elif kind == "int":
                    updates[name] = int(text)
                elif kind == "float":
                    updates[name] = float(text)
                elif name == "form":
                    updates[name] = text.upper()
                else:
                    updates[name] = text
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {text!r}") from exc
        return replace(self, **updates)


def parse_config_text(text: str) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in RunConfig.KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = value
    return values


def load_config(path=None, **overrides) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        cfg = cfg.with_values(**parse_config_text(text))
    return cfg.with_values(**overrides).validated()
