"""Run configuration: defaults, INI-file loading, validation.

A single flat RunConfig drives every CLI command; unknown keys in the file
are rejected so typos fail fast.  The default residual tolerance can be
overridden with the MAXDTN_TOL environment variable.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, fields

from .errors import ConfigError

ENV_TOL = "MAXDTN_TOL"


def default_tol():
    raw = os.environ.get(ENV_TOL)
    if raw is None:
        return 1e-10
    try:
        v = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{ENV_TOL}={raw!r} is not a number") from exc
    if not v > 0.0:
        raise ConfigError(f"{ENV_TOL} must be positive")
    return v


@dataclass
class RunConfig:
    command: str = ""
    # geometry / media
    chart: str = "sphere"            # sphere | plane | ellipsoid
    radius: float = 1.0
    axes: tuple = (1.0, 1.2, 0.8)
    eps: float = 1.0
    mu: float = 1.0
    # spectral point and truncation orders
    lam_re: float = 5.0
    lam_im: float = 2.0
    N: int = 4
    J: int = 1
    # sampling
    npoints: int = 1000
    seed: int = 0
    # second medium (te-scan, two-media identities)
    eps2: float = 2.0
    mu2: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    ell_max: int = 10
    re_max: float = 30.0
    region_C: float = 0.5
    certify: bool = False
    calibrate: bool = False
    # dtn-compare sweep
    h_list: tuple = (1 / 40, 1 / 80, 1 / 160, 1 / 320, 1 / 640, 1 / 1280)
    theta: float = 0.5
    # quantizer
    grid_n: int = 16
    thetas: tuple = (0.1, 0.2, 0.4, 0.8)
    # plumbing
    tol: float = field(default_factory=default_tol)
    output_dir: str = "."
    threads: int = 1

    @property
    def lam(self):
        return complex(self.lam_re, self.lam_im)

    def validate(self):
        positive = ["radius", "eps", "mu", "eps2", "mu2", "c1", "c2",
                    "re_max", "tol", "theta"]
        for name in positive:
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v == v and
                    abs(v) != float("inf") and v > 0.0):
                raise ConfigError(f"{name} must be positive and finite, got {v!r}")
        for name in ["N", "J", "npoints", "ell_max", "grid_n", "threads", "seed"]:
            v = getattr(self, name)
            if not (isinstance(v, int) and v >= 0):
                raise ConfigError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.N < 2:
            raise ConfigError("N must be at least 2")
        if self.chart not in ("sphere", "plane", "ellipsoid"):
            raise ConfigError(f"unknown chart {self.chart!r}")
        if self.region_C < 0.0:
            raise ConfigError("region_C must be nonnegative")
        if any(h <= 0.0 for h in self.h_list):
            raise ConfigError("h_list entries must be positive")
        if any(t <= 0.0 for t in self.thetas):
            raise ConfigError("thetas entries must be positive")
        if self.grid_n > 64:
            raise ConfigError("grid_n is capped at 64 (dense quantizer)")
        return self

    def items(self):
        """(key, value) pairs in declaration order, for the CSV header."""
        return [(f.name, getattr(self, f.name)) for f in fields(self)]


_TUPLE_KEYS = {"axes", "h_list", "thetas"}
_INT_KEYS = {"N", "J", "npoints", "seed", "ell_max", "grid_n", "threads"}
_BOOL_KEYS = {"certify", "calibrate"}
_STR_KEYS = {"command", "chart", "output_dir"}


def load_config(path, base=None):
    """Read an INI file ([run] section) into a RunConfig."""
    cfg = base or RunConfig()
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    if "run" not in parser:
        raise ConfigError(f"{path}: missing [run] section")
    known = {f.name.lower(): f.name for f in fields(RunConfig)}
    for key, raw in parser["run"].items():
        if key.lower() not in known:
            raise ConfigError(f"{path}: unknown key {key!r}")
        key = known[key.lower()]
        if key in _STR_KEYS:
            val = raw
        elif key in _BOOL_KEYS:
            val = raw.strip().lower() in ("1", "true", "yes", "on")
        elif key in _INT_KEYS:
            val = int(raw)
        elif key in _TUPLE_KEYS:
            val = tuple(float(t) for t in raw.replace(",", " ").split())
        else:
            val = float(raw)
        setattr(cfg, key, val)
    return cfg
