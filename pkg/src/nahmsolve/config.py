"""Run configuration read from JSON.

A minimal config only needs ``points``; everything else has a default::

    {
      "points": [[1, 0, 0], [-1, 0, 0]],
      "s_grid": {"start": 0.5, "stop": 5.0, "count": 10, "spacing": "linear"},
      "tolerances": {"nahm_residual": 1e-6},
      "seed": 0,
      "solver": "lagrange",
      "precision": "double",
      "outputs": {"path": "out.json", "format": "json"}
    }
"""

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .errors import ValidationError
from .geometry import MonopoleConfig

SOLVERS = ("direct", "lagrange", "both")
PRECISIONS = ("double", "extended", "auto")
FORMATS = ("json", "csv")
SPACINGS = ("linear", "log")


@dataclass(frozen=True)
class Tolerances:
    nahm_residual: float = 1e-6
    lax_residual: float = 1e-6
    reality: float = 1e-9
    spectrum: float = 1e-8
    degree: float = 1e-8
    gram: float = 1e-10
    spread: float = 1e-9
    solver_agreement: float = 1e-8

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValidationError("tolerance %s must be a positive number, got %r"
                                      % (f.name, v))

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValidationError("unknown tolerance fields: %s" % ", ".join(sorted(extra)))
        return cls(**d)


@dataclass(frozen=True)
class SGrid:
    start: float = 0.5
    stop: float = 5.0
    count: int = 10
    spacing: str = "linear"

    def __post_init__(self):
        if not isinstance(self.count, int) or self.count < 1:
            raise ValidationError("s_grid.count must be an integer >= 1")
        if not self.start > 0:
            raise ValidationError("s_grid.start must be > 0")
        if self.count > 1 and not self.stop >= self.start:
            raise ValidationError("s_grid.stop must be >= s_grid.start")
        if self.spacing not in SPACINGS:
            raise ValidationError("s_grid.spacing must be one of %s" % (SPACINGS,))

    def values(self):
        if self.count == 1:
            return np.array([float(self.start)])
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    @classmethod
    def parse(cls, text):
        """``a:b:k`` with optional ``:log``."""
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ValidationError("--s-grid expects a:b:k[:log], got %r" % text)
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ValidationError("--s-grid expects numbers, got %r" % text) from None
        spacing = parts[3] if len(parts) == 4 else "linear"
        return cls(start, stop, count, spacing)


@dataclass(frozen=True)
class Outputs:
    path: str = None
    format: str = "json"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValidationError("outputs.format must be one of %s" % (FORMATS,))


@dataclass(frozen=True)
class RunConfig:
    points: tuple
    s_grid: SGrid = field(default_factory=SGrid)
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    solver: str = "lagrange"
    precision: str = "double"
    outputs: Outputs = field(default_factory=Outputs)
    workers: int = 1

    def __post_init__(self):
        if self.solver not in SOLVERS:
            raise ValidationError("solver must be one of %s" % (SOLVERS,))
        if self.precision not in PRECISIONS:
            raise ValidationError("precision must be one of %s" % (PRECISIONS,))
        if not isinstance(self.seed, int):
            raise ValidationError("seed must be an integer")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ValidationError("workers must be an integer >= 1")

    def monopoles(self):
        return MonopoleConfig(np.array(self.points, dtype=float))

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ValidationError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValidationError("unknown config fields: %s" % ", ".join(sorted(extra)))
        if "points" not in d:
            raise ValidationError("config needs 'points'")
        try:
            pts = np.array(d["points"], dtype=float)
        except (TypeError, ValueError):
            raise ValidationError("points must be a list of 3-vectors") from None
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) == 0:
            raise ValidationError("points must be a non-empty list of 3-vectors")
        MonopoleConfig(pts)  # distinctness
        kw = dict(d)
        kw["points"] = tuple(tuple(float(v) for v in p) for p in pts)
        try:
            if "s_grid" in d:
                kw["s_grid"] = SGrid(**d["s_grid"])
            if "tolerances" in d:
                kw["tolerances"] = Tolerances.from_dict(d["tolerances"])
            if "outputs" in d:
                kw["outputs"] = Outputs(**d["outputs"])
        except TypeError as exc:
            raise ValidationError(str(exc)) from None
        return cls(**kw)

    def to_dict(self):
        return asdict(self)

    def with_overrides(self, s=None, s_grid=None, seed=None, out=None, fmt=None):
        cfg = self
        if s_grid is not None:
            cfg = replace(cfg, s_grid=SGrid.parse(s_grid))
        if s is not None:
            cfg = replace(cfg, s_grid=SGrid(float(s), float(s), 1))
        if seed is not None:
            cfg = replace(cfg, seed=int(seed))
        if out is not None or fmt is not None:
            cfg = replace(cfg, outputs=Outputs(out if out is not None else cfg.outputs.path,
                                               fmt if fmt is not None else cfg.outputs.format))
        return cfg


def load(path):
    """Read and validate a config file. OSError propagates for I/O failures."""
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("config is not valid JSON: %s" % exc) from None
    return RunConfig.from_dict(data)
