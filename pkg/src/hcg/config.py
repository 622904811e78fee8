"""Experiment configuration: a flat ``key = value`` text format.

Example::

    # two points of the exponential Walker metric
    metric.name = walker.exp
    metric.a = 1
    points.list = 0.1, 0.2, 0.3; 1.0, -0.7, 2.0
    k = 2
    expect = isometry

Grids use ``points.grid.<coordinate> = start:stop:count`` for every
coordinate of the metric's chart.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field

import numpy as np

from .tensors import DegenerateMetricError, DomainError, MetricField
from .zoo import ZOO, build

COMMANDS = ("analyze", "match", "vsi", "classify", "slice", "singer", "variable")
LEVEL_CAP = 2
DEFAULT_TOL = {"vsi": 1e-10}
DEFAULT_MATCH_TOL = 1e-7
_SCALAR_KEYS = {
    "command",
    "k",
    "tol",
    "match.starts",
    "expect",
    "expect.lambda",
    "expect.kappa",
    "slice.levels",
    "report.timing",
    "points.list",
    "metric.name",
}


class ConfigError(ValueError):
    """Invalid configuration; ``key``, ``line`` and ``column`` locate the problem."""

    def __init__(self, message: str, key: str = "", line: int = 0, column: int = 0):
        self.key, self.line, self.column = key, line, column
        where = f"line {line}, column {column}: " if line else ""
        tag = f"[{key}] " if key else ""
        super().__init__(f"{where}{tag}{message}")


@dataclass
class ExperimentConfig:
    command: str
    metric: str
    params: dict = field(default_factory=dict)
    points: list = field(default_factory=list)
    k: int = 2
    tol: float = DEFAULT_MATCH_TOL
    starts: int = 64
    expect: str | None = None
    expect_lambda: float | None = None
    expect_kappa: float | None = None
    slice_levels: list = field(default_factory=list)
    timing: bool = False

    def metric_field(self) -> MetricField:
        return build(self.metric, **self.params)

    def echo(self) -> dict:
        d = asdict(self)
        d["points"] = [list(p) for p in self.points]
        return d


def _number(text: str, key: str, line: int, col: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}", key, line, col) from None


def _parse_grid(text: str, key: str, line: int, col: int) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError("grid must be start:stop:count", key, line, col)
    start, stop = _number(parts[0], key, line, col), _number(parts[1], key, line, col)
    try:
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"grid count must be an integer, got {parts[2]!r}", key, line, col) from None
    if count < 1:
        raise ConfigError("grid count must be at least 1", key, line, col)
    return np.linspace(start, stop, count)


def parse_lines(text: str) -> list[tuple[str, str, int, int]]:
    """``(key, value, line, value_column)`` for each assignment; rejects duplicates."""
    out, seen = [], {}
    for n, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in raw:
            raise ConfigError("expected 'key = value'", "", n, len(raw) - len(raw.lstrip()) + 1)
        lhs, rhs = raw.split("=", 1)
        key = lhs.strip()
        value = rhs.split("#", 1)[0].strip()
        col = len(lhs) + 2 + (len(rhs) - len(rhs.lstrip()))
        if not key:
            raise ConfigError("missing key", "", n, 1)
        if key in seen:
            raise ConfigError(f"duplicate key (first set on line {seen[key]})", key, n, lhs.index(key) + 1)
        seen[key] = n
        out.append((key, value, n, col))
    return out


def validate_config(text: str, command: str | None = None) -> ExperimentConfig:
    """Parse and check a configuration; defaults are filled in.

    ``command`` (from the command line) must agree with a ``command`` key
    when both are present.
    """
    entries = parse_lines(text)
    values = {k: (v, ln, col) for k, v, ln, col in entries}
    for key, (_, ln, col) in values.items():
        if key in _SCALAR_KEYS or key.startswith("metric.") or key.startswith("points.grid."):
            continue
        raise ConfigError(f"unknown key; allowed: {', '.join(sorted(_SCALAR_KEYS))}, metric.<param>, points.grid.<coord>", key, ln, 1)

    cmd = command
    if "command" in values:
        v, ln, col = values["command"]
        if command is not None and v != command:
            raise ConfigError(f"config declares command {v!r} but {command!r} was requested", "command", ln, col)
        cmd = v
    if cmd is None:
        raise ConfigError("no command given", "command")
    if cmd not in COMMANDS:
        raise ConfigError(f"unknown command {cmd!r}; choose one of {', '.join(COMMANDS)}", "command")

    if "metric.name" not in values:
        raise ConfigError("metric.name is required", "metric.name")
    name, ln, col = values["metric.name"]
    if name not in ZOO:
        raise ConfigError(f"unknown metric {name!r}; available: {', '.join(sorted(ZOO))}", "metric.name", ln, col)
    entry = ZOO[name]
    params = {}
    for key, (v, ln, col) in values.items():
        if not key.startswith("metric.") or key == "metric.name":
            continue
        p = key[len("metric.") :]
        if p not in entry.params:
            allowed = ", ".join(sorted(entry.params)) or "none"
            raise ConfigError(f"unknown parameter {p!r} for {name}; allowed: {allowed}", key, ln, col)
        default = entry.params[p]
        if isinstance(default, str):
            params[p] = v
        elif isinstance(default, int) and not isinstance(default, bool):
            try:
                params[p] = int(v)
            except ValueError:
                raise ConfigError(f"expected an integer, got {v!r}", key, ln, col) from None
        else:
            params[p] = _number(v, key, ln, col)

    cfg = ExperimentConfig(command=cmd, metric=name, params=params)
    cfg.tol = DEFAULT_TOL.get(cmd, DEFAULT_MATCH_TOL)
    if "k" in values:
        v, ln, col = values["k"]
        try:
            cfg.k = int(v)
        except ValueError:
            raise ConfigError(f"k must be an integer, got {v!r}", "k", ln, col) from None
        check_level(cfg.k, ln, col)
    if "tol" in values:
        v, ln, col = values["tol"]
        cfg.tol = _number(v, "tol", ln, col)
        if not cfg.tol > 0:
            raise ConfigError("tol must be positive", "tol", ln, col)
    if "match.starts" in values:
        v, ln, col = values["match.starts"]
        try:
            cfg.starts = int(v)
        except ValueError:
            raise ConfigError(f"expected an integer, got {v!r}", "match.starts", ln, col) from None
        if cfg.starts < 1:
            raise ConfigError("match.starts must be at least 1", "match.starts", ln, col)
    if "expect" in values:
        cfg.expect = values["expect"][0]
    for key, attr in (("expect.lambda", "expect_lambda"), ("expect.kappa", "expect_kappa")):
        if key in values:
            v, ln, col = values[key]
            setattr(cfg, attr, _number(v, key, ln, col))
    if "slice.levels" in values:
        v, ln, col = values["slice.levels"]
        cfg.slice_levels = [_number(x.strip(), "slice.levels", ln, col) for x in v.split(",") if x.strip()]
        if any(c <= 0 for c in cfg.slice_levels):
            raise ConfigError("slice levels must be positive", "slice.levels", ln, col)
    if "report.timing" in values:
        v, ln, col = values["report.timing"]
        if v.lower() not in ("true", "false"):
            raise ConfigError("report.timing must be true or false", "report.timing", ln, col)
        cfg.timing = v.lower() == "true"

    cfg.points = _points(values, entry.coordinates)
    try:
        g = cfg.metric_field()
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc), "metric.name", *values["metric.name"][1:]) from None
    for i, p in enumerate(cfg.points):
        try:
            g.check_point(p)
        except (DomainError, DegenerateMetricError) as exc:
            key = "points.list" if "points.list" in values else "points.grid"
            ln = values["points.list"][1] if "points.list" in values else 0
            raise ConfigError(f"point {i} {list(p)} rejected: {exc}", key, ln, 1) from None
    if cmd in ("match", "variable") and len(cfg.points) < 2:
        raise ConfigError(f"{cmd} needs at least two points", "points.list")
    if cmd == "slice" and not cfg.slice_levels:
        raise ConfigError("slice needs slice.levels", "slice.levels")
    return cfg


def check_level(k: int, line: int = 0, col: int = 0) -> None:
    if not 0 <= k <= LEVEL_CAP:
        raise ConfigError(f"k = {k} rejected: level cap {LEVEL_CAP} in v1", "k", line, col)


def _points(values: dict, coords: tuple[str, ...]) -> list[tuple[float, ...]]:
    grid_keys = [k for k in values if k.startswith("points.grid.")]
    if "points.list" in values and grid_keys:
        raise ConfigError("give either points.list or points.grid.*, not both", "points.list", values["points.list"][1], 1)
    if "points.list" in values:
        v, ln, col = values["points.list"]
        pts = []
        for chunk in v.split(";"):
            if not chunk.strip():
                continue
            nums = [_number(x.strip(), "points.list", ln, col) for x in chunk.split(",")]
            if len(nums) != len(coords):
                raise ConfigError(f"each point needs {len(coords)} coordinates ({', '.join(coords)})", "points.list", ln, col)
            pts.append(tuple(nums))
        if not pts:
            raise ConfigError("points.list is empty", "points.list", ln, col)
        return pts
    if grid_keys:
        axes = {}
        for key in grid_keys:
            v, ln, col = values[key]
            c = key[len("points.grid.") :]
            if c not in coords:
                raise ConfigError(f"unknown coordinate {c!r}; chart coordinates: {', '.join(coords)}", key, ln, 1)
            axes[c] = _parse_grid(v, key, ln, col)
        missing = [c for c in coords if c not in axes]
        if missing:
            raise ConfigError(f"grid is missing coordinate(s) {', '.join(missing)}", "points.grid")
        return [tuple(float(x) for x in p) for p in itertools.product(*(axes[c] for c in coords))]
    raise ConfigError("no points given (points.list or points.grid.*)", "points.list")
