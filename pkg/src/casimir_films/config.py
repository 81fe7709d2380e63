"""Run configuration: sectioned ``key = value`` text files.

Example::

    [run]
    label = passivated-like

    [separation]
    min_nm = 1
    max_nm = 1000
    points = 31
    spacing = log

    [film]
    thickness_nm = 1.9
    oscillators.xx = 11.1 3.55 0
    oscillators.yy = 11.1 3.55 0
    oscillators.zz = 10.6 3.6 0

Oscillators are ``plasma resonance damping`` triples in eV separated by
``;``. ``oscillators`` / ``eps_inf`` without an axis suffix apply to all
three axes. Instead of oscillators a film may name a ``data`` CSV file
(relative paths resolve against the config file). A ``[film2]`` section
describes the upper film; without it both films are identical.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dielectric import (
    AbsorptionSpectrum,
    DielectricError,
    DielectricTensorModel,
    Oscillator,
    OscillatorSet,
    eval_tensor,
    london_transform,
)
from .io import load_spectrum_csv
from .quadrature import QuadratureConfig
from .reflection import HALF_SPACE, Film

__all__ = [
    "ConfigError",
    "SeparationGrid",
    "FilmSpec",
    "RunConfig",
    "parse_config",
    "load_config",
    "render_config",
    "DEFAULT_LONDON_GRID",
]

AXES = ("xx", "yy", "zz")

#: (xi_min, xi_max, points) of the log grid used for absorption data; xi = 0 is prepended.
DEFAULT_LONDON_GRID = (1e-3, 1e3, 121)


class ConfigError(ValueError):
    """Syntax or validation problem; ``key`` names the offending entry."""

    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class SeparationGrid:
    min_nm: float = 1.0
    max_nm: float = 1000.0
    points: int = 31
    spacing: str = "log"

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.min_nm])
        if self.spacing == "log":
            return np.geomspace(self.min_nm, self.max_nm, self.points)
        return np.linspace(self.min_nm, self.max_nm, self.points)


@dataclass(frozen=True)
class FilmSpec:
    thickness: float
    tensor: DielectricTensorModel
    orientation: float = 0.0
    match_thickness: bool = False
    data: str | None = None
    london_grid: tuple | None = None

    def build(self, thickness=None) -> Film:
        return Film(self.thickness if thickness is None else thickness, self.tensor, self.orientation)


@dataclass(frozen=True)
class RunConfig:
    film_1: FilmSpec
    film_2: FilmSpec | None = None
    grid: SeparationGrid = field(default_factory=SeparationGrid)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    label: str = "run"
    mode: str = "sweep"
    workers: int = 1
    output: str | None = None

    @property
    def films(self):
        spec_2 = self.film_2 or self.film_1
        return self.film_1.build(), spec_2.build()

    @property
    def output_name(self) -> str:
        return self.output or self.label


_SECTION_KEYS = {
    "run": {"label", "mode", "workers", "output"},
    "separation": {"min_nm", "max_nm", "points", "spacing"},
    "quadrature": {"rel_tol", "abs_floor", "max_depth", "max_panels", "rule", "inner_factor"},
}
_FILM_KEYS = (
    {"thickness_nm", "orientation_rad", "match_thickness", "data", "london_grid", "oscillators", "eps_inf"}
    | {f"oscillators.{a}" for a in AXES}
    | {f"eps_inf.{a}" for a in AXES}
)


def _number(section, key, text, kind=float):
    name = f"{section}.{key}"
    try:
        value = kind(text)
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {text!r} as {kind.__name__}", key=name) from None
    if kind is float and math.isnan(value):
        raise ConfigError(f"{name}: NaN not allowed", key=name)
    return value


def _parse_oscillators(section, key, text):
    name = f"{section}.{key}"
    oscillators = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split()
        if len(parts) not in (2, 3):
            raise ConfigError(f"{name}: oscillator needs 'plasma resonance [damping]', got {chunk!r}", key=name)
        values = [_number(section, key, p) for p in parts]
        try:
            oscillators.append(Oscillator(*values))
        except DielectricError as exc:
            raise ConfigError(f"{name}: {exc}", key=name) from None
    return tuple(oscillators)


def _parse_bool(section, key, text):
    lowered = text.strip().lower()
    if lowered in ("yes", "true", "on", "1"):
        return True
    if lowered in ("no", "false", "off", "0"):
        return False
    raise ConfigError(f"{section}.{key}: expected yes/no, got {text!r}", key=f"{section}.{key}")


def _parse_film(name, items, base_dir):
    unknown = set(items) - _FILM_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"{name}.{key}: unknown key", key=f"{name}.{key}")
    if "thickness_nm" not in items:
        raise ConfigError(f"{name}.thickness_nm: missing", key=f"{name}.thickness_nm")
    text = items["thickness_nm"].strip().lower()
    if text in ("half-space", "halfspace", "inf"):
        thickness = HALF_SPACE
    else:
        thickness = _number(name, "thickness_nm", text)
        if not thickness > 0 or math.isinf(thickness):
            raise ConfigError("thickness must be positive", key=f"{name}.thickness_nm")
    orientation = _number(name, "orientation_rad", items.get("orientation_rad", "0"))
    if not math.isfinite(orientation):
        raise ConfigError("orientation must be finite", key=f"{name}.orientation_rad")
    orientation %= 2 * math.pi
    match = _parse_bool(name, "match_thickness", items.get("match_thickness", "no"))

    osc_keys = [k for k in items if k.startswith("oscillators") or k.startswith("eps_inf")]
    data = items.get("data")
    london_grid = None
    if data is not None and osc_keys:
        raise ConfigError(f"{name}: give either 'data' or oscillators, not both", key=f"{name}.data")
    if "london_grid" in items:
        parts = items["london_grid"].split()
        if len(parts) != 3:
            raise ConfigError(f"{name}.london_grid: expected 'xi_min xi_max points'", key=f"{name}.london_grid")
        london_grid = (
            _number(name, "london_grid", parts[0]),
            _number(name, "london_grid", parts[1]),
            _number(name, "london_grid", parts[2], int),
        )
        if not 0 < london_grid[0] < london_grid[1] or london_grid[2] < 2:
            raise ConfigError(f"{name}.london_grid: need 0 < min < max and >= 2 points", key=f"{name}.london_grid")

    if data is not None:
        path = Path(data)
        if not path.is_absolute():
            path = (base_dir / path).resolve()
        if not path.is_file():
            raise ConfigError(f"{name}.data: file not found: {path}", key=f"{name}.data")
        data = str(path)
        try:
            axes = load_spectrum_csv(path)
        except DielectricError as exc:
            raise ConfigError(f"{name}.data: {exc}", key=f"{name}.data") from None
        if isinstance(axes[0], AbsorptionSpectrum):
            lo, hi, n = london_grid or DEFAULT_LONDON_GRID
            xi_grid = np.concatenate([[0.0], np.geomspace(lo, hi, n)])
            transformed = {}
            for spectrum in axes:
                if spectrum not in transformed:
                    transformed[spectrum] = london_transform(spectrum, xi_grid)
            axes = tuple(transformed[spectrum] for spectrum in axes)
        tensor = DielectricTensorModel(*axes)
    else:
        if not osc_keys:
            raise ConfigError(f"{name}: no dielectric source (oscillators or data)", key=f"{name}.oscillators")
        sets = []
        for axis in AXES:
            osc_text = items.get(f"oscillators.{axis}", items.get("oscillators"))
            if osc_text is None:
                raise ConfigError(f"{name}.oscillators.{axis}: missing", key=f"{name}.oscillators.{axis}")
            eps_inf = _number(name, f"eps_inf.{axis}", items.get(f"eps_inf.{axis}", items.get("eps_inf", "1")))
            try:
                sets.append(OscillatorSet(_parse_oscillators(name, f"oscillators.{axis}", osc_text), eps_inf))
            except DielectricError as exc:
                raise ConfigError(f"{name}.eps_inf.{axis}: {exc}", key=f"{name}.eps_inf.{axis}") from None
        # share equal axis models so xx/yy evaluate bit-identically
        if sets[1] == sets[0]:
            sets[1] = sets[0]
        if sets[2] == sets[0]:
            sets[2] = sets[0]
        tensor = DielectricTensorModel(*sets)

    static = eval_tensor(tensor, 0.0)
    if any(not (v >= 1) for v in static):
        raise ConfigError(f"{name}: eps(xi = 0) must be >= 1 on every axis", key=name)
    return FilmSpec(thickness, tensor, orientation, match, data, london_grid)


def parse_config(text: str, base_dir=".") -> RunConfig:
    """Parse and validate a run configuration.

    Raises
    ------
    ConfigError
        With ``line`` set for syntax errors and ``key`` naming the
        offending entry for validation errors.
    """
    parser = configparser.ConfigParser(
        interpolation=None, comment_prefixes=("#", ";"), inline_comment_prefixes=("#",),
        default_section="__defaults__",
    )
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError(f"line {exc.lineno}: expected a [section] header", line=exc.lineno) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ConfigError(f"line {exc.lineno}: {exc.message}", line=exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError(f"line {lineno}: malformed entry {exc.errors[0][1]!r}", line=lineno) from None
    base_dir = Path(base_dir)

    known = set(_SECTION_KEYS) | {"film", "film2"}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"[{section}]: unknown section", key=section)
        if section in _SECTION_KEYS:
            unknown = set(parser[section]) - _SECTION_KEYS[section]
            if unknown:
                key = f"{section}.{sorted(unknown)[0]}"
                raise ConfigError(f"{key}: unknown key", key=key)
    for required in ("separation", "film"):
        if not parser.has_section(required):
            raise ConfigError(f"missing [{required}] section", key=required)

    sep = parser["separation"]
    grid = SeparationGrid(
        min_nm=_number("separation", "min_nm", sep.get("min_nm", "1")),
        max_nm=_number("separation", "max_nm", sep.get("max_nm", "1000")),
        points=_number("separation", "points", sep.get("points", "31"), int),
        spacing=sep.get("spacing", "log").strip().lower(),
    )
    if not grid.min_nm > 0 or math.isinf(grid.min_nm):
        raise ConfigError("separation.min_nm must be positive", key="separation.min_nm")
    if grid.points < 1:
        raise ConfigError("separation.points must be >= 1", key="separation.points")
    if grid.points > 1 and not grid.max_nm > grid.min_nm:
        raise ConfigError("separation.max_nm must exceed min_nm", key="separation.max_nm")
    if math.isinf(grid.max_nm):
        raise ConfigError("separation.max_nm must be finite", key="separation.max_nm")
    if grid.spacing not in ("log", "linear"):
        raise ConfigError("separation.spacing must be 'log' or 'linear'", key="separation.spacing")

    quad_items = parser["quadrature"] if parser.has_section("quadrature") else {}
    defaults = QuadratureConfig()
    try:
        quadrature = QuadratureConfig(
            rel_tol=_number("quadrature", "rel_tol", quad_items.get("rel_tol", repr(defaults.rel_tol))),
            abs_floor=_number("quadrature", "abs_floor", quad_items.get("abs_floor", repr(defaults.abs_floor))),
            max_depth=_number("quadrature", "max_depth", quad_items.get("max_depth", str(defaults.max_depth)), int),
            max_panels=_number("quadrature", "max_panels",
                               quad_items.get("max_panels", str(defaults.max_panels)), int),
            rule=_number("quadrature", "rule", quad_items.get("rule", str(defaults.rule)), int),
            inner_factor=_number("quadrature", "inner_factor",
                                 quad_items.get("inner_factor", repr(defaults.inner_factor))),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"quadrature: {exc}", key="quadrature") from None

    run = parser["run"] if parser.has_section("run") else {}
    mode = run.get("mode", "sweep").strip().lower()
    if mode not in ("sweep", "ratio"):
        raise ConfigError("run.mode must be 'sweep' or 'ratio'", key="run.mode")
    workers = _number("run", "workers", run.get("workers", "1"), int)
    if workers < 1:
        raise ConfigError("run.workers must be >= 1", key="run.workers")

    film_1 = _parse_film("film", dict(parser["film"]), base_dir)
    film_2 = _parse_film("film2", dict(parser["film2"]), base_dir) if parser.has_section("film2") else None
    return RunConfig(
        film_1=film_1,
        film_2=film_2,
        grid=grid,
        quadrature=quadrature,
        label=run.get("label", "run").strip(),
        mode=mode,
        workers=workers,
        output=run.get("output", None),
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}", key="config")
    return parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent)


def _render_film(section, spec: FilmSpec):
    lines = [f"[{section}]"]
    lines.append("thickness_nm = " + ("half-space" if spec.thickness == HALF_SPACE else repr(spec.thickness)))
    lines.append(f"orientation_rad = {spec.orientation!r}")
    if spec.match_thickness:
        lines.append("match_thickness = yes")
    if spec.london_grid is not None:
        lo, hi, n = spec.london_grid
        lines.append(f"london_grid = {lo!r} {hi!r} {n}")
    if spec.data is not None:
        lines.append(f"data = {spec.data}")
        return lines
    for axis in AXES:
        model = getattr(spec.tensor, axis)
        triples = "; ".join(f"{o.plasma!r} {o.resonance!r} {o.damping!r}" for o in model.oscillators)
        lines.append(f"oscillators.{axis} = {triples}")
        lines.append(f"eps_inf.{axis} = {model.epsilon_infinity!r}")
    return lines


def render_config(config: RunConfig) -> str:
    """Inverse of :func:`parse_config` (data paths are written absolute)."""
    q = config.quadrature
    g = config.grid
    lines = ["[run]", f"label = {config.label}", f"mode = {config.mode}", f"workers = {config.workers}"]
    if config.output is not None:
        lines.append(f"output = {config.output}")
    lines += [
        "",
        "[separation]",
        f"min_nm = {g.min_nm!r}",
        f"max_nm = {g.max_nm!r}",
        f"points = {g.points}",
        f"spacing = {g.spacing}",
        "",
        "[quadrature]",
        f"rel_tol = {q.rel_tol!r}",
        f"abs_floor = {q.abs_floor!r}",
        f"max_depth = {q.max_depth}",
        f"max_panels = {q.max_panels}",
        f"rule = {q.rule}",
        f"inner_factor = {q.inner_factor!r}",
        "",
    ]
    lines += _render_film("film", config.film_1)
    if config.film_2 is not None:
        lines += [""] + _render_film("film2", config.film_2)
    return "\n".join(lines) + "\n"
