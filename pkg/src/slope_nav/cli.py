"""Scenario-driven command-line front end.

``slope-nav <convexity|indicatrix|speeds|geodesics|front> --config <path>
[--out <dir>] [--strict]`` loads a JSON scenario, runs the requested
computation and writes machine-readable curve data (CSV by default, JSON
arrays on request).  Numbers are written with 17 significant digits and LF
line endings so identical configs produce byte-identical files.

Exit codes: 0 success, 2 config error, 3 inadmissible convexity in strict
mode, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError, ConvexityError, SlopeNavError
from .geometry import ChartKind, SurfaceChart, gaussian_bell, inclined_plane
from .indicatrix import (
    comparison_profiles,
    frame_to_chart,
    implicit_residual,
    indicatrix_point,
    resultant_angle,
    speed_bifurcation,
    speed_extrema,
)
from .slope_metric import NavigationSetup, convexity_bound, scenario_gravity_bound
from .trajectories import (
    GeodesicState,
    IntegrationOptions,
    compute_time_front,
    initial_velocity,
    integrate_geodesic,
)
from .geometry import gravitational_wind_at
from .policy import DEFAULT_POLICY

EE_RESIDUAL_WARN = 1e-10
F_RESIDUAL_WARN = 1e-6


@dataclass
class ScenarioConfig:
    """Parsed scenario: surface, traction values, sweep and output settings."""

    surface: Optional[dict] = None
    gbar: Optional[float] = None
    eta_tilde: list[float] = field(default_factory=lambda: [0.0])
    origin: tuple[float, float] = (0.0, 0.0)
    wind_norm_override: Optional[float] = None
    directions: int = 360
    horizon: float = 1.0
    output: dict = field(default_factory=lambda: {"path": "out", "format": "csv"})
    strict_convexity: bool = False
    comparisons: bool = False

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        known = {
            "surface",
            "gbar",
            "eta_tilde",
            "origin",
            "wind_norm_override",
            "directions",
            "horizon",
            "output",
            "strict_convexity",
            "comparisons",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        cfg = cls()
        if "surface" in raw and raw["surface"] is not None:
            cfg.surface = dict(raw["surface"])
        if "gbar" in raw and raw["gbar"] is not None:
            cfg.gbar = float(raw["gbar"])
        if "eta_tilde" in raw:
            eta = raw["eta_tilde"]
            cfg.eta_tilde = [float(e) for e in (eta if isinstance(eta, list) else [eta])]
        if "origin" in raw:
            origin = raw["origin"]
            if len(origin) != 2:
                raise ConfigError("origin must be a pair of chart coordinates")
            cfg.origin = (float(origin[0]), float(origin[1]))
        if "wind_norm_override" in raw and raw["wind_norm_override"] is not None:
            cfg.wind_norm_override = float(raw["wind_norm_override"])
        if "directions" in raw:
            cfg.directions = int(raw["directions"])
        if "horizon" in raw:
            cfg.horizon = float(raw["horizon"])
        if "output" in raw:
            cfg.output = {"path": "out", "format": "csv", **raw["output"]}
        if "strict_convexity" in raw:
            cfg.strict_convexity = bool(raw["strict_convexity"])
        if "comparisons" in raw:
            cfg.comparisons = bool(raw["comparisons"])
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "gbar": self.gbar,
            "eta_tilde": list(self.eta_tilde),
            "origin": list(self.origin),
            "wind_norm_override": self.wind_norm_override,
            "directions": self.directions,
            "horizon": self.horizon,
            "output": dict(self.output),
            "strict_convexity": self.strict_convexity,
            "comparisons": self.comparisons,
        }

    def validate(self) -> None:
        for eta in self.eta_tilde:
            if not (0.0 <= eta <= 1.0):
                raise ConfigError(f"eta_tilde {eta} outside [0, 1]")
        if self.surface is not None:
            if self.gbar is None or not (self.gbar > 0.0):
                raise ConfigError("a surface scenario needs a positive gbar")
            if self.wind_norm_override is not None:
                raise ConfigError("give either surface+gbar or wind_norm_override, not both")
        if self.wind_norm_override is not None and self.wind_norm_override < 0.0:
            raise ConfigError("wind_norm_override must be nonnegative")
        if self.directions < 1:
            raise ConfigError("directions must be a positive integer")
        if self.horizon <= 0.0:
            raise ConfigError("horizon must be positive")
        if self.output.get("format", "csv") not in ("csv", "json"):
            raise ConfigError("output.format must be 'csv' or 'json'")

    # -- derived pieces --------------------------------------------------

    def chart(self) -> SurfaceChart:
        if self.surface is None:
            raise ConfigError("this command requires a surface")
        kind = self.surface.get("kind")
        params = self.surface.get("parameters", {})
        if kind == "inclined_plane":
            return inclined_plane(float(params.get("slope", 0.5)))
        if kind == "gaussian_bell":
            polar = params.get("chart", "polar") == "polar"
            return gaussian_bell(float(params.get("amplitude", 1.5)), polar=polar)
        raise ConfigError(f"unknown surface kind {kind!r}")

    def setups(self) -> list[NavigationSetup]:
        chart = self.chart()
        return [NavigationSetup(chart, self.gbar, eta) for eta in self.eta_tilde]

    def indicatrix_wind(self) -> float:
        if self.wind_norm_override is not None:
            return self.wind_norm_override
        if self.surface is None:
            raise ConfigError("indicatrix commands need surface+gbar or wind_norm_override")
        setup = NavigationSetup(self.chart(), self.gbar, self.eta_tilde[0])
        return gravitational_wind_at(setup, np.asarray(self.origin)).norm


def load_config(path: str) -> ScenarioConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return ScenarioConfig.from_dict(raw)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def write_table(path: Path, columns: list[str], rows: list[list], fmt: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        body = json.dumps(
            {"columns": columns, "rows": [[_fmt(v) for v in row] for row in rows]},
            indent=1,
        )
        path.write_text(body + "\n", newline="\n")
        return
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _eta_tag(eta: float) -> str:
    return format(eta, ".6g").replace(".", "p").replace("-", "m")


def _out_dir(config: ScenarioConfig, out_override: Optional[str]) -> Path:
    return Path(out_override) if out_override else Path(config.output.get("path", "out"))


def _surface_bound(config: ScenarioConfig, eta: float) -> Optional[float]:
    if config.surface is None:
        return None
    chart = config.chart()
    if chart.kind is ChartKind.CUSTOM:
        return None
    return scenario_gravity_bound(chart, eta)


def _admissible(config: ScenarioConfig, eta: float) -> bool:
    if config.surface is not None:
        bound = _surface_bound(config, eta)
        return bound is None or config.gbar < bound
    if config.wind_norm_override is not None:
        return config.wind_norm_override < convexity_bound(eta)
    return True


def _check_strict(config: ScenarioConfig, strict_flag: bool) -> None:
    if not (strict_flag or config.strict_convexity):
        return
    bad = [eta for eta in config.eta_tilde if not _admissible(config, eta)]
    if bad:
        raise ConvexityError(
            f"strict mode: traction values {bad} are inadmissible for this scenario"
        )


def cmd_convexity(config: ScenarioConfig, out_dir: Path, fmt: str) -> None:
    rows = []
    for eta in config.eta_tilde:
        bound = convexity_bound(eta)
        gravity_bound = _surface_bound(config, eta)
        admissible = _admissible(config, eta)
        rows.append(
            [
                eta,
                bound,
                gravity_bound if gravity_bound is not None else "",
                config.gbar if config.gbar is not None else "",
                1 if admissible else 0,
            ]
        )
    write_table(
        out_dir / f"convexity.{fmt}",
        ["eta_tilde", "wind_bound", "gravity_bound", "gbar", "admissible"],
        rows,
        fmt,
    )
    for row in rows:
        state = "admissible" if row[4] else "INADMISSIBLE"
        print(f"eta={row[0]:.6g}: wind bound {row[1]:.6g}", end="")
        if row[2] != "":
            print(f", gravity bound {row[2]:.6g}", end="")
        print(f" -> {state}")


def _frame_map(config: ScenarioConfig):
    """(X, Y) -> chart components; identity when no surface drives the run."""
    if config.surface is None:
        return lambda x, y: (x, y)
    chart = config.chart()
    origin = np.asarray(config.origin, dtype=float)

    def mapper(x, y):
        vec = frame_to_chart(chart, origin, x, y)
        return float(vec[0]), float(vec[1])

    return mapper


def _indicatrix_rows(eta: float, wind: float, n: int, mapper) -> list[list]:
    rows = []
    for i in range(n):
        theta = 2.0 * math.pi * i / n
        x, y = indicatrix_point(eta, wind, theta)
        y1, y2 = mapper(x, y)
        residual = implicit_residual(eta, wind, x, y)
        warn = 1 if abs(residual) > EE_RESIDUAL_WARN else 0
        rows.append(
            [theta, x, y, y1, y2, math.hypot(x, y), resultant_angle(x, y), residual, warn]
        )
    return rows


INDICATRIX_COLUMNS = [
    "theta",
    "X",
    "Y",
    "y1",
    "y2",
    "speed",
    "theta_resultant",
    "ee_residual",
    "warn",
]


def cmd_indicatrix(config: ScenarioConfig, out_dir: Path, fmt: str) -> None:
    wind = config.indicatrix_wind()
    mapper = _frame_map(config)
    for eta in config.eta_tilde:
        rows = _indicatrix_rows(eta, wind, config.directions, mapper)
        write_table(out_dir / f"indicatrix_eta_{_eta_tag(eta)}.{fmt}", INDICATRIX_COLUMNS, rows, fmt)
    if config.comparisons:
        profiles = comparison_profiles(wind, config.directions)
        for name in ("riemannian", "matsumoto"):
            rows = []
            for theta, x, y, speed, tres in profiles[name]:
                y1, y2 = mapper(x, y)
                rows.append([theta, x, y, y1, y2, speed, tres, 0.0, 0])
            write_table(out_dir / f"indicatrix_{name}.{fmt}", INDICATRIX_COLUMNS, rows, fmt)
    print(f"indicatrix curves written for wind force {wind:.6g} ({len(config.eta_tilde)} traction values)")


def cmd_speeds(config: ScenarioConfig, out_dir: Path, fmt: str) -> None:
    wind = config.indicatrix_wind()
    summary_rows = []
    for eta in config.eta_tilde:
        rows = []
        for i in range(config.directions):
            theta = 2.0 * math.pi * i / config.directions
            x, y = indicatrix_point(eta, wind, theta)
            rows.append([theta, math.hypot(x, y), resultant_angle(x, y)])
        write_table(
            out_dir / f"speeds_eta_{_eta_tag(eta)}.{fmt}",
            ["theta", "speed", "theta_resultant"],
            rows,
            fmt,
        )
        profile = speed_extrema(eta, wind)
        for kind, entries in (("max", profile.maxima), ("min", profile.minima)):
            for theta, speed in entries:
                summary_rows.append([eta, kind, theta, speed, profile.classification])
        print(f"eta={eta:.6g}: {profile.classification}", end="")
        if profile.maxima:
            t_max, s_max = max(profile.maxima, key=lambda item: item[1])
            print(f", top speed {s_max:.6g} at theta={math.degrees(t_max):.3f} deg", end="")
        print()
    try:
        eta_star = speed_bifurcation(wind)
        summary_rows.append([eta_star, "bifurcation", 0.0, 1.0 + wind - eta_star * wind, "critical"])
        print(f"speed-maximum bifurcation at eta={eta_star:.9g}")
    except ValueError:
        pass
    write_table(
        out_dir / f"speeds_extrema.{fmt}",
        ["eta_tilde", "kind", "theta", "speed", "classification"],
        summary_rows,
        fmt,
    )


GEODESIC_COLUMNS = ["theta", "t", "x1", "x2", "v1", "v2", "F_residual", "warn", "termination"]


def cmd_geodesics(config: ScenarioConfig, out_dir: Path, fmt: str) -> None:
    options = IntegrationOptions(enforce_convexity=config.strict_convexity)
    origin = np.asarray(config.origin, dtype=float)
    for setup in config.setups():
        rows = []
        for i in range(config.directions):
            theta = 2.0 * math.pi * i / config.directions
            try:
                velocity = initial_velocity(setup, origin, theta)
                start = GeodesicState(position=origin, velocity=velocity, time=0.0)
                trajectory = integrate_geodesic(setup, start, config.horizon, options)
            except SlopeNavError as exc:
                rows.append([theta, 0.0, origin[0], origin[1], "", "", "", 1, type(exc).__name__])
                continue
            for state, res in zip(trajectory.samples, trajectory.f_residuals):
                warn = 1 if not (abs(res) < F_RESIDUAL_WARN) else 0
                rows.append(
                    [
                        theta,
                        state.time,
                        state.position[0],
                        state.position[1],
                        state.velocity[0],
                        state.velocity[1],
                        res,
                        warn,
                        trajectory.termination,
                    ]
                )
        write_table(
            out_dir / f"geodesics_eta_{_eta_tag(setup.eta_tilde)}.{fmt}",
            GEODESIC_COLUMNS,
            rows,
            fmt,
        )
    print(
        f"geodesic fans written: {len(config.eta_tilde)} traction values x "
        f"{config.directions} directions, horizon {config.horizon:.6g}"
    )


def cmd_front(config: ScenarioConfig, out_dir: Path, fmt: str) -> None:
    options = IntegrationOptions(enforce_convexity=config.strict_convexity)
    origin = np.asarray(config.origin, dtype=float)
    for setup in config.setups():
        front = compute_time_front(setup, origin, config.horizon, config.directions, options)
        rows = []
        for pt in front.points:
            if pt.endpoint is None:
                rows.append([pt.theta, "", "", pt.termination])
            else:
                rows.append([pt.theta, pt.endpoint[0], pt.endpoint[1], pt.termination])
        write_table(
            out_dir / f"front_eta_{_eta_tag(setup.eta_tilde)}.{fmt}",
            ["theta", "x1", "x2", "termination"],
            rows,
            fmt,
        )
    print(
        f"time fronts written: {len(config.eta_tilde)} traction values x "
        f"{config.directions} directions, horizon {config.horizon:.6g}"
    )


COMMANDS = {
    "convexity": cmd_convexity,
    "indicatrix": cmd_indicatrix,
    "speeds": cmd_speeds,
    "geodesics": cmd_geodesics,
    "front": cmd_front,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slope-nav",
        description="Slippery-cross-slope navigation: indicatrices, speeds, geodesics, fronts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="path to the scenario JSON")
        cmd.add_argument("--out", default=None, help="output directory (overrides config)")
        cmd.add_argument(
            "--strict", action="store_true", help="refuse inadmissible convexity settings"
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.strict:
            config.strict_convexity = True
        _check_strict(config, args.strict)
        fmt = config.output.get("format", "csv")
        out_dir = _out_dir(config, args.out)
        COMMANDS[args.command](config, out_dir, fmt)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConvexityError as exc:
        print(f"inadmissible convexity: {exc}", file=sys.stderr)
        return 3
    except SlopeNavError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
