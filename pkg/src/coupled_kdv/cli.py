"""Command-line front end.

Exit codes: 0 ok, 1 failed check, 2 configuration error, 3 blow-up,
4 singular analytic family on the requested domain.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import yaml

from .darboux import (
    AnalyticFamily,
    SingularPointError,
    SpectralParams,
    WaveConstants,
    compound_dt,
    first_transform_fields,
    reduced_solution,
    two_component,
)
from .scheme import (
    Boundary,
    ConfigError,
    GridSpec,
    RealityError,
    TimeSpec,
    check_nonsingular,
    evaluate_family,
    run,
    sample_initial,
    write_metadata,
    write_snapshot_csv,
    FieldState,
)
from .stability import DEFAULT_BUDGET, BlowupMonitor, advise_tau, growth_exponent
from .system_model import PRESETS, SystemSpec, SystemSpecError, preset
from .verify import (
    ConvergenceError,
    conservation_series,
    convergence_study,
    percentage_error,
    write_conservation_csv,
    write_convergence_csv,
    write_error_csv,
    write_profile_csv,
)

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_SINGULAR = 0, 1, 2, 3, 4

COMMANDS = ("presets", "analytic", "simulate", "convergence", "stability", "dt-check")
TOP_KEYS = {"command", "system", "family", "grid", "time", "boundary", "budget", "out",
            "levels", "t", "dt_points", "workers"}
FAMILY_KEYS = {"kind", "a", "r", "lambda", "constants"}
GRID_KEYS = {"x_min", "x_max", "h", "points"}
TIME_KEYS = {"tau", "t_end", "snapshots"}
DOMAIN_THRESHOLD = 1e-8


class ConfigFileError(ConfigError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


@dataclass
class RunConfig:
    command: str
    system: SystemSpec | None = None
    system_name: str | None = None
    family: AnalyticFamily | None = None
    x_min: float | None = None
    x_max: float | None = None
    h: float | None = None
    points: int | None = None
    tau: float | str = "auto"
    t_end: float = 0.02
    snapshots: int = 1
    boundary: Boundary = Boundary.ZERO_GHOST
    budget: float = DEFAULT_BUDGET
    out: str | None = None
    levels: list[float] = field(default_factory=list)
    t: float = 0.0
    dt_points: int = 100
    workers: int = 1

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "system": self.system_name if self.system_name else (self.system.to_dict() if self.system else None),
            "family": self.family.to_dict() if self.family else None,
            "grid": {"x_min": self.x_min, "x_max": self.x_max, "h": self.h, "points": self.points},
            "time": {"tau": self.tau, "t_end": self.t_end, "snapshots": self.snapshots},
            "boundary": self.boundary.value,
            "budget": self.budget,
            "out": self.out,
            "levels": self.levels,
            "t": self.t,
            "dt_points": self.dt_points,
        }


# --- parsing ----------------------------------------------------------------

def _key_lines(node, path=()) -> dict[tuple, int]:
    """Map key paths of a composed YAML document to 1-based line numbers."""
    lines = {}
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            key = path + (k.value,)
            lines[key] = k.start_mark.line + 1
            lines.update(_key_lines(v, key))
    return lines


def _complex(value, what: str, line=None) -> complex:
    try:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, str):
            return complex(value.replace(" ", ""))
        return complex(value)
    except (TypeError, ValueError):
        raise ConfigFileError(f"{what} must be a number or a [re, im] pair, got {value!r}", line) from None


def _number(value, what: str, line=None, positive=False) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigFileError(f"{what} must be a real number, got {value!r}", line) from None
    if positive and not out > 0:
        raise ConfigFileError(f"{what} must be positive, got {value!r}", line)
    return out


def _family(data, lines) -> AnalyticFamily:
    ln = lambda *k: lines.get(("family",) + k, lines.get(("family",)))  # noqa: E731
    if not isinstance(data, dict):
        raise ConfigFileError("family must be a mapping", ln())
    unknown = set(data) - FAMILY_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigFileError(f"unknown family key {key!r}", ln(key))
    kind = data.get("kind", "r")
    a = _complex(data["a"], "family.a", ln("a")) if data.get("a") is not None else None
    lam = _complex(data["lambda"], "family.lambda", ln("lambda")) if data.get("lambda") is not None else None
    consts = data.get("constants")
    if consts is None:
        wc = WaveConstants()
    elif isinstance(consts, dict):
        extra = set(consts) - {"c1", "c2", "d1", "d2"}
        if extra:
            raise ConfigFileError(f"unknown constant {sorted(extra)[0]!r}", ln("constants"))
        wc = WaveConstants(**{k: _complex(v, f"constants.{k}", ln("constants")) for k, v in consts.items()})
    else:
        vals = consts.split(",") if isinstance(consts, str) else list(consts)
        if len(vals) != 4:
            raise ConfigFileError("constants need four values c1,c2,d1,d2", ln("constants"))
        wc = WaveConstants(*(_complex(v, "constants", ln("constants")) for v in vals))
    if a is None and lam is None:
        a = 1.0
    r = _number(data.get("r", 0.5), "family.r", ln("r"))
    try:
        return AnalyticFamily(kind, a=a, r=r, lam=lam, consts=wc)
    except ValueError as exc:
        raise ConfigFileError(str(exc), ln("kind")) from None


def build_config(data: dict, lines: dict | None = None) -> RunConfig:
    """Validate a plain mapping into a RunConfig; errors carry line numbers when known."""
    lines = lines or {}
    ln = lambda *k: lines.get(k)  # noqa: E731
    if not isinstance(data, dict):
        raise ConfigFileError("configuration must be a mapping")
    unknown = set(data) - TOP_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigFileError(f"unknown key {key!r}", ln(key))
    command = data.get("command")
    if command not in COMMANDS:
        raise ConfigFileError(f"command must be one of {COMMANDS}, got {command!r}", ln("command"))
    cfg = RunConfig(command=command)

    system = data.get("system")
    if isinstance(system, str):
        if system not in PRESETS:
            raise ConfigFileError(f"unknown preset {system!r}; choose from {sorted(PRESETS)}", ln("system"))
        cfg.system, cfg.system_name = preset(system), system
    elif isinstance(system, dict):
        try:
            cfg.system = SystemSpec.from_dict(system)
        except SystemSpecError as exc:
            raise ConfigFileError(str(exc), ln("system")) from None
    elif system is not None:
        raise ConfigFileError("system must be a preset name or a mapping", ln("system"))

    if data.get("family") is not None:
        cfg.family = _family(data["family"], lines)

    grid = data.get("grid") or {}
    if not isinstance(grid, dict) or set(grid) - GRID_KEYS:
        bad = sorted(set(grid) - GRID_KEYS)[0] if isinstance(grid, dict) else None
        raise ConfigFileError(f"unknown grid key {bad!r}", ln("grid", bad) or ln("grid"))
    for key in ("x_min", "x_max"):
        if grid.get(key) is not None:
            setattr(cfg, key, _number(grid[key], f"grid.{key}", ln("grid", key)))
    if grid.get("h") is not None:
        cfg.h = _number(grid["h"], "grid.h", ln("grid", "h"), positive=True)
    if grid.get("points") is not None:
        cfg.points = int(_number(grid["points"], "grid.points", ln("grid", "points"), positive=True))

    time = data.get("time") or {}
    if not isinstance(time, dict) or set(time) - TIME_KEYS:
        bad = sorted(set(time) - TIME_KEYS)[0] if isinstance(time, dict) else None
        raise ConfigFileError(f"unknown time key {bad!r}", ln("time", bad) or ln("time"))
    tau = time.get("tau", "auto")
    cfg.tau = "auto" if tau == "auto" else _number(tau, "time.tau", ln("time", "tau"), positive=True)
    if time.get("t_end") is not None:
        cfg.t_end = _number(time["t_end"], "time.t_end", ln("time", "t_end"))
        if cfg.t_end < 0:
            raise ConfigFileError("time.t_end must be non-negative", ln("time", "t_end"))
    if time.get("snapshots") is not None:
        cfg.snapshots = int(_number(time["snapshots"], "time.snapshots", ln("time", "snapshots"), positive=True))

    try:
        cfg.boundary = Boundary.parse(data.get("boundary", "zero_ghost"))
    except ConfigError as exc:
        raise ConfigFileError(str(exc), ln("boundary")) from None
    if data.get("budget") is not None:
        cfg.budget = _number(data["budget"], "budget", ln("budget"), positive=True)
    cfg.out = data.get("out")
    if data.get("levels") is not None:
        lv = data["levels"]
        lv = lv.split(",") if isinstance(lv, str) else lv
        cfg.levels = [_number(v, "levels", ln("levels"), positive=True) for v in lv]
    if data.get("t") is not None:
        cfg.t = _number(data["t"], "t", ln("t"))
    if data.get("dt_points") is not None:
        cfg.dt_points = int(_number(data["dt_points"], "dt_points", ln("dt_points"), positive=True))
    if data.get("workers") is not None:
        cfg.workers = int(_number(data["workers"], "workers", ln("workers"), positive=True))

    if command in ("simulate", "convergence", "stability") and cfg.system is None:
        raise ConfigFileError(f"command {command!r} needs a system", ln("command"))
    if command in ("analytic", "simulate", "convergence", "stability") and cfg.family is None:
        raise ConfigFileError(f"command {command!r} needs a family", ln("command"))
    if command == "convergence" and len(cfg.levels) < 2:
        raise ConfigFileError("convergence needs at least two levels", ln("levels") or ln("command"))
    return cfg


def load_text(text: str) -> tuple[dict, dict]:
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigFileError(f"malformed configuration: {getattr(exc, 'problem', exc)}",
                              mark.line + 1 if mark else None) from None
    if data is None:
        data = {}
    return data, _key_lines(node) if node is not None else {}


def parse_config(text: str) -> RunConfig:
    data, lines = load_text(text)
    return build_config(data, lines)


# --- execution --------------------------------------------------------------

def _auto_domain(family: AnalyticFamily, t: float, threshold: float = DOMAIN_THRESHOLD) -> tuple[float, float]:
    """Smallest symmetric integer half-width beyond which every field is below ``threshold``."""
    scale = abs(complex(family.params.a).real) or 1.0
    xs = np.linspace(-60.0 / scale, 60.0 / scale, 24001)
    with np.errstate(all="ignore"):
        try:
            vals = family.evaluate(xs, np.full_like(xs, t))
        except SingularPointError:
            return -10.0, 10.0
    mag = np.max([np.abs(v) for v in vals.values()], axis=0)
    big = np.nonzero(~(mag < threshold))[0]
    if big.size == 0:
        return -1.0, 1.0
    half = max(abs(xs[big[0]]), abs(xs[big[-1]]))
    half = float(np.ceil(half))
    return -half, half


def _grid(cfg: RunConfig, t: float) -> GridSpec:
    x_min, x_max = cfg.x_min, cfg.x_max
    if x_min is None or x_max is None:
        lo, hi = _auto_domain(cfg.family, t)
        x_min = lo if x_min is None else x_min
        x_max = hi if x_max is None else x_max
    if cfg.points is not None:
        return GridSpec(x_min, x_max, cfg.points)
    return GridSpec.from_step(x_min, x_max, cfg.h if cfg.h is not None else 0.1)


def _prefix(cfg: RunConfig) -> Path | None:
    if not cfg.out:
        return None
    p = Path(cfg.out)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _out(prefix: Path, suffix: str) -> Path:
    return prefix.with_name(prefix.name + suffix)


def _meta(prefix: Path, cfg: RunConfig, files: list[Path], extra: dict) -> None:
    write_metadata(_out(prefix, ".meta.json"), {
        "config": cfg.to_dict(),
        "outputs": [f.name for f in files],
        **extra,
    })


def cmd_presets(cfg: RunConfig) -> int:
    for name in sorted(PRESETS):
        spec = preset(name)
        print(f"{name}: N={spec.n_components} labels={','.join(spec.labels)} "
              f"d={list(spec.d)} nonzero g={len(spec.nonzero())}")
    return EXIT_OK


def cmd_analytic(cfg: RunConfig) -> int:
    grid = _grid(cfg, cfg.t)
    x = grid.x
    try:
        check_nonsingular(cfg.family, x, cfg.t)
        vals = cfg.family.evaluate(x, np.full_like(x, cfg.t))
    except SingularPointError as exc:
        print(f"singular family on [{grid.x_min:g}, {grid.x_max:g}] at t={cfg.t:g}: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    real = all(np.max(np.abs(v.imag) / np.maximum(1.0, np.abs(v))) <= 1e-9 for v in vals.values())
    cols = {}
    for lab, v in vals.items():
        if real:
            cols[lab] = v.real
        else:
            cols[f"{lab}_re"], cols[f"{lab}_im"] = v.real, v.imag
    print(f"{cfg.family.kind} family at t={cfg.t:g} on [{grid.x_min:g}, {grid.x_max:g}], "
          f"{grid.points} points, real={real}")
    for lab, v in vals.items():
        print(f"  max|{lab}| = {np.max(np.abs(v)):.6g}")
    prefix = _prefix(cfg)
    if prefix:
        f = write_profile_csv(_out(prefix, "_profile.csv"), x, cols)
        _meta(prefix, cfg, [f], {"real": real})
    return EXIT_OK


def _initial(cfg: RunConfig):
    grid = _grid(cfg, 0.0)
    return grid, sample_initial(cfg.family, cfg.system, grid, 0.0)


def cmd_simulate(cfg: RunConfig) -> int:
    spec = cfg.system
    grid, init = _initial(cfg)
    tau = advise_tau(spec, init, budget=cfg.budget, boundary=cfg.boundary) if cfg.tau == "auto" else cfg.tau
    rep = growth_exponent(spec, init, tau, budget=cfg.budget, boundary=cfg.boundary)
    ts = TimeSpec.until(cfg.t_end, tau)
    stride = max(-(-ts.steps // cfg.snapshots), 1)
    monitor = BlowupMonitor()
    traj = run(spec, init, ts, cfg.boundary, monitors=[monitor], snapshot_every=stride)

    errors, exact_states = [], []
    for snap in traj.snapshots:
        try:
            exact = FieldState(evaluate_family(cfg.family, spec, grid, snap.time), snap.time, grid)
        except (SingularPointError, RealityError):
            continue
        exact_states.append(exact)
        errors.append(percentage_error(snap, exact))
    cons = conservation_series(traj)

    print(f"simulate {cfg.system_name or 'custom'} / {cfg.family.kind}: h={grid.h:g} "
          f"[{grid.x_min:g}, {grid.x_max:g}] tau={tau:.6g} steps={ts.steps} boundary={cfg.boundary.value}")
    print(f"  stability: a={rep.a_exponent:.6g} floor={rep.floor:.6g} dispersive={rep.dispersive_part:.6g} "
          f"budget={cfg.budget:g} stable={rep.stable}")
    if errors:
        last = errors[-1]
        pct = ", ".join(f"{lab}={p:.4g}%" for lab, p in zip(spec.labels, last.pct_per_component))
        print(f"  t={last.at_time:.6g}: percentage error {pct}; L2 total {last.l2_total:.4g}")
    md = cons.mass_drift()[-1]
    ed = cons.energy_drift()[-1]
    print("  drift: " + ", ".join(f"{lab}: mass {m:.3g} energy {e:.3g}" for lab, m, e in zip(spec.labels, md, ed)))

    prefix = _prefix(cfg)
    if prefix:
        files = []
        for i, snap in enumerate(traj.snapshots):
            files.append(write_snapshot_csv(_out(prefix, f"_snap{i:04d}.csv"), snap, spec.labels))
        files.append(write_error_csv(_out(prefix, "_errors.csv"), errors, spec.labels))
        files.append(write_conservation_csv(_out(prefix, "_conservation.csv"), cons, spec.labels))
        files.append(write_metadata(_out(prefix, "_stability.json"), rep.to_dict()))
        _meta(prefix, cfg, files, {
            "tau": tau, "steps": ts.steps, "steps_taken": traj.steps_taken,
            "snapshot_times": traj.times,
            "blowup": None if traj.error is None else str(traj.error),
        })
    if traj.error is not None or monitor.flagged:
        print(f"  BLOW-UP: {traj.error}", file=sys.stderr)
        return EXIT_BLOWUP
    return EXIT_OK


def cmd_convergence(cfg: RunConfig) -> int:
    x_min = cfg.x_min if cfg.x_min is not None else -10.0
    x_max = cfg.x_max if cfg.x_max is not None else 10.0
    tau = "finest" if cfg.tau == "auto" else cfg.tau
    try:
        report = convergence_study(cfg.system, cfg.family, cfg.levels, tau=tau, t_end=cfg.t_end,
                                   domain=(x_min, x_max), budget=cfg.budget, boundary=cfg.boundary,
                                   workers=cfg.workers)
    except ConvergenceError as exc:
        print(f"convergence aborted: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    print("h, tau, L2 error, order")
    for i, (h, tau_, err) in enumerate(report.levels):
        order = f"{report.orders[i - 1]:.4f}" if i else "-"
        print(f"{h:g}, {tau_:.6g}, {err:.6g}, {order}")
    prefix = _prefix(cfg)
    if prefix:
        f = write_convergence_csv(_out(prefix, "_convergence.csv"), report)
        _meta(prefix, cfg, [f], {"orders": report.orders})
    return EXIT_OK


def cmd_stability(cfg: RunConfig) -> int:
    grid, init = _initial(cfg)
    tau_rec = advise_tau(cfg.system, init, budget=cfg.budget, boundary=cfg.boundary)
    tau = tau_rec if cfg.tau == "auto" else cfg.tau
    rep = growth_exponent(cfg.system, init, tau, budget=cfg.budget, boundary=cfg.boundary)
    rows = [("h", grid.h), ("tau", tau), ("tau advised", tau_rec), ("||S|| bound", rep.s_bound),
            ("||A|| bound", rep.a_bound), ("a(tau,h)", rep.a_exponent), ("floor 2 G_s", rep.floor),
            ("dispersive part", rep.dispersive_part), ("per-step growth", rep.per_step_growth),
            ("budget", cfg.budget), ("stable", rep.stable)]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v:.6g}" if isinstance(v, float) else f"{k:<{width}}  {v}")
    prefix = _prefix(cfg)
    if prefix:
        f = write_metadata(_out(prefix, "_stability.json"), {**rep.to_dict(), "tau_advised": tau_rec})
        _meta(prefix, cfg, [f], {})
    return EXIT_OK


def cmd_dt_check(cfg: RunConfig) -> int:
    fam = cfg.family or AnalyticFamily("reduced", a=1.0)
    params, consts = fam.params, fam.consts
    rng = np.random.default_rng(0)
    x = rng.uniform(-3, 3, cfg.dt_points)
    t = rng.uniform(-0.5, 0.5, cfg.dt_points)
    worst = {}
    with np.errstate(all="ignore"):
        keep = np.ones_like(x, dtype=bool)
        for xi, ti, i in zip(x, t, range(x.size)):
            try:
                check_nonsingular(fam if fam.kind == "reduced" else AnalyticFamily("reduced", lam=params.lam,
                                  consts=consts), np.array([xi]), ti)
            except SingularPointError:
                keep[i] = False
        x, t = x[keep], t[keep]
        try:
            comp = compound_dt(params, consts, x, t)
            ref = reduced_solution(params, consts, x, t)
            one = first_transform_fields(params, consts, x, t)
            closed = two_component(params, consts, x, t)
        except SingularPointError as exc:
            print(f"singular sample: {exc}", file=sys.stderr)
            return EXIT_SINGULAR
    for lab, a, b in zip(("f", "u", "v"), (comp.f, comp.u, comp.v), ref):
        worst[f"compound {lab}"] = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))
    for lab, a, b in zip(("f21", "u11", "u21"), one, closed):
        worst[f"first {lab}"] = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))
    ok = all(v <= 1e-10 for v in worst.values())
    print(f"dt-check lambda={params.lam} a={params.a} at {x.size} points")
    for k, v in worst.items():
        print(f"  {k:<14} max rel diff {v:.3g}")
    print("PASS" if ok else "FAIL")
    prefix = _prefix(cfg)
    if prefix:
        _meta(prefix, cfg, [], {"max_rel_diff": worst, "pass": ok})
    return EXIT_OK if ok else EXIT_CHECK


HANDLERS = {
    "presets": cmd_presets,
    "analytic": cmd_analytic,
    "simulate": cmd_simulate,
    "convergence": cmd_convergence,
    "stability": cmd_stability,
    "dt-check": cmd_dt_check,
}


def execute(cfg: RunConfig) -> int:
    try:
        return HANDLERS[cfg.command](cfg)
    except SingularPointError as exc:
        print(f"singular analytic family on the requested domain: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (ConfigError, RealityError, SystemSpecError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


# --- argparse ---------------------------------------------------------------

def _family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", dest="kind", choices=("r", "reduced", "two-component"))
    p.add_argument("--a", type=str)
    p.add_argument("--r", type=float)
    p.add_argument("--lambda", dest="lam", type=str, help="RE,IM or a Python complex literal")
    p.add_argument("--constants", type=str, help="c1,c2,d1,d2 (complex literals allowed)")


def _grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--points", type=int)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coupled-kdv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("presets", help="list preset systems")
    p.add_argument("action", nargs="?", default="list", choices=("list",))

    p = sub.add_parser("analytic", help="write a profile of an analytic family")
    _family_flags(p)
    _grid_flags(p)
    p.add_argument("--t", type=float)

    p = sub.add_parser("simulate", help="integrate a system from analytic initial data")
    p.add_argument("--preset")
    _family_flags(p)
    _grid_flags(p)
    p.add_argument("--tau", type=str, help="step size or 'auto'")
    p.add_argument("--budget", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--boundary", choices=("zero", "zero_ghost", "periodic"))
    p.add_argument("--snapshots", type=int)

    p = sub.add_parser("convergence", help="grid refinement study")
    p.add_argument("--preset")
    _family_flags(p)
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--levels", type=str, help="comma-separated grid steps")
    p.add_argument("--tau", type=str, help="step size, or 'auto' to pin the finest level's advice")
    p.add_argument("--budget", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--boundary", choices=("zero", "zero_ghost", "periodic"))
    p.add_argument("--workers", type=int)

    p = sub.add_parser("stability", help="growth-exponent table for an initial state")
    p.add_argument("--preset")
    _family_flags(p)
    _grid_flags(p)
    p.add_argument("--tau", type=str)
    p.add_argument("--budget", type=float)
    p.add_argument("--boundary", choices=("zero", "zero_ghost", "periodic"))

    p = sub.add_parser("dt-check", help="compare the Darboux pipeline with the closed forms")
    _family_flags(p)
    p.add_argument("--points", dest="dt_points", type=int)

    for p in sub.choices.values():
        p.add_argument("--config", type=Path, help="YAML/JSON configuration; flags override it")
        p.add_argument("--out", type=str, help="output path prefix")
    return parser


def _merge_flags(data: dict, ns: argparse.Namespace) -> dict:
    data = dict(data)
    data["command"] = ns.command
    get = lambda name: getattr(ns, name, None)  # noqa: E731
    if get("preset") is not None:
        data["system"] = ns.preset
    fam = dict(data.get("family") or {})
    for flag, key in (("kind", "kind"), ("a", "a"), ("r", "r"), ("lam", "lambda"), ("constants", "constants")):
        v = get(flag)
        if v is not None:
            if key == "lambda" and "," in v:
                v = [float(s) for s in v.split(",")]
            fam[key] = v
    if fam:
        data["family"] = fam
    grid = dict(data.get("grid") or {})
    for key in ("x_min", "x_max", "h", "points"):
        if get(key) is not None:
            grid[key] = get(key)
    if grid:
        data["grid"] = grid
    time = dict(data.get("time") or {})
    if get("tau") is not None:
        time["tau"] = ns.tau
    if get("t_end") is not None:
        time["t_end"] = ns.t_end
    if get("snapshots") is not None:
        time["snapshots"] = ns.snapshots
    if time:
        data["time"] = time
    for key in ("boundary", "budget", "out", "levels", "t", "dt_points", "workers"):
        if get(key) is not None:
            data[key] = get(key)
    return data


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        data, lines = ({}, {})
        if ns.config is not None:
            data, lines = load_text(ns.config.read_text())
            if data.get("command") not in (None, ns.command):
                raise ConfigFileError(
                    f"config is for command {data['command']!r}, not {ns.command!r}", lines.get(("command",)))
        if ns.command == "dt-check" and "family" not in data and getattr(ns, "kind", None) is None:
            data.setdefault("family", {"kind": "reduced"})
        cfg = build_config(_merge_flags(data, ns), lines)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
