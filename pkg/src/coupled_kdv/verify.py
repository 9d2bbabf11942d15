"""Error norms, convergence studies, conservation monitors and PDE residual oracles."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .darboux import AnalyticFamily
from .scheme import (
    Boundary,
    BlowUpError,
    ConfigError,
    FieldState,
    GridSpec,
    TimeSpec,
    Trajectory,
    evaluate_family,
    run,
    sample_initial,
)
from .stability import DEFAULT_BUDGET, StabilityReport, advise_tau, growth_exponent
from .system_model import SystemSpec

TWO_COMPONENT_SYSTEM = "two-component"
"""Target for the two-component reduction, whose undifferentiated products do
not fit the general constant-coefficient form."""

ZERO_EXACT_TOL = 1e-12


def grid_norm(error, h: float) -> float:
    """sqrt(sum_i sum_n error[n, i]^2 h)."""
    if not h > 0:
        raise ConfigError("h must be positive")
    err = np.asarray(error, dtype=float)
    return float(np.sqrt(np.sum(err**2) * h))


@dataclass
class ErrorReport:
    l2_per_component: list[float]
    l2_total: float
    pct_per_component: list[float]
    at_time: float
    warnings: list[str] = field(default_factory=list)


def percentage_error(numeric: FieldState, exact: FieldState) -> ErrorReport:
    """Per component 100 * max|num - exact| / max|exact|, plus L2 grid norms."""
    if numeric.values.shape != exact.values.shape:
        raise ConfigError(f"shape mismatch {numeric.values.shape} vs {exact.values.shape}")
    h = numeric.grid.h
    diff = numeric.values - exact.values
    l2 = [grid_norm(row, h) for row in diff]
    pct, warnings = [], []
    for n, (d, e) in enumerate(zip(diff, exact.values)):
        scale = np.max(np.abs(e))
        if scale < ZERO_EXACT_TOL:
            pct.append(0.0)
            warnings.append(f"component {n}: exact field is identically zero; percentage reported as 0")
        else:
            pct.append(float(100.0 * np.max(np.abs(d)) / scale))
    return ErrorReport(l2, float(math.sqrt(sum(v * v for v in l2))), pct, numeric.time, warnings)


def percentage_profile(numeric: FieldState, exact: FieldState) -> np.ndarray:
    """Nodewise 100 * |num - exact| / max|exact|, shape (N, M)."""
    scale = np.max(np.abs(exact.values), axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 100.0 * np.abs(numeric.values - exact.values) / scale
    return np.where(scale > ZERO_EXACT_TOL, out, 0.0)


# --- residual oracles -------------------------------------------------------

def _derivatives(solution, x, t, delta):
    """Value and partial derivatives by five-point centered stencils.

    First and second derivatives are fourth order, the third is second order,
    so the residual of an exact solution decays like delta^2.
    """
    def at(dx, dt):
        return np.asarray(solution(x + dx, t + dt), dtype=complex)

    f0 = at(0, 0)
    fp1, fm1, fp2, fm2 = at(delta, 0), at(-delta, 0), at(2 * delta, 0), at(-2 * delta, 0)
    d = delta
    fx = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * d)
    fxx = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * d**2)
    fxxx = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * d**3)
    ft = (-at(0, 2 * d) + 8 * at(0, d) - 8 * at(0, -d) + at(0, -2 * d)) / (12 * d)
    return f0, fx, fxx, fxxx, ft


def system_residual(spec: SystemSpec, f0, fx, fxx, fxxx, ft) -> np.ndarray:
    """theta_t + nonlinear terms + d theta_xxx for continuum fields of shape (N, ...)."""
    out = ft + np.asarray(spec.d).reshape((-1,) + (1,) * (f0.ndim - 1)) * fxxx
    for (l, n, m, k), v in spec.nonzero().items():
        n, m, k = n - 1, m - 1, k - 1
        if l == 1:
            out[n] += v * f0[m] * fx[k]
        elif l == 2:
            out[n] += v * f0[m] ** 2 * fx[k]
        elif l == 3:
            out[n] += v * fx[m] * fx[k]
        elif l == 4:
            out[n] += v * f0[m] * fxx[k]
        else:
            out[n] += v * f0[m] * f0[k] * fx[k]
    return out


def two_component_residual(f0, fx, fxx, fxxx, ft) -> np.ndarray:
    """Residual of the (f21, u11, u21) system left by the first transform."""
    f, u, w = f0
    fx_, ux, wx = fx
    fxx_ = fxx[0]
    r1 = ft[0] + 0.5 * fxxx[0] + 0.75 * f * ux + 1.5 * u * w
    r2 = ft[1] - 0.25 * fxxx[1] - 1.5 * u * ux
    r3 = ft[2] + 0.5 * fxxx[2] + 0.75 * w * ux + 1.5 * wx * u - 0.75 * u * fxx_ - 0.75 * u**2 * f
    return np.array([r1, r2, r3])


def continuum_residual(target: SystemSpec | str, solution: Callable, points, delta: float = 1e-3) -> float:
    """Root-mean-square residual over sample points of a point-evaluable family.

    ``solution(x, t)`` returns an array of shape (N, len(x)).  ``target`` is a
    SystemSpec or ``TWO_COMPONENT_SYSTEM``.
    """
    x, t = (np.asarray(c, dtype=float) for c in points)
    derivs = _derivatives(solution, x, t, delta)
    if isinstance(target, str):
        if target != TWO_COMPONENT_SYSTEM:
            raise ConfigError(f"unknown special system {target!r}")
        res = two_component_residual(*derivs)
    else:
        res = system_residual(target, *derivs)
    return float(np.sqrt(np.sum(np.abs(res) ** 2) / x.size))


def residual_slope(target, solution, points, deltas: Sequence[float] = (1e-2, 5e-3, 2.5e-3)):
    """Residuals at each step and the least-squares log-log slope."""
    res = np.array([continuum_residual(target, solution, points, d) for d in deltas])
    slope = np.polyfit(np.log(deltas), np.log(res), 1)[0]
    return res, float(slope)


def family_solution(family: AnalyticFamily, labels: Sequence[str] | None = None) -> Callable:
    labels = list(labels or family.labels)

    def sol(x, t):
        vals = family.evaluate(x, t)
        return np.array([vals[lab] for lab in labels])

    return sol


# --- convergence ------------------------------------------------------------

@dataclass
class ConvergenceReport:
    levels: list[tuple[float, float, float]]
    orders: list[float]
    stability: list[StabilityReport] = field(default_factory=list)


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, report: StabilityReport):
        super().__init__(message)
        self.report = report


def _level_error(spec, family, init, tau, t_end, boundary):
    if t_end == 0:
        return 0.0
    traj = run(spec, init, TimeSpec.until(t_end, tau), boundary)
    if traj.error is not None:
        return traj.error
    exact = evaluate_family(family, spec, init.grid, traj.final.time)
    return grid_norm(traj.final.values - exact, init.grid.h)


def convergence_study(
    spec: SystemSpec,
    family: AnalyticFamily,
    levels: Sequence[float],
    tau: float | str = "finest",
    t_end: float = 0.02,
    domain: tuple[float, float] = (-10.0, 10.0),
    budget: float = DEFAULT_BUDGET,
    boundary: Boundary | str = Boundary.ZERO_GHOST,
    workers: int = 1,
) -> ConvergenceReport:
    """L2 error at ``t_end`` for each grid step in ``levels``.

    ``tau="finest"`` pins one step to the advice for the finest grid;
    ``tau="auto"`` advises per level; a number is used as is.
    """
    if len(levels) < 2:
        raise ConfigError("a convergence study needs at least two levels")
    hs = sorted((float(h) for h in levels), reverse=True)
    grids = [GridSpec.from_step(domain[0], domain[1], h) for h in hs]
    inits = [sample_initial(family, spec, g, 0.0) for g in grids]
    if tau == "finest":
        taus = [advise_tau(spec, inits[-1], budget=budget, boundary=boundary)] * len(hs)
    elif tau == "auto":
        taus = [advise_tau(spec, s, budget=budget, boundary=boundary) for s in inits]
    else:
        taus = [float(tau)] * len(hs)
    reports = [growth_exponent(spec, s, tk, budget=budget, boundary=boundary) for s, tk in zip(inits, taus)]
    for rep in reports:
        if not rep.stable:
            raise ConvergenceError(f"level h={rep.h:g} violates the stability budget", rep)
    jobs = [(spec, family, s, tk, t_end, boundary) for s, tk in zip(inits, taus)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_level_error, *zip(*jobs)))
    else:
        results = [_level_error(*job) for job in jobs]
    errors = []
    for err, rep in zip(results, reports):
        if isinstance(err, BlowUpError):
            raise ConvergenceError(f"blow-up at level h={rep.h:g}: {err}", rep)
        errors.append(err)
    orders = []
    for i in range(len(hs) - 1):
        if errors[i] == 0.0 or errors[i + 1] == 0.0:
            orders.append(float("nan"))
        else:
            orders.append(math.log(errors[i] / errors[i + 1]) / math.log(hs[i] / hs[i + 1]))
    return ConvergenceReport([(h, tk, e) for h, tk, e in zip(hs, taus, errors)], orders, reports)


# --- conservation -----------------------------------------------------------

@dataclass
class ConservationSeries:
    times: list[float]
    mass: np.ndarray    # (snapshots, N)
    energy: np.ndarray  # (snapshots, N)
    scale: np.ndarray   # (N,) normalisation for mass drift

    def mass_drift(self) -> np.ndarray:
        """|mass(t) - mass(0)| relative to max(|mass(0)|, sum|theta(0)| h), per snapshot and component."""
        return np.abs(self.mass - self.mass[0]) / self.scale

    def energy_drift(self) -> np.ndarray:
        e0 = np.where(self.energy[0] > 0, self.energy[0], 1.0)
        return np.abs(self.energy - self.energy[0]) / e0


def conservation_series(trajectory: Trajectory | Sequence[FieldState]) -> ConservationSeries:
    snaps = trajectory.snapshots if isinstance(trajectory, Trajectory) else list(trajectory)
    h = snaps[0].grid.h
    mass = np.array([s.values.sum(axis=1) * h for s in snaps])
    energy = np.array([(s.values**2).sum(axis=1) * h for s in snaps])
    l1 = np.abs(snaps[0].values).sum(axis=1) * h
    scale = np.maximum(np.abs(mass[0]), l1)
    scale = np.where(scale > 0, scale, 1.0)
    return ConservationSeries([s.time for s in snaps], mass, energy, scale)


# --- export -----------------------------------------------------------------

def _fmt(v) -> str:
    return repr(float(v))


def write_convergence_csv(path: str | Path, report: ConvergenceReport) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["h", "tau", "l2_error", "order"])
        for i, (h, tau, err) in enumerate(report.levels):
            order = report.orders[i - 1] if i > 0 else ""
            w.writerow([_fmt(h), _fmt(tau), _fmt(err), _fmt(order) if order != "" else ""])
    return path


def write_error_csv(path: str | Path, reports: Sequence[ErrorReport], labels: Sequence[str]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time"] + [f"l2_{s}" for s in labels] + [f"pct_{s}" for s in labels] + ["l2_total"])
        for r in reports:
            w.writerow([_fmt(r.at_time)] + [_fmt(v) for v in r.l2_per_component]
                       + [_fmt(v) for v in r.pct_per_component] + [_fmt(r.l2_total)])
    return path


def write_conservation_csv(path: str | Path, series: ConservationSeries, labels: Sequence[str]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time"] + [f"mass_{s}" for s in labels] + [f"energy_{s}" for s in labels])
        for t, m, e in zip(series.times, series.mass, series.energy):
            w.writerow([_fmt(t)] + [_fmt(v) for v in m] + [_fmt(v) for v in e])
    return path


def write_profile_csv(path: str | Path, x: np.ndarray, columns: dict[str, np.ndarray]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x"] + list(columns))
        for i, xv in enumerate(x):
            w.writerow([_fmt(xv)] + [_fmt(np.real(col[i])) for col in columns.values()])
    return path
