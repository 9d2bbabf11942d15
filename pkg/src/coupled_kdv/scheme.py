"""Explicit forward-Euler finite-difference stepper for coupled KdV-MKdV systems."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .darboux import AnalyticFamily, SingularPointError
from .system_model import SystemSpec

BLOWUP_FACTOR = 1e6
REAL_TOL = 1e-9
SINGULAR_THRESHOLD = 1e-9


class ConfigError(ValueError):
    pass


class RealityError(ValueError):
    pass


class BlowUpError(ArithmeticError):
    """The discrete solution stopped being finite or bounded."""

    def __init__(self, message: str, step: int | None = None, time: float | None = None,
                 component: int | None = None, node: int | None = None):
        super().__init__(message)
        self.step = step
        self.time = time
        self.component = component
        self.node = node


class Boundary(str, Enum):
    ZERO_GHOST = "zero_ghost"
    PERIODIC = "periodic"

    @classmethod
    def parse(cls, value: "Boundary | str") -> "Boundary":
        if isinstance(value, Boundary):
            return value
        aliases = {"zero": cls.ZERO_GHOST, "zero_ghost": cls.ZERO_GHOST, "periodic": cls.PERIODIC}
        try:
            return aliases[str(value)]
        except KeyError:
            raise ConfigError(f"unknown boundary policy {value!r}") from None


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if self.points < 5:
            raise ConfigError("a grid needs at least 5 points for the five-point stencil")
        if not self.x_max > self.x_min:
            raise ConfigError("x_max must exceed x_min")

    @classmethod
    def from_step(cls, x_min: float, x_max: float, h: float) -> "GridSpec":
        points = int(round((x_max - x_min) / h)) + 1
        return cls(x_min, x_max, points)

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)


@dataclass(frozen=True)
class TimeSpec:
    tau: float
    steps: int
    t0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ConfigError(f"tau must be finite and positive, got {self.tau}")
        if self.steps < 0:
            raise ConfigError("steps must be non-negative")

    @classmethod
    def until(cls, t_end: float, tau: float, t0: float = 0.0) -> "TimeSpec":
        """Steps of size close to ``tau`` that land exactly on ``t_end``."""
        span = t_end - t0
        if span < 0:
            raise ConfigError("t_end precedes t0")
        steps = int(math.ceil(span / tau - 1e-9)) if span > 0 else 0
        return cls(span / steps if steps else tau, steps, t0)


@dataclass
class FieldState:
    values: np.ndarray  # (N, M), component-major
    time: float
    grid: GridSpec

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[1] != self.grid.points:
            raise ConfigError(f"field shape {self.values.shape} does not match grid of {self.grid.points} points")

    def copy(self) -> "FieldState":
        return FieldState(self.values.copy(), self.time, self.grid)

    def l2(self) -> float:
        return float(np.sqrt(np.sum(self.values**2) * self.grid.h))


def pad(values: np.ndarray, boundary: Boundary) -> np.ndarray:
    """Two ghost nodes per side."""
    if boundary is Boundary.PERIODIC:
        return np.pad(values, ((0, 0), (2, 2)), mode="wrap")
    return np.pad(values, ((0, 0), (2, 2)))


def differences(values: np.ndarray, h: float, boundary: Boundary):
    """Centered first, second and five-point third differences on the nodes."""
    p = pad(values, boundary)
    right, left = p[:, 3:-1], p[:, 1:-3]
    centre = p[:, 2:-2]
    dx = (right - left) / (2 * h)
    dxx = (right - 2 * centre + left) / h**2
    dxxx = (p[:, 4:] - 2 * right + 2 * left - p[:, :-4]) / (2 * h**3)
    return dx, dxx, dxxx


class Stepper:
    """Precomputed coefficient tables for repeated steps of one system."""

    def __init__(self, spec: SystemSpec, boundary: Boundary | str = Boundary.ZERO_GHOST):
        self.spec = spec
        self.boundary = Boundary.parse(boundary)
        self.terms = spec.term_arrays()
        self.d = np.asarray(spec.d, dtype=float)[:, None]

    def rhs(self, values: np.ndarray, h: float) -> np.ndarray:
        """Everything but theta_t, so that theta_t = -rhs."""
        th = values
        dx, dxx, dxxx = differences(th, h, self.boundary)
        out = self.d * dxxx
        for l, (n, m, k, v) in self.terms.items():
            if l == 1:
                prod = th[m] * dx[k]
            elif l == 2:
                prod = th[m] ** 2 * dx[k]
            elif l == 3:
                prod = dx[m] * dx[k]
            elif l == 4:
                prod = th[m] * dxx[k]
            else:
                prod = th[m] * th[k] * dx[k]
            np.add.at(out, n, v[:, None] * prod)
        return out

    def step(self, state: FieldState, tau: float) -> FieldState:
        if not tau > 0:
            raise ConfigError("tau must be positive")
        new = state.values - tau * self.rhs(state.values, state.grid.h)
        time = state.time + tau
        if not np.all(np.isfinite(new)):
            n, i = np.argwhere(~np.isfinite(new))[0]
            raise BlowUpError(
                f"non-finite value in component {n} at node {i}, t={time:.6g}",
                time=time, component=int(n), node=int(i),
            )
        return FieldState(new, time, state.grid)


def step(spec: SystemSpec, state: FieldState, tau: float,
         boundary: Boundary | str = Boundary.ZERO_GHOST) -> FieldState:
    """One forward-Euler update of every component."""
    return Stepper(spec, boundary).step(state, tau)


def zero_state(spec: SystemSpec, grid: GridSpec, t0: float = 0.0) -> FieldState:
    return FieldState(np.zeros((spec.n_components, grid.points)), t0, grid)


def _component_labels(family: AnalyticFamily, spec: SystemSpec) -> list[str]:
    missing = [lab for lab in spec.labels if lab not in family.labels]
    if missing:
        raise ConfigError(
            f"family {family.kind!r} provides {family.labels}, system needs {spec.labels}"
        )
    return list(spec.labels)


def check_nonsingular(family: AnalyticFamily, x: np.ndarray, t) -> None:
    """Raise SingularPointError if the family denominator vanishes on or between samples."""
    den = family.denominator(x, t)
    tt = np.broadcast_to(np.asarray(t, dtype=float), np.shape(den))
    mag = np.abs(den)
    if np.any(mag < SINGULAR_THRESHOLD):
        i = int(np.argmin(mag))
        raise SingularPointError("denominator vanishes", float(np.ravel(x)[i]), float(np.ravel(tt)[i]))
    if np.max(np.abs(den.imag)) <= 1e-12 * np.max(mag):
        re = den.real.ravel()
        flips = np.nonzero(np.sign(re[:-1]) != np.sign(re[1:]))[0]
        if flips.size:
            i = int(flips[0])
            raise SingularPointError("denominator changes sign", float(np.ravel(x)[i]), float(np.ravel(tt)[i]))


def evaluate_family(family: AnalyticFamily, spec: SystemSpec, grid: GridSpec, t: float) -> np.ndarray:
    """Real (N, M) array of the family's components that the system evolves."""
    labels = _component_labels(family, spec)
    x = grid.x
    check_nonsingular(family, x, t)
    fields = family.evaluate(x, np.full_like(x, t))
    vals = np.array([fields[lab] for lab in labels])
    imag = np.abs(vals.imag) / np.maximum(1.0, np.abs(vals))
    if np.max(imag, initial=0.0) > REAL_TOL:
        raise RealityError(f"family is not real on the grid (max relative |Im| = {np.max(imag):.3g})")
    return vals.real.copy()


def sample_initial(family: AnalyticFamily, spec: SystemSpec, grid: GridSpec, t0: float = 0.0) -> FieldState:
    return FieldState(evaluate_family(family, spec, grid, t0), t0, grid)


Monitor = Callable[[int, FieldState], None]


@dataclass
class Trajectory:
    snapshots: list[FieldState]
    steps_taken: int
    error: BlowUpError | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def final(self) -> FieldState:
        return self.snapshots[-1]

    @property
    def times(self) -> list[float]:
        return [s.time for s in self.snapshots]


def run(
    spec: SystemSpec,
    init: FieldState,
    time: TimeSpec,
    boundary: Boundary | str = Boundary.ZERO_GHOST,
    monitors: Sequence[Monitor] = (),
    snapshot_every: int | None = None,
    monitor_every: int = 1,
) -> Trajectory:
    """Advance ``time.steps`` steps; stops early, keeping the partial trajectory, on blow-up.

    Snapshots are the initial state, every ``snapshot_every``-th step and the
    last state reached.  Blow-up means a non-finite value or an L2 norm above
    ``BLOWUP_FACTOR`` times the initial norm.
    """
    if snapshot_every is None:
        snapshot_every = max(time.steps, 1)
    if snapshot_every < 1 or monitor_every < 1:
        raise ConfigError("snapshot and monitor strides must be positive integers")
    if init.values.shape[0] != spec.n_components:
        raise ConfigError("initial state does not match the number of components")
    stepper = Stepper(spec, boundary)
    state = replace(init, time=time.t0) if init.time != time.t0 else init
    snaps = [state.copy()]
    limit = BLOWUP_FACTOR * state.l2()
    for mon in monitors:
        mon(0, state)
    error = None
    j = 0
    for j in range(1, time.steps + 1):
        try:
            state = stepper.step(state, time.tau)
        except BlowUpError as exc:
            exc.step = j
            error = exc
            j -= 1
            break
        state.time = time.t0 + j * time.tau
        if j % monitor_every == 0:
            for mon in monitors:
                mon(j, state)
        norm = state.l2()
        if norm > limit:
            error = BlowUpError(
                f"L2 norm {norm:.3g} exceeds {BLOWUP_FACTOR:g} x initial at step {j}",
                step=j, time=state.time,
            )
            snaps.append(state.copy())
            break
        if j % snapshot_every == 0 or j == time.steps:
            snaps.append(state.copy())
    if error is not None and snaps[-1].time != state.time:
        snaps.append(state.copy())
    return Trajectory(snaps, j, error, {
        "tau": time.tau, "steps": time.steps, "t0": time.t0,
        "boundary": Boundary.parse(boundary).value,
        "grid": {"x_min": init.grid.x_min, "x_max": init.grid.x_max, "points": init.grid.points},
    })


def _fmt(v: float) -> str:
    return repr(float(v))


def write_snapshot_csv(path: str | Path, state: FieldState, labels: Iterable[str]) -> Path:
    """CSV with header ``x,<label1>,...``; floats in shortest round-trip form."""
    path = Path(path)
    labels = list(labels)
    lines = [",".join(["x"] + labels)]
    for i, x in enumerate(state.grid.x):
        lines.append(",".join([_fmt(x)] + [_fmt(v) for v in state.values[:, i]]))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_metadata(path: str | Path, meta: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")
    return path
