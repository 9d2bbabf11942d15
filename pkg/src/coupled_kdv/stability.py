"""A priori growth bounds for the explicit scheme and a step-size advisor.

For a state theta^j the step Jacobian T = E + S + A (identity, symmetric and
antisymmetric parts) is bounded by

    ||S|| <= tau * G_s,       G_s = g_max * max_i (max_n |theta^n_x,i|)^2
    ||A|| <= tau * (G_a / h + 3 d_max / h^3),   G_a = g_max * max_i (max_n |theta^n_i|)^2

so that ||T||^2 <= 1 + tau * a with

    a(tau, h) = 2 G_s + tau * (G_s + G_a / h + 3 d_max / h^3)^2.

The first term does not depend on the discretisation; the second is what
forces tau ~ h^6.  The bounds use the single largest coefficient, so for
systems with several terms per equation they are estimates rather than
guarantees; ``exact_step_norm`` gives the true value on small grids.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .scheme import BLOWUP_FACTOR, Boundary, FieldState, Stepper, pad
from .system_model import SystemSpec

DEFAULT_BUDGET = 10.0


class StabilityConfigError(ValueError):
    pass


@dataclass(frozen=True)
class FieldExtremes:
    max_theta: float
    max_theta_x: float
    g_max: float
    d_max: float

    @property
    def symmetric_product(self) -> float:
        return self.g_max * self.max_theta_x**2

    @property
    def antisymmetric_product(self) -> float:
        return self.g_max * self.max_theta**2


@dataclass(frozen=True)
class StabilityReport:
    s_bound: float
    a_bound: float
    a_exponent: float
    per_step_growth: float
    stable: bool
    tau: float
    h: float
    budget: float
    floor: float  # tau-independent part 2 G_s
    dispersive_part: float  # tau * bracket^2

    def to_dict(self) -> dict:
        return asdict(self)


def field_extremes(spec: SystemSpec, state: FieldState,
                   boundary: Boundary | str = Boundary.ZERO_GHOST) -> FieldExtremes:
    th = state.values
    p = pad(th, Boundary.parse(boundary))
    thx = (p[:, 3:-1] - p[:, 1:-3]) / (2 * state.grid.h)
    return FieldExtremes(
        max_theta=float(np.max(np.abs(th), initial=0.0)),
        max_theta_x=float(np.max(np.abs(thx), initial=0.0)),
        g_max=spec.g_max,
        d_max=spec.d_max,
    )


def _bracket(ext: FieldExtremes, h: float) -> float:
    return ext.symmetric_product + ext.antisymmetric_product / h + 3.0 * ext.d_max / h**3


def growth_exponent(spec: SystemSpec, state: FieldState, tau: float, h: float | None = None,
                    budget: float = DEFAULT_BUDGET,
                    boundary: Boundary | str = Boundary.ZERO_GHOST) -> StabilityReport:
    """Bounds on the Jacobian parts and the exponent a(tau, h).

    ``stable`` compares the discretisation-dependent part ``tau * bracket^2``
    with ``budget``; ``floor = 2 G_s`` is reported separately.
    """
    h = state.grid.h if h is None else h
    if not (h > 0 and tau > 0):
        raise StabilityConfigError(f"tau and h must be positive (tau={tau}, h={h})")
    ext = field_extremes(spec, state, boundary)
    bracket = _bracket(ext, h)
    floor = 2.0 * ext.symmetric_product
    dispersive = tau * bracket**2
    a = floor + dispersive
    return StabilityReport(
        s_bound=tau * ext.symmetric_product,
        a_bound=tau * (ext.antisymmetric_product / h + 3.0 * ext.d_max / h**3),
        a_exponent=a,
        per_step_growth=math.exp(a * tau / 2.0) if a * tau / 2.0 < 709.0 else math.inf,
        stable=dispersive <= budget,
        tau=tau,
        h=h,
        budget=budget,
        floor=floor,
        dispersive_part=dispersive,
    )


def advise_tau(spec: SystemSpec, state: FieldState, h: float | None = None,
               budget: float = DEFAULT_BUDGET,
               boundary: Boundary | str = Boundary.ZERO_GHOST) -> float:
    """Largest tau whose dispersive part ``tau * bracket^2`` stays within ``budget``.

    The bracket depends on the state and h only, so the bound inverts exactly.
    Returns ``inf`` when the bracket vanishes (no dispersion and zero field).
    """
    if not budget > 0:
        raise StabilityConfigError("budget must be positive")
    h = state.grid.h if h is None else h
    if not h > 0:
        raise StabilityConfigError("h must be positive")
    bracket = _bracket(field_extremes(spec, state, boundary), h)
    if bracket == 0.0:
        return math.inf
    return budget / bracket**2


def step_jacobian(spec: SystemSpec, state: FieldState, tau: float,
                  boundary: Boundary | str = Boundary.ZERO_GHOST):
    """Exact Jacobian of one step by complex-step differentiation.

    The update is polynomial in the nodal values, so the complex step is exact
    to rounding.  Dense (N M) x (N M) array; intended for small grids.
    """
    stepper = Stepper(spec, boundary)
    N, M = state.values.shape
    h = state.grid.h
    base = state.values.astype(complex)
    eps = 1e-30
    J = np.eye(N * M)
    for col in range(N * M):
        pert = base.copy()
        pert.flat[col] += 1j * eps
        J[:, col] -= tau * (stepper.rhs(pert, h).imag / eps).ravel()
    return J


def exact_step_norm(spec: SystemSpec, state: FieldState, tau: float,
                    boundary: Boundary | str = Boundary.ZERO_GHOST) -> float:
    """Spectral norm of the assembled step Jacobian (cross-check for the a priori bound)."""
    N, M = state.values.shape
    if M > 200:
        raise StabilityConfigError("exact norm mode is limited to grids of at most 200 points")
    return float(np.linalg.norm(step_jacobian(spec, state, tau, boundary), 2))


class BlowupMonitor:
    """Run monitor: records the first step where the state is non-finite or the
    L2 norm exceeds ``factor`` times the norm seen at step 0."""

    def __init__(self, factor: float = BLOWUP_FACTOR):
        self.factor = factor
        self.initial_norm: float | None = None
        self.flagged_step: int | None = None
        self.history: list[tuple[int, float]] = []

    @property
    def flagged(self) -> bool:
        return self.flagged_step is not None

    def __call__(self, step: int, state: FieldState) -> None:
        norm = state.l2()
        self.history.append((step, norm))
        if self.initial_norm is None:
            self.initial_norm = norm
        if self.flagged_step is not None:
            return
        if not np.all(np.isfinite(state.values)) or not math.isfinite(norm) \
                or norm > self.factor * self.initial_norm:
            self.flagged_step = step
