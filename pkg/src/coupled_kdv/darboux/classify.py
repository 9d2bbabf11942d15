"""Reality and singularity of the reduced family over an (x, t) window."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .families import reduced_jets
from .transforms import SpectralParams, WaveConstants

SINGULAR_THRESHOLD = 1e-9
REAL_TOL = 1e-9
LOCUS_TOL = 1e-10

Window = tuple[tuple[float, float], tuple[float, float]]


@dataclass
class Classification:
    is_real: bool
    is_singular: bool
    singular_loci: list[tuple[float, float]] = field(default_factory=list)
    max_imag: float = 0.0
    min_denominator: float = np.inf


def _check_window(window: Window) -> None:
    (x0, x1), (t0, t1) = window
    if not (x1 > x0 and t1 >= t0):
        raise ValueError(f"empty window {window}")


def _denominator(params, consts):
    def D(x, t, order=1):
        W, den, _ = reduced_jets(params, consts, x, t, order=order)
        return den

    return D


def _row_roots(den_fn, xs: np.ndarray, t: float) -> list[float]:
    """Roots in x of the denominator on a fixed time row."""
    jet = den_fn(xs, np.full_like(xs, t))
    vals = jet.value
    scale = max(np.max(np.abs(vals)), 1.0)
    roots: list[float] = []
    if np.max(np.abs(vals.imag)) <= 1e-12 * scale:
        re = vals.real

        def g(x):
            return den_fn(np.array([x]), np.array([t])).value[0].real

        for i in np.nonzero(np.sign(re[:-1]) * np.sign(re[1:]) < 0)[0]:
            roots.append(brentq(g, xs[i], xs[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps))
        # touching zeros: no sign change, sampled value already tiny
        for i in np.nonzero(np.abs(re) < SINGULAR_THRESHOLD)[0]:
            roots.append(_polish(den_fn, xs[i], t))
    else:
        mag = np.abs(vals)
        interior = np.nonzero((mag[1:-1] <= mag[:-2]) & (mag[1:-1] <= mag[2:]))[0] + 1
        for i in interior:
            roots.append(_polish(den_fn, xs[i], t))
    h = xs[1] - xs[0]
    keep = []
    for x in roots:
        if x is None or not (xs[0] - h <= x <= xs[-1] + h):
            continue
        val = abs(den_fn(np.array([x]), np.array([t])).value[0])
        if val <= LOCUS_TOL and all(abs(x - y) > 1e-9 for y in keep):
            keep.append(x)
    return keep


def _polish(den_fn, x: float, t: float, iters: int = 60) -> float | None:
    """Newton iteration along x restricted to real steps."""
    for _ in range(iters):
        jet = den_fn(np.array([x]), np.array([t]))
        d0, d1 = jet[0][0], jet[1][0]
        if d1 == 0:
            return None
        step = (d0 / d1).real
        x -= step
        if abs(step) < 1e-15 * max(1.0, abs(x)):
            break
    return x


def _locate(den_fn, window: Window, nx: int, nt: int) -> list[tuple[float, float]]:
    (x0, x1), (t0, t1) = window
    xs = np.linspace(x0, x1, nx)
    loci = []
    for t in np.linspace(t0, t1, nt):
        loci.extend((float(x), float(t)) for x in _row_roots(den_fn, xs, t))
    return loci


def classify(
    params: SpectralParams,
    consts: WaveConstants,
    window: Window,
    nx: int = 401,
    nt: int = 41,
) -> Classification:
    """Sample the reduced family on a grid; report reality and singular loci.

    Reality is judged on samples where the denominator is not within the
    singular threshold, relative to the field magnitude there.
    """
    _check_window(window)
    (x0, x1), (t0, t1) = window
    X, T = np.meshgrid(np.linspace(x0, x1, nx), np.linspace(t0, t1, nt))
    W, D, _ = reduced_jets(params, consts, X, T, order=2)
    dmag = np.abs(D.value)
    min_den = float(np.min(dmag))
    ok = dmag > 1e-6 * max(np.median(dmag), 1e-300)
    with np.errstate(all="ignore"):
        q = W / D
        fields = (2.0 * q, (D.d() / D).d() + 2.0 * q * q, 2.0 * q.d() + W * D.d() / (D * D))
    max_imag = 0.0
    for fld in fields:
        vals = fld.value[ok]
        vals = vals[np.isfinite(vals)]
        if vals.size:
            rel = np.abs(vals.imag) / np.maximum(1.0, np.abs(vals))
            max_imag = max(max_imag, float(np.max(rel)))
    loci = _locate(_denominator(params, consts), window, nx, nt)
    singular = bool(loci) or min_den < SINGULAR_THRESHOLD
    return Classification(
        is_real=max_imag <= REAL_TOL,
        is_singular=singular,
        singular_loci=loci if singular else [],
        max_imag=max_imag,
        min_denominator=min_den,
    )


def r_denominator(a: float, r: float, x, t):
    e1 = a**3 * np.asarray(t) - a * np.asarray(x)
    e2 = a**3 * np.asarray(t) + a * np.asarray(x)
    return np.cosh(e2) ** 2 - r**2 * np.cos(e1) ** 2


def singular_loci(a: float, r: float, window: Window, nx: int = 401, nt: int = 41) -> list[tuple[float, float]]:
    """Points of the (x, t) window where the r-family denominator vanishes.

    r < 1: none.  r = 1: the lattice eta2 = 0, eta1 = n pi, i.e.
    x = -n pi / (2a), t = n pi / (2 a^3) for every integer n.  r > 1: the
    zero curves, sampled row by row in t.
    """
    _check_window(window)
    (x0, x1), (t0, t1) = window
    if r < 1 and not np.isclose(r, 1.0, rtol=0, atol=1e-12):
        return []
    if np.isclose(r, 1.0, rtol=0, atol=1e-12):
        span = np.pi / (2 * a**3)
        pts = []
        for n in range(int(np.floor(t0 / span)), int(np.ceil(t1 / span)) + 1):
            x, t = -n * np.pi / (2 * a), n * span
            if x0 <= x <= x1 and t0 <= t <= t1:
                pts.append((x, t))
        return pts
    consts = WaveConstants.r_family(r)
    return _locate(_denominator(SpectralParams.from_a(a), consts), window, nx, nt)
