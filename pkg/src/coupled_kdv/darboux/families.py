"""Explicit solution families generated from the zero seed."""

from __future__ import annotations

import numpy as np

from .jets import Jet
from .transforms import (
    MAX_EXPONENT,
    SINGULAR_TOL,
    EigenOverflowError,
    SingularPointError,
    SpectralParams,
    WaveConstants,
    _as_points,
    _guard,
    eigenpair,
)


def reduced_jets(params: SpectralParams, consts: WaveConstants, x, t, order: int = 3):
    """Jets of the Wronskian-type numerator W and denominator D of the reduced family."""
    eig = eigenpair(params, consts, x, t, order=order + 1)
    p1, p2 = eig.phi1, eig.phi2
    W = p1 * p2.d() - p2 * p1.d()
    D = p1 * p1 - p2 * p2
    return W, D, eig


def reduced_solution(params: SpectralParams, consts: WaveConstants, x, t):
    """(f, u, v) of the three-component system from two compound transforms.

    f = 2 W/D, u = (D_x/D)_x + 2 (W/D)^2, v = 2 (W/D)_x + W D_x / D^2 with
    W = phi1 phi2_x - phi2 phi1_x and D = phi1^2 - phi2^2.  Complex valued.
    """
    W, D, eig = reduced_jets(params, consts, x, t, order=2)
    _guard(D.value, eig.x, eig.t, "phi1^2 - phi2^2")
    q = W / D
    f = 2.0 * q
    u = (D.d() / D).d() + 2.0 * q * q
    v = 2.0 * q.d() + W * D.d() / (D * D)
    return f.value, u.value, v.value


def _etas(a, x, t):
    return a**3 * t - a * x, a**3 * t + a * x


def r_family(a: float, r: float, x, t):
    """Real closed form for c1 = c2 = 1/2, d1 = d2 = r/2."""
    x, t = _as_points(x, t)
    e1, e2 = _etas(a, x, t)
    den = np.cosh(e2) ** 2 - r**2 * np.cos(e1) ** 2
    _guard(den, x, t, "cosh^2 eta2 - r^2 cos^2 eta1")
    s1, c1 = np.sin(e1), np.cos(e1)
    sh2, ch2 = np.sinh(e2), np.cosh(e2)
    f = 2 * a * r * (ch2 * s1 - c1 * sh2) / den
    u = (
        a**2
        * (1 - r**4 - r**4 * np.cos(2 * e1) + np.cosh(2 * e2) + r**2 * np.sin(2 * e1) * np.sinh(2 * e2))
        / den**2
    )
    v = (
        2 * a**2 * r
        * (
            (-7 + 6 * r**2 + 2 * r**2 * np.cos(2 * e1)) * c1 * ch2
            - c1 * np.cosh(3 * e2)
            - 2 * (1 + r**2 + r**2 * np.cos(2 * e1) + np.cosh(2 * e2)) * s1 * sh2
        )
        / (-1 + r**2 + r**2 * np.cos(2 * e1) - np.cosh(2 * e2)) ** 2
    )
    return f, u, v


def equal_constants_family(a: float, x, t):
    """Closed form for c1 = c2 = d1 = d2 = 1/2 (the r = 1 member).

    Singular on eta2 = 0, eta1 = n pi.
    """
    x, t = _as_points(x, t)
    e1, e2 = _etas(a, x, t)
    den = np.cosh(e2) ** 2 - np.cos(e1) ** 2
    _guard(den, x, t, "cosh^2 eta2 - cos^2 eta1")
    s1, c1 = np.sin(e1), np.cos(e1)
    sh2, ch2 = np.sinh(e2), np.cosh(e2)
    f = 2 * a * (s1 * ch2 - c1 * sh2) / den
    u = 2 * a**2 * (s1 * ch2 + c1 * sh2) ** 2 / den**2
    # the v numerator is written over 4 den^2, consistent with r_family at r = 1
    v = (
        0.5 * a**2
        * (np.cos(3 * e1) * ch2 - 2 * s1 * sh2 * (np.cos(2 * e1) + np.cosh(2 * e2) + 2) - c1 * np.cosh(3 * e2))
        / den**2
    )
    return f, u, v


def imaginary_lambda_f(m: float, x, t, constants: str = "equal"):
    """f for lam = -2 i m^2 in closed form.

    ``constants="equal"`` is c1 = c2 = d1 = d2 = 1/2 (a real field);
    ``constants="one-two"`` is c1 = c2 = 1, d1 = d2 = 2 (complex).
    """
    x, t = _as_points(x, t)
    z1 = 2 * m * x + 4 * m**3 * t
    z2 = 2 * m * x - 4 * m**3 * t
    if constants == "equal":
        den = (0.25 * np.cosh(2 * z2) - 0.25) * (1 - np.cos(2 * z1))
        _guard(den, x, t, "(cosh 2 zeta2 - 1)(1 - cos 2 zeta1)")
        num = np.cos(2 * z1) * np.sinh(z2) - np.sinh(z2) - np.sin(z1) * np.cosh(2 * z2) + np.sin(z1)
        return m * num / den
    if constants == "one-two":
        re = -5 * np.sinh(z2) * np.cos(2 * z1) + 5 * np.sinh(z2) + 5 * np.sin(z1) * np.cosh(2 * z2) - 5 * np.sin(z1)
        im = 6 * np.sinh(z2) + 3 * np.sin(2 * z1) * np.cosh(z2) + 3 * np.cos(z1) * np.sinh(2 * z2) + 6 * np.sin(z1)
        den = (
            17 * np.cosh(2 * z2) + 10 + 36 * np.cos(z1) * np.cosh(z2)
            - 8 * np.cos(2 * z1) * np.cosh(2 * z2) + 17 * np.cos(2 * z1)
        )
        _guard(den, x, t, "denominator")
        return m * (-8 * re - 8j * im) / den
    raise ValueError(f"unknown constants choice {constants!r}")


def two_component(params: SpectralParams, consts: WaveConstants, x, t):
    """(f21, u11, u21) produced by the first transform alone.

    With s = a (a^2 t + x):
    f21 = 2 e^{(1-i)s} (d2 e^{2i a^3 t} + d1 e^{2i a x}) / (c2 + c1 e^{2s}),
    u11 = 8 a^2 c1 c2 e^{2s} / (c2 + c1 e^{2s})^2,
    u21 = -2i a e^{(1-i)s} (d2 e^{2i a^3 t} - d1 e^{2i a x}) / (c2 + c1 e^{2s}).
    Numerator and denominator are scaled by e^{-s} before evaluation so the
    decaying tails do not overflow.
    """
    x, t = _as_points(x, t)
    a = params.a
    c1, c2, d1, d2 = consts.c1, consts.c2, consts.d1, consts.d2
    s = a * (a**2 * t + x)
    if np.max(np.abs(np.real(s)), initial=0.0) > MAX_EXPONENT:
        raise EigenOverflowError(complex(np.ravel(s)[np.argmax(np.abs(np.real(s)))]))
    den = c2 * np.exp(-s) + c1 * np.exp(s)
    _guard(den, x, t, "c2 + c1 exp(2a(a^2 t + x))")
    rot = np.exp(-1j * s)
    plus = d2 * np.exp(2j * a**3 * t) + d1 * np.exp(2j * a * x)
    minus = d2 * np.exp(2j * a**3 * t) - d1 * np.exp(2j * a * x)
    f21 = 2 * rot * plus / den
    u11 = 8 * a**2 * c1 * c2 / den**2
    u21 = -2j * a * rot * minus / den
    return f21, u11, u21


def first_transform_fields(params: SpectralParams, consts: WaveConstants, x, t):
    """(f21, u11, u21) evaluated through the eigenfunctions rather than the closed form."""
    eig = eigenpair(params, consts, x, t, order=3)
    p1, p2 = eig.phi1, eig.phi2
    _guard(p1.value, eig.x, eig.t, "phi1")
    f21 = 2.0 * p2 / p1
    u11 = 2.0 * (p1.d() / p1).d()
    u21 = 2.0 * p2.d() / p1
    return f21.value, u11.value, u21.value


__all__ = [
    "SINGULAR_TOL",
    "SingularPointError",
    "Jet",
    "equal_constants_family",
    "first_transform_fields",
    "imaginary_lambda_f",
    "r_family",
    "reduced_jets",
    "reduced_solution",
    "two_component",
]
