"""Zero-seed eigenfunctions, Lax operators and the two elementary Darboux maps."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .jets import Jet

SINGULAR_TOL = 1e-12
# exp() overflows just above 709
MAX_EXPONENT = 700.0

SIGMA3 = np.diag([1.0, -1.0]).astype(complex)


class SingularPointError(ArithmeticError):
    """A denominator vanished; ``x`` and ``t`` locate the first offending sample."""

    def __init__(self, message: str, x: float, t: float):
        super().__init__(f"{message} at (x={x:.12g}, t={t:.12g})")
        self.x = x
        self.t = t


class EigenOverflowError(OverflowError):
    def __init__(self, exponent: complex):
        super().__init__(f"exponent {exponent} exceeds the representable range")
        self.exponent = exponent


@dataclass(frozen=True)
class SpectralParams:
    """Spectral parameter ``lam`` and ``a = sqrt(lam)`` on the principal branch."""

    lam: complex
    a: complex

    @classmethod
    def from_lambda(cls, lam: complex) -> "SpectralParams":
        lam = complex(lam)
        a = cmath.sqrt(lam)
        if a.real == 0.0 and a.imag < 0.0:
            a = -a
        return cls(lam, a)

    @classmethod
    def from_a(cls, a: complex) -> "SpectralParams":
        a = complex(a)
        return cls(a * a, a)


@dataclass(frozen=True)
class WaveConstants:
    c1: complex = 0.5
    c2: complex = 0.5
    d1: complex = 0.5
    d2: complex = 0.5

    def __post_init__(self):
        if all(complex(c) == 0 for c in (self.c1, self.c2, self.d1, self.d2)):
            raise ValueError("at least one wave constant must be nonzero")

    @classmethod
    def r_family(cls, r: float, c: float = 0.5) -> "WaveConstants":
        return cls(c, c, r * c, r * c)


@dataclass
class EigenSample:
    """Jets of the two eigenfunction components at sample points ``(x, t)``.

    ``phi1_t``/``phi2_t`` hold time derivatives when they are known in closed
    form (zero seed only).
    """

    phi1: Jet
    phi2: Jet
    x: np.ndarray
    t: np.ndarray
    phi1_t: np.ndarray | None = None
    phi2_t: np.ndarray | None = None

    @property
    def dphi1(self):
        return self.phi1[1]

    @property
    def dphi2(self):
        return self.phi2[1]

    @property
    def d2phi1(self):
        return self.phi1[2]

    @property
    def d2phi2(self):
        return self.phi2[2]

    def swapped(self) -> "EigenSample":
        """(phi2, phi1): the partner solution at ``-lam`` under the sigma_1 automorphism."""
        return EigenSample(self.phi2, self.phi1, self.x, self.t, self.phi2_t, self.phi1_t)


@dataclass
class PotentialSample:
    """Jets of the matrix potentials F = [[0, f12], [f21, 0]] and U = [[u11, u12], [u21, u22]]."""

    f12: Jet
    f21: Jet
    u11: Jet
    u12: Jet
    u21: Jet
    u22: Jet

    @classmethod
    def zero(cls, order: int = 6, shape=()) -> "PotentialSample":
        return cls(*(Jet.zeros(order, shape) for _ in range(6)))

    def matrices(self, k: int = 0) -> tuple[np.ndarray, np.ndarray]:
        """k-th x-derivative of F and U as arrays of shape (2, 2, ...)."""
        zero = np.zeros_like(self.f12[k])
        F = np.array([[zero, self.f12[k]], [self.f21[k], zero]])
        U = np.array([[self.u11[k], self.u12[k]], [self.u21[k], self.u22[k]]])
        return F, U


@dataclass
class DT1Result:
    potentials: PotentialSample
    eps11: Jet
    eps12: Jet
    eps21: Jet


@dataclass
class DT2Result:
    potentials: PotentialSample
    eps22: Jet
    eps12: Jet
    eps21: Jet


def _as_points(x, t):
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    return x, t


def _guard(den: np.ndarray, x, t, what: str, tol: float = SINGULAR_TOL) -> None:
    bad = np.abs(den) < tol
    if np.any(bad):
        idx = np.unravel_index(np.argmax(bad), np.shape(bad)) if np.ndim(bad) else ()
        raise SingularPointError(f"{what} vanishes", float(np.asarray(x)[idx]), float(np.asarray(t)[idx]))


def eigenpair(params: SpectralParams, consts: WaveConstants, x, t, order: int = 5) -> EigenSample:
    """Zero-seed solutions of the spectral problem and its time flow.

    phi1 = c1 exp(a x + a^3 t) + c2 exp(-(a x + a^3 t)),
    phi2 = d1 exp(i a x + (i a)^3 t) + d2 exp(-(i a x + (i a)^3 t)).
    """
    x, t = _as_points(x, t)
    a = params.a
    ia = 1j * a
    xi = a * x + a**3 * t
    zeta = ia * x + ia**3 * t
    for ex in (xi, zeta):
        worst = np.max(np.abs(np.real(ex)), initial=0.0)
        if worst > MAX_EXPONENT:
            raise EigenOverflowError(complex(np.ravel(ex)[np.argmax(np.abs(np.real(ex)))]))
    ep, em = np.exp(xi), np.exp(-xi)
    zp, zm = np.exp(zeta), np.exp(-zeta)
    k = np.arange(order + 1).reshape((-1,) + (1,) * x.ndim)
    phi1 = Jet(consts.c1 * a**k * ep + consts.c2 * (-a) ** k * em)
    phi2 = Jet(consts.d1 * ia**k * zp + consts.d2 * (-ia) ** k * zm)
    phi1_t = a**3 * (consts.c1 * ep - consts.c2 * em)
    phi2_t = ia**3 * (consts.d1 * zp - consts.d2 * zm)
    return EigenSample(phi1, phi2, x, t, phi1_t, phi2_t)


def lax_coefficients(pot: PotentialSample) -> tuple[np.ndarray, np.ndarray]:
    """B and C of the time flow Psi_t = Psi_xxx + B Psi_x + C Psi, shape (2, 2, ...)."""
    F, U = pot.matrices(0)
    Fx, Ux = pot.matrices(1)
    f12, f21, u12, u21 = pot.f12, pot.f21, pot.u12, pot.u21
    eye = np.eye(2).reshape((2, 2) + (1,) * (F.ndim - 2))
    s3 = SIGMA3.reshape(eye.shape)

    def mm(A, B):
        return np.einsum("ij...,jk...->ik...", A, B)

    diagU = U * eye
    diagUx = Ux * eye
    B = 1.5 * diagU + 1.5 * Fx + 0.75 * mm(F, F)
    C = (
        1.5 * Ux
        - 0.75 * diagUx
        - 0.75 * (f12[0] * u21[0] + f21[0] * u12[0]) * eye
        + 0.375 * (f12[1] * f21[0] - f12[0] * f21[1]) * s3
        + 0.75 * (pot.u11[0] - pot.u22[0]) * mm(s3, F)
    )
    return B, C


def _psi(eig: EigenSample, k: int) -> np.ndarray:
    return np.array([eig.phi1[k], eig.phi2[k]])


def spectral_residual(pot: PotentialSample, eig: EigenSample, lam: complex) -> np.ndarray:
    """Psi_xx + F Psi_x + U Psi - lam sigma3 Psi, shape (2, ...)."""
    F, U = pot.matrices(0)
    psi, psi_x, psi_xx = _psi(eig, 0), _psi(eig, 1), _psi(eig, 2)
    s3 = np.array([1.0, -1.0]).reshape((2,) + (1,) * (psi.ndim - 1))
    return (
        psi_xx
        + np.einsum("ij...,j...->i...", F, psi_x)
        + np.einsum("ij...,j...->i...", U, psi)
        - lam * s3 * psi
    )


def time_flow_residual(pot: PotentialSample, eig: EigenSample) -> np.ndarray:
    """Psi_t - (Psi_xxx + B Psi_x + C Psi) for samples with known time derivatives."""
    if eig.phi1_t is None or eig.phi2_t is None:
        raise ValueError("eigen sample carries no time derivatives")
    B, C = lax_coefficients(pot)
    psi_t = np.array([eig.phi1_t, eig.phi2_t])
    return psi_t - (
        _psi(eig, 3)
        + np.einsum("ij...,j...->i...", B, _psi(eig, 1))
        + np.einsum("ij...,j...->i...", C, _psi(eig, 0))
    )


def dt1_apply(seed: PotentialSample, eig: EigenSample) -> DT1Result:
    """First elementary Darboux transform built on the solution ``(phi1, phi2)``."""
    phi1, phi2 = eig.phi1, eig.phi2
    _guard(phi1.value, eig.x, eig.t, "phi1")
    f12, f21, u11, u12, u21, u22 = (
        seed.f12, seed.f21, seed.u11, seed.u12, seed.u21, seed.u22,
    )
    eps11 = -(phi1.d() + 0.5 * f12 * phi2) / phi1
    eps12 = 0.5 * f12
    eps21 = -phi2 / phi1

    nf12 = u12 + f12 * eps11
    nf21 = -2.0 * eps21
    nu11 = u11 - 2.0 * eps11.d() - nf12 * eps21 - f21 * eps12
    nu12 = u12.d() - eps12.d().d() + eps11 * u12 - eps12 * (nu11 + u22)
    nu21 = f21 - 2.0 * eps21.d() - nf21 * eps11
    nu22 = u22 - eps21 * u12 - nu21 * eps12 - nf21 * eps12.d()
    return DT1Result(PotentialSample(nf12, nf21, nu11, nu12, nu21, nu22), eps11, eps12, eps21)


def transform_eigen(dt1: DT1Result, other: EigenSample) -> EigenSample:
    """Image of a second solution ``(phi3, phi4)`` under the first transform."""
    phi3, phi4 = other.phi1, other.phi2
    new1 = phi3.d() + dt1.eps11 * phi3 + dt1.eps12 * phi4
    new2 = phi4 + dt1.eps21 * phi3
    return EigenSample(new1, new2, other.x, other.t)


def dt2_apply(seed: PotentialSample, eig: EigenSample) -> DT2Result:
    """Second elementary transform: the first one with component indices 1 and 2 exchanged."""
    phi1, phi2 = eig.phi1, eig.phi2
    _guard(phi2.value, eig.x, eig.t, "transformed phi2")
    f12, f21, u11, u12, u21, u22 = (
        seed.f12, seed.f21, seed.u11, seed.u12, seed.u21, seed.u22,
    )
    eps22 = -(phi2.d() + 0.5 * f21 * phi1) / phi2
    eps21 = 0.5 * f21
    eps12 = -phi1 / phi2

    nf21 = u21 + f21 * eps22
    nf12 = -2.0 * eps12
    nu22 = u22 - 2.0 * eps22.d() - nf21 * eps12 - f12 * eps21
    nu21 = u21.d() - eps21.d().d() + eps22 * u21 - eps21 * (nu22 + u11)
    nu12 = f12 - 2.0 * eps12.d() - nf12 * eps22
    nu11 = u11 - eps12 * u21 - nu12 * eps21 - nf12 * eps21.d()
    return DT2Result(PotentialSample(nf12, nf21, nu11, nu12, nu21, nu22), eps22, eps12, eps21)


@dataclass
class CompoundResult:
    f: np.ndarray
    u: np.ndarray
    v: np.ndarray
    first: DT1Result
    second: DT2Result
    transformed: EigenSample = field(repr=False)


def compound_dt(params: SpectralParams, consts: WaveConstants, x, t, order: int = 5) -> CompoundResult:
    """Apply both elementary transforms to the zero seed under the sigma_1 reduction.

    The solution at ``-lam`` fed to the first transform is ``(phi2, phi1)(lam)``.
    Returns f = f12, u = u11, v = u12 of the twice-transformed potentials.
    """
    eig = eigenpair(params, consts, x, t, order=order)
    seed = PotentialSample.zero(order + 2, np.shape(eig.x))
    first = dt1_apply(seed, eig)
    moved = transform_eigen(first, eig.swapped())
    second = dt2_apply(first.potentials, moved)
    pot = second.potentials
    return CompoundResult(pot.f12.value, pot.u11.value, pot.u12.value, first, second, moved)
