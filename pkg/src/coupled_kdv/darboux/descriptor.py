"""A picklable description of an analytic family that can be sampled anywhere."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classify import r_denominator
from .families import reduced_jets, reduced_solution, r_family, two_component
from .transforms import SpectralParams, WaveConstants

KINDS = ("r", "reduced", "two-component")

LABELS = {
    "r": ("f", "u", "v"),
    "reduced": ("f", "u", "v"),
    "two-component": ("f21", "u11", "u21"),
}


@dataclass(frozen=True)
class AnalyticFamily:
    """``kind="r"`` uses ``a`` and ``r``; the other kinds use ``lam`` (or ``a``) and ``consts``."""

    kind: str
    a: complex | None = None
    r: float = 0.5
    lam: complex | None = None
    consts: WaveConstants = field(default_factory=WaveConstants)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; choose from {KINDS}")
        if self.a is None and self.lam is None:
            raise ValueError("family needs either a or lam")
        if self.kind == "r" and (self.a is None or complex(self.a).imag != 0):
            raise ValueError("the r family needs a real a")

    @property
    def params(self) -> SpectralParams:
        if self.lam is not None:
            return SpectralParams.from_lambda(self.lam)
        return SpectralParams.from_a(self.a)

    @property
    def labels(self) -> tuple[str, ...]:
        return LABELS[self.kind]

    def evaluate(self, x, t) -> dict[str, np.ndarray]:
        """Complex field values keyed by label; raises on singular samples."""
        if self.kind == "r":
            vals = r_family(complex(self.a).real, self.r, x, t)
        elif self.kind == "reduced":
            vals = reduced_solution(self.params, self.consts, x, t)
        else:
            vals = two_component(self.params, self.consts, x, t)
        return {lab: np.asarray(v, dtype=complex) for lab, v in zip(self.labels, vals)}

    def denominator(self, x, t) -> np.ndarray:
        x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
        if self.kind == "r":
            return r_denominator(complex(self.a).real, self.r, x, t).astype(complex)
        if self.kind == "reduced":
            _, D, _ = reduced_jets(self.params, self.consts, x, t, order=0)
            return D.value
        a, c = self.params.a, self.consts
        s = a * (a**2 * t + x)
        return c.c2 * np.exp(-s) + c.c1 * np.exp(s)

    def to_dict(self) -> dict:
        def pair(z):
            z = complex(z)
            return [z.real, z.imag]

        out = {"kind": self.kind, "r": self.r}
        if self.a is not None:
            out["a"] = pair(self.a)
        if self.lam is not None:
            out["lambda"] = pair(self.lam)
        out["constants"] = {k: pair(getattr(self.consts, k)) for k in ("c1", "c2", "d1", "d2")}
        return out
