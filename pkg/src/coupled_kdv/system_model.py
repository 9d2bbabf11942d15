"""Constant-coefficient coupled KdV-MKdV systems.

Component n evolves by

    theta^n_t + sum_{m,k} ( g1 theta^m theta^k_x
                          + g2 (theta^m)^2 theta^k_x
                          + g3 theta^m_x theta^k_x
                          + g4 theta^m theta^k_xx
                          + g5 theta^m theta^k theta^k_x ) + d_n theta^n_xxx = 0

where g_l = g[l, n, m, k].  Coefficient keys are 1-based ``(l, n, m, k)``
tuples; absent keys are zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

N_TERMS = 5

TERM_NAMES = {
    1: "theta^m theta^k_x",
    2: "(theta^m)^2 theta^k_x",
    3: "theta^m_x theta^k_x",
    4: "theta^m theta^k_xx",
    5: "theta^m theta^k theta^k_x",
}


class SystemSpecError(ValueError):
    """Raised when a system cannot be constructed."""


@dataclass(frozen=True)
class SystemSpec:
    n_components: int
    g: Mapping[tuple[int, int, int, int], float]
    d: tuple[float, ...]
    labels: tuple[str, ...]

    def index(self, comp: int | str) -> int:
        """1-based component index from an index or a label."""
        if isinstance(comp, str):
            try:
                return self.labels.index(comp) + 1
            except ValueError:
                raise KeyError(f"no component labelled {comp!r}") from None
        return int(comp)

    def coefficient(self, l: int, n: int | str, m: int | str, k: int | str) -> float:
        return self.g.get((l, self.index(n), self.index(m), self.index(k)), 0.0)

    def nonzero(self) -> dict[tuple[int, int, int, int], float]:
        return {key: val for key, val in self.g.items() if val != 0.0}

    @property
    def g_max(self) -> float:
        return max((abs(v) for v in self.g.values()), default=0.0)

    @property
    def d_max(self) -> float:
        return max((abs(v) for v in self.d), default=0.0)

    def term_arrays(self) -> dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
        """Per term type l: 0-based (n, m, k) index arrays and coefficient values."""
        out = {}
        for l in range(1, N_TERMS + 1):
            rows = [(n - 1, m - 1, k - 1, v) for (ll, n, m, k), v in sorted(self.nonzero().items()) if ll == l]
            if rows:
                n, m, k, v = zip(*rows)
                out[l] = (np.array(n), np.array(m), np.array(k), np.array(v, dtype=float))
        return out

    def to_dict(self) -> dict:
        return {
            "n_components": self.n_components,
            "dispersion": list(self.d),
            "labels": list(self.labels),
            "coefficients": [
                {"l": l, "n": n, "m": m, "k": k, "value": v}
                for (l, n, m, k), v in sorted(self.g.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SystemSpec":
        unknown = set(data) - {"n_components", "dispersion", "labels", "coefficients"}
        if unknown:
            raise SystemSpecError(f"unknown system keys: {sorted(unknown)}")
        try:
            coeffs = {}
            for rec in data.get("coefficients", []):
                key = (int(rec["l"]), int(rec["n"]), int(rec["m"]), int(rec["k"]))
                if key in coeffs:
                    raise SystemSpecError(f"duplicate coefficient {key}")
                coeffs[key] = float(rec["value"])
            n = int(data["n_components"])
            return make_system(n, coeffs, data["dispersion"], data.get("labels") or [f"theta{i + 1}" for i in range(n)])
        except (KeyError, TypeError) as exc:
            raise SystemSpecError(f"malformed system record: {exc}") from exc


@dataclass
class Diagnostics:
    warnings: list[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not any(w.startswith("fatal:") for w in self.warnings)


def make_system(
    n_components: int,
    coefficients: Mapping[tuple[int, int, int, int], float],
    dispersion: Sequence[float],
    labels: Sequence[str],
) -> SystemSpec:
    if n_components < 1:
        raise SystemSpecError("n_components must be at least 1")
    if len(dispersion) != n_components:
        raise SystemSpecError(f"expected {n_components} dispersion coefficients, got {len(dispersion)}")
    if len(labels) != n_components:
        raise SystemSpecError(f"expected {n_components} labels, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise SystemSpecError(f"labels must be unique: {list(labels)}")
    g = {}
    for key, value in coefficients.items():
        if len(key) != 4:
            raise SystemSpecError(f"coefficient key {key} is not (l, n, m, k)")
        l, n, m, k = (int(i) for i in key)
        if not 1 <= l <= N_TERMS:
            raise SystemSpecError(f"term type l={l} outside 1..{N_TERMS}")
        for name, i in (("n", n), ("m", m), ("k", k)):
            if not 1 <= i <= n_components:
                raise SystemSpecError(f"index {name}={i} outside 1..{n_components} in {key}")
        value = float(value)
        if not math.isfinite(value):
            raise SystemSpecError(f"non-finite coefficient {value} at {key}")
        g[(l, n, m, k)] = value
    d = tuple(float(v) for v in dispersion)
    if not all(math.isfinite(v) for v in d):
        raise SystemSpecError(f"non-finite dispersion coefficient in {d}")
    return SystemSpec(n_components, MappingProxyType(dict(sorted(g.items()))), d, tuple(str(s) for s in labels))


def validate(spec: SystemSpec) -> Diagnostics:
    """Never raises; collects problems, prefixing unrecoverable ones with ``fatal:``."""
    diag = Diagnostics()
    N = spec.n_components
    if len(spec.d) != N or len(spec.labels) != N:
        diag.warnings.append("fatal: dispersion/labels length does not match n_components")
    if len(set(spec.labels)) != len(spec.labels):
        diag.warnings.append("fatal: duplicate component labels")
    for key, v in spec.g.items():
        l, n, m, k = key
        if not (1 <= l <= N_TERMS and all(1 <= i <= N for i in (n, m, k))):
            diag.warnings.append(f"fatal: dangling coefficient index {key}")
        if not math.isfinite(v):
            diag.warnings.append(f"fatal: non-finite coefficient {v} at {key}")
    for n, v in enumerate(spec.d, start=1):
        if not math.isfinite(v):
            diag.warnings.append(f"fatal: non-finite dispersion d_{n} = {v}")
    if not spec.nonzero() and not any(spec.d):
        diag.warnings.append("trivial dynamics: every coefficient is zero")
    return diag


def _kdv() -> SystemSpec:
    return make_system(1, {(1, 1, 1, 1): -1.5}, [-0.25], ["u11"])


def _kdv_mkdv_3() -> SystemSpec:
    # (u f)_x, (f_x v)_x and (v f^2)_x expanded by the product rule;
    # each symmetric product sits in a single (m, k) slot.
    F, U, V = 1, 2, 3
    g = {
        (1, F, U, F): 1.5,     # u f_x
        (1, F, F, U): 1.5,     # f u_x
        (2, F, F, F): -0.75,   # f^2 f_x
        (1, U, U, U): -1.5,    # u u_x
        (1, U, V, V): 3.0,     # v v_x
        (2, U, F, U): 0.75,    # f^2 u_x
        (3, U, F, V): -1.5,    # f_x v_x
        (4, U, V, F): -1.5,    # v f_xx
        (1, V, U, V): 1.5,     # u v_x
        (2, V, F, V): -0.75,   # f^2 v_x
        (3, V, U, F): 1.5,     # u_x f_x
        (4, V, F, U): 0.75,    # f u_xx
        (5, V, V, F): -1.5,    # v f f_x
    }
    return make_system(3, g, [0.5, -0.25, 0.5], ["f", "u", "v"])


PRESETS = {"kdv": _kdv, "kdv-mkdv-3": _kdv_mkdv_3}


def preset(name: str) -> SystemSpec:
    try:
        return PRESETS[name]()
    except KeyError:
        raise LookupError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
