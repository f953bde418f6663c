"""Casimir pressure on a slab inside a cavity (five-layer geometry).

wall | vacuum | slab (width b) | vacuum | wall, cavity width c = a + a' + b,
h = c - b.  delta is the offset of the slab centre from the cavity
midline; the pressure is positive for delta > 0 (the slab is pulled
toward the nearer wall) and antisymmetric in delta.

The hyperbolic factors are evaluated through e^(-kappa0 (h -+ 2 delta))
so nothing overflows when kappa0 delta is large; the slowest-decaying
exponential sets the integration variable y = kappa0 (h - 2 |delta|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .constants import (C_LIGHT, HBAR_C, K_BOLTZMANN, PI,
                        matsubara_frequency)
from .dielectric import DielectricModel, Ideal, Vacuum, eps_imag, zero_mode_limit
from .lifshitz import TE, TM, PressureResult
from .numerics import (QuadratureSettings, _Neumaier, adaptive_quad,
                       matsubara_sum)

#: configurations with |denominator| below this are reported as singular
_DENOM_FLOOR = 1e-12

#: lower cutoff of the dimensionless T = 0 frequency integral
_X_LO = 1e-8


class SingularConfigurationError(ArithmeticError):
    """The five-layer denominator vanished; not expected for passive media."""


@dataclass(frozen=True)
class FiveLayerConfig:
    """Slab of width b at offset delta inside a cavity of width c."""

    cavity_c: float                 # m, total width c = a + a' + b
    slab_b: float                   # m
    offset_delta: float             # m, slab centre minus cavity midline
    wall_model: DielectricModel
    slab_model: DielectricModel
    temperature_T: float            # K
    quad: QuadratureSettings = field(default_factory=QuadratureSettings)

    def __post_init__(self):
        if not 0.0 < self.slab_b < self.cavity_c:
            raise ValueError("need 0 < b < c")
        if abs(self.offset_delta) >= (self.cavity_c - self.slab_b) / 2.0:
            raise ValueError("|delta| must be below (c - b)/2")
        if self.temperature_T < 0.0:
            raise ValueError("temperature must be non-negative")

    @property
    def h(self) -> float:
        """Total vacuum width c - b."""
        return self.cavity_c - self.slab_b


def _wall_slab_deltas(config: FiveLayerConfig, zeta: float, kperp, pol: str):
    """(Delta_1q, Delta_2q): vacuum->wall and vacuum->slab coefficients."""
    out = []
    for model in (config.wall_model, config.slab_model):
        if isinstance(model, Ideal):
            out.append(1.0 if pol == TE else -1.0)
            continue
        if isinstance(model, Vacuum):
            out.append(np.zeros_like(np.asarray(kperp, dtype=float)))
            continue
        if zeta == 0.0:
            lim = zero_mode_limit(model)
            if pol == TM:
                out.append(-1.0)
            elif lim.kind == "vanishing":
                out.append(0.0)
            elif lim.kind == "finite":
                root = np.sqrt(kperp * kperp + lim.value)
                out.append((root - kperp) / (root + kperp))
            else:
                out.append(-1.0)
            continue
        eps = eps_imag(model, zeta)
        k0 = np.sqrt(kperp * kperp + (zeta / C_LIGHT) ** 2)
        k = np.sqrt(kperp * kperp + eps * (zeta / C_LIGHT) ** 2)
        if pol == TE:
            out.append((k - k0) / (k + k0))
        else:
            out.append((k - eps * k0) / (k + eps * k0))
    return out[0], out[1]


def _slab_kappa(config: FiveLayerConfig, zeta: float, kperp):
    """kappa inside the slab; infinite for an Ideal slab (factor e^-2kb -> 0)."""
    model = config.slab_model
    if isinstance(model, Ideal):
        return np.inf
    if zeta == 0.0:
        lim = zero_mode_limit(model)
        if lim.kind == "infinite":
            return np.inf
        add = lim.value if lim.kind == "finite" else 0.0
        return np.sqrt(kperp * kperp + add)
    eps = eps_imag(model, zeta)
    return np.sqrt(kperp * kperp + eps * (zeta / C_LIGHT) ** 2)


def _ratio(config: FiveLayerConfig, zeta: float, kperp, kappa0, pol: str):
    """I_q / (k_perp kappa0): the geometric factor of the integrand."""
    d1, d2 = _wall_slab_deltas(config, zeta, kperp, pol)
    kappa2 = _slab_kappa(config, zeta, kperp)
    b_fac = np.where(np.isinf(kappa2), 0.0,
                     np.exp(-2.0 * np.minimum(kappa2, 400.0 / config.slab_b)
                            * config.slab_b))
    h = config.h
    delta = config.offset_delta
    e_near = np.exp(-kappa0 * (h - 2.0 * delta))
    e_far = np.exp(-kappa0 * (h + 2.0 * delta))
    num = d1 * d2 * (1.0 - b_fac) * (e_near - e_far)
    den = (1.0 - d2 * d2 * b_fac
           - d1 * d1 * e_near * e_far * (b_fac - d2 * d2)
           - d1 * d2 * (1.0 - b_fac) * (e_near + e_far))
    if np.any(np.abs(den) < _DENOM_FLOOR):
        raise SingularConfigurationError(
            "five-layer denominator within 1e-12 of zero")
    return num / den


def five_layer_integrand(config: FiveLayerConfig, zeta: float, k_perp,
                         polarization: str):
    """Pointwise integrand I_q(i zeta, k_perp); antisymmetric in delta.

    zeta = 0 (k_perp > 0 required) is served from the analytic zero-mode
    limits, as in the three-layer module.
    """
    if polarization not in (TE, TM):
        raise ValueError("polarization must be 'TE' or 'TM'")
    if zeta < 0.0:
        raise ValueError("zeta must be non-negative")
    kperp = np.asarray(k_perp, dtype=float)
    if zeta == 0.0 and np.any(kperp <= 0.0):
        raise ValueError("k_perp must be positive at zeta = 0")
    kappa0 = np.sqrt(kperp * kperp + (zeta / C_LIGHT) ** 2)
    out = kperp * kappa0 * _ratio(config, zeta, kperp, kappa0, polarization)
    if np.ndim(k_perp) == 0:
        return float(out)
    return out


def _mode_term(config: FiveLayerConfig, m: int, pol: str, scale: float,
               settings: QuadratureSettings):
    """Full-weight Matsubara term of one polarization, with its quad error."""
    T = config.temperature_T
    zeta = matsubara_frequency(T, m)
    x = scale * zeta / C_LIGHT
    if x >= settings.y_max:
        return 0.0, 0.0

    def f(y):
        kappa0 = y / scale
        kperp = np.sqrt(np.maximum(y * y - x * x, 0.0)) / scale
        return y * y * _ratio(config, zeta, kperp, kappa0, pol)

    pref = K_BOLTZMANN * T / (PI * scale**3)
    val, err = adaptive_quad(f, x, settings.y_max, settings)
    return pref * val, abs(pref) * err


def five_layer_pressure(config: FiveLayerConfig) -> PressureResult:
    """Net pressure on the slab; positive pushes it toward the nearer wall.

    delta = 0 gives exactly zero (odd integrand).  T > 0 is the primed
    Matsubara sum (m = 0 through the analytic zero-mode limits); T = 0 is
    the double integral.
    """
    if config.offset_delta == 0.0:
        return PressureResult(0.0, 0.0, 0.0, [], 0.0)
    scale = config.h - 2.0 * abs(config.offset_delta)
    settings = config.quad

    if config.temperature_T == 0.0:
        return _five_layer_zero_t(config, scale)

    zeta1 = matsubara_frequency(config.temperature_T, 1)
    min_m = max(1, math.ceil(3.0 * C_LIGHT / scale / zeta1))
    cache = {}

    def term(m: int) -> float:
        te, te_err = _mode_term(config, m, TE, scale, settings)
        tm, tm_err = _mode_term(config, m, TM, scale, settings)
        cache[m] = (te, tm, te_err + tm_err)
        return te + tm

    _, diag = matsubara_sum(term, settings, min_m=min_m)
    te_acc, tm_acc = _Neumaier(), _Neumaier()
    per_mode: List[Tuple[int, float]] = []
    err = 0.0
    for m in sorted(cache):
        w = 0.5 if m == 0 else 1.0
        te, tm, mode_err = cache[m]
        te_acc.add(w * te)
        tm_acc.add(w * tm)
        err += w * mode_err
        per_mode.append((m, w * (te + tm)))
    err += diag.truncation_estimate
    return PressureResult(te_acc.value + tm_acc.value, te_acc.value,
                          tm_acc.value, per_mode, err)


def _five_layer_zero_t(config: FiveLayerConfig, scale: float) -> PressureResult:
    settings = config.quad
    inner = settings.scaled(0.1)
    y_max = settings.y_max
    pref = HBAR_C / (2.0 * PI**2 * scale**4)

    def inner_j(x: float, pol: str) -> float:
        if x >= y_max:
            return 0.0
        zeta = x * C_LIGHT / scale

        def f(y):
            kappa0 = y / scale
            kperp = np.sqrt(np.maximum(y * y - x * x, 0.0)) / scale
            return y * y * _ratio(config, zeta, kperp, kappa0, pol)

        val, _ = adaptive_quad(f, x, y_max, inner)
        return val

    parts = {}
    err_total = 0.0
    for pol in (TE, TM):
        def outer(u):
            u = np.atleast_1d(u)
            return np.array([math.exp(ui) * inner_j(math.exp(ui), pol)
                             for ui in u])

        val, err = adaptive_quad(outer, math.log(_X_LO), math.log(y_max),
                                 settings)
        tail = _X_LO * abs(inner_j(_X_LO, pol))
        parts[pol] = pref * val
        err_total += abs(pref) * (err + tail) + abs(parts[pol]) * inner.rel_tol
    total = parts[TE] + parts[TM]
    return PressureResult(total, parts[TE], parts[TM], [], err_total)


def ideal_reference(h: float, delta: float) -> float:
    """Perfect-conductor reference pressure on the slab, Pa.

    -(pi^2 hbar c/240) [1/(h/2 + delta)^4 - 1/(h/2 - delta)^4]; positive
    for delta > 0 since the nearer wall attracts more strongly.
    """
    if h <= 0.0:
        raise ValueError("h must be positive")
    if abs(delta) >= h / 2.0:
        raise ValueError("|delta| must be below h/2")
    return -(PI**2 * HBAR_C / 240.0) * ((h / 2.0 + delta) ** -4
                                        - (h / 2.0 - delta) ** -4)
