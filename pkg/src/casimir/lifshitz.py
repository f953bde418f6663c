"""Three-layer Casimir pressure, free energy and entropy.

Half-space | vacuum gap | half-space, at T = 0 and T > 0.  The T > 0 path
is a primed Matsubara sum; the T = 0 path is a double integral over
imaginary frequency and transverse wavenumber.  Each Matsubara term is
integrated in the dimensionless variable y = 2 a kappa0 in [2 a zeta_m /
c, y_max], which makes the exponential weight e^-y explicit; the T = 0
outer integral runs in x = 2 a zeta / c on a logarithmic axis so the
Drude knee at zeta ~ gamma is resolved.

The m = 0 term is never computed by evaluating eps at zeta = 0: the
engine requests analytic zeta -> 0 limits through
dielectric.zero_mode_limit, which is where the presence or absence of the
TE zero mode enters.

All operations are pure; per-term integrals may be evaluated concurrently
by callers but the reduction is always in ascending m order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, NamedTuple, Tuple

import numpy as np

from .constants import (C_LIGHT, HBAR, HBAR_C, K_BOLTZMANN, PI, ZETA3,
                        ideal_casimir_pressure, matsubara_frequency,
                        thermal_wavenumber)
from .dielectric import (DielectricModel, Ideal, Vacuum, eps_imag,
                         zero_mode_limit)
from .numerics import (ConvergenceError, QuadratureSettings, _Neumaier,
                       adaptive_quad, guarded_derivative, matsubara_sum)

#: lower cutoff of the dimensionless T = 0 frequency integral; the
#: integrand is bounded as x -> 0, so the dropped slice is O(x_lo) and is
#: charged to the error estimate.
_X_LO = 1e-8

TE = "TE"
TM = "TM"


class ZeroModePolicy(Enum):
    """How the m = 0 reflection coefficients are chosen.

    FROM_MODEL      analytic zeta -> 0 limits of the dielectric model.
    FORCE_IDEAL_BOTH  eps -> infinity taken before zeta -> 0: both
                    polarizations reflect ideally at m = 0 (requires
                    Ideal plates).
    EXCLUDE_TE      modified ideal metal: ideal reflection everywhere,
                    TE m = 0 dropped (requires Ideal plates).
    """

    FROM_MODEL = "from-model"
    FORCE_IDEAL_BOTH = "force-ideal-both"
    EXCLUDE_TE = "exclude-te"


@dataclass(frozen=True)
class PlateConfig:
    """Two half-spaces separated by a vacuum gap."""

    left: DielectricModel
    right: DielectricModel
    gap_a: float                    # m
    temperature_T: float            # K, 0 allowed
    policy: ZeroModePolicy = ZeroModePolicy.FROM_MODEL
    quad: QuadratureSettings = field(default_factory=QuadratureSettings)

    def __post_init__(self):
        if self.gap_a <= 0.0:
            raise ValueError("gap must be positive")
        if self.temperature_T < 0.0:
            raise ValueError("temperature must be non-negative")
        if self.policy is not ZeroModePolicy.FROM_MODEL:
            if not (isinstance(self.left, Ideal) and isinstance(self.right, Ideal)):
                raise ValueError(
                    f"policy {self.policy.value} requires both plates Ideal")


@dataclass(frozen=True)
class PressureResult:
    """Total pressure with polarization split and per-term breakdown.

    Attraction is negative.  per_mode holds (m, contribution) with the
    m = 0 half weight already applied, so the contributions sum to total;
    it is empty on the T = 0 pathway, which has no discrete modes.
    """

    total: float                    # Pa
    te_part: float                  # Pa
    tm_part: float                  # Pa
    per_mode: List[Tuple[int, float]]
    est_error: float                # Pa


@dataclass(frozen=True)
class ThermoResult:
    """Free energy, entropy and the -dF/da consistency check."""

    free_energy_F: float            # J/m^2
    entropy_S: float                # J/(m^2 K)
    pressure_check: float           # Pa, -dF/da by finite differences


class MimCorrections(NamedTuple):
    linear_pressure_term: float     # Pa, low-T shift from dropping TE m = 0
    high_T_pressure: float          # Pa, half the ideal-metal linear term
    ratio_to_PC: float              # predicted P/P_C at this (a, T)


def kappa(eps: float, zeta: float, k_perp: float) -> float:
    """Longitudinal wavenumber sqrt(k_perp^2 + eps zeta^2 / c^2) in 1/m."""
    if eps < 1.0:
        raise ValueError("eps must be >= 1")
    if zeta < 0.0 or k_perp < 0.0:
        raise ValueError("zeta and k_perp must be non-negative")
    if zeta == 0.0 and np.all(np.asarray(k_perp) == 0.0):
        raise ValueError("zeta and k_perp cannot both vanish")
    return np.sqrt(k_perp * k_perp + eps * (zeta / C_LIGHT) ** 2)


def reflection_coefficients(model: DielectricModel, zeta: float,
                            k_perp: float):
    """(delta_TE, delta_TM) at imaginary frequency zeta and wavenumber k_perp.

    delta_TE = (kappa - kappa0)/(kappa + kappa0),
    delta_TM = (kappa - eps kappa0)/(kappa + eps kappa0).

    zeta = 0 (k_perp > 0 required) is served from the analytic limit:
    vanishing zeta^2 eps gives (0, -1), a finite limit L gives
    ((sqrt(k_perp^2+L) - k_perp)/(sqrt(k_perp^2+L) + k_perp), -1), the
    ideal conductor gives (-1, -1).  Only squared values or products of
    like coefficients enter observables, so the sign convention is
    internal but fixed as stated.
    """
    if zeta < 0.0:
        raise ValueError("zeta must be non-negative")
    if zeta == 0.0:
        if k_perp <= 0.0:
            raise ValueError("k_perp must be positive at zeta = 0")
        return _zero_mode_deltas(model, k_perp)
    if isinstance(model, Ideal):
        return 1.0, -1.0
    eps = eps_imag(model, zeta)
    k0 = kappa(1.0, zeta, k_perp)
    k = kappa(eps, zeta, k_perp)
    zc2 = (zeta / C_LIGHT) ** 2
    # difference-of-squares forms avoid the kappa - kappa0 cancellation
    # when eps is close to 1
    d_te = (eps - 1.0) * zc2 / (k + k0) ** 2
    d_tm = -(eps - 1.0) * (k_perp**2 * (1.0 + eps) + eps * zc2) \
        / (k + eps * k0) ** 2
    return d_te, d_tm


def _zero_mode_deltas(model: DielectricModel, k_perp: float):
    if isinstance(model, Vacuum):
        return 0.0, 0.0
    lim = zero_mode_limit(model)
    if lim.kind == "vanishing":
        return 0.0, -1.0
    if lim.kind == "finite":
        root = math.sqrt(k_perp * k_perp + lim.value)
        return (root - k_perp) / (root + k_perp), -1.0
    return -1.0, -1.0


# ---------------------------------------------------------------------------
# reflection products on the dimensionless (x, y) grid
#
# x = 2 a zeta / c, y = 2 a kappa0; a plate's coefficients at a point are
# functions of kt = 2 a kappa = sqrt(y^2 + (eps - 1) x^2).
# ---------------------------------------------------------------------------

_CONST = "const"
_BULK = "bulk"
_ZFINITE = "zfinite"


def _plate_spec(model: DielectricModel, zeta: float, x: float):
    """Per-plate reflection recipe at fixed Matsubara frequency."""
    if isinstance(model, Ideal):
        return (_CONST, 1.0, -1.0)
    if isinstance(model, Vacuum):
        return (_CONST, 0.0, 0.0)
    return (_BULK, eps_imag(model, zeta), x)


def _plate_spec_zero(model: DielectricModel, length_scale: float):
    """Per-plate recipe at m = 0; length_scale converts 1/m^2 limits to y units."""
    if isinstance(model, Vacuum):
        return (_CONST, 0.0, 0.0)
    lim = zero_mode_limit(model)
    if lim.kind == "vanishing":
        return (_CONST, 0.0, -1.0)
    if lim.kind == "finite":
        return (_ZFINITE, length_scale**2 * lim.value, None)
    return (_CONST, -1.0, -1.0)


def _plate_delta(spec, y, pol: str):
    kind = spec[0]
    if kind == _CONST:
        return spec[1] if pol == TE else spec[2]
    if kind == _BULK:
        eps, x = spec[1], spec[2]
        kt = np.sqrt(y * y + (eps - 1.0) * x * x)
        if pol == TE:
            return (kt - y) / (kt + y)
        return (kt - eps * y) / (kt + eps * y)
    # _ZFINITE: plasma-like finite limit, TM saturates at -1
    lt = spec[1]
    if pol == TE:
        root = np.sqrt(y * y + lt)
        return (root - y) / (root + y)
    return -1.0


def _product_is_zero(spec_l, spec_r, pol: str) -> bool:
    for spec in (spec_l, spec_r):
        if spec[0] == _CONST and (spec[1] if pol == TE else spec[2]) == 0.0:
            return True
    return False


def _product_is_one(spec_l, spec_r, pol: str) -> bool:
    if spec_l[0] == _CONST and spec_r[0] == _CONST:
        dl = spec_l[1] if pol == TE else spec_l[2]
        dr = spec_r[1] if pol == TE else spec_r[2]
        return dl * dr == 1.0
    return False


def _pressure_kernel_exact_one(y):
    # y^2 e^-y / (1 - e^-y) without cancellation near y = 0
    return y * y * np.exp(-y) / (-np.expm1(-y))


def _free_kernel_exact_one(y):
    # log1p keeps full relative precision both at small y (argument near
    # -1) and at large y (argument near 0)
    return y * np.log1p(-np.exp(-y))


def _make_integrand(spec_l, spec_r, pol: str, kernel: str):
    """Vectorized y-integrand for one polarization, or None if identically 0."""
    if _product_is_zero(spec_l, spec_r, pol):
        return None
    if _product_is_one(spec_l, spec_r, pol):
        return _pressure_kernel_exact_one if kernel == "pressure" \
            else _free_kernel_exact_one

    if kernel == "pressure":
        def f(y):
            x_refl = _plate_delta(spec_l, y, pol) * _plate_delta(spec_r, y, pol)
            e = np.exp(-y)
            return y * y * x_refl * e / (1.0 - x_refl * e)
    else:
        def f(y):
            x_refl = _plate_delta(spec_l, y, pol) * _plate_delta(spec_r, y, pol)
            return y * np.log1p(-x_refl * np.exp(-y))
    return f


def _seed_points(lo: float, hi: float):
    """Interior breakpoints concentrating panels where e^-y still matters."""
    pts = {lo + 1.0, lo + 4.0, lo + 12.0, 30.0}
    return sorted(p for p in pts if lo < p < hi)


def _quad_with_seeds(f, lo, hi, settings):
    """adaptive_quad over [lo, hi] pre-split at the seed points."""
    return adaptive_quad(f, lo, hi, settings, seeds=_seed_points(lo, hi))


def _mode_specs(config: PlateConfig, m: int):
    """Plate recipes and TE suppression flag for Matsubara index m."""
    a = config.gap_a
    if m == 0:
        if config.policy is ZeroModePolicy.FORCE_IDEAL_BOTH:
            return (_CONST, 1.0, 1.0), (_CONST, 1.0, 1.0), False
        if config.policy is ZeroModePolicy.EXCLUDE_TE:
            return (_CONST, 0.0, 1.0), (_CONST, 1.0, 1.0), True
        return (_plate_spec_zero(config.left, 2.0 * a),
                _plate_spec_zero(config.right, 2.0 * a), False)
    zeta = matsubara_frequency(config.temperature_T, m)
    x = 2.0 * a * zeta / C_LIGHT
    return _plate_spec(config.left, zeta, x), _plate_spec(config.right, zeta, x), False


class _ModeParts(NamedTuple):
    te: float
    tm: float
    err: float


def _mode_parts(config: PlateConfig, m: int, kernel: str,
                settings: QuadratureSettings) -> _ModeParts:
    """One full-weight Matsubara term, split by polarization."""
    a = config.gap_a
    T = config.temperature_T
    if kernel == "pressure":
        pref = -K_BOLTZMANN * T / (8.0 * PI * a**3)
    else:
        pref = K_BOLTZMANN * T / (8.0 * PI * a**2)
    x = 2.0 * a * matsubara_frequency(T, m) / C_LIGHT
    if x >= settings.y_max:
        return _ModeParts(0.0, 0.0, 0.0)
    spec_l, spec_r, drop_te = _mode_specs(config, m)
    vals = {}
    err = 0.0
    for pol in (TE, TM):
        if pol == TE and drop_te:
            vals[pol] = 0.0
            continue
        f = _make_integrand(spec_l, spec_r, pol, kernel)
        if f is None:
            vals[pol] = 0.0
            continue
        v, e = _quad_with_seeds(f, x, settings.y_max, settings)
        vals[pol] = pref * v
        err += abs(pref) * e
    return _ModeParts(vals[TE], vals[TM], err)


def _thermal_sum(config: PlateConfig, kernel: str):
    """Run the primed Matsubara sum, keeping the per-mode breakdown."""
    settings = config.quad
    a = config.gap_a
    T = config.temperature_T
    zeta1 = matsubara_frequency(T, 1)
    knee = 3.0 * C_LIGHT / (2.0 * a)
    min_m = max(1, math.ceil(knee / zeta1))
    cache = {}

    def term(m: int) -> float:
        parts = _mode_parts(config, m, kernel, settings)
        cache[m] = parts
        return parts.te + parts.tm

    _, diag = matsubara_sum(term, settings, min_m=min_m)
    te_acc, tm_acc = _Neumaier(), _Neumaier()
    per_mode = []
    err = 0.0
    for m in sorted(cache):
        w = 0.5 if m == 0 else 1.0
        parts = cache[m]
        te_acc.add(w * parts.te)
        tm_acc.add(w * parts.tm)
        err += w * parts.err
        per_mode.append((m, w * (parts.te + parts.tm)))
    err += diag.truncation_estimate
    return te_acc.value, tm_acc.value, per_mode, err


def _zero_t_double_integral(config: PlateConfig, kernel: str, pref: float):
    """T = 0 pathway: outer log-axis frequency integral of inner y-integrals."""
    settings = config.quad
    inner = settings.scaled(0.1)
    a = config.gap_a
    y_max = settings.y_max

    def inner_j(x: float, pol: str) -> float:
        zeta = x * C_LIGHT / (2.0 * a)
        spec_l = _plate_spec(config.left, zeta, x)
        spec_r = _plate_spec(config.right, zeta, x)
        f = _make_integrand(spec_l, spec_r, pol, kernel)
        if f is None or x >= y_max:
            return 0.0
        v, _ = _quad_with_seeds(f, x, y_max, inner)
        return v

    results = {}
    err_total = 0.0
    for pol in (TE, TM):
        def outer(u):
            u = np.atleast_1d(u)
            return np.array([math.exp(ui) * inner_j(math.exp(ui), pol)
                             for ui in u])

        val, err = adaptive_quad(outer, math.log(_X_LO), math.log(y_max),
                                 settings)
        # bound on the dropped (0, x_lo) slice plus inner-quadrature noise
        tail = _X_LO * abs(inner_j(_X_LO, pol))
        results[pol] = pref * val
        err_total += abs(pref) * (err + tail) + abs(results[pol]) * inner.rel_tol
    return results[TE], results[TM], err_total


def pressure(config: PlateConfig) -> PressureResult:
    """Casimir pressure between the plates; negative values are attractive.

    T > 0: primed Matsubara sum with m = 0 at half weight and the m = 0
    reflection coefficients supplied per the zero-mode policy.  T = 0:
    double integral over imaginary frequency and transverse wavenumber.
    Dissimilar plates enter through the product of their reflection
    coefficients in each denominator.
    """
    if config.temperature_T == 0.0:
        pref = -HBAR_C / (32.0 * PI**2 * config.gap_a**4)
        te, tm, err = _zero_t_double_integral(config, "pressure", pref)
        return PressureResult(te + tm, te, tm, [], err)
    te, tm, per_mode, err = _thermal_sum(config, "pressure")
    return PressureResult(te + tm, te, tm, per_mode, err)


def free_energy(config: PlateConfig) -> float:
    """Casimir free energy per unit area, J/m^2; normalised to 0 at a -> inf."""
    if config.temperature_T == 0.0:
        pref = HBAR_C / (32.0 * PI**2 * config.gap_a**3)
        te, tm, _ = _zero_t_double_integral(config, "free", pref)
        return te + tm
    te, tm, _, _ = _thermal_sum(config, "free")
    return te + tm


def entropy(config: PlateConfig) -> float:
    """Entropy per unit area S = -dF/dT, J/(m^2 K), by guarded differences.

    The step starts at max(0.01 T, 0.1 K) and is adapted once in each
    direction; the computation aborts if the two Richardson levels keep
    disagreeing by more than ten times the requested tolerance, which
    signals that the free-energy noise floor is too high for the step.
    """
    T = config.temperature_T
    if T <= 0.0:
        raise ValueError("entropy requires T > 0")
    settings = config.quad

    def f_of_t(temp: float) -> float:
        return free_energy(replace(config, temperature_T=temp))

    f_scale = abs(free_energy(config))
    h0 = min(max(0.01 * T, 0.1), 0.5 * T)
    candidates = [h0, min(2.0 * h0, 0.5 * T), 0.5 * h0]
    best = None
    for h in candidates:
        if h <= 0.0 or T - h <= 0.0:
            continue
        val, err = guarded_derivative(f_of_t, T, h)
        # each F evaluation carries ~rel_tol noise, which the central
        # difference amplifies by 1/h; demanding better than that floor
        # would loop forever.  A 0.5% agreement of the two Richardson
        # levels is likewise accepted: that is step-limited, not noise,
        # and far tighter than any downstream use of S.
        tol = max(settings.rel_tol * abs(val),
                  settings.rel_tol * f_scale / (2.0 * h), 5e-324)
        if err <= max(10.0 * tol, 5e-3 * abs(val)):
            return -val
        if best is None or err < best[1]:
            best = (val, err)
    raise ConvergenceError(
        "entropy derivative did not stabilise: successive estimates differ "
        f"by {best[1]:.3e}, more than 10x the tolerance; tighten rel_tol or "
        "reconsider the step", partial=-best[0], error_estimate=best[1])


def thermo(config: PlateConfig) -> ThermoResult:
    """Free energy, entropy, and the -dF/da pressure consistency value."""
    f_val = free_energy(config)
    s_val = entropy(config)

    def f_of_a(a: float) -> float:
        return free_energy(replace(config, gap_a=a))

    dfda, _ = guarded_derivative(f_of_a, config.gap_a, 0.01 * config.gap_a)
    return ThermoResult(f_val, s_val, -dfda)


def matsubara_summand(config: PlateConfig, m: int) -> Tuple[float, float]:
    """(f_total, f_te): the m-th pressure term at full weight, Pa.

    The half weight of m = 0 is applied by the summation engine, not here.
    For any model whose zeta^2 eps vanishes at zero frequency the TE part
    is exactly zero at m = 0, while the ideal-metal continuation of the
    same term tends to -zeta(3) k_B T / (4 pi a^3): the discontinuity that
    separates the Drude and ideal prescriptions.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if config.temperature_T <= 0.0:
        raise ValueError("matsubara_summand requires T > 0")
    parts = _mode_parts(config, m, "pressure", config.quad)
    return parts.te + parts.tm, parts.te


# ---------------------------------------------------------------------------
# ideal-metal closed forms and the modified-ideal-metal corrections
# ---------------------------------------------------------------------------

def _bose_tail(x: float) -> float:
    """g(x) = integral_x^inf y^2/(e^y - 1) dy; g(0) = 2 zeta(3)."""
    if x < 0.0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 2.0 * ZETA3
    if x <= 0.3:
        # g(0) minus the Bernoulli expansion of the complement integral
        head = (x**2 / 2.0 - x**3 / 6.0 + x**4 / 48.0 - x**6 / 4320.0
                + x**8 / 241920.0 - x**10 / 12096000.0)
        return 2.0 * ZETA3 - head
    if x > 700.0:
        return 0.0
    n = np.arange(1.0, math.ceil(45.0 / x) + 1.0)
    return float(np.sum(np.exp(-n * x) * (x * x / n + 2.0 * x / n**2 + 2.0 / n**3)))


def ideal_pressure(a: float, T: float, form: str = "exact_sum") -> float:
    """Perfect-conductor pressure at separation a and temperature T, Pa.

    form selects the exact primed sum, the high-temperature expansion
    -zeta(3) k_B T/(4 pi a^3) - (k_B T/(2 pi a^3))(1 + t + t^2/2) e^-t
    with t = 4 pi a k_B T/(hbar c), or the low-temperature expansion
    P_C [1 + (16/3) tau^4 - (240/pi) tau e^(-pi/tau)] with
    tau = a k_B T/(hbar c), exponentially small terms included.
    """
    if a <= 0.0:
        raise ValueError("a must be positive")
    if T < 0.0:
        raise ValueError("T must be non-negative")
    if form == "exact_sum":
        if T == 0.0:
            return ideal_casimir_pressure(a)
        t = 4.0 * PI * a * thermal_wavenumber(T)
        pref = -K_BOLTZMANN * T / (4.0 * PI * a**3)
        settings = QuadratureSettings(rel_tol=1e-9,
                                      matsubara_m_max=50_000_000)
        value, _ = matsubara_sum(lambda m: pref * _bose_tail(m * t), settings,
                                 min_m=max(1, math.ceil(3.0 / t)))
        return value
    if form == "high_T_asymptote":
        t = 4.0 * PI * a * thermal_wavenumber(T)
        lead = -ZETA3 * K_BOLTZMANN * T / (4.0 * PI * a**3)
        sub = -(K_BOLTZMANN * T / (2.0 * PI * a**3)) \
            * (1.0 + t + 0.5 * t * t) * math.exp(-t)
        return lead + sub
    if form == "low_T_asymptote":
        tau = a * thermal_wavenumber(T)
        bracket = 1.0 + (16.0 / 3.0) * tau**4
        if tau > 0.0:
            bracket -= (240.0 / PI) * tau * math.exp(-PI / tau)
        return ideal_casimir_pressure(a) * bracket
    raise ValueError(f"unknown form {form!r}")


def mim_corrections(a: float, T: float) -> MimCorrections:
    """Modified-ideal-metal corrections from dropping the TE zero mode.

    Returns the +zeta(3) k_B T/(8 pi a^3) low-temperature pressure shift,
    the high-temperature limit -zeta(3) k_B T/(8 pi a^3) (half the ideal
    value), and the predicted ratio P/P_C = 1 - 30 zeta(3)/pi^3 * a k_B T
    /(hbar c).
    """
    if a <= 0.0 or T <= 0.0:
        raise ValueError("a and T must be positive")
    amp = ZETA3 * K_BOLTZMANN * T / (8.0 * PI * a**3)
    ratio = 1.0 - 30.0 * ZETA3 / PI**3 * a * thermal_wavenumber(T)
    return MimCorrections(amp, -amp, ratio)


def sphere_plate_force(radius: float, config: PlateConfig,
                       ideal_expansion: bool = False) -> float:
    """Sphere-plate force by the proximity force approximation, newtons.

    F = 2 pi R F(a) with F(a) the parallel-plate free energy per area at
    the closest separation a = config.gap_a.  With ideal_expansion the
    closed modified-ideal-metal low-temperature series
    -(pi^3 hbar c R/360 a^3)[1 - 45 zeta(3) (a T~)/pi^3
    + 360 zeta(3) (a T~)^3/pi^3 - 16 (a T~)^4], T~ = k_B T/(hbar c),
    is returned instead.
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    a = config.gap_a
    if radius < 10.0 * a:
        warnings.warn("proximity force approximation is unreliable for "
                      f"R = {radius:g} < 10 a = {10 * a:g}", stacklevel=2)
    if ideal_expansion:
        at = a * thermal_wavenumber(config.temperature_T)
        bracket = (1.0 - 45.0 * ZETA3 * at / PI**3
                   + 360.0 * ZETA3 * at**3 / PI**3 - 16.0 * at**4)
        return -PI**3 * HBAR_C * radius / (360.0 * a**3) * bracket
    return 2.0 * PI * radius * free_energy(config)


def integrand_grid(config: PlateConfig, zeta_grid, kperp_grid):
    """Pointwise T = 0 integrands (I_TE, I_TM) on a (zeta, k_perp) grid.

    Normalised so that integrating I_TE + I_TM with dzeta dk_perp measures
    reproduces pressure(config).total.  Shapes: (len(zeta), len(k_perp)).
    """
    if config.temperature_T != 0.0:
        raise ValueError("integrand_grid is the T = 0 pathway")
    zeta_grid = np.asarray(zeta_grid, dtype=float)
    kperp_grid = np.asarray(kperp_grid, dtype=float)
    if np.any(zeta_grid <= 0.0) or np.any(kperp_grid <= 0.0):
        raise ValueError("grids must be strictly positive")
    a = config.gap_a
    pref = -HBAR / (2.0 * PI**2)
    i_te = np.empty((len(zeta_grid), len(kperp_grid)))
    i_tm = np.empty_like(i_te)
    for i, zeta in enumerate(zeta_grid):
        k0 = np.sqrt(kperp_grid**2 + (zeta / C_LIGHT) ** 2)
        e = np.exp(-2.0 * k0 * a)
        for pol, out in ((TE, i_te), (TM, i_tm)):
            dl = _dim_delta(config.left, zeta, kperp_grid, k0, pol)
            dr = _dim_delta(config.right, zeta, kperp_grid, k0, pol)
            x_refl = dl * dr
            out[i] = pref * kperp_grid * k0 * x_refl * e / (1.0 - x_refl * e)
    return i_te, i_tm


def _dim_delta(model, zeta, kperp, k0, pol):
    if isinstance(model, Ideal):
        return 1.0 if pol == TE else -1.0
    if isinstance(model, Vacuum):
        return np.zeros_like(kperp)
    eps = eps_imag(model, zeta)
    k = np.sqrt(kperp**2 + eps * (zeta / C_LIGHT) ** 2)
    if pol == TE:
        return (k - k0) / (k + k0)
    return (k - eps * k0) / (k + eps * k0)
