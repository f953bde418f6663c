"""Shared numerical machinery.

Adaptive Gauss-Kronrod quadrature (7-point Gauss embedded in a 15-point
Kronrod rule, bisection of the worst panel), Matsubara summation with a
three-consecutive-small-terms stopping rule and compensated accumulation,
the Euler-Maclaurin formula with exact Bernoulli coefficients, and a
guarded central-difference derivative.

All routines are stateless and safe for concurrent use.  matsubara_sum
accumulates strictly in ascending index order so results do not depend on
any evaluation schedule.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np


class ConvergenceError(RuntimeError):
    """A quadrature or summation failed to reach its tolerance in budget.

    Carries the best available estimate so callers can decide whether the
    partial result is usable.
    """

    def __init__(self, message, partial=None, error_estimate=None, diagnostics=None):
        super().__init__(message)
        self.partial = partial
        self.error_estimate = error_estimate
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances, cutoffs and truncation policy shared by all integrators.

    rel_tol is the target relative accuracy of each quadrature/sum;
    defaults are one decade tighter than the 1e-4 accuracy the physics
    results are quoted at.  y_max is the dimensionless exponential cutoff:
    integrands here decay like y^2 e^-y, so the truncated tail at y = 60
    is below 1e-22 of the peak.
    """

    rel_tol: float = 1e-5
    abs_floor: float = 0.0
    max_subdivisions: int = 2000
    y_max: float = 60.0
    matsubara_m_max: int = 1_000_000

    def __post_init__(self):
        if not (1e-12 < self.rel_tol <= 1e-1):
            raise ValueError("rel_tol must lie in (1e-12, 1e-1]")
        if self.y_max < 30.0:
            raise ValueError("y_max must be at least 30")
        if self.abs_floor < 0.0:
            raise ValueError("abs_floor must be non-negative")
        if self.max_subdivisions < 1 or self.matsubara_m_max < 1:
            raise ValueError("budgets must be positive")

    def scaled(self, factor: float) -> "QuadratureSettings":
        """Copy with rel_tol multiplied by factor (clamped to the valid range)."""
        rt = min(max(self.rel_tol * factor, 2e-12), 1e-1)
        return replace(self, rel_tol=rt)


@dataclass(frozen=True)
class SumDiagnostics:
    """Bookkeeping from a Matsubara summation."""

    terms_used: int
    last_term_fraction: float
    truncation_estimate: float


# 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1]
# (standard published values; Gauss points sit at the odd indices).
_K15_NODES = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_K15_WEIGHTS = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_G7_WEIGHTS = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])

# Bernoulli numbers B_2..B_8 kept as exact rationals of record.
_BERNOULLI = (Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30))


def _panel(f, lo: float, hi: float):
    """Evaluate one Kronrod panel; returns (value, error_estimate)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid + half * _K15_NODES
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        raise ValueError("integrand must return an array matching its input")
    if not np.all(np.isfinite(fx)):
        raise ValueError(f"non-finite integrand value on [{lo:g}, {hi:g}]")
    k15 = half * float(np.dot(_K15_WEIGHTS, fx))
    g7 = half * float(np.dot(_G7_WEIGHTS, fx[1::2]))
    return k15, abs(k15 - g7)


def adaptive_quad(f, lo: float, hi: float,
                  settings: QuadratureSettings = QuadratureSettings(),
                  seeds=()):
    """Integrate f over [lo, hi] by adaptive bisection of a nested rule.

    f must accept an ndarray of abscissae and return the integrand values
    elementwise (endpoints are never evaluated).  Optional seeds are
    interior breakpoints used as the initial panel edges; the tolerance is
    always global to [lo, hi].  Returns (value, error_estimate) with
    error_estimate <= max(rel_tol |value|, abs_floor) on success.

    Raises ConvergenceError with the best estimate attached when the
    subdivision budget is exhausted.
    """
    if not lo < hi:
        raise ValueError("lo must be strictly less than hi")
    edges = [lo] + sorted(p for p in set(seeds) if lo < p < hi) + [hi]
    heap = []
    seq = 0
    total = 0.0
    total_err = 0.0
    total_abs = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        value, err = _panel(f, a, b)
        heap.append((-err, seq, a, b, value, err))
        seq += 1
        total += value
        total_err += err
        total_abs += abs(value)
    heapq.heapify(heap)
    splits = 0

    def target():
        # the 1e-16 total_abs term is the machine-precision floor: panel
        # error estimates cannot drop below rounding noise, so demanding
        # less would subdivide forever
        return max(settings.rel_tol * abs(total), settings.abs_floor,
                   1e-16 * total_abs)

    while total_err > target():
        neg_err, _, plo, phi, pval, perr = heapq.heappop(heap)
        if perr <= 0.0 or phi - plo <= 0.0:
            # nothing left to refine; the estimate will not improve
            heapq.heappush(heap, (neg_err, seq, plo, phi, pval, perr))
            break
        if splits >= settings.max_subdivisions:
            heapq.heappush(heap, (neg_err, seq, plo, phi, pval, perr))
            raise ConvergenceError(
                f"quadrature did not converge in {settings.max_subdivisions} "
                f"subdivisions (error estimate {total_err:.3e})",
                partial=total, error_estimate=total_err)
        mid = 0.5 * (plo + phi)
        lval, lerr = _panel(f, plo, mid)
        rval, rerr = _panel(f, mid, phi)
        total += lval + rval - pval
        total_err += lerr + rerr - perr
        total_abs += abs(lval) + abs(rval) - abs(pval)
        seq += 1
        heapq.heappush(heap, (-lerr, seq, plo, mid, lval, lerr))
        seq += 1
        heapq.heappush(heap, (-rerr, seq, mid, phi, rval, rerr))
        splits += 1
    # re-sum panels once to shed accumulated increment/decrement noise
    total = math.fsum(item[4] for item in heap)
    total_err = math.fsum(item[5] for item in heap)
    return total, total_err


class _Neumaier:
    """Compensated (two-term) accumulator."""

    __slots__ = ("total", "comp")

    def __init__(self):
        self.total = 0.0
        self.comp = 0.0

    def add(self, x: float):
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.comp += (self.total - t) + x
        else:
            self.comp += (x - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.comp


def matsubara_sum(term: Callable[[int], float],
                  settings: QuadratureSettings = QuadratureSettings(),
                  min_m: int = 1):
    """Primed Matsubara sum: term(0)/2 + sum_{m>=1} term(m).

    Truncates once three consecutive terms with m >= min_m each contribute
    less than rel_tol/10 of the running total; min_m lets callers forbid
    stopping before the exponential knee of their summand.  Accumulation is
    compensated and strictly ascending in m, so the result is reproducible
    under any evaluation schedule.

    Returns (value, SumDiagnostics).  Raises ConvergenceError if the term
    budget is reached first.
    """
    acc = _Neumaier()
    t0 = 0.5 * term(0)
    acc.add(t0)
    last = t0
    prev_abs = abs(t0)
    small_run = 0
    m = 0
    while small_run < 3:
        m += 1
        if m > settings.matsubara_m_max:
            diag = SumDiagnostics(m, _fraction(last, acc.value), abs(last))
            raise ConvergenceError(
                f"Matsubara sum not converged after {settings.matsubara_m_max} terms",
                partial=acc.value, error_estimate=abs(last), diagnostics=diag)
        tm = term(m)
        acc.add(tm)
        # <= so that identically-zero summands terminate
        if m >= min_m and abs(tm) <= (settings.rel_tol / 10.0) * abs(acc.value):
            small_run += 1
        else:
            small_run = 0
        prev_abs = abs(last)
        last = tm
    value = acc.value
    trunc = _truncation_estimate(abs(last), prev_abs)
    diag = SumDiagnostics(terms_used=m + 1,
                          last_term_fraction=_fraction(last, value),
                          truncation_estimate=trunc)
    return value, diag


def _fraction(last, value) -> float:
    if value == 0.0:
        return 0.0
    return abs(last) / abs(value)


def _truncation_estimate(last_abs: float, prev_abs: float) -> float:
    """Geometric extrapolation of the dropped tail."""
    if last_abs == 0.0:
        return 0.0
    if prev_abs > 0.0:
        r = last_abs / prev_abs
        if 0.0 < r < 1.0:
            return last_abs * r / (1.0 - r)
    return last_abs


def euler_maclaurin(f: Callable[[float], float],
                    settings: QuadratureSettings = QuadratureSettings(),
                    k_terms: int = 2,
                    odd_derivatives: Optional[Sequence[float]] = None,
                    upper: Optional[float] = None,
                    deriv_step: float = 0.05) -> float:
    """Euler-Maclaurin value of the primed sum of a smooth summand.

    sum' f(m) = int_0^inf f dm - sum_{k=1}^{k_terms} B_2k/(2k)! f^(2k-1)(0)

    with B_2 = 1/6, B_4 = -1/30, B_6 = 1/42, B_8 = -1/30 held as exact
    rationals.  f is called with scalar m >= 0 and must decay at infinity.
    Odd derivatives at 0 may be supplied; otherwise they are approximated
    by one-sided finite differences with step deriv_step.
    """
    if not 1 <= k_terms <= len(_BERNOULLI):
        raise ValueError(f"k_terms must be in 1..{len(_BERNOULLI)}")
    if upper is None:
        upper = _scan_decay(f, settings)
    fvec = lambda xs: np.array([f(float(x)) for x in np.atleast_1d(xs)])
    integral, _ = adaptive_quad(fvec, 0.0, upper, settings)

    derivs = list(odd_derivatives) if odd_derivatives is not None else []
    if len(derivs) < k_terms:
        derivs = derivs + _one_sided_odd_derivatives(
            f, deriv_step, orders_needed=k_terms)[len(derivs):]

    value = integral
    for k in range(1, k_terms + 1):
        b2k = float(_BERNOULLI[k - 1])
        value -= b2k / math.factorial(2 * k) * derivs[k - 1]
    return value


def _scan_decay(f, settings) -> float:
    """Find an upper limit where the summand has decayed away."""
    peak = abs(f(0.0))
    m = 1.0
    while m < 2.0**60:
        val = abs(f(m))
        peak = max(peak, val)
        if m >= 8.0 and val <= peak * settings.rel_tol * 1e-2:
            return m
        m *= 2.0
    raise ConvergenceError("summand does not appear to decay")


def _one_sided_odd_derivatives(f, h: float, orders_needed: int):
    """Forward-difference estimates of f'(0), f'''(0), f^(5)(0), f^(7)(0)."""
    npts = {1: 5, 2: 5, 3: 6, 4: 8}[orders_needed]
    vals = [f(i * h) for i in range(npts)]
    d1 = (-25 * vals[0] + 48 * vals[1] - 36 * vals[2]
          + 16 * vals[3] - 3 * vals[4]) / (12 * h)
    out = [d1]
    if orders_needed >= 2:
        d3 = (-2.5 * vals[0] + 9 * vals[1] - 12 * vals[2]
              + 7 * vals[3] - 1.5 * vals[4]) / h**3
        out.append(d3)
    if orders_needed >= 3:
        d5 = (-vals[0] + 5 * vals[1] - 10 * vals[2] + 10 * vals[3]
              - 5 * vals[4] + vals[5]) / h**5
        out.append(d5)
    if orders_needed >= 4:
        d7 = (-vals[0] + 7 * vals[1] - 21 * vals[2] + 35 * vals[3]
              - 35 * vals[4] + 21 * vals[5] - 7 * vals[6] + vals[7]) / h**7
        out.append(d7)
    return out


def guarded_derivative(g: Callable[[float], float], x: float, scale: float):
    """Central difference with one Richardson extrapolation.

    Returns (value, error_estimate) where the estimate is the difference
    between the two Richardson levels.  Raises ValueError on non-finite
    evaluations of g.
    """
    if scale <= 0.0:
        raise ValueError("scale must be positive")

    def central(h):
        gp = g(x + h)
        gm = g(x - h)
        if not (math.isfinite(gp) and math.isfinite(gm)):
            raise ValueError("non-finite evaluation in guarded_derivative")
        return (gp - gm) / (2.0 * h)

    d_h = central(scale)
    d_h2 = central(0.5 * scale)
    value = (4.0 * d_h2 - d_h) / 3.0
    return value, abs(value - d_h2)
