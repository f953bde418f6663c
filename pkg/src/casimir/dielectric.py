"""Dielectric permittivity models on the imaginary frequency axis.

Every model evaluates the relative permittivity eps(i*zeta) for zeta > 0
(rad/s).  The zeta -> 0 behaviour is classified analytically through
``zero_mode_limit`` and is never probed by evaluating eps at zeta = 0,
because Drude-type permittivities diverge there.

Models
------
Ideal      perfectly conducting half-space (eps -> infinity first).
Vacuum     eps identically 1; useful as a null material in tests.
Plasma     eps = 1 + omega_p^2 / zeta^2.
Drude      eps = 1 + omega_p^2 / (zeta (zeta + gamma)).
Tabulated  optical data on a (zeta, eps) grid with a Drude tail below the
           grid and an inverse-square tail above it.

All models are immutable and safe to share between threads.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .constants import C_LIGHT

#: relative slack allowed when checking that tabulated eps is non-increasing
MONOTONICITY_TOL = 1e-9

#: minimum number of rows and decade span for a permittivity table
MIN_TABLE_ROWS = 8
MIN_TABLE_DECADES = 3.0


class TableFormatError(ValueError):
    """Raised when a permittivity table file fails parsing or validation."""


@dataclass(frozen=True)
class Ideal:
    """Perfect conductor: the eps -> infinity limit is taken before zeta -> 0."""


@dataclass(frozen=True)
class Vacuum:
    """eps(i zeta) = 1 for all zeta; both reflection coefficients vanish."""


@dataclass(frozen=True)
class Plasma:
    """Collisionless plasma, eps(i zeta) = 1 + omega_p^2 / zeta^2."""

    omega_p: float  # rad/s

    def __post_init__(self):
        if self.omega_p <= 0.0:
            raise ValueError("plasma frequency must be positive")


@dataclass(frozen=True)
class Drude:
    """Dissipative metal, eps(i zeta) = 1 + omega_p^2 / (zeta (zeta + gamma))."""

    omega_p: float  # rad/s
    gamma: float    # rad/s

    def __post_init__(self):
        if self.omega_p <= 0.0:
            raise ValueError("plasma frequency must be positive")
        if self.gamma <= 0.0:
            raise ValueError("relaxation frequency must be positive")


@dataclass(frozen=True, eq=False)
class PermittivityTable:
    """Sampled eps(i zeta) with zeta strictly ascending and eps >= 1.

    eps must be non-increasing in zeta up to a relative slack of
    MONOTONICITY_TOL (admits measurement noise, rejects gross errors).
    """

    zeta: np.ndarray        # rad/s, strictly ascending
    eps: np.ndarray         # relative permittivity, >= 1, non-increasing
    provenance: str = ""

    def __post_init__(self):
        zeta = np.asarray(self.zeta, dtype=float)
        eps = np.asarray(self.eps, dtype=float)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "eps", eps)
        if zeta.ndim != 1 or eps.shape != zeta.shape:
            raise ValueError("zeta and eps must be 1-d arrays of equal length")
        if len(zeta) < MIN_TABLE_ROWS:
            raise ValueError(f"fewer than {MIN_TABLE_ROWS} rows")
        if not np.all(np.isfinite(zeta)) or not np.all(np.isfinite(eps)):
            raise ValueError("non-finite table entry")
        if np.any(zeta <= 0.0):
            raise ValueError("zeta must be positive")
        if np.any(np.diff(zeta) <= 0.0):
            raise ValueError("zeta not strictly ascending")
        if np.any(eps < 1.0):
            raise ValueError("eps < 1")
        rising = eps[1:] > eps[:-1] * (1.0 + MONOTONICITY_TOL)
        if np.any(rising):
            raise ValueError("eps increasing in zeta beyond tolerance")
        if zeta[-1] / zeta[0] < 10.0**MIN_TABLE_DECADES:
            raise ValueError(
                f"table spans fewer than {MIN_TABLE_DECADES:g} decades of zeta")

    def __len__(self):
        return len(self.zeta)


@dataclass(frozen=True)
class Tabulated:
    """Optical data with analytic tails outside the tabulated range.

    Below the first row the Drude ``low_tail`` is used (required for any
    evaluation below the grid and for the zeta -> 0 classification).  Above
    the last row eps = 1 + C / zeta^2 with C fixed by continuity at the
    last row, the simplest decay consistent with a causal susceptibility.
    """

    table: PermittivityTable
    low_tail: Optional[Drude] = None
    provenance: str = field(default="", compare=False)

    @property
    def high_tail_coeff(self) -> float:
        """C in eps = 1 + C / zeta^2 above the table, (rad/s)^2."""
        return (self.table.eps[-1] - 1.0) * self.table.zeta[-1] ** 2


DielectricModel = Union[Ideal, Vacuum, Plasma, Drude, Tabulated]


@dataclass(frozen=True)
class ZeroModeLimit:
    """Classification of zeta^2 eps(i zeta) / c^2 as zeta -> 0.

    kind is one of "vanishing", "finite" or "infinite"; for "finite" the
    limit value lim zeta^2 eps / c^2 is stored in 1/m^2.  This drives the
    m = 0 TE reflection coefficient.
    """

    kind: str
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in ("vanishing", "finite", "infinite"):
            raise ValueError(f"unknown zero-mode kind {self.kind!r}")


def eps_imag(model: DielectricModel, zeta):
    """Relative permittivity eps(i zeta) for zeta > 0 in rad/s.

    Accepts a scalar or ndarray zeta.  The Ideal model has no finite
    permittivity; callers must branch on Ideal before evaluating.
    """
    z = np.asarray(zeta, dtype=float)
    if np.any(z <= 0.0):
        raise ValueError("zeta must be positive; the zeta = 0 point is "
                         "handled analytically via zero_mode_limit")
    if isinstance(model, Ideal):
        raise ValueError("Ideal model has infinite permittivity")
    if isinstance(model, Vacuum):
        out = np.ones_like(z)
    elif isinstance(model, Plasma):
        out = 1.0 + (model.omega_p / z) ** 2
    elif isinstance(model, Drude):
        out = 1.0 + model.omega_p**2 / (z * (z + model.gamma))
    elif isinstance(model, Tabulated):
        out = _eps_tabulated(model, z)
    else:
        raise TypeError(f"not a dielectric model: {model!r}")
    if np.isscalar(zeta) or np.ndim(zeta) == 0:
        return float(np.ravel(out)[0])
    return np.reshape(out, np.shape(zeta))


def _eps_tabulated(model: Tabulated, z: np.ndarray) -> np.ndarray:
    """log-log interpolation of chi = eps - 1 with analytic tails."""
    tab = model.table
    z = np.atleast_1d(z)
    out = np.empty_like(z)

    below = z < tab.zeta[0]
    above = z > tab.zeta[-1]
    inside = ~(below | above)

    if np.any(below):
        if model.low_tail is None:
            raise ValueError(
                "query below the tabulated range but no Drude low-frequency "
                "tail was supplied")
        t = model.low_tail
        zb = z[below]
        out[below] = 1.0 + t.omega_p**2 / (zb * (zb + t.gamma))
    if np.any(above):
        out[above] = 1.0 + model.high_tail_coeff / z[above] ** 2
    if np.any(inside):
        # chi = eps - 1 interpolated linearly in log-log; preserves the
        # 1/zeta^2 curvature across decades
        logchi = np.interp(np.log(z[inside]), np.log(tab.zeta),
                           np.log(tab.eps - 1.0))
        out[inside] = 1.0 + np.exp(logchi)
    return out


def zero_mode_limit(model: DielectricModel) -> ZeroModeLimit:
    """Classify lim_{zeta->0} zeta^2 eps(i zeta) / c^2.

    "vanishing" means the TE zero mode is absent; "finite" carries the
    limit in 1/m^2; "infinite" corresponds to the perfect conductor where
    eps -> infinity is taken first.
    """
    if isinstance(model, Ideal):
        return ZeroModeLimit("infinite")
    if isinstance(model, Vacuum):
        return ZeroModeLimit("vanishing")
    if isinstance(model, Plasma):
        return ZeroModeLimit("finite", (model.omega_p / C_LIGHT) ** 2)
    if isinstance(model, Drude):
        return ZeroModeLimit("vanishing")
    if isinstance(model, Tabulated):
        if model.low_tail is None:
            raise ValueError(
                "tabulated model without a low-frequency tail cannot be "
                "classified at zeta -> 0")
        return ZeroModeLimit("vanishing")
    raise TypeError(f"not a dielectric model: {model!r}")


def surface_impedance(model: DielectricModel, zeta: float, k_perp: float) -> float:
    """Surface impedance Z(i zeta, k_perp), dimensionless.

    Z = -(zeta/c) / sqrt(zeta^2 [eps - 1]/c^2 + kappa0^2) with
    kappa0^2 = zeta^2/c^2 + k_perp^2.  Retains the transverse-momentum
    dependence; the TE reflection amplitude built from it coincides with
    the bulk-permittivity coefficient.
    """
    if isinstance(model, Ideal):
        raise ValueError("Ideal model: Z = 0 limit is documented, not computed")
    if zeta <= 0.0:
        raise ValueError("zeta must be positive")
    if k_perp < 0.0:
        raise ValueError("k_perp must be non-negative")
    eps = eps_imag(model, zeta)
    zc = zeta / C_LIGHT
    kappa_medium = math.sqrt(zc * zc * (eps - 1.0) + zc * zc + k_perp * k_perp)
    return -zc / kappa_medium


def te_reflection_from_impedance(model: DielectricModel, zeta: float,
                                 k_perp: float) -> float:
    """TE reflection amplitude assembled from the surface impedance.

    Returned in the (kappa - kappa0)/(kappa + kappa0) sign convention so it
    can be compared directly against reflection_coefficients.
    """
    z_imp = surface_impedance(model, zeta, k_perp)
    zc = zeta / C_LIGHT
    kappa0 = math.sqrt(zc * zc + k_perp * k_perp)
    return (zc + z_imp * kappa0) / (zc - z_imp * kappa0)


def local_impedance(model: Drude, zeta: float) -> float:
    """Normal-skin-effect impedance -sqrt(gamma zeta)/omega_p, k_perp-free.

    Drops the transverse-momentum dependence and therefore disagrees with
    surface_impedance for evanescent waves; provided only to demonstrate
    that discrepancy.
    """
    if not isinstance(model, Drude):
        raise ValueError("local impedance is defined for the Drude model only")
    if zeta <= 0.0:
        raise ValueError("zeta must be positive")
    return -math.sqrt(model.gamma * zeta) / model.omega_p


def drude_spectral(gamma: float, omega):
    """Drude susceptibility spectral density p(omega) = (2/pi) gamma/(omega^2+gamma^2).

    Normalised to unit integral over omega in [0, inf); concentrates into a
    delta function at the origin as gamma -> 0.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("omega must be non-negative")
    out = (2.0 / math.pi) * gamma / (w * w + gamma * gamma)
    if np.isscalar(omega) or np.ndim(omega) == 0:
        return float(out)
    return out


def load_table(source) -> PermittivityTable:
    """Parse a permittivity table from a byte or text stream or a path.

    Format: UTF-8 text, one `zeta_rad_per_s,eps_relative` record per line;
    `#`-prefixed comment lines and blank lines are ignored.  zeta must be
    ascending.  Raises TableFormatError with the offending line number on
    malformed input and on any validation failure.
    """
    if isinstance(source, (str, bytes)) and b"\n" not in _as_bytes_head(source):
        # looks like a path
        with open(source, "rb") as handle:
            data = handle.read()
    elif hasattr(source, "read"):
        data = source.read()
    else:
        data = source
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data

    zetas, epss = [], []
    provenance = ""
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comment = line.lstrip("#").strip()
            if comment.lower().startswith("provenance:"):
                provenance = comment.split(":", 1)[1].strip()
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise TableFormatError(f"line {lineno}: expected 'zeta,eps', got {line!r}")
        try:
            z = float(parts[0])
            e = float(parts[1])
        except ValueError:
            raise TableFormatError(f"line {lineno}: malformed number in {line!r}") from None
        zetas.append(z)
        epss.append(e)
    try:
        return PermittivityTable(np.array(zetas), np.array(epss), provenance)
    except ValueError as exc:
        raise TableFormatError(str(exc)) from None


def _as_bytes_head(source) -> bytes:
    if isinstance(source, bytes):
        return source[:4096]
    return source[:4096].encode("utf-8", errors="replace")


def serialize_table(table: PermittivityTable) -> str:
    """Text form of a table; numeric values carry 17 significant digits.

    Parsing the result with load_table reproduces the table bit-exactly.
    """
    lines = []
    if table.provenance:
        lines.append(f"# provenance: {table.provenance}")
    for z, e in zip(table.zeta, table.eps):
        lines.append(f"{z:.17g},{e:.17g}")
    return "\n".join(lines) + "\n"
