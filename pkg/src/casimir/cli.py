"""Command-line front end.

Subcommands: pressure, sweep, integrand, slab, thermo.  Output is CSV on
stdout or a file, numeric-only with 9 significant digits, preceded by
`# key=value` header lines carrying the fully resolved run manifest.
Re-running the same manifest reproduces the bytes exactly; pass
--deterministic to suppress the timestamp line.  Figures can be rendered
alongside the CSV with --plot.

Exit codes: 0 success, 2 usage error, 3 numerical convergence failure.

Model mini-language for --model / --slab-model:

    ideal
    vacuum
    plasma:<freq>
    drude:<freq>,<freq>              (omega_p, gamma)
    table:<path>[,drude-tail:<freq>,<freq>]

Frequencies accept an `eV` or `rad/s` suffix (bare numbers are rad/s);
lengths accept m/mm/um/nm; temperatures accept a trailing K.  Table paths
are also searched under $CASIMIR_TABLE_DIR.
"""

from __future__ import annotations

import argparse
import datetime
import math
import os
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .constants import CONSTANTS_VERSION, EV_TO_RAD_PER_S, ideal_casimir_pressure
from .dielectric import (DielectricModel, Drude, Ideal, Plasma,
                         TableFormatError, Tabulated, Vacuum, load_table)
from .lifshitz import (PlateConfig, ZeroModePolicy, integrand_grid,
                       pressure, thermo)
from .multilayer import FiveLayerConfig, five_layer_pressure, ideal_reference
from .numerics import ConvergenceError, QuadratureSettings

_FLOAT_FMT = "%.9g"


@dataclass
class RunManifest:
    """Resolved parameters of a run, serialized into every output header."""

    command: str
    params: Dict[str, str]
    settings: QuadratureSettings
    version: str
    timestamp: Optional[str]

    def header_lines(self, columns: Sequence[str]) -> List[str]:
        lines = [f"# tool=casimir {self.version}",
                 f"# command={self.command}"]
        for key, val in self.params.items():
            lines.append(f"# {key}={val}")
        s = self.settings
        lines.append(f"# rel_tol={s.rel_tol:g}")
        lines.append(f"# abs_floor={s.abs_floor:g}")
        lines.append(f"# max_subdivisions={s.max_subdivisions}")
        lines.append(f"# y_max={s.y_max:g}")
        lines.append(f"# matsubara_m_max={s.matsubara_m_max}")
        lines.append(f"# constants={CONSTANTS_VERSION}")
        if self.timestamp is not None:
            lines.append(f"# timestamp={self.timestamp}")
        lines.append(",".join(columns))
        return lines


# ---------------------------------------------------------------------------
# unit and model parsing
# ---------------------------------------------------------------------------

_LENGTH_SUFFIXES = (("nm", "e-9"), ("um", "e-6"), ("µm", "e-6"),
                    ("mm", "e-3"), ("m", ""))


def parse_length(text: str) -> float:
    """'1um' == '1000nm' == '1e-6m'; bare numbers are metres.

    The scale is appended to the decimal string before conversion so that
    equivalent spellings resolve to bit-identical values.
    """
    t = text.strip()
    for suffix, exponent in _LENGTH_SUFFIXES:
        if t.endswith(suffix):
            num = t[:-len(suffix)]
            if exponent and "e" not in num.lower():
                return float(num + exponent)
            return float(num) * float("1" + exponent) if exponent else float(num)
    return float(t)


def parse_frequency(text: str) -> float:
    """Angular frequency; 'eV' converts via e/hbar, bare numbers are rad/s."""
    t = text.strip()
    if t.endswith("rad/s"):
        return float(t[:-5])
    if t.endswith("eV"):
        return float(t[:-2]) * EV_TO_RAD_PER_S
    return float(t)


def parse_temperature(text: str) -> float:
    t = text.strip()
    if t.endswith("K"):
        t = t[:-1]
    return float(t)


def _resolve_table_path(path: str) -> str:
    if os.path.exists(path):
        return path
    search = os.environ.get("CASIMIR_TABLE_DIR")
    if search:
        candidate = os.path.join(search, path)
        if os.path.exists(candidate):
            return candidate
    raise ValueError(f"permittivity table not found: {path}")


def parse_model(spec: str) -> DielectricModel:
    """Parse the model mini-language."""
    s = spec.strip()
    if s == "ideal":
        return Ideal()
    if s == "vacuum":
        return Vacuum()
    if s.startswith("plasma:"):
        return Plasma(parse_frequency(s.split(":", 1)[1]))
    if s.startswith("drude:"):
        body = s.split(":", 1)[1]
        parts = body.split(",")
        if len(parts) != 2:
            raise ValueError(f"drude model needs omega_p,gamma: {spec!r}")
        return Drude(parse_frequency(parts[0]), parse_frequency(parts[1]))
    if s.startswith("table:"):
        body = s.split(":", 1)[1]
        tail = None
        if ",drude-tail:" in body:
            path, tail_body = body.split(",drude-tail:", 1)
            tail_parts = tail_body.split(",")
            if len(tail_parts) != 2:
                raise ValueError(f"drude-tail needs omega_p,gamma: {spec!r}")
            tail = Drude(parse_frequency(tail_parts[0]),
                         parse_frequency(tail_parts[1]))
        else:
            path = body
        table = load_table(_resolve_table_path(path))
        return Tabulated(table, low_tail=tail, provenance=path)
    raise ValueError(f"unrecognised model spec {spec!r}")


def model_manifest(model: DielectricModel) -> str:
    """Resolved SI description of a model for the output header."""
    if isinstance(model, Ideal):
        return "ideal"
    if isinstance(model, Vacuum):
        return "vacuum"
    if isinstance(model, Plasma):
        return f"plasma:{model.omega_p:.9g}rad/s"
    if isinstance(model, Drude):
        return f"drude:{model.omega_p:.9g}rad/s,{model.gamma:.9g}rad/s"
    if isinstance(model, Tabulated):
        tail = ""
        if model.low_tail is not None:
            tail = (f",drude-tail:{model.low_tail.omega_p:.9g}rad/s,"
                    f"{model.low_tail.gamma:.9g}rad/s")
        return f"table:{model.provenance}{tail}"
    raise TypeError(f"not a model: {model!r}")


def _parse_grid(text: str, parse, log_default: bool = True):
    """FROM:TO:POINTS[:lin|:log] -> ndarray."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"grid spec must be FROM:TO:POINTS[:lin|:log]: {text!r}")
    lo = parse(parts[0])
    hi = parse(parts[1])
    n = int(parts[2])
    use_log = log_default
    if len(parts) == 4:
        if parts[3] not in ("lin", "log"):
            raise ValueError(f"grid scale must be lin or log: {text!r}")
        use_log = parts[3] == "log"
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    if not lo < hi:
        raise ValueError("grid FROM must be below TO")
    if use_log:
        if lo <= 0:
            raise ValueError("log grid needs positive endpoints")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


# ---------------------------------------------------------------------------
# argument parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, slab: bool = False):
    p.add_argument("--model", required=True,
                   help="dielectric model (see module docstring)")
    if not slab:
        p.add_argument("--model2", default=None,
                       help="model of the second plate (default: same as --model)")
    p.add_argument("--policy", default="from-model",
                   choices=[pol.value for pol in ZeroModePolicy],
                   help="m = 0 handling; non-default choices require --model ideal")
    p.add_argument("--rel-tol", type=float, default=1e-5)
    p.add_argument("--abs-floor", type=float, default=0.0)
    p.add_argument("--max-subdivisions", type=int, default=2000)
    p.add_argument("--y-max", type=float, default=60.0)
    p.add_argument("--m-max", type=int, default=1_000_000)
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--deterministic", action="store_true",
                   help="suppress the timestamp header line")
    p.add_argument("--plot", default=None,
                   help="also render a figure of the output to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir",
        description="Thermal Casimir pressures, free energies and entropies "
                    "between material plates (Lifshitz formalism).")
    parser.add_argument("--version", action="version",
                        version=f"casimir {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pressure", help="pressure at a single (a, T)")
    _add_common(p)
    p.add_argument("--a", required=True, help="gap, e.g. 1um")
    p.add_argument("--T", required=True, help="temperature, e.g. 300K (0 allowed)")

    p = sub.add_parser("sweep", help="pressure along a grid of a, T or delta")
    _add_common(p)
    p.add_argument("--var", required=True, choices=["a", "T", "delta"])
    p.add_argument("--from", dest="lo", required=True)
    p.add_argument("--to", dest="hi", required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log", action="store_true", help="logarithmic grid")
    p.add_argument("--a", default=None, help="gap for T sweeps")
    p.add_argument("--T", default="0", help="temperature for a/delta sweeps")
    p.add_argument("--cavity", default=None, help="cavity width c for delta sweeps")
    p.add_argument("--slab", default=None, help="slab width b for delta sweeps")
    p.add_argument("--slab-model", default=None,
                   help="slab material for delta sweeps (default: --model)")

    p = sub.add_parser("integrand", help="T = 0 integrand grid dump")
    _add_common(p)
    p.add_argument("--a", required=True)
    p.add_argument("--zeta", required=True,
                   help="zeta grid FROM:TO:POINTS[:lin|:log], rad/s or eV")
    p.add_argument("--kperp", required=True,
                   help="k_perp grid FROM:TO:POINTS[:lin|:log], 1/m")

    p = sub.add_parser("slab", help="five-layer pressure on a slab in a cavity")
    _add_common(p, slab=True)
    p.add_argument("--cavity", required=True, help="cavity width c")
    p.add_argument("--slab", dest="slab_b", required=True, help="slab width b")
    p.add_argument("--slab-model", default=None,
                   help="slab material (default: --model)")
    p.add_argument("--T", default="0")
    p.add_argument("--delta", default=None, help="single offset")
    p.add_argument("--delta-sweep", default=None,
                   help="offset grid FROM:TO:POINTS[:lin|:log]")
    p.add_argument("--points", type=int, default=25,
                   help="points of the default sweep 0 .. (c-b)/2 - 50nm")

    p = sub.add_parser("thermo", help="free energy, entropy and -dF/da check")
    _add_common(p)
    p.add_argument("--a", required=True)
    p.add_argument("--T", default=None, help="single temperature (> 0)")
    p.add_argument("--T-sweep", default=None,
                   help="temperature grid FROM:TO:POINTS[:lin|:log]")

    return parser


def _settings_from(args) -> QuadratureSettings:
    return QuadratureSettings(rel_tol=args.rel_tol, abs_floor=args.abs_floor,
                              max_subdivisions=args.max_subdivisions,
                              y_max=args.y_max, matsubara_m_max=args.m_max)


def _policy_from(args) -> ZeroModePolicy:
    return ZeroModePolicy(args.policy)


def _plate_config(args, a: float, temperature: float) -> PlateConfig:
    left = parse_model(args.model)
    right = parse_model(args.model2) if getattr(args, "model2", None) else left
    return PlateConfig(left=left, right=right, gap_a=a,
                       temperature_T=temperature, policy=_policy_from(args),
                       quad=_settings_from(args))


def _timestamp(args) -> Optional[str]:
    if args.deterministic:
        return None
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _fmt(value: float) -> str:
    return _FLOAT_FMT % value


def _write_output(args, manifest: RunManifest, columns: Sequence[str],
                  rows: List[Dict[str, float]]) -> None:
    lines = manifest.header_lines(columns)
    for row in rows:
        lines.append(",".join(_fmt(row[col]) for col in columns))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _pressure_row(config: PlateConfig) -> Dict[str, float]:
    result = pressure(config)
    pc = ideal_casimir_pressure(config.gap_a)
    return {
        "a_m": config.gap_a,
        "T_K": config.temperature_T,
        "P_Pa": result.total,
        "P_over_PC": result.total / pc,
        "P_TE_Pa": result.te_part,
        "P_TM_Pa": result.tm_part,
        "est_error_Pa": result.est_error,
    }


_PRESSURE_COLUMNS = ["a_m", "T_K", "P_Pa", "P_over_PC", "P_TE_Pa", "P_TM_Pa",
                     "est_error_Pa"]


def _cmd_pressure(args):
    a = parse_length(args.a)
    temp = parse_temperature(args.T)
    config = _plate_config(args, a, temp)
    rows = [_pressure_row(config)]
    params = {"model": model_manifest(config.left),
              "model2": model_manifest(config.right),
              "policy": config.policy.value,
              "a_m": _fmt(a), "T_K": _fmt(temp)}
    manifest = RunManifest("pressure", params, config.quad, __version__,
                           _timestamp(args))
    return manifest, _PRESSURE_COLUMNS, rows, ("a_m", ["P_over_PC"])


def _slab_row(config: FiveLayerConfig) -> Dict[str, float]:
    result = five_layer_pressure(config)
    ref = ideal_reference(config.h, config.offset_delta)
    ratio = result.total / ref if ref != 0.0 else math.nan
    return {
        "delta_m": config.offset_delta,
        "P_Pa": result.total,
        "P_over_PCref": ratio,
        "est_error_Pa": result.est_error,
    }


_SLAB_COLUMNS = ["delta_m", "P_Pa", "P_over_PCref", "est_error_Pa"]


def _five_layer_config(args, cavity, slab_b, delta, temp) -> FiveLayerConfig:
    wall = parse_model(args.model)
    slab_model = parse_model(args.slab_model) if args.slab_model else wall
    return FiveLayerConfig(cavity_c=cavity, slab_b=slab_b, offset_delta=delta,
                           wall_model=wall, slab_model=slab_model,
                           temperature_T=temp, quad=_settings_from(args))


def _cmd_sweep(args):
    temp = parse_temperature(args.T)
    if args.var == "delta":
        if not args.cavity or not args.slab:
            raise ValueError("delta sweeps need --cavity and --slab")
        cavity = parse_length(args.cavity)
        slab_b = parse_length(args.slab)
        grid = _grid_from_args(args, parse_length)
        rows = []
        for delta in grid:
            config = _five_layer_config(args, cavity, slab_b, float(delta), temp)
            result = five_layer_pressure(config)
            ref = ideal_reference(config.h, config.offset_delta)
            rows.append({
                "delta_m": float(delta),
                "T_K": temp,
                "P_Pa": result.total,
                "P_over_PCref": result.total / ref if ref != 0.0 else math.nan,
                "P_TE_Pa": result.te_part,
                "P_TM_Pa": result.tm_part,
                "est_error_Pa": result.est_error,
            })
        columns = ["delta_m", "T_K", "P_Pa", "P_over_PCref", "P_TE_Pa",
                   "P_TM_Pa", "est_error_Pa"]
        params = {"model": model_manifest(parse_model(args.model)),
                  "slab_model": model_manifest(
                      parse_model(args.slab_model or args.model)),
                  "cavity_m": _fmt(cavity), "slab_m": _fmt(slab_b),
                  "T_K": _fmt(temp), "var": "delta",
                  "from": _fmt(grid[0]), "to": _fmt(grid[-1]),
                  "points": str(len(grid))}
        manifest = RunManifest("sweep", params, _settings_from(args),
                               __version__, _timestamp(args))
        return manifest, columns, rows, ("delta_m", ["P_Pa"])

    if args.var == "a":
        grid = _grid_from_args(args, parse_length)
        configs = [_plate_config(args, float(a), temp) for a in grid]
        xcol = "a_m"
    else:  # T sweep
        if not args.a:
            raise ValueError("T sweeps need --a")
        a = parse_length(args.a)
        grid = _grid_from_args(args, parse_temperature)
        configs = [_plate_config(args, a, float(t)) for t in grid]
        xcol = "T_K"
    rows = [_pressure_row(config) for config in configs]
    base = configs[0]
    params = {"model": model_manifest(base.left),
              "model2": model_manifest(base.right),
              "policy": base.policy.value,
              "var": args.var, "from": _fmt(grid[0]), "to": _fmt(grid[-1]),
              "points": str(len(grid))}
    if args.var == "T":
        params["a_m"] = _fmt(base.gap_a)
    else:
        params["T_K"] = _fmt(temp)
    manifest = RunManifest("sweep", params, base.quad, __version__,
                           _timestamp(args))
    return manifest, _PRESSURE_COLUMNS, rows, (xcol, ["P_over_PC"])


def _grid_from_args(args, parse):
    lo = parse(args.lo)
    hi = parse(args.hi)
    if not lo < hi:
        raise ValueError("--from must be below --to")
    if args.points < 2:
        raise ValueError("--points must be at least 2")
    if args.log:
        if lo <= 0:
            raise ValueError("log grid needs positive endpoints")
        return np.geomspace(lo, hi, args.points)
    return np.linspace(lo, hi, args.points)


def _cmd_integrand(args):
    a = parse_length(args.a)
    config = _plate_config(args, a, 0.0)
    zeta_grid = _parse_grid(args.zeta, parse_frequency)
    kperp_grid = _parse_grid(args.kperp, parse_length_inverse)
    i_te, i_tm = integrand_grid(config, zeta_grid, kperp_grid)
    rows = []
    for i, zeta in enumerate(zeta_grid):
        for j, kperp in enumerate(kperp_grid):
            rows.append({
                "zeta_rad_per_s": float(zeta),
                "kperp_per_m": float(kperp),
                "I_TE": float(i_te[i, j]),
                "I_TM": float(i_tm[i, j]),
                "I_total": float(i_te[i, j] + i_tm[i, j]),
            })
    columns = ["zeta_rad_per_s", "kperp_per_m", "I_TE", "I_TM", "I_total"]
    params = {"model": model_manifest(config.left),
              "model2": model_manifest(config.right),
              "policy": config.policy.value, "a_m": _fmt(a),
              "zeta_grid": args.zeta, "kperp_grid": args.kperp}
    manifest = RunManifest("integrand", params, config.quad, __version__,
                           _timestamp(args))
    return manifest, columns, rows, None


def parse_length_inverse(text: str) -> float:
    """Wavenumbers in 1/m (no unit suffixes)."""
    return float(text)


def _cmd_slab(args):
    cavity = parse_length(args.cavity)
    slab_b = parse_length(args.slab_b)
    temp = parse_temperature(args.T)
    if args.delta is not None and args.delta_sweep is not None:
        raise ValueError("give either --delta or --delta-sweep, not both")
    if args.delta is not None:
        deltas = np.array([parse_length(args.delta)])
    elif args.delta_sweep is not None:
        deltas = _parse_grid(args.delta_sweep, parse_length, log_default=False)
    else:
        hi = (cavity - slab_b) / 2.0 - 50e-9
        if hi <= 0:
            raise ValueError("cavity too small for the default sweep")
        deltas = np.linspace(0.0, hi, args.points)
    rows = []
    for delta in deltas:
        config = _five_layer_config(args, cavity, slab_b, float(delta), temp)
        rows.append(_slab_row(config))
    wall = parse_model(args.model)
    slab_model = parse_model(args.slab_model) if args.slab_model else wall
    params = {"model": model_manifest(wall),
              "slab_model": model_manifest(slab_model),
              "cavity_m": _fmt(cavity), "slab_m": _fmt(slab_b),
              "T_K": _fmt(temp)}
    manifest = RunManifest("slab", params, _settings_from(args), __version__,
                           _timestamp(args))
    return manifest, _SLAB_COLUMNS, rows, ("delta_m", ["P_Pa"])


def _cmd_thermo(args):
    a = parse_length(args.a)
    if args.T is None and args.T_sweep is None:
        raise ValueError("thermo needs --T or --T-sweep")
    if args.T_sweep is not None:
        temps = _parse_grid(args.T_sweep, parse_temperature)
    else:
        temps = np.array([parse_temperature(args.T)])
    if np.any(temps <= 0.0):
        raise ValueError("thermo requires T > 0 (entropy is -dF/dT)")
    rows = []
    for temp in temps:
        config = _plate_config(args, a, float(temp))
        result = thermo(config)
        rows.append({
            "a_m": a,
            "T_K": float(temp),
            "F_J_per_m2": result.free_energy_F,
            "S_J_per_m2K": result.entropy_S,
            "P_check_Pa": result.pressure_check,
        })
    columns = ["a_m", "T_K", "F_J_per_m2", "S_J_per_m2K", "P_check_Pa"]
    config = _plate_config(args, a, float(temps[0]))
    params = {"model": model_manifest(config.left),
              "model2": model_manifest(config.right),
              "policy": config.policy.value, "a_m": _fmt(a)}
    manifest = RunManifest("thermo", params, config.quad, __version__,
                           _timestamp(args))
    return manifest, columns, rows, ("T_K", ["S_J_per_m2K"])


_DISPATCH = {
    "pressure": _cmd_pressure,
    "sweep": _cmd_sweep,
    "integrand": _cmd_integrand,
    "slab": _cmd_slab,
    "thermo": _cmd_thermo,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        manifest, columns, rows, plot_spec = _DISPATCH[args.command](args)
    except ConvergenceError as exc:
        diag = f" (diagnostics: {exc.diagnostics})" if exc.diagnostics else ""
        print(f"casimir: convergence failure: {exc}{diag}", file=sys.stderr)
        return 3
    except (ValueError, TableFormatError, OSError) as exc:
        print(f"casimir: error: {exc}", file=sys.stderr)
        return 2
    _write_output(args, manifest, columns, rows)
    if args.plot:
        from . import plotting
        if args.command == "integrand":
            plotting.render_integrand(args.plot, rows)
        elif plot_spec is not None:
            xcol, ycols = plot_spec
            logx = bool(getattr(args, "log", False))
            plotting.render_rows(args.plot, rows, xcol, ycols, logx=logx,
                                 title=args.command)
    return 0


if __name__ == "__main__":
    sys.exit(main())
