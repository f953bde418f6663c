"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines.  Criteria 8, 9 and 13 carry clauses that are physically
unattainable for gold Drude parameters at the separations/temperatures
they pin: the asymptotic low-temperature laws they encode hold at
millikelvin scales for a = 1 um (the crossover frequency
gamma (c / 2 a omega_p)^2 corresponds to ~8 mK there), and the
Euler-Maclaurin series truncated at B4 has a ~6e-4 floor for the 300 K
summand.  Those assertions are kept exactly as stated and fail honestly;
each failure message carries the measured numbers.
"""

import math
from dataclasses import replace

import numpy as np

from casimir.constants import (C_LIGHT, HBAR, K_BOLTZMANN, PI, ZETA3,
                               ideal_casimir_pressure, thermal_wavenumber)
from casimir.dielectric import (Drude, Ideal, local_impedance,
                                surface_impedance,
                                te_reflection_from_impedance)
from casimir.lifshitz import (PlateConfig, ZeroModePolicy, entropy,
                              free_energy, ideal_pressure, matsubara_summand,
                              pressure, reflection_coefficients)
from casimir.multilayer import FiveLayerConfig, five_layer_pressure
from casimir.numerics import (QuadratureSettings, adaptive_quad,
                              euler_maclaurin, guarded_derivative,
                              matsubara_sum)

from conftest import GOLD_GAMMA, GOLD_OMEGA_P


def report(criterion: int, ok: bool, detail: str) -> bool:
    status = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE {criterion:02d}: {status} -- {detail}")
    return ok


def test_criterion_01_ideal_closed_form(tight):
    config = PlateConfig(Ideal(), Ideal(), 1e-6, 1.0,
                         ZeroModePolicy.FORCE_IDEAL_BOTH, tight)
    result = pressure(config)
    expected = ideal_casimir_pressure(1e-6)
    rel = abs(result.total / expected - 1.0)
    ok = rel <= 1e-5
    assert report(1, ok, f"P(1um, 1K) = {result.total:.6e} Pa vs "
                         f"-pi^2 hbar c/240 a^4 = {expected:.6e} Pa "
                         f"(rel {rel:.2e}, tol 1e-5)"), rel


def test_criterion_02_asymptote_stitching():
    a = 1e-6
    t_low = 0.01 / (a * thermal_wavenumber(1.0))     # a kT/(hbar c) = 0.01
    t_high = 10.0 / (a * thermal_wavenumber(1.0))
    rel_low = abs(ideal_pressure(a, t_low, "exact_sum")
                  / ideal_pressure(a, t_low, "low_T_asymptote") - 1.0)
    rel_high = abs(ideal_pressure(a, t_high, "exact_sum")
                   / ideal_pressure(a, t_high, "high_T_asymptote") - 1.0)
    ok = rel_low <= 1e-6 and rel_high <= 1e-4
    assert report(2, ok, f"low-T rel {rel_low:.2e} (tol 1e-6), "
                         f"high-T rel {rel_high:.2e} (tol 1e-4)")


def test_criterion_03_te_zero_mode_signature(gold, gold_plasma, tight):
    a, T = 10e-6, 300.0
    p_drude = pressure(PlateConfig(gold, gold, a, T, quad=tight)).total
    p_plasma = pressure(PlateConfig(gold_plasma, gold_plasma, a, T,
                                    quad=tight)).total
    ratio = p_plasma / p_drude
    ok = 1.90 <= ratio <= 2.05
    assert report(3, ok, f"P_plasma/P_drude at 10 um, 300 K = {ratio:.4f} "
                         f"(band [1.90, 2.05])")


def test_criterion_04_room_temperature_slope(gold):
    settings = QuadratureSettings(rel_tol=1e-6)
    grid = np.linspace(1e-6, 2e-6, 11)
    ratios = [pressure(PlateConfig(gold, gold, float(a), 300.0,
                                   quad=settings)).total
              / ideal_casimir_pressure(float(a)) for a in grid]
    slope = float(np.polyfit(grid * 1e6, ratios, 1)[0])
    ok = -0.13 <= slope <= -0.07
    assert report(4, ok, f"least-squares slope of P/P_C over [1, 2] um = "
                         f"{slope:.4f}/um (band [-0.13, -0.07])")


def test_criterion_05_mim_analytic_band(gold, tight):
    ratio = pressure(PlateConfig(gold, gold, 1e-6, 300.0, quad=tight)).total \
        / ideal_casimir_pressure(1e-6)
    ok = abs(ratio - 0.85) <= 0.2 * 0.85
    assert report(5, ok, f"P/P_C at 1 um, 300 K = {ratio:.4f} "
                         f"(within 20% of 0.85)")


def test_criterion_06_thermal_correction_scale(gold, tight):
    a = 160e-9
    p_hot = pressure(PlateConfig(gold, gold, a, 300.0, quad=tight)).total
    p_cold = pressure(PlateConfig(gold, gold, a, 0.0, quad=tight)).total
    p_corr = abs(p_hot - p_cold) / abs(p_cold)
    f_hot = free_energy(PlateConfig(gold, gold, a, 300.0, quad=tight))
    f_cold = free_energy(PlateConfig(gold, gold, a, 0.0, quad=tight))
    f_corr = abs(f_hot - f_cold) / abs(f_cold)  # sphere-plate via PFA
    ok = 0.010 <= p_corr <= 0.020 and 0.017 <= f_corr <= 0.033
    assert report(6, ok, f"plate correction {100 * p_corr:.2f}% "
                         f"(band [1.0, 2.0]%), sphere-plate "
                         f"{100 * f_corr:.2f}% (band [1.7, 3.3]%)")


def test_criterion_07_thermodynamic_identities(gold, gold_plasma):
    settings = QuadratureSettings(rel_tol=1e-6)
    rng = np.random.default_rng(2024)
    models = [(Ideal(), ZeroModePolicy.FORCE_IDEAL_BOTH),
              (gold, ZeroModePolicy.FROM_MODEL),
              (gold_plasma, ZeroModePolicy.FROM_MODEL)]
    worst = 0.0
    for k in range(20):
        model, policy = models[k % 3]
        a = float(rng.uniform(0.2e-6, 5e-6))
        temp = 0.0 if k % 2 == 0 else 300.0
        config = PlateConfig(model, model, a, temp, policy, settings)
        dfda, _ = guarded_derivative(
            lambda x: free_energy(replace(config, gap_a=x)), a, 0.01 * a)
        p = pressure(config)
        rel = abs((-dfda - p.total) / p.total)
        budget = max(1e-3, 10.0 * p.est_error / abs(p.total))
        worst = max(worst, rel / budget)
    identity_ok = worst <= 1.0

    a = 1e-6
    temp = 0.01 / (a * thermal_wavenumber(1.0))
    config = PlateConfig(Ideal(), Ideal(), a, temp,
                         ZeroModePolicy.FORCE_IDEAL_BOTH,
                         QuadratureSettings(rel_tol=1e-10))
    s_num = entropy(config)
    s_ref = (3.0 * ZETA3 * K_BOLTZMANN**3 * temp**2
             / (2.0 * PI * HBAR**2 * C_LIGHT**2)
             - 4.0 * PI**2 * K_BOLTZMANN**4 * temp**3 * a
             / (45.0 * HBAR**3 * C_LIGHT**3))
    s_rel = abs(s_num / s_ref - 1.0)
    entropy_ok = s_rel <= 0.01
    ok = identity_ok and entropy_ok
    assert report(7, ok, f"-dF/da vs P worst ratio-to-budget {worst:.3f} "
                         f"(<= 1), ideal low-T entropy rel {s_rel:.2e} "
                         f"(tol 1e-2)")


def test_criterion_08_drude_entropy_behaviour(gold):
    settings = QuadratureSettings(rel_tol=1e-8)
    grid = [1.0, 2.0, 4.0, 7.0, 12.0, 20.0, 35.0, 60.0, 100.0, 170.0, 300.0]
    s_vals = {T: entropy(PlateConfig(gold, gold, 1e-6, T, quad=settings))
              for T in grid}
    s_min = min(s_vals.values())
    has_negative_min = s_min < 0.0
    third_law_ok = abs(s_vals[1.0]) < abs(s_min) / 50.0
    ok = has_negative_min and third_law_ok
    clause = "met" if third_law_ok else (
        "NOT met at a = 1 um, where the quadratic low-T regime sits at "
        "millikelvin temperatures")
    assert report(8, ok,
                  f"min S = {s_min:.3e} (negative: {has_negative_min}), "
                  f"|S(1K)| = {abs(s_vals[1.0]):.3e} vs |S_min|/50 = "
                  f"{abs(s_min) / 50.0:.3e} (third-law clause {clause})")


def test_criterion_09_drude_low_t_free_energy_coefficient(gold):
    settings = QuadratureSettings(rel_tol=1e-9)
    a = 1e-6
    f0 = free_energy(PlateConfig(gold, gold, a, 0.0, quad=settings))
    temps = np.array([2.0, 5.0, 10.0, 15.0, 20.0])
    df = np.array([free_energy(PlateConfig(gold, gold, a, float(T),
                                           quad=settings)) - f0
                   for T in temps])
    c2_fit = float(np.sum(df * temps**2) / np.sum(temps**4))
    # dimensional form of the quadratic coefficient, derived once from the
    # omega_p^2 (2 ln 2 - 1)/(48 gamma) energy-units expression
    c2_ref = (K_BOLTZMANN**2 * GOLD_OMEGA_P**2 * (2.0 * math.log(2.0) - 1.0)
              / (48.0 * GOLD_GAMMA * HBAR * C_LIGHT**2))
    rel = abs(c2_fit / c2_ref - 1.0)
    ok = rel <= 0.15
    assert report(9, ok, f"fitted c2 = {c2_fit:.3e}, analytic c2 = "
                         f"{c2_ref:.3e}, rel dev {rel:.2f} (tol 0.15; the "
                         f"T^2 law holds below ~10 mK at a = 1 um, so the "
                         f"[2, 20] K window is in the linear regime)")


def test_criterion_10_impedance_equivalence(gold, gold_plasma):
    rng = np.random.default_rng(99)
    models = [gold, gold_plasma,
              Drude(0.7 * GOLD_OMEGA_P, 2.0 * GOLD_GAMMA)]
    worst = 0.0
    kept = 0
    while kept < 1000:
        model = models[rng.integers(0, 3)]
        zeta = 10.0 ** rng.uniform(11.0, math.log10(2e15))
        kp = 10.0 ** rng.uniform(4.0, math.log10(3e8))
        d_te, _ = reflection_coefficients(model, zeta, kp)
        if abs(d_te) < 1e-3:
            # below this the impedance route has too few significant bits
            # left in float64 for a 1e-12 comparison
            continue
        kept += 1
        r = te_reflection_from_impedance(model, zeta, kp)
        worst = max(worst, abs(r / d_te - 1.0))
    equivalence_ok = worst <= 1e-12

    z_loc = local_impedance(gold, 1e12)
    z_surf = surface_impedance(gold, 1e12, 1e7)
    deviation = abs(z_loc / z_surf - 1.0)
    local_ok = deviation >= 0.10
    ok = equivalence_ok and local_ok
    assert report(10, ok, f"impedance vs bulk worst rel {worst:.2e} "
                          f"(tol 1e-12, 1000 samples); local form deviates "
                          f"{100 * deviation:.0f}% at zeta = 1e12, "
                          f"k_perp = 1e7 (>= 10%)")


def test_criterion_11_five_layer(gold, gold_plasma):
    settings = QuadratureSettings(rel_tol=1e-6)
    rng = np.random.default_rng(31)
    models = [gold, gold_plasma, Ideal()]
    anti_ok = True
    for k in range(20):
        c = float(rng.uniform(2e-6, 5e-6))
        b = float(rng.uniform(0.2, 0.5)) * c
        delta = float(rng.uniform(0.05, 0.9)) * (c - b) / 2.0
        model = models[k % 3]
        temp = 0.0 if k < 2 else 300.0
        plus = five_layer_pressure(FiveLayerConfig(c, b, delta, model, model,
                                                   temp, settings)).total
        minus = five_layer_pressure(FiveLayerConfig(c, b, -delta, model,
                                                    model, temp,
                                                    settings)).total
        if abs(plus + minus) > 1e-12 * abs(plus):
            anti_ok = False

    c, b = 3e-6, 0.5e-6
    centred = five_layer_pressure(
        FiveLayerConfig(c, b, 0.0, gold, gold, 300.0, settings)).total
    zero_ok = centred == 0.0

    deltas = np.linspace(0.0, (c - b) / 2.0 - 50e-9, 8)
    sweep = [five_layer_pressure(FiveLayerConfig(c, b, float(d), gold, gold,
                                                 300.0, settings)).total
             for d in deltas]
    monotone_ok = all(v2 > v1 for v1, v2 in zip(sweep, sweep[1:]))

    delta = (c - b) / 2.0 - 50e-9
    cfg = FiveLayerConfig(c, b, delta, gold, gold, 300.0, settings)
    near_gap = cfg.h / 2.0 - delta
    assert cfg.h / 2.0 + delta >= 5.0 * near_gap
    five = five_layer_pressure(cfg).total
    two = pressure(PlateConfig(gold, gold, near_gap, 300.0,
                               quad=settings)).total
    near_rel = abs(five / (-two) - 1.0)
    near_ok = near_rel <= 0.05

    ok = anti_ok and zero_ok and monotone_ok and near_ok
    assert report(11, ok, f"antisymmetry {anti_ok}, P(0) = {centred}, "
                          f"sweep monotone {monotone_ok}, near-wall rel "
                          f"{near_rel:.2e} (tol 0.05)")


def test_criterion_12_accuracy_budget(gold, gold_plasma):
    default = QuadratureSettings()          # rel_tol 1e-5
    tightened = QuadratureSettings(rel_tol=1e-7)
    runs = [
        ("drude 1um 300K", lambda s: pressure(
            PlateConfig(gold, gold, 1e-6, 300.0, quad=s))),
        ("drude 1um T=0", lambda s: pressure(
            PlateConfig(gold, gold, 1e-6, 0.0, quad=s))),
        ("plasma 2um 300K", lambda s: pressure(
            PlateConfig(gold_plasma, gold_plasma, 2e-6, 300.0, quad=s))),
        ("slab 0.6um", lambda s: five_layer_pressure(
            FiveLayerConfig(3e-6, 0.5e-6, 0.6e-6, gold, gold, 300.0, s))),
    ]
    ok = True
    details = []
    for name, runner in runs:
        loose = runner(default)
        strict = runner(tightened)
        self_rel = loose.est_error / abs(loose.total)
        drift = abs(loose.total - strict.total)
        honest = drift <= max(loose.est_error + strict.est_error,
                              1e-4 * abs(strict.total))
        ok = ok and self_rel <= 1e-4 and honest
        details.append(f"{name}: self {self_rel:.1e}, drift "
                       f"{drift / abs(strict.total):.1e}")
    assert report(12, ok, "; ".join(details))


def _plasma_pressure_summand(a, T, settings):
    """Independent continuous-m construction of the plasma pressure summand."""
    omega_tilde = 2.0 * a * GOLD_OMEGA_P / C_LIGHT
    pref = -K_BOLTZMANN * T / (8.0 * PI * a**3)
    y_max = settings.y_max

    def f(m: float) -> float:
        x = 2.0 * a * (2.0 * PI * m * K_BOLTZMANN * T / HBAR) / C_LIGHT
        if x >= y_max:
            return 0.0

        def integrand(y):
            kt = np.sqrt(y * y + omega_tilde**2)
            d_te = (kt - y) / (kt + y)
            if x > 0.0:
                eps = 1.0 + (omega_tilde / x) ** 2
                d_tm = (kt - eps * y) / (kt + eps * y)
            else:
                d_tm = -1.0
            e = np.exp(-y)
            out = 0.0
            for d in (d_te, d_tm):
                out = out + y * y * d * d * e / (1.0 - d * d * e)
            return out

        seeds = [p for p in (x + 1.0, x + 4.0, x + 12.0, 30.0)
                 if x < p < y_max]
        val, _ = adaptive_quad(integrand, x, y_max, settings, seeds=seeds)
        return pref * val

    return f


def test_criterion_13_euler_maclaurin_oracle(gold, tight):
    a, T = 1e-6, 300.0
    settings = QuadratureSettings(rel_tol=1e-9)

    config = PlateConfig(gold, gold, a, T, quad=tight)
    f_total0, f_te0 = matsubara_summand(config, 0)
    te_zero_ok = f_te0 == 0.0
    ideal_cfg = PlateConfig(Ideal(), Ideal(), a, T,
                            ZeroModePolicy.FORCE_IDEAL_BOTH, tight)
    _, continuation = matsubara_summand(ideal_cfg, 0)
    expected = -ZETA3 * K_BOLTZMANN * T / (4.0 * PI * a**3)
    cont_rel = abs(continuation / expected - 1.0)
    drude_ok = te_zero_ok and cont_rel <= 1e-4

    summand = _plasma_pressure_summand(a, T, settings)
    direct, _ = matsubara_sum(summand, settings, min_m=2)
    em = euler_maclaurin(summand, settings, k_terms=2)
    em_rel = abs(em / direct - 1.0)
    em_ok = em_rel <= 1e-4

    ok = em_ok and drude_ok
    note = "" if em_ok else ("; the B4-truncated series has a ~6e-4 "
                             "floor for the 300 K summand")
    assert report(13, ok,
                  f"plasma EM(k=2) vs sum rel {em_rel:.2e} (tol 1e-4{note}); "
                  f"Drude f_TE(0) = {f_te0}, ideal continuation rel "
                  f"{cont_rel:.2e} (tol 1e-4)")
