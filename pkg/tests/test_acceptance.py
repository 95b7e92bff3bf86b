"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are repeated
in the "acceptance criteria" section of the terminal summary. The two
Monte Carlo agreement checks dominate the runtime (several minutes on one
core).
"""
import csv
import math
from dataclasses import replace

import numpy as np
import pytest
import yaml

from uavjam import (
    AxisGrid,
    EnvironmentParams,
    JammerPlacement,
    LinkEnvironment,
    MultiJammerSettings,
    NetworkConfig,
    Objective,
    PlacementSearchSpec,
    QuadratureSettings,
    optimize_height_multi,
    optimize_placement,
    p_eavesdrop,
    p_secrecy,
    p_secrecy_asymptotic,
    p_secrecy_multi,
    p_secrecy_multi_asymptotic,
    p_secrecy_multi_closed_form,
    p_success,
    q_function,
    sample_fading,
    simulate_components_multi,
    simulate_secrecy,
    simulate_secrecy_multi,
    sinr,
)
from uavjam.analytic_multi import legitimate_factor
from uavjam.analytic_single import p_success_conditional
from uavjam.channel import horizontal_distance, los_probability, rho
from uavjam.cli import main
from uavjam.config import validate_config
from uavjam.montecarlo import sample_ppp

ENV = EnvironmentParams()
N_MC = 200_000
TINY_NOISE = 1e-300

# single jammer: offset study (Rx at 340 m) and placement study (Rx at 420 m)
OFFSET_CFG = NetworkConfig(ell_r=340.0)
OFFSET_DENSITIES = (5e-7, 7e-7)
OFFSET_HEIGHTS = (0.0, 100.0, 200.0)
PLACEMENT_CFG = NetworkConfig(ell_r=420.0)
PLACEMENT_DENSITIES = (1.2e-8, 7e-8, 3.5e-7, 7.5e-7, 9.3e-7)

# jammer field: short link, dense eavesdroppers
FIELD_CFG = NetworkConfig(ell_r=50.0, lambda_e=1e-5, p_jam=2e-11)
FIELD_DENSITIES = (7e-6, 9e-6)
FIELD_POWERS = (2e-11, 3e-11)


def z_score(est, value):
    return (est.mean - value) / est.std_error


# ---------------------------------------------------------------------------
# 1. single-jammer analytic vs simulation


def test_c1_single_jammer_matches_simulation(acceptance):
    worst, lines = 0.0, []
    k = 0
    for lam in OFFSET_DENSITIES:
        cfg = replace(OFFSET_CFG, lambda_e=lam)
        for z in OFFSET_HEIGHTS:
            for d in (50.0, 200.0, 400.0, 600.0):
                pl = JammerPlacement(d, z)
                exact = p_secrecy(pl, cfg, ENV).p_se
                est = simulate_secrecy(pl, cfg, ENV, n=N_MC, seed=20240, stream=(k,))
                k += 1
                zs = z_score(est, exact)
                worst = max(worst, abs(zs))
                lines.append(f"lambda_e={lam:g} z_u={z:g} d_tu={d:g}: analytic={exact:.5f} mc={est.mean:.5f} z={zs:+.2f}")
    print("\n".join(lines))
    ok = acceptance("C1 single-jammer analytic vs MC", worst <= 4.0, f"{k} points, n={N_MC}, max |z| = {worst:.2f}")
    assert ok


# ---------------------------------------------------------------------------
# 2. jammer on the far side of the Tx is optimal


def test_c2_opposite_side_is_optimal(acceptance):
    rng = np.random.default_rng(2)
    thetas = 2 * math.pi * np.arange(24) / 24
    misses = []
    for _ in range(20):
        d_tu, z_u, ell_r = rng.uniform(10, 800), rng.uniform(0, 400), rng.uniform(50, 800)
        cfg = NetworkConfig(ell_r=ell_r)
        vals = [p_secrecy(JammerPlacement(d_tu, z_u, t), cfg, ENV).p_se for t in thetas]
        best = int(np.argmax(vals))
        if thetas[best] != math.pi and vals[best] > vals[12] * (1 + 1e-12):
            misses.append((d_tu, z_u, ell_r, thetas[best]))
    ok = acceptance("C2 theta_r = pi maximises p_se", not misses, f"20 triples x 24 angles, misses={misses}")
    assert ok


# ---------------------------------------------------------------------------
# 3. near-Tx asymptote


def test_c3_near_transmitter_asymptote(acceptance):
    cfg = OFFSET_CFG
    errors = []
    for d in (200.0, 50.0, 10.0, 1.0):
        pl = JammerPlacement(d, 1.0)
        exact = p_secrecy(pl, cfg, ENV).p_se
        errors.append(abs(p_secrecy_asymptotic(pl, cfg, ENV) - exact) / exact)
    monotone = all(a > b for a, b in zip(errors, errors[1:]))
    ok = acceptance(
        "C3 near-Tx asymptote",
        monotone and errors[-1] <= 0.05,
        "relative errors at d_tu=200,50,10,1: " + ", ".join(f"{e:.2e}" for e in errors),
    )
    assert ok


# ---------------------------------------------------------------------------
# 4. closed form at alpha_nlos = 4


def test_c4_closed_form_identity(acceptance):
    rng = np.random.default_rng(4)
    env = EnvironmentParams(alpha_nlos=4.0)
    tight = QuadratureSettings(rel_tol=1e-12, abs_tol=1e-300)
    worst = 0.0
    for _ in range(50):
        cfg = NetworkConfig(
            ell_r=rng.uniform(10, 300),
            p_jam=10 ** rng.uniform(-12, -9),
            lambda_e=10 ** rng.uniform(-7, -4),
            gamma_t=rng.uniform(1, 5),
            gamma_t_prime=rng.uniform(1, 5),
            noise=10 ** rng.uniform(-20, -18),
        )
        s = MultiJammerSettings(10 ** rng.uniform(-7, -4), 0.0, quad=tight)
        closed = p_secrecy_multi_closed_form(s, cfg, env)
        quad = p_secrecy_multi_asymptotic(s, cfg, env)
        worst = max(worst, abs(closed - quad) / closed)
    ok = acceptance("C4 closed form vs quadrature", worst <= 1e-8, f"50 random configs, max rel diff = {worst:.2e}")
    assert ok


# ---------------------------------------------------------------------------
# 5. jammer-field analytic vs simulation


@pytest.mark.slow
def test_c5_jammer_field_matches_simulation(acceptance):
    worst, k = 0.0, 0
    for lam_u in FIELD_DENSITIES:
        for z in (50.0, 150.0, 300.0):
            s = MultiJammerSettings(lam_u, z)
            exact = p_secrecy_multi(s, FIELD_CFG, ENV)
            est = simulate_secrecy_multi(s, FIELD_CFG, ENV, n=N_MC, seed=4040, stream=(k,))
            k += 1
            zs = z_score(est, exact)
            worst = max(worst, abs(zs))
            print(f"lambda_u={lam_u:g} z_u={z:g}: analytic={exact:.5f} mc={est.mean:.5f} z={zs:+.2f}")
    ok = acceptance("C5 jammer-field analytic vs MC", worst <= 4.0, f"{k} points, n={N_MC}, max |z| = {worst:.2f}")
    assert ok


# ---------------------------------------------------------------------------
# 6. trends


def _unimodal(values):
    k = int(np.argmax(values))
    return 0 < k < len(values) - 1 and np.all(np.diff(values[: k + 1]) > 0) and np.all(np.diff(values[k:]) < 0)


def test_c6a_offset_curves_unimodal(acceptance):
    d = np.arange(0.0, 1501.0, 10.0)
    bad = []
    for lam in OFFSET_DENSITIES:
        for z in OFFSET_HEIGHTS:
            cfg = replace(OFFSET_CFG, lambda_e=lam)
            p = np.array([p_secrecy(JammerPlacement(x, z), cfg, ENV).p_se for x in d])
            if not _unimodal(p):
                bad.append((lam, z))
    ok = acceptance("C6a p_se unimodal in d_tu", not bad, f"6 curves on d_tu in [0, 1500], non-unimodal: {bad}")
    assert ok


def test_c6b_optimal_offset_shrinks_with_eavesdroppers(acceptance):
    detail, ok_all = [], True
    for z in OFFSET_HEIGHTS:
        spec = PlacementSearchSpec(AxisGrid(0.0, 1500.0, 151), AxisGrid(z, z, 1))
        d = [optimize_placement(spec, replace(OFFSET_CFG, lambda_e=lam), ENV).d_tu_star for lam in OFFSET_DENSITIES]
        ok_all &= d[1] < d[0]
        detail.append(f"z_u={z:g}: {d[0]:.1f} -> {d[1]:.1f}")
    ok = acceptance("C6b d_tu* decreases with lambda_e", ok_all, "; ".join(detail))
    assert ok


def test_c6c_optimal_offset_dips_then_rises(acceptance):
    spec = PlacementSearchSpec(AxisGrid(0.0, 4 * PLACEMENT_CFG.ell_r, 81))
    d = [optimize_placement(spec, replace(PLACEMENT_CFG, lambda_e=lam), ENV).d_tu_star for lam in PLACEMENT_DENSITIES]
    k = int(np.argmin(d))
    ok_shape = 0 < k < len(d) - 1 and all(a > b for a, b in zip(d[: k + 1], d[1 : k + 1])) and all(
        a < b for a, b in zip(d[k:], d[k + 1 :])
    )
    ok = acceptance("C6c d_tu* falls then rises with lambda_e", ok_shape, "d_tu* = " + ", ".join(f"{x:.1f}" for x in d))
    assert ok


def test_c6d_field_height_trends(acceptance):
    spec = PlacementSearchSpec(z_u_range=AxisGrid(0.0, 500.0, 26), refine_iterations=8, objective=Objective.MULTI)
    z = {}
    for lam_u in FIELD_DENSITIES:
        for p_u in FIELD_POWERS:
            z[lam_u, p_u] = optimize_height_multi(spec, MultiJammerSettings(lam_u, 0.0), replace(FIELD_CFG, p_jam=p_u), ENV).z_u_star
    down_with_density = all(z[FIELD_DENSITIES[1], p] < z[FIELD_DENSITIES[0], p] for p in FIELD_POWERS)
    up_with_power = all(z[l, FIELD_POWERS[1]] > z[l, FIELD_POWERS[0]] for l in FIELD_DENSITIES)
    ok = acceptance(
        "C6d z_u* falls with lambda_u, rises with P_u",
        down_with_density and up_with_power,
        ", ".join(f"(lambda_u={l:g}, P_u={p:g}) -> {v:.2f}" for (l, p), v in z.items()),
    )
    assert ok


# ---------------------------------------------------------------------------
# 7. trivial limits


def _trivial_checks(tmp_path):
    cfg = OFFSET_CFG
    pl = JammerPlacement(200.0, 100.0)
    silent = replace(cfg, p_jam=0.0)
    rho_r = rho(cfg.ell_r, cfg.p_tx, ENV.alpha_ground)
    noise_only = math.exp(-cfg.gamma_t * cfg.noise / rho_r)
    rng = np.random.default_rng(77)

    def within(est, value, k=4.0):
        return abs(est.mean - value) <= k * est.std_error

    def sampled_mean_and_var(g, var):
        n = len(g)
        return abs(g.mean() - 1.0) <= 4 * math.sqrt(var / n)

    def fading_m1_is_rayleigh():
        a = sample_fading(LinkEnvironment.LOS, 1, rng, 1_000_000)
        # Exp(1): variance 1, variance of the sample variance (mu4 - 1) / n = 8 / n
        return sampled_mean_and_var(a, 1.0) and abs(a.var() - 1.0) <= 4 * math.sqrt(8 / len(a))

    def los_m1_branch_equals_nlos():
        env = EnvironmentParams(m_los=1, alpha_los=3.5)
        args = (80.0, 30.0)
        return p_success_conditional(*args, LinkEnvironment.LOS, rho_r, 3.0, cfg, env) == p_success_conditional(
            *args, LinkEnvironment.NLOS, rho_r, 3.0, cfg, env
        )

    def field_free_multi_is_silent_single():
        c = replace(FIELD_CFG, lambda_e=5e-6)
        multi = simulate_secrecy_multi(MultiJammerSettings(0.0, 100.0), c, ENV, n=50_000, seed=1)
        single = simulate_secrecy(JammerPlacement(0.0, 100.0), replace(c, p_jam=0.0), ENV, n=50_000, seed=2)
        return abs(multi.mean - single.mean) <= 4 * math.hypot(multi.std_error, single.std_error)

    def field_without_eves_is_legit_factor():
        c = replace(FIELD_CFG, lambda_e=0.0)
        s = MultiJammerSettings(7e-6, 100.0)
        return within(simulate_components_multi(s, c, ENV, n=20_000, seed=3)["p_se"], legitimate_factor(s, c, ENV))

    def offset_sweep_rows():
        doc = {
            "mode": "analytic",
            "network": {"ell_r": 340, "lambda_e": 5.0e-7},
            "sweep": {"d_tu": {"start": 0, "stop": 600, "step": 10}, "z_u": [0, 100, 200]},
        }
        scenario = tmp_path / "offset.yaml"
        scenario.write_text(yaml.safe_dump(doc))
        out = tmp_path / "offset.csv"
        if main(["run", str(scenario), "--output", str(out)]) != 0:
            return False
        rows = list(csv.DictReader(open(out, newline="")))
        return len(rows) == 183 and all(0.0 <= float(r["p_se"]) <= 1.0 for r in rows)

    four = EnvironmentParams(alpha_nlos=4.0)
    fc = FIELD_CFG
    no_eve_fc = replace(fc, lambda_e=0.0)

    return {
        # geometry and channel
        "distance, jammer at Tx": lambda: all(horizontal_distance(0.0, 340.0, t) == 340.0 for t in (0.0, 1.0, math.pi)),
        "distance, coincident": lambda: horizontal_distance(100.0, 100.0, 0.0) == 0.0,
        "distance, opposite sides": lambda: math.isclose(horizontal_distance(100.0, 340.0, math.pi), 440.0, rel_tol=1e-15),
        "LoS at zero distance": lambda: los_probability(0.0, 100.0, ENV) == 1.0,
        "LoS for ground jammer": lambda: los_probability(100.0, 0.0, ENV) == 0.0,
        "Q(0)": lambda: q_function(0.0) == 0.5,
        "Q(40)": lambda: q_function(40.0) < 1e-300,
        "NLoS fading mean": lambda: abs(sample_fading(LinkEnvironment.NLOS, 2, rng, 1_000_000).mean() - 1.0) <= 0.01,
        "LoS m=1 fading is Rayleigh": fading_m1_is_rayleigh,
        "SINR without jamming": lambda: sinr(2.0, 0.0, 1e-12, 1e-13, 1e-13) == 2.0 * 1e-12 / 1e-13,
        "SINR without signal": lambda: sinr(0.0, 1.0, 1e-12, 1e-13, 1e-13) == 0.0,
        "SINR arithmetic": lambda: math.isclose(sinr(1.0, 1.0, 1e-12, 1e-13, 1e-13), 5.0, rel_tol=1e-15),
        # single jammer
        "p_s with silent jammer": lambda: p_success(pl, silent, ENV) == noise_only,
        "p_s with silent jammer and no noise": lambda: p_success(pl, replace(silent, noise=TINY_NOISE), ENV) == 1.0,
        "NLoS branch with no interference": lambda: p_success_conditional(
            80.0, 30.0, LinkEnvironment.NLOS, rho_r, cfg.gamma_t, silent, ENV
        ) == noise_only,
        "LoS m=1 branch equals NLoS": los_m1_branch_equals_nlos,
        "p_e with no eavesdroppers": lambda: p_eavesdrop(pl, replace(cfg, lambda_e=0.0), ENV) == 0.0,
        "p_e with dense eavesdroppers": lambda: p_eavesdrop(pl, replace(cfg, lambda_e=1e-2), ENV) == 1.0,
        "p_se with no eavesdroppers": lambda: p_secrecy(pl, replace(cfg, lambda_e=0.0), ENV).p_se == p_success(pl, cfg, ENV),
        "p_se for ideal link": lambda: p_secrecy(pl, replace(silent, lambda_e=0.0, noise=TINY_NOISE), ENV).p_se == 1.0,
        "asymptote with no eavesdroppers": lambda: p_secrecy_asymptotic(pl, replace(cfg, lambda_e=0.0), ENV)
        == p_success(pl, cfg, ENV),
        "asymptote with overwhelming jammer": lambda: math.isclose(
            p_secrecy_asymptotic(JammerPlacement(1.0, 1.0), replace(cfg, p_jam=1e10), ENV),
            p_success(JammerPlacement(1.0, 1.0), replace(cfg, p_jam=1e10), ENV),
            rel_tol=1e-12,
        ),
        # jammer field
        "field, no jammers or eves": lambda: math.isclose(
            p_secrecy_multi(MultiJammerSettings(0.0, 100.0), no_eve_fc, ENV),
            math.exp(-fc.gamma_t * fc.noise / rho(fc.ell_r, fc.p_tx, ENV.alpha_ground)),
            rel_tol=1e-15,
        ),
        "field only hurts Rx": lambda: p_secrecy_multi(MultiJammerSettings(7e-6, 100.0), no_eve_fc, ENV)
        <= math.exp(-fc.gamma_t * fc.noise / rho(fc.ell_r, fc.p_tx, ENV.alpha_ground)),
        "asymptote, no jammers or eves": lambda: math.isclose(
            p_secrecy_multi_asymptotic(MultiJammerSettings(0.0, 0.0), no_eve_fc, ENV),
            math.exp(-fc.gamma_t * fc.noise * fc.ell_r**3.5 / fc.p_tx),
            rel_tol=1e-15,
        ),
        "closed form, no eves": lambda: math.isclose(
            p_secrecy_multi_closed_form(MultiJammerSettings(7e-6, 0.0), no_eve_fc, four),
            math.exp(
                -0.5 * math.pi**2 * 7e-6 * math.sqrt(fc.gamma_t * fc.ell_r**4 * fc.p_jam / fc.p_tx)
                - fc.gamma_t * fc.noise * fc.ell_r**4 / fc.p_tx
            ),
            rel_tol=1e-15,
        ),
        "closed form, no jammers": lambda: math.isclose(
            p_secrecy_multi_closed_form(MultiJammerSettings(0.0, 0.0), fc, four),
            math.exp(
                -fc.gamma_t * fc.noise * fc.ell_r**4 / fc.p_tx
                - math.pi * fc.lambda_e * math.sqrt(math.pi * fc.p_tx / (4 * fc.gamma_t_prime * fc.noise))
            ),
            rel_tol=1e-15,
        ),
        # simulation
        "empty PPP": lambda: all(len(sample_ppp(0.0, 1e4, rng)) == 0 for _ in range(100)),
        "PPP points inside disk": lambda: bool((np.hypot(*sample_ppp(1e-5, 1e4, rng).T) <= 1e4).all()),
        "simulated ideal link": lambda: simulate_secrecy(
            pl, replace(silent, lambda_e=0.0, noise=TINY_NOISE), ENV, n=10_000, seed=1
        ).mean == 1.0,
        "simulated impossible threshold": lambda: simulate_secrecy(pl, replace(cfg, gamma_t=1e300), ENV, n=10_000, seed=1).mean
        == 0.0,
        "field-free simulation equals silent single jammer": field_free_multi_is_silent_single,
        "field simulation without eves": field_without_eves_is_legit_factor,
        # optimizer
        "constant objective tie-break": lambda: (
            lambda b: (b.d_tu_star, b.z_u_star) == (0.0, 0.0)
        )(optimize_placement(PlacementSearchSpec(), replace(silent, lambda_e=0.0), ENV)),
        "no jammers, lowest height": lambda: optimize_height_multi(
            PlacementSearchSpec(objective=Objective.MULTI), MultiJammerSettings(0.0, 0.0), fc, ENV
        ).z_u_star
        == 0.0,
        # scenario files
        "offset sweep row count": offset_sweep_rows,
        "defaults validate": lambda: validate_config({}) == [],
        "low NLoS exponent reported": lambda: any("alpha_nlos >= 2" in v for v in validate_config({"environment": {"alpha_nlos": 1.5}})),
        "negative lambda_e reported": lambda: any("lambda_e" in v for v in validate_config({"network": {"lambda_e": -1e-7}})),
    }


def test_c7_trivial_limits(acceptance, tmp_path):
    checks = _trivial_checks(tmp_path)
    failed = [name for name, check in checks.items() if not check()]
    ok = acceptance("C7 trivial-limit suite", not failed, f"{len(checks) - len(failed)}/{len(checks)} checks, failed={failed}")
    assert ok


# ---------------------------------------------------------------------------
# 8. fading-shape crossover


def test_c8_fading_shape_crossover(acceptance):
    cfg = OFFSET_CFG
    envs = {m: EnvironmentParams(m_los=m) for m in (2, 9)}

    def gap(d):
        pl = JammerPlacement(d, 100.0)
        return p_secrecy(pl, cfg, envs[9]).p_se - p_secrecy(pl, cfg, envs[2]).p_se

    lo, hi = 50.0, 2000.0
    g_lo, g_hi = gap(lo), gap(hi)
    bracket = g_lo < 0 < g_hi
    while bracket and hi - lo > 0.5:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0:
            lo = mid
        else:
            hi = mid
    spec = PlacementSearchSpec(AxisGrid(0.0, 1500.0, 151), AxisGrid(100.0, 100.0, 1))
    d_star = {m: optimize_placement(spec, cfg, e).d_tu_star for m, e in envs.items()}
    ok = acceptance(
        "C8 m_L crossover",
        bracket and d_star[9] > d_star[2],
        f"gap(50)={g_lo:+.2e}, gap(2000)={g_hi:+.2e}, crossover at d_tu ~ {0.5 * (lo + hi):.1f} m; "
        f"d_tu*(m=2)={d_star[2]:.2f}, d_tu*(m=9)={d_star[9]:.2f}",
    )
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
