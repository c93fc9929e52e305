"""Acceptance suite: one test per release criterion, at pinned tolerances.

Runs at desk scale (N <= 8, 100 trials per figure-style sweep).  Each test
prints a PASS line with its key numbers; run with ``pytest -s`` to see them
inline.  Monte-Carlo sweeps use fixed per-figure base seeds committed here.
"""

import math

import numpy as np
import pytest

from oracles import (random_channel_scalar, random_channel_vector,
                     uniform_grid_placement_oracle, wd_grid_oracle,
                     wd_objective, wm_rank_one_grid_oracle)
from pinchsec.estimators import WmOptimizer
from pinchsec.experiments import SweepSpec, run_sweep, summarize
from pinchsec.geometry import PinchLayout
from pinchsec.kernels import (WdSurrogate, WmSurrogate, extract_rank_one,
                              lift, wd_power_sca, wm_beamform_sca,
                              wm_true_objective)
from pinchsec.past import (AlignmentTarget, FineTuneParams,
                           coarse_uniform_placement, past_optimize)
from pinchsec.pso import PsoHyper, pso_optimize
from pinchsec.rates import rate_single
from pinchsec.scenario import Scenario, dual_waveguide_offsets

PMAX = 1e-3
NOISES = (1e-12, 1e-12)
PARAMS = FineTuneParams()
JOBS = 2

SEEDS = {
    "n_even": 20240801, "n_odd": 20240805, "region": 20240806,
    "dual": 20240807, "separation": 20240809, "contracts": 20240810,
}


def single_template(n, side=5.0):
    return Scenario(bob_pos=[0, 0, 0], eve_pos=[0, 0, 0], region_side=side,
                    waveguide_height=2.0, num_pas_per_waveguide=n)


def dual_template(n, sep=0.5):
    return Scenario(bob_pos=[0, 0, 0], eve_pos=[0, 0, 0], region_side=5.0,
                    waveguide_height=2.0,
                    waveguide_y_offsets=dual_waveguide_offsets(sep),
                    num_pas_per_waveguide=n)


def medians(rows):
    return {(a["method"], a["sweep_value"]): a["median_sr"]
            for a in summarize(rows)}


def eve_residual(layout: PinchLayout, scn):
    d = np.sqrt((layout.xs - scn.eve_pos[0]) ** 2 + scn.eve_pos[1] ** 2
                + scn.waveguide_height ** 2)
    phi = (2 * math.pi / scn.wavelength * d
           + 2 * math.pi / scn.guide_wavelength
           * (layout.xs + scn.region_side / 2))
    return abs(np.sum(np.exp(-1j * phi) / d)), d


def test_coarse_placement_matches_grid_oracle():
    """Uniform symmetric minimum-spacing placement is the grid optimum."""
    rng = np.random.default_rng(101)
    worst = 0.0
    for n in (2, 3):
        for _ in range(3):
            bob = rng.uniform(-1.5, 1.5, 2)
            scn = Scenario(bob_pos=[*bob, 0.0], eve_pos=[2, 2, 0],
                           region_side=5.0, waveguide_height=2.0,
                           num_pas_per_waveguide=n)
            spacing = scn.min_spacing
            step = spacing / 200.0
            grid_best = uniform_grid_placement_oracle(
                n, bob[0], bob[1] ** 2 + 4.0, spacing, 5 * spacing, step)
            ours = coarse_uniform_placement(n, bob[0], spacing, scn).xs
            dev = np.max(np.abs(grid_best - ours))
            worst = max(worst, dev)
            assert dev <= step + 1e-12
    print(f"\nPASS coarse-placement grid oracle: max deviation {worst:.2e} m "
          f"(one grid step = {step:.2e} m)")


def test_rate_arithmetic_oracle():
    """Canonical single-antenna rate against the hand computation."""
    scn = single_template(1)
    lay = PinchLayout(0, [0.0])
    got = rate_single(1e-3, lay, [0, 0, 0], 1e-12, scn)
    # independent arithmetic: SNR = P * (c/(4 pi f))^2 / (H^2 sigma^2)
    snr = 1e-3 * (299792458.0 / (4 * math.pi * 28e9)) ** 2 / (4.0 * 1e-12)
    assert got == pytest.approx(math.log2(1 + snr), rel=1e-12)
    assert got == pytest.approx(7.51, abs=0.01)
    print(f"\nPASS arithmetic oracle: rate {got:.4f} bit/s/Hz (7.51 +- 0.01)")


def test_past_destructive_alignment():
    """Pairwise cancellation at the eavesdropper after position tuning."""
    rng = np.random.default_rng(SEEDS["contracts"])
    for n in (2, 4, 6):
        tpl = single_template(n)
        hits = 0
        for _ in range(100):
            bob = rng.uniform(-2.5, 2.5, 2)
            eve = rng.uniform(-2.5, 2.5, 2)
            scn = tpl.with_users([*bob, 0.0], [*eve, 0.0])
            res = past_optimize(AlignmentTarget(), PARAMS, scn)
            resid, d = eve_residual(res.layout, scn)
            hits += resid <= 0.2 * np.sum(1 / d)
        assert hits >= 90, f"N={n}: only {hits}/100 seeds under the bound"
        print(f"\nPASS destructive alignment N={n}: {hits}/100 seeds "
              "with residual <= 0.2 x sum(1/d)")
    # odd case: exactly one un-cancelled term survives
    tpl = single_template(3)
    ratios = []
    for _ in range(100):
        bob = rng.uniform(-2.5, 2.5, 2)
        eve = rng.uniform(-2.5, 2.5, 2)
        scn = tpl.with_users([*bob, 0.0], [*eve, 0.0])
        res = past_optimize(AlignmentTarget(), PARAMS, scn)
        resid, d = eve_residual(res.layout, scn)
        ratios.append(resid / np.mean(1 / d))
    med = float(np.median(ratios))
    assert med == pytest.approx(1.0, abs=0.05)
    print(f"PASS destructive alignment N=3: residual / one-term magnitude "
          f"median {med:.3f}")


def test_trend_vs_antenna_count_even():
    """Secrecy rate versus number of antennas, even counts."""
    spec = SweepSpec("num_pas", (2.0, 4.0, 6.0),
                     ("past", "pso-single", "random", "conventional"),
                     100, SEEDS["n_even"], single_template(2))
    med = medians(run_sweep(spec, jobs=JOBS))
    for method in ("past", "pso-single", "conventional"):
        curve = [med[(method, v)] for v in (2.0, 4.0, 6.0)]
        assert all(b >= a for a, b in zip(curve, curve[1:])), \
            f"{method} not non-decreasing: {curve}"
    for v in (2.0, 4.0, 6.0):
        for method in ("past", "pso-single"):
            assert med[(method, v)] > med[("random", v)]
            assert med[(method, v)] > med[("conventional", v)]
        assert med[("past", v)] >= 0.8 * med[("pso-single", v)]
    curves = {m: [round(med[(m, v)], 3) for v in (2.0, 4.0, 6.0)]
              for m in spec.methods}
    print(f"\nPASS antenna-count trend (even): {curves}")


def test_trend_vs_antenna_count_odd():
    """Odd antenna counts: the tuning gap to the swarm search shrinks."""
    spec = SweepSpec("num_pas", (3.0, 5.0, 7.0), ("past", "pso-single"),
                     100, SEEDS["n_odd"], single_template(3))
    med = medians(run_sweep(spec, jobs=JOBS))
    gaps = [med[("pso-single", v)] - med[("past", v)] for v in (3.0, 5.0, 7.0)]
    assert gaps[0] >= 1.0, f"expected a material gap at N=3, got {gaps[0]:.3f}"
    assert gaps[0] > gaps[1] > gaps[2], f"gap not shrinking: {gaps}"
    print(f"\nPASS antenna-count trend (odd): gaps to swarm search {np.round(gaps, 3)}")


def test_trend_vs_region_size():
    """Secrecy rate versus region size; flexible placement degrades least."""
    spec = SweepSpec("area_side", (3.0, 5.0, 7.0, 9.0),
                     ("past", "pso-single", "conventional"),
                     100, SEEDS["region"], single_template(6))
    med = medians(run_sweep(spec, jobs=JOBS))
    drops = {}
    for method in spec.methods:
        curve = [med[(method, v)] for v in spec.values]
        assert all(a > b for a, b in zip(curve, curve[1:])), \
            f"{method} not decreasing in region size: {curve}"
        drops[method] = (curve[0] - curve[-1]) / curve[0]
    assert drops["past"] < drops["conventional"]
    assert drops["pso-single"] < drops["conventional"]

    # noted exception: 3-antenna tuning fluctuates (reported, not asserted)
    spec3 = SweepSpec("area_side", (3.0, 5.0, 7.0, 9.0), ("past",),
                      100, SEEDS["region"], single_template(3))
    med3 = [a["median_sr"] for a in summarize(run_sweep(spec3, jobs=JOBS))]
    print(f"\nPASS region-size trend: relative drops "
          f"{ {m: round(d, 3) for m, d in drops.items()} }; "
          f"3-antenna fluctuation case (not asserted): {np.round(med3, 3)}")


def test_sca_contracts():
    """Monotone traces, expansion-point tangency, gradient consistency."""
    rng = np.random.default_rng(SEEDS["contracts"])

    worst_dip = 0.0
    for _ in range(1000):
        h = [random_channel_scalar(rng) for _ in range(4)]
        _, trace = wd_power_sca(*h, PMAX, *NOISES)
        diffs = np.diff(trace.objective_per_iter)
        if diffs.size:
            worst_dip = min(worst_dip, float(diffs.min()))
    assert worst_dip >= -1e-9

    for _ in range(1000):
        h_b = random_channel_vector(rng, 2)
        h_e = random_channel_vector(rng, 2)
        _, _, trace = wm_beamform_sca(h_b, h_e, PMAX, *NOISES)
        diffs = np.diff(trace.objective_per_iter)
        if diffs.size:
            worst_dip = min(worst_dip, float(diffs.min()))
    assert worst_dip >= -1e-9

    # tangency at the expansion point, both surrogates
    worst_gap = 0.0
    for _ in range(200):
        gains = tuple(abs(random_channel_scalar(rng)) ** 2 for _ in range(4))
        ps0, pa0 = rng.uniform(0, PMAX / 2, 2)
        surr = WdSurrogate(*gains, *NOISES, ps0, pa0)
        gap = abs(surr.value(ps0, pa0) - wd_objective(ps0, pa0, *gains, *NOISES))
        worst_gap = max(worst_gap, gap)
        w0 = lift(random_channel_vector(rng, 2, scale=1e-2))
        v0 = lift(random_channel_vector(rng, 2, scale=1e-2))
        h_b, h_e = random_channel_vector(rng, 2), random_channel_vector(rng, 2)
        wsur = WmSurrogate(h_b, h_e, *NOISES, w0, v0)
        gap = abs(wsur.value(w0, v0)
                  - wm_true_objective(w0, v0, h_b, h_e, *NOISES))
        worst_gap = max(worst_gap, gap)
    assert worst_gap <= 1e-9

    # central finite differences on 100 random points per kernel
    worst_rel = 0.0
    h_fd = 1e-6 * PMAX
    for _ in range(100):
        gains = tuple(abs(random_channel_scalar(rng)) ** 2 for _ in range(4))
        surr = WdSurrogate(*gains, *NOISES, *rng.uniform(PMAX / 10, PMAX / 2, 2))
        ps, pa = rng.uniform(PMAX / 10, PMAX / 2, 2)
        grad = surr.grad(ps, pa)
        fd = np.array([
            (surr.value(ps + h_fd, pa) - surr.value(ps - h_fd, pa)) / (2 * h_fd),
            (surr.value(ps, pa + h_fd) - surr.value(ps, pa - h_fd)) / (2 * h_fd)])
        worst_rel = max(worst_rel,
                        np.linalg.norm(grad - fd) / np.linalg.norm(fd))

        h_b, h_e = random_channel_vector(rng, 2), random_channel_vector(rng, 2)
        w0 = lift(random_channel_vector(rng, 2, scale=1e-2))
        v0 = lift(random_channel_vector(rng, 2, scale=1e-2))
        wsur = WmSurrogate(h_b, h_e, *NOISES, w0, v0)
        g_w, g_v = wsur.grad(w0, v0)
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        d_w = 0.5 * (a + a.conj().T)
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        d_v = 0.5 * (a + a.conj().T)
        fd_dir = (wsur.value(w0 + h_fd * d_w, v0 + h_fd * d_v)
                  - wsur.value(w0 - h_fd * d_w, v0 - h_fd * d_v)) / (2 * h_fd)
        analytic = float((np.trace(g_w @ d_w) + np.trace(g_v @ d_v)).real)
        worst_rel = max(worst_rel, abs(fd_dir - analytic) / abs(analytic))
    assert worst_rel <= 1e-5
    print(f"\nPASS SCA contracts: worst trace dip {worst_dip:.2e}, "
          f"worst tangency gap {worst_gap:.2e}, worst gradient rel err "
          f"{worst_rel:.2e}")


def test_wd_power_oracle():
    """Power-split fixed point against the budget-line grid enumeration."""
    rng = np.random.default_rng(SEEDS["contracts"] + 1)
    worst = -np.inf
    for _ in range(100):
        h = [random_channel_scalar(rng) for _ in range(4)]
        gains = tuple(abs(x) ** 2 for x in h)
        _, trace = wd_power_sca(*h, PMAX, *NOISES, tol=1e-9)
        oracle = wd_grid_oracle(gains, NOISES, PMAX, steps=10_000)
        worst = max(worst, oracle - max(trace.final, 0.0))
    assert worst <= 1e-3
    print(f"\nPASS WD power oracle: worst gap to 1e-4-step grid {worst:.2e} "
          "bit/s/Hz over 100 instances")


def test_wm_small_instance_oracle():
    """Beamforming SCA plus rank-one extraction against the beam-pair grid."""
    rng = np.random.default_rng(SEEDS["contracts"] + 2)
    worst = -np.inf
    for _ in range(30):
        h_b = random_channel_vector(rng, 2)
        h_e = random_channel_vector(rng, 2)
        w_mat, v_mat, _ = wm_beamform_sca(h_b, h_e, PMAX, *NOISES, tol=1e-8)
        w, _ = extract_rank_one(w_mat)
        v, _ = extract_rank_one(v_mat)
        sr = max(wm_true_objective(lift(w), lift(v), h_b, h_e, *NOISES), 0.0)
        oracle = wm_rank_one_grid_oracle(h_b, h_e, PMAX, *NOISES, pts=40)
        worst = max(worst, oracle - sr)
    assert worst <= 1e-2
    print(f"\nPASS WM small-instance oracle: worst gap to 40-point beam grid "
          f"{worst:.2e} bit/s/Hz over 30 instances")


def test_dual_waveguide_method_ordering():
    """Dual-waveguide method ordering at N=3, L=5."""
    spec = SweepSpec("num_pas", (3.0,),
                     ("wm", "wd", "fdb-an", "fdb-no-an", "wm-no-an"),
                     100, SEEDS["dual"], dual_template(3))
    rows = run_sweep(spec, jobs=JOBS)
    med = {a["method"]: a["median_sr"] for a in summarize(rows)}
    assert med["wm"] >= med["wd"]
    assert med["wm"] >= med["fdb-an"] >= med["fdb-no-an"]
    by_trial = {}
    for r in rows:
        by_trial.setdefault(r.trial, {})[r.method] = r.sr
    wins = sum(1 for d in by_trial.values() if d["wm"] >= d["wm-no-an"])
    assert wins >= 90
    print(f"\nPASS dual-waveguide ordering: medians "
          f"{ {k: round(v, 3) for k, v in med.items()} }, "
          f"wm >= wm-no-an on {wins}/100 paired seeds")


def test_trend_vs_waveguide_separation():
    """Waveguide-separation sweep: division degrades, multiplexing stays flat.

    The division clause asserts strictly decreasing medians;
    per-trial paired differences are printed alongside because the
    adjacent-step median effect sits near the Monte-Carlo resolution at
    this trial count (see the decisions ledger).
    """
    values = (0.25, 0.5, 1.0, 2.0)
    spec = SweepSpec("waveguide_sep", values, ("wd", "wm"), 100,
                     SEEDS["separation"], dual_template(3))
    rows = run_sweep(spec, jobs=JOBS)
    med = medians(rows)

    wm_curve = [med[("wm", v)] for v in values]
    spread = (max(wm_curve) - min(wm_curve)) / max(wm_curve)
    assert spread < 0.25

    wd_curve = [med[("wd", v)] for v in values]
    by_trial = {}
    for r in rows:
        if r.method == "wd":
            by_trial.setdefault(r.trial, {})[r.sweep_value] = r.sr
    paired = np.array([[c[v] for v in values] for c in by_trial.values()])
    paired_diffs = np.median(np.diff(paired, axis=1), axis=0)
    print(f"\nseparation-sweep diagnostics: wd medians {np.round(wd_curve, 4)}, "
          f"median paired per-trial steps {np.round(paired_diffs, 4)}, "
          f"wm spread {spread:.2%}")
    assert all(a > b for a, b in zip(wd_curve, wd_curve[1:])), \
        f"wd medians not strictly decreasing: {np.round(wd_curve, 4)}"
    print(f"PASS separation trend: wd strictly decreasing, wm varies {spread:.2%}"
          " (< 25%)")


def test_pso_engine_contract():
    """Exact incumbent monotonicity plus the known-optimum quadratic."""
    hyper = PsoHyper(dims=2, bounds_lo=0.0, bounds_hi=1.0, max_iters=300)
    worst_err = 0.0
    for seed in range(20):
        best, _, trace = pso_optimize(
            lambda xm: -np.sum((xm - 0.3) ** 2, axis=1), hyper, seed,
            vectorized=True)
        assert np.all(np.diff(trace) >= 0.0)
        worst_err = max(worst_err, float(np.max(np.abs(best - 0.3))))
    assert worst_err <= 1e-3
    print(f"\nPASS PSO engine: monotone incumbents, quadratic optimum within "
          f"{worst_err:.2e} over 20 seeds")


def test_determinism_byte_identical_sweep(tmp_path):
    """The same spec and seed produce byte-identical results files."""
    spec = SweepSpec("num_pas", (2.0, 4.0, 6.0),
                     ("past", "pso-single", "random", "conventional"),
                     10, SEEDS["n_even"], single_template(2))
    run_sweep(spec, out_dir=tmp_path / "a", jobs=JOBS)
    run_sweep(spec, out_dir=tmp_path / "b", jobs=1)
    a = (tmp_path / "a" / "results.csv").read_bytes()
    b = (tmp_path / "b" / "results.csv").read_bytes()
    assert a == b
    print(f"\nPASS determinism: repeated sweep emitted byte-identical "
          f"results.csv ({len(a)} bytes), independent of worker count")
