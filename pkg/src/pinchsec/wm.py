"""Alternating optimizer for the waveguide-multiplexing architecture.

Alternates a particle swarm over all antenna positions (baseband beams
fixed) with an SCA pass over the lifted beamforming matrices (positions
fixed).  Every sub-stage warm-starts from the incumbent and a candidate is
only adopted when it does not lose secrecy rate, so the outer trace is
non-decreasing by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import PinchLayout
from .kernels import default_wm_init, extract_rank_one, lift, wm_beamform_sca
from .past import coarse_uniform_placement
from .pso import PsoHyper, pso_optimize
from .rates import SecrecyReport, miso_rate, wm_effective_channel
from .scenario import Scenario


@dataclass(frozen=True)
class WmSolution:
    layouts: tuple[PinchLayout, PinchLayout]
    w: np.ndarray
    v: np.ndarray
    report: SecrecyReport
    outer_trace: tuple[float, ...]
    rank_ratios: tuple[float, float]
    feasible: bool


def _split_layouts(x: np.ndarray, n: int) -> list[PinchLayout]:
    return [PinchLayout(0, x[:n]), PinchLayout(1, x[n:])]


def pa_fitness(x: np.ndarray, w: np.ndarray, v: np.ndarray, scn: Scenario,
               penalty: float) -> float:
    """Secrecy rate of the raw position vector minus the spacing penalty.

    ``x`` stacks both waveguides' coordinates in antenna order; adjacent
    pairs closer than the minimum spacing each cost ``penalty`` (no sorting,
    disordered pairs count as violations)."""
    return float(pa_fitness_batch(x[None, :], w, v, scn, penalty)[0])


def pa_fitness_batch(x_batch: np.ndarray, w: np.ndarray, v: np.ndarray,
                     scn: Scenario, penalty: float) -> np.ndarray:
    """Vectorized fitness over a population, shape (B, 2N) -> (B,)."""
    n = scn.num_pas_per_waveguide
    x_batch = np.asarray(x_batch, dtype=float)
    root_n = math.sqrt(n)
    amp = math.sqrt(scn.path_gain)
    y_col = np.repeat(scn.waveguide_y_offsets, n)       # (2N,)
    guided = x_batch + scn.region_side / 2.0
    rates = []
    for user_pos, noise in ((scn.bob_pos, scn.noise_bob),
                            (scn.eve_pos, scn.noise_eve)):
        dx = user_pos[0] - x_batch
        dy = user_pos[1] - y_col
        d = np.sqrt(dx * dx + dy * dy + scn.waveguide_height ** 2)
        phase = (2.0 * math.pi / scn.wavelength * d
                 + 2.0 * math.pi / scn.guide_wavelength * guided)
        terms = (amp * np.exp(-1j * phase) / d).reshape(-1, 2, n)
        g = terms.sum(axis=-1) / root_n                 # (B, 2) per waveguide
        sig = np.abs(g @ np.conj(w)) ** 2
        jam = np.abs(g @ np.conj(v)) ** 2
        rates.append(np.log2(1.0 + sig / (jam + noise)))
    sr = np.maximum(rates[0] - rates[1], 0.0)
    gaps = np.diff(x_batch.reshape(-1, 2, n), axis=-1)
    violations = np.sum(gaps < scn.min_spacing, axis=(1, 2))
    return sr - penalty * violations


def _snap_spacing(x: np.ndarray, scn: Scenario, snap_tol: float = 1e-6):
    """Snap sub-tolerance gap deficits to the exact minimum spacing.

    Returns ``(x_fixed, feasible)``; larger violations leave the vector
    unchanged and flag it infeasible."""
    n = scn.num_pas_per_waveguide
    spacing = scn.min_spacing
    x = x.copy()
    half = scn.region_side / 2.0
    for m in range(2):
        seg = x[m * n:(m + 1) * n]
        for i in range(1, n):
            gap = seg[i] - seg[i - 1]
            if gap < spacing:
                if spacing - gap < snap_tol and seg[i - 1] + spacing <= half:
                    seg[i] = seg[i - 1] + spacing
                else:
                    return x, False
    return x, True


def _score(x: np.ndarray, w, v, scn: Scenario):
    n = scn.num_pas_per_waveguide
    layouts = _split_layouts(x, n)
    g_b = wm_effective_channel(layouts, scn.bob_pos, scn)
    g_e = wm_effective_channel(layouts, scn.eve_pos, scn)
    rb = miso_rate(w, v, g_b, scn.noise_bob)
    re = miso_rate(w, v, g_e, scn.noise_eve)
    return max(rb - re, 0.0), rb, re, g_b, g_e


def _alternate(scn: Scenario, hyper: PsoHyper, seeds, x_cur, w, v,
               penalty, outer_tol, sca_tol, use_an):
    """One alternating phase from the given incumbent; candidates are only
    adopted when they do not lose secrecy rate."""
    sr_cur = _score(x_cur, w, v, scn)[0]
    trace = [sr_cur]
    rank_ratios = (0.0, 0.0)
    for seed in seeds:
        # positions by swarm search at fixed beams
        best_x, _, _ = pso_optimize(
            lambda xm: pa_fitness_batch(xm, w, v, scn, penalty),
            hyper, seed, warm_start=x_cur, vectorized=True)
        best_x, ok = _snap_spacing(best_x, scn)
        if ok:
            sr_new = _score(best_x, w, v, scn)[0]
            if sr_new >= sr_cur:
                x_cur, sr_cur = best_x, sr_new

        # beams by SCA at fixed positions, re-lifted from the incumbent pair
        _, _, _, g_b, g_e = _score(x_cur, w, v, scn)
        w_mat, v_mat, _ = wm_beamform_sca(
            g_b, g_e, scn.max_power, scn.noise_bob, scn.noise_eve,
            tol=sca_tol, init=(lift(w), lift(v)), optimize_v=use_an)
        w_new, ratio_w = extract_rank_one(w_mat)
        if use_an:
            v_new, ratio_v = extract_rank_one(v_mat)
        else:
            v_new, ratio_v = np.zeros_like(w_new), 0.0
        sr_new = _score(x_cur, w_new, v_new, scn)[0]
        if sr_new >= sr_cur:
            w, v, sr_cur = w_new, v_new, sr_new
            rank_ratios = (ratio_w, ratio_v)

        trace.append(sr_cur)
        # yield check is relative once rates exceed 1 bit/s/Hz
        if trace[-1] - trace[-2] < outer_tol * max(1.0, sr_cur):
            break
    return x_cur, w, v, trace, rank_ratios


def optimize_wm(scn: Scenario, hyper: PsoHyper | None = None, rng_seed=0,
                penalty: float = 100.0, outer_tol: float = 1e-3,
                outer_max: int = 20, sca_tol: float = 1e-3,
                use_an: bool = True) -> WmSolution:
    """Alternating swarm/SCA optimization of positions and baseband beams.

    The noise-free subproblem is solved first and its fixed point seeds the
    full run, so enabling the jamming stream never loses secrecy rate
    relative to the jamming-free variant under the same seed."""
    if scn.num_waveguides != 2:
        raise ValueError("waveguide multiplexing needs exactly 2 waveguides")
    n = scn.num_pas_per_waveguide
    half = scn.region_side / 2.0
    if hyper is None:
        hyper = PsoHyper(dims=2 * n, bounds_lo=-half, bounds_hi=half)
    elif hyper.dims != 2 * n:
        raise ValueError(f"swarm dimension {hyper.dims} != 2N = {2 * n}")
    seeds = np.random.SeedSequence(rng_seed).spawn(2 * outer_max)

    # start from the path-loss-optimal compact placement over Bob
    x_cur = np.concatenate([
        coarse_uniform_placement(n, scn.bob_pos[0], scn.min_spacing, scn, m).xs
        for m in range(2)])
    g_b = wm_effective_channel(_split_layouts(x_cur, n), scn.bob_pos, scn)
    w, v = default_wm_init(g_b, scn.max_power, use_an=False)

    x_cur, w, v, trace, rank_ratios = _alternate(
        scn, hyper, seeds[:outer_max], x_cur, w, v, penalty, outer_tol,
        sca_tol, use_an=False)
    if use_an:
        x_cur, w, v, trace_an, rank_ratios = _alternate(
            scn, hyper, seeds[outer_max:], x_cur, w, v, penalty, outer_tol,
            sca_tol, use_an=True)
        trace = trace + trace_an[1:]

    sr_fin, rb_fin, re_fin, _, _ = _score(x_cur, w, v, scn)
    layouts = _split_layouts(x_cur, n)
    feasible = all(lay.is_valid(scn) for lay in layouts)
    report = SecrecyReport(rate_bob=rb_fin, rate_eve=re_fin, secrecy_rate=sr_fin)
    return WmSolution(tuple(layouts), w, v, report, tuple(trace),
                      rank_ratios, feasible)
