"""Comparison schemes run at the same power budget as the optimized systems."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleLayoutError
from .geometry import PinchLayout
from .kernels import extract_rank_one, lift, wm_beamform_sca
from .pso import PsoHyper, pso_optimize
from .rates import SecrecyReport, miso_rate, rate_single, secrecy_rate
from .scenario import Scenario

BASELINE_TAGS = ("random-position", "conventional-analog", "fdb-an",
                 "fdb-no-an", "wm-no-an")


def _draw_layout(scn: Scenario, rng: np.random.Generator,
                 max_attempts: int = 1000) -> PinchLayout:
    n = scn.num_pas_per_waveguide
    half = scn.region_side / 2.0
    for _ in range(max_attempts):
        xs = np.sort(rng.uniform(-half, half, n))
        if n == 1 or np.diff(xs).min() >= scn.min_spacing:
            return PinchLayout(0, xs)
    raise InfeasibleLayoutError(
        f"could not draw {n} positions with spacing {scn.min_spacing:g} in "
        f"{max_attempts} attempts")


def random_position_baseline(scn: Scenario, trials: int,
                             rng_seed) -> SecrecyReport:
    """Mean rates/secrecy rate over unoptimized uniform layouts.

    The secrecy clamp applies per realization, so the mean secrecy rate is
    reported as-is rather than recomputed from the mean rates."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    rb = np.empty(trials)
    re = np.empty(trials)
    for t in range(trials):
        layout = _draw_layout(scn, rng)
        rb[t] = rate_single(scn.max_power, layout, scn.bob_pos, scn.noise_bob, scn)
        re[t] = rate_single(scn.max_power, layout, scn.eve_pos, scn.noise_eve, scn)
    sr = np.maximum(rb - re, 0.0)
    return SecrecyReport(rate_bob=float(rb.mean()), rate_eve=float(re.mean()),
                         secrecy_rate=float(sr.mean()))


def _ula_channels(scn: Scenario, n_elements: int):
    """Free-space channels of a half-wavelength array anchored at the feed
    corner; one column per element, rows (bob, eve)."""
    xs = (-scn.region_side / 2.0
          + scn.wavelength / 2.0 * np.arange(n_elements))
    amp = math.sqrt(scn.path_gain)
    out = []
    for user in (scn.bob_pos, scn.eve_pos):
        d = np.sqrt((user[0] - xs) ** 2 + user[1] ** 2
                    + scn.waveguide_height ** 2)
        out.append(amp * np.exp(-2j * math.pi / scn.wavelength * d) / d)
    return out


def conventional_analog_baseline(scn: Scenario, rng_seed,
                                 hyper: PsoHyper | None = None):
    """Single-RF-chain array with unit-modulus per-element weights.

    Phases are tuned by the swarm optimizer for the secrecy rate; every
    element radiates max_power/N."""
    n = scn.num_pas_per_waveguide
    g_b, g_e = _ula_channels(scn, n)
    scale = scn.max_power / n

    def fitness(phases: np.ndarray) -> np.ndarray:
        steer = np.exp(1j * phases)
        snr_b = scale * np.abs(steer @ g_b) ** 2 / scn.noise_bob
        snr_e = scale * np.abs(steer @ g_e) ** 2 / scn.noise_eve
        return np.maximum(np.log2(1 + snr_b) - np.log2(1 + snr_e), 0.0)

    if hyper is None:
        hyper = PsoHyper(dims=n, bounds_lo=0.0, bounds_hi=2.0 * math.pi)
    best, _, _ = pso_optimize(fitness, hyper, rng_seed, vectorized=True)
    steer = np.exp(1j * best)
    rb = math.log2(1 + scale * abs(steer @ g_b) ** 2 / scn.noise_bob)
    re = math.log2(1 + scale * abs(steer @ g_e) ** 2 / scn.noise_eve)
    return secrecy_rate(rb, re), best


def fdb_baseline(scn: Scenario, with_an: bool, rng_seed=None,
                 sca_tol: float = 1e-3):
    """Fully-digital beamforming over 2N corner-anchored antennas.

    The no-noise variant freezes the jamming covariance at zero; the
    with-noise variant warm-starts from that solution, so enabling the
    jamming stream never loses secrecy rate on an instance."""
    del rng_seed  # deterministic; accepted for a uniform baseline signature
    n2 = 2 * scn.num_pas_per_waveguide
    g_b, g_e = _ula_channels(scn, n2)

    w0 = math.sqrt(scn.max_power) * g_b / (np.linalg.norm(g_b) or 1.0)
    zero = np.zeros((n2, n2), dtype=complex)
    w_mat, _, _ = wm_beamform_sca(
        g_b, g_e, scn.max_power, scn.noise_bob, scn.noise_eve,
        tol=sca_tol, init=(lift(w0), zero), optimize_v=False)
    if with_an:
        w_mat, v_mat, _ = wm_beamform_sca(
            g_b, g_e, scn.max_power, scn.noise_bob, scn.noise_eve,
            tol=sca_tol, init=(w_mat, zero), optimize_v=True)
    else:
        v_mat = zero

    w, _ = extract_rank_one(w_mat)
    v, _ = extract_rank_one(v_mat)
    rb = miso_rate(w, v, g_b, scn.noise_bob)
    re = miso_rate(w, v, g_e, scn.noise_eve)
    return secrecy_rate(rb, re), (w, v)
