"""Antenna-wise successive position tuning for one waveguide.

Stage 1 places the antennas in the path-loss-optimal pattern: uniform,
minimally spaced, centered over the enhanced user's x-coordinate.  Stage 2
walks outward from a reference antenna and re-spaces each neighbor so that
the per-hop phase increment is a multiple of 2*pi toward the enhanced user
(coherent combining) and an odd multiple of pi toward the suppressed user
(pairwise cancellation).

Both phase conditions cannot hold exactly with a single spacing variable;
following the enhanced user's weaker sensitivity (its combining loss is
second order in phase error, while the suppressed user's leakage is first
order), each step anchors on the closed-form joint solution and then
enforces the anti-phase condition exactly by a 1-D root solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateGeometryError, InfeasibleLayoutError,
                     SearchExhaustedError)
from .geometry import PinchLayout, project_to_feasible
from .rates import SecrecyReport, rate_single
from .scenario import Scenario

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AlignmentTarget:
    """Which user gets coherent combining and which gets cancellation."""

    enhance_user: str = "bob"
    suppress_user: str = "eve"
    waveguide_index: int = 0

    def __post_init__(self):
        if self.enhance_user == self.suppress_user:
            raise ValueError("enhance_user and suppress_user must differ")


@dataclass(frozen=True)
class FineTuneParams:
    max_multiplier_search: int = 50  # half-integer multiples scanned per sign
    phase_tolerance: float = 0.1     # rad, diagnostic threshold

    def __post_init__(self):
        if self.max_multiplier_search < 1:
            raise ValueError("max_multiplier_search must be >= 1")
        if self.phase_tolerance <= 0:
            raise ValueError("phase_tolerance must be positive")


@dataclass(frozen=True)
class PastResult:
    layout: PinchLayout
    report: SecrecyReport
    n_fine_steps: int
    events: tuple[str, ...] = ()


def wrap_to_pi(x):
    """Map angles to (-pi, pi]."""
    return -((-np.asarray(x) + math.pi) % TWO_PI - math.pi)


def coarse_uniform_placement(n: int, center_x: float, spacing: float,
                             scn: Scenario, waveguide_index: int = 0) -> PinchLayout:
    """Uniform symmetric arrangement, shifted into the waveguide if needed."""
    if n < 1:
        raise ValueError("need at least one antenna")
    half = scn.region_side / 2.0
    span = (n - 1) * spacing
    if span > scn.region_side + 1e-12:
        raise InfeasibleLayoutError(
            f"{n} antennas spaced {spacing:g} m exceed the {scn.region_side:g} m "
            "waveguide")
    xs = center_x - span / 2.0 + spacing * np.arange(n)
    if xs[0] < -half:
        xs = xs + (-half - xs[0])
    elif xs[-1] > half:
        xs = xs - (xs[-1] - half)
    return PinchLayout(waveguide_index, xs)


class _StepGeometry:
    """Scalar helpers for one waveguide/user pair, cached per fine step."""

    def __init__(self, target: AlignmentTarget, scn: Scenario):
        y_m = scn.waveguide_y_offsets[target.waveguide_index]
        enh = scn.user_pos(target.enhance_user)
        sup = scn.user_pos(target.suppress_user)
        self.lam = scn.wavelength
        self.lam_g = scn.guide_wavelength
        self.x_enh, self.d2_enh = enh[0], (enh[1] - y_m) ** 2 + scn.waveguide_height ** 2
        self.x_sup, self.d2_sup = sup[0], (sup[1] - y_m) ** 2 + scn.waveguide_height ** 2

    def slope_enh(self, x: float) -> float:
        t = x - self.x_enh
        return t / math.sqrt(t * t + self.d2_enh)

    def slope_sup(self, x: float) -> float:
        t = x - self.x_sup
        return t / math.sqrt(t * t + self.d2_sup)

    def sup_dist_diff(self, x0: float, step: float) -> float:
        """d(x0 + step) - d(x0) to the suppressed user, cancellation-free."""
        t0 = x0 - self.x_sup
        t1 = t0 + step
        d0 = math.sqrt(t0 * t0 + self.d2_sup)
        d1 = math.sqrt(t1 * t1 + self.d2_sup)
        return step * (t0 + t1) / (d0 + d1)


def _fine_step(x_ref: float, side: int, target: AlignmentTarget,
               params: FineTuneParams, scn: Scenario) -> float:
    """Spacing (> 0) between x_ref and its new neighbor on the given side.

    ``side=+1`` grows the layout rightward from x_ref, ``side=-1`` leftward.
    Returns the smallest feasible spacing >= the minimum among the scanned
    half-integer joint-phase anchors; the anti-phase condition at the
    suppressed user holds to machine precision for the returned step.
    """
    g = _StepGeometry(target, scn)
    f_enh = g.slope_enh(x_ref)
    f_sup = g.slope_sup(x_ref)
    den = f_enh - f_sup
    if abs(den) < 1e-10:
        raise DegenerateGeometryError(
            "users at mirror-symmetric bearings from the reference antenna")

    def inc(dx: float) -> float:
        # suppressed-user phase increment across the new gap, left to right;
        # evaluated via the distance difference so no precision is lost to
        # the large absolute phases
        ddiff = side * g.sup_dist_diff(x_ref, side * dx)
        return TWO_PI * (ddiff / g.lam + dx / g.lam_g)

    def dinc(dx: float) -> float:
        return TWO_PI * (g.slope_sup(x_ref + side * dx) / g.lam + 1.0 / g.lam_g)

    def solve(target_cycles: float, dx0: float) -> float | None:
        dx = dx0
        for _ in range(100):
            err = inc(dx) / TWO_PI - target_cycles
            if abs(err) < 1e-11:
                return dx
            step = err * TWO_PI / dinc(dx)
            # keep Newton inside the increasing branch (dx > 0)
            dx = max(dx - step, dx * 0.5, 1e-9)
        return None

    spacing = scn.min_spacing
    best = math.inf
    for k in range(1, params.max_multiplier_search + 1):
        advanced = False
        for m in (k - 0.5, -(k - 0.5)):
            dx_hat = g.lam * m / den
            # steps beyond the waveguide length can never be placed
            if dx_hat <= 0 or dx_hat > scn.region_side:
                continue
            # anchors only grow with k; once they cannot beat the incumbent
            # (roots sit within ~1.3 wavelengths of their anchor), stop
            if dx_hat - 1.3 * g.lam > best:
                continue
            advanced = True
            cycles = round(inc(dx_hat) / TWO_PI - 0.5) + 0.5
            dx = solve(cycles, dx_hat)
            while dx is not None and dx < spacing - 1e-15:
                cycles += 1.0
                dx = solve(cycles, dx + g.lam / 2.0)
            if dx is None:
                continue
            if dx < best:
                best = dx
        if not advanced:
            break
    if not math.isfinite(best):
        raise SearchExhaustedError(
            f"no feasible spacing within {params.max_multiplier_search} "
            "phase multiples")
    return best


def fine_step_right(x_prev: float, target: AlignmentTarget,
                    params: FineTuneParams, scn: Scenario) -> float:
    """Spacing from x_prev to the next antenna on its right."""
    return _fine_step(x_prev, +1, target, params, scn)


def fine_step_left(x_next: float, target: AlignmentTarget,
                   params: FineTuneParams, scn: Scenario) -> float:
    """Spacing from x_next back to the next antenna on its left."""
    return _fine_step(x_next, -1, target, params, scn)


def _phase_profile(layout: PinchLayout, user_pos, scn: Scenario) -> np.ndarray:
    y_m = layout.y_offset(scn)
    dx = layout.xs - user_pos[0]
    d = np.sqrt(dx ** 2 + (user_pos[1] - y_m) ** 2 + scn.waveguide_height ** 2)
    return (TWO_PI / scn.wavelength * d
            + TWO_PI / scn.guide_wavelength * (layout.xs + scn.region_side / 2.0))


def past_optimize(target: AlignmentTarget, params: FineTuneParams,
                  scn: Scenario) -> PastResult:
    """Run both stages and score the resulting layout at full power."""
    n = scn.num_pas_per_waveguide
    spacing = scn.min_spacing
    half = scn.region_side / 2.0
    enh = scn.user_pos(target.enhance_user)

    coarse = coarse_uniform_placement(n, enh[0], spacing, scn,
                                      target.waveguide_index)
    xs = coarse.xs.copy()
    ref = (n + 1) // 2 - 1
    n_steps = 0
    events: list[str] = []

    for i in range(ref + 1, n):           # expand rightward
        try:
            dx = fine_step_right(xs[i - 1], target, params, scn)
            n_steps += 1
        except (DegenerateGeometryError, SearchExhaustedError):
            # users at (nearly) mirror-symmetric bearings: no in-box step can
            # separate their phases, so this antenna keeps its coarse spot
            events.append(f"degenerate-right@{i}")
            xs[i] = max(coarse.xs[i], xs[i - 1] + spacing)
            continue
        if xs[i - 1] + dx > half:
            events.append(f"boundary-right@{i}")
            for j in range(i, n):
                xs[j] = xs[j - 1] + spacing
            break
        xs[i] = xs[i - 1] + dx

    for i in range(ref - 1, -1, -1):      # expand leftward
        try:
            dx = fine_step_left(xs[i + 1], target, params, scn)
            n_steps += 1
        except (DegenerateGeometryError, SearchExhaustedError):
            events.append(f"degenerate-left@{i}")
            xs[i] = min(coarse.xs[i], xs[i + 1] - spacing)
            continue
        if xs[i + 1] - dx < -half:
            events.append(f"boundary-left@{i}")
            for j in range(i, -1, -1):
                xs[j] = xs[j + 1] - spacing
            break
        xs[i] = xs[i + 1] - dx

    xs = project_to_feasible(xs, spacing, scn.region_side)
    layout = PinchLayout(target.waveguide_index, xs)

    theta = _phase_profile(layout, scn.user_pos(target.enhance_user), scn)
    phi = _phase_profile(layout, scn.user_pos(target.suppress_user), scn)
    diag = {
        "enhance_dev": wrap_to_pi(np.diff(theta)),
        "suppress_dev": wrap_to_pi(np.diff(phi) - math.pi),
        "phase_tolerance": params.phase_tolerance,
    }
    report = SecrecyReport.from_rates(
        rate_single(scn.max_power, layout, scn.bob_pos, scn.noise_bob, scn),
        rate_single(scn.max_power, layout, scn.eve_pos, scn.noise_eve, scn),
        phase_diag=diag,
    )
    return PastResult(layout, report, n_steps, tuple(events))
