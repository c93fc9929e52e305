"""Two-stage optimizer for the waveguide-division architecture.

Stage 1 tunes the antenna positions of both waveguides independently: the
signal waveguide aligns constructively at Bob and destructively at Eve, the
noise waveguide does the reverse.  Stage 2 splits the power budget between
the two streams by successive convex approximation.  The stage order is
valid because the layouts do not depend on the power values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import composite_channel
from .errors import PinchSecError
from .geometry import PinchLayout
from .kernels import ScaTrace, wd_power_sca
from .past import AlignmentTarget, FineTuneParams, past_optimize
from .rates import PowerSplit, SecrecyReport, rate_wd, secrecy_rate
from .scenario import Scenario


@dataclass(frozen=True)
class WdSolution:
    layout_signal: PinchLayout
    layout_an: PinchLayout
    split: PowerSplit
    report: SecrecyReport
    sca_trace: ScaTrace


def optimize_wd(scn: Scenario, fine_params: FineTuneParams | None = None,
                sca_tol: float = 1e-3) -> WdSolution:
    if scn.num_waveguides != 2:
        raise ValueError("waveguide division needs exactly 2 waveguides")
    params = fine_params or FineTuneParams()

    try:
        signal = past_optimize(
            AlignmentTarget("bob", "eve", waveguide_index=0), params, scn)
    except PinchSecError as exc:
        raise type(exc)(f"stage 1, signal waveguide: {exc}") from exc
    try:
        noise = past_optimize(
            AlignmentTarget("eve", "bob", waveguide_index=1), params, scn)
    except PinchSecError as exc:
        raise type(exc)(f"stage 1, noise waveguide: {exc}") from exc

    layouts = [signal.layout, noise.layout]
    root_n = math.sqrt(scn.num_pas_per_waveguide)
    h_b1 = composite_channel(layouts[0], scn.bob_pos, scn) / root_n
    h_b2 = composite_channel(layouts[1], scn.bob_pos, scn) / root_n
    h_e1 = composite_channel(layouts[0], scn.eve_pos, scn) / root_n
    h_e2 = composite_channel(layouts[1], scn.eve_pos, scn) / root_n

    try:
        split, trace = wd_power_sca(
            h_b1, h_b2, h_e1, h_e2, scn.max_power, scn.noise_bob, scn.noise_eve,
            tol=sca_tol,
            init=PowerSplit(scn.max_power / 2.0, scn.max_power / 2.0))
    except (ValueError, RuntimeError) as exc:
        raise RuntimeError(f"stage 2, power allocation: {exc}") from exc

    report = secrecy_rate(
        rate_wd(split, layouts, scn.bob_pos, scn.noise_bob, scn),
        rate_wd(split, layouts, scn.eve_pos, scn.noise_eve, scn))
    return WdSolution(layouts[0], layouts[1], split, report, trace)
