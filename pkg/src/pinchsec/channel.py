"""Line-of-sight channel model: free-space hop plus in-waveguide propagation.

The end-to-end coefficient of one waveguide is the sum over its antennas of

    sqrt(path_gain) * exp(-j*(2*pi/lambda * d_n + 2*pi/lambda_g * l_n)) / d_n

where d_n is the antenna-to-user distance and l_n = x_n + L/2 the guided
path from the feed.  Phases are kept as raw radians (no pre-wrapping) so
long paths do not lose precision to modular arithmetic.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import GeometryError
from .geometry import PinchLayout
from .scenario import Scenario


def _distances(xs: np.ndarray, y_off: float, user_pos: np.ndarray,
               scn: Scenario) -> np.ndarray:
    dx = user_pos[0] - xs
    dy = user_pos[1] - y_off
    dz = user_pos[2] - scn.waveguide_height
    return np.sqrt(dx * dx + dy * dy + dz * dz)


def free_space_channel(layout: PinchLayout, user_pos, scn: Scenario) -> np.ndarray:
    """Per-antenna free-space coefficients, shape (N,) complex."""
    user_pos = np.asarray(user_pos, dtype=float)
    d = _distances(layout.xs, layout.y_offset(scn), user_pos, scn)
    if np.any(d <= 0):
        raise GeometryError("user coincides with an antenna (zero distance)")
    amp = math.sqrt(scn.path_gain)
    return amp * np.exp(-2j * math.pi / scn.wavelength * d) / d


def inwaveguide_phase(layout: PinchLayout, scn: Scenario) -> np.ndarray:
    """Unit-modulus guided-wave factors from the feed to each antenna."""
    path = layout.xs + scn.region_side / 2.0
    return np.exp(-2j * math.pi / scn.guide_wavelength * path)


def composite_channel(layout: PinchLayout, user_pos, scn: Scenario) -> complex:
    """End-to-end coefficient of one waveguide (both phase factors applied
    with the propagation sign convention)."""
    user_pos = np.asarray(user_pos, dtype=float)
    d = _distances(layout.xs, layout.y_offset(scn), user_pos, scn)
    if np.any(d <= 0):
        raise GeometryError("user coincides with an antenna (zero distance)")
    phase = (2.0 * math.pi / scn.wavelength * d
             + 2.0 * math.pi / scn.guide_wavelength
             * (layout.xs + scn.region_side / 2.0))
    amp = math.sqrt(scn.path_gain)
    return complex(np.sum(amp * np.exp(-1j * phase) / d))


def channel_vector(layouts: list[PinchLayout], user_pos, scn: Scenario) -> np.ndarray:
    """Stack of per-waveguide composite coefficients, shape (M,) complex."""
    if len(layouts) != scn.num_waveguides:
        raise ValueError(
            f"{len(layouts)} layouts for {scn.num_waveguides} waveguides")
    return np.array([composite_channel(lay, user_pos, scn) for lay in layouts])


def composite_channel_batch(xs_batch: np.ndarray, y_off: float, user_pos,
                            scn: Scenario) -> np.ndarray:
    """Composite coefficients for a batch of layouts on one waveguide.

    ``xs_batch`` has shape (B, N); returns shape (B,) complex.  Used by the
    swarm optimizer to evaluate whole populations at once.
    """
    user_pos = np.asarray(user_pos, dtype=float)
    dx = user_pos[0] - xs_batch
    dy = user_pos[1] - y_off
    dz = user_pos[2] - scn.waveguide_height
    d = np.sqrt(dx * dx + dy * dy + dz * dz)
    phase = (2.0 * math.pi / scn.wavelength * d
             + 2.0 * math.pi / scn.guide_wavelength
             * (xs_batch + scn.region_side / 2.0))
    amp = math.sqrt(scn.path_gain)
    return np.sum(amp * np.exp(-1j * phase) / d, axis=-1)
