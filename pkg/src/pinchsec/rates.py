"""Achievable rates and secrecy rate for the supported architectures.

Feeding a waveguide splits its input power uniformly over the N antennas,
so a waveguide driven with power p radiates p/N per antenna.  This shows up
as the 1/N factor in `rate_single`/`rate_wd` and as the 1/sqrt(N) scaling
of the effective per-waveguide channel in `rate_wm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import channel_vector, composite_channel
from .geometry import PinchLayout
from .scenario import Scenario


@dataclass(frozen=True)
class PowerSplit:
    """Baseband power allocation for the waveguide-division architecture."""

    p_signal: float  # watts on the signal waveguide
    p_an: float      # watts on the artificial-noise waveguide

    def __post_init__(self):
        if self.p_signal < 0 or self.p_an < 0:
            raise ValueError("powers must be non-negative")

    @property
    def total(self) -> float:
        return self.p_signal + self.p_an


@dataclass(frozen=True)
class SecrecyReport:
    """Rates of both users plus diagnostics for one candidate solution."""

    rate_bob: float
    rate_eve: float
    secrecy_rate: float
    phase_diag: dict | None = None

    @classmethod
    def from_rates(cls, rate_bob: float, rate_eve: float,
                   phase_diag: dict | None = None) -> "SecrecyReport":
        if rate_bob < 0 or rate_eve < 0:
            raise ValueError("rates must be non-negative")
        return cls(rate_bob, rate_eve, max(rate_bob - rate_eve, 0.0), phase_diag)


def secrecy_rate(rate_bob: float, rate_eve: float) -> SecrecyReport:
    """Secrecy rate [R_b - R_e]^+ packaged with its operands."""
    return SecrecyReport.from_rates(rate_bob, rate_eve)


def rate_single(power: float, layout: PinchLayout, user_pos, noise: float,
                scn: Scenario) -> float:
    """Rate (bit/s/Hz) of a user served by one waveguide carrying one stream."""
    if power < 0:
        raise ValueError("power must be non-negative")
    h = composite_channel(layout, user_pos, scn)
    snr = (power / layout.n) * abs(h) ** 2 / noise
    return math.log2(1.0 + snr)


def rate_wd(split: PowerSplit, layouts: list[PinchLayout], user_pos,
            noise: float, scn: Scenario) -> float:
    """Rate under waveguide division: waveguide 0 carries the signal with
    p_signal, waveguide 1 carries artificial noise with p_an."""
    if len(layouts) != 2:
        raise ValueError("waveguide division needs exactly 2 layouts")
    n = layouts[0].n
    h_sig = composite_channel(layouts[0], user_pos, scn)
    h_an = composite_channel(layouts[1], user_pos, scn)
    sig = (split.p_signal / n) * abs(h_sig) ** 2
    jam = (split.p_an / layouts[1].n) * abs(h_an) ** 2
    return math.log2(1.0 + sig / (jam + noise))


def wm_effective_channel(layouts: list[PinchLayout], user_pos,
                         scn: Scenario) -> np.ndarray:
    """Per-waveguide channel vector scaled by 1/sqrt(N) so that a baseband
    weight vector with squared norm p delivers total radiated power p."""
    n = layouts[0].n
    return channel_vector(layouts, user_pos, scn) / math.sqrt(n)


def miso_rate(w: np.ndarray, v: np.ndarray, g: np.ndarray, noise: float) -> float:
    """Rate of a user with channel g under signal beam w and noise beam v."""
    w = np.asarray(w)
    v = np.asarray(v)
    g = np.asarray(g)
    if w.shape != g.shape or v.shape != g.shape:
        raise ValueError("beamformers and channel must share one dimension")
    sig = abs(np.vdot(g, w)) ** 2
    jam = abs(np.vdot(g, v)) ** 2
    return math.log2(1.0 + sig / (jam + noise))


def rate_wm(w: np.ndarray, v: np.ndarray, layouts: list[PinchLayout], user_pos,
            noise: float, scn: Scenario) -> float:
    """Rate under waveguide multiplexing with baseband beams w (signal) and
    v (artificial noise), both of length M."""
    g = wm_effective_channel(layouts, user_pos, scn)
    return miso_rate(w, v, g, noise)
