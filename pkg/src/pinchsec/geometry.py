"""Pinching-antenna layouts along a waveguide."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleLayoutError
from .scenario import Scenario


@dataclass(frozen=True)
class PinchLayout:
    """Ordered x-coordinates of the antennas on one waveguide.

    Optimizer intermediates (e.g. raw swarm particles) may violate ordering
    or spacing; use :meth:`is_valid` to test, construction never rejects.
    """

    waveguide_index: int
    xs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xs", np.asarray(self.xs, dtype=float).reshape(-1))

    @property
    def n(self) -> int:
        return self.xs.size

    def y_offset(self, scn: Scenario) -> float:
        return scn.waveguide_y_offsets[self.waveguide_index]

    def pa_positions(self, scn: Scenario) -> np.ndarray:
        """(N, 3) antenna coordinates [x_n, y_m, H]."""
        y = self.y_offset(scn)
        out = np.empty((self.n, 3))
        out[:, 0] = self.xs
        out[:, 1] = y
        out[:, 2] = scn.waveguide_height
        return out

    def feed_point(self, scn: Scenario) -> np.ndarray:
        """Feed sits at the -x end of the waveguide."""
        return np.array([-scn.region_side / 2.0, self.y_offset(scn),
                         scn.waveguide_height])

    def is_valid(self, scn: Scenario, tol: float = 1e-12) -> bool:
        half = scn.region_side / 2.0
        if self.n == 0:
            return False
        if self.xs.min() < -half - tol or self.xs.max() > half + tol:
            return False
        if self.n == 1:
            return True
        gaps = np.diff(self.xs)
        return bool(gaps.min() > 0 and gaps.min() >= scn.min_spacing - tol)

    def spacing_violations(self, scn: Scenario) -> int:
        """Number of adjacent pairs closer than the minimum spacing
        (raw order, no sorting)."""
        if self.n < 2:
            return 0
        return int(np.sum(np.diff(self.xs) < scn.min_spacing))


def project_to_feasible(xs: np.ndarray, min_spacing: float,
                        region_side: float) -> np.ndarray:
    """Minimal-disturbance repair of ordering, spacing, and box violations.

    No-op for already-feasible inputs.  Raises if N antennas cannot fit on
    the waveguide at all.
    """
    half = region_side / 2.0
    xs = np.sort(np.asarray(xs, dtype=float))
    n = xs.size
    if (n - 1) * min_spacing > region_side + 1e-12:
        raise InfeasibleLayoutError(
            f"{n} antennas at spacing {min_spacing:g} exceed waveguide length "
            f"{region_side:g}")
    xs = np.clip(xs, -half, half)
    for i in range(1, n):             # forward: push right to restore spacing
        if xs[i] < xs[i - 1] + min_spacing:
            xs[i] = xs[i - 1] + min_spacing
    if xs[-1] > half:                 # pull back inside the box
        xs[-1] = half
        for i in range(n - 2, -1, -1):
            if xs[i] > xs[i + 1] - min_spacing:
                xs[i] = xs[i + 1] - min_spacing
    return xs
