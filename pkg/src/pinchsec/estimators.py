"""Estimator-style wrappers so the optimizers compose like sklearn objects.

Hyperparameters live on ``__init__`` (``get_params``/``set_params``/``clone``
work as usual); ``fit(scenario)`` runs the optimization and stores results
in trailing-underscore attributes; ``score()`` returns the secrecy rate.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .baselines import (conventional_analog_baseline, fdb_baseline,
                        random_position_baseline)
from .geometry import PinchLayout
from .past import AlignmentTarget, FineTuneParams, past_optimize
from .pso import PsoHyper, pso_optimize
from .rates import rate_single, secrecy_rate
from .scenario import Scenario
from .wd import optimize_wd
from .wm import optimize_wm


def check_scenario(scenario, expected_waveguides: int | None = None) -> Scenario:
    if not isinstance(scenario, Scenario):
        raise TypeError(f"expected a Scenario, got {type(scenario).__name__}")
    scenario.validate()
    if (expected_waveguides is not None
            and scenario.num_waveguides != expected_waveguides):
        raise ValueError(
            f"this estimator needs {expected_waveguides} waveguide(s), "
            f"scenario has {scenario.num_waveguides}")
    return scenario


class BaseSecrecyEstimator(BaseEstimator):
    """Shared fit/score plumbing; subclasses implement ``_fit``."""

    _expected_waveguides: int | None = None

    def fit(self, scenario: Scenario, y=None):
        scenario = check_scenario(scenario, self._expected_waveguides)
        self._fit(scenario)
        self.scenario_ = scenario
        self.rate_bob_ = self.report_.rate_bob
        self.rate_eve_ = self.report_.rate_eve
        self.secrecy_rate_ = self.report_.secrecy_rate
        return self

    def _fit(self, scenario: Scenario) -> None:
        raise NotImplementedError

    def score(self, scenario=None, y=None) -> float:
        """Achieved secrecy rate (bit/s/Hz) of the fitted solution."""
        if not hasattr(self, "report_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet")
        return self.secrecy_rate_

    def _pso_hyper(self, dims: int, lo, hi) -> PsoHyper:
        return PsoHyper(dims=dims, bounds_lo=lo, bounds_hi=hi,
                        swarm_size=self.swarm_size, max_iters=self.max_iters,
                        inertia_max=self.inertia_max,
                        inertia_min=self.inertia_min, c1=self.c1, c2=self.c2)


class PastOptimizer(BaseSecrecyEstimator):
    """Successive antenna position tuning on one waveguide."""

    _expected_waveguides = None  # any; acts on one indexed waveguide

    def __init__(self, enhance_user="bob", suppress_user="eve",
                 waveguide_index=0, max_multiplier_search=50,
                 phase_tolerance=0.1):
        self.enhance_user = enhance_user
        self.suppress_user = suppress_user
        self.waveguide_index = waveguide_index
        self.max_multiplier_search = max_multiplier_search
        self.phase_tolerance = phase_tolerance

    def _fit(self, scenario: Scenario) -> None:
        result = past_optimize(
            AlignmentTarget(self.enhance_user, self.suppress_user,
                            self.waveguide_index),
            FineTuneParams(self.max_multiplier_search, self.phase_tolerance),
            scenario)
        self.layout_ = result.layout
        self.report_ = result.report
        self.n_fine_steps_ = result.n_fine_steps
        self.events_ = result.events


class SinglePsoOptimizer(BaseSecrecyEstimator):
    """Swarm search over the N antenna positions of a single waveguide."""

    _expected_waveguides = 1

    def __init__(self, swarm_size=50, max_iters=300, inertia_max=0.9,
                 inertia_min=0.1, c1=1.5, c2=1.5, penalty=100.0,
                 random_state=0):
        self.swarm_size = swarm_size
        self.max_iters = max_iters
        self.inertia_max = inertia_max
        self.inertia_min = inertia_min
        self.c1 = c1
        self.c2 = c2
        self.penalty = penalty
        self.random_state = random_state

    def _fit(self, scenario: Scenario) -> None:
        n = scenario.num_pas_per_waveguide
        half = scenario.region_side / 2.0
        amp = math.sqrt(scenario.path_gain)
        scale = scenario.max_power / n

        def fitness(x_batch: np.ndarray) -> np.ndarray:
            rates = []
            for user, noise in ((scenario.bob_pos, scenario.noise_bob),
                                (scenario.eve_pos, scenario.noise_eve)):
                dx = user[0] - x_batch
                d = np.sqrt(dx * dx + user[1] ** 2
                            + scenario.waveguide_height ** 2)
                phase = (2 * math.pi / scenario.wavelength * d
                         + 2 * math.pi / scenario.guide_wavelength
                         * (x_batch + half))
                h = np.sum(amp * np.exp(-1j * phase) / d, axis=-1)
                rates.append(np.log2(1 + scale * np.abs(h) ** 2 / noise))
            sr = np.maximum(rates[0] - rates[1], 0.0)
            violations = np.sum(np.diff(x_batch, axis=-1) < scenario.min_spacing,
                                axis=-1)
            return sr - self.penalty * violations

        hyper = self._pso_hyper(n, -half, half)
        best, best_fit, trace = pso_optimize(fitness, hyper, self.random_state,
                                             vectorized=True)
        layout = PinchLayout(0, np.sort(best))
        self.layout_ = layout
        self.trace_ = trace
        self.report_ = secrecy_rate(
            rate_single(scenario.max_power, layout, scenario.bob_pos,
                        scenario.noise_bob, scenario),
            rate_single(scenario.max_power, layout, scenario.eve_pos,
                        scenario.noise_eve, scenario))


class RandomPositionBaseline(BaseSecrecyEstimator):
    """Mean performance of unoptimized uniformly drawn layouts."""

    _expected_waveguides = 1

    def __init__(self, trials=500, random_state=0):
        self.trials = trials
        self.random_state = random_state

    def _fit(self, scenario: Scenario) -> None:
        self.report_ = random_position_baseline(scenario, self.trials,
                                                self.random_state)


class ConventionalAnalogBeamformer(BaseSecrecyEstimator):
    """Fixed half-wavelength array with swarm-tuned analog phases."""

    _expected_waveguides = 1

    def __init__(self, swarm_size=50, max_iters=300, inertia_max=0.9,
                 inertia_min=0.1, c1=1.5, c2=1.5, random_state=0):
        self.swarm_size = swarm_size
        self.max_iters = max_iters
        self.inertia_max = inertia_max
        self.inertia_min = inertia_min
        self.c1 = c1
        self.c2 = c2
        self.random_state = random_state

    def _fit(self, scenario: Scenario) -> None:
        hyper = self._pso_hyper(scenario.num_pas_per_waveguide, 0.0,
                                2.0 * math.pi)
        self.report_, self.phases_ = conventional_analog_baseline(
            scenario, self.random_state, hyper)


class WdOptimizer(BaseSecrecyEstimator):
    """Two-stage waveguide-division optimizer (positions, then powers)."""

    _expected_waveguides = 2

    def __init__(self, max_multiplier_search=50, phase_tolerance=0.1,
                 sca_tol=1e-3):
        self.max_multiplier_search = max_multiplier_search
        self.phase_tolerance = phase_tolerance
        self.sca_tol = sca_tol

    def _fit(self, scenario: Scenario) -> None:
        sol = optimize_wd(
            scenario,
            FineTuneParams(self.max_multiplier_search, self.phase_tolerance),
            sca_tol=self.sca_tol)
        self.layouts_ = (sol.layout_signal, sol.layout_an)
        self.split_ = sol.split
        self.sca_trace_ = sol.sca_trace
        self.report_ = sol.report


class WmOptimizer(BaseSecrecyEstimator):
    """Alternating swarm/SCA optimizer for waveguide multiplexing."""

    _expected_waveguides = 2

    def __init__(self, swarm_size=50, max_iters=300, inertia_max=0.9,
                 inertia_min=0.1, c1=1.5, c2=1.5, penalty=100.0,
                 outer_tol=1e-3, outer_max=20, sca_tol=1e-3, use_an=True,
                 random_state=0):
        self.swarm_size = swarm_size
        self.max_iters = max_iters
        self.inertia_max = inertia_max
        self.inertia_min = inertia_min
        self.c1 = c1
        self.c2 = c2
        self.penalty = penalty
        self.outer_tol = outer_tol
        self.outer_max = outer_max
        self.sca_tol = sca_tol
        self.use_an = use_an
        self.random_state = random_state

    def _fit(self, scenario: Scenario) -> None:
        n = scenario.num_pas_per_waveguide
        half = scenario.region_side / 2.0
        sol = optimize_wm(
            scenario, self._pso_hyper(2 * n, -half, half),
            rng_seed=self.random_state, penalty=self.penalty,
            outer_tol=self.outer_tol, outer_max=self.outer_max,
            sca_tol=self.sca_tol, use_an=self.use_an)
        self.layouts_ = sol.layouts
        self.w_ = sol.w
        self.v_ = sol.v
        self.outer_trace_ = sol.outer_trace
        self.rank_ratios_ = sol.rank_ratios
        self.feasible_ = sol.feasible
        self.report_ = sol.report


class FdbBeamformer(BaseSecrecyEstimator):
    """Fully-digital 2N-antenna benchmark, with or without a jamming beam."""

    _expected_waveguides = 2

    def __init__(self, with_an=True, sca_tol=1e-3):
        self.with_an = with_an
        self.sca_tol = sca_tol

    def _fit(self, scenario: Scenario) -> None:
        self.report_, (self.w_, self.v_) = fdb_baseline(
            scenario, self.with_an, sca_tol=self.sca_tol)
