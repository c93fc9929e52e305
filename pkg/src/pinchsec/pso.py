"""Bounded-box particle swarm optimizer with linearly decaying inertia.

Maximizes the fitness.  Velocities are unconstrained; positions are clamped
to the box after every move.  The cognitive/social random factors are drawn
per particle per step (scalar, shared across that particle's dimensions).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsoHyper:
    dims: int
    bounds_lo: np.ndarray
    bounds_hi: np.ndarray
    swarm_size: int = 50
    max_iters: int = 300
    inertia_max: float = 0.9
    inertia_min: float = 0.1
    c1: float = 1.5
    c2: float = 1.5

    def __post_init__(self):
        lo = np.broadcast_to(np.asarray(self.bounds_lo, float), (self.dims,)).copy()
        hi = np.broadcast_to(np.asarray(self.bounds_hi, float), (self.dims,)).copy()
        object.__setattr__(self, "bounds_lo", lo)
        object.__setattr__(self, "bounds_hi", hi)
        if self.dims < 1:
            raise ValueError("dims must be >= 1")
        if self.swarm_size < 1 or self.max_iters < 1:
            raise ValueError("swarm_size and max_iters must be >= 1")
        if not (self.inertia_max >= self.inertia_min > 0):
            raise ValueError("need inertia_max >= inertia_min > 0")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("learning factors must be positive")
        if np.any(lo >= hi):
            raise ValueError("bounds_lo must be < bounds_hi per dimension")


@dataclass
class SwarmState:
    positions: np.ndarray
    velocities: np.ndarray
    personal_best: np.ndarray
    personal_best_fitness: np.ndarray
    global_best: np.ndarray
    global_best_fitness: float
    iteration: int
    rng: np.random.Generator


def _as_batch_fitness(fitness, vectorized: bool):
    if vectorized:
        return lambda xmat: np.asarray(fitness(xmat), dtype=float)
    return lambda xmat: np.array([fitness(x) for x in xmat], dtype=float)


def _sanitize(values: np.ndarray) -> np.ndarray:
    bad = ~np.isfinite(values)
    if np.any(bad):
        logger.warning("non-finite fitness for %d particle(s); treated as -inf",
                       int(bad.sum()))
        values = np.where(bad, -np.inf, values)
    return values


def init_swarm(hyper: PsoHyper, rng_seed, fitness=None, vectorized: bool = False,
               warm_start=None) -> SwarmState:
    """Uniform positions in the box, velocities in +-(box width)/2.

    ``warm_start`` replaces particle 0 so a known-good point seeds the
    incumbent; personal bests start at the initial positions.
    """
    rng = np.random.default_rng(rng_seed)
    lo, hi = hyper.bounds_lo, hyper.bounds_hi
    pos = rng.uniform(lo, hi, size=(hyper.swarm_size, hyper.dims))
    vel = rng.uniform(-(hi - lo) / 2.0, (hi - lo) / 2.0,
                      size=(hyper.swarm_size, hyper.dims))
    if warm_start is not None:
        ws = np.asarray(warm_start, dtype=float).reshape(hyper.dims)
        pos[0] = np.clip(ws, lo, hi)
    if fitness is not None:
        fit = _sanitize(_as_batch_fitness(fitness, vectorized)(pos))
    else:
        fit = np.full(hyper.swarm_size, -np.inf)
    best_idx = int(np.argmax(fit))
    return SwarmState(
        positions=pos,
        velocities=vel,
        personal_best=pos.copy(),
        personal_best_fitness=fit,
        global_best=pos[best_idx].copy(),
        global_best_fitness=float(fit[best_idx]),
        iteration=0,
        rng=rng,
    )


def pso_step(state: SwarmState, fitness, hyper: PsoHyper,
             vectorized: bool = False) -> SwarmState:
    """One swarm update in place; returns the same state object."""
    if state.iteration >= hyper.max_iters:
        raise ValueError("swarm already ran for max_iters steps")
    alpha = hyper.inertia_max - ((hyper.inertia_max - hyper.inertia_min)
                                 * state.iteration / hyper.max_iters)
    i = hyper.swarm_size
    beta1 = state.rng.uniform(size=(i, 1))
    beta2 = state.rng.uniform(size=(i, 1))
    state.velocities = (alpha * state.velocities
                        + hyper.c1 * beta1 * (state.personal_best - state.positions)
                        + hyper.c2 * beta2 * (state.global_best - state.positions))
    state.positions = np.clip(state.positions + state.velocities,
                              hyper.bounds_lo, hyper.bounds_hi)
    fit = _sanitize(_as_batch_fitness(fitness, vectorized)(state.positions))
    improved = fit > state.personal_best_fitness
    state.personal_best[improved] = state.positions[improved]
    state.personal_best_fitness[improved] = fit[improved]
    best_idx = int(np.argmax(state.personal_best_fitness))
    if state.personal_best_fitness[best_idx] > state.global_best_fitness:
        state.global_best_fitness = float(state.personal_best_fitness[best_idx])
        state.global_best = state.personal_best[best_idx].copy()
    state.iteration += 1
    return state


def pso_optimize(fitness, hyper: PsoHyper, rng_seed, warm_start=None,
                 vectorized: bool = False):
    """Full swarm run.

    Returns ``(best_x, best_fitness, trace)`` where ``trace`` holds the
    incumbent fitness after each of the ``max_iters`` steps (non-decreasing).
    """
    state = init_swarm(hyper, rng_seed, fitness=fitness, vectorized=vectorized,
                       warm_start=warm_start)
    trace = np.empty(hyper.max_iters)
    for it in range(hyper.max_iters):
        pso_step(state, fitness, hyper, vectorized=vectorized)
        trace[it] = state.global_best_fitness
    return state.global_best.copy(), state.global_best_fitness, trace
