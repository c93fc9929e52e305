"""Concave-maximization kernels for the secrecy power and beamforming steps.

Both kernels follow the same surrogate scheme: the secrecy objective is a
difference of logs; the two terms entering with a negative sign are convex
in the variables, so their first-order expansion at the incumbent gives a
concave global lower bound that touches the true objective there.  Each
iteration maximizes that bound exactly over the feasible set, which makes
the true objective non-decreasing across iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rates import PowerSplit

LN2 = math.log(2.0)
MAX_DIM = 32


# ---------------------------------------------------------------------------
# Hermitian utilities
# ---------------------------------------------------------------------------

def check_hermitian(mat: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix")
    if mat.shape[0] > MAX_DIM:
        raise ValueError(f"matrix dimension {mat.shape[0]} exceeds {MAX_DIM}")
    scale = 1.0 + np.linalg.norm(mat)
    if np.linalg.norm(mat - mat.conj().T) > tol * scale * 10:
        raise ValueError("matrix is not Hermitian within tolerance")
    return mat


def hermitian_eig(mat: np.ndarray):
    """Eigenvalues (descending) and matching unitary eigenvector columns."""
    mat = check_hermitian(mat)
    vals, vecs = np.linalg.eigh(mat)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def project_psd(mat: np.ndarray) -> np.ndarray:
    """Nearest positive-semidefinite matrix in Frobenius norm."""
    vals, vecs = hermitian_eig(mat)
    clipped = np.clip(vals, 0.0, None)
    out = (vecs * clipped) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


def lift(vec: np.ndarray) -> np.ndarray:
    """Rank-one matrix w w^H of a beamforming vector."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(vec, vec.conj())


def extract_rank_one(mat: np.ndarray):
    """Leading eigenpair as a beamformer plus the rank-one quality ratio.

    Returns ``(w, rank_ratio)`` with ``w = sqrt(l1) q1`` and
    ``rank_ratio = l2/l1`` (0 for a zero or 1x1 matrix).
    """
    vals, vecs = hermitian_eig(mat)
    lead = float(vals[0])
    if lead <= 0.0:
        return np.zeros(mat.shape[0], dtype=complex), 0.0
    w = math.sqrt(lead) * vecs[:, 0]
    ratio = float(max(vals[1], 0.0) / lead) if vals.size > 1 else 0.0
    return w, ratio


def _water_level(vals: np.ndarray, budget: float) -> float:
    """Smallest tau >= 0 with sum(max(vals - tau, 0)) <= budget (exact)."""
    if np.clip(vals, 0.0, None).sum() <= budget:
        return 0.0
    desc = np.sort(vals)[::-1]
    taus = (np.cumsum(desc) - budget) / np.arange(1, desc.size + 1)
    k = int(np.nonzero(desc > taus)[0].max())
    return float(max(taus[k], 0.0))


def _project_psd_budget(mats: list[np.ndarray], budget: float) -> list[np.ndarray]:
    """Joint Frobenius projection onto {each PSD, sum of traces <= budget}.

    In the eigenbases the projection clips every eigenvalue at the common
    water level that meets the budget.
    """
    stack = np.stack([0.5 * (m + m.conj().T) for m in mats])
    vals, vecs = np.linalg.eigh(stack)
    tau = _water_level(vals.ravel(), budget)
    clipped = np.clip(vals - tau, 0.0, None)
    out = (vecs * clipped[:, None, :]) @ np.conj(np.swapaxes(vecs, -1, -2))
    return [0.5 * (m + m.conj().T) for m in out]


# ---------------------------------------------------------------------------
# SCA bookkeeping
# ---------------------------------------------------------------------------

@dataclass
class ScaTrace:
    objective_per_iter: list[float] = field(default_factory=list)
    converged: bool = False

    @property
    def iters(self) -> int:
        return len(self.objective_per_iter)

    @property
    def final(self) -> float:
        return self.objective_per_iter[-1]


def _golden_max(f, lo: float, hi: float, xatol: float):
    """Golden-section maximum of a unimodal f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xatol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


# ---------------------------------------------------------------------------
# Waveguide-division power allocation
# ---------------------------------------------------------------------------

def wd_true_objective(ps, pa, a_b, b_b, a_e, b_e, noise_bob, noise_eve):
    """Unclamped rate difference R_b - R_e; vectorizes over ps/pa arrays."""
    rb = np.log2(1.0 + ps * a_b / (pa * b_b + noise_bob))
    re = np.log2(1.0 + ps * a_e / (pa * b_e + noise_eve))
    return rb - re


class WdSurrogate:
    """Concave lower bound of the WD rate difference at one expansion point."""

    def __init__(self, a_b, b_b, a_e, b_e, noise_bob, noise_eve, ps0, pa0):
        self.a_b, self.b_b, self.a_e, self.b_e = a_b, b_b, a_e, b_e
        self.noise_bob, self.noise_eve = noise_bob, noise_eve
        self.ps0, self.pa0 = ps0, pa0
        self.c_bob = pa0 * b_b + noise_bob            # Bob's jam-plus-noise
        self.c_eve = ps0 * a_e + pa0 * b_e + noise_eve  # Eve's total receive

    def value(self, ps, pa):
        s = (np.log2(ps * self.a_b + pa * self.b_b + self.noise_bob)
             + np.log2(pa * self.b_e + self.noise_eve)
             - math.log2(self.c_bob)
             - self.b_b * (pa - self.pa0) / (self.c_bob * LN2)
             - math.log2(self.c_eve)
             - (self.a_e * (ps - self.ps0) + self.b_e * (pa - self.pa0))
             / (self.c_eve * LN2))
        return s

    def grad(self, ps, pa):
        total_b = ps * self.a_b + pa * self.b_b + self.noise_bob
        jam_e = pa * self.b_e + self.noise_eve
        d_ps = self.a_b / (total_b * LN2) - self.a_e / (self.c_eve * LN2)
        d_pa = (self.b_b / (total_b * LN2) + self.b_e / (jam_e * LN2)
                - self.b_b / (self.c_bob * LN2) - self.b_e / (self.c_eve * LN2))
        return np.array([d_ps, d_pa])

    def argmax_pa(self, ps: float, hi: float) -> float:
        """Exact maximizer over pa in [0, hi] at fixed ps (concave 1-D)."""
        if hi <= 0.0:
            return 0.0
        base = ps * self.a_b + self.noise_bob
        q = (self.b_b / self.c_bob + self.b_e / self.c_eve)
        cands = [0.0, hi]
        # stationarity: b_b/(base + pa*b_b) + b_e/(noise_e + pa*b_e) = q
        alpha = q * self.b_b * self.b_e
        beta = q * (base * self.b_e + self.noise_eve * self.b_b) \
            - 2.0 * self.b_b * self.b_e
        gamma = q * base * self.noise_eve - self.b_b * self.noise_eve \
            - self.b_e * base
        if abs(alpha) > 0.0:
            disc = beta * beta - 4.0 * alpha * gamma
            if disc >= 0.0:
                r = math.sqrt(disc)
                cands += [(-beta - r) / (2 * alpha), (-beta + r) / (2 * alpha)]
        elif abs(beta) > 0.0:
            cands.append(-gamma / beta)
        best_pa, best_val = 0.0, -math.inf
        for pa in cands:
            if 0.0 <= pa <= hi:
                val = self.value(ps, pa)
                if val > best_val:
                    best_pa, best_val = pa, val
        return best_pa


def _wd_sca_run(gains, noises, p_max, start, tol, max_iters, xatol):
    a_b, b_b, a_e, b_e = gains
    ps, pa = start
    obj = float(wd_true_objective(ps, pa, *gains, *noises))
    if not math.isfinite(obj):
        raise RuntimeError("objective is not finite at the starting point")
    trace = [obj]
    converged = False
    for _ in range(max_iters):
        surr = WdSurrogate(*gains, *noises, ps, pa)

        def outer(ps_):
            return surr.value(ps_, surr.argmax_pa(ps_, p_max - ps_))

        ps_new, _ = _golden_max(outer, 0.0, p_max, xatol)
        pa_new = surr.argmax_pa(ps_new, p_max - ps_new)
        obj_new = float(wd_true_objective(ps_new, pa_new, *gains, *noises))
        gain = obj_new - obj
        if gain < 0.0:
            converged = True  # at a fixed point up to solver tolerance
            break
        ps, pa, obj = ps_new, pa_new, obj_new
        trace.append(obj)
        if gain < tol:
            converged = True
            break
    return PowerSplit(ps, pa), ScaTrace(trace, converged)


def wd_power_sca(h_b1: complex, h_b2: complex, h_e1: complex, h_e2: complex,
                 p_max: float, noise_bob: float, noise_eve: float,
                 tol: float = 1e-3, init: PowerSplit | None = None,
                 max_iters: int = 200):
    """Secrecy-optimal power split between signal and noise waveguides.

    Channel scalars are the effective (per-antenna-normalized) coefficients
    of waveguide 1 (signal) and 2 (noise) at Bob and Eve.  Runs the SCA
    iteration from the caller's starting point and from a coarse presolve on
    the full-power line (the objective grows or falls monotonically in the
    signal power, so the optimum spends the whole budget or nothing); the
    better fixed point is returned.
    """
    if init is None:
        init = PowerSplit(p_max / 2.0, p_max / 2.0)
    if init.total > p_max * (1.0 + 1e-9):
        raise ValueError("starting split exceeds the power budget")
    gains = (abs(h_b1) ** 2, abs(h_b2) ** 2, abs(h_e1) ** 2, abs(h_e2) ** 2)
    if not all(math.isfinite(g) for g in gains):
        raise ValueError("channel gains must be finite")
    noises = (noise_bob, noise_eve)
    xatol = 1e-10 * p_max

    pa_line = np.linspace(0.0, p_max, 129)
    f_line = wd_true_objective(p_max - pa_line, pa_line, *gains, *noises)
    presolve = (float(p_max - pa_line[np.argmax(f_line)]),
                float(pa_line[np.argmax(f_line)]))

    best = None
    for start in ((init.p_signal, init.p_an), presolve):
        split, trace = _wd_sca_run(gains, noises, p_max, start, tol,
                                   max_iters, xatol)
        if best is None or trace.final > best[1].final:
            best = (split, trace)
    return best


# ---------------------------------------------------------------------------
# Waveguide-multiplexing beamforming (SCA over the matrix lift)
# ---------------------------------------------------------------------------

def _qf(h: np.ndarray, mat: np.ndarray) -> float:
    """Real quadratic form h^H M h."""
    return float(np.vdot(h, mat @ h).real)


def wm_true_objective(w_mat, v_mat, h_b, h_e, noise_bob, noise_eve) -> float:
    """Unclamped R_b - R_e for PSD signal/noise covariance matrices."""
    qb_w, qb_v = _qf(h_b, w_mat), _qf(h_b, v_mat)
    qe_w, qe_v = _qf(h_e, w_mat), _qf(h_e, v_mat)
    rb = math.log2(1.0 + max(qb_w, 0.0) / (max(qb_v, 0.0) + noise_bob))
    re = math.log2(1.0 + max(qe_w, 0.0) / (max(qe_v, 0.0) + noise_eve))
    return rb - re


class WmSurrogate:
    """Concave lower bound of the WM rate difference at one expansion point."""

    def __init__(self, h_b, h_e, noise_bob, noise_eve, w0, v0):
        self.h_b = np.asarray(h_b, dtype=complex).reshape(-1)
        self.h_e = np.asarray(h_e, dtype=complex).reshape(-1)
        self.noise_bob, self.noise_eve = noise_bob, noise_eve
        self.outer_b = np.outer(self.h_b, self.h_b.conj())
        self.outer_e = np.outer(self.h_e, self.h_e.conj())
        self.c_bob = _qf(self.h_b, v0) + noise_bob
        self.c_eve = _qf(self.h_e, w0) + _qf(self.h_e, v0) + noise_eve
        self._const = (-math.log2(self.c_bob) - math.log2(self.c_eve)
                       + (_qf(self.h_b, v0) / (self.c_bob * LN2))
                       + ((_qf(self.h_e, w0) + _qf(self.h_e, v0))
                          / (self.c_eve * LN2)))

    def value(self, w_mat, v_mat) -> float:
        qb_w, qb_v = _qf(self.h_b, w_mat), _qf(self.h_b, v_mat)
        qe_w, qe_v = _qf(self.h_e, w_mat), _qf(self.h_e, v_mat)
        return (math.log2(qb_w + qb_v + self.noise_bob)
                + math.log2(qe_v + self.noise_eve)
                - qb_v / (self.c_bob * LN2)
                - (qe_w + qe_v) / (self.c_eve * LN2)
                + self._const)

    def grad(self, w_mat, v_mat):
        total_b = _qf(self.h_b, w_mat) + _qf(self.h_b, v_mat) + self.noise_bob
        jam_e = _qf(self.h_e, v_mat) + self.noise_eve
        g_w = self.outer_b / (total_b * LN2) - self.outer_e / (self.c_eve * LN2)
        g_v = (self.outer_b / (total_b * LN2) + self.outer_e / (jam_e * LN2)
               - self.outer_b / (self.c_bob * LN2)
               - self.outer_e / (self.c_eve * LN2))
        return g_w, g_v


def _inner_ascent(surr: WmSurrogate, w_mat, v_mat, p_max, optimize_v,
                  max_steps=300):
    """Projected gradient ascent of the surrogate over the PSD trace-budget
    set, with backtracking; only improving steps are taken."""
    val = surr.value(w_mat, v_mat)
    step = None
    for _ in range(max_steps):
        g_w, g_v = surr.grad(w_mat, v_mat)
        if step is None:
            gnorm = math.sqrt(np.linalg.norm(g_w) ** 2
                              + (np.linalg.norm(g_v) ** 2 if optimize_v else 0.0))
            step = 0.25 * p_max / (gnorm + 1e-300)
        accepted = False
        for _ in range(60):
            if optimize_v:
                w_new, v_new = _project_psd_budget(
                    [w_mat + step * g_w, v_mat + step * g_v], p_max)
            else:
                budget = max(p_max - float(np.trace(v_mat).real), 0.0)
                w_new = _project_psd_budget([w_mat + step * g_w], budget)[0]
                v_new = v_mat
            move = (np.linalg.norm(w_new - w_mat) ** 2
                    + np.linalg.norm(v_new - v_mat) ** 2)
            if move == 0.0:
                return w_mat, v_mat, val
            val_new = surr.value(w_new, v_new)
            if val_new >= val + 1e-4 * move / step:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        gain = val_new - val
        w_mat, v_mat, val = w_new, v_new, val_new
        step *= 1.5
        if gain < 1e-12 * (1.0 + abs(val)):
            break
    return w_mat, v_mat, val


def default_wm_init(h_b: np.ndarray, p_max: float, use_an: bool = True):
    """Matched-filter beam toward Bob plus, if enabled, an orthogonal noise
    beam; the budget is split in equal halves."""
    h_b = np.asarray(h_b, dtype=complex).reshape(-1)
    m = h_b.size
    norm = np.linalg.norm(h_b)
    if norm > 0:
        w_dir = h_b / norm
    else:
        w_dir = np.eye(m, dtype=complex)[:, 0]
    if not use_an:
        return math.sqrt(p_max) * w_dir, np.zeros(m, dtype=complex)
    resid = np.eye(m, dtype=complex) - np.outer(w_dir, w_dir.conj())
    col = int(np.argmax(np.linalg.norm(resid, axis=0)))
    v_dir = resid[:, col]
    v_norm = np.linalg.norm(v_dir)
    if v_norm > 1e-12:
        v_dir = v_dir / v_norm
        return (math.sqrt(p_max / 2.0) * w_dir,
                math.sqrt(p_max / 2.0) * v_dir)
    return math.sqrt(p_max) * w_dir, np.zeros(m, dtype=complex)  # m == 1


def wm_beamform_sca(h_b: np.ndarray, h_e: np.ndarray, p_max: float,
                    noise_bob: float, noise_eve: float, tol: float = 1e-3,
                    init: tuple[np.ndarray, np.ndarray] | None = None,
                    optimize_v: bool = True, max_iters: int = 100):
    """SCA over the relaxed covariance pair (W, V).

    The rank-one constraints are dropped; callers recover beamformers with
    :func:`extract_rank_one`.  Returns ``(W, V, trace)`` with the trace of
    the true objective non-decreasing.
    """
    h_b = np.asarray(h_b, dtype=complex).reshape(-1)
    h_e = np.asarray(h_e, dtype=complex).reshape(-1)
    if h_b.shape != h_e.shape:
        raise ValueError("channel vectors must share one dimension")
    m = h_b.size
    if init is None:
        w_vec, v_vec = default_wm_init(h_b, p_max, use_an=optimize_v)
        w_mat, v_mat = lift(w_vec), lift(v_vec)
    else:
        w_mat = 0.5 * (np.asarray(init[0], complex)
                       + np.asarray(init[0], complex).conj().T)
        v_mat = 0.5 * (np.asarray(init[1], complex)
                       + np.asarray(init[1], complex).conj().T)
    total = float(np.trace(w_mat).real + np.trace(v_mat).real)
    if total > p_max * (1.0 + 1e-9):
        raise ValueError("starting covariances exceed the power budget")

    obj = wm_true_objective(w_mat, v_mat, h_b, h_e, noise_bob, noise_eve)
    if not math.isfinite(obj):
        raise RuntimeError("objective is not finite at the starting point")
    trace = [obj]
    converged = False
    for _ in range(max_iters):
        surr = WmSurrogate(h_b, h_e, noise_bob, noise_eve, w_mat, v_mat)
        w_new, v_new, _ = _inner_ascent(surr, w_mat, v_mat, p_max, optimize_v)
        obj_new = wm_true_objective(w_new, v_new, h_b, h_e, noise_bob, noise_eve)
        gain = obj_new - obj
        if gain < 0.0:
            converged = True
            break
        w_mat, v_mat, obj = w_new, v_new, obj_new
        trace.append(obj)
        if gain < tol:
            converged = True
            break
    return w_mat, v_mat, ScaTrace(trace, converged)
