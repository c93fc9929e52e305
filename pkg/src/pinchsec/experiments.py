"""Monte-Carlo sweep orchestration with paired seeds and CSV emission.

Reproducibility contract: a sweep spec plus a base seed fully determines
every byte of the results CSV.  Each (sweep value, trial) cell derives one
64-bit sub-seed; all methods in that cell see the same drawn scenario, and
each method's internal randomness is re-derived from the cell seed and the
method tag.  Wall-clock timings go to a separate file so the results file
stays byte-stable.
"""

from __future__ import annotations

import concurrent.futures
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError
from .estimators import (ConventionalAnalogBeamformer, FdbBeamformer,
                         PastOptimizer, RandomPositionBaseline,
                         SinglePsoOptimizer, WdOptimizer, WmOptimizer)
from .scenario import (Scenario, dual_waveguide_offsets, scenario_from_mapping)

METHODS = ("past", "pso-single", "random", "conventional", "wd", "wm",
           "wm-no-an", "fdb-an", "fdb-no-an")
SWEEP_VARS = ("num_pas", "area_side", "waveguide_sep")

RESULTS_HEADER = ("method", "sweep_value", "trial", "seed", "feasible",
                  "sr", "rate_bob", "rate_eve")
TIMINGS_HEADER = ("method", "sweep_value", "trial", "runtime_ms")

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(base_seed: int, trial: int) -> int:
    """Trial sub-seed: splitmix64 mix of the base seed and the trial index.

    The sweep value deliberately does not enter the mix: one trial keeps the
    same user draw across all sweep values (and methods), so trend curves
    are paired comparisons rather than independent samples."""
    return _splitmix64((int(base_seed) & _MASK64)
                       ^ _splitmix64((trial + 1) & _MASK64))


@dataclass(frozen=True)
class SweepSpec:
    sweep_var: str
    values: tuple[float, ...]
    methods: tuple[str, ...]
    trials: int
    seed: int
    template: Scenario

    def __post_init__(self):
        if self.sweep_var not in SWEEP_VARS:
            raise ConfigError(f"sweep_var must be one of {SWEEP_VARS}")
        vals = tuple(float(v) for v in self.values)
        if not vals or list(vals) != sorted(vals):
            raise ConfigError("values must be non-empty and ascending")
        object.__setattr__(self, "values", vals)
        unknown = set(self.methods) - set(METHODS)
        if unknown or not self.methods:
            raise ConfigError(f"unknown methods {sorted(unknown)}; "
                              f"choose from {METHODS}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")


@dataclass(frozen=True)
class ResultRow:
    method: str
    sweep_value: float
    trial: int
    seed: int
    feasible: bool
    sr: float | None
    rate_bob: float | None
    rate_eve: float | None
    runtime_ms: float


def load_sweep_spec(path) -> SweepSpec:
    data = yaml.safe_load(Path(path).read_text())
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a key/value mapping")
    try:
        scn_map = dict(data["scenario"])
        # user positions are redrawn per trial; allow omitting them
        scn_map.setdefault("bob_pos_m", [0.0, 0.0])
        scn_map.setdefault("eve_pos_m", [0.0, 0.0])
        return SweepSpec(
            sweep_var=str(data["sweep_var"]),
            values=tuple(data["values"]),
            methods=tuple(data["methods"]),
            trials=int(data.get("trials", 100)),
            seed=int(data.get("seed", 0)),
            template=scenario_from_mapping(scn_map),
        )
    except KeyError as exc:
        raise ConfigError(f"missing sweep key {exc.args[0]!r}") from exc


def apply_sweep_value(template: Scenario, sweep_var: str,
                      value: float) -> Scenario:
    origin = np.zeros(3)
    if sweep_var == "num_pas":
        if value != int(value):
            raise ConfigError("num_pas values must be integers")
        return replace(template, num_pas_per_waveguide=int(value),
                       bob_pos=origin, eve_pos=origin)
    if sweep_var == "area_side":
        return replace(template, region_side=float(value), bob_pos=origin,
                       eve_pos=origin)
    if sweep_var == "waveguide_sep":
        if template.num_waveguides != 2:
            raise ConfigError("waveguide_sep sweeps need a 2-waveguide template")
        return replace(template,
                       waveguide_y_offsets=dual_waveguide_offsets(float(value)),
                       bob_pos=origin, eve_pos=origin)
    raise ConfigError(f"unknown sweep_var {sweep_var!r}")


def draw_scenario(template: Scenario, rng: np.random.Generator) -> Scenario:
    """Bob then Eve uniform over the serving square; exact collisions are
    redrawn."""
    half = template.region_side / 2.0
    bob = np.array([*rng.uniform(-half, half, 2), 0.0])
    while True:
        eve = np.array([*rng.uniform(-half, half, 2), 0.0])
        if not np.array_equal(bob, eve):
            break
    return template.with_users(bob, eve)


def _build_estimator(method: str, seed: int):
    if method == "past":
        return PastOptimizer()
    if method == "pso-single":
        return SinglePsoOptimizer(random_state=seed)
    if method == "random":
        return RandomPositionBaseline(trials=1, random_state=seed)
    if method == "conventional":
        return ConventionalAnalogBeamformer(random_state=seed)
    if method == "wd":
        return WdOptimizer()
    if method == "wm":
        return WmOptimizer(random_state=seed)
    if method == "wm-no-an":
        return WmOptimizer(use_an=False, random_state=seed)
    if method == "fdb-an":
        return FdbBeamformer(with_an=True)
    if method == "fdb-no-an":
        return FdbBeamformer(with_an=False)
    raise ValueError(f"unknown method {method!r}")


def _execute_cell(args) -> ResultRow:
    method, value, trial, cell_seed, base = args
    rng = np.random.default_rng(cell_seed)
    scn = draw_scenario(base, rng)
    start = time.perf_counter()
    try:
        # methods share the cell seed (common random numbers): paired
        # stochastic methods see identical internal draws where code paths
        # coincide, e.g. the jamming-free phase of the multiplexing optimizer
        est = _build_estimator(method, cell_seed)
        est.fit(scn)
        feasible = bool(getattr(est, "feasible_", True))
        row = ResultRow(method, value, trial, cell_seed, feasible,
                        est.secrecy_rate_, est.rate_bob_, est.rate_eve_,
                        (time.perf_counter() - start) * 1e3)
    except Exception:
        row = ResultRow(method, value, trial, cell_seed, False, None, None,
                        None, (time.perf_counter() - start) * 1e3)
    return row


def run_sweep(spec: SweepSpec, out_dir=None, jobs: int = 1) -> list[ResultRow]:
    """Run every (value, method, trial) cell; optionally write CSV files.

    Row order in the output is values (ascending), then methods in spec
    order, then trials, regardless of worker scheduling."""
    tasks = []
    for value in spec.values:
        base = apply_sweep_value(spec.template, spec.sweep_var, value)
        for method in spec.methods:
            for trial in range(spec.trials):
                cell_seed = derive_seed(spec.seed, trial)
                tasks.append((method, value, trial, cell_seed, base))
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_execute_cell, tasks, chunksize=4))
    else:
        rows = [_execute_cell(t) for t in tasks]
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_results_csv(rows, out / "results.csv")
        write_timings_csv(rows, out / "timings.csv")
    return rows


# -- CSV I/O ------------------------------------------------------------------
# UTF-8, comma separators, "\n" endings, floats at 9 significant digits.

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".9g")
    return str(x)


def write_results_csv(rows: list[ResultRow], path) -> None:
    lines = [",".join(RESULTS_HEADER)]
    for r in rows:
        lines.append(",".join(_fmt(v) for v in (
            r.method, r.sweep_value, r.trial, r.seed, r.feasible, r.sr,
            r.rate_bob, r.rate_eve)))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def write_timings_csv(rows: list[ResultRow], path) -> None:
    lines = [",".join(TIMINGS_HEADER)]
    for r in rows:
        lines.append(",".join(_fmt(v) for v in (
            r.method, r.sweep_value, r.trial, r.runtime_ms)))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def read_results_csv(path) -> list[ResultRow]:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln]
    if not lines or lines[0] != ",".join(RESULTS_HEADER):
        raise ConfigError(f"{path}: unexpected results header")
    rows = []
    for ln in lines[1:]:
        f = ln.split(",")
        rows.append(ResultRow(
            method=f[0], sweep_value=float(f[1]), trial=int(f[2]),
            seed=int(f[3]), feasible=(f[4] == "true"),
            sr=float(f[5]) if f[5] else None,
            rate_bob=float(f[6]) if f[6] else None,
            rate_eve=float(f[7]) if f[7] else None,
            runtime_ms=0.0))
    return rows


# -- aggregation --------------------------------------------------------------

SUMMARY_HEADER = ("method", "sweep_value", "n_rows", "n_feasible", "median_sr",
                  "mean_sr", "p10_sr", "p90_sr")


def summarize(rows: list[ResultRow]) -> list[dict]:
    """Per-(method, value) aggregates over feasible rows (linear-interp
    percentiles); infeasible rows are counted but excluded."""
    if not rows:
        raise ValueError("no rows to summarize")
    groups: dict[tuple[str, float], list[ResultRow]] = {}
    for r in rows:
        groups.setdefault((r.method, r.sweep_value), []).append(r)
    out = []
    for (method, value) in sorted(groups, key=lambda k: (k[1], k[0])):
        cell = groups[(method, value)]
        srs = np.array([r.sr for r in cell if r.feasible and r.sr is not None])
        agg = {"method": method, "sweep_value": value, "n_rows": len(cell),
               "n_feasible": int(srs.size)}
        if srs.size:
            agg.update(median_sr=float(np.median(srs)),
                       mean_sr=float(srs.mean()),
                       p10_sr=float(np.percentile(srs, 10)),
                       p90_sr=float(np.percentile(srs, 90)))
        else:
            agg.update(median_sr=None, mean_sr=None, p10_sr=None, p90_sr=None)
        out.append(agg)
    return out


def write_summary_csv(summary: list[dict], path) -> None:
    lines = [",".join(SUMMARY_HEADER)]
    for row in summary:
        lines.append(",".join(_fmt(row[k]) for k in SUMMARY_HEADER))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
