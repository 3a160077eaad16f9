"""Seeded, optionally parallel Monte Carlo harness.

Two experiment kinds: ``bias_mse`` measures bias and mean squared error
of the order-``s`` estimator against the analytic truth, ``size_power``
measures rejection rates of the exponentiality test.  Every replication
draws its generator from a substream keyed by (master seed, cell index,
replication index), so results are bit-identical for any worker count
and scheduling order.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import cregf_closed, cregf_numeric
from .distributions import parse_model
from .estimation import ustat_weights
from .exceptions import DivergentIntegralError, NoClosedFormError
from .exptest import normal_sf, null_variance

__all__ = [
    "SimSpec",
    "SimRow",
    "run_bias_mse",
    "run_size_power",
    "null_variance_check",
    "NullVarianceResult",
    "load_sim_config",
    "rows_to_csv",
    "write_csv",
    "CSV_COLUMNS",
]

BIAS_MSE = "bias_mse"
SIZE_POWER = "size_power"

CSV_COLUMNS = ("model", "n", "s", "metric", "alpha", "value", "mc_se")


@dataclass(frozen=True)
class SimSpec:
    """One Monte Carlo experiment over a (model, n, s) grid."""

    kind: str
    models: tuple[str, ...]
    n_list: tuple[int, ...]
    s_list: tuple[int, ...]
    alpha_list: tuple[float, ...] = (0.01, 0.05)
    reps: int = 10_000
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.kind not in (BIAS_MSE, SIZE_POWER):
            raise ValueError(f"kind must be {BIAS_MSE!r} or {SIZE_POWER!r}")
        object.__setattr__(self, "models", tuple(str(m) for m in self.models))
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "s_list", tuple(int(s) for s in self.s_list))
        object.__setattr__(self, "alpha_list", tuple(float(a) for a in self.alpha_list))
        if not self.models or not self.n_list or not self.s_list:
            raise ValueError("models, n and s lists must be non-empty")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master seed must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        for model in self.models:
            parse_model(model)
        margin = 1 if self.kind == SIZE_POWER else 0
        smallest = min(self.n_list)
        needed = max(self.s_list) + margin
        if smallest < needed:
            raise ValueError(
                f"{self.kind} needs every n >= {needed}, got n={smallest}"
            )
        if self.kind == SIZE_POWER:
            for a in self.alpha_list:
                if not 0.0 < a < 1.0:
                    raise ValueError(f"alpha must lie in (0, 1), got {a}")

    def cells(self):
        """The (cell_index, model, n, s) grid in deterministic order."""
        idx = 0
        for model in self.models:
            for n in self.n_list:
                for s in self.s_list:
                    yield idx, model, n, s
                    idx += 1


@dataclass(frozen=True)
class SimRow:
    """One output record; mirrors the CSV schema exactly."""

    model: str
    n: int
    s: int
    metric: str
    alpha: float | None
    value: float
    mc_se: float


def _rep_rng(master_seed, cell_index, rep):
    seq = np.random.SeedSequence((int(master_seed), int(cell_index), int(rep)))
    return np.random.default_rng(seq)


def _simulate_block(model_spec, n, s, cell_index, master_seed, rep_start, rep_stop, mode):
    """Outcomes for replications [rep_start, rep_stop) of one grid cell.

    mode "estimate": the order-s estimate per replication.
    mode "departure": sqrt(n) * (scale-free departure) per replication.
    """
    model = parse_model(model_spec)
    n = int(n)
    s = int(s)
    w_s = ustat_weights(n, s)
    w_s1 = ustat_weights(n, s + 1) if mode == "departure" else None
    sqrt_n = math.sqrt(n)
    out = np.empty(rep_stop - rep_start)
    for k, rep in enumerate(range(rep_start, rep_stop)):
        rng = _rep_rng(master_seed, cell_index, rep)
        x = np.sort(model.draw(n, rng))
        if mode == "estimate":
            out[k] = w_s @ x
        else:
            c_s = w_s @ x
            c_s1 = w_s1 @ x
            departure = (s + 1) * c_s1 - s * c_s
            out[k] = sqrt_n * departure / x.mean()
    return out


def _cell_outcomes(spec: SimSpec, mode, progress=None):
    """Deterministic per-cell outcome arrays, parallel over rep blocks."""
    cells = list(spec.cells())
    results = {idx: np.empty(spec.reps) for idx, *_ in cells}
    blocks = []
    n_blocks = max(1, min(spec.workers * 4, spec.reps)) if spec.workers > 1 else 1
    for idx, model, n, s in cells:
        bounds = np.linspace(0, spec.reps, n_blocks + 1, dtype=int)
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            if hi > lo:
                blocks.append((model, n, s, idx, spec.master_seed, int(lo), int(hi), mode))
    if spec.workers == 1:
        done_cells = 0
        last_cell = None
        for args in blocks:
            results[args[3]][args[5] : args[6]] = _simulate_block(*args)
            if progress is not None and args[3] != last_cell:
                last_cell = args[3]
                done_cells += 1
                progress(done_cells, len(cells))
    else:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            futures = [(args, pool.submit(_simulate_block, *args)) for args in blocks]
            for i, (args, fut) in enumerate(futures):
                results[args[3]][args[5] : args[6]] = fut.result()
                if progress is not None:
                    progress(i + 1, len(blocks))
    return cells, results


def _truth(model_spec, s) -> float:
    model = parse_model(model_spec)
    try:
        return cregf_closed(model, s).value
    except NoClosedFormError:
        return cregf_numeric(model, s).value


def run_bias_mse(spec: SimSpec, progress=None) -> list[SimRow]:
    """Bias (signed and absolute) and MSE of the order-s estimate per cell.

    Truth comes from the closed form when the family has one, otherwise
    from certified quadrature; a divergent truth raises
    :class:`DivergentIntegralError`.
    """
    if spec.kind != BIAS_MSE:
        raise ValueError(f"spec kind is {spec.kind!r}, expected {BIAS_MSE!r}")
    truths = {
        (model, s): _truth(model, s)
        for model in spec.models
        for s in spec.s_list
    }
    cells, results = _cell_outcomes(spec, "estimate", progress=progress)
    rows = []
    for idx, model, n, s in cells:
        values = results[idx]
        truth = truths[(model, s)]
        errors = values - truth
        bias = float(errors.mean())
        se_mean = float(errors.std(ddof=1)) / math.sqrt(spec.reps) if spec.reps > 1 else 0.0
        sq = errors**2
        mse = float(sq.mean())
        se_mse = float(sq.std(ddof=1)) / math.sqrt(spec.reps) if spec.reps > 1 else 0.0
        rows.append(SimRow(model, n, s, "bias", None, bias, se_mean))
        rows.append(SimRow(model, n, s, "abs_bias", None, abs(bias), se_mean))
        rows.append(SimRow(model, n, s, "mse", None, mse, se_mse))
    return rows


def run_size_power(spec: SimSpec, progress=None) -> list[SimRow]:
    """Empirical rejection rate of the two-sided test per (cell, alpha)."""
    if spec.kind != SIZE_POWER:
        raise ValueError(f"spec kind is {spec.kind!r}, expected {SIZE_POWER!r}")
    cells, results = _cell_outcomes(spec, "departure", progress=progress)
    rows = []
    for idx, model, n, s in cells:
        scaled = results[idx]
        factor = math.sqrt((4.0 * s * s - 1.0) / s)
        # same p-value route as run_test: two-sided normal tail of the statistic
        p_values = np.array([2.0 * normal_sf(factor * abs(v)) for v in scaled])
        for alpha in spec.alpha_list:
            rate = float(np.mean(p_values < alpha))
            mc_se = math.sqrt(max(rate * (1.0 - rate), 0.0) / spec.reps)
            rows.append(SimRow(model, n, s, "rejection_rate", alpha, rate, mc_se))
    return rows


@dataclass(frozen=True)
class NullVarianceResult:
    s: int
    n: int
    reps: int
    empirical: float
    target: float


def null_variance_check(s, n, reps, seed) -> NullVarianceResult:
    """Empirical Var(sqrt(n) * scaled departure) under a unit exponential,
    next to its analytic target s/(4s^2-1)."""
    spec = SimSpec(
        kind=SIZE_POWER,
        models=("exp:1",),
        n_list=(int(n),),
        s_list=(int(s),),
        reps=int(reps),
        master_seed=int(seed),
    )
    _, results = _cell_outcomes(spec, "departure")
    empirical = float(np.var(results[0], ddof=1))
    return NullVarianceResult(int(s), int(n), int(reps), empirical, null_variance(s))


# -- configuration and CSV ------------------------------------------------

_LIST_KEYS = {"models", "n", "s", "alpha"}
_SCALAR_KEYS = {"kind", "reps", "seed", "workers"}


def load_sim_config(path) -> SimSpec:
    """Parse a key = value simulation config file into a :class:`SimSpec`.

    Recognized keys: ``kind`` (bias_mse | size_power), ``models`` (one or
    more spec strings, whitespace-separated), ``n``, ``s``, ``alpha``
    (whitespace-separated lists), ``reps``, ``seed``, ``workers``.
    ``#`` starts a comment.
    """
    entries = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key = key.strip().lower()
            if key == "model":
                key = "models"
            if key not in _LIST_KEYS | _SCALAR_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            entries[key] = value.strip()
    missing = {"kind", "models", "n", "s"} - set(entries)
    if missing:
        raise ValueError(f"{path}: missing required key(s): {', '.join(sorted(missing))}")
    kwargs = {
        "kind": entries["kind"],
        "models": tuple(entries["models"].split()),
        "n_list": tuple(int(tok) for tok in entries["n"].split()),
        "s_list": tuple(int(tok) for tok in entries["s"].split()),
    }
    if "alpha" in entries:
        kwargs["alpha_list"] = tuple(float(tok) for tok in entries["alpha"].split())
    if "reps" in entries:
        kwargs["reps"] = int(entries["reps"])
    if "seed" in entries:
        kwargs["master_seed"] = int(entries["seed"])
    if "workers" in entries:
        kwargs["workers"] = int(entries["workers"])
    return SimSpec(**kwargs)


def rows_to_csv(rows) -> str:
    """Render rows in the fixed column order; floats keep full precision."""
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        alpha = "" if row.alpha is None else repr(row.alpha)
        lines.append(
            ",".join(
                (row.model, str(row.n), str(row.s), row.metric, alpha,
                 repr(row.value), repr(row.mc_se))
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
