"""Error measurement, convergence tables and the 1/N bound machinery."""

import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ._numerics import golden_max
from .approx import p_approx, p_approx_fast
from .errors import ContractError
from .geometry import bounds
from .oracle import p_exact

#: t at which the k = 1 / k = sqrt(4/pi) envelope gap peaks
T0 = 1.0668
DEFAULT_GRID = (0.0, 8.0, 1.0 / 512)
#: sup over t of H(t) sqrt(1 - exp(-t^2/2)); attained where exp(-t^2/2) = 2/5
BOUND_CONSTANT = math.sqrt(2**2 * 3**3 / 5**5)
MIN_STABLE_EVALS = 10**5


@dataclass(frozen=True)
class ErrorReport:
    """Sup-norm deviation of an approximation from P(t) over a grid.

    ``max_abs_dev``/``argmax_t`` include the golden-section refinement when
    ``refined`` is set; ``grid_max_abs_dev``/``grid_argmax_t`` are the raw scan.
    """

    max_abs_dev: float
    argmax_t: float
    grid: tuple
    refined: bool
    grid_max_abs_dev: float
    grid_argmax_t: float

    def to_dict(self):
        d = asdict(self)
        d["grid"] = list(self.grid)
        return d


def grid_points(grid):
    t_min, t_max, step = (float(x) for x in grid)
    if not (step > 0 and t_max >= t_min >= 0 and math.isfinite(t_max)):
        raise ContractError(f"empty or invalid grid {grid!r}")
    n = int(math.floor((t_max - t_min) / step + 1e-9)) + 1
    return t_min + step * np.arange(n)


def _chunked(fn, ts, threads):
    if threads <= 1 or ts.size < 2 * threads:
        return fn(ts)
    parts = np.array_split(ts, threads)
    with ThreadPoolExecutor(threads) as pool:
        return np.concatenate(list(pool.map(fn, parts)))


def deviation_at(params, t):
    """Signed deviation ``p_approx(params, t) - p_exact(t)``."""
    return p_approx(params, t) - p_exact(t)


def max_deviation(params, grid=DEFAULT_GRID, refine=True, threads=1):
    """Sup over ``grid`` of ``|p_approx - p_exact|``, optionally refined.

    The grid maximum is polished by golden-section search over the two
    neighbouring cells; the larger of the two values is reported.
    """
    ts = grid_points(grid)
    dev = np.abs(_chunked(lambda x: deviation_at(params, x), ts, threads))
    i = int(np.argmax(dev))
    grid_max, grid_t = float(dev[i]), float(ts[i])
    best, best_t = grid_max, grid_t
    if refine and ts.size > 1:
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, ts.size - 1)]
        x, fx = golden_max(lambda z: abs(deviation_at(params, z)), float(lo), float(hi))
        if fx > best:
            best, best_t = fx, x
    return ErrorReport(best, best_t, tuple(float(g) for g in grid), bool(refine), grid_max, grid_t)


def convergence_table(base, p_range, t0=T0, threads=1):
    """``[(p, N, |deviation at t0|), ...]`` for upper-boundary widths.

    Parameters
    ----------
    base : {2, 3}
    p_range : iterable of int
    t0 : float
    threads : int
        Depths are evaluated concurrently; the result order follows ``p_range``.
    """
    from .fit import upper_boundary_params
    from .geometry import Scheme

    def row(p):
        params = upper_boundary_params(Scheme(base, p))
        return p, len(params), abs(deviation_at(params, t0))

    ps = list(p_range)
    if threads <= 1:
        return [row(p) for p in ps]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(row, ps))


def h_gap(t):
    """``H(t) = exp(-t^2/2) - exp(-t^2)``: gap of the squared envelopes."""
    t = np.asarray(t, dtype=np.float64)
    out = np.exp(-0.5 * t * t) - np.exp(-t * t)
    return float(out) if out.ndim == 0 else out


def telescoped_range(scheme, t):
    """``(1/N) sum_n [exp(-(k_n^min t)^2/2) - exp(-(k_n^max t)^2/2)]``, term by term.

    Consecutive intervals share endpoints, so this collapses to ``H(t)/N``.
    """
    table = bounds(scheme)
    n = len(table)
    terms = [
        math.exp(-0.5 * (lo * t) ** 2) - math.exp(-0.5 * (hi * t) ** 2)
        for lo, hi in table.intervals
    ]
    return math.fsum(terms) / n


def bound_constant_check(t_max=10.0, step=1e-3):
    """Numerical maximum of ``H(t) sqrt(1 - exp(-t^2/2))`` on ``[0, t_max]``."""
    f = lambda t: h_gap(t) * np.sqrt(-np.expm1(-0.5 * np.square(t)))
    ts = np.arange(0.0, t_max + 0.5 * step, step)
    vals = f(ts)
    i = int(np.argmax(vals))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, ts.size - 1)]
    _, fx = golden_max(lambda z: float(f(z)), float(lo), float(hi))
    return max(fx, float(vals[i]))


@dataclass(frozen=True)
class BenchResult:
    ns_per_eval_approx: float
    ns_per_eval_exact: float
    speedup: float
    n_terms: int
    n_evals: int
    batch: int
    approx_iqr_ns: float
    exact_iqr_ns: float
    unstable: bool

    def to_dict(self):
        return asdict(self)


def _time_batches(fn, t, n_batches, warmup=2):
    for _ in range(warmup):
        fn(t)
    out = []
    for _ in range(n_batches):
        start = time.perf_counter_ns()
        fn(t)
        out.append((time.perf_counter_ns() - start) / t.size)
    return out


def _iqr(xs):
    if len(xs) < 4:
        return 0.0
    q = statistics.quantiles(xs, n=4)
    return q[2] - q[0]


def bench(params, n_evals=10**7, t_range=(0.0, 5.0), batch=1 << 16, seed=0):
    """Wall-clock cost per evaluation of ``p_approx`` versus ``p_exact``.

    Both run on the same uniformly drawn ``t`` batch, repeated until
    ``n_evals`` evaluations each; per-evaluation cost is the median over
    batches (after warm-up), dispersion the interquartile range.  Runs fewer
    than ``MIN_STABLE_EVALS`` evaluations are flagged ``unstable``.
    """
    n_evals = int(n_evals)
    if n_evals <= 0:
        raise ContractError("bench needs at least one evaluation")
    batch = min(batch, n_evals)
    n_batches = -(-n_evals // batch)
    t = np.random.default_rng(seed).uniform(*t_range, size=batch)
    hk2, w = params.half_k2, params.weights

    approx = _time_batches(lambda x: p_approx_fast(hk2, w, x), t, n_batches)
    exact = _time_batches(p_exact, t, n_batches)
    a, e = statistics.median(approx), statistics.median(exact)
    return BenchResult(
        ns_per_eval_approx=a,
        ns_per_eval_exact=e,
        speedup=e / a,
        n_terms=len(params),
        n_evals=n_batches * batch,
        batch=batch,
        approx_iqr_ns=_iqr(approx),
        exact_iqr_ns=_iqr(exact),
        unstable=n_evals < MIN_STABLE_EVALS,
    )
