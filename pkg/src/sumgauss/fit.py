"""Choosing the widths: node equations, seeded random search, upper boundaries."""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._numerics import bisect, golden_min, newton_polish
from .analysis import DEFAULT_GRID, grid_points, max_deviation
from .approx import ParameterSet
from .errors import ContractError, NoSolution
from .geometry import bounds
from .oracle import p_exact

#: residual tolerance for a node solution
NODE_TOL = 1e-10
#: candidates per random-search block; block b draws from PCG64(seed + b)
BLOCK = 256


@dataclass(frozen=True)
class FitConfig:
    """Settings for :func:`fit_random` (and the node list for :func:`fit_nodes`).

    Random draws come from numpy's PCG64 bit generator.  Candidates are
    grouped in blocks of ``BLOCK``; block ``b`` is seeded with ``seed + b``,
    so the candidate sequence, and therefore the result, does not depend on
    ``threads``.
    """

    nodes: tuple = None
    scan_grid: tuple = DEFAULT_GRID
    iterations: int = 20000
    seed: int = 0
    refine: bool = True
    threads: int = 1
    max_sweeps: int = 60

    def __post_init__(self):
        if self.nodes is not None:
            nodes = tuple(float(t) for t in self.nodes)
            if any(t <= 0 for t in nodes) or any(b <= a for a, b in zip(nodes, nodes[1:])):
                raise ContractError("nodes must be positive and strictly increasing")
            object.__setattr__(self, "nodes", nodes)
        if not 0 <= self.seed < 2**64:
            raise ContractError("seed must be an unsigned 64-bit integer")


def upper_boundary_params(scheme):
    """Uniform-weight widths pinned to the upper end of every interval."""
    table = bounds(scheme)
    return ParameterSet.uniform([hi for _, hi in table.intervals], scheme=scheme)


# -- node method -------------------------------------------------------------


def _residual(k, weights, t, target):
    # Q(t) = P_approx(t)^2 - P(t)^2
    return -math.fsum(w * math.expm1(-0.5 * (kn * t) ** 2) for kn, w in zip(k, weights)) - target


def fit_nodes(table, weights, nodes, scan_points=17, xtol=1e-13):
    """Widths that make the approximation exact at the given nodes.

    Solves ``Q(t_i) = 0`` for ``i = 1..N`` by nested elimination.  The
    equation at the smallest node determines ``k_1`` from the remaining
    widths (``Q`` is increasing in ``k_1``, so a bracketed bisection
    suffices); that solution is substituted into the next equation, which is
    solved for ``k_2``, and so on.  From the second level upward the reduced
    equation need not be monotone, so its interval is scanned at
    ``scan_points`` points and the first sign change is bisected.  Every 1-D
    root is bisected to ``xtol`` and then receives one Newton step.

    Parameters
    ----------
    table : BoundTable
        One admissible interval per width.
    weights : sequence of float
        Fixed weights, positive, summing to one.
    nodes : sequence of float
        ``N`` strictly increasing positive abscissae.

    Returns
    -------
    ParameterSet

    Raises
    ------
    NoSolution
        If no admissible root exists; carries the residual sign pattern at
        the corners of the box.
    """
    n = len(table)
    nodes = tuple(float(t) for t in nodes)
    weights = tuple(float(w) for w in weights)
    if len(nodes) != n or len(weights) != n:
        raise ContractError(f"need {n} nodes and weights, got {len(nodes)} and {len(weights)}")
    FitConfig(nodes=nodes)
    targets = [p_exact(t) ** 2 for t in nodes]
    ivs = table.intervals

    def solve(level, tail):
        """Widths ``k_0..k_level`` given ``tail = (k_{level+1}, ...)``, or None."""
        lo, hi = ivs[level]

        def g(x):
            if level == 0:
                head = (x,)
            else:
                head = solve(level - 1, (x,) + tail)
                if head is None:
                    return None
                head = head + (x,)
            return _residual(head + tail, weights, nodes[level], targets[level])

        def g_float(x):
            v = g(x)
            return math.nan if v is None else v

        if level == 0:
            brackets = [(lo, hi, g(lo), g(hi))]
        else:
            xs = [float(x) for x in np.linspace(lo, hi, scan_points)]
            vals = [g(x) for x in xs]
            brackets = []
            for i in range(scan_points - 1):
                a, b, fa, fb = xs[i], xs[i + 1], vals[i], vals[i + 1]
                if (fa is None) != (fb is None):
                    # the inner solution leaves its interval inside this cell
                    a, b, fa, fb = _trim_to_domain(g, a, b, fa, fb, xtol)
                if fa is None or fb is None:
                    continue
                if fa == 0 or (fa > 0) != (fb > 0):
                    brackets.append((a, b, fa, fb))
        for a, b, fa, fb in brackets:
            root = bisect(g_float, float(a), float(b), xtol=xtol, flo=fa, fhi=fb)
            if root is None:
                continue
            root = newton_polish(g_float, root, float(a), float(b))
            if root < 1.0:  # spurious branch: widths below the inscribed circle
                continue
            head = (root,) if level == 0 else solve(level - 1, (root,) + tail)
            if head is None:
                continue
            return head if level == 0 else head + (root,)
        return None

    k = solve(n - 1, ())
    if k is not None:
        res = [_residual(k, weights, t, q) for t, q in zip(nodes, targets)]
        if max(abs(r) for r in res) <= NODE_TOL and all(b > a for a, b in zip(k, k[1:])):
            return ParameterSet(k, weights)
    corners = {}
    if n <= 8:
        for corner in itertools.product(*ivs):
            corners[corner] = tuple(
                "+" if _residual(corner, weights, t, q) > 0 else "-"
                for t, q in zip(nodes, targets)
            )
    raise NoSolution("no admissible root of the node system", corners)


def _trim_to_domain(g, a, b, fa, fb, xtol):
    """Shrink ``[a, b]`` to its defined part when ``g`` is defined at one end only."""
    good, bad, fgood = (a, b, fa) if fa is not None else (b, a, fb)
    while abs(bad - good) > xtol:
        mid = 0.5 * (good + bad)
        fm = g(mid)
        if fm is None:
            bad = mid
        else:
            good, fgood = mid, fm
    if fa is not None:
        return a, good, fa, fgood
    return good, b, fgood, fb


# -- random search -----------------------------------------------------------


def _sup_dev_batch(half_k2, w, neg_t2, p_ref):
    """Grid sup-norm of |p_approx - p_exact| for each row of ``half_k2``."""
    acc = np.zeros((half_k2.shape[0], neg_t2.size))
    for j in range(half_k2.shape[1]):
        acc += w[j] * np.expm1(np.multiply.outer(half_k2[:, j], neg_t2))
    approx = np.sqrt(np.maximum(-acc, 0.0))
    return np.max(np.abs(approx - p_ref), axis=1)


def _draw_block(seed, b, count, lo, hi):
    rng = np.random.Generator(np.random.PCG64(seed + b))
    return lo + rng.random((count, lo.size)) * (hi - lo)


def _block_best(k, err):
    best = np.flatnonzero(err == err.min())
    # ties go to the lexicographically smallest width vector
    i = min(best, key=lambda r: tuple(k[r]))
    return float(err[i]), tuple(float(x) for x in k[i])


def fit_random(table, weights, config=FitConfig()):
    """Seeded uniform random search inside the bound table.

    Each candidate draws every ``k_n`` uniformly in its interval and is
    scored by the sup-norm deviation over ``config.scan_grid``.  With
    ``config.refine`` the best candidate is then improved by cyclic
    golden-section searches, one width at a time, inside its interval.

    Returns
    -------
    (ParameterSet, ErrorReport)
        The report is :func:`~sumgauss.analysis.max_deviation` of the result
        on the same grid.
    """
    if config.iterations < 1:
        raise ContractError("random search needs at least one iteration")
    weights = np.array([float(w) for w in weights])
    if weights.size != len(table):
        raise ContractError(f"{weights.size} weights for {len(table)} intervals")
    lo, hi = table.lower, table.upper
    ts = grid_points(config.scan_grid)
    neg_t2 = -np.square(ts)
    p_ref = p_exact(ts)
    seed = int(config.seed)

    n_blocks = -(-config.iterations // BLOCK)

    def run(b):
        count = min(BLOCK, config.iterations - b * BLOCK)
        k = _draw_block(seed, b, count, lo, hi)
        return _block_best(k, _sup_dev_batch(0.5 * k * k, weights, neg_t2, p_ref))

    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            results = list(pool.map(run, range(n_blocks)))
    else:
        results = [run(b) for b in range(n_blocks)]
    best_err, best_k = min(results)

    if config.refine:
        best_err, best_k = _coordinate_descent(
            np.array(best_k), best_err, lo, hi, weights, neg_t2, p_ref, config.max_sweeps
        )

    params = ParameterSet(best_k, tuple(weights))
    return params, max_deviation(params, config.scan_grid)


def _coordinate_descent(k, err, lo, hi, weights, neg_t2, p_ref, max_sweeps):
    # |deviation(t)| is quasi-convex in each width (deviation is monotone in it),
    # so the sup over t is unimodal along every coordinate.
    n = k.size

    def objective(x, j):
        trial = k.copy()
        trial[j] = x
        return float(_sup_dev_batch(0.5 * trial[None, :] ** 2, weights, neg_t2, p_ref)[0])

    for _ in range(max_sweeps):
        start = err
        for j in range(n):
            a = lo[j] if j == 0 else max(lo[j], np.nextafter(k[j - 1], np.inf))
            b = hi[j] if j == n - 1 else min(hi[j], np.nextafter(k[j + 1], -np.inf))
            x, fx = golden_min(lambda z: objective(z, j), float(a), float(b), xtol=1e-12)
            if fx < err:
                k[j], err = x, fx
        if start - err <= 1e-15:
            break
    return err, tuple(float(x) for x in k)
