"""Closed-form approximations of P(t) by sums of Gaussians.

All approximations share the form

    P(t) ~ sqrt(1 - sum_n w_n exp(-k_n^2 t^2 / 2)),

with widths ``k_n`` in [1, sqrt 2] and positive weights summing to one.  The
uniform case ``w_n = 1/N`` is the geometric iteration; the weights
(1/2, 1/4, 1/4) come from partitioning only the outer octagon.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._numerics import golden_max
from .errors import ContractError, DomainError

SQRT2 = math.sqrt(2.0)
#: width of the circle whose area equals the integration square
K_AREA = math.sqrt(4.0 / math.pi)
#: single width quoted as best leading-order choice
K_LEADING = 1.116

WIDTH_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-12

# caps the (len(t), N) work matrix
_CHUNK_ELEMS = 1 << 22


@dataclass(frozen=True)
class ParameterSet:
    """Widths ``k`` and weights ``w`` of a sum-of-Gaussians approximation.

    Immutable; ``half_k2`` (k^2 / 2) is precomputed for the evaluation path.
    ``scheme`` optionally records the :class:`~sumgauss.geometry.Scheme` the
    widths were derived from.
    """

    k: tuple
    w: tuple
    scheme: object = None
    half_k2: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        k = tuple(float(x) for x in self.k)
        w = tuple(float(x) for x in self.w)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "w", w)
        if not k:
            raise ContractError("at least one width is required")
        if len(k) != len(w):
            raise ContractError(f"{len(k)} widths but {len(w)} weights")
        if not all(math.isfinite(x) for x in k + w):
            raise ContractError("widths and weights must be finite")
        if any(x < 1.0 - WIDTH_TOL or x > SQRT2 + WIDTH_TOL for x in k):
            raise ContractError(f"widths must lie in [1, sqrt 2]: {k}")
        if any(b <= a for a, b in zip(k, k[1:])):
            raise ContractError("widths must be strictly increasing")
        if any(x <= 0.0 for x in w):
            raise ContractError("weights must be positive")
        if abs(math.fsum(w) - 1.0) > WEIGHT_SUM_TOL:
            raise ContractError(f"weights sum to {math.fsum(w)!r}, not 1")
        hk2 = 0.5 * np.square(np.array(k))
        ws = np.array(w)
        hk2.flags.writeable = False
        ws.flags.writeable = False
        object.__setattr__(self, "half_k2", hk2)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def uniform(cls, k, scheme=None):
        n = len(k)
        return cls(tuple(k), (1.0 / n,) * n, scheme)

    def __len__(self):
        return len(self.k)

    def to_dict(self):
        d = {"k": list(self.k), "w": list(self.w)}
        if self.scheme is not None:
            d["scheme"] = {"base": self.scheme.base, "depth": self.scheme.depth}
        return d


def _as_t(t):
    arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError("t must be finite and nonnegative")
    return arr


def radicand(params, t):
    """``1 - sum_n w_n exp(-k_n^2 t^2/2)``, i.e. the approximation of P(t)^2.

    Written as ``-sum_n w_n expm1(...)`` so small ``t`` keeps full relative
    precision; equal to the plain form because the weights sum to one.
    """
    arr = _as_t(t)
    flat = arr.reshape(-1)
    neg_half_t2 = -np.square(flat)
    out = np.empty_like(flat)
    step = max(1, _CHUNK_ELEMS // len(params))
    for i in range(0, flat.size, step):
        x = neg_half_t2[i:i + step]
        out[i:i + step] = -(np.expm1(np.multiply.outer(x, params.half_k2)) @ params.weights)
    out = out.reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out


def p_approx(params, t):
    """Sum-of-Gaussians approximation of P(t).

    Parameters
    ----------
    params : ParameterSet
    t : float or array_like
        Nonnegative half-width(s).

    Returns
    -------
    float or numpy.ndarray
        ``sqrt(max(0, 1 - sum_n w_n exp(-k_n^2 t^2/2)))``.
    """
    r = radicand(params, t)
    return np.sqrt(np.maximum(r, 0.0)) if isinstance(r, np.ndarray) else math.sqrt(max(r, 0.0))


def p_approx_fast(half_k2, weights, t):
    """Benchmark kernel: no validation, ``t`` a float64 array, one term at a time."""
    x = -np.square(t)
    acc = weights[0] * np.expm1(half_k2[0] * x)
    for j in range(1, len(half_k2)):
        acc += weights[j] * np.expm1(half_k2[j] * x)
    return np.sqrt(np.maximum(-acc, 0.0))


def p_leading(k, t):
    """Single-Gaussian form ``sqrt(1 - exp(-k^2 t^2/2))`` for ``1 <= k <= sqrt 2``.

    ``k = 1`` is the inscribed-circle lower envelope, ``k = sqrt 2`` the
    circumscribed one.
    """
    if not (1.0 - WIDTH_TOL <= k <= SQRT2 + WIDTH_TOL):
        raise DomainError(f"leading-order width must lie in [1, sqrt 2], got {k}")
    arr = _as_t(t)
    r = -np.expm1(-0.5 * (k * arr) ** 2)
    out = np.sqrt(np.maximum(r, 0.0))
    return float(out) if arr.ndim == 0 else out


def envelope_range(t):
    """Lower/upper envelopes with k = 1 and k = sqrt(4/pi), and their gap.

    Returns
    -------
    (p_lo, p_hi, p_hi - p_lo)
    """
    lo = p_leading(1.0, t)
    hi = p_leading(K_AREA, t)
    return lo, hi, hi - lo


def envelope_peak(t_max=8.0, step=1.0 / 512):
    """Location and size of the widest envelope gap: ``(t0, gap)``."""
    ts = np.arange(0.0, t_max + 0.5 * step, step)
    gap = envelope_range(ts)[2]
    i = int(np.argmax(gap))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, ts.size - 1)]
    return golden_max(lambda x: envelope_range(x)[2], lo, hi)


def shenton_bounds(t):
    """Shenton's classical lower and upper bounds on P(t), ``(P_lo, P_hi)``."""
    arr = _as_t(t)
    g = np.exp(-0.5 * arr * arr)
    lo = 1.0 - 4.0 * math.sqrt(2.0 / math.pi) * g / (3.0 * arr + np.sqrt(arr * arr + 8.0))
    hi = 1.0 - (np.sqrt(arr * arr + 4.0) - arr) * g / math.sqrt(2.0 * math.pi)
    if arr.ndim == 0:
        return float(lo), float(hi)
    return lo, hi
