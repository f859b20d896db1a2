"""The N -> infinity limit of the width sum, and its truncated power series.

With infinitely many slices the width sum turns into an angular integral,

    P(t)^2 = 1 - (4/pi) int_0^{pi/4} exp(-t^2 / (2 cos^2 phi)) dphi,

which is exact.  Expanding the exponential gives

    P(t)^2 ~ (4/pi) sum_{n=1}^{N} (-1)^(n-1) / n! (t^2/2)^n c_n,
    c_n = int_0^{pi/4} sec^(2n) phi dphi = sum_{j<n} C(n-1, j) / (2j+1),

with truncation error below t^(2N) / (N! N).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._numerics import quad
from .errors import DomainError

QUAD_ATOL = 1e-13


def _check_n(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")


@lru_cache(maxsize=None)
def c_coeff_exact(n):
    """``c_n`` as an exact fraction from the binomial sum."""
    _check_n(n)
    return sum((Fraction(math.comb(n - 1, j), 2 * j + 1) for j in range(n)), Fraction(0))


def c_coeff(n):
    """``c_n = sum_{j=0}^{n-1} C(n-1, j) / (2j + 1)`` as a float."""
    return float(c_coeff_exact(n))


def c_coeff_quadrature(n, atol=QUAD_ATOL):
    """``c_n`` from the defining integral ``int_0^{pi/4} cos(phi)^(-2n) dphi``."""
    _check_n(n)
    return quad(lambda phi: math.cos(phi) ** (-2 * n), 0.0, math.pi / 4, atol=atol)[0]


def _check_t(t):
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError("t must be finite and nonnegative")
    return t


def p_sq_continuum(t, atol=QUAD_ATOL):
    """P(t)^2 from the angular integral, by adaptive Gauss-Kronrod quadrature."""
    t = _check_t(t)
    a = 0.5 * t * t
    integral = quad(lambda phi: math.exp(-a / math.cos(phi) ** 2), 0.0, math.pi / 4, atol=atol)[0]
    return 1.0 - 4.0 / math.pi * integral


@dataclass(frozen=True)
class SeriesResult:
    value: float
    bound: float
    informative: bool
    n_terms: int


def series_bound(t, n_terms):
    """Truncation bound ``t^(2N) / (N! N)``, computed in the log domain."""
    t = _check_t(t)
    _check_n(n_terms)
    if t == 0.0:
        return 0.0
    log_b = 2 * n_terms * math.log(t) - math.lgamma(n_terms + 1) - math.log(n_terms)
    return math.exp(log_b) if log_b < 709.0 else math.inf


def p_sq_series(t, n_terms):
    """Truncated alternating series for P(t)^2 with its error bound.

    Term magnitudes ``(t^2/2)^n c_n / n!`` are kept as logarithms and summed
    relative to the largest one, so intermediate powers never overflow; a sum
    that is itself beyond double range comes back as +-inf.  A bound above 1
    marks the value as non-informative.
    """
    t = _check_t(t)
    _check_n(n_terms)
    bound = series_bound(t, n_terms)
    if t == 0.0:
        return SeriesResult(0.0, 0.0, True, n_terms)
    log_a = math.log(0.5 * t * t)
    logs = []
    for n in range(1, n_terms + 1):
        c = c_coeff_exact(n)
        log_c = math.log(c.numerator) - math.log(c.denominator)
        logs.append(n * log_a - math.lgamma(n + 1) + log_c)
    top = max(logs)
    scaled = math.fsum(
        math.exp(lg - top) * (1.0 if n % 2 else -1.0) for n, lg in enumerate(logs, start=1)
    )
    if scaled == 0.0:
        value = 0.0
    elif top + math.log(abs(scaled)) + math.log(4.0 / math.pi) > 709.0:
        value = math.copysign(math.inf, scaled)
    else:
        value = 4.0 / math.pi * scaled * math.exp(top)
    return SeriesResult(value, bound, bound <= 1.0, n_terms)
