"""Interval bounds for the width parameters from the rotated-square construction.

Rotating the integration square repeatedly splits the annulus between the
inscribed circle (radius t) and the circumscribed circle (radius t*sqrt 2)
into N slices.  Slice n (zero based) constrains its width to

    1/cos(pi n / (4N))  <=  k_n  <=  1/cos(pi (n+1) / (4N)),

so consecutive intervals share endpoints and together span [1, sqrt 2].
The binary scheme has N = 2**p slices, the ternary one N = 3**p.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError

#: closed-interval slack used by :func:`validate`
ENDPOINT_TOL = 1e-12

# keeps N = base**p (and the O(N) arrays built from it) addressable
_MAX_N = 2**40


@dataclass(frozen=True)
class Scheme:
    """Partition scheme: ``base`` in {2, 3}, depth ``p`` >= 0."""

    base: int
    depth: int

    def __post_init__(self):
        if self.base not in (2, 3):
            raise ContractError(f"base must be 2 or 3, got {self.base!r}")
        if not isinstance(self.depth, int) or self.depth < 0:
            raise ContractError(f"depth must be a nonnegative integer, got {self.depth!r}")
        if self.base**self.depth > _MAX_N:
            raise ContractError(f"{self.base}**{self.depth} exceeds the supported size")

    @property
    def n(self):
        return self.base**self.depth


@dataclass(frozen=True)
class BoundTable:
    """Chained closed intervals ``(k_min, k_max)``, one per width parameter."""

    intervals: tuple

    def __post_init__(self):
        if not self.intervals:
            raise ContractError("a bound table needs at least one interval")
        for lo, hi in self.intervals:
            if not lo < hi:
                raise ContractError(f"empty interval [{lo}, {hi}]")

    def __len__(self):
        return len(self.intervals)

    @property
    def lower(self):
        return np.array([lo for lo, _ in self.intervals])

    @property
    def upper(self):
        return np.array([hi for _, hi in self.intervals])

    def endpoints(self):
        """All N+1 distinct endpoints in increasing order."""
        return [self.intervals[0][0]] + [hi for _, hi in self.intervals]

    def is_chained(self, tol=0.0):
        return all(
            abs(self.intervals[i][0] - self.intervals[i - 1][1]) <= tol
            for i in range(1, len(self.intervals))
        )


def _sec(x):
    return 1.0 / math.cos(x)


def boundary_widths(n):
    """The N+1 interval endpoints ``1/cos(pi j / (4N))``, j = 0..N.

    The angle is formed from the reduced ratio ``j / n`` so refinements
    reproduce coarser endpoints bit for bit.  The last endpoint is pinned to
    ``sqrt(2)``; ``1/cos(pi/4)`` is one ulp off.
    """
    ends = [_sec(0.25 * math.pi * (j / n)) for j in range(n + 1)]
    ends[0] = 1.0
    ends[-1] = math.sqrt(2.0)
    return ends


def bounds(scheme):
    """Bound table for a binary or ternary partition of depth ``p``."""
    ends = boundary_widths(scheme.n)
    return BoundTable(tuple(zip(ends[:-1], ends[1:])))


def half_step_table():
    """Intervals for the weighted three-term half step.

    Only the outer octagon of the first rotation is partitioned again, so the
    table is ``[1, sec(pi/8)]``, ``[sec(2pi/16), sec(3pi/16)]``,
    ``[sec(3pi/16), sqrt 2]``; pair it with weights (1/2, 1/4, 1/4).
    """
    ends = boundary_widths(4)
    return BoundTable(((ends[0], ends[2]), (ends[2], ends[3]), (ends[3], ends[4])))


def validate(params, table, tol=ENDPOINT_TOL):
    """True iff every width lies in its closed interval (``tol`` slack at the ends).

    ``params`` may be a :class:`~sumgauss.approx.ParameterSet` or a plain
    sequence of widths.
    """
    k = getattr(params, "k", params)
    if len(k) != len(table):
        raise ContractError(f"{len(k)} widths against {len(table)} intervals")
    return all(lo - tol <= kn <= hi + tol for kn, (lo, hi) in zip(k, table.intervals))
