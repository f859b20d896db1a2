"""Small scalar numerical kernels: adaptive quadrature, bracketed roots, golden section."""

import heapq
import math

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half, centre last).
_XK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def _gk15(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    kron = _WK[7] * fc
    gauss = _WG[3] * fc
    for j in range(7):
        dx = h * _XK[j]
        s = f(c - dx) + f(c + dx)
        kron += _WK[j] * s
        if j % 2 == 1:
            gauss += _WG[j // 2] * s
    return kron * h, abs((kron - gauss) * h)


def quad(f, a, b, atol=1e-13, rtol=0.0, max_intervals=4000):
    """Adaptive Gauss-Kronrod (7/15) integration of a smooth scalar function.

    The subinterval with the largest error estimate is bisected until the
    summed estimate falls below ``max(atol, rtol * |I|)``.

    Returns
    -------
    (value, error_estimate)
    """
    if a == b:
        return 0.0, 0.0
    v, e = _gk15(f, a, b)
    heap = [(-e, a, b, v)]
    total, err = v, e
    while err > max(atol, rtol * abs(total)) and len(heap) < max_intervals:
        neg_e, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        # resum to avoid drift from repeated add/subtract
        total = math.fsum(item[3] for item in heap)
        err = math.fsum(-item[0] for item in heap)
    return total, err


def bisect(f, lo, hi, xtol=1e-13, flo=None, fhi=None, maxiter=200):
    """Root of ``f`` in ``[lo, hi]`` by bisection; ``f(lo)`` and ``f(hi)`` must differ in sign.

    Returns ``None`` when the bracket is invalid.
    """
    flo = f(lo) if flo is None else flo
    fhi = f(hi) if fhi is None else fhi
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        return None
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return lo if abs(flo) <= abs(fhi) else hi


def newton_polish(f, x, lo, hi, h=1e-7):
    """One Newton step with a central finite-difference slope, kept only if it
    stays in ``[lo, hi]`` and reduces ``|f|``."""
    fx = f(x)
    a, b = max(lo, x - h), min(hi, x + h)
    if b <= a:
        return x
    slope = (f(b) - f(a)) / (b - a)
    if slope == 0.0 or not math.isfinite(slope):
        return x
    x_new = x - fx / slope
    if lo <= x_new <= hi and abs(f(x_new)) < abs(fx):
        return x_new
    return x


def golden_min(f, lo, hi, xtol=1e-12, maxiter=200):
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    The endpoints are evaluated too so a monotone objective returns its
    boundary minimum.
    """
    a, b = lo, hi
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = f(d)
    candidates = [(fc, c), (fd, d), (f(lo), lo), (f(hi), hi)]
    fbest, xbest = min(candidates)
    return xbest, fbest


def golden_max(f, lo, hi, xtol=1e-12, maxiter=200):
    """Maximise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    x, fx = golden_min(lambda z: -f(z), lo, hi, xtol=xtol, maxiter=maxiter)
    return x, -fx
