"""Small 1-D optimisation helpers used throughout the library."""

import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_section_min(f, a, b, tol=1e-10):
    """Minimise a unimodal f on [a, b] by golden-section search.

    Returns (x, f(x)) with the bracket narrowed to width <= tol.
    """
    if a > b:
        a, b = b, a
    h = b - a
    if h <= tol:
        x = (a + b) / 2.0
        return x, f(x)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def bisect_increasing(g, target, lo, hi, tol=1e-12, max_iter=200):
    """Solve g(x) = target for increasing continuous g on [lo, hi]."""
    glo, ghi = g(lo), g(hi)
    if not (glo <= target <= ghi):
        raise ValueError("target not bracketed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol:
            return mid
        if g(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
