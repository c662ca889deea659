"""Pure-Python kernels: real-root chains and elementary symmetric tables.

This module mirrors the compiled extension ``gisk._kernels_cy``; the active
implementation is chosen once in ``gisk.backend``.  Keep the two in sync.

Polynomials are dense float64 coefficient arrays in ascending powers with a
nonzero leading coefficient.  Real roots are isolated against the derivative
chain: the roots of p^(l+1) split the line into intervals on which p^(l) is
monotone, so every sign change brackets exactly one simple root.  Roots of
even multiplicity leave no sign change and are instead detected as critical
points where |p| falls below EPS_ROOT times the local evaluation magnitude.
"""

import numpy as np

EPS_ROOT = 1e-12

_MAXIT = 200
# Two bracketed evaluations closer than this (relative) collapse to one root.
_MERGE_REL = 1e-9
# Bracketed roots this close to a detected even-multiplicity root are part of
# the same cluster; double precision cannot separate them (sqrt(eps) limit).
_CLUSTER_REL = 1e-6


def _horner(a, x):
    r = 0.0
    for i in range(len(a) - 1, -1, -1):
        r = r * x + a[i]
    return r


def _horner2(a, x):
    """Value and first derivative in one pass."""
    p = 0.0
    dp = 0.0
    for i in range(len(a) - 1, -1, -1):
        dp = dp * x + p
        p = p * x + a[i]
    return p, dp


def _abs_eval(a, x):
    ax = abs(x)
    r = 0.0
    for i in range(len(a) - 1, -1, -1):
        r = r * ax + abs(a[i])
    return r


def _cauchy_bound(a):
    """min(Cauchy, Lagrange) upper bound for the magnitude of real roots."""
    deg = len(a) - 1
    lead = abs(a[-1])
    m = 0.0
    for i in range(deg):
        if abs(a[i]) > m:
            m = abs(a[i])
    cauchy = 1.0 + m / lead
    lag = 0.0
    for i in range(deg):
        if a[i] != 0.0:
            r = (abs(a[i]) / lead) ** (1.0 / (deg - i))
            if r > lag:
                lag = r
    if lag > 0.0 and 2.0 * lag < cauchy:
        return 2.0 * lag
    return cauchy


def _refine(a, lo, hi, flo, fhi):
    """Newton iteration safeguarded by a sign-change bracket [lo, hi].

    Bisection is forced every other step so the bracket halves at least
    once per two iterations regardless of Newton's progress.
    """
    x = 0.5 * (lo + hi)
    for it in range(_MAXIT):
        f, df = _horner2(a, x)
        if f == 0.0:
            return x
        if (f < 0.0) == (flo < 0.0):
            lo, flo = x, f
        else:
            hi, fhi = x, f
        if hi - lo <= EPS_ROOT * max(1.0, abs(x)):
            break
        if (it & 1) == 0 and df != 0.0:
            xn = x - f / df
            if lo < xn < hi:
                x = xn
                continue
        x = 0.5 * (lo + hi)
    return 0.5 * (lo + hi)


def _roots_chain(a):
    """All real roots of every derivative level of ``a``.

    Returns ``levels`` with ``levels[l]`` the ascending real roots of the
    l-th derivative, for l = 0..deg-1 (the constant level is omitted).
    """
    deg = len(a) - 1
    stack = [list(map(float, a))]
    for _ in range(deg - 1):
        prev = stack[-1]
        stack.append([prev[i + 1] * (i + 1) for i in range(len(prev) - 1)])

    levels = [[] for _ in range(deg)]
    lin = stack[deg - 1]
    levels[deg - 1] = [-lin[0] / lin[1]]

    for l in range(deg - 2, -1, -1):
        al = stack[l]
        crit = levels[l + 1]
        bound = _cauchy_bound(al)
        for c in crit:
            if abs(c) >= bound:
                bound = abs(c) + 1.0
        pts = [-bound]
        pts.extend(crit)
        pts.append(bound)

        fvals = [_horner(al, p) for p in pts]
        roots = []
        for i in range(len(pts) - 1):
            fa, fb = fvals[i], fvals[i + 1]
            if fa == 0.0 or fb == 0.0:
                continue  # exact zero at a critical point: multiple root below
            if (fa < 0.0) != (fb < 0.0):
                roots.append(_refine(al, pts[i], pts[i + 1], fa, fb))

        scale0 = max(abs(c) for c in al)
        for c in crit:
            tol = EPS_ROOT * max(scale0, _abs_eval(al, c))
            if abs(_horner(al, c)) <= tol:
                roots = [r for r in roots
                         if abs(r - c) > _CLUSTER_REL * max(1.0, abs(c))]
                roots.append(c)

        roots.sort()
        merged = []
        for r in roots:
            if merged and r - merged[-1] <= _MERGE_REL * max(1.0, abs(r)):
                continue
            merged.append(r)
        levels[l] = merged
    return levels


def real_roots(coeffs):
    """Sorted real roots of the polynomial itself (ascending)."""
    a = np.asarray(coeffs, dtype=np.float64)
    if a.size < 2:
        return np.empty(0)
    return np.array(_roots_chain(a)[0], dtype=np.float64)


def chain_largest_roots(coeffs):
    """Largest real root per derivative level l = 0..deg-1.

    Returns ``(largest, has)``: float64 and uint8 arrays of length deg;
    ``largest[l]`` is NaN where the level has no real root.
    """
    a = np.asarray(coeffs, dtype=np.float64)
    deg = a.size - 1
    levels = _roots_chain(a)
    largest = np.full(deg, np.nan)
    has = np.zeros(deg, dtype=np.uint8)
    for l in range(deg):
        if levels[l]:
            largest[l] = levels[l][-1]
            has[l] = 1
    return largest, has


def sigma_table(values):
    """Elementary symmetric polynomials e_0..e_m of ``values`` (m entries)."""
    vals = np.asarray(values, dtype=np.float64)
    m = vals.size
    e = [0.0] * (m + 1)
    e[0] = 1.0
    for j in range(m):
        x = vals[j]
        for k in range(j + 1, 0, -1):
            e[k] += x * e[k - 1]
    return np.array(e)
