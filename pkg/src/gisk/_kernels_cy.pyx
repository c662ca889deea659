# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: real-root chains and elementary symmetric tables.

Behavioural twin of gisk._kernels_py (see there for the algorithm notes);
keep the two in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, NAN

cnp.import_array()

EPS_ROOT = 1e-12

cdef double _EPS_ROOT = 1e-12
cdef double _MERGE_REL = 1e-9
cdef double _CLUSTER_REL = 1e-6
cdef int _MAXIT = 200
cdef int _MAXDEG = 60


cdef double _horner(double* a, int n, double x) noexcept:
    cdef double r = 0.0
    cdef int i
    for i in range(n - 1, -1, -1):
        r = r * x + a[i]
    return r


cdef void _horner2(double* a, int n, double x, double* out_p, double* out_dp) noexcept:
    cdef double p = 0.0, dp = 0.0
    cdef int i
    for i in range(n - 1, -1, -1):
        dp = dp * x + p
        p = p * x + a[i]
    out_p[0] = p
    out_dp[0] = dp


cdef double _abs_eval(double* a, int n, double x) noexcept:
    cdef double ax = fabs(x)
    cdef double r = 0.0
    cdef int i
    for i in range(n - 1, -1, -1):
        r = r * ax + fabs(a[i])
    return r


cdef double _cauchy_bound(double* a, int n) noexcept:
    # min(Cauchy, Lagrange) upper bound for real root magnitudes
    cdef int deg = n - 1
    cdef double lead = fabs(a[deg])
    cdef double m = 0.0
    cdef double lag = 0.0
    cdef double r, cauchy
    cdef int i
    for i in range(deg):
        if fabs(a[i]) > m:
            m = fabs(a[i])
        if a[i] != 0.0:
            r = (fabs(a[i]) / lead) ** (1.0 / (deg - i))
            if r > lag:
                lag = r
    cauchy = 1.0 + m / lead
    if lag > 0.0 and 2.0 * lag < cauchy:
        return 2.0 * lag
    return cauchy


cdef double _refine(double* a, int n, double lo, double hi, double flo, double fhi) noexcept:
    # Newton within a sign-change bracket; bisection forced every other
    # step so the bracket halves at least once per two iterations.
    cdef double x = 0.5 * (lo + hi)
    cdef double f, df, xn, tol
    cdef int it
    for it in range(_MAXIT):
        _horner2(a, n, x, &f, &df)
        if f == 0.0:
            return x
        if (f < 0.0) == (flo < 0.0):
            lo = x
            flo = f
        else:
            hi = x
            fhi = f
        tol = 1.0 if fabs(x) < 1.0 else fabs(x)
        if hi - lo <= _EPS_ROOT * tol:
            break
        if (it & 1) == 0 and df != 0.0:
            xn = x - f / df
            if lo < xn < hi:
                x = xn
                continue
        x = 0.5 * (lo + hi)
    return 0.5 * (lo + hi)


cdef int _chain(double[::1] a, double* rootbuf, int* counts) except -1:
    """Real roots of each derivative level into rootbuf (stride deg+1)."""
    cdef int deg = a.shape[0] - 1
    cdef int stride = deg + 1
    # per-level coefficients: level l has deg+1-l entries
    cdef double coef[62][62]
    cdef double pts[64]
    cdef double fvals[64]
    cdef double found[64]
    cdef double c, bound, fa, fb, tol, scale0, r
    cdef int l, i, j, k, npts, nfound, nmerged, ncrit, n_l

    if deg > _MAXDEG:
        raise ValueError("polynomial degree exceeds kernel limit")

    for i in range(deg + 1):
        coef[0][i] = a[i]
    for l in range(1, deg):
        for i in range(deg - l + 1):
            coef[l][i] = coef[l - 1][i + 1] * (i + 1)

    # linear level
    rootbuf[(deg - 1) * stride] = -coef[deg - 1][0] / coef[deg - 1][1]
    counts[deg - 1] = 1

    for l in range(deg - 2, -1, -1):
        n_l = deg + 1 - l
        ncrit = counts[l + 1]
        bound = _cauchy_bound(&coef[l][0], n_l)
        for i in range(ncrit):
            c = rootbuf[(l + 1) * stride + i]
            if fabs(c) >= bound:
                bound = fabs(c) + 1.0
        npts = 0
        pts[npts] = -bound; npts += 1
        for i in range(ncrit):
            pts[npts] = rootbuf[(l + 1) * stride + i]; npts += 1
        pts[npts] = bound; npts += 1

        for i in range(npts):
            fvals[i] = _horner(&coef[l][0], n_l, pts[i])

        nfound = 0
        for i in range(npts - 1):
            fa = fvals[i]
            fb = fvals[i + 1]
            if fa == 0.0 or fb == 0.0:
                continue
            if (fa < 0.0) != (fb < 0.0):
                found[nfound] = _refine(&coef[l][0], n_l, pts[i], pts[i + 1], fa, fb)
                nfound += 1

        scale0 = 0.0
        for i in range(n_l):
            if fabs(coef[l][i]) > scale0:
                scale0 = fabs(coef[l][i])
        for i in range(ncrit):
            c = rootbuf[(l + 1) * stride + i]
            tol = _abs_eval(&coef[l][0], n_l, c)
            if tol < scale0:
                tol = scale0
            if fabs(_horner(&coef[l][0], n_l, c)) <= _EPS_ROOT * tol:
                # drop bracketed roots in the same double-root cluster
                tol = 1.0 if fabs(c) < 1.0 else fabs(c)
                j = 0
                for k in range(nfound):
                    if fabs(found[k] - c) > _CLUSTER_REL * tol:
                        found[j] = found[k]
                        j += 1
                nfound = j
                found[nfound] = c
                nfound += 1

        # insertion sort (nfound <= deg)
        for i in range(1, nfound):
            r = found[i]
            j = i - 1
            while j >= 0 and found[j] > r:
                found[j + 1] = found[j]
                j -= 1
            found[j + 1] = r

        nmerged = 0
        for i in range(nfound):
            r = found[i]
            tol = 1.0 if fabs(r) < 1.0 else fabs(r)
            if nmerged > 0 and r - rootbuf[l * stride + nmerged - 1] <= _MERGE_REL * tol:
                continue
            rootbuf[l * stride + nmerged] = r
            nmerged += 1
        counts[l] = nmerged
    return 0


def real_roots(coeffs):
    """Sorted real roots of the polynomial itself (ascending)."""
    cdef double[::1] a = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef int deg = a.shape[0] - 1
    if deg < 1:
        return np.empty(0)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] buf = np.empty((deg, deg + 1))
    cdef cnp.ndarray[cnp.int32_t, ndim=1] counts = np.zeros(deg, dtype=np.int32)
    _chain(a, <double*> buf.data, <int*> counts.data)
    return buf[0, :counts[0]].copy()


def chain_largest_roots(coeffs):
    """Largest real root per derivative level l = 0..deg-1 -> (largest, has)."""
    cdef double[::1] a = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef int deg = a.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] buf = np.empty((deg, deg + 1))
    cdef cnp.ndarray[cnp.int32_t, ndim=1] counts = np.zeros(deg, dtype=np.int32)
    _chain(a, <double*> buf.data, <int*> counts.data)
    largest = np.full(deg, np.nan)
    has = np.zeros(deg, dtype=np.uint8)
    cdef int l
    for l in range(deg):
        if counts[l] > 0:
            largest[l] = buf[l, counts[l] - 1]
            has[l] = 1
    return largest, has


def sigma_table(values):
    """Elementary symmetric polynomials e_0..e_m of ``values`` (m entries)."""
    cdef double[::1] vals = np.ascontiguousarray(values, dtype=np.float64)
    cdef int m = vals.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e = np.zeros(m + 1)
    cdef double* ep = <double*> e.data
    cdef double x
    cdef int j, k
    ep[0] = 1.0
    for j in range(m):
        x = vals[j]
        for k in range(j + 1, 0, -1):
            ep[k] += x * ep[k - 1]
    return e
