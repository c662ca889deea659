"""Elementary symmetric polynomials and the multilinear polynomial machinery.

A reduced coefficient vector c = (d_{n-2}, ..., d_1, d_0) defines

    f_c(lambda) = lambda_1 ... lambda_n - sum_{k=0}^{n-2} d_k sigma_k(lambda)

whose diagonal restriction x^n - sum_k d_k C(n,k) x^k carries the stability
theory (gisk.stability).  This module evaluates f_c, its partial
derivatives, level-set completions, and the normalized ratio

    h_c(lambda) = sum_k d_k sigma_k(lambda) / (lambda_1 ... lambda_n)

with its first and second derivatives in closed form.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import backend
from .errors import (
    DegenerateDenominator,
    DimensionMismatch,
    IndexOutOfRange,
    NonpositiveEigenvalue,
)
from .unipoly import EPS_CMP, UniPoly


@dataclass
class GiskCoeffs:
    """Reduced coefficients (d_{n-2}, ..., d_1, d_0); the sigma_{n-1} slot is 0.

    ``verified_stable`` caches a passed strict stability test; it is set by
    gisk.stability.check_stability and never by constructors.
    """

    n: int
    d: tuple  # stored high-index first: d[j] = d_{n-2-j}
    verified_stable: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise DimensionMismatch("dimension n must be >= 2")
        d = tuple(float(v) for v in self.d)
        if len(d) != self.n - 1:
            raise DimensionMismatch(
                f"expected {self.n - 1} reduced coefficients, got {len(d)}"
            )
        object.__setattr__(self, "d", d)

    def coeff(self, k: int) -> float:
        """d_k for k in 0..n-2."""
        return self.d[self.n - 2 - k]

    def ascending(self) -> np.ndarray:
        """(d_0, d_1, ..., d_{n-2})."""
        return np.array(self.d[::-1])

    def diagonal(self) -> UniPoly:
        """Diagonal restriction x^n - sum_k d_k C(n,k) x^k."""
        a = [0.0] * (self.n + 1)
        a[self.n] = 1.0
        for k in range(self.n - 1):
            a[k] = -self.coeff(k) * comb(self.n, k)
        return UniPoly.from_coeffs(a)

    def slice(self, l: int) -> "GiskCoeffs":
        """Coefficients of the l-th partial derivative polynomial.

        Dropping l variables from f_c leaves a degree n-l polynomial of the
        same shape with reduced coefficients (d_{n-2}, ..., d_l).
        """
        if not 1 <= l <= self.n - 2:
            raise IndexOutOfRange(f"slice level {l} out of range for n={self.n}")
        return GiskCoeffs(self.n - l, self.d[: self.n - 1 - l])

    def with_d0(self, d0: float) -> "GiskCoeffs":
        return GiskCoeffs(self.n, self.d[:-1] + (float(d0),))


@dataclass(frozen=True)
class FullCoeffs:
    """Unreduced coefficients (c_{n-1}, ..., c_1, c_0)."""

    n: int
    c: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        if len(c) != self.n:
            raise DimensionMismatch(f"expected {self.n} coefficients, got {len(c)}")
        object.__setattr__(self, "c", c)

    def coeff(self, k: int) -> float:
        return self.c[self.n - 1 - k]

    def diagonal(self) -> UniPoly:
        a = [0.0] * (self.n + 1)
        a[self.n] = 1.0
        for k in range(self.n):
            a[k] = -self.coeff(k) * comb(self.n, k)
        return UniPoly.from_coeffs(a)


def as_lambda(values, n=None) -> np.ndarray:
    lam = np.asarray(values, dtype=np.float64)
    if lam.ndim != 1 or lam.size < 2:
        raise DimensionMismatch("eigenvalue vector must be 1-d with n >= 2")
    if n is not None and lam.size != n:
        raise DimensionMismatch(f"expected {n} eigenvalues, got {lam.size}")
    return lam


def sigma(k: int, values, excluded=()) -> float:
    """k-th elementary symmetric polynomial of the non-excluded entries."""
    lam = as_lambda(values)
    n = lam.size
    excluded = tuple(excluded)
    if len(set(excluded)) != len(excluded):
        raise IndexOutOfRange("excluded indices must be distinct")
    for i in excluded:
        if not 0 <= i < n:
            raise IndexOutOfRange(f"excluded index {i} out of range")
    rest = np.delete(lam, excluded) if excluded else lam
    if k < 0 or k > rest.size:
        raise IndexOutOfRange(f"sigma_{k} undefined on {rest.size} entries")
    return float(backend.sigma_table(rest)[k])


def sigma_batch(pts: np.ndarray) -> np.ndarray:
    """Row-wise elementary symmetric tables: (m, p) -> (m, p+1)."""
    pts = np.asarray(pts, dtype=np.float64)
    m, p = pts.shape
    e = np.zeros((m, p + 1))
    e[:, 0] = 1.0
    for j in range(p):
        x = pts[:, j : j + 1]
        e[:, 1 : j + 2] += x * e[:, 0 : j + 1]
    return e


def f_eval(c: GiskCoeffs, values) -> float:
    """f_c(lambda) = prod(lambda) - sum_{k<=n-2} d_k sigma_k(lambda)."""
    lam = as_lambda(values, c.n)
    e = backend.sigma_table(lam)
    return float(e[c.n] - c.ascending() @ e[: c.n - 1])


def f_eval_batch(c: GiskCoeffs, pts: np.ndarray) -> np.ndarray:
    pts = np.asarray(pts, dtype=np.float64)
    if pts.shape[1] != c.n:
        raise DimensionMismatch("points have wrong width")
    e = sigma_batch(pts)
    return e[:, c.n] - e[:, : c.n - 1] @ c.ascending()


def f_partial(c: GiskCoeffs, values, indices) -> float:
    """l-th partial derivative of f_c in the given (distinct) variables."""
    lam = as_lambda(values, c.n)
    idx = tuple(indices)
    l = len(idx)
    if not 1 <= l <= c.n - 1:
        raise IndexOutOfRange("need 1 <= l <= n-1 indices")
    if len(set(idx)) != l:
        raise IndexOutOfRange("partial-derivative indices must be distinct")
    for i in idx:
        if not 0 <= i < c.n:
            raise IndexOutOfRange(f"index {i} out of range")
    rest = np.delete(lam, idx)
    if l == c.n - 1:
        return float(rest[0])
    sub = c.slice(l)
    e = backend.sigma_table(rest)
    return float(e[sub.n] - sub.ascending() @ e[: sub.n - 1])


def solve_for_last(c: GiskCoeffs, lam_head) -> float:
    """Complete (lambda_1..lambda_{n-1}) to a level-set point of f_c.

    f_c is linear in the last variable:
        lambda_n = sum_k d_k sigma_k(head) /
                   (prod(head) - sum_{k>=1} d_k sigma_{k-1}(head)).
    """
    head = np.asarray(lam_head, dtype=np.float64)
    if head.size != c.n - 1:
        raise DimensionMismatch(f"expected {c.n - 1} leading eigenvalues")
    e = backend.sigma_table(head)
    asc = c.ascending()
    num = float(asc @ e[: c.n - 1])
    den = float(e[c.n - 1] - asc[1:] @ e[: c.n - 2])
    scale = max(1.0, abs(e[c.n - 1]), float(np.abs(asc[1:] * e[: c.n - 2]).sum()))
    if den <= EPS_CMP * scale:
        raise DegenerateDenominator(f"denominator {den} too small")
    return num / den


@dataclass(frozen=True)
class HEval:
    h: float
    grad: np.ndarray
    hess: np.ndarray


def h_eval(c: GiskCoeffs, values) -> HEval:
    """h_c and its derivatives at lambda (all entries > 0).

    h_i  = -sum_k d_k sigma_k(lambda_{;i}) / (prod * lambda_i)
    h_ij =  sum_k d_k sigma_k(lambda_{;i,j}) (1 + delta_ij) / (prod li lj)

    with sigma_k(lambda_{;i,i}) read as sigma_k(lambda_{;i}); under that
    convention the closed forms are the true first and second partials.
    """
    lam = as_lambda(values, c.n)
    if np.any(lam <= 0.0):
        raise NonpositiveEigenvalue("h_c requires all eigenvalues > 0")
    n = c.n
    asc = c.ascending()
    prod = float(np.prod(lam))
    h = float(asc @ backend.sigma_table(lam)[: n - 1]) / prod

    s_excl = np.empty(n)
    for i in range(n):
        e = backend.sigma_table(np.delete(lam, i))
        s_excl[i] = asc @ e[: n - 1]
    grad = -s_excl / (prod * lam)

    hess = np.empty((n, n))
    for i in range(n):
        hess[i, i] = 2.0 * s_excl[i] / (prod * lam[i] * lam[i])
        for j in range(i + 1, n):
            e = backend.sigma_table(np.delete(lam, (i, j)))
            s_ij = float(asc @ e[: n - 1]) if n >= 2 else 0.0
            v = s_ij / (prod * lam[i] * lam[j])
            hess[i, j] = v
            hess[j, i] = v
    dev = float(np.max(np.abs(hess - hess.T)))
    assert dev < 1e-10 * max(1.0, float(np.max(np.abs(hess)))), dev
    return HEval(h=h, grad=grad, hess=hess)


def sample_level_set(
    c: GiskCoeffs,
    count: int,
    rng: np.random.Generator,
    lo_exp: float = -1.0,
    hi_exp: float = 3.0,
    sort_desc: bool = True,
) -> np.ndarray:
    """Seeded points on {f_c = 0} inside the stable branch.

    Heads are drawn log-uniform in [x_0 10^lo_exp, x_0 10^hi_exp] and
    completed with solve_for_last; draws with a degenerate denominator, a
    nonpositive completion, or any nonpositive first partial are rejected.
    Closure members (tied first gap) are accepted: the stated inequalities
    are closure statements.
    """
    from . import stability  # local import: stability builds on this module

    x0 = stability.closure_roots(c).root(0)
    n = c.n
    asc = c.ascending()
    out = np.empty((count, n))
    got = 0
    attempts = 0
    while got < count:
        attempts += 1
        if attempts > 200:
            raise DegenerateDenominator(
                "level-set sampler kept rejecting; coefficient vector too degenerate"
            )
        m = max(32, 2 * (count - got))
        heads = x0 * 10.0 ** rng.uniform(lo_exp, hi_exp, size=(m, n - 1))
        e = sigma_batch(heads)
        num = e[:, : n - 1] @ asc
        den = e[:, n - 1] - e[:, : n - 2] @ asc[1:]
        scale = np.maximum(1.0, np.abs(e[:, n - 1]))
        ok = den > EPS_CMP * scale
        lam_n = np.where(ok, num / np.where(ok, den, 1.0), -1.0)
        ok &= lam_n > 0.0
        pts = np.column_stack([heads, lam_n])[ok]
        if pts.shape[0] == 0:
            continue
        # keep only points with every first partial positive (stable branch)
        keep = np.ones(pts.shape[0], dtype=bool)
        for i in range(n):
            rest = np.delete(pts, i, axis=1)
            er = sigma_batch(rest)
            if n == 2:
                fi = er[:, 1]
            else:
                sub = c.slice(1)
                fi = er[:, n - 1] - er[:, : n - 2] @ sub.ascending()
            keep &= fi > 0.0
        # certify the stable branch: every coefficient of f(lambda + s*1) in s
        # must be positive, so the upward diagonal ray stays in the positive
        # region and joins the far-diagonal component.  (Equal to the sum of
        # all k-th partials; positive on the genuine boundary, where every
        # partial of every order is positive.)
        ep = sigma_batch(pts)
        for k in range(1, n):
            ak = ep[:, n - k].copy()
            for j in range(k, n - 1):
                ak -= c.coeff(j) * comb(n - j + k, k) * ep[:, j - k]
            keep &= ak > 0.0
        pts = pts[keep]
        take = min(count - got, pts.shape[0])
        out[got : got + take] = pts[:take]
        got += take
    if sort_desc:
        out = -np.sort(-out, axis=1)
    return out
