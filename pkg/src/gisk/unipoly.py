"""Dense real univariate polynomials and the right-Noetherian tests.

A polynomial is right-Noetherian when every derivative level has a real
root at least as large as the largest real root of the next derivative,
and strictly so when the top-level gap x_0 > x_1 is strict.  The root
chain x_0 >= x_1 >= ... is the univariate shadow of the stability of the
multilinear polynomials handled in gisk.stability.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from . import backend
from .errors import NoRealRoot

EPS_ROOT = 1e-12
EPS_CMP = 1e-9


def _cmp_scale(*vals):
    return max(1.0, *(abs(v) for v in vals))


@dataclass(frozen=True)
class UniPoly:
    """Dense real polynomial; coeffs[i] multiplies x**i, trailing zeros trimmed."""

    coeffs: tuple

    @classmethod
    def from_coeffs(cls, seq):
        c = [float(v) for v in seq]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        if not c:
            c = [0.0]
        return cls(tuple(c))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return self.degree == 0 and self.coeffs[0] == 0.0

    def __call__(self, x):
        r = 0.0
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def scale(self):
        return max(abs(c) for c in self.coeffs)


def derivative(p: UniPoly, l: int = 1) -> UniPoly:
    """Exact coefficient-wise l-th derivative; l > degree gives zero."""
    if l < 0:
        raise ValueError("derivative order must be nonnegative")
    c = list(p.coeffs)
    for _ in range(l):
        c = [c[i + 1] * (i + 1) for i in range(len(c) - 1)]
        if not c:
            return UniPoly.from_coeffs([0.0])
    return UniPoly.from_coeffs(c)


def taylor_shift(p: UniPoly, a: float) -> UniPoly:
    """q with q(x) = p(x + a), by exact binomial expansion."""
    n = p.degree
    out = [0.0] * (n + 1)
    for i, ci in enumerate(p.coeffs):
        if ci == 0.0:
            continue
        pw = 1.0  # a^(i-j), starting at j = i
        for j in range(i, -1, -1):
            # ci * (x+a)^i contributes ci * C(i,j) * a^(i-j) to x^j
            out[j] += ci * comb(i, j) * pw
            pw *= a
    return UniPoly.from_coeffs(out)


def real_roots(p: UniPoly) -> np.ndarray:
    """All real roots, ascending, refined to EPS_ROOT relative."""
    if p.degree < 1:
        return np.empty(0)
    return backend.real_roots(np.array(p.coeffs))


def largest_real_root(p: UniPoly) -> float:
    """Largest x with |p(x)| below the root tolerance at x.

    Roots are certified either by a sign change or, for even multiplicity,
    by a critical point where |p| dips below EPS_ROOT * scale.
    """
    if p.degree < 1:
        raise NoRealRoot("degree must be >= 1")
    roots = real_roots(p)
    if roots.size == 0:
        raise NoRealRoot(f"no real root: {p.coeffs}")
    return float(roots[-1])


@dataclass(frozen=True)
class RootReport:
    """Largest real root per derivative level l = 0..n-1 of a degree-n input."""

    largest: tuple  # float or None per level
    has_real_root: tuple  # bool per level

    def root(self, l):
        return self.largest[l]


@dataclass(frozen=True)
class RnReport:
    is_rn: bool
    is_strict: bool
    boundary: bool  # |x_0 - x_1| within EPS_CMP: strictness undecidable
    roots: RootReport


def right_noetherian_report(p: UniPoly) -> RnReport:
    """Check the descending root-chain condition over all derivative levels.

    is_rn: every level l in {0..n-2} has a real root >= the largest real
    root of level l+1 (within EPS_CMP).  is_strict additionally requires
    x_0 > x_1 by more than EPS_CMP.
    """
    n = p.degree
    if n < 2:
        raise ValueError("right-Noetherian test requires degree >= 2")
    largest, has = backend.chain_largest_roots(np.array(p.coeffs))
    rep = RootReport(
        largest=tuple(float(largest[l]) if has[l] else None for l in range(n)),
        has_real_root=tuple(bool(has[l]) for l in range(n)),
    )
    is_rn = True
    for l in range(n - 1):
        if not (has[l] and has[l + 1]):
            is_rn = False
            break
        if largest[l] < largest[l + 1] - EPS_CMP * _cmp_scale(largest[l], largest[l + 1]):
            is_rn = False
            break
    is_strict = False
    boundary = False
    if is_rn:
        gap = largest[0] - largest[1]
        tol = EPS_CMP * _cmp_scale(largest[0], largest[1])
        if gap > tol:
            is_strict = True
        elif gap != 0.0:
            boundary = True
    return RnReport(is_rn=is_rn, is_strict=is_strict, boundary=boundary, roots=rep)
