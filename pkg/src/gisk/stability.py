"""Stability tests and the coefficient/root correspondence.

A reduced coefficient vector is strictly stable exactly when its diagonal
restriction is strictly right-Noetherian; the per-level largest roots
(x_{n-2}, ..., x_1, x_0) then determine the coefficients and vice versa
(phi/psi below are mutually inverse).  Cone membership, dominance and the
admissible polyhedron are all decided through those roots.
"""

import math
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import backend
from .errors import InvalidRootTuple, NotStable, NotStrictlyStable
from .symmfunc import GiskCoeffs, as_lambda, f_eval_batch, f_partial
from .unipoly import EPS_CMP, UniPoly

STRICTLY_STABLE = "strictly_stable"
STABLE_NONSTRICT = "stable_nonstrict"
UNSTABLE = "unstable"
BOUNDARY = "boundary"

_SEGMENT_SAMPLES = 64


def _scale(*vals):
    return max(1.0, *(abs(v) for v in vals))


@dataclass(frozen=True)
class RootTuple:
    """(x_{n-2}, ..., x_1, x_0): largest real roots of derivative levels."""

    n: int
    x: tuple  # stored high-index first: x[j] = x_{n-2-j}, so x[-1] = x_0

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        if len(x) != self.n - 1:
            raise InvalidRootTuple(f"expected {self.n - 1} roots, got {len(x)}")
        object.__setattr__(self, "x", x)
        desc = x[::-1]  # (x_0, x_1, ..., x_{n-2})
        for a, b in zip(desc, desc[1:]):
            if a < b - EPS_CMP * _scale(a, b):
                raise InvalidRootTuple(f"roots not descending: {desc}")
        if desc[-1] < -EPS_CMP * _scale(desc[-1]):
            raise InvalidRootTuple(f"x_{self.n - 2} must be >= 0: {desc[-1]}")

    def root(self, l: int) -> float:
        """x_l for l in 0..n-2."""
        return self.x[self.n - 2 - l]

    @property
    def strict_first_gap(self) -> bool:
        if self.n == 2:
            return self.root(0) > EPS_CMP
        x0, x1 = self.root(0), self.root(1)
        return x0 - x1 > EPS_CMP * _scale(x0, x1)


@dataclass(frozen=True)
class Strata:
    dimension: int
    signature: tuple  # booleans: x_l > x_{l+1} strict, l = 1..n-2 (x_{n-1} = 0)


@dataclass(frozen=True)
class StabilityCertificate:
    status: str
    roots: RootTuple | None
    diagonal: UniPoly
    strata: Strata | None

    @property
    def is_strictly_stable(self):
        return self.status == STRICTLY_STABLE


@dataclass(frozen=True)
class DominanceVerdict:
    dominates: bool
    per_level_slack: tuple


def check_stability(c: GiskCoeffs) -> StabilityCertificate:
    """Classify c by running the root-chain test on its diagonal restriction.

    strictly_stable: descending chain with x_0 - x_1 beyond EPS_CMP;
    boundary: chain holds but the first gap is within EPS_CMP of a tie;
    stable_nonstrict: chain holds with an exact tie; unstable otherwise.
    """
    diag = c.diagonal()
    largest, has = backend.chain_largest_roots(np.array(diag.coeffs))
    n = c.n

    ok = all(has[: n])
    if ok:
        for l in range(n - 1):
            if largest[l] < largest[l + 1] - EPS_CMP * _scale(largest[l], largest[l + 1]):
                ok = False
                break
    if not ok:
        return StabilityCertificate(UNSTABLE, None, diag, None)

    gap = largest[0] - largest[1]
    tol = EPS_CMP * _scale(largest[0], largest[1])
    if gap > tol:
        status = STRICTLY_STABLE
    elif gap == 0.0:
        status = STABLE_NONSTRICT
    else:
        status = BOUNDARY

    roots = RootTuple(n, tuple(float(largest[l]) for l in range(n - 2, -1, -1)))
    sig = []
    for l in range(1, n - 1):
        xl, xl1 = largest[l], largest[l + 1]
        sig.append(bool(xl - xl1 > EPS_CMP * _scale(xl, xl1)))
    strata = Strata(dimension=1 + sum(sig), signature=tuple(sig))
    if status == STRICTLY_STABLE:
        c.verified_stable = True
    return StabilityCertificate(status, roots, diag, strata)


def ensure_strictly_stable(c: GiskCoeffs) -> None:
    if c.verified_stable:
        return
    cert = check_stability(c)
    if not cert.is_strictly_stable:
        raise NotStrictlyStable(f"status={cert.status} for d={c.d}")


def phi(c: GiskCoeffs) -> RootTuple:
    """Coefficients -> largest roots of derivative levels n-2 down to 0."""
    ensure_strictly_stable(c)
    largest, _ = backend.chain_largest_roots(np.array(c.diagonal().coeffs))
    return RootTuple(c.n, tuple(float(largest[l]) for l in range(c.n - 2, -1, -1)))


def psi(x: RootTuple) -> GiskCoeffs:
    """Roots -> coefficients via the descending recursion

        c_l = x_l^{n-l} - sum_{k=l+1}^{n-2} c_k C(n-l, k-l) x_l^{k-l}.

    Closure tuples (ties allowed) are accepted; the result is strictly
    stable exactly when the input has a strict first gap.
    """
    n = x.n
    ck = {}
    for l in range(n - 2, -1, -1):
        xl = x.root(l)
        acc = xl ** (n - l)
        for k in range(l + 1, n - 1):
            acc -= ck[k] * comb(n - l, k - l) * xl ** (k - l)
        ck[l] = acc
    return GiskCoeffs(n, tuple(ck[l] for l in range(n - 2, -1, -1)))


def _segment_positive(sub: GiskCoeffs, rest: np.ndarray, far: float) -> bool:
    """f_sub > 0 along the straight segment from rest to the diagonal point."""
    s = np.linspace(0.0, 1.0, _SEGMENT_SAMPLES)[:, None]
    seg = rest[None, :] * (1.0 - s) + far * s
    return bool(np.all(f_eval_batch(sub, seg) > 0.0))


def upsilon_cone_membership(c: GiskCoeffs, values, l: int) -> bool:
    """Membership of lambda in the Upsilon_l cone of f_c.

    Every size-l partial derivative must be positive at lambda, and the
    remaining variables must connect to the far diagonal ray through the
    positive region (sampled straight segment; exact for strictly stable
    slices, whose positive component is convex).
    """
    ensure_strictly_stable(c)
    lam = as_lambda(values, c.n)
    n = c.n
    if not 1 <= l <= n - 1:
        raise ValueError(f"cone level {l} out of range")
    if l == n - 1:
        return bool(np.all(lam > 0.0))
    x0 = phi(c).root(0)
    far = x0 + 10.0 * (x0 + float(np.max(np.abs(lam))) + 1.0)
    sub = c.slice(l)
    for s_idx in combinations(range(n), l):
        rest = np.delete(lam, s_idx)
        val = f_partial(c, lam, s_idx)
        if val <= EPS_CMP * _scale(float(np.prod(rest))):
            return False
        if not _segment_positive(sub, rest, far):
            return False
    return True


def is_c_subsolution_point(c: GiskCoeffs, mu) -> bool:
    """Pointwise C-subsolution test: mu in the Upsilon_1 cone of f_c."""
    return upsilon_cone_membership(c, mu, 1)


def _diag_derivative_coeffs(c: GiskCoeffs, l: int) -> np.ndarray:
    a = np.array(c.diagonal().coeffs)
    for _ in range(l):
        a = a[1:] * np.arange(1, a.size)
    return a


def dominance(c: GiskCoeffs, d: GiskCoeffs) -> DominanceVerdict:
    """Does the Upsilon_1 cone of d sit inside the Upsilon_1 cone of c?

    Equivalent to r_c^{(l)}(x_l(d)) >= 0 for l = 1..n-2; slacks are reported
    monic-normalized, i.e. divided by the leading factor n!/(n-l)!.
    """
    ensure_strictly_stable(c)
    ensure_strictly_stable(d)
    if c.n != d.n:
        raise InvalidRootTuple("dominance requires equal dimensions")
    xd = phi(d)
    slacks = []
    ok = True
    for l in range(1, c.n - 1):
        a = _diag_derivative_coeffs(c, l)
        xl = xd.root(l)
        val = 0.0
        for coeff in a[::-1]:
            val = val * xl + coeff
        lead = math.factorial(c.n) / math.factorial(c.n - l)
        slacks.append(float(val / lead))
        if val < -EPS_CMP * lead * _scale(xl) ** (c.n - l):
            ok = False
    return DominanceVerdict(dominates=ok, per_level_slack=tuple(slacks))


def in_polyhedron(c: GiskCoeffs, d: GiskCoeffs) -> bool:
    """The admissible-polyhedron system in c's coefficients at d's roots:

        x_l^{n-l}(d) - sum_{k=l}^{n-2} c_k C(n-l,k-l) x_l^{k-l}(d) >= 0
    """
    ensure_strictly_stable(c)
    ensure_strictly_stable(d)
    if c.n != d.n:
        raise InvalidRootTuple("polyhedron test requires equal dimensions")
    xd = phi(d)
    n = c.n
    for l in range(1, n - 1):
        xl = xd.root(l)
        s = xl ** (n - l)
        for k in range(l, n - 1):
            s -= c.coeff(k) * comb(n - l, k - l) * xl ** (k - l)
        if s < -EPS_CMP * _scale(xl) ** (n - l):
            return False
    return True


def is_cy(c: GiskCoeffs) -> bool:
    """Monge-Ampere stratum: upper coefficients ~0 and positive constant."""
    c0 = c.coeff(0)
    upper = max((abs(c.coeff(k)) for k in range(1, c.n - 1)), default=0.0)
    return upper <= EPS_CMP * (1.0 + abs(c0)) and c0 > 0.0


def tee(c: GiskCoeffs) -> float:
    """Largest scaling t keeping x_0 above x_1(t); inf exactly on the
    Monge-Ampere stratum, else x_0^{n-1} / sum_{k>=1} c_k C(n-1,k-1) x_0^{k-1}.
    """
    ensure_strictly_stable(c)
    if is_cy(c):
        return math.inf
    x0 = phi(c).root(0)
    den = 0.0
    for k in range(1, c.n - 1):
        den += c.coeff(k) * comb(c.n - 1, k - 1) * x0 ** (k - 1)
    if den <= 0.0:
        raise NotStable(f"scaling denominator {den} nonpositive; inconsistent input")
    return x0 ** (c.n - 1) / den


def closure_roots(c: GiskCoeffs) -> RootTuple:
    """Per-level roots for a coefficient vector in the stability closure."""
    cert = check_stability(c)
    if cert.status == UNSTABLE:
        raise NotStable(f"not in the stability closure: d={c.d}")
    return cert.roots


def scale_roots(c: GiskCoeffs, t: float) -> RootTuple:
    """Roots of the scaled coefficients t*c for t >= 1."""
    if t < 1.0:
        raise ValueError("scaling requires t >= 1")
    scaled = GiskCoeffs(c.n, tuple(t * v for v in c.d))
    return closure_roots(scaled)


def boundary_touch(c: GiskCoeffs, l: int) -> bool:
    """True when x_l and x_{l+1} coincide within tolerance (x_{n-1} = 0)."""
    if not 0 <= l <= c.n - 2:
        raise ValueError(f"level {l} out of range")
    roots = closure_roots(c)
    xl = roots.root(l)
    xl1 = roots.root(l + 1) if l + 1 <= c.n - 2 else 0.0
    return abs(xl - xl1) <= EPS_CMP * _scale(xl, xl1)
