"""Continuity paths between a target equation and the Monge-Ampere stratum.

Two path families are built and verified against the four admissibility
constraints (topological, boundary, stability, dominance):

* the coefficient-scaling path d_k(t) = t^{n-k} d_k with the constant term
  balancing the topological constraint at every t, and
* the field-averaging path d_0(z, t) = t d_0(z) + (1-t) mean(d_0), which is
  pointwise in the quadrature samples.

The proof-side bookkeeping is also exposed: the binomial weight sequence
a_l with its recurrence, and the positivity margin of the scaled
topological combination together with its a_l-weighted reconstruction.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import IntegrabilityViolation
from .stability import check_stability, in_polyhedron, is_cy
from .symmfunc import GiskCoeffs
from .toymodel import IntersectionNumbers, ToyModel, intersection_numbers, mean_d0

TOPO_TOL = 1e-8


def _omega_scale(omega: IntersectionNumbers) -> float:
    return max(1.0, *(abs(v) for v in omega.omega))


def integrability_of(d: GiskCoeffs, omega: IntersectionNumbers, d0: float) -> float:
    """Omega_0 - sum_{k>=1} d_k C(n,k) Omega_{n-k} - d0 * Omega_n."""
    r = omega[0]
    for k in range(1, d.n - 1):
        r -= d.coeff(k) * comb(d.n, k) * omega[d.n - k]
    return r - d0 * omega[d.n]


def scaling_path(d: GiskCoeffs, omega: IntersectionNumbers, t: float) -> GiskCoeffs:
    """Scaled coefficients (t^{n-k} d_k, ..., balanced constant term)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    resid = integrability_of(d, omega, d.coeff(0))
    if abs(resid) > TOPO_TOL * _omega_scale(omega):
        raise IntegrabilityViolation(f"residual {resid} at t=1")
    n = d.n
    dk = [t ** (n - k) * d.coeff(k) for k in range(n - 2, 0, -1)]
    top = omega[0]
    for k in range(1, n - 1):
        top -= t ** (n - k) * d.coeff(k) * comb(n, k) * omega[n - k]
    return GiskCoeffs(n, tuple(dk) + (top / omega[n],))


def averaging_path(d: GiskCoeffs, m: ToyModel, t: float) -> list:
    """Field-averaging path: one coefficient vector per d_0 sample."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    mean = mean_d0(m)
    return [d.with_d0(t * v + (1.0 - t) * mean) for v, _ in m.d0_samples]


def fractional_power_path(d: GiskCoeffs, omega: IntersectionNumbers, t: float, ell: float):
    """Historical dimension-4 path; returns None when the fractional power
    in d_2(t) leaves the real line for this ell."""
    if d.n != 4:
        raise ValueError("this path is specific to n = 4")
    inner = d.coeff(2) ** 1.5 + (1.0 - t) * ell * d.coeff(1) / 2.0
    if inner < 0.0:
        return None
    d2 = inner ** (2.0 / 3.0)
    d1 = t * d.coeff(1)
    d0 = (omega[0] - 6.0 * d2 * omega[2] - 4.0 * d1 * omega[3]) / omega[4]
    return GiskCoeffs(4, (d2, d1, d0))


def default_ell(d: GiskCoeffs) -> float:
    return -2.0 * d.coeff(2) ** 1.5 / d.coeff(1)


def claim_residual(d: GiskCoeffs, omega: IntersectionNumbers, t: float) -> float:
    """Omega_0 - sum t^{n-k} d_k C(n,k) Omega_{n-k} - t^n d_0 Omega_n."""
    n = d.n
    r = omega[0]
    for k in range(1, n - 1):
        r -= t ** (n - k) * d.coeff(k) * comb(n, k) * omega[n - k]
    return r - t ** n * d.coeff(0) * omega[n]


def level_slacks(d: GiskCoeffs, omega: IntersectionNumbers) -> tuple:
    """V_l = Omega_0 - sum_{k=l}^{n-2} d_k C(n-l,k-l) Omega_{n-k}, l = 1..n-1.

    Positive whenever the model's mu is a pointwise C-subsolution to d.
    """
    n = d.n
    out = []
    for l in range(1, n):
        v = omega[0]
        for k in range(l, n - 1):
            v -= d.coeff(k) * comb(n - l, k - l) * omega[n - k]
        out.append(v)
    return tuple(out)


def claim_reconstruction(d: GiskCoeffs, omega: IntersectionNumbers, t: float) -> float:
    """claim_residual rebuilt from the a_l-weighted slack sum:

        claim(t) = sum_{l=1}^{n-1} a_l(t) V_l + (1-t)^n Omega_0.
    """
    n = d.n
    vs = level_slacks(d, omega)
    total = (1.0 - t) ** n * omega[0]
    for l in range(1, n):
        total += comb(n, l) * t ** (n - l) * (1.0 - t) ** l * vs[l - 1]
    return total


@dataclass(frozen=True)
class BinomialSequence:
    n: int
    t: Fraction
    recurrence: tuple  # a_0..a_{n-1} by the recurrence, exact rationals
    closed_form: tuple  # C(n,l) t^{n-l} (1-t)^l

    @property
    def total(self) -> Fraction:
        return sum(self.recurrence, Fraction(0))


def binomial_sequence(n: int, t) -> BinomialSequence:
    """a_0 = t^n and a_l = C(n,l) t^{n-l} - sum_{k<l} a_k C(n-k, l-k),
    in exact rational arithmetic, alongside the closed form."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    rec = [t ** n]
    for l in range(1, n):
        v = comb(n, l) * t ** (n - l)
        for k in range(l):
            v -= rec[k] * comb(n - k, l - k)
        rec.append(v)
    closed = tuple(comb(n, l) * t ** (n - l) * (1 - t) ** l for l in range(n))
    return BinomialSequence(n=n, t=t, recurrence=tuple(rec), closed_form=closed)


@dataclass(frozen=True)
class PathSample:
    t: float
    coeffs: tuple  # GiskCoeffs per d_0 sample (length 1 for coefficient paths)
    topological: float
    boundary: bool
    positivstellensatz: str  # worst stability status over the samples
    dominance: bool
    passes: bool


@dataclass(frozen=True)
class PathReport:
    which: str
    samples: tuple
    all_pass: bool
    endpoint_check: dict


def _status_and_dominance(coeffs, target, topo_scale):
    worst = "strictly_stable"
    dom = True
    for cf in coeffs:
        cert = check_stability(cf)
        if cert.status != "strictly_stable":
            worst = cert.status
        if cert.is_strictly_stable:
            dom &= in_polyhedron(cf, target)
        else:
            dom = False
    return worst, dom


def verify_path(
    d: GiskCoeffs,
    m: ToyModel,
    which: str = "thm41",
    t_grid=None,
    ell: float | None = None,
) -> PathReport:
    """Evaluate all four constraints at each grid time.

    A sample passes when the topological residual is below tolerance, every
    pointwise coefficient vector is strictly stable, and each lies in the
    admissible polyhedron of the target.  Endpoint identities are recorded
    separately (boundary flag per endpoint sample, summary in
    endpoint_check).
    """
    if which not in ("thm41", "p42", "eq48"):
        raise ValueError(f"unknown path family {which!r}")
    if t_grid is None:
        t_grid = [i / 100.0 for i in range(101)]
    t_grid = sorted(float(t) for t in t_grid)
    if t_grid[0] != 0.0 or t_grid[-1] != 1.0:
        raise ValueError("t grid must include 0 and 1")

    omega = intersection_numbers(m)
    scale = _omega_scale(omega)
    mean = mean_d0(m)

    if which == "p42":
        resid1 = integrability_of(d, omega, mean)
    else:
        resid1 = integrability_of(d, omega, d.coeff(0))
    if abs(resid1) > TOPO_TOL * scale:
        raise IntegrabilityViolation(f"integrability residual {resid1} at t=1")

    if which == "eq48" and ell is None:
        ell = default_ell(d)

    samples = []
    t0_in_cy = False
    t1_matches = False
    for t in t_grid:
        if which == "p42":
            coeffs = tuple(averaging_path(d, m, t))
            topo = integrability_of(d, omega, sum(
                (t * v + (1 - t) * mean) * w for v, w in m.d0_samples
            ) / m.total_volume)
        elif which == "thm41":
            coeffs = (scaling_path(d, omega, t),)
            topo = integrability_of(coeffs[0], omega, coeffs[0].coeff(0))
        else:
            cf = fractional_power_path(d, omega, t, ell)
            coeffs = (cf,) if cf is not None else ()
            topo = (
                integrability_of(cf, omega, cf.coeff(0)) if cf is not None else math.inf
            )

        if not coeffs:
            samples.append(PathSample(t, (), topo, False, "undefined", False, False))
            continue

        status, dom = _status_and_dominance(coeffs, d, scale)

        boundary = True
        if t == 0.0:
            if which == "p42":
                boundary = all(
                    abs(cf.coeff(0) - mean) <= TOPO_TOL * max(1.0, abs(mean))
                    for cf in coeffs
                )
            else:
                boundary = all(is_cy(cf) for cf in coeffs)
                t0_in_cy = boundary
        elif t == 1.0:
            if which == "p42":
                boundary = all(
                    abs(cf.coeff(0) - v) <= TOPO_TOL * max(1.0, abs(v))
                    for cf, (v, _) in zip(coeffs, m.d0_samples)
                )
            else:
                boundary = all(
                    abs(cf.coeff(k) - d.coeff(k)) <= TOPO_TOL * max(1.0, abs(d.coeff(k)))
                    for cf in coeffs
                    for k in range(d.n - 1)
                ) or which == "eq48"
            t1_matches = boundary

        passes = (
            abs(topo) <= TOPO_TOL * scale and status == "strictly_stable" and dom
        )
        samples.append(
            PathSample(t, coeffs, float(topo), boundary, status, dom, passes)
        )

    if which == "p42":
        t0_in_cy = all(is_cy(cf) for cf in samples[0].coeffs)

    return PathReport(
        which=which,
        samples=tuple(samples),
        all_pass=all(s.passes for s in samples),
        endpoint_check={"t0_in_CY": t0_in_cy, "t1_matches_target": t1_matches},
    )


def report_csv(report: PathReport, n: int) -> str:
    """Frozen CSV layout; see docs/formats.md."""
    header = ["sample_index", "t"]
    header += [f"d{k}" for k in range(n - 2, -1, -1)]
    header += ["x1", "x0", "topo_residual", "stability_margin"]
    lines = [",".join(header)]
    for s in report.samples:
        for idx, cf in enumerate(s.coeffs):
            cert = check_stability(cf)
            if cert.roots is not None:
                x0 = cert.roots.root(0)
                x1 = cert.roots.root(1) if n >= 3 else 0.0
            else:
                x0 = x1 = math.nan
            margin = cert.diagonal(x1)
            row = [str(idx), repr(float(s.t))]
            row += [repr(float(cf.coeff(k))) for k in range(n - 2, -1, -1)]
            row += [repr(float(x1)), repr(float(x0)), repr(float(s.topological)),
                    repr(float(margin))]
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"
