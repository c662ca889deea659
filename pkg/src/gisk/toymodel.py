"""Constant-eigenvalue toy model: intersection numbers and subsolution slack.

The model replaces manifold integration by finite quadrature.  A constant
C-subsolution with eigenvalues mu gives the wedge-power numbers

    Omega_i = volume * sigma_{n-i}(mu) / C(n, n-i),

and a weighted sample set stands in for the d_0(z) field; that is all the
continuity-path constraints consume.  This is declared openly as a model,
not a discretized manifold.
"""

import json
from dataclasses import dataclass
from math import comb

import numpy as np

from . import backend
from .errors import DimensionMismatch, NotSubsolution
from .symmfunc import GiskCoeffs
from .stability import is_c_subsolution_point

KAPPA_BISECT_TOL = 1e-9


@dataclass(frozen=True)
class ToyModel:
    n: int
    mu: tuple  # constant C-subsolution eigenvalues, all > 0
    d0_samples: tuple  # ((value, weight), ...), weights sum to total_volume
    total_volume: float = 1.0

    def __post_init__(self):
        mu = tuple(float(v) for v in self.mu)
        samples = tuple((float(v), float(w)) for v, w in self.d0_samples)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "d0_samples", samples)
        if self.n < 2 or len(mu) != self.n:
            raise DimensionMismatch("mu must have n >= 2 entries")
        if any(m <= 0.0 for m in mu):
            raise ValueError("all mu entries must be > 0")
        if not samples:
            raise ValueError("need at least one d_0 sample")
        if any(w <= 0.0 for _, w in samples):
            raise ValueError("weights must be positive")
        wsum = sum(w for _, w in samples)
        if abs(wsum - self.total_volume) > 1e-12 * max(1.0, self.total_volume):
            raise ValueError(f"weights sum to {wsum}, expected {self.total_volume}")

    @classmethod
    def from_json(cls, text: str) -> "ToyModel":
        obj = json.loads(text)
        return cls(
            n=int(obj["n"]),
            mu=tuple(obj["mu"]),
            d0_samples=tuple((s["v"], s["w"]) for s in obj["d0"]),
            total_volume=float(obj.get("volume", 1.0)),
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": 1,
                "n": self.n,
                "mu": list(self.mu),
                "d0": [{"v": v, "w": w} for v, w in self.d0_samples],
                "volume": self.total_volume,
            }
        )


@dataclass(frozen=True)
class IntersectionNumbers:
    omega: tuple  # (Omega_0, ..., Omega_n)

    def __getitem__(self, i):
        return self.omega[i]

    @property
    def n(self):
        return len(self.omega) - 1


def intersection_numbers(m: ToyModel) -> IntersectionNumbers:
    e = backend.sigma_table(np.array(m.mu))
    om = tuple(
        m.total_volume * float(e[m.n - i]) / comb(m.n, m.n - i)
        for i in range(m.n + 1)
    )
    return IntersectionNumbers(om)


def mean_d0(m: ToyModel) -> float:
    return sum(v * w for v, w in m.d0_samples) / m.total_volume


def integrability_residual(m: ToyModel, c: GiskCoeffs) -> float:
    """Omega_0 - sum_{k=1}^{n-2} d_k C(n,k) Omega_{n-k} - mean(d_0) Omega_n."""
    if c.n != m.n:
        raise DimensionMismatch("model and coefficients disagree on n")
    om = intersection_numbers(m)
    r = om[0]
    for k in range(1, c.n - 1):
        r -= c.coeff(k) * comb(c.n, k) * om[c.n - k]
    return r - mean_d0(m) * om[c.n]


@dataclass(frozen=True)
class SubsolutionSlack:
    kappa: float
    per_subset_slacks: tuple  # first partials of f_c at mu (singleton exclusions)


def subsolution_slack(m: ToyModel, c: GiskCoeffs) -> SubsolutionSlack:
    """Largest kappa keeping mu - 2 kappa (1,...,1) in the Upsilon_1 cone,
    found by bisection and halved for a strict safety margin."""
    from .symmfunc import f_partial

    mu = np.array(m.mu)
    if not is_c_subsolution_point(c, mu):
        raise NotSubsolution(f"mu={m.mu} is not a pointwise C-subsolution")
    ones = np.ones(m.n)

    def member(kappa):
        return is_c_subsolution_point(c, mu - 2.0 * kappa * ones)

    lo = 0.0
    hi = float(np.min(mu)) / 2.0  # beyond this a coordinate is nonpositive
    if member(hi):
        lo = hi  # cone boundary is at the positivity edge itself
    else:
        while hi - lo > KAPPA_BISECT_TOL * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if member(mid):
                lo = mid
            else:
                hi = mid
    slacks = tuple(f_partial(c, mu, (i,)) for i in range(m.n))
    return SubsolutionSlack(kappa=0.5 * lo, per_subset_slacks=slacks)
