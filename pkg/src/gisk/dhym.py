"""Expansion of the deformed Hermitian-Yang-Mills equation.

Expanding prod_j (1 + i lambda_j) = sum_k i^k sigma_k(lambda) gives

    Re = sum_m (-1)^m sigma_{2m},      Im = sum_m (-1)^m sigma_{2m+1},

so cos(theta) Im - sin(theta) Re = 0 is a linear combination of the
sigma_k with exact integer signs and trig factors.  Normalizing the
sigma_n coefficient to one yields the unreduced format handled here; the
reduction step removes the sigma_{n-1} term by an eigenvalue shift, which
on the diagonal restriction is exactly a Taylor shift.
"""

import math
from dataclasses import dataclass
from math import comb

from .errors import DegeneratePhase
from .symmfunc import FullCoeffs, GiskCoeffs
from .unipoly import taylor_shift

_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class DhymSpec:
    n: int
    theta: float  # phase angle, radians


def _sign_pair(k: int):
    """(cos multiplier, sin multiplier) of sigma_k in cos*Im - sin*Re.

    Integer-exact: odd k contributes (-1)^((k-1)/2) cos, even k contributes
    -(-1)^(k/2) sin.
    """
    if k % 2 == 1:
        return (-1) ** ((k - 1) // 2), 0
    return 0, -((-1) ** (k // 2))


def dhym_coefficients(spec: DhymSpec) -> FullCoeffs:
    """Coefficients (c_{n-1}, ..., c_0) of sigma_n = sum_{k<n} c_k sigma_k."""
    n = spec.n
    if n < 2:
        raise DegeneratePhase("dimension must be >= 2")
    cos_t = math.cos(spec.theta)
    sin_t = math.sin(spec.theta)
    a_n, b_n = _sign_pair(n)
    s_n = a_n * cos_t + b_n * sin_t
    if abs(s_n) < _DEGENERATE_TOL:
        raise DegeneratePhase(f"sigma_n coefficient vanishes at theta={spec.theta}")
    c = []
    for k in range(n - 1, -1, -1):
        a_k, b_k = _sign_pair(k)
        c.append(-(a_k * cos_t + b_k * sin_t) / s_n)
    return FullCoeffs(n, tuple(c))


def reduce_coefficients(full: FullCoeffs):
    """Remove the sigma_{n-1} term by the shift lambda -> lambda + c_{n-1}.

    Returns (reduced, shift) with the reduced diagonal restriction equal to
    the Taylor shift of the full one by shift = c_{n-1}.
    """
    n = full.n
    shift = full.coeff(n - 1)
    q = taylor_shift(full.diagonal(), shift)
    qc = list(q.coeffs) + [0.0] * (n + 1 - len(q.coeffs))
    scale = max(1.0, max(abs(v) for v in qc))
    if abs(qc[n - 1]) > 1e-12 * scale:
        raise AssertionError(
            f"shift failed to cancel the x^{n - 1} term: {qc[n - 1]}"
        )
    d = tuple(-qc[k] / comb(n, k) for k in range(n - 2, -1, -1))
    return GiskCoeffs(n, d), shift


def eigenvalue_residual(spec: DhymSpec, values) -> float:
    """cos(theta) Im - sin(theta) Re of prod (1 + i lambda_j), directly."""
    z = complex(1.0, 0.0)
    for v in values:
        z *= complex(1.0, float(v))
    return math.cos(spec.theta) * z.imag - math.sin(spec.theta) * z.real
