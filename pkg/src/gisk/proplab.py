"""Seeded property suites for the polynomial inequality battery.

Each suite draws its cases from per-case generators derived from a master
seed (SeedSequence spawn keys), so results are reproducible and independent
of worker sharding.  Margins are normalized by a local evaluation scale
before comparison against the configured tolerance; failure records carry
the full inputs needed to replay one case in isolation.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import backend
from .stability import RootTuple, check_stability, phi, psi, is_c_subsolution_point
from .symmfunc import (
    GiskCoeffs,
    f_eval,
    f_eval_batch,
    h_eval,
    sample_level_set,
    sigma_batch,
)
from .toymodel import ToyModel, subsolution_slack
from .unipoly import EPS_CMP

SUITE_NAMES = ("hadamard", "monotonicity", "levelset", "hyperplane", "convexity")

# cases sharing one sampled coefficient vector (etc.) per block
_BLOCK = {
    "hadamard": 250,
    "monotonicity": 1,
    "levelset": 1000,
    "hyperplane": 125,
    "convexity": 250,
}


@dataclass(frozen=True)
class SuiteConfig:
    master_seed: int = 42
    samples_per_case: int = 1000
    dims: tuple = (3, 4, 5, 6)
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.samples_per_case < 1:
            raise ValueError("samples_per_case must be >= 1")
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))


@dataclass
class Failure:
    suite: str
    n: int
    case_index: int
    kind: str
    inputs: dict
    observed: float
    bound: float
    margin: float

    def to_dict(self):
        return {
            "suite": self.suite,
            "n": self.n,
            "case_index": self.case_index,
            "kind": self.kind,
            "inputs": self.inputs,
            "observed": self.observed,
            "bound": self.bound,
            "margin": self.margin,
        }


@dataclass
class SuiteResult:
    suite_name: str
    cases_run: int
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {
            "schema": 1,
            "suite": self.suite_name,
            "cases_run": self.cases_run,
            "passed": self.passed,
            "failures": [f.to_dict() for f in self.failures],
        }


def _rng(cfg: SuiteConfig, suite: str, n: int, *key) -> np.random.Generator:
    sid = SUITE_NAMES.index(suite)
    seq = np.random.SeedSequence(cfg.master_seed, spawn_key=(sid, n) + key)
    return np.random.Generator(np.random.PCG64(seq))


# ---------------------------------------------------------------------------
# samplers


def sample_root_tuple(rng, n, near_boundary=False) -> RootTuple:
    """Sorted-exponential root tuples; the strict first gap is forced."""
    if n == 2:
        x0 = rng.exponential() + 0.1
        return RootTuple(2, (x0,))
    tail = np.sort(rng.exponential(size=n - 2))[::-1]
    x1 = tail[0]
    x0 = x1 + 10.0 * EPS_CMP if near_boundary else 1.1 * x1 + 0.1
    return RootTuple(n, tuple(tail[::-1]) + (x0,))


def sample_stable(rng, n, near_boundary=False) -> GiskCoeffs:
    return psi(sample_root_tuple(rng, n, near_boundary))


def sample_closure_tuple(rng, n) -> RootTuple:
    """Closure points with random tie patterns (ties down to zero allowed)."""
    if n == 2:
        return RootTuple(2, (rng.exponential() + 0.1,))
    acc = rng.exponential() if rng.random() < 0.5 else 0.0  # x_{n-2}
    xs = [acc]  # stored high-index first: x_{n-2}, x_{n-3}, ..., x_1
    for _ in range(n - 3):
        acc += 0.0 if rng.random() < 0.35 else rng.exponential()
        xs.append(acc)
    gap0 = 0.0 if rng.random() < 0.2 else rng.exponential() + 0.05
    return RootTuple(n, tuple(xs) + (acc + gap0,))


def sample_subsolution(rng, c: GiskCoeffs) -> np.ndarray:
    """A verified point of the Upsilon_1 cone, roughly diagonal."""
    roots = phi(c)
    x1 = roots.root(1) if c.n >= 3 else 0.0
    x0 = roots.root(0)
    s = x1 + (0.3 + rng.exponential()) * max(0.5, x0 - x1)
    for shrink in (0.4, 0.2, 0.1, 0.0):
        mu = s * (1.0 + shrink * rng.uniform(-1.0, 1.0, size=c.n))
        if is_c_subsolution_point(c, mu):
            return mu
    return np.full(c.n, s)


def haar_unitary(rng, n) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


# ---------------------------------------------------------------------------
# individual suite cases; each returns a list of Failure


def _fail(out, suite, n, idx, kind, inputs, observed, bound, margin):
    out.append(
        Failure(
            suite=suite,
            n=n,
            case_index=idx,
            kind=kind,
            inputs=inputs,
            observed=float(observed),
            bound=float(bound),
            margin=float(margin),
        )
    )


@lru_cache(maxsize=512)
def _stable_block(cfg, suite, n, block, near_boundary=False):
    return sample_stable(_rng(cfg, suite, n, 0, block), n, near_boundary)


@lru_cache(maxsize=256)
def _hyperplane_block(cfg, n, block):
    brng = _rng(cfg, "hyperplane", n, 0, block)
    c = sample_stable(brng, n)
    mu = tuple(sample_subsolution(brng, c))
    model = ToyModel(n, mu, ((1.0, 1.0),))
    kappa = subsolution_slack(model, c).kappa
    return c, np.array(mu), kappa


def _case_hadamard(cfg, n, idx):
    block = idx // _BLOCK["hadamard"]
    c = _stable_block(cfg, "hadamard", n, block)
    rng = _rng(cfg, "hadamard", n, 1, idx)
    lam = sample_level_set(c, 1, rng, hi_exp=2.0)[0]
    u = haar_unitary(rng, n)
    h = (u * lam) @ u.conj().T
    diag = np.real(np.diagonal(h))
    val = f_eval(c, diag)
    scale = max(1.0, abs(float(np.prod(diag))))
    out = []
    if val / scale < -cfg.tolerance:
        _fail(
            out, "hadamard", n, idx, "diagonal_margin",
            {"d": list(c.d), "lam": lam.tolist(), "diag": diag.tolist()},
            val, 0.0, val / scale,
        )
    return out


def _grid_sum(c, lo_k, binom_top, x):
    """sum_{k=lo_k}^{n-2} c_k C(binom_top, k-lo_k) x^{k-lo_k}."""
    v = np.zeros_like(x)
    for k in range(c.n - 2, lo_k - 1, -1):
        v = v * x + c.coeff(k) * comb(binom_top, k - lo_k)
    return v


def _case_monotonicity(cfg, n, idx):
    rng = _rng(cfg, "monotonicity", n, 0, idx)
    roots = sample_closure_tuple(rng, n)
    c = psi(roots)
    tol = cfg.tolerance
    out = []
    xs = [roots.root(l) for l in range(n - 1)] + [0.0]  # x_0..x_{n-1}
    for l in range(n - 1):
        xl, xl1 = xs[l], xs[l + 1]
        grid = np.linspace(xl1, xl1 + 10.0, 17)
        tie = abs(xl - xl1) <= EPS_CMP * max(1.0, abs(xl))
        for top, rhs_pow, kind in (
            (n - l - 1, None, "narrow"),
            (n - l, n - l, "wide"),
        ):
            vals = _grid_sum(c, l, top, grid)
            scale = max(1.0, float(np.max(np.abs(vals))))
            inputs = {"d": list(c.d), "l": l, "kind": kind}
            if np.any(np.diff(vals) < -tol * scale):
                _fail(out, "monotonicity", n, idx, f"{kind}_monotone", inputs,
                      float(np.min(np.diff(vals))), 0.0,
                      float(np.min(np.diff(vals))) / scale)
            rhs = xl1 ** rhs_pow if rhs_pow else 0.0
            m = (vals[0] - rhs) / scale
            if m < -tol:
                _fail(out, "monotonicity", n, idx, f"{kind}_endpoint", inputs,
                      float(vals[0]), rhs, m)
            if tie and abs(vals[0] - rhs) > 1e-6 * scale:
                _fail(out, "monotonicity", n, idx, f"{kind}_tie_equality", inputs,
                      float(vals[0]), rhs, (vals[0] - rhs) / scale)
        # root identity: the wide sum at x_l reproduces x_l^{n-l}
        ident = float(_grid_sum(c, l, n - l, np.array([xl]))[0]) - xl ** (n - l)
        iscale = max(1.0, abs(xl) ** (n - l))
        if abs(ident) > 1e-7 * iscale:
            _fail(out, "monotonicity", n, idx, "root_identity",
                  {"d": list(c.d), "l": l}, ident, 0.0, ident / iscale)
    return out


def _excluded_diagonal_bound(c, l, x):
    return float(_grid_sum(c, l, c.n - l - 1, np.array([x]))[0])


def _case_levelset(cfg, n, idx):
    block = idx // _BLOCK["levelset"]
    near = idx % 10 == 9  # 10% of cases stress a nearly tied first gap
    c = _stable_block(cfg, "levelset", n, block, near)
    roots = check_stability(c).roots
    rng = _rng(cfg, "levelset", n, 1, idx)
    lam = sample_level_set(c, 1, rng)[0]  # sorted descending
    tol = cfg.tolerance
    out = []
    inputs = {"d": list(c.d), "lam": lam.tolist()}
    xs = [roots.root(l) for l in range(n - 1)] + [0.0]

    # subset inequalities at every level (all subsets for n <= 6)
    for l in range(n - 1):
        idxs = list(range(n))
        if n <= 6:
            subs_l = list(combinations(idxs, l))
            subs_l1 = list(combinations(idxs, l + 1))
        else:
            subs_l = [tuple(rng.choice(n, size=l, replace=False)) for _ in range(64)]
            subs_l1 = [tuple(rng.choice(n, size=l + 1, replace=False)) for _ in range(64)]
        rhs_wide = xs[l] ** (n - l)
        for s in subs_l:
            rest = np.delete(lam, s) if s else lam
            e = backend.sigma_table(rest)
            lhs = sum(c.coeff(k) * e[k - l] for k in range(l, n - 1))
            scale = max(1.0, abs(lhs), abs(rhs_wide))
            if (lhs - rhs_wide) / scale < -tol:
                _fail(out, "levelset", n, idx, "subset_wide",
                      {**inputs, "l": l, "subset": list(s)}, lhs, rhs_wide,
                      (lhs - rhs_wide) / scale)
        rhs_narrow = _excluded_diagonal_bound(c, l, xs[l + 1])
        for s in subs_l1:
            rest = np.delete(lam, s)
            e = backend.sigma_table(rest)
            lhs = sum(c.coeff(k) * e[k - l] for k in range(l, n - 1))
            scale = max(1.0, abs(lhs), abs(rhs_narrow))
            if (lhs - rhs_narrow) / scale < -tol:
                _fail(out, "levelset", n, idx, "subset_narrow",
                      {**inputs, "l": l, "subset": list(s)}, lhs, rhs_narrow,
                      (lhs - rhs_narrow) / scale)

    # product lower bound
    prod = float(np.prod(lam))
    x0n = xs[0] ** n
    scale = max(1.0, prod, x0n)
    if (prod - x0n) / scale < -tol:
        _fail(out, "levelset", n, idx, "product_bound", inputs, prod, x0n,
              (prod - x0n) / scale)

    he = h_eval(c, lam)
    g = he.grad
    lam_n = lam[-1]

    # gradient ordering and sign
    if np.any(g >= 0.0):
        _fail(out, "levelset", n, idx, "gradient_sign", inputs, float(np.max(g)),
              0.0, float(np.max(g)))
    gscale = max(1.0, float(np.max(np.abs(g))))
    if np.any(np.diff(g) > tol * gscale):
        _fail(out, "levelset", n, idx, "gradient_order", inputs,
              float(np.max(np.diff(g))), 0.0, float(np.max(np.diff(g))) / gscale)

    # h_n sandwich
    corr = 1.0 - _grid_sum(c, 1, n - 1, np.array([xs[0]]))[0] / xs[0] ** (n - 1)
    upper = -corr / lam_n
    hs = max(1.0, abs(g[-1]), 1.0 / lam_n)
    for kind, m in (
        ("hn_upper", (upper - g[-1]) / hs),
        ("hn_lower", (g[-1] + 1.0 / lam_n) / hs),
        ("hn_upper_negative", -upper / hs),
    ):
        if m < -tol:
            _fail(out, "levelset", n, idx, kind, inputs, float(g[-1]), upper, m)

    # aggregate bounds
    sum_h = float(np.sum(g))
    sum_h2 = float(np.sum(g * g))
    hij_h = he.hess @ g
    h_hij_h = float(g @ hij_h)
    checks = [
        ("sum_h_lower", n / lam_n + sum_h, n / lam_n),
        ("sum_h_upper", -sum_h - corr / lam_n, n / lam_n),
        ("sum_h2_upper", n / lam_n**2 - sum_h2, n / lam_n**2),
        ("sum_h2_lower", sum_h2 - (corr / lam_n) ** 2, n / lam_n**2),
        ("h_hij_h_upper", n * (n + 1) / lam_n**4 - h_hij_h, n * (n + 1) / lam_n**4),
        ("h_hij_h_lower", h_hij_h + n * (n - 1) / lam_n**4, n * (n + 1) / lam_n**4),
    ]
    for i in range(n):
        b = (n + 1) / (lam[i] * lam_n**2)
        checks.append((f"hij_h_upper_{i}", (n - 1) / (lam[i] * lam_n**2) - hij_h[i], b))
        checks.append((f"hij_h_lower_{i}", hij_h[i] + b, b))
    for kind, val, sc in checks:
        m = val / max(1.0, abs(sc))
        if m < -tol:
            _fail(out, "levelset", n, idx, kind, inputs, val, 0.0, m)
    return out


def _case_hyperplane(cfg, n, idx):
    if n < 3:
        return []
    block = idx // _BLOCK["hyperplane"]
    c, mu, kappa = _hyperplane_block(cfg, n, block)
    rng = _rng(cfg, "hyperplane", n, 1, idx)
    l = int(rng.integers(1, n - 1))  # sub-block size l+1 <= n-1
    sub = c.slice(n - l - 1)
    if not check_stability(sub).is_strictly_stable:
        return []  # tie in the sampled chain; sub-problem degenerates
    p = l + 1
    v = sample_level_set(sub, 1, rng, hi_exp=2.0)[0]
    j_set = np.sort(rng.choice(n, size=p, replace=False))
    q = mu[j_set] - 2.0 * kappa
    tol = cfg.tolerance
    out = []
    inputs = {
        "d": list(c.d), "mu": mu.tolist(), "kappa": kappa,
        "l": l, "subset": j_set.tolist(), "v": v.tolist(),
    }

    fq = f_eval(sub, q)
    if fq <= 0.0:
        _fail(out, "hyperplane", n, idx, "q_in_region", inputs, fq, 0.0, fq)
        return out

    grad = h_eval(sub, v).grad
    terms = (q - v) * (-grad)
    pairing = float(np.sum(terms))
    pscale = max(1.0, float(np.sum(np.abs(terms))))
    if pairing / pscale < -tol:
        _fail(out, "hyperplane", n, idx, "pairing", inputs, pairing, 0.0,
              pairing / pscale)

    # independent convexity route: f_sub stays nonnegative from v towards q,
    # and its initial directional derivative matches the pairing
    s = np.linspace(0.0, 1.0, 17)[:, None]
    seg = v[None, :] * (1.0 - s) + q[None, :] * s
    vals = f_eval_batch(sub, seg)
    vscale = max(1.0, float(np.max(np.abs(vals))))
    if float(np.min(vals)) / vscale < -tol:
        _fail(out, "hyperplane", n, idx, "segment_nonneg", inputs,
              float(np.min(vals)), 0.0, float(np.min(vals)) / vscale)
    delta = 1e-7
    fd = (f_eval(sub, v + delta * (q - v)) - f_eval(sub, v)) / delta
    closed = pairing * float(np.prod(v))
    dscale = max(1.0, abs(fd), abs(closed))
    if abs(fd - closed) / dscale > 1e-4 and abs(pairing) / pscale > 1e-6:
        _fail(out, "hyperplane", n, idx, "directional_agreement", inputs,
              fd, closed, (fd - closed) / dscale)
    return out


def _case_convexity(cfg, n, idx):
    block = idx // _BLOCK["convexity"]
    c = _stable_block(cfg, "convexity", n, block)
    rng = _rng(cfg, "convexity", n, 1, idx)
    pts = sample_level_set(c, 2, rng, sort_desc=False)
    s = np.linspace(0.0, 1.0, 33)[:, None]
    seg = pts[0][None, :] * (1.0 - s) + pts[1][None, :] * s
    vals = f_eval_batch(c, seg)
    e = sigma_batch(seg)
    sums = e[:, : n - 1] @ c.ascending()
    scales = np.maximum(1.0, np.maximum(np.abs(e[:, n]), np.abs(sums)))
    margins = vals / scales
    out = []
    if float(np.min(margins)) < -cfg.tolerance:
        _fail(out, "convexity", n, idx, "segment",
              {"d": list(c.d), "a": pts[0].tolist(), "b": pts[1].tolist()},
              float(np.min(vals)), 0.0, float(np.min(margins)))
    return out


_CASES = {
    "hadamard": _case_hadamard,
    "monotonicity": _case_monotonicity,
    "levelset": _case_levelset,
    "hyperplane": _case_hyperplane,
    "convexity": _case_convexity,
}


# ---------------------------------------------------------------------------
# drivers


def _run_chunk(args):
    name, cfg, n, lo, hi = args
    fn = _CASES[name]
    failures = []
    for idx in range(lo, hi):
        failures.extend(fn(cfg, n, idx))
    return failures


def run_suite(name: str, cfg: SuiteConfig, jobs: int = 1) -> SuiteResult:
    if name not in _CASES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    tasks = []
    total = 0
    for n in cfg.dims:
        count = cfg.samples_per_case
        total += count
        if jobs > 1:
            step = max(1, count // (4 * jobs))
            tasks.extend(
                (name, cfg, n, lo, min(lo + step, count))
                for lo in range(0, count, step)
            )
        else:
            tasks.append((name, cfg, n, 0, count))

    failures = []
    if jobs > 1:
        try:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for part in pool.map(_run_chunk, tasks):
                    failures.extend(part)
        except (OSError, RuntimeError):  # no fork in restricted sandboxes
            failures = []
            for task in tasks:
                failures.extend(_run_chunk(task))
    else:
        for task in tasks:
            failures.extend(_run_chunk(task))
    failures.sort(key=lambda f: (f.n, f.case_index, f.kind))
    return SuiteResult(suite_name=name, cases_run=total, failures=failures)


def run_all(cfg: SuiteConfig, jobs: int = 1) -> list:
    return [run_suite(name, cfg, jobs=jobs) for name in SUITE_NAMES]


def run_hadamard_suite(cfg: SuiteConfig) -> SuiteResult:
    return run_suite("hadamard", cfg)


def run_monotonicity_suite(cfg: SuiteConfig) -> SuiteResult:
    return run_suite("monotonicity", cfg)


def run_levelset_suite(cfg: SuiteConfig) -> SuiteResult:
    return run_suite("levelset", cfg)


def run_hyperplane_suite(cfg: SuiteConfig) -> SuiteResult:
    return run_suite("hyperplane", cfg)


def run_convexity_suite(cfg: SuiteConfig) -> SuiteResult:
    return run_suite("convexity", cfg)
