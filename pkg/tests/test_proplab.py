import json

import numpy as np
import pytest

from gisk.proplab import (
    SUITE_NAMES,
    SuiteConfig,
    run_all,
    run_suite,
    sample_root_tuple,
    sample_stable,
    haar_unitary,
)
from gisk.stability import check_stability
from gisk.symmfunc import h_eval, sample_level_set

CFG = SuiteConfig(master_seed=42, samples_per_case=40, dims=(3, 4, 5))


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_suites_pass(name):
    res = run_suite(name, CFG)
    assert res.passed, res.failures[:3]
    assert res.cases_run == 40 * 3


def test_deterministic_reports():
    a = [r.to_dict() for r in run_all(CFG)]
    b = [r.to_dict() for r in run_all(CFG)]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_seed_changes_samples():
    c1 = sample_stable(np.random.default_rng(1), 4)
    c2 = sample_stable(np.random.default_rng(2), 4)
    assert c1.d != c2.d


def test_parallel_matches_serial():
    cfg = SuiteConfig(master_seed=7, samples_per_case=24, dims=(3, 4))
    serial = run_suite("convexity", cfg, jobs=1).to_dict()
    parallel = run_suite("convexity", cfg, jobs=2).to_dict()
    assert json.dumps(serial, sort_keys=True) == json.dumps(parallel, sort_keys=True)


def test_sampler_guarantees(rng):
    for n in range(2, 8):
        for _ in range(50):
            c = sample_stable(rng, n)
            assert check_stability(c).is_strictly_stable
        nb = sample_root_tuple(rng, n, near_boundary=True)
        if n >= 3:
            assert nb.root(0) - nb.root(1) == pytest.approx(1e-8)


def test_haar_unitary_is_unitary(rng):
    for n in (2, 3, 5):
        u = haar_unitary(rng, n)
        assert np.allclose(u @ u.conj().T, np.eye(n), atol=1e-12)


def test_gradient_matches_finite_differences(rng):
    # central differences with step 1e-6 * lambda_i, 200 seeded points
    checked = 0
    for _ in range(50):
        n = int(rng.integers(3, 6))
        c = sample_stable(rng, n)
        for lam in sample_level_set(c, 4, rng, hi_exp=1.5):
            he = h_eval(c, lam)
            for i in range(n):
                step = 1e-6 * lam[i]
                up, dn = lam.copy(), lam.copy()
                up[i] += step
                dn[i] -= step
                fd = (h_eval(c, up).h - h_eval(c, dn).h) / (2 * step)
                assert abs(fd - he.grad[i]) <= 1e-5 * max(1.0, abs(he.grad[i]))
            checked += 1
    assert checked >= 200


def test_hessian_matches_finite_differences(rng):
    # the doubled-diagonal closed form is the true second derivative
    for _ in range(10):
        n = int(rng.integers(3, 5))
        c = sample_stable(rng, n)
        lam = sample_level_set(c, 1, rng, hi_exp=1.0)[0]
        he = h_eval(c, lam)
        for i in range(n):
            for j in range(n):
                si, sj = 1e-5 * lam[i], 1e-5 * lam[j]
                if i == j:
                    up, dn = lam.copy(), lam.copy()
                    up[i] += si
                    dn[i] -= si
                    fd = (h_eval(c, up).h - 2 * he.h + h_eval(c, dn).h) / si**2
                else:
                    pp, pm, mp, mm = (lam.copy() for _ in range(4))
                    pp[i] += si; pp[j] += sj
                    pm[i] += si; pm[j] -= sj
                    mp[i] -= si; mp[j] += sj
                    mm[i] -= si; mm[j] -= sj
                    fd = (
                        h_eval(c, pp).h - h_eval(c, pm).h
                        - h_eval(c, mp).h + h_eval(c, mm).h
                    ) / (4 * si * sj)
                hmax = float(np.max(np.abs(he.hess)))
                assert abs(fd - he.hess[i, j]) <= 5e-4 * abs(he.hess[i, j]) + 1e-6 * hmax


def test_failure_records_carry_replay_inputs():
    # an impossible tolerance forces failures; records must carry the inputs
    cfg = SuiteConfig(master_seed=3, samples_per_case=6, dims=(4,), tolerance=-1.0)
    res = run_suite("convexity", cfg)
    assert not res.passed
    f = res.failures[0]
    assert f.suite == "convexity" and f.n == 4
    assert "d" in f.inputs and "a" in f.inputs and "b" in f.inputs
    assert isinstance(f.margin, float)


def test_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig(samples_per_case=0)
    with pytest.raises(ValueError):
        run_suite("nope", CFG)
