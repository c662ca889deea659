import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gisk.errors import (
    DegenerateDenominator,
    DimensionMismatch,
    IndexOutOfRange,
    NonpositiveEigenvalue,
)
from gisk.symmfunc import (
    GiskCoeffs,
    f_eval,
    f_eval_batch,
    f_partial,
    h_eval,
    sample_level_set,
    sigma,
    sigma_batch,
    solve_for_last,
)

C12 = GiskCoeffs(3, (1.0, 2.0))


def test_sigma_examples():
    assert sigma(2, [3, 3, 1]) == 15.0
    assert sigma(0, [7, -2, 9]) == 1.0
    assert sigma(1, [3, 3, 1], excluded=[2]) == 6.0
    with pytest.raises(IndexOutOfRange):
        sigma(1, [1, 2, 3], excluded=[5])
    with pytest.raises(IndexOutOfRange):
        sigma(3, [1, 2, 3], excluded=[0])


def test_f_eval_examples():
    assert f_eval(C12, [3, 3, 1]) == pytest.approx(0.0, abs=1e-14)  # 9 - (7 + 2)
    n = 5
    zero = GiskCoeffs(n, (0.0,) * (n - 1))
    assert f_eval(zero, [1.0] * n) == 1.0
    assert f_eval(C12, [2, 2, 2]) == pytest.approx(0.0, abs=1e-14)  # 8 - (6 + 2)
    with pytest.raises(DimensionMismatch):
        f_eval(C12, [1.0, 2.0])


def test_f_partial_examples():
    assert f_partial(C12, [3, 3, 1], [2]) == 8.0  # sigma_2(3,3) - d_1
    zero = GiskCoeffs(4, (0.0, 0.0, 0.0))
    assert f_partial(zero, [2.0, 3.0, 5.0, 7.0], [1]) == pytest.approx(70.0)
    assert f_partial(C12, [2, 2, 2], [0, 1]) == 2.0
    with pytest.raises(IndexOutOfRange):
        f_partial(C12, [1, 2, 3], [0, 0])
    with pytest.raises(IndexOutOfRange):
        f_partial(C12, [1, 2, 3], [0, 1, 2])


def test_solve_for_last_examples():
    assert solve_for_last(C12, [3, 3]) == pytest.approx(1.0)  # (6+2)/(9-1)
    n, t, c0 = 4, 1.7, 5.0
    ma = GiskCoeffs(n, (0.0, 0.0, c0))
    assert solve_for_last(ma, [t] * (n - 1)) == pytest.approx(c0 / t ** (n - 1))
    assert solve_for_last(C12, [2, 2]) == pytest.approx(2.0)  # (4+2)/(4-1)
    with pytest.raises(DegenerateDenominator):
        solve_for_last(C12, [1.0, 1.0])  # product 1 = sigma term


def test_solve_for_last_lands_on_level_set(rng):
    for _ in range(100):
        head = rng.uniform(2.1, 9.0, 2)
        lam = np.append(head, solve_for_last(C12, head))
        assert abs(f_eval(C12, lam)) < 1e-9 * max(1.0, float(np.prod(np.abs(lam))))


def test_h_eval_examples():
    he = h_eval(C12, [3, 3, 1])
    assert he.h == pytest.approx(1.0, abs=1e-14)
    assert he.grad[2] == pytest.approx(-8.0 / 9.0, abs=1e-14)

    n, t, c0 = 4, 1.3, 2.0
    ma = GiskCoeffs(n, (0.0, 0.0, c0))
    hma = h_eval(ma, [t] * n)
    assert hma.h == pytest.approx(c0 / t**n)
    assert np.allclose(hma.grad, -c0 / t ** (n + 1))

    he2 = h_eval(C12, [2, 2, 2])
    assert he2.h == pytest.approx(1.0)
    assert np.allclose(he2.grad, -3.0 / 8.0)

    with pytest.raises(NonpositiveEigenvalue):
        h_eval(C12, [1.0, 2.0, -0.5])


def test_h_hessian_structure(rng):
    for _ in range(50):
        lam = rng.uniform(0.5, 4.0, 3)
        he = h_eval(C12, lam)
        assert np.allclose(he.hess, he.hess.T)
        # diagonal entries follow the doubled-exclusion convention
        assert np.allclose(np.diagonal(he.hess), -2.0 * he.grad / lam)


@given(st.lists(st.floats(0.2, 5.0), min_size=2, max_size=7))
@settings(max_examples=150, deadline=None)
def test_sigma_batch_matches_scalar(vals):
    from gisk import backend

    pts = np.array([vals])
    assert np.allclose(sigma_batch(pts)[0], backend.sigma_table(np.array(vals)))


def test_f_eval_batch_matches_scalar(rng):
    c = GiskCoeffs(4, (0.5, -1.0, 6.0))
    pts = rng.uniform(0.3, 4.0, size=(40, 4))
    batch = f_eval_batch(c, pts)
    for row, val in zip(pts, batch):
        assert f_eval(c, row) == pytest.approx(float(val), rel=1e-12, abs=1e-12)


def test_level_set_sampler_properties(rng):
    from gisk.stability import phi

    for d in [(1.0, 2.0), (0.0, 8.0)]:
        c = GiskCoeffs(3, d)
        pts = sample_level_set(c, 40, rng)
        x0 = phi(c).root(0)
        for lam in pts:
            assert np.all(lam > 0.0)
            assert np.all(np.diff(lam) <= 0.0)  # sorted descending
            scale = max(1.0, float(np.prod(lam)))
            assert abs(f_eval(c, lam)) < 1e-9 * scale
            for i in range(3):
                assert f_partial(c, lam, [i]) > 0.0
            assert np.prod(lam) >= x0**3 - 1e-8 * scale
