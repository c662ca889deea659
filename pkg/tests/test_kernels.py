"""Both kernel backends agree with each other and with companion-matrix roots."""

import itertools

import numpy as np
import numpy.polynomial.polynomial as npoly


def _poly_with_real_roots(rng, deg):
    """Random polynomial built from known roots; at least one real root."""
    n_real = rng.integers(1, deg + 1)
    n_pairs = (deg - n_real) // 2
    n_real = deg - 2 * n_pairs
    roots = list(rng.uniform(-4.0, 4.0, n_real))
    for _ in range(n_pairs):
        a, b = rng.uniform(-3.0, 3.0), rng.uniform(0.1, 2.0)
        roots += [complex(a, b), complex(a, -b)]
    coeffs = np.real(npoly.polyfromroots(roots))
    return coeffs, sorted(r.real for r in roots if abs(getattr(r, "imag", 0.0)) == 0.0)


def test_real_roots_against_construction(kernel, rng):
    for _ in range(300):
        deg = int(rng.integers(2, 9))
        coeffs, expected = _poly_with_real_roots(rng, deg)
        got = kernel.real_roots(coeffs)
        assert got.size == len(set(np.round(expected, 6))) or got.size <= len(expected)
        # every expected root is recovered
        for r in expected:
            assert np.min(np.abs(got - r)) < 1e-7 * max(1.0, abs(r))
        # companion-matrix oracle: largest real eigenvalue matches
        comp = np.roots(coeffs[::-1])
        real_comp = comp[np.abs(comp.imag) < 1e-7].real
        assert abs(got[-1] - np.max(real_comp)) < 1e-7 * max(1.0, abs(got[-1]))


def test_chain_matches_per_level_recompute(kernel, rng):
    for _ in range(150):
        deg = int(rng.integers(2, 8))
        coeffs, _ = _poly_with_real_roots(rng, deg)
        largest, has = kernel.chain_largest_roots(coeffs)
        work = coeffs.copy()
        for level in range(deg):
            comp = np.roots(work[::-1])
            real = comp[np.abs(comp.imag) < 1e-6].real
            if real.size:
                assert has[level]
                assert abs(largest[level] - real.max()) < 1e-6 * max(1.0, abs(real.max()))
            work = work[1:] * np.arange(1, work.size)


def test_backends_agree(rng):
    from gisk import _kernels_py

    try:
        from gisk import _kernels_cy
    except ImportError:
        return
    for _ in range(200):
        deg = int(rng.integers(2, 9))
        coeffs, _ = _poly_with_real_roots(rng, deg)
        a, ha = _kernels_py.chain_largest_roots(coeffs)
        b, hb = _kernels_cy.chain_largest_roots(coeffs)
        assert np.array_equal(ha, hb)
        mask = ha.astype(bool)
        assert np.allclose(a[mask], b[mask], rtol=1e-12, atol=1e-12)
        vals = rng.uniform(-2.0, 5.0, int(rng.integers(2, 9)))
        assert np.allclose(_kernels_py.sigma_table(vals), _kernels_cy.sigma_table(vals))


def test_sigma_table_brute_force(kernel, rng):
    for _ in range(50):
        m = int(rng.integers(1, 8))
        vals = rng.uniform(-2.0, 3.0, m)
        table = kernel.sigma_table(vals)
        for k in range(m + 1):
            brute = sum(
                np.prod([vals[i] for i in sub])
                for sub in itertools.combinations(range(m), k)
            )
            assert abs(table[k] - brute) < 1e-9 * max(1.0, abs(brute))


def test_multiple_root_collapses_exactly(kernel):
    # (x-2)(x+1)^2: the double root is reported at the critical point itself
    got = kernel.real_roots(np.array([-2.0, -3.0, 0.0, 1.0]))
    assert got.size == 2
    assert abs(got[0] + 1.0) < 1e-9 and abs(got[1] - 2.0) < 1e-12
    # x^4: every level collapses to 0
    largest, has = kernel.chain_largest_roots(np.array([0.0, 0.0, 0.0, 0.0, 1.0]))
    assert all(has) and np.all(largest == 0.0)
