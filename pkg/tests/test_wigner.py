import math

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from cvactivation.errors import InvariantError
from cvactivation.fock import DensityMatrix, FockCutoff
from cvactivation.states import GkpParams, cat, coherent, fock, gkp_comb, gkp_damped
from cvactivation.channels import pure_loss
from cvactivation.wigner import (
    DepthSearchConfig,
    WIGNER_BOUND,
    displaced_parity_matrix,
    negativity_depth,
    negativity_depth_fn,
    wigner_at,
    wigner_batch,
    wigner_grid,
    wigner_pure_comb,
)

from conftest import random_density


def laguerre_series(rho, alpha):
    """Independent oracle: displaced-parity matrix elements via Laguerre polynomials."""
    from math import lgamma

    dim = rho.dim
    x = 4.0 * abs(alpha) ** 2
    mat = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        for n in range(m + 1):
            pref = (-1.0) ** n * math.exp(
                -2.0 * abs(alpha) ** 2 + 0.5 * (lgamma(n + 1) - lgamma(m + 1))
            )
            val = pref * (2.0 * alpha) ** (m - n) * eval_genlaguerre(n, m - n, x)
            mat[m, n] = val
            mat[n, m] = np.conj(val)
    return (2.0 / math.pi) * float(np.real(np.trace(mat @ rho.matrix)))


def test_vacuum_and_fock_one_values():
    vac = fock(0, 30).to_density()
    one = fock(1, 30).to_density()
    for alpha in (0.0, 0.3 + 0.2j, 0.9j):
        expect = (2.0 / math.pi) * math.exp(-2.0 * abs(alpha) ** 2)
        assert wigner_at(vac, alpha) == pytest.approx(expect, abs=1e-10)
    assert wigner_at(one, 0.0) == pytest.approx(-2.0 / math.pi, abs=1e-12)
    alpha = 0.4 - 0.1j
    expect = (
        (2.0 / math.pi)
        * (4.0 * abs(alpha) ** 2 - 1.0)
        * math.exp(-2.0 * abs(alpha) ** 2)
    )
    assert wigner_at(one, alpha) == pytest.approx(expect, abs=1e-10)


def test_lossy_photon_origin_value():
    one = fock(1, 25).to_density()
    for eta in (0.0, 0.25, 0.5, 0.75, 1.0):
        rho = pure_loss(eta, 25).apply(one)
        assert wigner_at(rho, 0.0) == pytest.approx(
            (2.0 / math.pi) * (1.0 - 2.0 * eta), abs=1e-10
        )


def test_parity_series_laguerre_routes_agree(rng):
    for _ in range(3):
        rho = random_density(rng, 8, cutoff=30)
        for alpha in (0.0, 0.7 - 0.4j, 1.2j):
            a = wigner_at(rho, alpha)
            b = float(wigner_batch(rho, np.array([alpha]))[0])
            c = laguerre_series(rho, alpha)
            assert a == pytest.approx(b, abs=1e-6)
            assert a == pytest.approx(c, abs=1e-6)


def test_displaced_parity_spectrum_exact():
    op = displaced_parity_matrix(0.8 + 0.4j, 30)
    vals = np.linalg.eigvalsh(op.matrix)
    assert np.max(np.abs(np.abs(vals) - 1.0)) < 1e-12


def test_grid_vacuum_peak_and_integral():
    vac = fock(0, 64).to_density()
    grid = wigner_grid(vac, radius=5.0, resolution=60)
    assert grid.max_value() == pytest.approx(2.0 / math.pi, abs=1e-6)
    assert grid.integral() == pytest.approx(1.0, abs=2e-2)
    assert np.min(grid.values) >= -1e-12


def test_grid_odd_cat_center():
    rho = cat(2.0, -1, 40).to_density()
    grid = wigner_grid(rho, radius=4.0, resolution=50)
    center = grid.values[np.argmin(np.abs(grid.centers))]
    assert center == pytest.approx(-2.0 / math.pi, abs=1e-4)


def test_grid_cat_fringes_alternate_along_imaginary_axis():
    rho = cat(2.0, -1, 40).to_density()
    grid = wigner_grid(rho, radius=3.0, resolution=48, validate_marginal=False)
    on_axis = np.isclose(grid.centers.real, 0.0)
    ims = grid.centers.imag[on_axis]
    vals = grid.values[on_axis][np.argsort(ims)]
    signs = np.sign(vals[np.abs(vals) > 0.05])
    assert np.any(signs > 0) and np.any(signs < 0)
    flips = np.sum(np.diff(signs) != 0)
    assert flips >= 4


def test_grid_bound_invariant(rng):
    rho = random_density(rng, 10, cutoff=25)
    grid = wigner_grid(rho, radius=3.0, resolution=30, validate_marginal=False)
    assert grid.min_value() >= -WIGNER_BOUND - 1e-9
    assert grid.max_value() <= WIGNER_BOUND + 1e-9


def test_marginal_check_flags_truncated_integration():
    rho = gkp_damped(GkpParams(epsilon=0.25), 50).to_density()
    # a disc too small to hold the momentum support starves the marginal
    with pytest.raises(InvariantError):
        wigner_grid(rho, radius=1.2, resolution=30)
    wigner_grid(rho, radius=4.5, resolution=60)  # adequate disc passes


def test_depth_examples():
    coh = coherent(1.0, 30).to_density()
    res = negativity_depth(coh)
    assert res.depth < 1e-10
    assert res.argmin_alpha == 0j
    one = fock(1, 30).to_density()
    res = negativity_depth(one)
    assert res.depth == pytest.approx(2.0 / math.pi, abs=1e-6)
    assert abs(res.argmin_alpha) < 1e-4
    assert res.refinement_converged
    rho = pure_loss(0.75, 30).apply(one)
    res = negativity_depth(rho)
    assert res.depth == pytest.approx(1.0 / math.pi, abs=1e-5)


def test_depth_never_exceeds_wigner_bound(rng):
    for _ in range(5):
        rho = random_density(rng, 8, cutoff=24)
        res = negativity_depth(rho, DepthSearchConfig(resolution=25))
        assert res.depth <= WIGNER_BOUND + 1e-9


def test_depth_mixture_linearity(rng):
    # on a shared grid, -W of a mixture is the mixture of -W pointwise
    a = random_density(rng, 8, cutoff=24)
    b = random_density(rng, 8, cutoff=24)
    pts = np.linspace(-2, 2, 9)[:, None] + 1j * np.linspace(-2, 2, 9)[None, :]
    pts = pts.ravel()
    for p in (0.25, 0.6):
        mix = DensityMatrix(
            p * a.matrix + (1 - p) * b.matrix, FockCutoff(24)
        )
        wa = wigner_batch(a, pts)
        wb = wigner_batch(b, pts)
        wm = wigner_batch(mix, pts)
        assert np.max(np.abs(wm - (p * wa + (1 - p) * wb))) < 1e-10
        assert np.max(-wm) <= np.max(p * (-wa) + (1 - p) * (-wb)) + 1e-12


def test_pure_comb_matches_series():
    params = GkpParams(epsilon=0.2)
    rho = gkp_damped(params, 90).to_density()
    centers, envelope, sigma2 = gkp_comb(params)
    pts = np.array([0.0, 0.4 + 0.2j, 1.25 + 0.63j, 0.9j, 1.77 / math.sqrt(2) * (1 + 1j)])
    exact = wigner_pure_comb(centers, envelope, sigma2, pts)
    series = wigner_batch(rho, pts)
    assert np.max(np.abs(exact - series)) < 1e-5


def test_pure_comb_vacuum_limit():
    # single unit-weight peak of variance 1 is the vacuum
    pts = np.array([0.0, 0.5 + 0.3j])
    vals = wigner_pure_comb(np.array([0.0]), np.array([1.0]), 1.0, pts)
    expect = (2.0 / math.pi) * np.exp(-2.0 * np.abs(pts) ** 2)
    assert np.max(np.abs(vals - expect)) < 1e-12


def test_depth_fn_route_matches_density_route():
    params = GkpParams(epsilon=0.3)
    rho = gkp_damped(params, 60).to_density()
    centers, envelope, sigma2 = gkp_comb(params)
    cfg = DepthSearchConfig(radius=2.8, resolution=30)
    direct = negativity_depth(rho, cfg)
    via_fn = negativity_depth_fn(
        lambda pts: wigner_pure_comb(centers, envelope, sigma2, pts), 2.8, cfg
    )
    assert direct.depth == pytest.approx(via_fn.depth, abs=1e-6)
