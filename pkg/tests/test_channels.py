import math

import numpy as np
import pytest

from cvactivation.errors import BudgetError
from cvactivation.fock import (
    DensityMatrix,
    FockCutoff,
    PureState,
    parity_op,
    position_op,
    pure_fidelity,
    trace_norm,
)
from cvactivation.channels import (
    DampingMap,
    GaussNoiseParams,
    KrausChannel,
    LossParams,
    damping,
    gaussian_noise,
    gkp_ec_round,
    nearest_lattice_shift,
    phase_rotation,
    apply_unitary,
    pure_loss,
    sigma2_from_db,
    sum_gate,
)
from cvactivation.states import GkpParams, cat, coherent, fock, gkp_damped
from cvactivation.wigner import wigner_at, wigner_grid

from conftest import random_density


def trace_distance(a, b):
    return 0.5 * trace_norm(a.matrix - b.matrix)


def test_loss_params_validated():
    with pytest.raises(ValueError):
        LossParams(1.2)


def test_loss_single_photon():
    rho = pure_loss(0.3, 15).apply(fock(1, 15).to_density())
    assert np.real(rho.matrix[0, 0]) == pytest.approx(0.7, abs=1e-12)
    assert np.real(rho.matrix[1, 1]) == pytest.approx(0.3, abs=1e-12)


def test_loss_identity_at_unit_transmissivity():
    rho = coherent(1.0, 20).to_density()
    out = pure_loss(1.0, 20).apply(rho)
    assert trace_distance(rho, out) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("eta", [0.2, 0.5, 0.8])
def test_loss_parity_binomial(n, eta):
    rho = pure_loss(eta, 25).apply(fock(n, 25).to_density())
    val = float(np.real(rho.expectation(parity_op(25))))
    assert val == pytest.approx((1.0 - 2.0 * eta) ** n, abs=1e-7)


def test_loss_semigroup(rng):
    rho = random_density(rng, 10)
    one = pure_loss(0.8, 10).apply(pure_loss(0.7, 10).apply(rho))
    two = pure_loss(0.56, 10).apply(rho)
    assert trace_distance(one, two) < 1e-7


def test_gaussian_noise_identity_limit():
    ch = gaussian_noise(GaussNoiseParams(1e-12, 1), 15)
    rho = fock(1, 15).to_density()
    assert trace_distance(ch.apply(rho), rho) < 1e-6


def test_gaussian_noise_heats_vacuum():
    ch = gaussian_noise(GaussNoiseParams(0.05, 15), 40)
    out = ch.apply(fock(0, 40).to_density())
    assert out.mean_photon_number() == pytest.approx(0.05, abs=2e-3)


def test_gaussian_noise_composition_law():
    a = gaussian_noise(GaussNoiseParams(0.07, 15), 30)
    b = gaussian_noise(GaussNoiseParams(0.05, 15), 30)
    c = gaussian_noise(GaussNoiseParams(0.12, 15), 30)
    for rho in (fock(1, 30).to_density(), coherent(0.7, 30).to_density()):
        assert trace_distance(a.apply(b.apply(rho)), c.apply(rho)) < 1e-4


def test_gaussian_noise_preserves_wigner_positivity():
    ch = gaussian_noise(GaussNoiseParams(0.08, 12), 40)
    out = ch.apply(fock(0, 40).to_density())
    grid = wigner_grid(out, radius=3.0, resolution=40, validate_marginal=False)
    assert grid.min_value() >= -1e-6


def test_noise_db_convention():
    assert sigma2_from_db(0.0) == pytest.approx(0.5)
    assert sigma2_from_db(10.0) == pytest.approx(0.05)


def test_damping_examples():
    dm = damping(0.0, 10)
    rho = coherent(0.8, 10).to_density()
    assert trace_distance(dm.apply(rho), rho) < 1e-12
    one = fock(1, 10)
    assert np.allclose(damping(0.7, 10).apply_pure(one).amplitudes, one.amplitudes)
    psi = PureState(np.array([1, 0, 1, 0, 0], dtype=complex) / math.sqrt(2), FockCutoff(5))
    out = damping(0.5, 5).apply_pure(psi)
    assert abs(out.amplitudes[2] / out.amplitudes[0]) == pytest.approx(
        math.exp(-1.0), abs=1e-12
    )


def test_kraus_channel_trace_preservation_checked():
    from cvactivation.fock import OperatorMatrix

    half = OperatorMatrix(0.5 * np.eye(4), hermitian=True, norm_bound=0.5)
    with pytest.raises(ValueError):
        KrausChannel((half,), label="broken")


def test_sum_gate_unitary_and_correlations():
    gate = sum_gate(15)
    dim2 = 15 * 15
    assert np.max(np.abs(gate.matrix @ gate.matrix.conj().T - np.eye(dim2))) < 1e-6
    vac2 = np.zeros(dim2)
    vac2[0] = 1.0
    state = gate.matrix @ np.outer(vac2, vac2) @ gate.matrix.conj().T
    q = position_op(15).matrix
    corr = np.real(np.trace(np.kron(q, q) @ state))
    assert corr == pytest.approx(0.5, abs=1e-5)


def test_sum_gate_budget():
    with pytest.raises(BudgetError):
        sum_gate(80)


def test_sum_gate_commutes_with_its_own_flow():
    from scipy.linalg import expm

    gate = sum_gate(10).matrix
    q = position_op(10).matrix
    from cvactivation.fock import momentum_op

    p = momentum_op(10).matrix
    partial = expm(-0.5j * np.kron(q, p))  # same generator, half strength
    assert np.max(np.abs(gate @ partial - partial @ gate)) < 1e-10


def test_nearest_lattice_shift_ties_toward_zero():
    s = math.sqrt(math.pi)
    assert nearest_lattice_shift(0.3, s) == pytest.approx(0.3)
    assert nearest_lattice_shift(s + 0.2, s) == pytest.approx(0.2)
    assert nearest_lattice_shift(-s - 0.2, s) == pytest.approx(-0.2)
    # exact tie at 1.5 spacings resolves toward the lattice point closer to zero
    assert nearest_lattice_shift(1.5 * s, s) == pytest.approx(0.5 * s)
    assert nearest_lattice_shift(-1.5 * s, s) == pytest.approx(-0.5 * s)


def test_phase_rotation_free_unitary():
    rot = phase_rotation(0.9, 20)
    rho = cat(1.2, -1, 20).to_density()
    out = apply_unitary(rot, rho)
    assert np.real(np.trace(out.matrix)) == pytest.approx(1.0, abs=1e-12)
    assert out.expectation(parity_op(20)).real == pytest.approx(-1.0, abs=1e-10)


def test_ec_round_trace_preserving_and_valid():
    params = GkpParams(epsilon=0.3)
    code = gkp_damped(params, 22, tail_tol=1e-4)
    out = gkp_ec_round(code.to_density(), code)
    assert np.real(np.trace(out.matrix)) == pytest.approx(1.0, abs=1e-12)
    vals = np.linalg.eigvalsh(out.matrix)
    assert vals[0] > -1e-9


def test_ec_round_ideal_limit_ordering():
    params = GkpParams(epsilon=0.3)
    code = gkp_damped(params, 22, tail_tol=1e-4)
    anc = gkp_damped(params, 22, tail_tol=1e-4)
    clean = gkp_ec_round(code.to_density(), anc)
    lossy = gkp_ec_round(pure_loss(0.9, 22).apply(code.to_density()), anc)
    assert pure_fidelity(code, clean) > pure_fidelity(code, lossy)


def test_ec_round_rejects_bad_ancilla():
    params = GkpParams(epsilon=0.3)
    code = gkp_damped(params, 22, tail_tol=1e-4)
    with pytest.raises(ValueError):
        gkp_ec_round(code.to_density(), fock(1, 22))


def test_ec_round_budget():
    params = GkpParams(epsilon=0.4)
    code = gkp_damped(params, 22, tail_tol=1e-4)
    with pytest.raises(BudgetError):
        gkp_ec_round(code.to_density(), code, budget=100)


def test_loss_threshold_wigner_minimum():
    one = fock(1, 25).to_density()
    for eta in (0.5, 0.75, 1.0):
        rho = pure_loss(eta, 25).apply(one)
        origin = wigner_at(rho, 0.0)
        assert origin == pytest.approx((2 / math.pi) * (1 - 2 * eta), abs=1e-5)
        grid = wigner_grid(rho, radius=3.0, resolution=40, validate_marginal=False)
        assert grid.min_value() >= origin - 1e-9
