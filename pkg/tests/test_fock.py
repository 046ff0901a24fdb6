import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvactivation.errors import BudgetError, TruncationError
from cvactivation.fock import (
    DensityMatrix,
    FockCutoff,
    OperatorMatrix,
    PureState,
    displacement_defect,
    displacement_op,
    fidelity,
    identity_op,
    ladder_ops,
    parity_op,
    pure_fidelity,
    tensor,
    trace_norm,
)
from cvactivation.states import fock, coherent, thermal

from conftest import random_density


def test_cutoff_requires_dim_two():
    with pytest.raises(ValueError):
        FockCutoff(1)


def test_ladder_matrix_elements():
    a, adag, n = ladder_ops(3)
    one = np.array([0, 1, 0], dtype=complex)
    two = np.array([0, 0, 1], dtype=complex)
    assert np.allclose(a.matrix @ one, [1, 0, 0])
    assert np.allclose(a.matrix @ two, [0, math.sqrt(2), 0])
    assert np.allclose(np.diag(n.matrix), [0, 1, 2])


def test_commutator_identity_on_leading_block():
    a, adag, _ = ladder_ops(20)
    comm = a.matrix @ adag.matrix - adag.matrix @ a.matrix
    assert np.allclose(comm[:19, :19], np.eye(19))


def test_parity_diagonal_and_involution():
    pi = parity_op(4)
    assert np.allclose(np.diag(pi.matrix), [1, -1, 1, -1])
    assert np.allclose(pi.matrix @ pi.matrix, np.eye(4))
    assert pure_fidelity(fock(1, 4), fock(1, 4).to_density()) == pytest.approx(1.0)
    assert fock(1, 4).expectation(pi).real == pytest.approx(-1.0)


def test_parity_thermal_expectation():
    rho = thermal(1.0, 40)
    val = rho.expectation(parity_op(40)).real
    assert val == pytest.approx(1.0 / 3.0, abs=1e-10)


def test_parity_conjugates_annihilation():
    a, _, _ = ladder_ops(12)
    pi = parity_op(12).matrix
    assert np.array_equal(pi @ a.matrix @ pi, -a.matrix)


def test_displacement_identity_at_zero():
    d = displacement_op(0.0, 10)
    assert np.allclose(d.matrix, np.eye(10))


def test_displacement_vacuum_overlap():
    d = displacement_op(1.0, 30)
    assert d.matrix[0, 0].real == pytest.approx(math.exp(-0.5), abs=1e-8)


def test_displacement_inverse():
    alpha = 0.7 + 0.3j
    d = displacement_op(alpha, 40)
    dinv = displacement_op(-alpha, 40)
    assert np.max(np.abs(d.matrix @ dinv.matrix - np.eye(40))) < 1e-8


def test_displacement_composition_phase():
    # D(a) D(b) = exp(i Im(a b*)) D(a+b) on states away from the cutoff;
    # the last few rows of the truncated matrices carry path-cut artifacts
    alpha, beta = 0.8 - 0.2j, -0.3 + 0.9j
    da = displacement_op(alpha, 40).matrix
    db = displacement_op(beta, 40).matrix
    dsum = displacement_op(alpha + beta, 40).matrix
    phase = np.exp(1j * (alpha * np.conj(beta)).imag)
    for n in range(16):
        basis = np.zeros(40, dtype=complex)
        basis[n] = 1.0
        lhs = da @ (db @ basis)
        rhs = phase * (dsum @ basis)
        assert np.max(np.abs(lhs - rhs)) < 1e-6


def test_displacement_guard_raises():
    with pytest.raises(TruncationError):
        displacement_op(3.0, 8)
    assert displacement_defect(0.5, 30) < 1e-10


def test_density_matrix_invariants_enforced():
    bad = np.diag([0.6, 0.6]).astype(complex)
    with pytest.raises(ValueError):
        DensityMatrix(bad, FockCutoff(2))
    asym = np.array([[0.5, 0.1], [0.4, 0.5]], dtype=complex)
    with pytest.raises(ValueError):
        DensityMatrix(asym, FockCutoff(2))
    neg = np.diag([1.2, -0.2]).astype(complex)
    with pytest.raises(ValueError):
        DensityMatrix(neg, FockCutoff(2))


def test_pure_state_norm_enforced():
    with pytest.raises(ValueError):
        PureState(np.array([1.0, 1.0]), FockCutoff(2))


def test_operator_hermitian_flag_checked():
    with pytest.raises(ValueError):
        OperatorMatrix(np.array([[0, 1], [0, 0]], dtype=complex), hermitian=True, norm_bound=1)


def test_mixed_cutoff_rejected():
    with pytest.raises(ValueError):
        fidelity(fock(0, 4).to_density(), fock(0, 5).to_density())


def test_fidelity_examples():
    vac = fock(0, 30).to_density()
    one = fock(1, 30).to_density()
    alpha = coherent(1.0, 30).to_density()
    assert fidelity(vac, vac) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(vac, one) == pytest.approx(0.0, abs=1e-12)
    assert fidelity(vac, alpha) == pytest.approx(math.exp(-1.0), abs=1e-8)


def test_fidelity_symmetric(rng):
    a = random_density(rng, 6)
    b = random_density(rng, 6)
    assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-8)


def test_trace_norm_examples():
    assert trace_norm(identity_op(7)) == pytest.approx(7.0)
    vac = fock(0, 5).to_density()
    one = fock(1, 5).to_density()
    assert trace_norm(vac.matrix - vac.matrix) == 0.0
    assert trace_norm(vac.matrix - one.matrix) == pytest.approx(2.0, abs=1e-12)


def test_tensor_trace_and_norm_multiplicative(rng):
    a = random_density(rng, 5)
    b = random_density(rng, 5)
    prod = tensor(a, b)
    assert np.real(np.trace(prod.matrix)) == pytest.approx(1.0, abs=1e-10)
    pi = parity_op(3)
    lifted = tensor(pi, identity_op(3))
    assert lifted.norm_bound == pytest.approx(1.0)
    one_vac = tensor(fock(1, 3).to_density(), fock(0, 3).to_density())
    assert np.real(np.trace(lifted.matrix @ one_vac.matrix)) == pytest.approx(-1.0)


def test_tensor_budget():
    a = random_density(np.random.default_rng(0), 70)
    with pytest.raises(BudgetError):
        tensor(a, a)


def test_two_copy_trace_norm_bound(rng):
    for _ in range(5):
        a = random_density(rng, 5)
        b = random_density(rng, 5)
        lhs = trace_norm(np.kron(a.matrix, a.matrix) - np.kron(b.matrix, b.matrix))
        rhs = 2.0 * trace_norm(a.matrix - b.matrix)
        assert lhs <= rhs + 1e-10


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_fuchs_van_de_graaff(seed):
    rng = np.random.default_rng(seed)
    a = random_density(rng, 5)
    b = random_density(rng, 5)
    f = fidelity(a, b)
    half_dist = 0.5 * trace_norm(a.matrix - b.matrix)
    assert 1.0 - math.sqrt(f) <= half_dist + 1e-9
    assert half_dist <= math.sqrt(1.0 - f) + 1e-9
