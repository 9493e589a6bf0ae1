import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from vqebench.fermion import (
    FermionOperator,
    LadderProduct,
    anti_hermitian_pair,
    jordan_wigner,
    number_operator,
)
from vqebench.pauli import PauliSum, PauliTerm, to_matrix
from vqebench.statevector import (
    StateVector,
    apply_pauli_exponential,
    apply_pool_operator,
    expectation,
    hartree_fock_reference,
    infidelity,
)


def paired_double_tau(n_so=4):
    """JW image of the CAS(2,2) paired double excitation minus conjugate."""
    t = FermionOperator(n_so, [LadderProduct(
        [(2, True), (3, True), (1, False), (0, False)])])
    return jordan_wigner(anti_hermitian_pair(t))


def singlet_single_tau(n_so=4):
    t = FermionOperator(n_so, [
        LadderProduct([(2, True), (0, False)]),
        LadderProduct([(3, True), (1, False)]),
    ])
    return jordan_wigner(anti_hermitian_pair(t))


class TestHartreeFockReference:
    def test_two_electrons_in_four_qubits(self):
        ref = hartree_fock_reference(4, 2)
        assert ref.amplitudes[0b0011] == 1.0
        assert np.count_nonzero(ref.amplitudes) == 1

    def test_vacuum(self):
        ref = hartree_fock_reference(2, 0)
        assert ref.amplitudes[0] == 1.0

    def test_particle_count(self):
        ref = hartree_fock_reference(4, 2)
        assert expectation(ref, number_operator(4)) == pytest.approx(2.0)

    def test_too_many_electrons(self):
        with pytest.raises(ValueError):
            hartree_fock_reference(2, 3)


class TestPauliExponential:
    def test_rabi_rotation(self):
        out = apply_pauli_exponential(StateVector(1),
                                      PauliTerm.from_string(1, "X0"),
                                      np.pi / 2)
        np.testing.assert_allclose(out.amplitudes, [0.0, 1j], atol=1e-15)

    def test_zero_angle_is_identity(self):
        state = StateVector(2, np.array([0.5, 0.5, 0.5, 0.5], dtype=complex))
        out = apply_pauli_exponential(state,
                                      PauliTerm.from_string(2, "Y0 Z1"), 0.0)
        np.testing.assert_array_equal(out.amplitudes, state.amplitudes)

    def test_z_rotation_is_global_phase_on_basis_state(self):
        theta = 0.731
        out = apply_pauli_exponential(StateVector(1),
                                      PauliTerm.from_string(1, "Z0"), theta)
        np.testing.assert_allclose(out.amplitudes[0], np.exp(1j * theta),
                                   atol=1e-14)
        assert infidelity(out, StateVector(1)) == pytest.approx(0.0, abs=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            apply_pauli_exponential(StateVector(1),
                                    PauliTerm(1, 1, 0, 1j), 0.3)

    @given(st.floats(-np.pi, np.pi, allow_nan=False), st.integers(0, 15),
           st.integers(0, 15))
    @settings(max_examples=50)
    def test_matches_matrix_exponential(self, angle, x_mask, z_mask):
        term = PauliTerm(4, x_mask, z_mask, 1.0)
        rng = np.random.default_rng(x_mask * 16 + z_mask)
        amps = rng.normal(size=16) + 1j * rng.normal(size=16)
        amps /= np.linalg.norm(amps)
        state = StateVector(4, amps)
        out = apply_pauli_exponential(state, term, angle)
        dense = expm(1j * angle * to_matrix(PauliSum.from_term(term)))
        np.testing.assert_allclose(out.amplitudes, dense @ amps, atol=1e-10)
        assert abs(out.norm() - 1.0) < 1e-10


class TestPoolOperator:
    def test_zero_angle(self):
        ref = hartree_fock_reference(4, 2)
        out = apply_pool_operator(ref, paired_double_tau(), 0.0)
        np.testing.assert_allclose(out.amplitudes, ref.amplitudes, atol=1e-15)

    def test_preserves_particle_number(self):
        ref = hartree_fock_reference(4, 2)
        out = apply_pool_operator(ref, paired_double_tau(), np.pi / 2)
        assert expectation(out, number_operator(4)) == pytest.approx(2.0)
        assert abs(out.norm() - 1.0) < 1e-10

    @pytest.mark.parametrize("tau_builder", [paired_double_tau,
                                             singlet_single_tau])
    @pytest.mark.parametrize("theta", [-2.1, -0.3, 0.17, 1.9])
    def test_matches_dense_expm(self, tau_builder, theta):
        tau = tau_builder()
        rng = np.random.default_rng(7)
        amps = rng.normal(size=16) + 1j * rng.normal(size=16)
        amps /= np.linalg.norm(amps)
        state = StateVector(4, amps)
        out = apply_pool_operator(state, tau, theta)
        dense = expm(theta * to_matrix(tau))
        np.testing.assert_allclose(out.amplitudes, dense @ amps, atol=1e-10)

    def test_rejects_hermitian_operator(self):
        herm = PauliSum.from_term(PauliTerm.from_string(2, "X0", 1.0))
        with pytest.raises(ValueError):
            apply_pool_operator(StateVector(2), herm, 0.5)


class TestExpectation:
    def test_z_convention(self):
        z = PauliSum.from_term(PauliTerm.from_string(1, "Z0"))
        assert expectation(StateVector(1), z) == pytest.approx(1.0)

    def test_identity_returns_coefficient(self):
        rng = np.random.default_rng(3)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        amps /= np.linalg.norm(amps)
        state = StateVector(3, amps)
        c = 1.37
        assert expectation(state, PauliSum.identity(3, c)) == pytest.approx(c)

    def test_rejects_non_hermitian(self):
        bad = PauliSum.from_term(PauliTerm.from_string(1, "X0", 1j))
        with pytest.raises(ValueError):
            expectation(StateVector(1), bad)

    @given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7),
                              st.floats(-2, 2, allow_nan=False)),
                    min_size=1, max_size=6),
           st.integers(0, 2 ** 10))
    @settings(max_examples=50)
    def test_matches_dense_quadratic_form(self, term_specs, seed):
        s = PauliSum(3, {(x, z): c for x, z, c in term_specs})
        rng = np.random.default_rng(seed)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        amps /= np.linalg.norm(amps)
        state = StateVector(3, amps)
        dense = float(np.real(np.vdot(amps, to_matrix(s) @ amps)))
        assert expectation(state, s) == pytest.approx(dense, abs=1e-10)


class TestInfidelity:
    def test_identical_states(self):
        s = hartree_fock_reference(3, 2)
        assert infidelity(s, s) == 0.0

    def test_orthogonal_states(self):
        a = StateVector.basis_state(2, 0)
        b = StateVector.basis_state(2, 3)
        assert infidelity(a, b) == pytest.approx(1.0)

    @given(st.floats(-np.pi, np.pi, allow_nan=False))
    def test_global_phase_invariance(self, phi):
        rng = np.random.default_rng(11)
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps /= np.linalg.norm(amps)
        a = StateVector(2, amps)
        b = StateVector(2, np.exp(1j * phi) * amps)
        assert infidelity(a, b) == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(Exception):
            infidelity(StateVector(1), StateVector(2))
