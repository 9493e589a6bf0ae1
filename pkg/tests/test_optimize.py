from pathlib import Path

import numpy as np
import pytest

from vqebench.ansatz import build_uccsd_pool, full_uccsd_ansatz, prepare_state
from vqebench.fcidump import load_fcidump, to_fermion_hamiltonian
from vqebench.fermion import jordan_wigner
from vqebench.optimize import (
    Objective,
    central_difference_gradient,
    minimize_lbfgs,
    minimize_nelder_mead,
)
from vqebench.pauli import commutator
from vqebench.statevector import expectation, hartree_fock_reference

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def h2_problem():
    ham = load_fcidump(DATA / "h2_r0.735.fcidump", label="H2 0.735")
    fermion_h, core = to_fermion_hamiltonian(ham)
    h_p = jordan_wigner(fermion_h)
    pool = build_uccsd_pool(ham.n_spatial, ham.n_electrons)
    ref = hartree_fock_reference(ham.n_qubits, ham.n_electrons)
    ansatz = full_uccsd_ansatz(pool)

    def energy(theta):
        return expectation(prepare_state(ansatz.with_thetas(theta), ref),
                           h_p) + core

    return Objective(energy, len(ansatz)), h_p, pool, ref, core


class TestCentralDifferenceGradient:
    def test_exact_on_quadratic(self):
        obj = Objective(lambda t: float(t[0] ** 2), 1)
        for h in (1e-2, 1e-4, 1e-6):
            grad = central_difference_gradient(obj, np.array([1.0]), h)
            assert grad[0] == pytest.approx(2.0, abs=1e-7)

    def test_constant_objective(self):
        obj = Objective(lambda t: 3.3, 4)
        grad = central_difference_gradient(obj, np.zeros(4), 1e-5)
        np.testing.assert_array_equal(grad, np.zeros(4))

    def test_costs_two_evals_per_dimension(self):
        obj = Objective(lambda t: float(t @ t), 5)
        central_difference_gradient(obj, np.zeros(5), 1e-5)
        assert obj.evaluation_count == 10

    def test_rejects_bad_step(self):
        obj = Objective(lambda t: 0.0, 1)
        with pytest.raises(ValueError):
            central_difference_gradient(obj, np.zeros(1), 0.0)

    def test_vqe_gradient_at_zero_matches_commutator(self, h2_problem):
        obj, h_p, pool, ref, _ = h2_problem
        grad = central_difference_gradient(obj, np.zeros(obj.dimension),
                                           1e-5)
        for k, op in enumerate(pool):
            comm = commutator(h_p, op.qubit_form)
            expected = expectation(ref, comm)
            assert grad[k] == pytest.approx(expected, abs=1e-6)


class TestNelderMead:
    def test_one_dimensional_quadratic(self):
        obj = Objective(lambda t: float((t[0] - 0.3) ** 2), 1)
        result = minimize_nelder_mead(obj, np.zeros(1), 1e-10)
        assert result.converged
        assert result.theta_opt[0] == pytest.approx(0.3, abs=1e-4)

    def test_constant_objective_converges_immediately(self):
        obj = Objective(lambda t: 1.5, 2)
        result = minimize_nelder_mead(obj, np.zeros(2), 1e-6)
        assert result.converged
        assert result.energy == 1.5
        assert result.n_energy_evals == 3  # just the initial simplex

    def test_budget_exhaustion_flags_unconverged(self):
        obj = Objective(lambda t: float(np.sum(t ** 2)), 3)
        result = minimize_nelder_mead(obj, np.ones(3), 0.0, max_evals=20)
        assert not result.converged
        assert result.n_energy_evals >= 20

    def test_h2_vqe_reaches_fci(self, h2_problem):
        obj, *_ = h2_problem
        result = minimize_nelder_mead(obj, np.zeros(obj.dimension), 1e-6)
        assert result.converged
        # frozen FCI energy for this dump, from the generator's
        # determinant CI
        assert result.energy == pytest.approx(-1.137306036, abs=1e-6)

    def test_accounting_matches_counter(self):
        obj = Objective(lambda t: float(np.sum((t - 0.2) ** 2)), 2)
        result = minimize_nelder_mead(obj, np.zeros(2), 1e-9)
        assert result.n_energy_evals == obj.evaluation_count

    def test_deterministic(self):
        runs = []
        for _ in range(2):
            obj = Objective(lambda t: float((t[0] - 0.4) ** 4
                                            + (t[1] + 0.1) ** 2), 2)
            runs.append(minimize_nelder_mead(obj, np.zeros(2), 1e-8))
        assert runs[0].energy == runs[1].energy
        np.testing.assert_array_equal(runs[0].theta_opt, runs[1].theta_opt)
        assert runs[0].trace == runs[1].trace


class TestLbfgs:
    def test_quadratic_bowl_three_dimensions(self):
        scales = np.array([1.0, 2.0, 0.5])
        center = np.array([0.3, -0.2, 0.7])

        obj = Objective(lambda t: float(scales @ (t - center) ** 2), 3)
        result = minimize_lbfgs(obj, np.zeros(3), 1e-12, h=1e-6)
        assert result.converged
        np.testing.assert_allclose(result.theta_opt, center, atol=1e-6)
        assert result.energy < 1e-8
        assert len(result.trace) <= 10

    def test_already_optimal_start(self):
        obj = Objective(lambda t: float((t[0] - 1.0) ** 2), 1)
        result = minimize_lbfgs(obj, np.array([1.0]), 1e-6)
        assert result.converged
        assert result.n_gradient_evals == 1
        assert result.energy == 0.0

    def test_h2_vqe_matches_nelder_mead_with_fewer_evals(self, h2_problem):
        obj, *_ = h2_problem
        start = obj.evaluation_count
        nm = minimize_nelder_mead(obj, np.zeros(obj.dimension), 1e-6)
        nm_evals = obj.evaluation_count - start
        start = obj.evaluation_count
        lb = minimize_lbfgs(obj, np.zeros(obj.dimension), 1e-6)
        lb_evals = obj.evaluation_count - start
        assert abs(nm.energy - lb.energy) < 1e-6
        assert lb_evals < nm_evals

    def test_monotone_accepted_trace(self, h2_problem):
        obj, *_ = h2_problem
        result = minimize_lbfgs(obj, np.zeros(obj.dimension), 1e-8)
        diffs = np.diff(result.trace)
        assert np.all(diffs <= 1e-12)

    def test_gradient_accounting(self):
        obj = Objective(lambda t: float(np.sum((t - 0.5) ** 2)), 4)
        result = minimize_lbfgs(obj, np.zeros(4), 1e-10)
        # every gradient call costs 2 * dimension evaluations; the rest
        # are single energy evaluations
        assert result.n_energy_evals == obj.evaluation_count
        assert result.n_energy_evals >= result.n_gradient_evals * 8

    def test_deterministic(self):
        results = []
        for _ in range(2):
            obj = Objective(
                lambda t: float((t[0] - 0.4) ** 2 + 0.3 * (t[1] ** 4)), 2)
            results.append(minimize_lbfgs(obj, np.zeros(2), 1e-9))
        assert results[0].energy == results[1].energy
        np.testing.assert_array_equal(results[0].theta_opt,
                                      results[1].theta_opt)
