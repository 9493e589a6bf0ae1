"""Built-in invariant battery behind the ``selftest`` CLI command.

Self-contained (synthetic Hamiltonians, seeded randomness) so it can run
anywhere the package is installed, without test data or extra packages.
"""
from __future__ import annotations

import numpy as np

from .adapt import AdaptConfig, MeasurementLedger, run_adapt, run_vqe, screen_pool
from .ansatz import (
    Ansatz,
    build_uccsd_pool,
    compile_circuit,
    prepare_state,
    simulate_circuit,
)
from .fcidump import MolecularHamiltonian, to_fermion_hamiltonian
from .fermion import jordan_wigner, number_operator, verify_car
from .fci import infidelity_vs_fci, solve_fci
from .pauli import PauliSum, commutator, to_matrix
from .statevector import StateVector, expectation, hartree_fock_reference


def _expm_anti_hermitian(mat: np.ndarray, scale: float) -> np.ndarray:
    """exp(scale * A) for anti-Hermitian A via eigendecomposition of iA."""
    herm = 1j * mat
    eigenvalues, vectors = np.linalg.eigh(herm)
    return (vectors * np.exp(-1j * scale * eigenvalues)) @ vectors.conj().T


def _synthetic_hamiltonian() -> MolecularHamiltonian:
    h1 = np.array([[-1.25, 0.07], [0.07, -0.47]])
    h2 = np.zeros((2, 2, 2, 2))
    pairs = {(0, 0, 0, 0): 0.68, (1, 1, 1, 1): 0.65, (0, 0, 1, 1): 0.60,
             (0, 1, 0, 1): 0.18, (0, 0, 0, 1): 0.05}
    for (i, j, k, l), value in pairs.items():
        for p, q, r, s in ((i, j, k, l), (j, i, k, l), (i, j, l, k),
                           (j, i, l, k), (k, l, i, j), (l, k, i, j),
                           (k, l, j, i), (l, k, j, i)):
            h2[p, q, r, s] = value
    return MolecularHamiltonian(2, 2, 0.52, h1, h2, label="selftest CAS(2,2)")


def run_selftest(writer=print) -> bool:
    """Run every invariant check; returns True when all pass."""
    checks = []

    def check(name, passed):
        checks.append(passed)
        writer(f"[{'PASS' if passed else 'FAIL'}] {name}")

    for n in range(1, 7):
        check(f"canonical anticommutation relations, {n} modes",
              verify_car(n))

    pool22 = build_uccsd_pool(2, 2)
    check("CAS(2,2) pool holds exactly 2 operators", len(pool22) == 2)

    rng = np.random.default_rng(2024)
    for n_spatial, n_electrons in ((2, 2), (3, 2), (4, 2), (4, 4)):
        pool = build_uccsd_pool(n_spatial, n_electrons)
        n_qubits = 2 * n_spatial
        n_mat = to_matrix(number_operator(n_qubits))
        ok = True
        for op in pool:
            mat = to_matrix(op.qubit_form)
            ok &= bool(np.allclose(mat, -mat.conj().T, atol=1e-12))
            ok &= bool(np.allclose(mat @ n_mat, n_mat @ mat, atol=1e-12))
            ok &= op.qubit_form.terms_mutually_commute()
        check(f"pool({n_spatial},{n_electrons}) element invariants", ok)

    for n_spatial, n_electrons in ((2, 2), (3, 2)):
        pool = build_uccsd_pool(n_spatial, n_electrons)
        n_qubits = 2 * n_spatial
        ref = hartree_fock_reference(n_qubits, n_electrons)
        ok_apply = ok_circuit = True
        for op in pool:
            theta = float(rng.uniform(-np.pi, np.pi))
            ansatz = Ansatz(pool, [(op.id, theta)])
            fast = prepare_state(ansatz, ref)
            dense = _expm_anti_hermitian(to_matrix(op.qubit_form),
                                         theta) @ ref.amplitudes
            ok_apply &= bool(np.allclose(fast.amplitudes, dense,
                                         atol=1e-10))
            gated = simulate_circuit(compile_circuit(ansatz), ref)
            ok_circuit &= bool(np.allclose(gated.amplitudes,
                                           fast.amplitudes, atol=1e-10))
        check(f"pool exponentials match dense matrix exponential "
              f"({n_spatial},{n_electrons})", ok_apply)
        check(f"compiled circuits match pool exponentials "
              f"({n_spatial},{n_electrons})", ok_circuit)

    ok = True
    for _ in range(20):
        n = 3
        terms_a = {(int(rng.integers(8)), int(rng.integers(8))):
                   complex(rng.normal(), rng.normal()) for _ in range(3)}
        terms_b = {(int(rng.integers(8)), int(rng.integers(8))):
                   complex(rng.normal(), rng.normal()) for _ in range(3)}
        a, b = PauliSum(n, terms_a), PauliSum(n, terms_b)
        ma, mb = to_matrix(a), to_matrix(b)
        ok &= bool(np.allclose(to_matrix(commutator(a, b)),
                               ma @ mb - mb @ ma, atol=1e-10))
    check("symbolic commutator matches dense commutator", ok)

    ham = _synthetic_hamiltonian()
    sol = solve_fci(ham)
    fermion_h, core = to_fermion_hamiltonian(ham)
    h_p = jordan_wigner(fermion_h)
    check("JW Hamiltonian is Hermitian", h_p.is_hermitian())
    check("JW Hamiltonian conserves particle number",
          len(commutator(h_p, number_operator(4))) == 0)
    grads = screen_pool(sol.ground_state, h_p, build_uccsd_pool(2, 2),
                        MeasurementLedger())
    check("pool gradients vanish on the exact eigenstate",
          bool(np.max(np.abs(grads)) < 1e-8))

    floor_ok = True
    infid_ok = True
    for optimizer in ("nelder_mead", "lbfgs"):
        cfg = AdaptConfig(optimizer=optimizer, tol_rel_energy=1e-8)
        for runner in (run_vqe, run_adapt):
            result = runner(ham, cfg)
            floor_ok &= result.energy >= sol.energy - 1e-9
            infid_ok &= infidelity_vs_fci(result.prepared_state(),
                                          sol) < 1e-4
    check("variational floor respected by both drivers", floor_ok)
    check("optimized states overlap the exact ground state", infid_ok)

    passed = all(checks)
    writer(f"selftest: {sum(checks)}/{len(checks)} checks passed")
    return passed
