"""Exact diagonalization of the qubit Hamiltonian in the particle-number
sector; the full-CI ground truth for energies and fidelities."""
from __future__ import annotations

import numpy as np

from .fcidump import MolecularHamiltonian, to_fermion_hamiltonian
from .fermion import jordan_wigner
from .pauli import PauliSum, ResourceLimitError, term_action
from .statevector import StateVector, infidelity

QUBIT_CAP = 12
DEGENERACY_GAP = 1e-9
RESIDUAL_TOL = 1e-8


class FciSolution:
    """Lowest eigenpair of H_P restricted to one electron-count sector."""

    __slots__ = ("energy", "ground_state", "sector", "degeneracy_flag",
                 "core_energy", "_ground_basis")

    def __init__(self, energy, ground_state, sector, degeneracy_flag,
                 core_energy, ground_basis):
        self.energy = float(energy)
        self.ground_state = ground_state
        self.sector = int(sector)
        self.degeneracy_flag = bool(degeneracy_flag)
        self.core_energy = float(core_energy)
        self._ground_basis = ground_basis  # columns: degenerate eigenvectors

    def __repr__(self):
        flag = ", degenerate" if self.degeneracy_flag else ""
        return (f"FciSolution(E={self.energy:.9f}, "
                f"{self.sector} electrons{flag})")


def sector_indices(n_qubits: int, n_electrons: int) -> np.ndarray:
    basis = np.arange(1 << n_qubits, dtype=np.int64)
    return basis[np.bitwise_count(basis) == n_electrons]


def sector_matrix(h_p: PauliSum, indices: np.ndarray) -> np.ndarray:
    """Dense H_P block over the given basis states.

    Individual Pauli terms may map a sector state outside the sector;
    for a particle-conserving sum those contributions cancel exactly, so
    they are dropped rather than accumulated.
    """
    dim = len(indices)
    position = np.full(1 << h_p.n_qubits, -1, dtype=np.int64)
    position[indices] = np.arange(dim)
    cols = np.arange(dim)
    mat = np.zeros((dim, dim), dtype=complex)
    for (x, z), coeff in h_p.terms.items():
        targets, phases = term_action(h_p.n_qubits, x, z)
        rows = position[targets[indices]]
        keep = rows >= 0
        mat[rows[keep], cols[keep]] += coeff * phases[indices][keep]
    return mat


def solve_fci(ham: MolecularHamiltonian) -> FciSolution:
    """Ground state of the JW-mapped Hamiltonian in the electron sector.

    Reported energy includes the core energy. The ground-state phase is
    fixed by making the largest amplitude real positive.
    """
    n_qubits = ham.n_qubits
    if n_qubits > QUBIT_CAP:
        raise ResourceLimitError(
            f"{n_qubits} qubits exceeds the exact-diagonalization cap "
            f"{QUBIT_CAP}")
    fermion_h, core = to_fermion_hamiltonian(ham)
    h_p = jordan_wigner(fermion_h)
    indices = sector_indices(n_qubits, ham.n_electrons)
    mat = sector_matrix(h_p, indices)
    eigenvalues, eigenvectors = np.linalg.eigh(mat)

    degenerate = (len(eigenvalues) > 1
                  and eigenvalues[1] - eigenvalues[0] < DEGENERACY_GAP)
    n_ground = int(np.sum(eigenvalues - eigenvalues[0] < DEGENERACY_GAP))

    def embed(column):
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[indices] = column
        pivot = int(np.argmax(np.abs(amps)))
        phase = amps[pivot] / abs(amps[pivot])
        return StateVector(n_qubits, amps / phase)

    ground = embed(eigenvectors[:, 0])
    basis = [embed(eigenvectors[:, k]) for k in range(n_ground)]

    residual = mat @ eigenvectors[:, 0] - eigenvalues[0] * eigenvectors[:, 0]
    if np.linalg.norm(residual) > RESIDUAL_TOL:
        raise AssertionError("eigenpair residual above tolerance")

    return FciSolution(eigenvalues[0] + core, ground, ham.n_electrons,
                       degenerate, core, basis)


def infidelity_vs_fci(prepared: StateVector, sol: FciSolution) -> float:
    """State-preparation error against the FCI ground space.

    For a degenerate ground state this is the minimum over the whole
    degenerate subspace, 1 - ||P|psi>||, so the metric does not depend on
    the arbitrary eigenvector basis returned by the solver.
    """
    if not sol.degeneracy_flag:
        return infidelity(prepared, sol.ground_state)
    overlap_sq = sum(abs(prepared.inner(v)) ** 2 for v in sol._ground_basis)
    return 1.0 - float(np.sqrt(overlap_sq))
