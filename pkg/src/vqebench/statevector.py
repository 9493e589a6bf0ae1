"""Dense complex statevector with exact Pauli-exponential evolution.

Basis index bit ``q`` is the value of qubit ``q`` (qubit 0 least
significant); qubit value 1 means the corresponding spin orbital is
occupied.
"""
from __future__ import annotations

import math

import numpy as np

from .pauli import (
    DimensionMismatchError,
    PauliSum,
    PauliTerm,
    term_action,
)

NORM_TOL = 1e-10


class StateVector:
    """Normalized amplitude vector over the 2^n computational basis."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes=None):
        self.n_qubits = n_qubits
        dim = 1 << n_qubits
        if amplitudes is None:
            amps = np.zeros(dim, dtype=complex)
            amps[0] = 1.0
        else:
            amps = np.asarray(amplitudes, dtype=complex)
            if amps.shape != (dim,):
                raise ValueError(f"expected {dim} amplitudes, "
                                 f"got shape {amps.shape}")
        self.amplitudes = amps

    @classmethod
    def basis_state(cls, n_qubits: int, index: int) -> "StateVector":
        state = cls(n_qubits)
        state.amplitudes[0] = 0.0
        state.amplitudes[index] = 1.0
        return state

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def check_normalized(self):
        if abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {self.norm()} deviates from 1")

    def inner(self, other: "StateVector") -> complex:
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatchError("statevector sizes differ")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self):
        return f"StateVector({self.n_qubits} qubits)"


def hartree_fock_reference(n_qubits: int, n_electrons: int) -> StateVector:
    """Computational basis state occupying qubits 0..n_electrons-1.

    Under interleaved spin-orbital ordering this doubly occupies the
    lowest spatial orbitals.
    """
    if n_electrons > n_qubits:
        raise ValueError(
            f"{n_electrons} electrons do not fit in {n_qubits} qubits")
    return StateVector.basis_state(n_qubits, (1 << n_electrons) - 1)


def apply_pauli_term(state: StateVector, x_mask: int, z_mask: int,
                     coefficient: complex = 1.0) -> np.ndarray:
    """Amplitudes of ``coefficient * P |state>`` for a single string."""
    targets, phases = term_action(state.n_qubits, x_mask, z_mask)
    out = np.empty_like(state.amplitudes)
    out[targets] = (coefficient * phases) * state.amplitudes
    return out


def apply_pauli_exponential(state: StateVector, p: PauliTerm,
                            angle: float) -> StateVector:
    """``exp(i * angle * P) |state>`` for a Hermitian unit-coefficient P.

    Exact because P squares to the identity:
    ``cos(angle) I + i sin(angle) P``.
    """
    coeff = p.coefficient
    if abs(coeff.imag) > 1e-12 or abs(abs(coeff.real) - 1.0) > 1e-12:
        raise ValueError(
            f"apply_pauli_exponential needs a real unit coefficient, "
            f"got {coeff}")
    theta = angle * coeff.real
    rotated = apply_pauli_term(state, p.x_mask, p.z_mask)
    new_amps = math.cos(theta) * state.amplitudes \
        + 1j * math.sin(theta) * rotated
    return StateVector(state.n_qubits, new_amps)


def apply_pool_operator(state: StateVector, tau: PauliSum,
                        theta: float) -> StateVector:
    """``exp(theta * tau) |state>`` for an anti-Hermitian tau.

    Applied as the product of per-term exponentials in canonical term
    order; exact when the terms mutually commute, which every pool
    element guarantees (checked at pool construction).
    """
    if state.n_qubits != tau.n_qubits:
        raise DimensionMismatchError("operator and state sizes differ")
    if not tau.is_anti_hermitian():
        raise ValueError("pool operator must be anti-Hermitian")
    out = state
    for term in tau.sorted_terms():
        weight = term.coefficient.imag  # term = i * weight * P
        out = apply_pauli_exponential(
            out, PauliTerm(tau.n_qubits, term.x_mask, term.z_mask, 1.0),
            theta * weight)
    return out


def expectation(state: StateVector, observable: PauliSum) -> float:
    """``<state| observable |state>`` for a Hermitian observable.

    Evaluated term by term against the basis action, never materializing
    a matrix; the imaginary residue is asserted below 1e-10.
    """
    if state.n_qubits != observable.n_qubits:
        raise DimensionMismatchError("operator and state sizes differ")
    if not observable.is_hermitian():
        raise ValueError("expectation requires a Hermitian observable")
    amps = state.amplitudes
    scratch = np.empty_like(amps)
    total = 0.0 + 0.0j
    for term in observable.sorted_terms():
        targets, phases = term_action(state.n_qubits, term.x_mask,
                                      term.z_mask)
        scratch[targets] = phases * amps  # scratch = P |state>
        total += term.coefficient * np.vdot(amps, scratch)
    if abs(total.imag) > 1e-10:
        raise AssertionError(
            f"Hermitian expectation came out complex: {total}")
    return float(total.real)


def infidelity(state: StateVector, reference: StateVector) -> float:
    """``1 - |<reference|state>|``; insensitive to global phase."""
    if state.n_qubits != reference.n_qubits:
        raise DimensionMismatchError("statevector sizes differ")
    return 1.0 - abs(state.inner(reference))
