"""Second-quantized fermionic operators and their Jordan-Wigner qubit image.

Spin orbital ``p`` maps to qubit ``p``; qubit value 1 means occupied.
Spin orbitals are interleaved: spatial orbital ``m`` gives spin orbitals
``2m`` (alpha) and ``2m + 1`` (beta).
"""
from __future__ import annotations

import numpy as np

from .pauli import PauliSum, PauliTerm, to_matrix


class LadderProduct:
    """Ordered product of ladder operators with a complex coefficient.

    ``factors`` is a list of ``(spin_orbital, dagger)`` pairs applied
    right-to-left on kets, stored left-to-right as written. Factor order
    is preserved exactly as given.
    """

    __slots__ = ("factors", "coefficient")

    def __init__(self, factors, coefficient=1.0):
        self.factors = tuple((int(p), bool(d)) for p, d in factors)
        self.coefficient = complex(coefficient)

    def dagger(self) -> "LadderProduct":
        """Hermitian conjugate: reversed factors, flipped daggers."""
        rev = [(p, not d) for p, d in reversed(self.factors)]
        return LadderProduct(rev, self.coefficient.conjugate())

    def is_pure_excitation(self) -> bool:
        """True when every daggered factor precedes every undaggered one."""
        seen_annihilator = False
        for _, d in self.factors:
            if not d:
                seen_annihilator = True
            elif seen_annihilator:
                return False
        return True

    def __repr__(self):
        ops = " ".join(f"a{p}^" if d else f"a{p}" for p, d in self.factors)
        return f"({self.coefficient}) {ops or '1'}"


class FermionOperator:
    """Linear combination of ladder products over a fixed orbital count."""

    __slots__ = ("n_spin_orbitals", "products")

    def __init__(self, n_spin_orbitals: int, products=()):
        self.n_spin_orbitals = n_spin_orbitals
        self.products = list(products)
        for prod in self.products:
            for p, _ in prod.factors:
                if not 0 <= p < n_spin_orbitals:
                    raise ValueError(
                        f"spin orbital {p} out of range "
                        f"[0, {n_spin_orbitals})")

    def dagger(self) -> "FermionOperator":
        return FermionOperator(self.n_spin_orbitals,
                               [p.dagger() for p in self.products])

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        if self.n_spin_orbitals != other.n_spin_orbitals:
            raise ValueError("orbital counts differ")
        return FermionOperator(self.n_spin_orbitals,
                               self.products + other.products)

    def __sub__(self, other: "FermionOperator") -> "FermionOperator":
        negated = [LadderProduct(p.factors, -p.coefficient)
                   for p in other.products]
        if self.n_spin_orbitals != other.n_spin_orbitals:
            raise ValueError("orbital counts differ")
        return FermionOperator(self.n_spin_orbitals, self.products + negated)

    def __repr__(self):
        return (f"FermionOperator({self.n_spin_orbitals} orbitals, "
                f"{len(self.products)} products)")


def anti_hermitian_pair(t: FermionOperator) -> FermionOperator:
    """``t - t^dagger`` for a pure excitation operator."""
    for prod in t.products:
        if not prod.is_pure_excitation():
            raise ValueError(
                "anti_hermitian_pair requires creation factors before "
                f"annihilation factors, got {prod!r}")
    return t - t.dagger()


def _ladder_image(p: int, dagger: bool, n_qubits: int,
                  dagger_y_sign: float = 1.0) -> PauliSum:
    """JW image of a single ladder operator.

    ``a_p^dagger -> Z_{<p} (X_p - i Y_p) / 2`` and the conjugate for
    ``a_p``. ``dagger_y_sign`` corrupts the creation image only; it exists
    so the test suite can watch the anticommutation check fail.
    """
    z_chain = (1 << p) - 1
    x_term = PauliTerm(n_qubits, 1 << p, z_chain, 0.5)
    y_coeff = -0.5j * dagger_y_sign if dagger else 0.5j
    y_term = PauliTerm(n_qubits, 1 << p, z_chain | (1 << p), y_coeff)
    return PauliSum.from_terms([x_term, y_term])


def jordan_wigner(f: FermionOperator) -> PauliSum:
    """Jordan-Wigner transform of a fermion operator to a Pauli sum."""
    n = f.n_spin_orbitals
    out = PauliSum(n)
    for prod in f.products:
        acc = PauliSum.identity(n, prod.coefficient)
        for p, d in prod.factors:
            acc = acc * _ladder_image(p, d, n)
        out = out + acc
    return out


def number_operator(n_spin_orbitals: int) -> PauliSum:
    """JW image of the total number operator, ``sum_p (I - Z_p) / 2``."""
    terms = {(0, 0): 0.5 * n_spin_orbitals}
    for p in range(n_spin_orbitals):
        terms[(0, 1 << p)] = -0.5
    return PauliSum(n_spin_orbitals, terms)


def sz_operator(n_spin_orbitals: int) -> PauliSum:
    """JW image of S_z under interleaved ordering: (n_alpha - n_beta) / 2."""
    terms: dict[tuple[int, int], complex] = {}
    for p in range(n_spin_orbitals):
        sign = 1.0 if p % 2 == 0 else -1.0
        terms[(0, 1 << p)] = terms.get((0, 1 << p), 0.0) - 0.25 * sign
        terms[(0, 0)] = terms.get((0, 0), 0.0) + 0.25 * sign
    return PauliSum(n_spin_orbitals, terms)


def _car_holds(images_create, images_destroy, n: int,
               tol: float = 1e-12) -> bool:
    """Check canonical anticommutation relations on explicit JW images."""
    eye = np.eye(1 << n)
    mats_c = [to_matrix(img) for img in images_create]
    mats_d = [to_matrix(img) for img in images_destroy]
    for p in range(n):
        for q in range(n):
            anti = mats_d[p] @ mats_c[q] + mats_c[q] @ mats_d[p]
            expected = eye if p == q else 0.0 * eye
            if not np.allclose(anti, expected, atol=tol):
                return False
            anti2 = mats_d[p] @ mats_d[q] + mats_d[q] @ mats_d[p]
            if not np.allclose(anti2, 0.0, atol=tol):
                return False
    return True


def verify_car(n: int, dagger_y_sign: float = 1.0) -> bool:
    """True iff the JW images satisfy {a_p, a_q^dag} = delta_pq, {a_p, a_q} = 0.

    Checked densely via Pauli matrices, so n is capped at 8.
    """
    if n > 8:
        raise ValueError("verify_car is a dense self-test, capped at n <= 8")
    creates = [_ladder_image(p, True, n, dagger_y_sign) for p in range(n)]
    destroys = [_ladder_image(p, False, n) for p in range(n)]
    return _car_holds(creates, destroys, n)
