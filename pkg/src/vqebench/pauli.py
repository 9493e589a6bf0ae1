"""Exact symbolic algebra for tensor products of Pauli operators.

Terms are stored symplectically: qubit ``q`` carries an X factor when bit
``q`` of ``x_mask`` is set and a Z factor when bit ``q`` of ``z_mask`` is
set; both bits set mean Y. The ``i`` in ``Y = i X Z`` is folded into the
coefficient during products, so a stored term always reads
``coefficient * (tensor product of I/X/Y/Z)``.

Qubit 0 is the least significant bit of basis-state indices throughout.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

PRUNE_THRESHOLD = 1e-12
HERMITIAN_TOL = 1e-12
MATRIX_QUBIT_CAP = 12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DimensionMismatchError(ValueError):
    """Operands act on different qubit counts."""


class ResourceLimitError(RuntimeError):
    """Requested dense object exceeds the configured size cap."""


def _check_same_qubits(a, b):
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError(
            f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")


def _format_coeff(c: complex) -> str:
    re = f"{c.real:.12g}"
    im = f"{c.imag:+.12g}"
    return f"({re}{im}i)"


def _letter(x_bit: int, z_bit: int) -> str:
    return ("I", "X", "Z", "Y")[x_bit + 2 * z_bit]


class PauliTerm:
    """A single Pauli string with a complex coefficient."""

    __slots__ = ("n_qubits", "x_mask", "z_mask", "coefficient")

    def __init__(self, n_qubits: int, x_mask: int, z_mask: int,
                 coefficient: complex = 1.0):
        limit = 1 << n_qubits
        if x_mask >= limit or z_mask >= limit or x_mask < 0 or z_mask < 0:
            raise ValueError(
                f"mask out of range for {n_qubits} qubits: "
                f"x={x_mask:#x} z={z_mask:#x}")
        self.n_qubits = n_qubits
        self.x_mask = x_mask
        self.z_mask = z_mask
        self.coefficient = complex(coefficient)

    @classmethod
    def from_string(cls, n_qubits: int, spec: str,
                    coefficient: complex = 1.0) -> "PauliTerm":
        """Build from a spec like ``"X0 Z1 Y3"`` (empty string = identity)."""
        x_mask = z_mask = 0
        for token in spec.split():
            letter, qubit = token[0].upper(), int(token[1:])
            if qubit >= n_qubits:
                raise ValueError(f"qubit {qubit} out of range")
            if letter in ("X", "Y"):
                x_mask |= 1 << qubit
            if letter in ("Z", "Y"):
                z_mask |= 1 << qubit
            if letter not in ("X", "Y", "Z", "I"):
                raise ValueError(f"bad Pauli letter {letter!r}")
        return cls(n_qubits, x_mask, z_mask, coefficient)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def pauli_string(self) -> str:
        if self.is_identity:
            return "I"
        parts = []
        for q in range(self.n_qubits):
            x = (self.x_mask >> q) & 1
            z = (self.z_mask >> q) & 1
            if x or z:
                parts.append(f"{_letter(x, z)}{q}")
        return " ".join(parts)

    def __repr__(self):
        return f"{_format_coeff(self.coefficient)} {self.pauli_string()}"

    def __eq__(self, other):
        return (isinstance(other, PauliTerm)
                and self.n_qubits == other.n_qubits
                and self.x_mask == other.x_mask
                and self.z_mask == other.z_mask
                and self.coefficient == other.coefficient)

    def __hash__(self):
        return hash((self.n_qubits, self.x_mask, self.z_mask,
                     self.coefficient))


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Operator product ``a * b`` as a single term, phase in the coefficient.

    Writing each string as ``i**popcount(x & z) * X^x Z^z`` and commuting
    the inner ``Z^z_a X^x_b`` pair gives the phase exponent below; result
    masks are the XOR of the input masks.
    """
    _check_same_qubits(a, b)
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    k = ((a.x_mask & a.z_mask).bit_count()
         + (b.x_mask & b.z_mask).bit_count()
         - (x & z).bit_count()
         + 2 * (a.z_mask & b.x_mask).bit_count()) % 4
    phase = (1, 1j, -1, -1j)[k]
    return PauliTerm(a.n_qubits, x, z, a.coefficient * b.coefficient * phase)


def terms_commute(a: PauliTerm, b: PauliTerm) -> bool:
    """True iff the two Pauli strings commute (symplectic form is even)."""
    return ((a.x_mask & b.z_mask).bit_count()
            + (a.z_mask & b.x_mask).bit_count()) % 2 == 0


class PauliSum:
    """Linear combination of Pauli strings with merged, pruned coefficients.

    Immutable by convention: all arithmetic returns new sums. Terms with
    ``|coefficient| < PRUNE_THRESHOLD`` are dropped on every merge.
    """

    __slots__ = ("n_qubits", "terms")

    def __init__(self, n_qubits: int, terms=None):
        self.n_qubits = n_qubits
        self.terms: dict[tuple[int, int], complex] = {}
        if terms:
            for (x, z), c in dict(terms).items():
                if abs(c) >= PRUNE_THRESHOLD:
                    self.terms[(x, z)] = complex(c)

    @classmethod
    def from_term(cls, term: PauliTerm) -> "PauliSum":
        return cls(term.n_qubits,
                   {(term.x_mask, term.z_mask): term.coefficient})

    @classmethod
    def from_terms(cls, terms) -> "PauliSum":
        terms = list(terms)
        if not terms:
            raise ValueError("need at least one term; use PauliSum(n) for zero")
        out = cls(terms[0].n_qubits)
        acc: dict[tuple[int, int], complex] = {}
        for t in terms:
            if t.n_qubits != out.n_qubits:
                raise DimensionMismatchError("mixed qubit counts in term list")
            key = (t.x_mask, t.z_mask)
            acc[key] = acc.get(key, 0.0) + t.coefficient
        return cls(out.n_qubits, acc)

    @classmethod
    def identity(cls, n_qubits: int, coefficient: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, {(0, 0): coefficient})

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        for (x, z), c in self.terms.items():
            yield PauliTerm(self.n_qubits, x, z, c)

    def sorted_terms(self) -> list[PauliTerm]:
        """Terms in canonical order: lexicographic by (z_mask, x_mask)."""
        keys = sorted(self.terms, key=lambda k: (k[1], k[0]))
        return [PauliTerm(self.n_qubits, x, z, self.terms[(x, z)])
                for x, z in keys]

    def coefficient(self, x_mask: int, z_mask: int) -> complex:
        return self.terms.get((x_mask, z_mask), 0.0)

    def identity_coefficient(self) -> complex:
        return self.terms.get((0, 0), 0.0)

    def non_identity_term_count(self) -> int:
        return len(self.terms) - (1 if (0, 0) in self.terms else 0)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        _check_same_qubits(self, other)
        acc = dict(self.terms)
        for key, c in other.terms.items():
            acc[key] = acc.get(key, 0.0) + c
        return PauliSum(self.n_qubits, acc)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            _check_same_qubits(self, other)
            acc: dict[tuple[int, int], complex] = {}
            for (xa, za), ca in self.terms.items():
                pa = PauliTerm(self.n_qubits, xa, za, ca)
                for (xb, zb), cb in other.terms.items():
                    t = multiply(pa, PauliTerm(self.n_qubits, xb, zb, cb))
                    key = (t.x_mask, t.z_mask)
                    acc[key] = acc.get(key, 0.0) + t.coefficient
            return PauliSum(self.n_qubits, acc)
        return PauliSum(self.n_qubits,
                        {k: complex(other) * c for k, c in self.terms.items()})

    def __rmul__(self, scalar):
        return self * scalar

    def __eq__(self, other):
        if not isinstance(other, PauliSum) or self.n_qubits != other.n_qubits:
            return False
        return self.terms == other.terms

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def is_anti_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return all(abs(c.real) <= tol for c in self.terms.values())

    def terms_mutually_commute(self) -> bool:
        keys = list(self.terms)
        for i in range(len(keys)):
            for j in range(i + 1, len(keys)):
                xa, za = keys[i]
                xb, zb = keys[j]
                if ((xa & zb).bit_count() + (za & xb).bit_count()) % 2:
                    return False
        return True

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{_format_coeff(t.coefficient)} {t.pauli_string()}"
                          for t in self.sorted_terms())

    def __repr__(self):
        return f"PauliSum({self.n_qubits}, {len(self.terms)} terms)"


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """``a b - b a`` as a pruned sum.

    Two Pauli strings either commute or anticommute, so each term pair
    contributes either nothing or twice the product.
    """
    _check_same_qubits(a, b)
    acc: dict[tuple[int, int], complex] = {}
    for (xa, za), ca in a.terms.items():
        ta = PauliTerm(a.n_qubits, xa, za, ca)
        for (xb, zb), cb in b.terms.items():
            if ((xa & zb).bit_count() + (za & xb).bit_count()) % 2 == 0:
                continue
            t = multiply(ta, PauliTerm(a.n_qubits, xb, zb, cb))
            key = (t.x_mask, t.z_mask)
            acc[key] = acc.get(key, 0.0) + 2.0 * t.coefficient
    return PauliSum(a.n_qubits, acc)


@lru_cache(maxsize=4096)
def _basis_action(n_qubits: int, x_mask: int, z_mask: int):
    """Action of the unit-coefficient string on all basis states.

    Returns ``(targets, phases)`` with ``P |b> = phases[b] |targets[b]>``,
    using ``P = i**popcount(x & z) * X^x Z^z`` and
    ``X^x Z^z |b> = (-1)**popcount(b & z) |b ^ x>``.
    """
    dim = 1 << n_qubits
    basis = np.arange(dim, dtype=np.int64)
    targets = basis ^ x_mask
    parity = np.bitwise_count(basis & z_mask) & 1
    phases = np.where(parity, -1.0 + 0j, 1.0 + 0j)
    phases = phases * (1j) ** ((x_mask & z_mask).bit_count() % 4)
    targets.setflags(write=False)
    phases.setflags(write=False)
    return targets, phases


def term_action(n_qubits: int, x_mask: int, z_mask: int):
    """Public accessor for the cached basis action of a Pauli string."""
    return _basis_action(n_qubits, x_mask, z_mask)


def to_matrix(s: PauliSum, max_qubits: int = MATRIX_QUBIT_CAP) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix of the sum.

    Raises ResourceLimitError above the qubit cap (default 12).
    """
    if s.n_qubits > max_qubits:
        raise ResourceLimitError(
            f"{s.n_qubits} qubits exceeds dense-matrix cap {max_qubits}")
    dim = 1 << s.n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for (x, z), c in s.terms.items():
        targets, phases = _basis_action(s.n_qubits, x, z)
        mat[targets, cols] += c * phases
    return mat


def term_to_matrix(t: PauliTerm, max_qubits: int = MATRIX_QUBIT_CAP) -> np.ndarray:
    return to_matrix(PauliSum.from_term(t), max_qubits)
