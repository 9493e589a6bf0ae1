"""Singlet-adapted UCCSD operator pool, ansatz state preparation, and
gate-level circuit compilation for resource reports.

Pool operators are anti-Hermitian ``tau = T - T^dagger`` with T built from
spin-channel sums that share one variational amplitude. Channels are
grouped so that every operator's Jordan-Wigner strings act on disjoint or
evenly-overlapping supports and therefore mutually commute, which makes
the factorized exponential in the simulator exact.
"""
from __future__ import annotations

import math

import numpy as np

from .fermion import (
    FermionOperator,
    LadderProduct,
    anti_hermitian_pair,
    jordan_wigner,
    number_operator,
)
from .pauli import PauliSum, PauliTerm, commutator
from .statevector import StateVector, apply_pool_operator


class PoolOperator:
    """One candidate excitation: fermionic form plus its JW qubit image."""

    __slots__ = ("id", "fermionic", "qubit_form", "description")

    def __init__(self, op_id, fermionic, qubit_form, description):
        self.id = op_id
        self.fermionic = fermionic
        self.qubit_form = qubit_form
        self.description = description

    def __repr__(self):
        return f"PoolOperator({self.id}: {self.description})"


class Ansatz:
    """Ordered product of pool-operator exponentials with parameters."""

    __slots__ = ("pool", "elements")

    def __init__(self, pool, elements=()):
        self.pool = pool
        self.elements = [(int(pid), float(theta)) for pid, theta in elements]
        for pid, _ in self.elements:
            if not 0 <= pid < len(pool):
                raise ValueError(f"pool id {pid} out of range")

    @property
    def thetas(self) -> np.ndarray:
        return np.array([theta for _, theta in self.elements])

    def with_thetas(self, thetas) -> "Ansatz":
        thetas = np.asarray(thetas, dtype=float)
        if thetas.shape != (len(self.elements),):
            raise ValueError("theta vector length mismatch")
        return Ansatz(self.pool,
                      [(pid, t) for (pid, _), t in zip(self.elements, thetas)])

    def extended(self, pool_id: int, theta: float = 0.0) -> "Ansatz":
        return Ansatz(self.pool, self.elements + [(pool_id, theta)])

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        ids = [pid for pid, _ in self.elements]
        return f"Ansatz({ids})"


def _validate_pool_operator(op: PoolOperator, n_qubits: int):
    q = op.qubit_form
    if not q.is_anti_hermitian():
        raise ValueError(f"pool operator {op.description} not anti-Hermitian")
    if not q.terms_mutually_commute():
        raise ValueError(
            f"pool operator {op.description} has non-commuting strings")
    if len(commutator(q, number_operator(n_qubits))):
        raise ValueError(
            f"pool operator {op.description} breaks particle number")


def _signature(qubit_form: PauliSum):
    return tuple(sorted(
        (x, z, round(c.real, 10), round(c.imag, 10))
        for (x, z), c in qubit_form.terms.items()))


def build_uccsd_pool(n_spatial: int, n_electrons: int) -> list[PoolOperator]:
    """Singlet-adapted singles and doubles over a closed-shell reference.

    Singles pair the alpha and beta channels of each occupied->virtual
    spatial excitation under one amplitude. Doubles are emitted per
    spatial quadruple (i <= j occupied, a <= b virtual): the mixed-spin
    pairing always, plus the exchange-mixed and same-spin pairings when
    both index pairs are distinct. Deterministic order: singles first,
    then doubles, lexicographic in spatial indices.
    """
    if n_electrons % 2:
        raise ValueError(
            f"pool needs a closed-shell reference, got {n_electrons} "
            "electrons")
    n_occ = n_electrons // 2
    n_so = 2 * n_spatial
    occupied = range(n_occ)
    virtual = range(n_occ, n_spatial)

    candidates = []
    for i in occupied:
        for a in virtual:
            t = FermionOperator(n_so, [
                LadderProduct([(2 * a, True), (2 * i, False)]),
                LadderProduct([(2 * a + 1, True), (2 * i + 1, False)]),
            ])
            candidates.append((t, f"single {i}->{a} (singlet)"))
    for i in occupied:
        for j in occupied:
            if j < i:
                continue
            for a in virtual:
                for b in virtual:
                    if b < a:
                        continue
                    prod_a = LadderProduct(
                        [(2 * a, True), (2 * b + 1, True),
                         (2 * j + 1, False), (2 * i, False)])
                    prod_b = LadderProduct(
                        [(2 * a + 1, True), (2 * b, True),
                         (2 * j, False), (2 * i + 1, False)])
                    tag = f"double {i}{j}->{a}{b}"
                    if i == j and a == b:
                        # both spin assignments are the same operator
                        candidates.append((FermionOperator(n_so, [prod_a]),
                                           f"{tag} (paired)"))
                    elif i < j and a < b:
                        # disjoint-support channel pairs share one amplitude
                        candidates.append((FermionOperator(
                            n_so, [prod_a, prod_b]), f"{tag} (mixed)"))
                        exchange = FermionOperator(n_so, [
                            LadderProduct([(2 * a, True), (2 * b + 1, True),
                                           (2 * i + 1, False),
                                           (2 * j, False)]),
                            LadderProduct([(2 * a + 1, True), (2 * b, True),
                                           (2 * i, False),
                                           (2 * j + 1, False)]),
                        ])
                        candidates.append((exchange, f"{tag} (exchange)"))
                        same = FermionOperator(n_so, [
                            LadderProduct([(2 * a, True), (2 * b, True),
                                           (2 * j, False), (2 * i, False)]),
                            LadderProduct([(2 * a + 1, True),
                                           (2 * b + 1, True),
                                           (2 * j + 1, False),
                                           (2 * i + 1, False)]),
                        ])
                        candidates.append((same, f"{tag} (same-spin)"))
                    else:
                        # channels overlap on the repeated spatial index;
                        # merged strings would not commute, so they enter
                        # the pool as separate operators
                        candidates.append((FermionOperator(n_so, [prod_a]),
                                           f"{tag} (mixed A)"))
                        candidates.append((FermionOperator(n_so, [prod_b]),
                                           f"{tag} (mixed B)"))

    pool = []
    seen = set()
    for t, description in candidates:
        tau = anti_hermitian_pair(t)
        qubit_form = jordan_wigner(tau)
        if not len(qubit_form):
            continue
        sig = _signature(qubit_form)
        sig_neg = _signature(-1.0 * qubit_form)
        if sig in seen or sig_neg in seen:
            continue
        seen.add(sig)
        op = PoolOperator(len(pool), tau, qubit_form, description)
        _validate_pool_operator(op, n_so)
        pool.append(op)
    return pool


def full_uccsd_ansatz(pool) -> Ansatz:
    """Fixed first-order-Trotter ansatz: every pool operator once, theta 0."""
    if not pool:
        raise ValueError("cannot build a UCCSD ansatz from an empty pool")
    return Ansatz(pool, [(op.id, 0.0) for op in pool])


def prepare_state(ansatz: Ansatz, reference: StateVector) -> StateVector:
    """Apply the ansatz exponentials to the reference, first element first."""
    state = reference
    for pid, theta in ansatz.elements:
        state = apply_pool_operator(state, ansatz.pool[pid].qubit_form,
                                    theta)
    return state


# ---------------------------------------------------------------------------
# Gate-level compilation
# ---------------------------------------------------------------------------

class Gate:
    """One gate: H q | RX angle q | RZ angle q | CNOT control target.

    RX(phi) = exp(-i phi X / 2) and RZ(phi) = exp(-i phi Z / 2).
    """

    __slots__ = ("kind", "qubits", "angle")

    def __init__(self, kind, qubits, angle=None):
        self.kind = kind
        self.qubits = tuple(int(q) for q in qubits)
        self.angle = angle
        if kind == "CNOT":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("CNOT needs distinct control and target")
        elif kind in ("H", "RX", "RZ"):
            if len(self.qubits) != 1:
                raise ValueError(f"{kind} acts on exactly one qubit")
        else:
            raise ValueError(f"unknown gate kind {kind!r}")

    def __repr__(self):
        if self.kind == "CNOT":
            return f"CNOT {self.qubits[0]} {self.qubits[1]}"
        if self.kind == "H":
            return f"H {self.qubits[0]}"
        return f"{self.kind} {self.angle!r} {self.qubits[0]}"


class GateCircuit:
    __slots__ = ("n_qubits", "gates")

    def __init__(self, n_qubits, gates=()):
        self.n_qubits = n_qubits
        self.gates = list(gates)
        for gate in self.gates:
            if any(q < 0 or q >= n_qubits for q in gate.qubits):
                raise ValueError(f"gate {gate!r} out of range")

    def __len__(self):
        return len(self.gates)

    def to_text(self) -> str:
        return "\n".join(repr(g) for g in self.gates) + ("\n" if self.gates
                                                         else "")

    def __repr__(self):
        return f"GateCircuit({self.n_qubits} qubits, {len(self.gates)} gates)"


def _exponential_template(term: PauliTerm, alpha: float) -> list[Gate]:
    """Gates realizing exp(i * alpha * P) for a single Pauli string.

    Basis changes map each factor to Z, a CNOT staircase folds parity
    onto the highest support qubit, and one RZ(-2 alpha) applies the
    phase; everything then unwinds in mirror order.
    """
    if term.is_identity:
        raise ValueError("cannot compile an identity string exponential")
    support = []
    pre, post = [], []
    for q in range(term.n_qubits):
        x = (term.x_mask >> q) & 1
        z = (term.z_mask >> q) & 1
        if not (x or z):
            continue
        support.append(q)
        if x and z:
            pre.append(Gate("RX", (q,), math.pi / 2))
            post.append(Gate("RX", (q,), -math.pi / 2))
        elif x:
            pre.append(Gate("H", (q,)))
            post.append(Gate("H", (q,)))
    ladder = [Gate("CNOT", (support[k], support[k + 1]))
              for k in range(len(support) - 1)]
    middle = [Gate("RZ", (support[-1],), -2.0 * alpha)]
    return pre + ladder + middle + list(reversed(ladder)) + list(
        reversed(post))


def compile_circuit(ansatz: Ansatz) -> GateCircuit:
    """Compile the ansatz with the raw CNOT-staircase template.

    Terms are emitted in canonical order; theta = 0 elements still emit
    gates so that resource reports reflect circuit structure rather than
    parameter values.
    """
    n_qubits = ansatz.pool[0].qubit_form.n_qubits if ansatz.pool else 0
    gates = []
    for pid, theta in ansatz.elements:
        for term in ansatz.pool[pid].qubit_form.sorted_terms():
            alpha = theta * term.coefficient.imag  # term = i * w * P
            gates.extend(_exponential_template(
                PauliTerm(term.n_qubits, term.x_mask, term.z_mask, 1.0),
                alpha))
    return GateCircuit(n_qubits, gates)


def circuit_metrics(circuit: GateCircuit) -> dict:
    """Gate count plus greedy as-soon-as-possible depth."""
    frontier = [0] * max(circuit.n_qubits, 1)
    depth = 0
    for gate in circuit.gates:
        layer = 1 + max(frontier[q] for q in gate.qubits)
        for q in gate.qubits:
            frontier[q] = layer
        depth = max(depth, layer)
    return {"gate_count": len(circuit.gates), "depth": depth}


def simulate_circuit(circuit: GateCircuit,
                     state: StateVector) -> StateVector:
    """Apply the compiled gates to a statevector (compilation oracle)."""
    amps = state.amplitudes.copy()
    dim = amps.shape[0]
    basis = np.arange(dim)
    for gate in circuit.gates:
        if gate.kind == "CNOT":
            control, target = gate.qubits
            mask = (basis >> control) & 1
            flipped = basis ^ (1 << target)
            new = amps.copy()
            sel = mask == 1
            new[basis[sel]] = amps[flipped[sel]]
            amps = new
            continue
        q = gate.qubits[0]
        low = basis[(basis >> q) & 1 == 0]
        high = low | (1 << q)
        a0, a1 = amps[low], amps[high]
        if gate.kind == "H":
            inv = 1.0 / math.sqrt(2.0)
            amps[low] = inv * (a0 + a1)
            amps[high] = inv * (a0 - a1)
        elif gate.kind == "RX":
            c = math.cos(gate.angle / 2.0)
            s = -1j * math.sin(gate.angle / 2.0)
            amps[low] = c * a0 + s * a1
            amps[high] = s * a0 + c * a1
        elif gate.kind == "RZ":
            amps[low] = np.exp(-0.5j * gate.angle) * a0
            amps[high] = np.exp(0.5j * gate.angle) * a1
    return StateVector(state.n_qubits, amps)
