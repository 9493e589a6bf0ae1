"""ADAPT-VQE outer loop, plain-VQE driver, and measurement accounting.

The adaptive loop screens the operator pool with commutator expectations,
appends the operator with the largest absolute gradient, and re-optimizes
every parameter from an all-zeros start. A converged run ends when the
pool gradient norm drops to the configured threshold.

Measurement cost is tracked symbolically: every expectation evaluated
charges one unit per non-identity Pauli term of the measured operator
(the identity is classically known and excluded).
"""
from __future__ import annotations

import numpy as np

from .ansatz import (
    Ansatz,
    build_uccsd_pool,
    circuit_metrics,
    compile_circuit,
    full_uccsd_ansatz,
    prepare_state,
)
from .fcidump import MolecularHamiltonian, to_fermion_hamiltonian
from .fermion import jordan_wigner
from .optimize import (
    DEFAULT_BUDGET,
    DEFAULT_FD_STEP,
    DEFAULT_TOL,
    Objective,
    minimize_lbfgs,
    minimize_nelder_mead,
)
from .pauli import PauliSum, commutator
from .statevector import StateVector, expectation, hartree_fock_reference

OPTIMIZERS = ("nelder_mead", "lbfgs")


class AdaptConfig:
    """Knobs for the adaptive loop and the inner optimizations."""

    __slots__ = ("grad_norm_threshold", "max_iterations", "optimizer",
                 "tol_rel_energy", "fd_step", "eval_budget", "warm_start")

    def __init__(self, grad_norm_threshold=1e-2, max_iterations=50,
                 optimizer="lbfgs", tol_rel_energy=DEFAULT_TOL,
                 fd_step=DEFAULT_FD_STEP, eval_budget=DEFAULT_BUDGET,
                 warm_start=False):
        if grad_norm_threshold <= 0 or tol_rel_energy <= 0 or fd_step <= 0:
            raise ValueError("thresholds must be positive")
        if max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        self.grad_norm_threshold = float(grad_norm_threshold)
        self.max_iterations = int(max_iterations)
        self.optimizer = optimizer
        self.tol_rel_energy = float(tol_rel_energy)
        self.fd_step = float(fd_step)
        self.eval_budget = int(eval_budget)
        self.warm_start = bool(warm_start)  # off by default, see run_adapt


class MeasurementLedger:
    """Symbolic counters standing in for hardware measurement cost."""

    __slots__ = ("energy_evaluations", "commutator_evaluations",
                 "pauli_term_measurements")

    def __init__(self):
        self.energy_evaluations = 0
        self.commutator_evaluations = 0
        self.pauli_term_measurements = 0

    def charge_energy(self, n_terms: int):
        self.energy_evaluations += 1
        self.pauli_term_measurements += n_terms

    def charge_commutator(self, n_terms: int):
        self.commutator_evaluations += 1
        self.pauli_term_measurements += n_terms

    def total(self) -> int:
        return self.pauli_term_measurements

    def as_dict(self) -> dict:
        return {"energy_evaluations": self.energy_evaluations,
                "commutator_evaluations": self.commutator_evaluations,
                "pauli_term_measurements": self.pauli_term_measurements}


class AdaptIteration:
    """Trace record: one screening plus the optimization that followed.

    The terminal record of a converged run has selected_pool_id None and
    repeats the incumbent energy and parameters.
    """

    __slots__ = ("selected_pool_id", "grad_norm", "grad_vector", "energy",
                 "theta", "measurement_count_cumulative",
                 "optimizer_converged")

    def __init__(self, selected_pool_id, grad_norm, grad_vector, energy,
                 theta, measurement_count_cumulative,
                 optimizer_converged=True):
        self.selected_pool_id = selected_pool_id
        self.grad_norm = float(grad_norm)
        self.grad_vector = np.asarray(grad_vector, dtype=float)
        self.energy = float(energy)
        self.theta = np.asarray(theta, dtype=float)
        self.measurement_count_cumulative = int(measurement_count_cumulative)
        self.optimizer_converged = bool(optimizer_converged)


class RunResult:
    """Common record returned by both drivers."""

    __slots__ = ("method", "optimizer", "ansatz", "theta", "energy",
                 "converged", "trace", "ledger", "resources",
                 "final_grad_norm", "core_energy", "n_qubits", "n_electrons")

    def __init__(self, **kwargs):
        for name in self.__slots__:
            setattr(self, name, kwargs[name])

    def prepared_state(self) -> StateVector:
        reference = hartree_fock_reference(self.n_qubits, self.n_electrons)
        return prepare_state(self.ansatz.with_thetas(self.theta), reference)

    def __repr__(self):
        return (f"RunResult({self.method}/{self.optimizer}: "
                f"E={self.energy:.9f}, {len(self.ansatz)} operators)")


def screen_pool(psi: StateVector, h_p: PauliSum, pool, ledger,
                commutator_cache=None) -> np.ndarray:
    """Gradient vector <psi| [H_P, tau_k] |psi> over the whole pool."""
    if not pool:
        raise ValueError("cannot screen an empty pool")
    grads = np.empty(len(pool))
    for k, op in enumerate(pool):
        if commutator_cache is not None:
            comm = commutator_cache[k]
        else:
            comm = commutator(h_p, op.qubit_form)
        ledger.charge_commutator(comm.non_identity_term_count())
        grads[k] = expectation(psi, comm)
    return grads


def select_operator(grads, pool) -> int:
    """Pool id with the largest |gradient|; ties break to the lowest id."""
    if len(pool) == 0:
        raise ValueError("cannot select from an empty pool")
    if len(grads) != len(pool):
        raise ValueError("gradient vector length does not match pool")
    magnitudes = np.abs(np.asarray(grads, dtype=float))
    best = float(np.max(magnitudes))
    for k, value in enumerate(magnitudes):
        if value >= best - 1e-12:
            return pool[k].id
    raise AssertionError("unreachable")


def _jw_hamiltonian(ham: MolecularHamiltonian):
    fermion_h, core = to_fermion_hamiltonian(ham)
    return jordan_wigner(fermion_h), core


def _energy_objective(ansatz: Ansatz, h_p: PauliSum, core: float,
                      reference: StateVector,
                      ledger: MeasurementLedger) -> Objective:
    n_terms = h_p.non_identity_term_count()

    def energy(theta):
        state = prepare_state(ansatz.with_thetas(theta), reference)
        return expectation(state, h_p) + core

    return Objective(energy, len(ansatz),
                     on_evaluation=lambda: ledger.charge_energy(n_terms))


def _optimize(cfg: AdaptConfig, objective: Objective, theta0):
    if cfg.optimizer == "lbfgs":
        return minimize_lbfgs(objective, theta0, cfg.tol_rel_energy,
                              h=cfg.fd_step, max_evals=cfg.eval_budget)
    return minimize_nelder_mead(objective, theta0, cfg.tol_rel_energy,
                                max_evals=cfg.eval_budget)


def run_adapt(ham: MolecularHamiltonian,
              cfg: AdaptConfig | None = None) -> RunResult:
    """Grow the ansatz one operator at a time until ||G|| falls below
    threshold, re-optimizing all parameters from zero each iteration
    (warm_start instead reuses the previous optimum for old parameters).
    """
    cfg = cfg or AdaptConfig()
    h_p, core = _jw_hamiltonian(ham)
    pool = build_uccsd_pool(ham.n_spatial, ham.n_electrons)
    reference = hartree_fock_reference(ham.n_qubits, ham.n_electrons)
    ledger = MeasurementLedger()
    trace: list[AdaptIteration] = []

    ansatz = Ansatz(pool, [])
    theta = np.zeros(0)
    energy = expectation(reference, h_p) + core
    converged = False
    final_grad_norm = float("nan")

    if pool:
        comm_cache = [commutator(h_p, op.qubit_form) for op in pool]
        for _ in range(cfg.max_iterations):
            psi = prepare_state(ansatz.with_thetas(theta), reference)
            grads = screen_pool(psi, h_p, pool, ledger, comm_cache)
            grad_norm = float(np.linalg.norm(grads))
            if grad_norm <= cfg.grad_norm_threshold:
                converged = True
                final_grad_norm = grad_norm
                trace.append(AdaptIteration(
                    None, grad_norm, grads, energy, theta,
                    ledger.total()))
                break
            selected = select_operator(grads, pool)
            ansatz = ansatz.extended(selected, 0.0)
            if cfg.warm_start:
                theta0 = np.append(theta, 0.0)
            else:
                theta0 = np.zeros(len(ansatz))
            objective = _energy_objective(ansatz, h_p, core, reference,
                                          ledger)
            result = _optimize(cfg, objective, theta0)
            theta = result.theta_opt
            energy = result.energy
            trace.append(AdaptIteration(
                selected, grad_norm, grads, energy, theta, ledger.total(),
                optimizer_converged=result.converged))
        else:
            final_grad_norm = trace[-1].grad_norm if trace else float("nan")
    else:
        converged = True  # nothing to add
        final_grad_norm = 0.0

    ansatz = ansatz.with_thetas(theta)
    return RunResult(
        method="adapt", optimizer=cfg.optimizer, ansatz=ansatz, theta=theta,
        energy=energy, converged=converged, trace=trace, ledger=ledger,
        resources=circuit_metrics(compile_circuit(ansatz)),
        final_grad_norm=final_grad_norm, core_energy=core,
        n_qubits=ham.n_qubits, n_electrons=ham.n_electrons)


def run_vqe(ham: MolecularHamiltonian,
            cfg: AdaptConfig | None = None) -> RunResult:
    """Plain VQE: the fixed full-UCCSD ansatz optimized once from zero."""
    cfg = cfg or AdaptConfig()
    h_p, core = _jw_hamiltonian(ham)
    pool = build_uccsd_pool(ham.n_spatial, ham.n_electrons)
    reference = hartree_fock_reference(ham.n_qubits, ham.n_electrons)
    ledger = MeasurementLedger()

    if not pool:
        energy = expectation(reference, h_p) + core
        empty = Ansatz([], [])
        return RunResult(
            method="vqe", optimizer=cfg.optimizer, ansatz=empty,
            theta=np.zeros(0), energy=energy, converged=True, trace=[],
            ledger=ledger, resources={"gate_count": 0, "depth": 0},
            final_grad_norm=None, core_energy=core, n_qubits=ham.n_qubits,
            n_electrons=ham.n_electrons)

    ansatz = full_uccsd_ansatz(pool)
    objective = _energy_objective(ansatz, h_p, core, reference, ledger)
    result = _optimize(cfg, objective, np.zeros(len(ansatz)))
    ansatz = ansatz.with_thetas(result.theta_opt)
    return RunResult(
        method="vqe", optimizer=cfg.optimizer, ansatz=ansatz,
        theta=result.theta_opt, energy=result.energy,
        converged=result.converged, trace=[], ledger=ledger,
        resources=circuit_metrics(compile_circuit(ansatz)),
        final_grad_norm=None, core_energy=core, n_qubits=ham.n_qubits,
        n_electrons=ham.n_electrons)
