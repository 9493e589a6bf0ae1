"""VQE and ADAPT-VQE statevector simulator with an exact-diagonalization oracle.

Typical use::

    from vqebench import load_fcidump, run_adapt, solve_fci, AdaptConfig

    ham = load_fcidump("h2.fcidump")
    result = run_adapt(ham, AdaptConfig(optimizer="lbfgs"))
    exact = solve_fci(ham)
    print(result.energy - exact.energy)
"""

from .adapt import (
    AdaptConfig,
    MeasurementLedger,
    RunResult,
    run_adapt,
    run_vqe,
    screen_pool,
    select_operator,
)
from .ansatz import (
    Ansatz,
    GateCircuit,
    PoolOperator,
    build_uccsd_pool,
    circuit_metrics,
    compile_circuit,
    full_uccsd_ansatz,
    prepare_state,
    simulate_circuit,
)
from .fcidump import (
    MolecularHamiltonian,
    load_fcidump,
    mean_field_energy,
    parse_fcidump,
    to_fermion_hamiltonian,
    write_fcidump,
)
from .fermion import (
    FermionOperator,
    LadderProduct,
    anti_hermitian_pair,
    jordan_wigner,
    number_operator,
    verify_car,
)
from .fci import FciSolution, infidelity_vs_fci, solve_fci
from .optimize import (
    Objective,
    OptimizationResult,
    central_difference_gradient,
    minimize_lbfgs,
    minimize_nelder_mead,
)
from .pauli import PauliSum, PauliTerm, commutator, multiply, to_matrix
from .statevector import (
    StateVector,
    apply_pauli_exponential,
    apply_pool_operator,
    expectation,
    hartree_fock_reference,
    infidelity,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptConfig", "Ansatz", "FciSolution", "FermionOperator", "GateCircuit",
    "LadderProduct", "MeasurementLedger", "MolecularHamiltonian",
    "Objective", "OptimizationResult", "PauliSum", "PauliTerm",
    "PoolOperator", "RunResult", "StateVector", "anti_hermitian_pair",
    "apply_pauli_exponential", "apply_pool_operator", "build_uccsd_pool",
    "central_difference_gradient", "circuit_metrics", "commutator",
    "compile_circuit", "expectation", "full_uccsd_ansatz",
    "hartree_fock_reference", "infidelity", "infidelity_vs_fci",
    "jordan_wigner", "load_fcidump", "mean_field_energy",
    "minimize_lbfgs", "minimize_nelder_mead", "multiply", "number_operator",
    "parse_fcidump", "prepare_state", "run_adapt", "run_vqe", "screen_pool",
    "select_operator", "simulate_circuit", "solve_fci",
    "to_fermion_hamiltonian", "to_matrix", "verify_car", "write_fcidump",
]
