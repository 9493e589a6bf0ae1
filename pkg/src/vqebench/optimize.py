"""Classical parameter optimization with exact evaluation accounting.

Both optimizers are deterministic and count every objective call. The
energy-change tolerance is an absolute spread in Hartree (the quantity
the convergence literature calls "relative energy"), defaulting to 1e-6.
"""
from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-6
DEFAULT_FD_STEP = 1e-5
DEFAULT_BUDGET = 100_000
GRADIENT_NORM_STOP = 1e-8


class Objective:
    """Callable energy objective with a monotone evaluation counter."""

    def __init__(self, fn, dimension: int, on_evaluation=None):
        self._fn = fn
        self.dimension = int(dimension)
        self.evaluation_count = 0
        self._on_evaluation = on_evaluation

    def __call__(self, theta) -> float:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.dimension,):
            raise ValueError(
                f"expected {self.dimension} parameters, got {theta.shape}")
        self.evaluation_count += 1
        if self._on_evaluation is not None:
            self._on_evaluation()
        return float(self._fn(theta))


class OptimizationResult:
    __slots__ = ("theta_opt", "energy", "n_energy_evals", "n_gradient_evals",
                 "converged", "trace")

    def __init__(self, theta_opt, energy, n_energy_evals, n_gradient_evals,
                 converged, trace):
        self.theta_opt = np.asarray(theta_opt, dtype=float)
        self.energy = float(energy)
        self.n_energy_evals = int(n_energy_evals)
        self.n_gradient_evals = int(n_gradient_evals)
        self.converged = bool(converged)
        self.trace = list(trace)

    def __repr__(self):
        status = "converged" if self.converged else "not converged"
        return (f"OptimizationResult(E={self.energy:.9f}, "
                f"{self.n_energy_evals} evals, {status})")


def central_difference_gradient(obj: Objective, theta,
                                h: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Central finite differences; exactly 2 * dimension evaluations."""
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for k in range(theta.size):
        step = np.zeros_like(theta)
        step[k] = h
        grad[k] = (obj(theta + step) - obj(theta - step)) / (2.0 * h)
    return grad


def minimize_nelder_mead(obj: Objective, theta0,
                         tol_rel_energy: float = DEFAULT_TOL,
                         max_evals: int = DEFAULT_BUDGET,
                         initial_step: float = 0.1) -> OptimizationResult:
    """Standard Nelder-Mead simplex descent.

    Coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.
    The initial simplex is theta0 plus one per-coordinate step. Terminates
    when the simplex energy spread drops to tol_rel_energy (Hartree) or
    the evaluation budget runs out (converged = False then).
    """
    theta0 = np.asarray(theta0, dtype=float)
    dim = theta0.size
    if dim < 1:
        raise ValueError("Nelder-Mead needs at least one parameter")
    start_count = obj.evaluation_count

    simplex = [theta0.copy()]
    for k in range(dim):
        vertex = theta0.copy()
        vertex[k] += initial_step
        simplex.append(vertex)
    values = [obj(v) for v in simplex]
    trace = [min(values)]

    def spent():
        return obj.evaluation_count - start_count

    converged = False
    while spent() < max_evals:
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        trace.append(values[0])
        if values[-1] - values[0] <= tol_rel_energy:
            converged = True
            break
        centroid = np.mean(simplex[:-1], axis=0)
        reflected = centroid + (centroid - simplex[-1])
        f_reflected = obj(reflected)
        if f_reflected < values[0]:
            expanded = centroid + 2.0 * (centroid - simplex[-1])
            f_expanded = obj(expanded)
            if f_expanded < f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
            continue
        if f_reflected < values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
            continue
        if f_reflected < values[-1]:
            contracted = centroid + 0.5 * (reflected - centroid)
        else:
            contracted = centroid - 0.5 * (centroid - simplex[-1])
        f_contracted = obj(contracted)
        if f_contracted < min(f_reflected, values[-1]):
            simplex[-1], values[-1] = contracted, f_contracted
            continue
        # shrink toward the best vertex
        for k in range(1, dim + 1):
            simplex[k] = simplex[0] + 0.5 * (simplex[k] - simplex[0])
            values[k] = obj(simplex[k])

    best = int(np.argmin(values))
    return OptimizationResult(simplex[best], values[best], spent(), 0,
                              converged, trace)


def minimize_lbfgs(obj: Objective, theta0,
                   tol_rel_energy: float = DEFAULT_TOL,
                   h: float = DEFAULT_FD_STEP,
                   max_evals: int = DEFAULT_BUDGET,
                   memory: int = 10,
                   max_backtracks: int = 40) -> OptimizationResult:
    """L-BFGS with central-difference gradients and Armijo backtracking.

    Two-loop recursion with memory 10, Armijo constant 1e-4, step shrink
    0.5. Stops when the energy change between accepted iterates drops to
    tol_rel_energy (Hartree), the gradient infinity-norm reaches 1e-8, or
    the budget runs out. A failed line search returns the best iterate
    with converged = False.
    """
    theta = np.asarray(theta0, dtype=float).copy()
    dim = theta.size
    if dim < 1:
        raise ValueError("L-BFGS needs at least one parameter")
    start_count = obj.evaluation_count
    n_gradient_evals = 0

    def spent():
        return obj.evaluation_count - start_count

    energy = obj(theta)
    trace = [energy]
    grad = central_difference_gradient(obj, theta, h)
    n_gradient_evals += 1
    s_history: list[np.ndarray] = []
    y_history: list[np.ndarray] = []

    converged = False
    while spent() < max_evals:
        if np.max(np.abs(grad)) <= GRADIENT_NORM_STOP:
            converged = True
            break
        # two-loop recursion for the search direction
        q = grad.copy()
        alphas = []
        for s, y in zip(reversed(s_history), reversed(y_history)):
            rho = 1.0 / float(y @ s)
            a = rho * float(s @ q)
            alphas.append((a, rho, s, y))
            q -= a * y
        if y_history:
            s_last, y_last = s_history[-1], y_history[-1]
            q *= float(s_last @ y_last) / float(y_last @ y_last)
        for a, rho, s, y in reversed(alphas):
            b = rho * float(y @ q)
            q += (a - b) * s
        direction = -q
        slope = float(grad @ direction)
        if slope >= 0.0:  # fall back to steepest descent
            direction = -grad
            slope = -float(grad @ grad)

        step = 1.0
        accepted = None
        for _ in range(max_backtracks):
            candidate = theta + step * direction
            f_candidate = obj(candidate)
            if f_candidate <= energy + 1e-4 * step * slope:
                accepted = (candidate, f_candidate)
                break
            step *= 0.5
        if accepted is None:
            return OptimizationResult(theta, energy, spent(),
                                      n_gradient_evals, False, trace)
        new_theta, new_energy = accepted
        new_grad = central_difference_gradient(obj, new_theta, h)
        n_gradient_evals += 1
        s_vec = new_theta - theta
        y_vec = new_grad - grad
        if float(s_vec @ y_vec) > 1e-14:
            s_history.append(s_vec)
            y_history.append(y_vec)
            if len(s_history) > memory:
                s_history.pop(0)
                y_history.pop(0)
        energy_drop = energy - new_energy
        theta, energy, grad = new_theta, new_energy, new_grad
        trace.append(energy)
        if abs(energy_drop) <= tol_rel_energy:
            converged = True
            break

    return OptimizationResult(theta, energy, spent(), n_gradient_evals,
                              converged, trace)
