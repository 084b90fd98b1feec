"""Recovery of boundary-polynomial coefficients from determinant eigenvalues.

Each nonzero eigenvalue lam of the determinant problem pins one linear
equation A(lam) = rhs_value(lam); s+1 pairwise-distinct eigenvalues give a
Vandermonde system whose unique solution is the coefficient vector.  In
exact arithmetic any admissible node set works; numerically the system can
be arbitrarily ill-conditioned, so every result carries a condition
estimate and the residual tolerances scale with it.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .char_det import BoundaryPolynomialProblem, DetEigenvalue, delta_scaled_eval
from .core import Polynomial, Tolerances, as_finite_complex, poly_eval
from .errors import InputError, NumericalError

__all__ = [
    "ReconstructionInput",
    "ReconstructionResult",
    "rhs_value",
    "vandermonde_solve",
    "condition_estimate",
    "reconstruct_coeffs",
    "select_reconstruction_nodes",
]

_POLE_TOL = 1e-12
_CONDITION_FALLBACK = 1e12


@dataclass(frozen=True)
class ReconstructionInput:
    """s+1 pairwise-distinct nonzero eigenvalues for a degree-s recovery."""

    nodes: tuple[complex, ...]
    degree: int
    cluster_radius: float = 1e-8

    def __post_init__(self):
        nodes = tuple(as_finite_complex(z, "node") for z in self.nodes)
        if self.degree < 0:
            raise InputError(f"degree must be >= 0, got {self.degree}")
        if len(nodes) != self.degree + 1:
            raise InputError(
                f"degree {self.degree} needs exactly {self.degree + 1} nodes, "
                f"got {len(nodes)}"
            )
        for i, z in enumerate(nodes):
            if abs(z) <= self.cluster_radius:
                raise InputError(f"node {i} = {z!r} is too close to the excluded origin")
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if abs(nodes[i] - nodes[j]) <= self.cluster_radius:
                    raise InputError(
                        f"nodes {i} and {j} coincide within the cluster radius: "
                        f"{nodes[i]!r} vs {nodes[j]!r}"
                    )
        object.__setattr__(self, "nodes", nodes)


@dataclass(frozen=True)
class ReconstructionResult:
    coefficients: Polynomial
    node_residuals: tuple[float, ...]
    vandermonde_condition: float


def rhs_value(lam: complex, cluster_radius: float = 1e-8) -> complex:
    """Right-hand side of the linear system at one eigenvalue.

    Evaluates -(e^lam - 1) / (lam (2 - e^lam)), the cancellation-reduced
    form of the ratio of fundamental-solution boundary values.  The origin
    is an excluded node; e^lam = 2 is a pole of the reduced form and never
    an eigenvalue, so hitting it signals a bad input node.
    """
    lam = as_finite_complex(lam, "lambda")
    if abs(lam) <= cluster_radius:
        raise InputError(f"lambda = {lam!r} is an excluded (origin) node")
    if lam.real > 350.0:
        # e^lam overflows; multiply through by e^{-lam}
        em = cmath.exp(-lam)
        return -(1.0 - em) / (lam * (2.0 * em - 1.0))
    e = cmath.exp(lam)
    if abs(e - 2.0) <= _POLE_TOL:
        raise InputError(
            f"lambda = {lam!r} sits on the pole e^lam = 2; it cannot be a "
            "determinant eigenvalue"
        )
    return -(e - 1.0) / (lam * (2.0 - e))


def _bjorck_pereyra(nodes: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Progressive elimination specialized to Vandermonde structure, O(n^2).

    Stage one builds divided differences; stage two converts the Newton
    form to monomial coefficients by synthetic division.
    """
    a = values.astype(complex).copy()
    n = len(a) - 1
    for k in range(n):
        for i in range(n, k, -1):
            a[i] = (a[i] - a[i - 1]) / (nodes[i] - nodes[i - k - 1])
    for k in range(n - 1, -1, -1):
        for i in range(k, n):
            a[i] -= a[i + 1] * nodes[k]
    return a


def _qr_solve(nodes: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Column-pivoted orthogonal factorization fallback for ill-conditioned nodes."""
    V = np.vander(nodes, increasing=True)
    q, r, piv = scipy.linalg.qr(V, pivoting=True)
    rhs = q.conj().T @ values
    x = scipy.linalg.solve_triangular(r, rhs)
    out = np.empty_like(x)
    out[piv] = x
    return out


def condition_estimate(nodes) -> float:
    """1-norm condition estimate of the Vandermonde matrix on these nodes.

    Exact for tiny systems; otherwise the inverse norm comes from a
    standard norm-estimator iteration on the LU factors.
    """
    nodes = np.asarray([as_finite_complex(z, "node") for z in nodes], dtype=complex)
    n = len(nodes)
    if n == 0:
        raise InputError("condition estimate needs at least one node")
    if n == 1:
        return 1.0
    V = np.vander(nodes, increasing=True)
    norm1 = float(np.abs(V).sum(axis=0).max())
    try:
        if n <= 4:
            inv_norm = float(np.abs(np.linalg.inv(V)).sum(axis=0).max())
        else:
            lu, piv = scipy.linalg.lu_factor(V)
            op = scipy.sparse.linalg.LinearOperator(
                (n, n),
                matvec=lambda x: scipy.linalg.lu_solve((lu, piv), x),
                rmatvec=lambda x: scipy.linalg.lu_solve((lu, piv), x, trans=2),
                dtype=complex,
            )
            inv_norm = float(scipy.sparse.linalg.onenormest(op))
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        return float("inf")
    return norm1 * inv_norm


def vandermonde_solve(nodes, values, tol: Tolerances | None = None) -> Polynomial:
    """Unique degree-n polynomial with A(node_i) = value_i.

    Primary path is the structured progressive elimination; when the
    condition estimate exceeds 1e12 the explicit matrix is solved by
    column-pivoted QR instead.
    """
    tol = tol or Tolerances()
    nodes = np.asarray([as_finite_complex(z, "node") for z in nodes], dtype=complex)
    values = np.asarray([as_finite_complex(v, "value") for v in values], dtype=complex)
    if len(nodes) != len(values):
        raise InputError(
            f"need equally many nodes and values, got {len(nodes)} vs {len(values)}"
        )
    if len(nodes) == 0:
        raise InputError("need at least one node")
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if abs(nodes[i] - nodes[j]) <= tol.cluster_radius:
                raise InputError(
                    f"duplicate interpolation nodes {i} and {j}: "
                    f"{nodes[i]!r} vs {nodes[j]!r}"
                )
    cond = condition_estimate(nodes)
    if cond > _CONDITION_FALLBACK:
        coeffs = _qr_solve(nodes, values)
    else:
        coeffs = _bjorck_pereyra(nodes, values)
    poly = Polynomial(tuple(coeffs))
    max_val = float(np.abs(values).max())
    resid = max(abs(poly_eval(poly, z) - v) for z, v in zip(nodes, values))
    bound = 1e-10 * cond * max_val
    if resid > bound and max_val > 0.0:
        raise NumericalError(
            f"interpolation residual {resid:.3e} exceeds {bound:.3e} "
            f"(condition {cond:.3e})"
        )
    return poly


def select_reconstruction_nodes(eigenvalues, degree: int) -> tuple[complex, ...]:
    """Pick s+1 nodes from available eigenvalues: smallest modulus first.

    Small-modulus nodes empirically give the best Vandermonde conditioning;
    ties break by (re, im) so the choice is deterministic.
    """
    values = []
    for ev in eigenvalues:
        values.append(ev.value if isinstance(ev, DetEigenvalue) else complex(ev))
    if len(values) < degree + 1:
        raise InputError(
            f"degree {degree} needs {degree + 1} eigenvalues, got {len(values)}"
        )
    values.sort(key=lambda z: (abs(z), z.real, z.imag))
    return tuple(values[: degree + 1])


def reconstruct_coeffs(
    inp: ReconstructionInput, tol: Tolerances | None = None
) -> ReconstructionResult:
    """Solve the eigenvalue-pinned Vandermonde system and audit the result.

    Residuals of the scaled determinant are recomputed at every node with
    the recovered coefficients; they must stay below residual_tol times the
    condition estimate.
    """
    tol = tol or Tolerances()
    values = [rhs_value(z, inp.cluster_radius) for z in inp.nodes]
    poly = vandermonde_solve(inp.nodes, values, tol)
    cond = condition_estimate(inp.nodes)
    prob = BoundaryPolynomialProblem(poly)
    residuals = tuple(abs(delta_scaled_eval(prob, z)) for z in inp.nodes)
    bound = tol.residual_tol * cond
    worst = max(residuals)
    if worst > bound:
        raise NumericalError(
            f"reconstruction residual {worst:.3e} exceeds {bound:.3e} "
            f"(condition {cond:.3e})"
        )
    return ReconstructionResult(poly, residuals, cond)
