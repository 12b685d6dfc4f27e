"""Eigenpairs and linear solves for assembled operators."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, DomainError, ParameterError, SingularOperatorError
from .operator import DiscreteOperator
from .rng import stream

DEFAULT_TOL = 1e-8
MAX_ITER = 10_000
DEGENERACY_RTOL = 1e-6


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalue and sup-normalized mode on the active nodes.

    The mode is scaled so its entry of largest magnitude equals +1 exactly.
    ``residual`` is ||M^{-1}(A u - lambda M u)||_inf.  ``cluster`` groups pairs
    whose eigenvalues agree to within DEGENERACY_RTOL (near-degenerate modes
    mix arbitrarily; any basis of the cluster subspace is acceptable).
    """

    eigenvalue: float
    mode: np.ndarray
    residual: float
    cluster: int = 0


def _assign_clusters(values):
    cluster = np.arange(len(values))
    for j in range(1, len(values)):
        if abs(values[j] - values[j - 1]) < DEGENERACY_RTOL * max(abs(values[j]), 1e-300):
            cluster[j] = cluster[j - 1]
    return cluster


def smallest_eigenpairs(op: DiscreteOperator, k: int, tol: float = DEFAULT_TOL) -> list[EigenPair]:
    """The k smallest eigenpairs of A u = lambda M u, eigenvalues non-decreasing.

    Shift-invert Lanczos at shift 0 (ARPACK); the contract is the residual
    bound, not the method.  Deterministic: the start vector is drawn from a
    fixed counter-based stream.
    """
    n = op.size
    if k < 1:
        raise ParameterError("k must be >= 1")
    if k >= n:
        raise ParameterError(f"k={k} too large for operator of dimension {n}")
    v0 = stream(0x51AC, n).standard_normal(n)
    M = sp.diags(op.mass)
    try:
        vals, vecs = spla.eigsh(op.matrix, k=k, M=M, sigma=0, which="LM",
                                v0=v0, maxiter=MAX_ITER)
    except spla.ArpackNoConvergence as exc:
        got = len(exc.eigenvalues)
        raise ConvergenceError(
            f"eigensolver converged {got}/{k} pairs within {MAX_ITER} iterations",
            residual=None) from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    clusters = _assign_clusters(vals)
    pairs = []
    for j in range(k):
        u = vecs[:, j]
        peak = np.argmax(np.abs(u))
        u = u / u[peak]                     # sign fix and ||u||_inf = 1 in one step
        r = op.matrix @ u - vals[j] * (op.mass * u)
        res = float(np.max(np.abs(r / op.mass)))
        if not res <= tol * max(1.0, abs(vals[j])):
            raise ConvergenceError(
                f"eigenpair {j} residual {res:.3e} exceeds tolerance", residual=res)
        pairs.append(EigenPair(float(vals[j]), u, res, int(clusters[j])))
    return pairs


def degenerate_clusters(pairs: list[EigenPair]) -> list[list[int]]:
    """Indices of pairs grouped by near-equal eigenvalue."""
    groups: dict[int, list[int]] = {}
    for i, p in enumerate(pairs):
        groups.setdefault(p.cluster, []).append(i)
    return list(groups.values())


def solve_linear(op: DiscreteOperator, rhs, tol: float = 1e-10) -> np.ndarray:
    """Solve A w = M rhs, i.e. the discrete form of (-Lap + K V) w = rhs.

    ``rhs`` is the source sampled at active nodes (scalar broadcasts).  The
    residual is checked in the mass-weighted form ||A w - M rhs||_inf <=
    tol * ||M rhs||_inf, with a few steps of iterative refinement if needed.
    """
    n = op.size
    b_raw = np.broadcast_to(np.asarray(rhs, float), (n,)).copy()
    if op.bc.kind in ("neumann", "periodic") and np.max(op.coupling * op.vnode) == 0.0:
        raise SingularOperatorError("pure Neumann/periodic operator with K*V = 0 is singular")
    b = op.mass * b_raw
    try:
        lu = spla.splu(op.matrix.tocsc())
    except RuntimeError as exc:  # pragma: no cover - scipy signals singular factor this way
        raise SingularOperatorError(str(exc)) from exc
    w = lu.solve(b)
    scale = np.max(np.abs(b))
    for _ in range(5):
        r = b - op.matrix @ w
        if np.max(np.abs(r)) <= tol * scale:
            return w
        w = w + lu.solve(r)
    res = np.max(np.abs(b - op.matrix @ w))
    if res > tol * scale:
        raise ConvergenceError(f"linear solve residual {res:.3e} above {tol * scale:.3e}",
                               residual=float(res))
    return w


def rayleigh_quotient(u, op: DiscreteOperator) -> float:
    """<A u, u> / <M u, u>: the discrete energy per unit norm."""
    u = np.asarray(u, float)
    denom = float(u @ (op.mass * u))
    if denom == 0.0:
        raise DomainError("Rayleigh quotient of the zero vector")
    return float(u @ (op.matrix @ u)) / denom
