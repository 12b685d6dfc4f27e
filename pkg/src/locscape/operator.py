"""Sparse discretization of the Hamiltonian -Laplacian + K*V on the lattice.

The discretization is the lumped piecewise-linear finite-element scheme: a
symmetric stiffness matrix plus a diagonal lumped mass.  Operators are kept as
the pencil (A, M) with

    A = stiffness + boundary terms + K * diag(v_node * m),   M = diag(m),

so eigenproblems are ``A u = lambda M u`` and source problems ``A w = M f``.
This form is symmetric, second-order accurate, annihilates constants under
pure Neumann conditions, and is an M-matrix whenever K*V >= 0, which makes the
discrete landscape bound exact (see `landscape.landscape_bound_violation`).

Node values of the (cell-wise constant) potential are the plain average of the
adjacent cell values: 1 cell strictly inside, 2 across a face, 4 at an interior
corner in 2D.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ParameterError, UnsupportedError
from .potential import GridSpec, PotentialField

_END_KINDS = ("dirichlet", "neumann", "robin")


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary condition g du/dn + h u = 0: one kind applied on every side.

    ``mixed`` (1D only) carries one (kind, h) spec per end, used for the local
    eigenvalue problems on subintervals.
    """

    kind: str
    h: float = 0.0
    ends: tuple | None = None  # mixed 1D: ((kind, h), (kind, h))

    def __post_init__(self):
        if self.kind not in ("dirichlet", "neumann", "robin", "periodic", "mixed"):
            raise ParameterError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "robin" and self.h < 0:
            raise ParameterError("robin h must be >= 0")

    @staticmethod
    def dirichlet() -> "BoundaryCondition":
        return BoundaryCondition("dirichlet")

    @staticmethod
    def neumann() -> "BoundaryCondition":
        return BoundaryCondition("neumann")

    @staticmethod
    def robin(h: float) -> "BoundaryCondition":
        return BoundaryCondition("robin", h=h)

    @staticmethod
    def periodic() -> "BoundaryCondition":
        return BoundaryCondition("periodic")

    @staticmethod
    def mixed(left: str, right: str, h_left: float = 0.0, h_right: float = 0.0) -> "BoundaryCondition":
        for kind in (left, right):
            if kind not in _END_KINDS:
                raise ParameterError(f"mixed end kind {kind!r} not in {_END_KINDS}")
        return BoundaryCondition("mixed", ends=((left, h_left), (right, h_right)))

    def end_specs(self) -> tuple:
        """(kind, h) for the low and high end of an axis."""
        if self.kind == "mixed":
            return self.ends
        if self.kind == "periodic":
            raise UnsupportedError("periodic condition has no per-end form")
        return ((self.kind, self.h), (self.kind, self.h))

    @property
    def g(self) -> float:
        """Normal-derivative coefficient: 0 for dirichlet, else 1."""
        return 0.0 if self.kind == "dirichlet" else 1.0


@dataclass(frozen=True)
class DiscreteOperator:
    """Assembled pencil (matrix, mass) with grid metadata.

    ``axes`` holds the active node coordinates per axis; Dirichlet ends are
    eliminated, so active nodes may be a strict subset of the lattice nodes.
    """

    matrix: sp.csr_matrix
    mass: np.ndarray
    bc: BoundaryCondition
    coupling: float
    axes: tuple
    trimmed: tuple          # per axis: (low_end_eliminated, high_end_eliminated)
    vnode: np.ndarray       # potential value at active nodes (flattened)
    grid: GridSpec | None = None
    periodic: bool = False

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape_active(self) -> tuple:
        return tuple(len(ax) for ax in self.axes)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def embed(self, u: np.ndarray) -> np.ndarray:
        """Pad a vector on active nodes with zeros at eliminated Dirichlet nodes.

        Returns the full lattice-node array, shape (nx,) or (nx, ny).
        """
        arr = np.asarray(u).reshape(self.shape_active)
        for axis, (lo, hi) in enumerate(self.trimmed):
            pad = [(0, 0)] * arr.ndim
            pad[axis] = (1 if lo else 0, 1 if hi else 0)
            arr = np.pad(arr, pad)
        return arr

    def full_axes(self) -> tuple:
        """Node coordinates including eliminated boundary nodes."""
        out = []
        for ax, (lo, hi) in zip(self.axes, self.trimmed):
            dx0 = ax[1] - ax[0]
            left = [ax[0] - dx0] if lo else []
            right = [ax[-1] + dx0] if hi else []
            out.append(np.concatenate([left, ax, right]))
        return tuple(out)


def _axis_parts(n_nodes, dx, end_specs):
    """1D stiffness, lumped mass, and trim flags for one axis."""
    d = np.full(n_nodes, 2.0 / dx)
    d[0] = d[-1] = 1.0 / dx
    off = np.full(n_nodes - 1, -1.0 / dx)
    m = np.full(n_nodes, dx)
    m[0] = m[-1] = dx / 2.0
    trim = [False, False]
    for side, (kind, h) in enumerate(end_specs):
        i = 0 if side == 0 else n_nodes - 1
        if kind == "robin":
            d[i] += h
        elif kind == "dirichlet":
            trim[side] = True
    S = sp.diags([d, off, off], [0, 1, -1], format="csr")
    lo = 1 if trim[0] else 0
    hi = n_nodes - 1 if trim[1] else n_nodes
    return S[lo:hi, lo:hi], m[lo:hi], (trim[0], trim[1]), slice(lo, hi)


def _node_cell_average(cells_1d_values, n_cells, r):
    """Average potential over the cells adjacent to each node along one axis."""
    n = n_cells * r + 1
    interval_value = np.repeat(cells_1d_values, r, axis=0)
    v = np.empty((n,) + interval_value.shape[1:])
    v[0] = interval_value[0]
    v[-1] = interval_value[-1]
    v[1:-1] = 0.5 * (interval_value[:-1] + interval_value[1:])
    return v


def assemble(grid: GridSpec, fieldv: PotentialField, K: float,
             bc: BoundaryCondition) -> DiscreteOperator:
    """Assemble -Laplacian + K*V on the lattice under the given boundary condition."""
    if K < 0:
        raise ParameterError("disorder strength K must be >= 0")
    if fieldv.grid != grid:
        raise ParameterError("field was sampled on a different grid")
    if bc.kind == "periodic":
        if grid.dim != 1:
            raise UnsupportedError("periodic conditions are implemented in 1D only")
        return _assemble_periodic_uniform(grid, fieldv, K)
    if bc.kind == "mixed" and grid.dim != 1:
        raise UnsupportedError("mixed per-end conditions are 1D only")

    N, r = grid.cells_per_side, grid.nodes_per_cell
    dx = grid.spacing
    n = grid.nodes_per_axis
    coords = np.linspace(0.0, 1.0, n)

    if grid.dim == 1:
        S, m, trim, sl = _axis_parts(n, dx, bc.end_specs())
        v = _node_cell_average(fieldv.cell_values, N, r)[sl]
        A = S + sp.diags(K * v * m)
        return DiscreteOperator(A.tocsr(), m, bc, K, (coords[sl],), (trim,), v, grid)

    Sx, mx, trimx, slx = _axis_parts(n, dx, bc.end_specs())
    vx = _node_cell_average(fieldv.cell_values, N, r)          # (n, N) after x-average
    v = _node_cell_average(vx.T, N, r).T                       # (n, n) both axes
    v = v[slx, slx]
    Mx = sp.diags(mx)
    A2 = sp.kron(Sx, Mx) + sp.kron(Mx, Sx)
    m2 = np.multiply.outer(mx, mx).ravel()
    A = (A2 + sp.diags(K * v.ravel() * m2)).tocsr()
    return DiscreteOperator(A, m2, bc, K, (coords[slx], coords[slx]),
                            (trimx, trimx), v.ravel(), grid)


def _assemble_periodic_uniform(grid, fieldv, K):
    N, r = grid.cells_per_side, grid.nodes_per_cell
    widths = np.full(N * r, grid.spacing)
    values = np.repeat(fieldv.cell_values, r)
    A, m, v = _ring_parts(widths, values, K)
    coords = np.linspace(0.0, 1.0, N * r + 1)[:-1]
    return DiscreteOperator(A, m, BoundaryCondition.periodic(), K, (coords,),
                            ((False, False),), v, grid, periodic=True)


# --- generic 1D builders on arbitrary cell widths ------------------------------
# Used by the two-well model, whose breakpoints do not sit on a uniform lattice.

def _ring_parts(widths, values, K):
    widths = np.asarray(widths, float)
    values = np.asarray(values, float)
    n = len(widths)
    h_prev = np.roll(widths, 1)
    m = 0.5 * (h_prev + widths)
    v_prev = np.roll(values, 1)
    vnode = (h_prev * v_prev + widths * values) / (h_prev + widths)
    diag = 1.0 / h_prev + 1.0 / widths + K * vnode * m
    A = sp.lil_matrix((n, n))
    idx = np.arange(n)
    A[idx, idx] = diag
    A[idx, (idx + 1) % n] = -1.0 / widths
    A[(idx + 1) % n, idx] = -1.0 / widths
    return A.tocsr(), m, vnode


def assemble_ring(widths, values, K: float) -> DiscreteOperator:
    """Periodic 1D operator from cell widths and cell values (sum of widths = circumference)."""
    A, m, v = _ring_parts(widths, values, K)
    coords = np.concatenate(([0.0], np.cumsum(widths)))[:-1]
    return DiscreteOperator(A, m, BoundaryCondition.periodic(), float(K), (coords,),
                            ((False, False),), v, None, periodic=True)


def assemble_line(widths, values, K: float, bc: BoundaryCondition) -> DiscreteOperator:
    """1D operator on [0, sum(widths)] from cell widths/values, any non-periodic bc."""
    widths = np.asarray(widths, float)
    values = np.asarray(values, float)
    n = len(widths) + 1
    coords = np.concatenate(([0.0], np.cumsum(widths)))
    m = np.zeros(n)
    m[:-1] += widths / 2
    m[1:] += widths / 2
    vnode = np.zeros(n)
    vnode[:-1] += values * widths / 2
    vnode[1:] += values * widths / 2
    vnode /= m
    diag = np.zeros(n)
    diag[:-1] += 1.0 / widths
    diag[1:] += 1.0 / widths
    trim = [False, False]
    for side, (kind, h) in enumerate(bc.end_specs()):
        i = 0 if side == 0 else n - 1
        if kind == "robin":
            diag[i] += h
        elif kind == "dirichlet":
            trim[side] = True
    A = sp.diags([diag, -1.0 / widths, -1.0 / widths], [0, 1, -1], format="csr")
    A = A + sp.diags(K * vnode * m)
    lo = 1 if trim[0] else 0
    hi = n - 1 if trim[1] else n
    A = A[lo:hi, lo:hi].tocsr()
    return DiscreteOperator(A, m[lo:hi], bc, float(K), (coords[lo:hi],),
                            ((trim[0], trim[1]),), vnode[lo:hi], None)


def export_triplets(op: DiscreteOperator, path) -> None:
    """Dump the matrix as plain-text ``row col value`` coordinate triplets."""
    coo = op.matrix.tocoo()
    with open(path, "w") as fh:
        for i, j, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{i} {j} {float(v)!r}\n")
