"""Localization landscape, valley partitions, and the landscape bound on modes.

The landscape w solves (-Lap + K V) w = 1 under the problem's boundary
condition.  Its local maxima mark candidate localization sites; splitting the
domain along the valleys of w yields the subregions that confine low-energy
modes.  For sup-normalized eigenpairs the bound |u| <= |lambda| w holds, and it
holds exactly for the discrete pencil used here because the assembled matrix is
an M-matrix (inverse-positive), so the check below should return at most
solver-tolerance violations.
"""

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .operator import BoundaryCondition, DiscreteOperator, assemble
from .potential import GridSpec, PotentialField
from .solver import EigenPair, solve_linear


@dataclass(frozen=True)
class Landscape:
    """Landscape values on the active nodes of the operator they solve."""

    w: np.ndarray
    op: DiscreteOperator

    def __post_init__(self):
        w = np.asarray(self.w, float)
        w.flags.writeable = False
        object.__setattr__(self, "w", w)

    @property
    def grid_values(self) -> np.ndarray:
        return self.w.reshape(self.op.shape_active)


def landscape_from_operator(op: DiscreteOperator, tol: float = 1e-10) -> Landscape:
    w = solve_linear(op, 1.0, tol=tol)
    if w.min() < -tol:
        raise UsageError(f"landscape came out negative ({w.min():.3e}); operator not inverse-positive?")
    return Landscape(w, op)


def compute_landscape(grid: GridSpec, fieldv: PotentialField, K: float,
                      bc: BoundaryCondition, tol: float = 1e-10) -> Landscape:
    return landscape_from_operator(assemble(grid, fieldv, K, bc), tol=tol)


def landscape_bound_violation(pair: EigenPair, ls: Landscape) -> float:
    """Signed maximum of |u| - |lambda| w over nodes; <= ~0 when the bound holds."""
    if pair.mode.shape != ls.w.shape:
        raise UsageError("eigenpair and landscape live on different node sets")
    return float(np.max(np.abs(pair.mode) - abs(pair.eigenvalue) * ls.w))


# --- valley partitions ----------------------------------------------------------

def local_maxima_1d(w: np.ndarray) -> list[int]:
    """Indices of local maxima (one representative per plateau, its midpoint)."""
    n = len(w)
    out = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and w[j + 1] == w[i]:
            j += 1
        left_lower = i == 0 or w[i - 1] < w[i]
        right_lower = j == n - 1 or w[j + 1] < w[j]
        if left_lower and right_lower:
            out.append((i + j) // 2)
        i = j + 1
    return out


def _splits_1d(w):
    """Interior minima as (ridge node, join-left flag); plateaus split at their midpoint."""
    n = len(w)
    splits = []
    i = 1
    while i < n - 1:
        j = i
        while j + 1 < n and w[j + 1] == w[i]:
            j += 1
        if w[i - 1] > w[i] and j + 1 < n and w[j + 1] > w[j]:
            mid = (i + j) // 2
            splits.append((mid, w[i - 1] >= w[j + 1]))  # tie joins the lower-index side
        i = j + 1
    return splits


def _partition_from_labels(labels, shape, measure_per_node):
    from .regions import Region, SubregionPartition  # local import to avoid cycle

    lab = labels.reshape(shape)
    regions = []
    for rid in range(labels.max() + 1):
        mask = lab == rid
        idx = np.nonzero(mask)
        bbox = tuple((int(ax.min()), int(ax.max())) for ax in idx)
        touches = []
        for axis, (lo, hi) in enumerate(bbox):
            touches.append(lo == 0)
            touches.append(hi == shape[axis] - 1)
        corner = False
        if lab.ndim == 2:
            corner = any(mask[ci, cj] for ci in (0, -1) for cj in (0, -1))
        size = int(mask.sum())
        regions.append(Region(rid, size, bbox, tuple(touches), corner,
                              size * measure_per_node))
    return SubregionPartition(lab, "node", tuple(regions))


def valley_partition(ls: Landscape):
    """Split the domain along the valleys of the landscape.

    1D: regions are the intervals between interior local minima of w; the
    minimum node itself joins the side whose neighbor value is higher, and an
    equal-value minimum plateau is split at its midpoint node.

    2D: watershed by flooding.  Each local-maximum plateau of w seeds a region;
    nodes enter a max-heap keyed by (w, lowest node index) and are claimed by
    the first region to reach them, so ridge nodes join the adjacent region of
    higher w and plateau ties resolve by node index.  Identical landscapes give
    identical labels.
    """
    w = ls.w
    shape = ls.op.shape_active
    spacing = np.prod([ax[1] - ax[0] for ax in ls.op.axes])
    if ls.op.dim == 1:
        labels = np.empty(len(w), dtype=int)
        prev = 0
        rid = 0
        for mid, join_left in _splits_1d(w):
            end = mid + 1 if join_left else mid
            labels[prev:end] = rid
            rid += 1
            prev = end
        labels[prev:] = rid
        return _partition_from_labels(labels, shape, spacing)
    labels = _watershed(w.reshape(shape))
    return _partition_from_labels(labels.ravel(), shape, spacing)


def _neighbors(i, nx, ny):
    ix, iy = divmod(i, ny)
    if ix > 0:
        yield i - ny
    if ix < nx - 1:
        yield i + ny
    if iy > 0:
        yield i - 1
    if iy < ny - 1:
        yield i + 1


def _watershed(w2: np.ndarray) -> np.ndarray:
    nx, ny = w2.shape
    w = w2.ravel()
    n = w.size
    labels = np.full(n, -1, dtype=int)

    # seed regions: connected plateaus of equal value with no higher neighbor
    visited = np.zeros(n, dtype=bool)
    heap = []
    rid = 0
    for start in range(n):
        if visited[start]:
            continue
        plateau = [start]
        visited[start] = True
        has_higher = False
        qi = 0
        while qi < len(plateau):
            node = plateau[qi]
            qi += 1
            for nb in _neighbors(node, nx, ny):
                if w[nb] == w[node] and not visited[nb]:
                    visited[nb] = True
                    plateau.append(nb)
                elif w[nb] > w[node]:
                    has_higher = True
        if not has_higher:
            for node in plateau:
                labels[node] = rid
            for node in plateau:
                for nb in _neighbors(node, nx, ny):
                    if labels[nb] == -1:
                        heapq.heappush(heap, (-w[nb], nb, rid))
            rid += 1

    while heap:
        _, node, lab = heapq.heappop(heap)
        if labels[node] != -1:
            continue
        labels[node] = lab
        for nb in _neighbors(node, nx, ny):
            if labels[nb] == -1:
                heapq.heappush(heap, (-w[nb], nb, lab))
    return labels


def disorder_sweep(fieldv: PotentialField, bc: BoundaryCondition, K_list,
                   probe_x) -> np.ndarray:
    """Landscape values at probe points for each disorder strength in K_list.

    Returns an array of shape (len(K_list), len(probe_x)).  Probes are read at
    the nearest active node.
    """
    probe_x = np.atleast_2d(np.asarray(probe_x, float).T).T  # (np, dim)
    out = np.empty((len(K_list), probe_x.shape[0]))
    for row, K in enumerate(K_list):
        ls = compute_landscape(fieldv.grid, fieldv, K, bc)
        idx = _nearest_nodes(ls.op, probe_x)
        out[row] = ls.w[idx]
    return out


def _nearest_nodes(op: DiscreteOperator, pts: np.ndarray) -> np.ndarray:
    per_axis = [np.argmin(np.abs(ax[None, :] - pts[:, d][:, None]), axis=1)
                for d, ax in enumerate(op.axes)]
    if op.dim == 1:
        return per_axis[0]
    ny = len(op.axes[1])
    return per_axis[0] * ny + per_axis[1]


def save_grid(values: np.ndarray, path) -> None:
    """One value per line, row-major; the plain-text exchange format for plots."""
    with open(path, "w") as fh:
        for v in np.asarray(values).ravel():
            fh.write(f"{v.item()!r}\n")
