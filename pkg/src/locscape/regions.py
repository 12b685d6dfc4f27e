"""Labeled domain partitions: zero-potential components and their extensions."""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import UnsupportedError
from .operator import BoundaryCondition
from .potential import PotentialField, runs_of_zeros


@dataclass(frozen=True)
class Region:
    id: int
    size: int                 # cells or nodes, per partition granularity
    bbox: tuple               # inclusive index ranges per axis
    touches: tuple            # per side flags: 1D (lo, hi); 2D (x_lo, x_hi, y_lo, y_hi)
    touches_corner: bool
    measure: float            # physical length (1D) or area (2D)


@dataclass(frozen=True)
class SubregionPartition:
    """Partition of the lattice (cells) or of the node grid into connected regions.

    ``labels`` maps each cell/node to a region id, or -1 where unassigned
    (e.g. nonzero cells in a zero-component partition).
    """

    labels: np.ndarray
    granularity: str          # "cell" | "node"
    regions: tuple

    def __post_init__(self):
        lab = np.asarray(self.labels)
        lab.flags.writeable = False
        object.__setattr__(self, "labels", lab)

    @property
    def n_regions(self) -> int:
        return len(self.regions)

    def region_mask(self, region_id: int) -> np.ndarray:
        return self.labels == region_id


@dataclass(frozen=True)
class ExtendedSubregion:
    """Mirror extension of a region across the Neumann faces it touches."""

    region_id: int
    factor: int               # 1, 2, or 4
    base_measure: float
    extended_measure: float


def _region_from_mask(rid, mask, cell_measure):
    idx = np.nonzero(mask)
    bbox = tuple((int(ax.min()), int(ax.max())) for ax in idx)
    shape = mask.shape
    touches = []
    for axis, (lo, hi) in enumerate(bbox):
        touches.append(lo == 0)
        touches.append(hi == shape[axis] - 1)
    corner = False
    if mask.ndim == 2:
        x_lo, x_hi, y_lo, y_hi = touches
        for ci, cj in ((0, 0), (0, -1), (-1, 0), (-1, -1)):
            if mask[ci, cj]:
                corner = True
    size = int(mask.sum())
    return Region(rid, size, bbox, tuple(touches), corner, size * cell_measure)


def zero_components(fieldv: PotentialField) -> SubregionPartition:
    """Connected components of {V = 0} at cell granularity.

    1D components are maximal zero runs; 2D uses 4-connectivity (cells sharing
    only a corner are separate, matching the large-disorder valley geometry).
    """
    if not fieldv.is_binary:
        raise UnsupportedError("zero components are defined for {0,1}-valued fields")
    cells = fieldv.cell_values
    N = fieldv.grid.cells_per_side
    cell_measure = (1.0 / N) ** fieldv.grid.dim
    if fieldv.grid.dim == 1:
        starts, lengths = runs_of_zeros(cells)
        labels = np.full(N, -1, dtype=int)
        regions = []
        for rid, (s, ln) in enumerate(zip(starts, lengths)):
            labels[s:s + ln] = rid
            regions.append(Region(rid, int(ln), ((int(s), int(s + ln - 1)),),
                                  (s == 0, s + ln == N), False, ln / N))
        return SubregionPartition(labels, "cell", tuple(regions))
    lab, n = ndimage.label(cells == 0)   # default structure = 4-connectivity
    labels = lab.astype(int) - 1         # background -> -1
    regions = tuple(_region_from_mask(rid, labels == rid, cell_measure)
                    for rid in range(n))
    return SubregionPartition(labels, "cell", regions)


def extended_subregion(region: Region, partition: SubregionPartition,
                       bc: BoundaryCondition) -> ExtendedSubregion:
    """Extension factor from mirror reflection across touched reflective faces.

    Dirichlet walls reflect nothing (factor 1).  Under Neumann/Robin faces the
    measure doubles per touched direction: 2 for a side region, 4 for a 2D
    region meeting two perpendicular sides.
    """
    if bc.kind == "dirichlet":
        return ExtendedSubregion(region.id, 1, region.measure, region.measure)
    t = region.touches
    if len(t) == 2:  # 1D
        factor = 2 if (t[0] or t[1]) else 1
    else:
        touches_x = t[0] or t[1]
        touches_y = t[2] or t[3]
        if touches_x and touches_y:
            factor = 4
        elif touches_x or touches_y:
            factor = 2
        else:
            factor = 1
    return ExtendedSubregion(region.id, factor, region.measure, factor * region.measure)


def extended_measures(partition: SubregionPartition, bc: BoundaryCondition) -> np.ndarray:
    """Extended measure per region, in region-id order."""
    return np.array([extended_subregion(r, partition, bc).extended_measure
                     for r in partition.regions])
