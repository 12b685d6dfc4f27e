"""Random piecewise-constant lattice potentials on the unit interval/square."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, UnsupportedError
from .rng import stream


@dataclass(frozen=True)
class GridSpec:
    """Uniform lattice over (0,1)^dim: N cells per axis, r finite-difference nodes per cell.

    Node count per axis is N*r + 1, so every cell boundary coincides with a node.
    """

    dim: int
    cells_per_side: int
    nodes_per_cell: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ParameterError(f"dim must be 1 or 2, got {self.dim}")
        if self.cells_per_side < 2:
            raise ParameterError("need at least 2 cells per side")
        if self.nodes_per_cell < 2:
            raise ParameterError("need at least 2 nodes per cell")

    @property
    def nodes_per_axis(self) -> int:
        return self.cells_per_side * self.nodes_per_cell + 1

    @property
    def spacing(self) -> float:
        return 1.0 / (self.cells_per_side * self.nodes_per_cell)

    @property
    def n_cells(self) -> int:
        return self.cells_per_side ** self.dim


def grid_1d(n_cells: int, nodes_per_cell: int = 8) -> GridSpec:
    return GridSpec(1, n_cells, nodes_per_cell)


def grid_2d(n_cells: int, nodes_per_cell: int = 4) -> GridSpec:
    return GridSpec(2, n_cells, nodes_per_cell)


@dataclass(frozen=True)
class DistributionSpec:
    """Per-cell value distribution; all draws are nonnegative.

    kinds: ``bernoulli(p)`` on {0,1} with P(V=1)=p; ``uniform(a,b)`` with
    0 <= a < b; ``normal(mu,sigma)`` clamped below at 0 (this puts an atom at 0
    of mass Phi(-mu/sigma)); ``gamma(mu,sigma)`` parameterized by mean and
    standard deviation (shape mu^2/sigma^2, scale sigma^2/mu).
    """

    kind: str
    params: tuple

    @staticmethod
    def bernoulli(p: float) -> "DistributionSpec":
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"bernoulli p must be in [0,1], got {p}")
        return DistributionSpec("bernoulli", (float(p),))

    @staticmethod
    def uniform(a: float, b: float) -> "DistributionSpec":
        if not 0.0 <= a < b:
            raise ParameterError(f"uniform needs 0 <= a < b, got ({a}, {b})")
        return DistributionSpec("uniform", (float(a), float(b)))

    @staticmethod
    def normal(mu: float, sigma: float) -> "DistributionSpec":
        if sigma <= 0:
            raise ParameterError("normal sigma must be > 0")
        return DistributionSpec("normal", (float(mu), float(sigma)))

    @staticmethod
    def gamma(mu: float, sigma: float) -> "DistributionSpec":
        if sigma <= 0 or mu <= 0:
            raise ParameterError("gamma needs mu > 0 and sigma > 0")
        return DistributionSpec("gamma", (float(mu), float(sigma)))

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == "bernoulli":
            (p,) = self.params
            return (rng.random(size) < p).astype(float)
        if self.kind == "uniform":
            a, b = self.params
            return rng.uniform(a, b, size)
        if self.kind == "normal":
            mu, sigma = self.params
            return np.maximum(rng.normal(mu, sigma, size), 0.0)
        if self.kind == "gamma":
            mu, sigma = self.params
            shape = mu * mu / (sigma * sigma)
            scale = sigma * sigma / mu
            return rng.gamma(shape, scale, size)
        raise ParameterError(f"unknown distribution kind {self.kind!r}")


@dataclass(frozen=True)
class PotentialField:
    """Realized potential: one nonnegative value per lattice cell.

    ``cell_values`` has shape (N,) in 1D or (N, N) in 2D with axis 0 = x.
    """

    grid: GridSpec
    cell_values: np.ndarray
    seed: int
    dist: DistributionSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.cell_values, dtype=float)
        expect = (self.grid.cells_per_side,) * self.grid.dim
        if vals.shape != expect:
            raise ParameterError(f"cell_values shape {vals.shape} != {expect}")
        if np.any(vals < 0):
            raise ParameterError("cell values must be nonnegative")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "cell_values", vals)

    @property
    def is_binary(self) -> bool:
        return bool(np.isin(self.cell_values, (0.0, 1.0)).all())


def sample_potential(grid: GridSpec, dist: DistributionSpec, seed: int) -> PotentialField:
    """Draw the N^dim independent cell values; deterministic in (grid, dist, seed)."""
    rng = stream(seed)
    shape = (grid.cells_per_side,) * grid.dim
    return PotentialField(grid, dist.sample(rng, shape), seed, dist)


def run_decomposition(fieldv: PotentialField) -> list[tuple[int, int]]:
    """Maximal runs of a 1D binary field as (value, length) pairs, left to right.

    Runs alternate in value and their lengths sum to N.
    """
    if fieldv.grid.dim != 1:
        raise UnsupportedError("run decomposition is defined for 1D fields")
    if not fieldv.is_binary:
        raise UnsupportedError("run decomposition needs a {0,1}-valued field")
    cells = fieldv.cell_values.astype(int)
    change = np.flatnonzero(np.diff(cells)) + 1
    bounds = np.concatenate(([0], change, [len(cells)]))
    return [(int(cells[a]), int(b - a)) for a, b in zip(bounds[:-1], bounds[1:])]


def runs_of_zeros(cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Start indices and lengths of maximal zero runs in a 1D binary array."""
    z = np.asarray(cells) == 0
    edges = np.flatnonzero(np.diff(np.concatenate(([0], z.astype(np.int8), [0]))))
    return edges[::2], edges[1::2] - edges[::2]


# --- plain-text serialization -------------------------------------------------

def save_potential(fieldv: PotentialField, path) -> None:
    """Header ``dim N r seed dist...`` then the cell values row-major, one per line."""
    dist = fieldv.dist
    tag = "raw" if dist is None else " ".join([dist.kind, *(repr(p) for p in dist.params)])
    g = fieldv.grid
    lines = [f"{g.dim} {g.cells_per_side} {g.nodes_per_cell} {fieldv.seed} {tag}"]
    lines += [repr(float(v)) for v in fieldv.cell_values.ravel()]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_potential(path) -> PotentialField:
    with open(path) as fh:
        header = fh.readline().split()
        values = np.array([float(line) for line in fh if line.strip()])
    dim, n, r, seed = int(header[0]), int(header[1]), int(header[2]), int(header[3])
    dist = None
    if header[4] != "raw":
        dist = DistributionSpec(header[4], tuple(float(t) for t in header[5:]))
    grid = GridSpec(dim, n, r)
    return PotentialField(grid, values.reshape((n,) * dim), seed, dist)
