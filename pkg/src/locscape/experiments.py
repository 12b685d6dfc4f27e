"""Monte Carlo ensembles over full eigenproblem solves.

Each trial draws a fresh potential (stream = ensemble seed xor trial index),
assembles the operator, solves for the lowest mode(s), and evaluates a
localization predicate.  Trials are independent and reproducible individually;
the reduction is by trial index, so worker-pool execution gives identical
results to a serial run.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ExperimentError, UnsupportedError, UsageError
from .landscape import landscape_from_operator, valley_partition
from .operator import BoundaryCondition, assemble
from .potential import DistributionSpec, GridSpec, PotentialField, runs_of_zeros, sample_potential
from .regions import SubregionPartition
from .solver import smallest_eigenpairs

THRESHOLD = 0.5   # localization detectors compare sup-normalized amplitudes to this
PREDICATES = ("boundary", "corner", "multimodal")


@dataclass(frozen=True)
class ExperimentSpec:
    grid: GridSpec
    dist: DistributionSpec
    K: float
    bc: BoundaryCondition
    n_trials: int
    seed: int
    predicate: str
    eigen_index: int = 1

    def __post_init__(self):
        if self.n_trials < 1:
            raise UsageError("n_trials must be >= 1")
        if self.predicate not in PREDICATES:
            raise UsageError(f"predicate must be one of {PREDICATES}")
        if self.eigen_index < 1:
            raise UsageError("eigen_index counts from 1")


@dataclass(frozen=True)
class ProbabilityEstimate:
    p_hat: float
    ci_low: float        # Wilson 95%
    ci_high: float
    n_trials: int
    n_hits: int
    n_failures: int = 0


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    eigenvalue: float
    hit: bool
    failed: bool


def wilson_interval(hits: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    ph = hits / n
    denom = 1.0 + z * z / n
    center = (ph + z * z / (2 * n)) / denom
    half = z * np.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


# --- predicates -----------------------------------------------------------------

def is_boundary_localized(mode_full: np.ndarray, dim: int) -> bool:
    """Sup-normalized mode exceeds THRESHOLD somewhere on the domain boundary (strict)."""
    u = np.abs(np.asarray(mode_full))
    if dim == 1:
        return bool(max(u[0], u[-1]) > THRESHOLD)
    edge = max(u[0, :].max(), u[-1, :].max(), u[:, 0].max(), u[:, -1].max())
    return bool(edge > THRESHOLD)


def is_corner_localized(mode_full: np.ndarray) -> bool:
    u = np.abs(np.asarray(mode_full))
    if u.ndim != 2:
        raise UnsupportedError("corner localization is a 2D notion")
    return bool(max(u[0, 0], u[0, -1], u[-1, 0], u[-1, -1]) > THRESHOLD)


def is_multimodal(envelope: np.ndarray, partition: SubregionPartition) -> bool:
    """At least two valley regions carry amplitude above THRESHOLD.

    ``envelope`` is |u| of the mode, or the pointwise max over a near-degenerate
    cluster (degenerate modes mix arbitrarily, the envelope does not).
    """
    if partition.n_regions == 0:
        raise UsageError("empty partition")
    labels = partition.labels.ravel()
    hot = np.unique(labels[np.abs(np.asarray(envelope)).ravel() > THRESHOLD])
    return int((hot >= 0).sum()) >= 2


def longest_extended_run_on_boundary(fieldv: PotentialField, bc: BoundaryCondition) -> bool:
    """Pure lattice statistic mirroring the boundary predicate: the longest
    (wall-doubled under reflective bc) zero run sits strictly at a wall."""
    if fieldv.grid.dim != 1:
        raise UnsupportedError("run statistic is 1D")
    N = fieldv.grid.cells_per_side
    starts, lengths = runs_of_zeros(fieldv.cell_values)
    if len(lengths) == 0:
        return False
    ext = lengths.astype(float).copy()
    wall = np.zeros(len(lengths), dtype=bool)
    if bc.kind != "dirichlet":
        if starts[0] == 0:
            ext[0] *= 2
            wall[0] = True
        if starts[-1] + lengths[-1] == N:
            ext[-1] *= 2
            wall[-1] = True
    max_wall = ext[wall].max() if wall.any() else -np.inf
    max_inner = ext[~wall].max() if (~wall).any() else -np.inf
    return bool(max_wall > max_inner)


# --- the ensemble pipeline -------------------------------------------------------

def run_trial(spec: ExperimentSpec, trial: int) -> TrialRecord:
    trial_seed = spec.seed ^ trial
    fieldv = sample_potential(spec.grid, spec.dist, trial_seed)
    op = assemble(spec.grid, fieldv, spec.K, spec.bc)
    idx = spec.eigen_index - 1
    k = idx + (3 if spec.predicate == "multimodal" else 1)
    try:
        pairs = smallest_eigenpairs(op, k=k)
    except ConvergenceError:
        return TrialRecord(trial, trial_seed, float("nan"), False, True)
    pair = pairs[idx]
    if spec.predicate == "boundary":
        hit = is_boundary_localized(op.embed(pair.mode), spec.grid.dim)
    elif spec.predicate == "corner":
        hit = is_corner_localized(op.embed(pair.mode))
    else:
        members = [p for p in pairs if p.cluster == pair.cluster]
        envelope = np.max(np.abs([p.mode for p in members]), axis=0)
        partition = valley_partition(landscape_from_operator(op))
        hit = is_multimodal(envelope, partition)
    return TrialRecord(trial, trial_seed, pair.eigenvalue, hit, False)


def run_ensemble(spec: ExperimentSpec, workers: int = 1) -> tuple[ProbabilityEstimate, list[TrialRecord]]:
    """All trials of the experiment; aborts if more than 1% of solves fail."""
    trials = range(spec.n_trials)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_trial, [spec] * spec.n_trials, trials,
                                    chunksize=max(1, spec.n_trials // (8 * workers))))
    else:
        records = [run_trial(spec, t) for t in trials]
    n_failed = sum(r.failed for r in records)
    if n_failed > 0.01 * spec.n_trials:
        raise ExperimentError(
            f"{n_failed}/{spec.n_trials} trials failed to converge; "
            f"first failures: {[r.trial for r in records if r.failed][:5]}")
    ok = [r for r in records if not r.failed]
    hits = sum(r.hit for r in ok)
    lo, hi = wilson_interval(hits, len(ok))
    est = ProbabilityEstimate(hits / len(ok), lo, hi, len(ok), hits, n_failed)
    return est, records


def estimate_probability(spec: ExperimentSpec, workers: int = 1) -> ProbabilityEstimate:
    return run_ensemble(spec, workers)[0]


# --- distribution study -----------------------------------------------------------

STUDY_SIGMAS = (0.5, 0.5 / np.sqrt(3.0), 0.5 / 3.0)   # mean is fixed at 1/2


@dataclass(frozen=True)
class StudyRow:
    dim: int
    kind: str
    sigma: float
    h: float
    boundary: ProbabilityEstimate
    corner: ProbabilityEstimate | None


def feasible_distribution(kind: str, sigma: float, mu: float = 0.5) -> DistributionSpec | None:
    """Mean-mu distribution of the given family and (pre-clamp) std, or None.

    A {0,1} Bernoulli with mean 1/2 has std exactly 1/2, and a nonnegative
    uniform with mean 1/2 has std at most 1/(2 sqrt 3); other combinations do
    not exist in these families and are skipped.
    """
    if kind == "bernoulli":
        return DistributionSpec.bernoulli(mu) if abs(sigma - mu) < 1e-12 else None
    if kind == "uniform":
        a = mu - sigma * np.sqrt(3.0)
        if a < -1e-12:
            return None
        return DistributionSpec.uniform(max(a, 0.0), mu + sigma * np.sqrt(3.0))
    if kind == "normal":
        return DistributionSpec.normal(mu, sigma)
    if kind == "gamma":
        return DistributionSpec.gamma(mu, sigma)
    raise UsageError(f"unknown family {kind}")


def distribution_study(h_list, dims=(1, 2), kinds=("bernoulli", "normal", "gamma", "uniform"),
                       sigmas=STUDY_SIGMAS, K: float = 1e4, n_trials: int = 200,
                       seed: int = 0, workers: int = 1) -> list[StudyRow]:
    """Boundary (and 2D corner) probabilities across potential families.

    Grids follow the desk-scale defaults: N=50 in 1D, N=15 in 2D.
    """
    rows = []
    for dim in dims:
        grid = GridSpec(dim, 50 if dim == 1 else 15, 8 if dim == 1 else 4)
        for kind in kinds:
            for sigma in sigmas:
                dist = feasible_distribution(kind, sigma)
                if dist is None:
                    continue
                for h in h_list:
                    bc = BoundaryCondition.robin(h) if h > 0 else BoundaryCondition.neumann()
                    spec = ExperimentSpec(grid, dist, K, bc, n_trials, seed, "boundary")
                    boundary, records = run_ensemble(spec, workers)
                    corner = None
                    if dim == 2:
                        cspec = ExperimentSpec(grid, dist, K, bc, n_trials, seed, "corner")
                        corner = estimate_probability(cspec, workers)
                    rows.append(StudyRow(dim, kind, float(sigma), float(h), boundary, corner))
    return rows
