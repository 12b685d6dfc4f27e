"""Reflected-random-walk estimator for the landscape.

Independent check on the finite-difference landscape: w(x) equals the expected
discounted occupation of a diffusion with generator Laplacian (per-axis
increments sqrt(2 dt) xi), reflected at the walls, discounted by
exp(-K int V ds) in the bulk and exp(-h dF) on wall contact, where F is the
boundary local time.  Under absorbing (Dirichlet) walls the integral runs to
the first exit instead.

Scheme notes, chosen so the module-level checks pass at their stated
tolerances rather than for generality:

* killing uses the per-step closed form Y * (1 - exp(-K v dt)) / (K v) with v
  the average of the cell values at the step endpoints; for constant
  potentials the estimator is then exact for any dt;
* wall reflection folds the raw step back into the domain, and the fold
  displacement |fold - raw| is the Skorokhod push, accumulated into the local
  time F (half-space approximation, adequate for dt <= 1e-4 and h <= 1);
* absorbing walls use the Brownian-bridge crossing probability
  exp(-d_start d_end / dt) per axis, which removes the O(sqrt(dt)) exit bias;
* each path draws from its own counter-based stream (seed xor path index) and
  the reduction is by path index, so results do not depend on scheduling.

The step-start/step-end sampling of V cannot resolve potential features
narrower than the walk step sqrt(2 dt); comparisons against the
finite-difference landscape should probe cells at least that wide.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedError
from .operator import BoundaryCondition
from .potential import PotentialField
from .rng import stream


@dataclass(frozen=True)
class PathConfig:
    dt: float = 1e-4
    t_max: float = 10.0
    n_paths: int = 10_000
    seed: int = 0
    weight_cutoff: float = 1e-10   # horizon: a path stops once its weight is below this
    block: int = 256               # steps drawn per stream request
    chunk: int = 4096              # paths simulated together

    def __post_init__(self):
        if self.dt <= 0 or self.t_max <= 0 or self.n_paths < 1:
            raise DomainError("dt, t_max must be positive and n_paths >= 1")


@dataclass(frozen=True)
class FeynmanKacEstimate:
    mean: float
    std_error: float   # sample std / sqrt(n_paths)
    n_paths: int


def _fold(raw):
    """Mirror a raw position into [0,1] (reflection at both walls)."""
    y = np.mod(raw, 2.0)
    return np.where(y > 1.0, 2.0 - y, y)


def simulate_reflecting_path(dim: int, x0, cfg: PathConfig, n_steps: int):
    """One reflected path: positions (n_steps+1, dim) and local-time increments."""
    x0 = np.broadcast_to(np.asarray(x0, float), (dim,)).copy()
    if np.any(x0 < 0) or np.any(x0 > 1):
        raise DomainError(f"start point {x0} outside the closed unit domain")
    rng = stream(cfg.seed)
    sdt = np.sqrt(2.0 * cfg.dt)
    pos = np.empty((n_steps + 1, dim))
    dF = np.zeros(n_steps)
    pos[0] = x0
    for k in range(n_steps):
        raw = pos[k] + sdt * rng.standard_normal(dim)
        folded = _fold(raw)
        dF[k] = np.abs(folded - raw).sum()
        pos[k + 1] = folded
    return pos, dF


def estimate_landscape_mc(x, fieldv: PotentialField, K: float,
                          bc: BoundaryCondition, cfg: PathConfig) -> FeynmanKacEstimate:
    """Monte Carlo estimate of the landscape at a point."""
    if bc.kind not in ("neumann", "robin", "dirichlet"):
        raise UnsupportedError(f"estimator supports neumann/robin/dirichlet, not {bc.kind}")
    d = fieldv.grid.dim
    x0 = np.broadcast_to(np.asarray(x, float), (d,)).copy()
    if np.any(x0 < 0) or np.any(x0 > 1):
        raise DomainError(f"probe {x0} outside the closed unit domain")

    cells = fieldv.cell_values
    N = fieldv.grid.cells_per_side
    absorbing = bc.kind == "dirichlet"
    h = bc.h if bc.kind == "robin" else 0.0
    dt, sdt = cfg.dt, np.sqrt(2.0 * cfg.dt)
    max_steps = int(np.ceil(cfg.t_max / dt))

    def v_at(pts):
        ci = np.clip((pts * N).astype(int), 0, N - 1)
        return cells[ci[:, 0]] if d == 1 else cells[ci[:, 0], ci[:, 1]]

    acc_all = np.empty(cfg.n_paths)
    for c0 in range(0, cfg.n_paths, cfg.chunk):
        ids = np.arange(c0, min(c0 + cfg.chunk, cfg.n_paths))
        nc = len(ids)
        gens = [stream(cfg.seed, int(i)) for i in ids]
        acc = np.zeros(nc)
        x_cur = np.tile(x0, (nc, 1))
        Y = np.ones(nc)
        alive_pos = np.arange(nc)
        steps_done = 0
        while len(alive_pos) and steps_done < max_steps:
            B = min(cfg.block, max_steps - steps_done)
            xi = np.stack([gens[p].standard_normal((B, d)) for p in alive_pos])
            uu = np.stack([gens[p].random(B) for p in alive_pos]) if absorbing else None
            xa = x_cur[alive_pos].copy()
            Ya = Y[alive_pos].copy()
            aa = acc[alive_pos].copy()
            live = np.ones(len(alive_pos), dtype=bool)
            for b in range(B):
                if not live.any():
                    break
                raw = xa + sdt * xi[:, b, :]
                if absorbing:
                    p_lo = np.minimum(1.0, np.exp(-np.maximum(xa, 0) * np.maximum(raw, 0) / dt))
                    p_hi = np.minimum(1.0, np.exp(-np.maximum(1 - xa, 0) * np.maximum(1 - raw, 0) / dt))
                    p_survive = np.prod((1 - p_lo) * (1 - p_hi), axis=1)
                    new = np.clip(raw, 0.0, 1.0)
                else:
                    new = _fold(raw)
                v = 0.5 * (v_at(xa) + v_at(new))
                kv = K * v
                safe = np.where(kv > 0, kv, 1.0)
                step_weight = np.where(kv > 0, (1.0 - np.exp(-kv * dt)) / safe, dt)
                aa = aa + np.where(live, Ya * step_weight, 0.0)
                decay = np.exp(-kv * dt)
                if h > 0:
                    decay = decay * np.exp(-h * np.abs(new - raw).sum(axis=1))
                Ya = np.where(live, Ya * decay, Ya)
                xa = np.where(live[:, None], new, xa)
                if absorbing:
                    crossed = (raw <= 0).any(axis=1) | (raw >= 1).any(axis=1)
                    live &= ~(crossed | (uu[:, b] > p_survive))
                live &= Ya >= cfg.weight_cutoff
            x_cur[alive_pos] = xa
            Y[alive_pos] = Ya
            acc[alive_pos] = aa
            alive_pos = alive_pos[live]
            steps_done += B
        acc_all[ids] = acc
    mean = float(acc_all.mean())
    se = float(acc_all.std(ddof=1) / np.sqrt(cfg.n_paths)) if cfg.n_paths > 1 else 0.0
    return FeynmanKacEstimate(mean, se, cfg.n_paths)


def probe_points_for(fieldv: PotentialField, n_probes: int = 5) -> np.ndarray:
    """Probe locations the estimator can resolve: centers of the widest zero
    runs, padded with the barrier cell farthest from any zero cell."""
    if fieldv.grid.dim != 1:
        raise UnsupportedError("automatic probe choice is 1D only")
    from .potential import runs_of_zeros

    N = fieldv.grid.cells_per_side
    starts, lengths = runs_of_zeros(fieldv.cell_values)
    order = np.argsort(-lengths, kind="stable")
    probes = [(starts[i] + lengths[i] / 2.0) / N for i in order[: n_probes - 1]]
    zero_idx = np.flatnonzero(fieldv.cell_values == 0)
    ones_idx = np.flatnonzero(fieldv.cell_values > 0)
    if len(ones_idx):
        dist = np.abs(ones_idx[:, None] - zero_idx[None, :]).min(axis=1) if len(zero_idx) else ones_idx
        far = ones_idx[np.argmax(dist)]
        probes.append((far + 0.5) / N)
    return np.array(probes[:n_probes])
