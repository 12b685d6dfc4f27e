"""What happens as the disorder strength grows.

1D: the landscape collapses onto the zero-potential runs (values inside
barriers drop toward 1/K), and the ground mode follows.  2D: at large K the
valley partition of the landscape separates the 4-connected components of
{V=0} exactly -- no valley region straddles two components.

Writes strong_disorder_valleys.png (2D labels vs components) if matplotlib is
available.
"""

from pathlib import Path

import numpy as np

from locscape import (BoundaryCondition, DistributionSpec, assemble, disorder_sweep, grid_1d,
                      grid_2d, landscape_from_operator, sample_potential, smallest_eigenpairs,
                      valley_partition, zero_components)

OUT = Path(__file__).resolve().parent

# --- 1D suppression on the barriers --------------------------------------------
grid = grid_1d(100)
fieldv = sample_potential(grid, DistributionSpec.bernoulli(0.5), seed=42)
barrier_cells = np.flatnonzero(fieldv.cell_values == 1.0)[:6]
probes = (barrier_cells + 0.5) / 100.0
Ks = [1e3, 1e4, 1e5, 1e6]
table = disorder_sweep(fieldv, BoundaryCondition.neumann(), Ks, probes)
print("landscape on six barrier cells as K grows (rows: K = 1e3..1e6):")
for K, row in zip(Ks, table):
    print(f"  K={K:8.0f}  " + "  ".join(f"{v:.2e}" for v in row))
op = assemble(grid, fieldv, 1e6, BoundaryCondition.neumann())
u1 = smallest_eigenpairs(op, 1)[0].mode
idx = np.argmin(np.abs(op.axes[0][None, :] - probes[:, None]), axis=1)
print(f"ground-mode amplitude on those cells at K=1e6: max {np.max(np.abs(u1[idx])):.2e}")

# --- 2D valley lines vs zero components ----------------------------------------
g2 = grid_2d(20)
f2 = sample_potential(g2, DistributionSpec.bernoulli(0.8), seed=3)
comp = zero_components(f2)
labels = {}
for K in (1e3, 1e6):
    ls = landscape_from_operator(assemble(g2, f2, K, BoundaryCondition.neumann()))
    part = valley_partition(ls)
    labels[K] = part
    r = g2.nodes_per_cell
    centers = np.arange(20) * r + r // 2
    straddle = 0
    seen = {}
    for c0 in range(20):
        for c1 in range(20):
            cid = comp.labels[c0, c1]
            if cid < 0:
                continue
            reg = part.labels[centers[c0], centers[c1]]
            if seen.setdefault(reg, cid) != cid:
                straddle += 1
    print(f"K={K:8.0f}: {part.n_regions:3d} valley regions, {comp.n_regions} zero components, "
          f"{straddle} regions straddling two components")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit("matplotlib not available; numbers above are the result")

fig, axes = plt.subplots(1, 3, figsize=(12, 4))
axes[0].imshow(f2.cell_values.T, origin="lower", cmap="gray_r")
axes[0].set_title("potential cells (dark = V=1)")
for ax, K in zip(axes[1:], (1e3, 1e6)):
    ax.imshow(labels[K].labels.T % 17, origin="lower", cmap="tab20", interpolation="nearest")
    ax.set_title(f"valley regions, K={K:.0e}")
fig.tight_layout()
fig.savefig(OUT / "strong_disorder_valleys.png", dpi=150)
print(f"wrote {OUT / 'strong_disorder_valleys.png'}")
