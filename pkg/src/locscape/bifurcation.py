"""Two-well periodic model: where the ground mode lives as disorder grows.

The potential on the unit circle has a single long well (length L1) and a
split well (two length-L3 wells separated by a short L4 barrier), far apart
(gap L2).  At weak coupling K the ground mode sits in the split well, whose
joint width exceeds L1; at strong coupling the barrier cuts the split well in
two and the mode jumps to the long well.  The crossover coupling solves a pair
of transcendental matching conditions, one per well, obtained by shifting each
well to the center of the period and folding the half-interval; the sweep of
the full spectrum provides the independent numerical route to the same number.
"""

from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from .errors import (ConstraintError, CrossingNotBracketedError, DomainError,
                     NoBifurcationError, NoRootError, PoleProximityError)
from .operator import BoundaryCondition, DiscreteOperator, assemble_line, assemble_ring
from .rng import stream
from .solver import smallest_eigenpairs

POLE_WIDTH = 1e-8
SCAN_INTERVALS = 200


@dataclass(frozen=True)
class TwoWellParams:
    """Well geometry (L1, L2, L3, L4); the five constraints make the crossover exist.

    (i) L1 > L3 so the long well is the longest single piece; (ii) L1 < 2 L3 so
    the split well is jointly longer; (iii) L4 < L3/2 so its barrier is short;
    (iv) L2 > L1 + 2 L3 + L4 so the wells decouple; (v) lengths tile the circle.
    """

    L1: float
    L2: float
    L3: float
    L4: float

    def __post_init__(self):
        L1, L2, L3, L4 = self.L1, self.L2, self.L3, self.L4
        if min(L1, L2, L3, L4) <= 0:
            raise ConstraintError("positivity", "all lengths must be positive")
        if not L1 > L3:
            raise ConstraintError("i", f"L1 ={L1} must exceed L3 ={L3}")
        if not L1 < 2 * L3:
            raise ConstraintError("ii", f"L1 ={L1} must be below 2*L3 ={2*L3}")
        if not L4 < L3 / 2:
            raise ConstraintError("iii", f"L4 ={L4} must be below L3/2 ={L3/2}")
        if not L2 > L1 + 2 * L3 + L4:
            raise ConstraintError("iv", f"L2 ={L2} must exceed L1+2*L3+L4 ={L1 + 2*L3 + L4}")
        if abs(L1 + 2 * L2 + 2 * L3 + L4 - 1.0) > 1e-12:
            raise ConstraintError("v", f"lengths sum to {L1 + 2*L2 + 2*L3 + L4}, not 1")

    @property
    def breakpoints(self) -> tuple:
        x1 = self.L2 / 2
        x2 = x1 + self.L1
        x3 = x2 + self.L2
        x4 = x3 + self.L3
        x5 = x4 + self.L4
        x6 = x5 + self.L3
        return (x1, x2, x3, x4, x5, x6)

    @property
    def half_widths(self) -> tuple:
        """(t0, t1, t2, t3) = (L1/2, L4/2, L4/2 + L3, 1/2)."""
        return (self.L1 / 2, self.L4 / 2, self.L4 / 2 + self.L3, 0.5)

    def wells(self) -> tuple:
        """Peak measurement windows: [x1,x2] and [x3,x5].

        The split-well window covers one arm plus the barrier; by mirror
        symmetry its amplitude maximum equals the full well's, so peak-height
        ratios are unaffected by the truncation.
        """
        x1, x2, x3, x4, x5, x6 = self.breakpoints
        return ((x1, x2), (x3, x5))

    @property
    def split_well(self) -> tuple:
        """The full split well [x3, x6], both arms and the barrier."""
        x1, x2, x3, x4, x5, x6 = self.breakpoints
        return (x3, x6)


REFERENCE_PARAMS = TwoWellParams(1 / 12, 2 / 5, 1 / 20, 1 / 60)


def piecewise_potential(params: TwoWellParams) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoints (len 8, from 0 to 1) and the 0/1 value on each of the 7 pieces."""
    bps = np.array([0.0, *params.breakpoints, 1.0])
    values = np.array([1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0])
    return bps, values


def _pieces_to_cells(bps, values, nodes_per_unit):
    widths, cells = [], []
    for lo, hi, v in zip(bps[:-1], bps[1:], values):
        length = hi - lo
        n = max(2, int(round(length * nodes_per_unit)))
        widths.append(np.full(n, length / n))
        cells.append(np.full(n, v))
    return np.concatenate(widths), np.concatenate(cells)


def toy_operator(params: TwoWellParams, K: float, nodes_per_unit: int = 3000) -> DiscreteOperator:
    """Periodic operator on a grid built from the breakpoints, so V is exact on it."""
    widths, cells = _pieces_to_cells(*piecewise_potential(params), nodes_per_unit)
    return assemble_ring(widths, cells, K)


def subsystem_half_pieces(params: TwoWellParams, which: int) -> tuple[np.ndarray, np.ndarray]:
    """Half-period potential of the isolated well, folded about its center.

    which=1: the long well occupies [0, t0) with walls beyond; which=2: half the
    barrier [0, t1), the split-well arm [t1, t2), walls up to 1/2.
    """
    t0, t1, t2, t3 = params.half_widths
    if which == 1:
        return np.array([0.0, t0, t3]), np.array([0.0, 1.0])
    if which == 2:
        return np.array([0.0, t1, t2, t3]), np.array([1.0, 0.0, 1.0])
    raise DomainError("which must be 1 or 2")


def subsystem_operator(params: TwoWellParams, K: float, which: int,
                       nodes_per_unit: int = 4000) -> DiscreteOperator:
    """FD oracle for the matching conditions: the folded half-interval, both ends reflective."""
    bps, values = subsystem_half_pieces(params, which)
    widths, cells = _pieces_to_cells(bps, values, nodes_per_unit)
    return assemble_line(widths, cells, K, BoundaryCondition.neumann())


def mirrored_ring_operator(params: TwoWellParams, K: float, which: int,
                           nodes_per_unit: int = 4000) -> DiscreteOperator:
    """Full-period operator with the isolated well centered; its even modes are
    exactly the folded half-interval's (the grid mirrors node-for-node)."""
    bps, values = subsystem_half_pieces(params, which)
    widths, cells = _pieces_to_cells(bps, values, nodes_per_unit)
    ring_w = np.concatenate([widths, widths[::-1]])
    ring_v = np.concatenate([cells, cells[::-1]])
    return assemble_ring(ring_w, ring_v, K)


# --- transcendental matching conditions -------------------------------------------

def _check_lambda(K, lam):
    if not 0.0 < lam < K:
        raise DomainError(f"need 0 < lambda < K, got lambda={lam}, K={K}")


def characteristic_left(K: float, lam: float, params: TwoWellParams) -> float:
    """alpha tan(alpha t0) - beta tanh(beta (1/2 - t0)); zero at long-well energies."""
    _check_lambda(K, lam)
    a = np.sqrt(lam)
    b = np.sqrt(K - lam)
    t0 = params.half_widths[0]
    if abs(np.cos(a * t0)) < 0.25 * POLE_WIDTH:
        raise PoleProximityError(f"tan pole at alpha*t0 = {a * t0}")
    return float(a * np.tan(a * t0) - b * np.tanh(b * (0.5 - t0)))


def characteristic_right(K: float, lam: float, params: TwoWellParams) -> float:
    """Split-well matching condition, in overflow-free form.

    The raw form (see `characteristic_right_raw`) carries exp(2 beta t) factors
    that overflow for K beyond ~1e5; dividing every exponential by
    exp(2 beta (t1 + t3)) leaves only nonpositive exponents (t2 < t1 + t3
    always holds here), which is exact algebra, not an approximation.
    """
    _check_lambda(K, lam)
    a = np.sqrt(lam)
    b = np.sqrt(K - lam)
    t0, t1, t2, t3 = params.half_widths
    if abs(np.sin(a * (t2 - t1))) < 0.25 * POLE_WIDTH:
        raise PoleProximityError(f"cot pole at alpha*L3 = {a * (t2 - t1)}")
    ea = np.exp(2 * b * (t2 - t1 - t3))
    eb = np.exp(-2 * b * t1)
    ec = np.exp(2 * b * (t2 - t3))
    ratio = ((a * a - b * b) * (ea + 1.0) + (a * a + b * b) * (eb + ec)) / (1.0 - ea)
    return float(ratio + 2 * a * b / np.tan(a * (t1 - t2)))


def characteristic_right_raw(K: float, lam: float, params: TwoWellParams) -> float:
    """Direct exponential form; kept as the dual evaluation for the stable one."""
    _check_lambda(K, lam)
    a = np.sqrt(lam)
    b = np.sqrt(K - lam)
    t0, t1, t2, t3 = params.half_widths
    denom = np.exp(2 * b * (t1 + t3)) - np.exp(2 * b * t2)
    return float((a * a - b * b) * (np.exp(2 * b * t2) + np.exp(2 * b * (t1 + t3))) / denom
                 + (a * a + b * b) * (np.exp(2 * b * t3) + np.exp(2 * b * (t1 + t2))) / denom
                 + 2 * a * b / np.tan(a * (t1 - t2)))


def _pole_lambdas(which, K, lam_max, params):
    t0, t1, t2, t3 = params.half_widths
    poles = []
    if which == 1:
        k = 0
        while True:
            lam = ((np.pi / 2 + k * np.pi) / t0) ** 2
            if lam >= lam_max:
                break
            poles.append(lam)
            k += 1
    else:
        L3 = t2 - t1
        k = 1
        while True:
            lam = (k * np.pi / L3) ** 2
            if lam >= lam_max:
                break
            poles.append(lam)
            k += 1
    return poles


def _pole_margin(lam_pole, t_char):
    # keep the scan POLE_WIDTH away from the pole in the trig argument alpha*t
    return 2.0 * np.sqrt(lam_pole) * POLE_WIDTH / t_char


def subsystem_ground_energy(K: float, params: TwoWellParams, which: int) -> float:
    """Smallest root of the matching condition in (0, K): pole-aware scan, then bisection."""
    f = characteristic_left if which == 1 else characteristic_right
    t0, t1, t2, t3 = params.half_widths
    t_char = t0 if which == 1 else t2 - t1
    lam_max = min(K * (1 - 1e-12), 4 * (np.pi / params.L1) ** 2)
    bounds = [0.0, *_pole_lambdas(which, K, lam_max, params), lam_max]
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        lo2 = lo + _pole_margin(lo, t_char) if lo > 0 else 1e-12 * lam_max
        hi2 = hi - max(_pole_margin(hi, t_char), 1e-12 * hi)
        grid = np.linspace(lo2, hi2, SCAN_INTERVALS + 1)
        vals = np.array([f(K, g, params) for g in grid])
        sign_change = np.flatnonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))
        if len(sign_change) == 0:
            continue
        a, b = grid[sign_change[0]], grid[sign_change[0] + 1]
        fa = vals[sign_change[0]]
        while b - a > 1e-12 * max(1.0, a):
            mid = 0.5 * (a + b)
            fm = f(K, mid, params)
            if (fa < 0) != (fm < 0):
                b = mid
            else:
                a, fa = mid, fm
        return 0.5 * (a + b)
    raise NoRootError(f"no root of condition {which} below lambda={lam_max} at K={K}")


def scaled_residual(f, K, lam, params, rel_step=1e-6) -> float:
    """|f| normalized by lambda * |df/dlambda|: dimensionless closeness to a root."""
    d = rel_step * lam
    deriv = (f(K, lam + d, params) - f(K, lam - d, params)) / (2 * d)
    return abs(f(K, lam, params)) / max(abs(deriv) * lam, 1e-300)


@dataclass(frozen=True)
class CriticalPoint:
    K_c: float
    lambda_c: float


def critical_point(params: TwoWellParams, K_bounds=(10.0, 1e8),
                   rtol: float = 1e-10) -> CriticalPoint:
    """Coupling at which the two wells' ground energies cross, by bisection in K."""
    def gap(K):
        try:
            return subsystem_ground_energy(K, params, 1) - subsystem_ground_energy(K, params, 2)
        except NoRootError as exc:
            # a well with no energy inside the scan window cannot produce a crossing
            raise NoBifurcationError(str(exc)) from exc

    a, b = K_bounds
    ga, gb = gap(a), gap(b)
    if not (ga < 0) != (gb < 0):
        raise NoBifurcationError(
            f"ground energies do not cross on [{a:g}, {b:g}] (gap {ga:.3g} -> {gb:.3g})")
    while b - a > rtol * a:
        mid = np.sqrt(a * b)
        gm = gap(mid)
        if (ga < 0) != (gm < 0):
            b = mid
        else:
            a, ga = mid, gm
    Kc = 0.5 * (a + b)
    lam = 0.5 * (subsystem_ground_energy(Kc, params, 1) + subsystem_ground_energy(Kc, params, 2))
    return CriticalPoint(float(Kc), float(lam))


# --- numerical sweep ----------------------------------------------------------------

def peak_height_ratio(mode: np.ndarray, coords: np.ndarray, params: TwoWellParams) -> float:
    """Left-peak height over the sum of both peak heights, peaks read off the wells."""
    (w1a, w1b), (w2a, w2b) = params.wells()
    u = np.abs(np.asarray(mode))
    in1 = (coords >= w1a) & (coords <= w1b)
    in2 = (coords >= w2a) & (coords <= w2b)
    m1 = u[in1].max()
    m2 = u[in2].max()
    if m1 == 0.0 and m2 == 0.0:
        raise DomainError("mode vanishes on both wells")
    return float(m1 / (m1 + m2))


def _ratio_at(params, K, nodes_per_unit):
    op = toy_operator(params, K, nodes_per_unit)
    pair = smallest_eigenpairs(op, k=1)[0]
    return peak_height_ratio(pair.mode, op.axes[0], params)


@dataclass(frozen=True)
class SweepResult:
    K_c: float
    K_grid: np.ndarray
    ratios: np.ndarray


def critical_coupling_sweep(params: TwoWellParams, K_grid=None,
                            nodes_per_unit: int = 3000,
                            refine_rtol: float = 1e-5) -> SweepResult:
    """Independent route to the crossover: solve the full ring spectrum per K and
    find where the peak-height ratio crosses 1/2, refining the bracketing pair
    and finishing with linear interpolation."""
    if K_grid is None:
        K_grid = np.geomspace(1e2, 1e6, 60)
    K_grid = np.asarray(K_grid, float)
    ratios = np.array([_ratio_at(params, K, nodes_per_unit) for K in K_grid])
    cross = np.flatnonzero((ratios[:-1] < 0.5) & (ratios[1:] >= 0.5))
    if len(cross) == 0:
        raise CrossingNotBracketedError("peak-height ratio does not cross 1/2 on the grid")
    i = cross[0]
    a, b = K_grid[i], K_grid[i + 1]
    fa, fb = ratios[i], ratios[i + 1]
    while b - a > refine_rtol * a:
        mid = np.sqrt(a * b)
        fm = _ratio_at(params, mid, nodes_per_unit)
        if fm < 0.5:
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    Kc = a + (0.5 - fa) * (b - a) / (fb - fa)
    return SweepResult(float(Kc), K_grid, ratios)


# --- shape ratios and scaling ---------------------------------------------------------

@dataclass(frozen=True)
class ShapeRatios:
    """(wells)/(domain), (long well)/(wells), (barrier)/(split well) fractions."""

    P1: float
    P2: float
    P3: float

    def __post_init__(self):
        for name in ("P1", "P2", "P3"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise DomainError(f"{name} must lie in (0,1), got {v}")


BASE_RATIOS = ShapeRatios(0.25, 0.4, 0.1)


def ratios_to_lengths(r: ShapeRatios) -> TwoWellParams:
    """Invert the three ratios; unique since the lengths tile the unit circle."""
    W = r.P1
    L1 = r.P2 * W
    rest = W - L1
    L4 = r.P3 * rest
    L3 = (rest - L4) / 2
    L2 = (1.0 - W) / 2
    return TwoWellParams(L1, L2, L3, L4)


def lengths_to_ratios(p: TwoWellParams) -> ShapeRatios:
    W = p.L1 + 2 * p.L3 + p.L4
    return ShapeRatios(W, p.L1 / W, p.L4 / (2 * p.L3 + p.L4))


AXIS_WINDOWS = {
    "P1": ("log10", (-0.7, -0.5)),
    "P2": ("linear", (0.38, 0.42)),
    "P3": ("log10", (-1.1, -0.9)),
}


@dataclass(frozen=True)
class ScalingFit:
    axis: str
    model: str                 # "power": log-log slope; "exponential": d ln Kc / dP
    slope: float
    intercept: float
    r2: float
    samples: tuple             # (P, K_c) pairs actually fitted
    skipped: tuple             # P values whose geometry violated a constraint


def scaling_study(axis: str, n_points: int = 30, seed: int = 0,
                  base: ShapeRatios = BASE_RATIOS) -> ScalingFit:
    """Fit how the crossover coupling scales along one shape-ratio axis.

    Points are drawn uniformly over the axis window (log10 scale for P1 and
    P3), the other two ratios held at the base values; each point runs the
    transcendental crossover solve.
    """
    if axis not in AXIS_WINDOWS:
        raise DomainError(f"axis must be one of {tuple(AXIS_WINDOWS)}")
    scale, (lo, hi) = AXIS_WINDOWS[axis]
    rng = stream(seed)
    draws = rng.uniform(lo, hi, n_points)
    ps = 10.0 ** draws if scale == "log10" else draws
    samples, skipped = [], []
    for P in np.sort(ps):
        vals = {"P1": base.P1, "P2": base.P2, "P3": base.P3, axis: float(P)}
        try:
            params = ratios_to_lengths(ShapeRatios(vals["P1"], vals["P2"], vals["P3"]))
            cp = critical_point(params)
        except (ConstraintError, NoBifurcationError):
            skipped.append(float(P))
            continue
        samples.append((float(P), cp.K_c))
    P_arr = np.array([s[0] for s in samples])
    K_arr = np.array([s[1] for s in samples])
    if axis == "P2":
        fit = linregress(P_arr, np.log(K_arr))
        model = "exponential"
    else:
        fit = linregress(np.log10(P_arr), np.log10(K_arr))
        model = "power"
    return ScalingFit(axis, model, float(fit.slope), float(fit.intercept),
                      float(fit.rvalue ** 2), tuple(samples), tuple(skipped))
