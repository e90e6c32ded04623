"""Shortest distance between orbits and correlation-dimension estimation.

The nearest-pair problem min_{i,j<n} d(a_i, b_j) has a quadratic reference
(`shortest_distance`) and a sparse-grid fast path (`shortest_distance_fast`)
that buckets one orbit's points into cells and probes the 3^N neighborhood of
each point of the other. A probe is exact whenever the best distance found
does not exceed the cell width, because any unprobed pair is separated by at
least one full cell in some coordinate; the cell width is adapted (grown when
nothing is found, shrunk when the candidate set explodes, set to the found
distance when it fails to certify) until that exactness condition holds, so
both routes return bitwise-identical values.

Correlation sums count pairs closer than r with the same grid, and the
correlation dimension is the least-squares slope of log-sum versus log-radius
over a geometric radius window.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import TORUS, Orbit

_PAIR_CAP = 40_000_000


@dataclass(frozen=True)
class NearestPair:
    distance: float
    witness: tuple[int, int]


@dataclass(frozen=True)
class DistanceProfile:
    """Shortest distances m_n along an increasing schedule of n values."""

    schedule: tuple[int, ...]
    m_values: np.ndarray
    witnesses: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DimensionFit:
    """Log-log slope of the correlation sum with fit diagnostics."""

    slope: float
    intercept: float
    stderr: float
    radii: np.ndarray
    sums: np.ndarray
    n_excluded: int


def _as_points(obj) -> np.ndarray:
    pts = obj.points if isinstance(obj, Orbit) else np.asarray(obj, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("points must form a nonempty (m, dim) array")
    return pts


def _rows_dist(pa: np.ndarray, pb: np.ndarray, space: str) -> np.ndarray:
    # aligned rows; both routes funnel through this so floats agree bitwise
    if space == TORUS:
        delta = np.abs(pa - pb)
        return np.minimum(delta, 1.0 - delta).max(axis=1)
    return np.sqrt(((pa - pb) ** 2).sum(axis=1))


def _check_pair_inputs(orbit_a: Orbit, orbit_b: Orbit, n: int) -> tuple[np.ndarray, np.ndarray, str]:
    if orbit_a.space != orbit_b.space or orbit_a.dim != orbit_b.dim:
        raise ValueError("orbits must share space and dimension")
    if n < 1 or n > len(orbit_a) or n > len(orbit_b):
        raise ValueError(f"n={n} exceeds orbit length")
    return orbit_a.points[:n], orbit_b.points[:n], orbit_a.space


def shortest_distance(orbit_a: Orbit, orbit_b: Orbit, n: int) -> NearestPair:
    """Exact minimum over the n x n point pairs; quadratic reference route."""
    pa, pb, space = _check_pair_inputs(orbit_a, orbit_b, n)
    best = math.inf
    bi = bj = 0
    for i in range(pa.shape[0]):
        d = _rows_dist(pa[i][None, :], pb, space)
        j = int(np.argmin(d))
        if d[j] < best:
            best = float(d[j])
            bi, bj = i, j
    return NearestPair(best, (bi, bj))


class _Grid:
    """Points bucketed into an axis-aligned cell grid (sorted flat index)."""

    def __init__(self, pts: np.ndarray, w: float, wrap: bool,
                 mins: np.ndarray, spans: np.ndarray):
        self.wrap = wrap
        self.k_axes = np.maximum((spans / w).astype(np.int64), 1)
        self.widths = spans / self.k_axes
        self.mins = mins
        cells = ((pts - mins) / self.widths).astype(np.int64)
        np.clip(cells, 0, self.k_axes - 1, out=cells)
        self.cells = cells
        self.flat = self._flatten(cells)
        self.order = np.argsort(self.flat, kind="stable")
        self.sorted_flat = self.flat[self.order]

    def _flatten(self, cells: np.ndarray) -> np.ndarray:
        flat = cells[:, 0].copy()
        for d in range(1, cells.shape[1]):
            flat *= self.k_axes[d]
            flat += cells[:, d]
        return flat

    @property
    def min_width(self) -> float:
        return float(self.widths.min())

    @property
    def exhaustive(self) -> bool:
        return bool((self.k_axes <= 3).all())

    def neighbor_ranges(self, query_cells: np.ndarray, offset) -> tuple[np.ndarray, np.ndarray]:
        """searchsorted [lo, hi) ranges of bucketed points for shifted cells."""
        nc = query_cells + np.asarray(offset, dtype=np.int64)
        if self.wrap:
            nc = nc % self.k_axes
            valid = np.ones(nc.shape[0], dtype=bool)
        else:
            valid = ((nc >= 0) & (nc < self.k_axes)).all(axis=1)
            nc = np.clip(nc, 0, self.k_axes - 1)
        flat = self._flatten(nc)
        lo = np.searchsorted(self.sorted_flat, flat, side="left")
        hi = np.searchsorted(self.sorted_flat, flat, side="right")
        lo[~valid] = 0
        hi[~valid] = 0
        return lo, hi


def _expand_ranges(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(query index, bucket position) pairs for variable [lo, hi) ranges."""
    counts = hi - lo
    total = int(counts.sum())
    if total == 0:
        return (np.empty(0, dtype=np.int64),) * 2
    q = np.repeat(np.arange(lo.size, dtype=np.int64), counts)
    cum = np.concatenate([[0], np.cumsum(counts)[:-1]])
    pos = np.arange(total, dtype=np.int64) - np.repeat(cum, counts) + np.repeat(lo, counts)
    return q, pos


def _space_frame(space: str, *pointsets) -> tuple[np.ndarray, np.ndarray, bool]:
    dim = pointsets[0].shape[1]
    if space == TORUS:
        return np.zeros(dim), np.ones(dim), True
    allpts = np.vstack(pointsets)
    mins = allpts.min(axis=0)
    spans = np.maximum(allpts.max(axis=0) - mins, 1e-300)
    return mins, spans, False


def _common_point(pa: np.ndarray, pb: np.ndarray) -> tuple[int, int] | None:
    """Lexicographically smallest (i, j) with pa[i] == pb[j] exactly, if any."""
    width = pa.dtype.itemsize * pa.shape[1]
    buf_b = np.ascontiguousarray(pb).tobytes()
    first_j: dict[bytes, int] = {}
    for j in range(pb.shape[0] - 1, -1, -1):
        first_j[buf_b[j * width:(j + 1) * width]] = j
    buf_a = np.ascontiguousarray(pa).tobytes()
    for i in range(pa.shape[0]):
        j = first_j.get(buf_a[i * width:(i + 1) * width])
        if j is not None:
            return (i, j)
    return None


def shortest_distance_fast(orbit_a: Orbit, orbit_b: Orbit, n: int,
                           w_init: float | None = None) -> NearestPair:
    """Grid-accelerated nearest pair; exact (bitwise equal to the reference)."""
    pa, pb, space = _check_pair_inputs(orbit_a, orbit_b, n)
    dim = pa.shape[1]
    # coincident points collapse whole cells into quadratic candidate sets;
    # resolve them exactly up front (distance zero implies bytewise equality)
    hit = _common_point(pa, pb)
    if hit is not None:
        return NearestPair(0.0, hit)
    mins, spans, wrap = _space_frame(space, pa, pb)
    w = w_init if w_init and w_init > 0 else 4.0 * float(spans.max()) * n ** (-2.0 / dim)
    offsets = list(itertools.product((-1, 0, 1), repeat=dim))
    for _ in range(256):
        w = min(w, float(spans.max()))
        grid = _Grid(pb, w, wrap, mins, spans)
        if grid.exhaustive:
            return shortest_distance(orbit_a, orbit_b, n)
        qcells = ((pa - mins) / grid.widths).astype(np.int64)
        np.clip(qcells, 0, grid.k_axes - 1, out=qcells)
        lo_all, hi_all = [], []
        for off in offsets:
            lo, hi = grid.neighbor_ranges(qcells, off)
            lo_all.append(lo)
            hi_all.append(hi)
        total = int(sum((hi - lo).sum() for lo, hi in zip(lo_all, hi_all)))
        if total > _PAIR_CAP:
            w *= 0.5
            continue
        if total == 0:
            w *= 4.0
            continue
        best = math.inf
        bi = bj = -1
        for lo, hi in zip(lo_all, hi_all):
            qi, pos = _expand_ranges(lo, hi)
            if qi.size == 0:
                continue
            jb = grid.order[pos]
            d = _rows_dist(pa[qi], pb[jb], space)
            k = np.lexsort((jb, qi, d))[0]
            if (d[k], qi[k], jb[k]) < (best, bi, bj):
                best, bi, bj = float(d[k]), int(qi[k]), int(jb[k])
        if best <= grid.min_width:
            return NearestPair(best, (bi, bj))
        w = best  # next round certifies: cell width >= found distance >= true min
    raise ArithmeticError("grid search failed to certify a nearest pair")


def distance_profile(orbit_a: Orbit, orbit_b: Orbit, schedule) -> DistanceProfile:
    """m_n at each scheduled n; cost about one grid pass at max(schedule).

    Each scheduled prefix is re-bucketed, primed with the previous minimum as
    the cell width; for geometric schedules the total work is proportional to
    the final pass.
    """
    ns = [int(n) for n in schedule]
    if any(b <= a for a, b in zip(ns, ns[1:])) or (ns and ns[0] < 1):
        raise ValueError("schedule must be strictly increasing and positive")
    m_values = np.empty(len(ns))
    witnesses = []
    prev: float | None = None
    for t, n in enumerate(ns):
        hint = prev * 2.0 if prev and prev > 0 else None
        res = shortest_distance_fast(orbit_a, orbit_b, n, w_init=hint)
        if prev is not None and res.distance > prev:
            raise AssertionError("shortest distance increased along the schedule")
        m_values[t] = res.distance
        witnesses.append(res.witness)
        prev = res.distance
    m_values.flags.writeable = False
    return DistanceProfile(tuple(ns), m_values, tuple(witnesses))


def _pair_counts_below(pts: np.ndarray, radii: np.ndarray, space: str) -> np.ndarray:
    """#{i<j : d(p_i, p_j) < r} for each r, via one grid at max(radii)."""
    m = pts.shape[0]
    dim = pts.shape[1]
    r_max = float(radii.max())
    mins, spans, wrap = _space_frame(space, pts)
    counts = np.zeros(radii.size, dtype=np.int64)

    def tally(d: np.ndarray) -> None:
        for t, r in enumerate(radii):
            counts[t] += int((d < r).sum())

    k_probe = np.maximum((spans / r_max).astype(np.int64), 1)
    if (k_probe <= 3).any() or m <= 512:
        # grid would double-count wrapped neighbors; count directly in blocks
        block = 2048
        for i0 in range(0, m, block):
            a = pts[i0:i0 + block]
            for j0 in range(i0, m, block):
                b = pts[j0:j0 + block]
                if space == TORUS:
                    delta = np.abs(a[:, None, :] - b[None, :, :])
                    d = np.minimum(delta, 1.0 - delta).max(axis=2)
                else:
                    d = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2))
                if i0 == j0:
                    d = d[np.triu_indices(d.shape[0], k=1)]
                tally(np.ravel(d))
        return counts

    grid = _Grid(pts, r_max, wrap, mins, spans)
    order = grid.order
    sorted_cells = grid.cells[order]
    sorted_pts = pts[order]
    boundaries = np.flatnonzero(np.diff(grid.sorted_flat)) + 1
    starts = np.concatenate([[0], boundaries])
    ends = np.concatenate([boundaries, [order.size]])
    # canonical half of the neighbor offsets so each unordered cell pair
    # appears once; K > 3 in every axis keeps wrapped offsets distinct
    half = [off for off in itertools.product((-1, 0, 1), repeat=dim)
            if off > tuple([0] * dim)]
    for s, e in zip(starts, ends):
        group = sorted_pts[s:e]
        if e - s > 1:
            iu, ju = np.triu_indices(e - s, k=1)
            tally(_rows_dist(group[iu], group[ju], space))
        cell = sorted_cells[s][None, :]
        for off in half:
            lo, hi = grid.neighbor_ranges(cell, off)
            lo_i, hi_i = int(lo[0]), int(hi[0])
            if hi_i > lo_i:
                other = sorted_pts[lo_i:hi_i]
                ia = np.repeat(np.arange(e - s), hi_i - lo_i)
                jb = np.tile(np.arange(hi_i - lo_i), e - s)
                tally(_rows_dist(group[ia], other[jb], space))
    return counts


def correlation_sum(points, r: float, space: str = TORUS) -> float:
    """Pair-proximity U-statistic: 2 #{i<j : d < r} / (M (M-1))."""
    pts = _as_points(points)
    m = pts.shape[0]
    if m < 2:
        raise ValueError("need at least two points")
    if r <= 0:
        raise ValueError("radius must be positive")
    count = int(_pair_counts_below(pts, np.asarray([r], dtype=float), space)[0])
    return 2.0 * count / (m * (m - 1))


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    slope = float(((x - xm) * (y - ym)).sum() / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (slope * x + intercept)
    dof = x.size - 2
    stderr = float(np.sqrt((resid ** 2).sum() / dof / sxx)) if dof > 0 else 0.0
    return slope, intercept, stderr


def default_radius_window(n_points: int, dim: int) -> tuple[float, float]:
    """One decade below 4 * n^(-1/dim): above the noise floor, below saturation."""
    r_hi = 4.0 * n_points ** (-1.0 / dim)
    return r_hi / 10.0, r_hi


def correlation_dimension(points, r_lo: float, r_hi: float, n_radii: int = 8,
                          space: str = TORUS) -> DimensionFit:
    """Least-squares slope of log correlation sum against log radius."""
    pts = _as_points(points)
    m = pts.shape[0]
    if m < 2:
        raise ValueError("need at least two points")
    if not 0 < r_lo < r_hi:
        raise ValueError("need 0 < r_lo < r_hi")
    if n_radii < 3:
        raise ValueError("need at least three radii")
    radii = np.geomspace(r_lo, r_hi, n_radii)
    counts = _pair_counts_below(pts, radii, space)
    sums = 2.0 * counts / (m * (m - 1.0))
    usable = counts > 0
    n_excluded = int((~usable).sum())
    if n_excluded:
        warnings.warn(f"{n_excluded} radii had empty correlation sums and were "
                      "excluded", RuntimeWarning, stacklevel=2)
    if usable.sum() < 3:
        raise ArithmeticError("fewer than three usable radii; enlarge the window")
    slope, intercept, stderr = _ols(np.log(radii[usable]), np.log(sums[usable]))
    return DimensionFit(slope=slope, intercept=intercept, stderr=stderr,
                        radii=radii, sums=sums, n_excluded=n_excluded)
