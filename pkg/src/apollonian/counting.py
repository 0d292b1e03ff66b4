"""Counting statistics: curvature count curves, region counts, power-law
exponent fits, distribution ratios, and box-counting dimension."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import Circle, Rect, circle_meets_region
from .quadruples import PackingOrbit


@dataclass
class CountCurve:
    """N(T) samples: the number of circles of unsigned curvature <= T."""

    ts: np.ndarray
    counts: np.ndarray
    packing_id: str = ""

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        self.counts = np.asarray(self.counts)
        if np.any(np.diff(self.ts) < 0):
            raise ValueError("grid must be sorted ascending")
        if np.any(np.diff(self.counts) < 0):
            raise ValueError("counts must be non-decreasing in T")


@dataclass
class ExponentFit:
    alpha_hat: float
    stderr: float
    window: tuple[float, float]
    c_hat: float
    n_points: int


def count_by_curvature(orbit: PackingOrbit, grid) -> CountCurve:
    """Exact counts with multiplicity at each grid point (unsigned curvatures)."""
    grid = np.asarray(grid, dtype=float)
    if grid.size and grid.max() > orbit.bound:
        raise ValueError(
            f"grid point {grid.max():g} exceeds the orbit bound {orbit.bound}"
        )
    u = np.sort(orbit.unsigned_curvatures)
    counts = np.searchsorted(u, grid, side="right")
    return CountCurve(grid, counts, packing_id=str(orbit.root))


def fit_exponent(curve: CountCurve, window: tuple[float, float]) -> ExponentFit:
    """Least squares slope of log N against log T over the window.

    The slope estimates the growth exponent and exp(intercept) the prefactor
    of the power law N(T) ~ c * T^alpha.
    """
    tmin, tmax = window
    mask = (curve.ts >= tmin) & (curve.ts <= tmax)
    if mask.sum() < 5:
        raise ValueError(f"window {window} holds {int(mask.sum())} samples; need >= 5")
    n = curve.counts[mask]
    if np.any(n <= 0):
        raise ValueError("window contains zero counts; shrink it")
    x = np.log(curve.ts[mask])
    y = np.log(n.astype(float))
    k = x.size
    xbar = x.mean()
    sxx = float(((x - xbar) ** 2).sum())
    slope = float(((x - xbar) * (y - y.mean())).sum() / sxx)
    intercept = float(y.mean() - slope * xbar)
    resid = y - (intercept + slope * x)
    dof = max(k - 2, 1)
    stderr = float(math.sqrt(float(resid @ resid) / dof / sxx))
    return ExponentFit(
        alpha_hat=slope,
        stderr=stderr,
        window=(float(tmin), float(tmax)),
        c_hat=math.exp(intercept),
        n_points=k,
    )


def count_in_region(circles: list[Circle], bound: float, rect: Rect) -> int:
    """Circles meeting the rectangle with unsigned curvature <= bound."""
    return sum(
        1
        for c in circles
        if c.unsigned_curvature <= bound and circle_meets_region(c, rect)
    )


def ratio_uniformity(circles: list[Circle], bound: float, e1: Rect, e2: Rect) -> float:
    """N(T, E1) / N(T, E2); the ratio stabilizes toward the ratio of the
    residual-set measures of the two regions as T grows."""
    denom = count_in_region(circles, bound, e2)
    if denom == 0:
        raise ZeroDivisionError(f"no circle of curvature <= {bound} meets {e2}")
    return count_in_region(circles, bound, e1) / denom


def curvilinear_triangle_contains(
    triple, c: Circle, side_point=None, tol: float = 1e-9
) -> bool:
    """Whether circle ``c`` lies inside the curvilinear triangle bounded by
    three mutually tangent circles.

    A point of the triangle lies outside each of the three disks and inside
    the disk of the triple's dual circle (the circle through its three
    tangency points, which separates the two tangent completions); a circle
    belongs to the triangle when its whole disk does.  When the tangency
    points are collinear the dual is a line and both half-planes hold a
    mirror triangle, so ``side_point`` must pick one.
    """
    from .geometry import _dual_through_tangencies

    dual = _dual_through_tangencies(list(triple), tol=1e-8)
    if c.is_line:
        return False
    cx, cy = c.center
    r = c.radius
    slack = tol * max(1.0, r)
    if dual.is_line:
        if side_point is None:
            raise ValueError(
                "collinear tangency points give two mirror triangles; "
                "pass side_point to choose one"
            )
        nx, ny = dual.normal
        off = dual.offset
        ref = nx * side_point[0] + ny * side_point[1] - off
        if ref == 0:
            raise ValueError("side_point lies on the dual line")
        sign = 1.0 if ref > 0 else -1.0
        if sign * (nx * cx + ny * cy - off) < r - slack:
            return False
    else:
        dx, dy = dual.center
        if math.hypot(cx - dx, cy - dy) + r > dual.radius + slack:
            return False
    for t in triple:
        if t.is_line:
            tn = t.normal
            # the line's normal points into its interior, away from the gap
            if tn[0] * cx + tn[1] * cy - t.offset > -(r - slack):
                return False
        else:
            tx, ty = t.center
            d = math.hypot(cx - tx, cy - ty)
            if t.curv < 0:
                # bounding orientation: the gap lies inside the disk
                if d + r > t.radius + slack:
                    return False
            elif d < t.radius + r - slack:
                return False
    return True


def count_in_curvilinear_triangle(
    circles: list[Circle], bound: float, triple, side_point=None
) -> int:
    """Circles of curvature <= bound inside the curvilinear triangle of three
    mutually tangent circles."""
    return sum(
        1
        for c in circles
        if c.unsigned_curvature <= bound
        and curvilinear_triangle_contains(triple, c, side_point=side_point)
    )


def box_counts(circles: list[Circle], eps_grid, viewport: Rect | None = None) -> np.ndarray:
    """Occupied-box counts B(eps) for the union of circle curves.

    Each circle curve is sampled at arc steps of eps/3 and its samples are
    binned to the eps-mesh; circles smaller than a box mark their bounding
    boxes.  Lines are sampled across the viewport when one is given and
    skipped otherwise.
    """
    eps_grid = np.asarray(eps_grid, dtype=float)
    if np.any(eps_grid <= 0):
        raise ValueError("box sizes must be positive")
    max_curv = max((c.unsigned_curvature for c in circles if not c.is_line), default=0.0)
    if max_curv > 0 and eps_grid.min() < 2.0 / max_curv:
        warnings.warn(
            f"box size {eps_grid.min():g} is below the resolution supported by "
            f"the enumeration bound {max_curv:g}",
            stacklevel=2,
        )
    out = np.empty(eps_grid.size, dtype=np.int64)
    centers = np.array(
        [c.center for c in circles if not c.is_line], dtype=float
    ).reshape(-1, 2)
    radii = np.array([c.radius for c in circles if not c.is_line], dtype=float)
    lines = [c for c in circles if c.is_line]
    for k, eps in enumerate(eps_grid):
        boxes: list[np.ndarray] = []
        small = radii <= eps / 2.0
        if small.any():
            lo = np.floor((centers[small] - radii[small, None]) / eps).astype(np.int64)
            hi = np.floor((centers[small] + radii[small, None]) / eps).astype(np.int64)
            # bounding boxes are at most 2x2 cells here
            for dx in (0, 1):
                for dy in (0, 1):
                    ix = np.minimum(lo[:, 0] + dx, hi[:, 0])
                    iy = np.minimum(lo[:, 1] + dy, hi[:, 1])
                    boxes.append(_pack(ix, iy))
        for c, r in zip(centers[~small], radii[~small]):
            n = max(8, int(math.ceil(2 * math.pi * r / (eps / 3.0))))
            th = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
            xs = c[0] + r * np.cos(th)
            ys = c[1] + r * np.sin(th)
            boxes.append(_pack(np.floor(xs / eps).astype(np.int64), np.floor(ys / eps).astype(np.int64)))
        if viewport is not None:
            for ln in lines:
                boxes.append(_line_boxes(ln, eps, viewport))
        out[k] = np.unique(np.concatenate(boxes)).size if boxes else 0
    return out


def _pack(ix: np.ndarray, iy: np.ndarray) -> np.ndarray:
    return (ix.astype(np.int64) << 32) ^ (iy.astype(np.int64) & 0xFFFFFFFF)


def _line_boxes(line: Circle, eps: float, viewport: Rect) -> np.ndarray:
    x0, x1, y0, y1 = viewport
    nx, ny = line.wx, line.wy
    c = line.offset
    # parametrize p = c*n + t*(-ny, nx)
    px, py = c * nx, c * ny
    span = math.hypot(x1 - x0, y1 - y0)
    ts = np.arange(-span, span, eps / 3.0)
    xs = px - ts * ny
    ys = py + ts * nx
    m = (xs >= x0) & (xs <= x1) & (ys >= y0) & (ys <= y1)
    return _pack(np.floor(xs[m] / eps).astype(np.int64), np.floor(ys[m] / eps).astype(np.int64))


def boxcount_dimension(
    circles: list[Circle], eps_grid, viewport: Rect | None = None
) -> float:
    """Least-squares slope of log B(eps) against log(1/eps): the box-counting
    dimension estimate of the union of circle curves."""
    eps_grid = np.asarray(eps_grid, dtype=float)
    b = box_counts(circles, eps_grid, viewport=viewport)
    if np.any(b <= 0):
        raise ValueError("a box size produced zero occupied boxes")
    x = np.log(1.0 / eps_grid)
    y = np.log(b.astype(float))
    xbar = x.mean()
    return float(((x - xbar) * (y - y.mean())).sum() / ((x - xbar) ** 2).sum())
