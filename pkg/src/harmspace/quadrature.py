"""Node and weight construction for half-space integrals.

Three geometries cover everything the toolkit integrates:

* per-box Gauss-Legendre tensors over Whitney boxes (the weight t^alpha is
  smooth on a box, so low order suffices);
* layered grids: composite Gauss-Legendre in t on the dyadic layers
  crossed with composite radial or per-axis spatial panels that refine
  geometrically toward the field centers;
* axisymmetric (u, v, s) grids for integrals of kernels against fields
  that are radial about a point on the axis, collapsing R^n x (0,oo) to
  three dimensions regardless of n.

Weights always include the jacobians of the chosen coordinates; surface
factors (omega_{n-1} and friends) are included where the docstring says
so and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import Box, Region


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n (omega_{n-1})."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True)
class QuadSpec:
    """Budget knobs shared by all node builders."""

    order: int = 8  # Gauss-Legendre order per spatial panel
    t_order: int = 6  # order per t panel
    t_splits: int = 1  # extra equal-log splits of each dyadic t layer
    min_panel: float = 0.125  # finest panel width at a field center
    cube_order: int = 4  # per-dim order on Whitney boxes

    def refined(self, factor: int = 2) -> "QuadSpec":
        return replace(
            self,
            order=self.order * factor,
            t_order=self.t_order * factor,
            t_splits=self.t_splits * factor,
            min_panel=self.min_panel / factor,
            cube_order=self.cube_order * factor,
        )

    def coarsened(self) -> "QuadSpec":
        return replace(
            self,
            order=max(3, self.order // 2),
            t_order=max(3, self.t_order // 2),
            min_panel=self.min_panel * 2,
            cube_order=max(2, self.cube_order),
        )


def panel_nodes(a: float, b: float, order: int):
    """Gauss-Legendre nodes/weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(order)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def composite_nodes(breaks, order: int):
    """Concatenated Gauss-Legendre panels over consecutive breakpoints."""
    xs, ws = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        x, w = panel_nodes(a, b, order)
        xs.append(x)
        ws.append(w)
    if not xs:
        return np.array([]), np.array([])
    return np.concatenate(xs), np.concatenate(ws)


def outward_breaks(width0: float, limit: float) -> np.ndarray:
    """0 = b_0 < b_1 = width0 < 2*width0 < 4*width0 ... first >= limit."""
    if limit <= 0:
        return np.array([0.0])
    pts = [0.0]
    b = min(width0, limit)
    while True:
        pts.append(b)
        if b >= limit:
            break
        b = min(2 * b, limit)
    return np.array(pts)


def line_breaks(center: float, width0: float, lo: float, hi: float) -> np.ndarray:
    """Breakpoints on [lo, hi] refining geometrically toward `center`."""
    right = center + outward_breaks(width0, max(hi - center, 0.0))
    left = center - outward_breaks(width0, max(center - lo, 0.0))
    pts = np.concatenate([left, right])
    pts = pts[(pts >= lo - 1e-12) & (pts <= hi + 1e-12)]
    pts = np.unique(np.clip(pts, lo, hi))
    if pts.size < 2 or pts[0] > lo or pts[-1] < hi:
        pts = np.unique(np.concatenate([[lo, hi], pts]))
    return pts


def merge_breaks(groups, lo: float, hi: float) -> np.ndarray:
    pts = np.concatenate([np.asarray(g, dtype=float) for g in groups])
    pts = np.clip(pts, lo, hi)
    pts = np.unique(np.concatenate([[lo, hi], pts]))
    # drop near-duplicates that would create zero-width panels
    keep = [pts[0]]
    span = hi - lo
    for p in pts[1:]:
        if p - keep[-1] > 1e-12 * span:
            keep.append(p)
    keep[-1] = hi
    return np.array(keep)


def t_breaks(region: Region, splits: int = 1) -> np.ndarray:
    """Dyadic-layer breakpoints of [t_min, t_max], each layer split in
    `splits` log-equal parts.  Aligned with the Whitney layers."""
    if region.degenerate:
        raise ValueError("degenerate t range")
    j_lo = math.floor(math.log2(region.t_min))
    j_hi = math.ceil(math.log2(region.t_max))
    dyadic = 2.0 ** np.arange(j_lo, j_hi + 1)
    pts = [region.t_min]
    for a, b in zip(dyadic[:-1], dyadic[1:]):
        a2, b2 = max(a, region.t_min), min(b, region.t_max)
        if b2 <= a2:
            continue
        inner = np.exp(np.linspace(math.log(a2), math.log(b2), splits + 1))
        pts.extend(inner[1:])
    return np.unique(np.array(pts))


def t_quadrature(region: Region, spec: QuadSpec):
    return composite_nodes(t_breaks(region, spec.t_splits), spec.t_order)


def radial_quadrature(scale: float, r_max: float, spec: QuadSpec):
    """Nodes/weights on [0, r_max], refined toward 0 at `scale`.

    Bare line measure: callers multiply by omega_{n-1} r^(n-1) themselves.
    """
    width0 = max(min(spec.min_panel * scale, r_max), 1e-12)
    return composite_nodes(outward_breaks(width0, r_max), spec.order)


def box_axis_quadrature(region: Region, spec: QuadSpec, centers=(0.0,)):
    """Composite nodes on [-x_max, x_max] refined toward each center."""
    lo, hi = -region.x_max, region.x_max
    groups = [line_breaks(c, spec.min_panel, lo, hi) for c in centers]
    return composite_nodes(merge_breaks(groups, lo, hi), spec.order)


def flat_box_nodes(region: Region, n: int, spec: QuadSpec, centers=None):
    """Flattened (points, weights) for the box region, n <= 2 workhorse.

    centers: sequence of spatial points the per-axis grids refine toward.
    """
    if centers is None:
        centers = [np.zeros(n)]
    axes = []
    for i in range(n):
        x, w = box_axis_quadrature(region, spec, centers=[c[i] for c in centers])
        axes.append((x, w))
    tn, tw = t_quadrature(region, spec)
    grids = np.meshgrid(*[a[0] for a in axes], tn, indexing="ij")
    wgrids = np.meshgrid(*[a[1] for a in axes], tw, indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])
    w = np.ones(pts.shape[0])
    for g in wgrids:
        w *= g.ravel()
    return pts, w


def cube_tensor_nodes(box: Box, order: int):
    """Per-dimension Gauss-Legendre tensor on a box; exact jacobian."""
    axes = [panel_nodes(a, b, order) for a, b in zip(box.lo, box.hi)]
    grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    wgrids = np.meshgrid(*[a[1] for a in axes], indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])
    w = np.ones(pts.shape[0])
    for g in wgrids:
        w *= g.ravel()
    return pts, w


class AxisymmetricNodes:
    """Quadrature for integrals over {|y| <= x_max, t_min <= s <= t_max}
    of integrands depending on (|y|, |y - x|, s) with x on the node axis.

    Coordinates: u along the axis, v the distance from it.  The (u, v)
    weight carries the full angular jacobian omega_{n-2} v^(n-2), so
        integral = sum_{uv} sum_s w_uv w_s F(u, v, s).
    Requires n >= 2.
    """

    def __init__(self, region: Region, n: int, spec: QuadSpec, offsets=(0.0,)):
        if n < 2:
            raise ValueError("axisymmetric reduction needs n >= 2")
        self.n = n
        self.region = region
        R = region.x_max
        u_breaks = merge_breaks(
            [line_breaks(c, spec.min_panel, -R, R) for c in offsets], -R, R
        )
        u_all, v_all, w_all = [], [], []
        ang = sphere_area(n - 1) if n > 2 else 2.0  # n=2: two half-lines
        for a, b in zip(u_breaks[:-1], u_breaks[1:]):
            un, uw = panel_nodes(a, b, spec.order)
            for ui, wi in zip(un, uw):
                vmax = math.sqrt(max(R * R - ui * ui, 0.0))
                if vmax <= 0:
                    continue
                vb = outward_breaks(spec.min_panel, vmax)
                vn, vw = composite_nodes(vb, spec.order)
                u_all.append(np.full_like(vn, ui))
                v_all.append(vn)
                w_all.append(wi * vw * ang * vn ** (n - 2))
        self.u = np.concatenate(u_all)
        self.v = np.concatenate(v_all)
        self.w_uv = np.concatenate(w_all)
        self.s, self.w_s = t_quadrature(region, spec)

    @property
    def size(self) -> int:
        return self.u.size * self.s.size

    def center_radius(self) -> np.ndarray:
        """|y| at the (u, v) nodes."""
        return np.hypot(self.u, self.v)

    def dist_sq_to(self, d: float) -> np.ndarray:
        """|y - x|^2 for the axis point at distance d from the origin."""
        return (self.u - d) ** 2 + self.v**2
