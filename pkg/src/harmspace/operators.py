"""Trace and extension operators, kernel integral operators, and the
distance machinery on the upper half-space.

The extension of a boundary-space function g to m slots is
    f(z_1, .., z_m) = integral Q_k((z_1 + .. + z_m)/m, w) g(w) s^k dw,
which depends on the slots only through their mean, so it is represented
by a single-variable kernel-integral field evaluated at the mean.  Slot
symmetry is exact by construction and harmonicity in each slot follows
from harmonicity of the represented field under the affine substitution.

Truncated integrals use either flat tensor nodes (n = 1) or the
axisymmetric (u, v, s) reduction (n >= 2, payload radial about a point
on the axis).  All operators take an explicit Region and QuadSpec.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from . import quadrature as quad
from .fields import Field
from .geometry import Region
from .norms import bergman_norm
from .quadrature import AxisymmetricNodes, QuadSpec


class KernelIntegralField(Field):
    """z |-> sum_i W_i Q_k(z, w_i) payload_i over stored nodes.

    Two node layouts: "flat" (points (N, n+1), weights (N,)) and
    "axisym" (AxisymmetricNodes plus payload of shape (n_uv, n_s)).
    Radial about the origin in the axisym layout.
    """

    harmonic = True  # harmonic in z: finite combination of Q_k(., w_i)

    def __init__(self, n, k_order, label="kernel-integral"):
        self.n = n
        self.k = k_order
        self.label = label
        self._flat = None
        self._ax = None

    @classmethod
    def from_flat(cls, n, k_order, points, weights, payload, label="kernel-integral"):
        f = cls(n, k_order, label)
        f._flat = (
            np.asarray(points, dtype=float),
            np.asarray(weights, dtype=float) * np.asarray(payload, dtype=float),
        )
        return f

    @classmethod
    def from_axisym(cls, n, k_order, nodes: AxisymmetricNodes, payload, label="kernel-integral"):
        f = cls(n, k_order, label)
        f.radial_center = np.zeros(n)
        f._ax = (nodes, nodes.w_uv[:, None] * payload * nodes.w_s[None, :])
        return f

    def node_count(self) -> int:
        if self._flat is not None:
            return self._flat[0].shape[0]
        nodes, _ = self._ax
        return nodes.size

    def values(self, points):
        pts = np.asarray(points, dtype=float)
        flat = pts.reshape(-1, pts.shape[-1])
        if self._ax is not None:
            d = np.linalg.norm(flat[:, :-1], axis=1)
            out = self._eval_axial(d, flat[:, -1])
        else:
            out = self._eval_flat(flat)
        return out.reshape(pts.shape[:-1])

    def radial_values(self, r, t):
        if self._ax is None:
            raise NotImplementedError("radial path needs axisym nodes")
        r = np.asarray(r, dtype=float)
        t = np.asarray(t, dtype=float)
        R, T = np.broadcast_arrays(r, t)
        out = self._eval_axial(R.ravel(), T.ravel())
        return out.reshape(R.shape)

    def _eval_axial(self, d, t):
        nodes, wpay = self._ax
        out = np.empty(d.size)
        for i in range(d.size):
            if t[i] <= 0:
                raise ValueError("evaluation points must satisfy t > 0")
            D = nodes.dist_sq_to(d[i])[:, None]
            tau = t[i] + nodes.s[None, :]
            out[i] = np.sum(kernels.bergman_from_sq(self.k, self.n, D, tau) * wpay)
        return out

    def _eval_flat(self, pts):
        nodes, wpay = self._flat
        out = np.empty(pts.shape[0])
        chunk = max(1, int(4e6 // max(1, nodes.shape[0])))
        for a in range(0, pts.shape[0], chunk):
            blk = pts[a : a + chunk]
            diff = blk[:, None, :-1] - nodes[None, :, :-1]
            D = np.sum(diff * diff, axis=2)
            tau = blk[:, None, -1] + nodes[None, :, -1]
            out[a : a + chunk] = kernels.bergman_from_sq(self.k, self.n, D, tau) @ wpay
        return out


def _integration_nodes(g, region: Region, spec: QuadSpec, offsets=(0.0,)):
    """(kind, ...) node bundle for integrating kernels against g.

    `offsets` lists axis positions where the spatial grid refines; keep
    them near the radii at which the resulting field will be evaluated.
    """
    if g.n >= 2:
        if not g.is_radial or np.any(np.asarray(g.radial_center) != 0):
            raise ValueError("n >= 2 integration needs g radial about the origin")
        nodes = AxisymmetricNodes(region, g.n, spec, offsets)
        gv = g.radial_values(nodes.center_radius()[:, None], nodes.s[None, :])
        return "axisym", nodes, gv
    pts, w = quad.flat_box_nodes(region, 1, spec)
    return "flat", (pts, w), g.values(pts)


def extension_field(g, k_order: int, region: Region, spec: QuadSpec,
                    offsets=(0.0,)) -> KernelIntegralField:
    """The mean-slot representative E(zeta) = int Q_k(zeta, w) g(w) s^k dw."""
    kind, nodes, gv = _integration_nodes(g, region, spec, offsets)
    label = f"extend{k_order}({g.label})"
    if kind == "axisym":
        payload = gv * nodes.s[None, :] ** k_order
        return KernelIntegralField.from_axisym(g.n, k_order, nodes, payload, label)
    pts, w = nodes
    return KernelIntegralField.from_flat(
        g.n, k_order, pts, w, gv * pts[:, -1] ** k_order, label
    )


class MeanExtension:
    """m-slot extension of g; all slot structure factors through the mean."""

    def __init__(self, g, m: int, k_order: int, region: Region, spec: QuadSpec,
                 offsets=(0.0,)):
        if m < 1:
            raise ValueError("need at least one slot")
        if k_order < 0:
            raise ValueError("kernel order must be >= 0")
        self.m = m
        self.g = g
        self.field = extension_field(g, k_order, region, spec, offsets)

    def values_multi(self, z_list):
        """Evaluate at m slot arrays, each (..., n+1)."""
        if len(z_list) != self.m:
            raise ValueError("wrong number of slots")
        mean = sum(np.asarray(z, dtype=float) for z in z_list) / self.m
        if np.any(mean[..., -1] <= 0):
            raise ValueError("slot means must stay in the half-space")
        return self.field.values(mean)

    def trace(self) -> Field:
        """Tr f (z) = f(z, .., z): the mean collapses to z itself."""
        return self.field


class ProductMultiField:
    """f(z_1, .., z_m) = prod_j f_j(z_j) for single-variable factors."""

    def __init__(self, factors):
        if not factors:
            raise ValueError("need at least one factor")
        if len({f.n for f in factors}) != 1:
            raise ValueError("factors live on different half-spaces")
        self.factors = list(factors)
        self.m = len(factors)

    def values_multi(self, z_list):
        if len(z_list) != self.m:
            raise ValueError("wrong number of slots")
        out = 1.0
        for f, z in zip(self.factors, z_list):
            out = out * f.values(z)
        return out

    def trace(self) -> Field:
        from .fields import ProductField

        out = self.factors[0]
        for f in self.factors[1:]:
            out = ProductField(out, f)
        return out


def v_set_member(f, eps: float, lam: float, points) -> np.ndarray:
    """Membership in V_{eps,lam}(f) = { t^lam |f| >= eps }."""
    pts = np.asarray(points, dtype=float)
    return pts[..., -1] ** lam * np.abs(f.values(pts)) >= eps


def distance_split(f, eps: float, lam: float, m_order: int, region: Region,
                   spec: QuadSpec, offsets=(0.0,)):
    """Split f = f1 + f2 through the reproducing integral at order m_order.

    f1 integrates Q_m f s^m over the complement of V_{eps,lam} inside the
    region, f2 over V_{eps,lam}; both are harmonic.  Requires
    m_order > lam - 1 so the f1 bound has an integrable majorant;
    theorem-level drivers additionally enforce m_order > alpha/p.
    `offsets` refines the spatial grid near the radii where the split
    fields will be evaluated.
    """
    if m_order <= lam - 1:
        raise ValueError("need m_order > lam - 1")
    kind, nodes, gv = _integration_nodes(f, region, spec, offsets)
    if kind == "axisym":
        mask = (
            nodes.s[None, :] ** lam
            * np.abs(f.radial_values(nodes.center_radius()[:, None], nodes.s[None, :]))
            >= eps
        )
        pay = gv * nodes.s[None, :] ** m_order
        f1 = KernelIntegralField.from_axisym(
            f.n, m_order, nodes, pay * (~mask), f"split1({f.label})"
        )
        f2 = KernelIntegralField.from_axisym(
            f.n, m_order, nodes, pay * mask, f"split2({f.label})"
        )
        return f1, f2
    pts, w = nodes
    mask = pts[:, -1] ** lam * np.abs(gv) >= eps
    pay = gv * pts[:, -1] ** m_order
    f1 = KernelIntegralField.from_flat(
        f.n, m_order, pts, w, pay * (~mask), f"split1({f.label})"
    )
    f2 = KernelIntegralField.from_flat(
        f.n, m_order, pts, w, pay * mask, f"split2({f.label})"
    )
    return f1, f2


def divergence_proxy(
    f, eps_values, lam: float, p: float, alpha: float, m_order: int,
    region: Region, spec: QuadSpec, scales=(1.0, 2.0, 4.0),
):
    """Truncated inner-outer integrals of the distance criterion.

    For each eps and region scale R computes
        I(eps, R) = int_{region_R} ( int_{V cap region_R}
                     |Q_m(z, w)| s^(m - lam) dw )^p t^alpha dz
    with f radial about the origin.  Returns (I table, growth table):
    growth[eps][i] = I(eps, scale_{i+1}) / I(eps, scale_i), the region-
    doubling divergence proxy.  Regions scale outward only (x_max and
    t_max); superlevel sets sit at s bounded away from 0, so the band
    below t_min is a fixed convergent layer that would only blur the
    growth signal.
    """
    eps_values = np.asarray(eps_values, dtype=float)
    table = np.zeros((eps_values.size, len(scales)))
    for si, R in enumerate(scales):
        reg = Region(region.x_max * R, region.t_min, region.t_max * R)
        nodes = AxisymmetricNodes(reg, f.n, spec)
        svals = nodes.s
        fv = np.abs(f.radial_values(nodes.center_radius()[:, None], svals[None, :]))
        masks = (svals[None, :] ** lam * fv)[None, :, :] >= eps_values[:, None, None]
        wgt = nodes.w_uv[:, None] * nodes.w_s[None, :] * svals[None, :] ** (m_order - lam)
        # outer grid: radial x layered t over the same region
        t, wt = quad.t_quadrature(reg, spec)
        r, wr = quad.radial_quadrature(f.scale, reg.x_max, spec)
        surf = quad.sphere_area(f.n) * r ** (f.n - 1)
        inner = np.zeros((eps_values.size, r.size, t.size))
        for i, ri in enumerate(r):
            D = nodes.dist_sq_to(ri)[:, None, None]
            tau = t[None, None, :] + svals[None, :, None]
            kern = np.abs(kernels.bergman_from_sq(m_order, f.n, D, tau)) * wgt[:, :, None]
            for ei in range(eps_values.size):
                inner[ei, i, :] = np.sum(kern * masks[ei][:, :, None], axis=(0, 1))
        for ei in range(eps_values.size):
            outer = (wr * surf) @ (inner[ei] ** p) @ (wt * t**alpha)
            table[ei, si] = outer
    growth = np.full((eps_values.size, len(scales) - 1), np.nan)
    for ei in range(eps_values.size):
        for si in range(len(scales) - 1):
            a, b = table[ei, si], table[ei, si + 1]
            growth[ei, si] = np.inf if a == 0 and b > 0 else (1.0 if a == 0 else b / a)
    return table, growth


def d2_estimate(
    f, eps_values, p: float, alpha: float, m_order: int,
    region: Region, spec: QuadSpec, threshold: float = 1.2,
    scales=(1.0, 2.0, 4.0),
):
    """Smallest grid eps whose truncated integral stops growing.

    lam is pinned to (alpha + n + 1)/p.  An eps is classified divergent
    when the last region-doubling growth factor is >= threshold.
    Returns (d2, per-eps classification, I table, growth table).
    """
    lam = (alpha + f.n + 1) / p
    if m_order <= max(lam - 1, alpha / p):
        raise ValueError("need m_order > max(lam - 1, alpha/p)")
    eps_values = np.sort(np.asarray(eps_values, dtype=float))
    table, growth = divergence_proxy(
        f, eps_values, lam, p, alpha, m_order, region, spec, scales=scales
    )
    divergent = growth[:, -1] >= threshold
    finite = np.nonzero(~divergent)[0]
    if finite.size == 0:
        return float("inf"), divergent, table, growth
    return float(eps_values[finite[0]]), divergent, table, growth


def sab_apply(f, a_vec, b_vec, z_slots, region: Region, spec: QuadSpec):
    """Product-kernel operator on m slots, n = 1 only.

    (S f)(z_1..z_m) = prod t_j^(a_j) *
        int f(w) s^(-n-1+sum b) prod_j |z_j - wbar|^(-(a_j+b_j)) dw
    z_slots: list of m arrays of points (P_j, 2).  Returns the tensor of
    values with shape (P_1, .., P_m).
    """
    if f.n != 1:
        raise ValueError("product-kernel operator implemented for n = 1")
    m = len(a_vec)
    if len(b_vec) != m or len(z_slots) != m:
        raise ValueError("slot count mismatch")
    pts, w = quad.flat_box_nodes(region, 1, spec)
    fv = f.values(pts)
    base = w * fv * pts[:, -1] ** (-2 + float(np.sum(b_vec)))
    kern = []
    for j, z in enumerate(z_slots):
        z = np.asarray(z, dtype=float)
        dsq = (z[:, None, 0] - pts[None, :, 0]) ** 2 + (z[:, None, 1] + pts[None, :, 1]) ** 2
        kern.append(dsq ** (-(a_vec[j] + b_vec[j]) / 2))
    if m == 1:
        out = kern[0] @ base
        return np.asarray(z_slots[0])[:, 1] ** a_vec[0] * out
    if m == 2:
        out = np.einsum("iw,jw,w->ij", kern[0], kern[1], base)
        t1 = np.asarray(z_slots[0])[:, 1] ** a_vec[0]
        t2 = np.asarray(z_slots[1])[:, 1] ** a_vec[1]
        return t1[:, None] * out * t2[None, :]
    raise ValueError("m <= 2 supported")


def trace_product_norm_p(
    multi, p: float, s_vec, region: Region, spec: QuadSpec, norm_method="auto"
):
    """Both sides of the trace inequality for an m-slot field.

    LHS = int |Tr f|^p dm_lam over the region, lam = (m-1)(n+1) + sum s.
    RHS = the product of slot integrals: exact factorization for product
    fields; mean-variable reduction for mean extensions (n <= 2).
    Returns (lhs, rhs).
    """
    m = multi.m
    s_vec = list(s_vec)
    tr = multi.trace()
    n = tr.n
    lam = (m - 1) * (n + 1) + float(np.sum(s_vec))
    lhs = bergman_norm(tr, p, lam, region, spec, method=norm_method) ** p
    if isinstance(multi, ProductMultiField):
        rhs = 1.0
        for f, s in zip(multi.factors, s_vec):
            rhs *= bergman_norm(f, p, s, region, spec, method=norm_method) ** p
        return lhs, rhs
    if isinstance(multi, MeanExtension):
        if m == 1:
            return lhs, bergman_norm(multi.field, p, s_vec[0], region, spec, method=norm_method) ** p
        if m != 2 or n > 2:
            raise ValueError("mean-extension slot integral implemented for m=2, n<=2")
        return lhs, _mean_slot_integral_m2(multi.field, p, s_vec, region, spec)
    raise TypeError("unsupported multi-variable field")


def _mean_slot_integral_m2(E, p: float, s_vec, region: Region, spec: QuadSpec):
    """int int |E((z1+z2)/2)|^p dm_{s1}(z1) dm_{s2}(z2), n <= 2.

    The x-integrals collapse: with u = (x1+x2)/2 the slot box [-X, X]^n
    pairs contribute the overlap volume prod_i (2X - 2|u_i|).
    """
    n = E.n
    X = region.x_max
    t, wt = quad.t_quadrature(region, spec)
    taus = 0.5 * (t[:, None] + t[None, :])  # mean heights over t-pairs
    ax_nodes = []
    for _ in range(n):
        u, wu = quad.box_axis_quadrature(region, spec)
        ax_nodes.append((u, wu))
    grids = np.meshgrid(*[a[0] for a in ax_nodes], indexing="ij")
    wg = np.meshgrid(*[a[1] for a in ax_nodes], indexing="ij")
    U = np.column_stack([g.ravel() for g in grids])
    wU = np.ones(U.shape[0])
    for g in wg:
        wU *= g.ravel()
    overlap = np.prod(2 * X - 2 * np.abs(U), axis=1)
    taus_flat = taus.ravel()
    if E._ax is not None:
        d = np.linalg.norm(U, axis=1)
        vals = np.abs(E.radial_values(d[:, None], taus_flat[None, :])) ** p
    else:
        # flat layout (n = 1): evaluate on the (u, tau) product directly
        P = np.column_stack(
            [np.repeat(U[:, 0], taus_flat.size), np.tile(taus_flat, U.shape[0])]
        )
        vals = np.abs(E.values(P)).reshape(U.shape[0], taus_flat.size) ** p
    tw1 = wt * t ** s_vec[0]
    tw2 = wt * t ** s_vec[1]
    tpair = np.outer(tw1, tw2).ravel()
    return float((wU * overlap) @ vals @ tpair)


def sup_product_ratio(multi: MeanExtension, s_vec, g_sup: float, pairs) -> float:
    """sup over slot samples of |f(z_1..z_m)| prod t_j^(s_j) / ||g||_sup."""
    best = 0.0
    for z_list in pairs:
        v = abs(float(multi.values_multi([np.asarray(z) for z in z_list])))
        for z, s in zip(z_list, s_vec):
            v *= float(np.asarray(z)[-1]) ** s
        best = max(best, v)
    return best / g_sup
