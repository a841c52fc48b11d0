"""Carleson-type conditions for measures on the upper half-space.

Measures are finite atomic: integrals against them are exact sums, so
every embedding check has a closed left-hand side and the only numerics
live in the norms on the right.  Four cube conditions are provided, all
of the shape sup_k mass(box_k) / gauge(box_k) over the Whitney boxes:

* vector condition:   gauge = |box|^(m + sum(s_j)/(n+1))
* single-weight form: gauge = |box|^(1 + alpha/(n+1))
* mixed-norm form:    gauge = eta^(n q/p + alpha q)   (0 < p <= q, alpha > 0)
* tent-norm form:     gauge = eta^(n + alpha p)

The excursion-set machinery (Q_w boxes, the sets where |P_l| stays above
a threshold, and the finite-cover mass transfer) lives here too.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .geometry import Box, Region, whitney_cubes, weighted_measure
from .quadrature import QuadSpec
from .norms import bergman_norm


class AtomicMeasure:
    """Finite positive atomic measure sum_i w_i delta_{(x_i, t_i)}."""

    def __init__(self, x, t, weight, label="measure"):
        self.x = np.atleast_2d(np.asarray(x, dtype=float))
        self.t = np.asarray(t, dtype=float).ravel()
        self.weight = np.asarray(weight, dtype=float).ravel()
        self.label = label
        if self.x.shape[0] != self.t.size or self.t.size != self.weight.size:
            raise ValueError("atom arrays disagree in length")
        if np.any(self.t <= 0):
            raise ValueError("atoms must lie in the open half-space")
        if np.any(self.weight < 0):
            raise ValueError("weights must be nonnegative")

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.x, self.t])

    def total_mass(self) -> float:
        return float(self.weight.sum())

    def mass_in_box(self, box: Box) -> float:
        lo, hi = np.asarray(box.lo), np.asarray(box.hi)
        pts = self.points
        inside = np.all((pts >= lo) & (pts <= hi), axis=1)
        return float(self.weight[inside].sum())

    def integrate(self, fn) -> float:
        """Exact integral of fn over the measure; fn maps (m, n+1) points."""
        return float(self.weight @ np.asarray(fn(self.points), dtype=float))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "atoms": [
                {"x": [float(v) for v in xi], "t": float(ti), "w": float(wi)}
                for xi, ti, wi in zip(self.x, self.t, self.weight)
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "AtomicMeasure":
        atoms = obj["atoms"]
        return cls(
            [a["x"] for a in atoms],
            [a["t"] for a in atoms],
            [a["w"] for a in atoms],
            obj.get("label", "measure"),
        )

    @classmethod
    def point_mass(cls, x, t, w=1.0, label="point") -> "AtomicMeasure":
        return cls([x], [t], [w], label)

    @classmethod
    def discretized_weight(cls, region: Region, n: int, lam: float, label=None):
        """Cube-center atoms carrying m_lam(box): the discrete stand-in
        for the weight t^lam dz."""
        cubes = whitney_cubes(region, n)
        xs, ts, ws = [], [], []
        for c in cubes:
            ctr = c.center
            xs.append(ctr[:-1])
            ts.append(ctr[-1])
            ws.append(weighted_measure(c.box(), lam))
        return cls(xs, ts, ws, label or f"m_lambda-{lam:g}")


class CubeConditionReport:
    """Per-box ratios mass/gauge and their sup for one condition."""

    def __init__(self, condition, params, rows, n):
        self.condition = condition
        self.params = params
        self.rows = rows  # (level, index, mass, gauge, ratio)
        self.n = n

    @property
    def constant(self) -> float:
        return max((r[4] for r in self.rows), default=0.0)

    @property
    def argmax(self):
        return max(self.rows, key=lambda r: r[4], default=None)

    def level_maxima(self) -> dict:
        out: dict = {}
        for lev, _, _, _, ratio in self.rows:
            out[lev] = max(out.get(lev, 0.0), ratio)
        return out

    def csv_rows(self):
        for lev, idx, mass, gauge, ratio in self.rows:
            yield [self.condition, lev, "/".join(map(str, idx)), mass, gauge, ratio]

    def summary(self) -> dict:
        arg = self.argmax
        return {
            "condition": self.condition,
            "params": self.params,
            "constant": self.constant,
            "argmax_level": None if arg is None else arg[0],
            "boxes": len(self.rows),
        }


def _cube_report(condition, params, mu: AtomicMeasure, cubes, gauge_fn):
    rows = []
    for c in cubes:
        mass = mu.mass_in_box(c.box())
        gauge = gauge_fn(c)
        rows.append((c.level, c.index, mass, gauge, mass / gauge))
    return CubeConditionReport(condition, params, rows, mu.n)


def condition_vector(mu: AtomicMeasure, cubes, m: int, s_vec) -> CubeConditionReport:
    """mass / |box|^(m + sum(s)/(n+1)); the m-fold product condition."""
    s_vec = list(s_vec)
    if len(s_vec) != m:
        raise ValueError("s_vec must have length m")
    n = mu.n
    e = m + sum(s_vec) / (n + 1)
    return _cube_report(
        "vector", {"m": m, "s": s_vec, "exponent": e}, mu, cubes,
        lambda c: c.box().volume**e,
    )


def condition_single(mu: AtomicMeasure, cubes, alpha: float) -> CubeConditionReport:
    """mass / |box|^(1 + alpha/(n+1)); the single-weight corollary."""
    n = mu.n
    e = 1 + alpha / (n + 1)
    return _cube_report(
        "single", {"alpha": alpha, "exponent": e}, mu, cubes,
        lambda c: c.box().volume**e,
    )


def condition_mixed(mu, cubes, p: float, q: float, alpha: float) -> CubeConditionReport:
    """mass / eta^(n q/p + alpha q) for the mixed-norm embedding."""
    if not (0 < p <= q):
        raise ValueError("need 0 < p <= q")
    if alpha <= 0:
        raise ValueError("need alpha > 0")
    e = mu.n * q / p + alpha * q
    return _cube_report(
        "mixed", {"p": p, "q": q, "alpha": alpha, "exponent": e}, mu, cubes,
        lambda c: c.eta**e,
    )


def condition_tent(mu, cubes, p: float, alpha: float, tau=None) -> CubeConditionReport:
    """mass / eta^(n + alpha p) for the tent-space embedding."""
    if p <= 0 or alpha <= 0:
        raise ValueError("need p > 0 and alpha > 0")
    if tau is not None and not (0 < tau <= p):
        raise ValueError("need 0 < tau <= p")
    e = mu.n + alpha * p
    return _cube_report(
        "tent", {"p": p, "alpha": alpha, "tau": tau, "exponent": e}, mu, cubes,
        lambda c: c.eta**e,
    )


def qw_box(w) -> Box:
    """Closed cube centered at w = (y, s) with side s (all n+1 axes)."""
    w = np.asarray(w, dtype=float)
    s = w[-1]
    if s <= 0:
        raise ValueError("center must lie in the open half-space")
    return Box(tuple(w - s / 2), tuple(w + s / 2))


def excursion_mass(mu: AtomicMeasure, w, l: int, delta: float) -> float:
    """Measure of {z in Q_w : |P_l(u)| > delta} (atoms only: exact)."""
    box = qw_box(w)
    lo, hi = np.asarray(box.lo), np.asarray(box.hi)
    pts = mu.points
    inside = np.all((pts >= lo) & (pts <= hi), axis=1)
    if not np.any(inside):
        return 0.0
    keep = kernels.profile_excursion(l, mu.n, delta, pts[inside], np.asarray(w, float))
    return float(mu.weight[inside][keep].sum())


def excursion_fraction(w, l: int, n: int, delta: float, grid: int = 24) -> float:
    """Lebesgue fraction |T_w| / |Q_w| via a tensor grid (n <= 3)."""
    box = qw_box(w)
    axes = [np.linspace(a, b, grid) for a, b in zip(box.lo, box.hi)]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])
    keep = kernels.profile_excursion(l, n, delta, pts, np.asarray(w, float))
    return float(np.mean(keep))


def lemma6_cover(w, l: int, n: int, delta: float, grid: int = 16, lattice: int = 5):
    """Greedy finite cover of Q_w by excursion sets of nearby boxes.

    Candidate centers w' = (y', s') run over s' in {s/2, s, 2s} and a
    lattice of y' around y with spacing s'/2.  Returns (cover fraction,
    list of chosen centers, multiplicity) where multiplicity is the max
    number of chosen excursion sets containing one sample point.
    """
    w = np.asarray(w, dtype=float)
    s = w[-1]
    box = qw_box(w)
    axes = [np.linspace(a, b, grid) for a, b in zip(box.lo, box.hi)]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])

    candidates = []
    for sp in (0.5 * s, s, 2.0 * s):
        offsets = np.linspace(-s, s, lattice)
        mesh = np.meshgrid(*([offsets] * n), indexing="ij")
        centers = np.column_stack([g.ravel() for g in mesh]) + w[:-1]
        for c in centers:
            for tp in (sp, 0.75 * sp, 1.25 * sp):
                candidates.append(np.append(c, tp))
    masks = []
    for cand in candidates:
        bb = qw_box(cand)
        lo, hi = np.asarray(bb.lo), np.asarray(bb.hi)
        inside = np.all((pts > lo) & (pts < hi), axis=1)  # open: interior sets
        if not np.any(inside):
            masks.append(None)
            continue
        m = np.zeros(len(pts), dtype=bool)
        m[inside] = kernels.profile_excursion(l, n, delta, pts[inside], cand)
        masks.append(m)

    uncovered = np.ones(len(pts), dtype=bool)
    chosen = []
    chosen_masks = []
    while np.any(uncovered):
        gains = [0 if m is None else int(np.sum(m & uncovered)) for m in masks]
        best = int(np.argmax(gains))
        if gains[best] == 0:
            break
        chosen.append(candidates[best])
        chosen_masks.append(masks[best])
        uncovered &= ~masks[best]
    fraction = 1.0 - float(np.mean(uncovered))
    if chosen_masks:
        multiplicity = int(np.max(np.sum(np.array(chosen_masks), axis=0)))
    else:
        multiplicity = 0
    return fraction, chosen, multiplicity


def lemma6_transfer(mu: AtomicMeasure, centers, l: int, delta: float, theta: float):
    """Excursion-mass bound transferred to full boxes on a center panel.

    Returns (K, K_full, rows): K = sup excursion_mass/s^theta over the
    panel, K_full the same with the full box mass.  The covering argument
    says K_full <= N K for the covering multiplicity N; callers assert
    against the N their cover reports.
    """
    rows = []
    for w in centers:
        w = np.asarray(w, dtype=float)
        s = w[-1]
        te = excursion_mass(mu, w, l, delta) / s**theta
        qe = mu.mass_in_box(qw_box(w)) / s**theta
        rows.append((w, te, qe))
    K = max((r[1] for r in rows), default=0.0)
    K_full = max((r[2] for r in rows), default=0.0)
    return K, K_full, rows


def embedding_ratio(
    mu: AtomicMeasure,
    factors,
    p: float,
    s_vec,
    region: Region,
    spec: QuadSpec,
    norm_method: str = "auto",
):
    """Exact L^p(mu) mass of a product field over its Bergman norms.

    factors: the fields f_1 .. f_m; the trace integrand is the pointwise
    product prod_j |f_j|^p at the atoms.  Returns (ratio, lhs, rhs).
    """
    pts = mu.points
    vals = np.ones(len(pts))
    for f in factors:
        vals *= np.abs(f.values(pts)) ** p
    lhs = float(mu.weight @ vals)
    rhs = 1.0
    for f, s in zip(factors, s_vec):
        nv = bergman_norm(f, p, s, region, spec, method=norm_method)
        if nv == 0:
            raise ValueError("factor with zero norm")
        rhs *= nv**p
    return lhs / rhs, lhs, rhs
