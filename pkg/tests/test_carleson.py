"""Atomic measures and box conditions: exact masses, hand-sized gauges."""

import numpy as np
import pytest

from harmspace import carleson as ca
from harmspace.geometry import Region, whitney_cubes
from harmspace.quadrature import QuadSpec


def test_atom_validation():
    with pytest.raises(ValueError):
        ca.AtomicMeasure([[0.0], [1.0]], [1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        ca.AtomicMeasure([[0.0]], [0.0], [1.0])
    with pytest.raises(ValueError):
        ca.AtomicMeasure([[0.0]], [1.0], [-1.0])


def test_mass_in_box_boundary_inclusive():
    # an atom sitting on the shared face of two closed boxes counts in both
    mu = ca.AtomicMeasure.point_mass([0.5], 1.0, 2.0)
    cubes = whitney_cubes(Region(4.0, 0.25, 4.0), 1)
    holding = [c for c in cubes if mu.mass_in_box(c.box()) > 0]
    assert {c.level for c in holding} == {-1, 0}
    assert all(mu.mass_in_box(c.box()) == 2.0 for c in holding)


def test_integrate_is_exact_sum():
    mu = ca.AtomicMeasure([[0.0], [1.0]], [1.0, 2.0], [0.5, 2.0])
    got = mu.integrate(lambda pts: pts[:, 0] + pts[:, 1])
    assert got == 0.5 * (0.0 + 1.0) + 2.0 * (1.0 + 2.0)


def test_json_round_trip():
    mu = ca.AtomicMeasure([[0.25, -1.0], [3.0, 0.5]], [0.75, 2.5],
                          [1.0, 0.125], label="pair")
    back = ca.AtomicMeasure.from_json(mu.to_json())
    assert back.label == "pair"
    assert np.array_equal(back.x, mu.x)
    assert np.array_equal(back.t, mu.t)
    assert np.array_equal(back.weight, mu.weight)


def test_discretized_weight_total_mass_closed_form():
    # the boxes tile the region, so the cube-center atoms carry exactly
    # int_region t^lam = (2 x_max)^n (t_max^(lam+1) - t_min^(lam+1))/(lam+1)
    region = Region(4.0, 0.25, 4.0)
    for n, lam in ((1, 2.0), (1, -0.5), (2, 1.0)):
        mu = ca.AtomicMeasure.discretized_weight(region, n, lam)
        exact = (8.0**n) * (4.0 ** (lam + 1) - 0.25 ** (lam + 1)) / (lam + 1)
        assert mu.total_mass() == pytest.approx(exact, rel=1e-12)


def test_condition_single_hand_computed():
    # one atom of weight 2 in exactly one box of volume 1 and gauge 1
    mu = ca.AtomicMeasure.point_mass([0.1], 1.5, 2.0)
    cubes = whitney_cubes(Region(4.0, 0.25, 4.0), 1)
    rep = ca.condition_single(mu, cubes, alpha=1.0)
    assert rep.constant == 2.0
    assert rep.argmax[0] == 0
    assert rep.params["exponent"] == 1.5


def test_condition_gauges_hand_computed():
    # atom in the level-1 box: side 2, volume 4, eta 3
    cubes = whitney_cubes(Region(4.0, 0.5, 8.0), 1)
    mu = ca.AtomicMeasure.point_mass([0.1], 3.0, 1.0)
    vec = ca.condition_vector(mu, cubes, 2, (0.5, 0.5))
    assert vec.constant == pytest.approx(4.0**-2.5, rel=1e-14)
    mix = ca.condition_mixed(mu, cubes, 1.0, 2.0, 1.0)
    assert mix.constant == pytest.approx(3.0**-4.0, rel=1e-14)
    tent = ca.condition_tent(mu, cubes, 2.0, 1.0)
    assert tent.constant == pytest.approx(3.0**-3.0, rel=1e-14)


def test_condition_validation():
    cubes = whitney_cubes(Region(2.0, 0.5, 2.0), 1)
    mu = ca.AtomicMeasure.point_mass([0.0], 1.0)
    with pytest.raises(ValueError):
        ca.condition_vector(mu, cubes, 2, (0.5,))
    with pytest.raises(ValueError):
        ca.condition_mixed(mu, cubes, 2.0, 1.0, 1.0)  # p > q
    with pytest.raises(ValueError):
        ca.condition_mixed(mu, cubes, 1.0, 2.0, 0.0)
    with pytest.raises(ValueError):
        ca.condition_tent(mu, cubes, 0.0, 1.0)
    with pytest.raises(ValueError):
        ca.condition_tent(mu, cubes, 2.0, 1.0, tau=3.0)


def test_report_shapes_and_csv():
    region = Region(4.0, 0.25, 4.0)
    cubes = whitney_cubes(region, 1)
    mu = ca.AtomicMeasure.point_mass([0.1], 1.5, 2.0)
    rep = ca.condition_single(mu, cubes, alpha=1.0)
    assert len(rep.rows) == len(cubes)
    lm = rep.level_maxima()
    assert set(lm) == {c.level for c in cubes}
    assert max(lm.values()) == rep.constant
    rows = list(rep.csv_rows())
    assert len(rows) == len(cubes)
    assert all(r[0] == "single" and len(r) == 6 for r in rows)
    s = rep.summary()
    assert s["condition"] == "single"
    assert s["boxes"] == len(cubes)
    assert s["constant"] == rep.constant
    assert s["argmax_level"] == 0


def test_qw_box_geometry():
    box = ca.qw_box([1.0, -2.0, 0.5])
    assert box.lo == (0.75, -2.25, 0.25)
    assert box.hi == (1.25, -1.75, 0.75)
    with pytest.raises(ValueError):
        ca.qw_box([0.0, -1.0])


def test_excursion_mass_bounds():
    w = np.array([0.0, 0.0, 1.0])
    inside = ca.AtomicMeasure.point_mass([0.05, 0.0], 1.1, 3.0)
    outside = ca.AtomicMeasure.point_mass([5.0, 0.0], 1.1, 3.0)
    full = inside.mass_in_box(ca.qw_box(w))
    assert full == 3.0
    masses = [ca.excursion_mass(inside, w, 1, d) for d in (0.0, 0.01, 0.1, 1.0)]
    assert all(0.0 <= m <= full for m in masses)
    assert all(a >= b for a, b in zip(masses, masses[1:]))
    assert ca.excursion_mass(outside, w, 1, 0.0) == 0.0


def test_excursion_fraction_monotone_in_delta():
    w = np.array([0.0, 0.0, 1.0])
    fr = [ca.excursion_fraction(w, 1, 2, d, grid=12) for d in (0.0, 0.05, 0.2)]
    assert all(0.0 <= v <= 1.0 for v in fr)
    assert fr[0] >= fr[1] >= fr[2]


def test_lemma6_cover_and_transfer():
    w = np.array([0.0, 0.25])
    frac, chosen, mult = ca.lemma6_cover(w, 1, 1, 0.05, grid=10, lattice=3)
    assert 0.0 <= frac <= 1.0
    assert mult >= (1 if chosen else 0)
    mu = ca.AtomicMeasure([[0.0], [0.1]], [0.25, 0.3], [1.0, 1.0])
    centers = [w, np.array([0.1, 0.5])]
    K, K_full, rows = ca.lemma6_transfer(mu, centers, 1, 0.05, theta=1.5)
    assert len(rows) == 2
    assert K <= K_full  # excursion set is a subset of the full box


def test_embedding_ratio_lhs_exact():
    from harmspace.fields import PoissonField

    region = Region(2.0, 0.25, 2.0)
    spec = QuadSpec(order=6, t_order=4)
    mu = ca.AtomicMeasure([[0.0], [0.5]], [0.5, 1.0], [1.0, 2.0])
    f = PoissonField(1, np.array([0.0, 1.0]))
    ratio, lhs, rhs = ca.embedding_ratio(mu, [f], 2.0, (0.5,), region, spec)
    expect = float(np.sum(mu.weight * np.abs(f.values(mu.points)) ** 2))
    assert lhs == pytest.approx(expect, rel=1e-14)
    assert ratio == pytest.approx(lhs / rhs, rel=1e-14)
