import json
import math
from fractions import Fraction

import numpy as np
import pytest

from radolab.renorm import (
    RenormModel,
    build_atoms,
    gauge,
    gauge_lower_bound,
    nearest_extreme_distances,
    sandwich_check,
)
from radolab.rng import CounterStream
from radolab.vectors import basis, fsv, zero_vector

F = Fraction
TOL = F(1, 10**4)
FAST = dict(restarts=6, iterations=1500)


def test_atom_family_closed_forms():
    atoms = build_atoms(3)
    assert len(atoms) == 6
    assert atoms[0] == fsv({0: 1, 1: F(1, 2)})
    assert atoms[1] == fsv({0: 1, 1: F(-1, 3)})
    assert atoms[-1] == fsv({0: 1, 3: F(-1, 7)})
    assert all(a.get(0) == 1 for a in atoms)
    with pytest.raises(ValueError):
        build_atoms(0)


def test_gauge_of_zero_is_exact():
    assert gauge(zero_vector(), RenormModel(2), TOL).value == 0.0


def test_gauge_of_atoms_is_one():
    model = RenormModel(3)
    for atom in model.atoms():
        res = gauge(atom, model, TOL, **FAST)
        assert res.value == pytest.approx(1.0, abs=float(TOL))


def test_slab_vector_gauge_is_one_with_dual_certificate():
    model = RenormModel(3)
    e1 = basis(1)
    res = gauge(e1, model, TOL, **FAST)
    assert res.value == pytest.approx(1.0, abs=float(TOL))
    # independent dual oracle pins the same value from below
    lb = gauge_lower_bound(e1, model)
    assert lb >= 1.0 - 1e-9
    assert lb <= res.value + 1e-9


def test_dual_oracle_never_exceeds_the_upper_bound():
    model = RenormModel(2)
    stream = CounterStream(3)
    for _ in range(10):
        x = fsv({k: F(stream.randint(-8, 8), 4) for k in range(3)})
        if x.is_zero():
            continue
        ub = gauge(x, model, TOL, **FAST).value
        lb = gauge_lower_bound(x, model)
        assert lb <= ub + 1e-9
        assert lb >= (2.0 / 3.0) * float(np.linalg.norm(model.to_array(x))) - 1e-9


def test_gauge_certificate_reproduces_the_value():
    model = RenormModel(3)
    x = fsv({0: F(1, 2), 2: F(3, 4)})
    res = gauge(x, model, TOL, **FAST)
    alpha = np.array(res.alpha)
    residual = model.to_array(x) - alpha @ model.atom_matrix()
    rebuilt = max(np.linalg.norm(residual), 10 * abs(residual[0])) + np.abs(alpha).sum()
    assert rebuilt == pytest.approx(res.value, abs=1e-12)
    payload = json.loads(res.certificate_json(model))
    assert set(payload["alpha"]) == set(model.atom_labels())


def test_gauge_symmetry_and_homogeneity():
    model = RenormModel(2)
    stream = CounterStream(5)
    for _ in range(6):
        x = fsv({k: F(stream.randint(-6, 6), 3) for k in range(3)})
        if x.is_zero():
            continue
        v = gauge(x, model, TOL, **FAST).value
        assert gauge(-x, model, TOL, **FAST).value == pytest.approx(v, abs=2 * float(TOL) + 1e-3)
        assert gauge(x.scale(2), model, TOL, **FAST).value == pytest.approx(
            2 * v, abs=4 * float(TOL) + 2e-3
        )


def test_gauge_subadditivity_on_samples():
    model = RenormModel(2)
    stream = CounterStream(8)
    for _ in range(6):
        x = fsv({k: F(stream.randint(-4, 4), 3) for k in range(3)})
        y = fsv({k: F(stream.randint(-4, 4), 3) for k in range(3)})
        vx = gauge(x, model, TOL, **FAST).value
        vy = gauge(y, model, TOL, **FAST).value
        vxy = gauge(x + y, model, TOL, **FAST).value
        assert vxy <= vx + vy + 2 * float(TOL) + 2e-3


def test_sandwich_on_random_points():
    model = RenormModel(3)
    stream = CounterStream(13)
    for _ in range(10):
        x = fsv({k: F(stream.randint(-9, 9), 2) for k in range(4)})
        rep = sandwich_check(x, model, TOL)
        assert rep.passed, rep.witness
        assert rep.gauge_value <= 2 * rep.l2_norm + float(TOL)
        assert rep.gauge_value >= (2.0 / 3.0) * rep.l2_norm - float(TOL)


def test_sandwich_degenerate_zero():
    rep = sandwich_check(zero_vector(), RenormModel(2), TOL)
    assert rep.passed and rep.gauge_value == 0.0


def test_coordinate_zero_split_bounds_e0():
    model = RenormModel(2)
    res = gauge(fsv({0: 1}), model, TOL, **FAST)
    assert res.value == pytest.approx(1.0, abs=float(TOL))  # e0 is an exact atom mix


def test_nearest_extreme_distances_small_truncation():
    model = RenormModel(3)
    table = nearest_extreme_distances(model, TOL, net_size=32, seed=0, **FAST)
    rows = {r.label: r for r in table}
    assert len(table) == 12
    # same-k partner distances follow the closed form 1/(2k) + 1/(2k+1)
    for k in (1, 2, 3):
        expected = float(F(1, 2 * k) + F(1, 2 * k + 1))
        assert rows[f"plus{k}"].partner_gauge_distance == pytest.approx(expected, abs=float(TOL))
        assert rows[f"minus{k}"].partner_gauge_distance == pytest.approx(expected, abs=float(TOL))
    # the nearest extreme point to plus2 is a top-index neighbour, closer
    # than its own partner: a pure coordinate vector, gauge = l2 norm
    assert rows["plus2"].gauge_distance == pytest.approx(
        math.sqrt(1 / 16 + 1 / 49), abs=float(TOL)
    )
    assert not rows["plus2"].isolated_at_half
    assert not rows["minus1"].isolated_at_half  # sqrt(1/9 + 1/49) < 1/2
    # only the first plus pair is isolated at radius 1/2
    assert rows["plus1"].isolated_at_half
    assert rows["neg-plus1"].isolated_at_half
    assert rows["plus1"].gauge_distance == pytest.approx(
        math.sqrt(1 / 4 + 1 / 49), abs=float(TOL)
    )
    isolated = sorted(r.label for r in table if r.isolated_at_half)
    assert isolated == ["neg-plus1", "plus1"]


def test_distance_table_requires_enough_coordinates():
    with pytest.raises(ValueError):
        nearest_extreme_distances(RenormModel(1), TOL)


def test_support_outside_truncation_rejected():
    model = RenormModel(2)
    with pytest.raises(ValueError):
        gauge(basis(5), model, TOL, **FAST)


def test_polar_projection_properties():
    # the primal-dual step depends on exact projection onto the polar of the
    # slab hull: conv(unit ball u the segment {c e0 : |c| <= 10})
    from radolab.renorm import _project_polar, _slab_support
    from radolab.rng import bits64_array

    d = 4
    words = bits64_array(31, 0, 0, 200 * d).reshape(200, d)
    qs = ((words >> np.uint64(11)).astype(np.float64) / float(1 << 53) * 2.0 - 1.0) * 12.0
    projected = _project_polar(qs.copy())
    # lands inside the polar
    assert (_slab_support(projected) <= 1.0 + 1e-9).all()
    # interior points are untouched
    inside = _slab_support(qs) <= 1.0
    assert np.allclose(projected[inside], qs[inside])
    # variational inequality against sampled members of the polar
    words = bits64_array(32, 0, 0, 64 * d).reshape(64, d)
    zs = ((words >> np.uint64(11)).astype(np.float64) / float(1 << 53) * 2.0 - 1.0) * 10.0
    zs /= np.maximum(_slab_support(zs), 1.0)[:, None]  # scale into the polar
    for q, p in zip(qs[~inside], projected[~inside]):
        gaps = (zs - p) @ (q - p)
        assert (gaps <= 1e-7).all(), f"projection not nearest for {q}"


def test_norm_approx_delegates_to_the_gauge_solver():
    from radolab.norms import hull_gauge, norm_approx

    atom = fsv({0: 1, 1: F(1, 2)})
    value = norm_approx(atom, hull_gauge(10, F(1, 10**6)), F(1, 10**6))
    assert value == pytest.approx(1.0, abs=1e-6)


def test_certificate_carries_the_slab_term():
    model = RenormModel(2)
    res = gauge(basis(1), model, TOL, **FAST)
    payload = json.loads(res.certificate_json(model))
    assert payload["slab_gauge"] == pytest.approx(
        max(res.residual_l2, 10 * abs(res.residual_coord0)), abs=1e-12
    )
