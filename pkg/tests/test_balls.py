import math
from fractions import Fraction

import pytest

from radolab import norms
from radolab.balls import (
    BallSpec,
    FourBallProbeResult,
    SplitBoundaryError,
    StepFn,
    ball_membership,
    four_ball_centers,
    l1_four_ball_probe,
    l1_two_ball_witness,
    small_intersection_balls,
    two_unit_decomposition,
)
from radolab.norms import L2, LINF, lp, lp_power_distance
from radolab.rng import CounterStream
from radolab.vectors import from_coords, fsv, zero_vector

from conftest import vec

F = Fraction


# -- membership -----------------------------------------------------------------


def test_center_is_always_inside():
    b = BallSpec(vec(1, 2), F(1, 10), open=True)
    assert ball_membership(b, vec(1, 2), L2)


def test_boundary_open_vs_closed():
    open_ball = BallSpec(zero_vector(), F(1), open=True)
    closed_ball = BallSpec(zero_vector(), F(1), open=False)
    x = vec(1, 0)
    assert not ball_membership(open_ball, x, L2)
    assert ball_membership(closed_ball, x, L2)
    assert ball_membership(open_ball, zero_vector(), LINF)
    assert ball_membership(BallSpec(vec("3/4", 0), F(1)), zero_vector(), LINF)


def test_radius_must_be_positive():
    with pytest.raises(ValueError):
        BallSpec(zero_vector(), F(0))


# -- two-ball shrinking ------------------------------------------------------------


def test_small_intersection_contains_the_scaled_point():
    ones = from_coords([1, 1, 1])
    delta = F(1, 4)
    b1, b2 = small_intersection_balls(ones, delta)
    center = ones.scale(F(1) / (1 + delta))
    assert ball_membership(b1, center, LINF)
    assert ball_membership(b2, center, LINF)
    with pytest.raises(ValueError):
        small_intersection_balls(ones, F(0))


def test_sampled_members_obey_the_strongly_extreme_bound():
    # for the all-ones sup-norm corner, delta certifies epsilon = delta:
    # |1 +- y_i| < 1 + delta forces |y_i| < delta coordinate by coordinate
    ones = from_coords([1, 1, 1])
    delta = F(1, 4)
    b1, b2 = small_intersection_balls(ones, delta)
    center = ones.scale(F(1) / (1 + delta))
    stream = CounterStream(17)
    members = 0
    for _ in range(200):
        z = center + fsv({k: F(stream.randint(-10, 10), 40) for k in (1, 2, 3)})
        if ball_membership(b1, z, LINF) and ball_membership(b2, z, LINF):
            members += 1
            y = z.scale(1 + delta) - ones
            assert norms.distance_lt(y, zero_vector(), delta, LINF)
            assert norms.distance_lt(z, center, delta, LINF)
    assert members > 0


# -- L1 step functions ----------------------------------------------------------


def test_stepfn_norm_is_the_cell_average():
    f = StepFn(4, (F(1), F(-1), F(1, 2), F(0)))
    assert f.l1_norm() == F(5, 8)
    with pytest.raises(ValueError):
        StepFn(3, (F(1),) * 3)  # odd grid


def test_two_ball_witness_frozen_example():
    # f constant 1/2 on a 4-cell grid: lambda = 1/4; mu = 1/2
    f = StepFn.constant(4, F(1, 2))
    g1, g2 = l1_two_ball_witness(f, F(1, 2))
    assert g1.values == (F(1), F(1), F(0), F(0))
    assert g2.values == (F(0), F(0), F(1), F(1))
    assert (g1 - g2).l1_norm() == F(1)  # 2 * mu


def test_two_ball_witness_identities_hold_for_many_parameters():
    for lam_num in range(1, 8):
        for mu_num in range(lam_num + 1, 16):
            lam, mu = F(lam_num, 16), F(mu_num, 16)
            f = StepFn.constant(8, 2 * lam)
            g1, g2 = l1_two_ball_witness(f, mu)
            assert g1.l1_norm() == mu == g2.l1_norm()
            assert (g1 - f).l1_norm() == mu == (g2 - f).l1_norm()
            assert (g1 - g2).l1_norm() == 2 * mu
            # both witnesses live in the closed balls B(0,1) and B(f,1)
            assert g1.l1_norm() <= 1 and (g1 - f).l1_norm() <= 1


def test_two_ball_witness_nonconstant_f_with_even_split():
    f = StepFn(4, (F(1, 4), F(3, 4), F(3, 4), F(1, 4)))  # prefix mass hits half at cell 2
    g1, g2 = l1_two_ball_witness(f, F(3, 4))
    assert (g1 - g2).l1_norm() == F(3, 2)


def test_two_ball_witness_requires_an_exact_split():
    f = StepFn(4, (F(1), F(1, 3), F(1, 3), F(1, 2)))  # prefixes 1, 4/3, 5/3 never hit 13/12
    with pytest.raises(SplitBoundaryError):
        l1_two_ball_witness(f, F(1, 2))
    with pytest.raises(ValueError):
        l1_two_ball_witness(StepFn.constant(4, F(1, 2)), F(1, 8))  # mu <= lambda


def test_diameter_approaches_two_as_mu_grows():
    f = StepFn.constant(4, F(1, 8))
    distances = [
        ( (lambda gs: (gs[0] - gs[1]).l1_norm())(l1_two_ball_witness(f, mu)) )
        for mu in (F(1, 4), F(1, 2), F(15, 16))
    ]
    assert distances == [F(1, 2), F(1), F(15, 8)]  # 2*mu, increasing toward 2


# -- four-ball pinch ---------------------------------------------------------------


def test_four_ball_centers_norms():
    centers = four_ball_centers(F(1, 2), 8)
    # each center has L1 norm (2 - delta)/2 < 1, so 0 is in every open ball
    for c in centers:
        assert c.l1_norm() == F(3, 4)
        assert (StepFn.constant(8, F(0)) - c).l1_norm() < 1


def test_four_ball_probe_respects_the_bound():
    delta = F(1, 2)
    res = l1_four_ball_probe(delta, 16, 3000, seed=4)
    assert isinstance(res, FourBallProbeResult)
    assert res.members_found > 0
    assert res.max_norm is not None and res.max_norm < delta
    assert 0 < res.members_found < res.samples  # the ladder really rejects some


def test_four_ball_probe_deterministic():
    a = l1_four_ball_probe(F(1, 4), 16, 2000, seed=9)
    b = l1_four_ball_probe(F(1, 4), 16, 2000, seed=9)
    assert (a.members_found, a.max_norm) == (b.members_found, b.max_norm)


def test_four_ball_probe_examples_pass_exact_membership():
    # dual route: the vectorized integer tests agree with StepFn arithmetic
    delta = F(1, 2)
    res = l1_four_ball_probe(delta, 16, 2000, seed=5, keep_examples=6)
    assert res.examples
    centers = four_ball_centers(delta, 16)
    for f in res.examples:
        for c in centers:
            assert (f - c).l1_norm() < 1
        assert f.l1_norm() < delta


def test_norm_delta_function_fails_some_ball():
    # any step function of norm exactly delta must be rejected somewhere
    delta, m = F(1, 2), 16
    centers = four_ball_centers(delta, m)
    candidates = [
        StepFn.two_level(m, delta, delta),
        StepFn.two_level(m, 2 * delta, F(0)),
        StepFn.two_level(m, F(0), -2 * delta),
    ]
    for f in candidates:
        assert f.l1_norm() == delta
        assert any(not (f - c).l1_norm() < 1 for c in centers)


def test_zero_samples_is_a_valid_report():
    res = l1_four_ball_probe(F(1, 2), 16, 0, seed=0)
    assert res.members_found == 0 and res.max_norm is None


# -- sum of two unit vectors --------------------------------------------------------


def test_two_unit_frozen_circle_case():
    # solve (1/2 - c)^2 + s^2 = 1 with c^2 + s^2 = 1: c = 1/4, s = sqrt(15)/4
    y = two_unit_decomposition(vec("1/2", 0), L2, F(1, 10**9))
    assert abs(float(y.get(1)) - 0.25) < 1e-9
    assert abs(float(y.get(2)) - math.sqrt(15) / 4) < 1e-9


def test_two_unit_residuals_within_tol():
    tol = F(1, 10**9)
    stream = CounterStream(23)
    for p in (2, 3, 4):
        norm = lp(p)
        for _ in range(5):
            x = fsv({k: F(stream.randint(-5, 5), 16) for k in range(1, 5)})
            if x.is_zero() or not lp_power_distance(x, zero_vector(), p) < 1:
                continue
            y = two_unit_decomposition(x, norm, tol)
            # exact residual windows on p-th powers
            ny = lp_power_distance(y, zero_vector(), p)
            nd = lp_power_distance(x - y, zero_vector(), p)
            assert (1 - tol) ** p <= ny <= (1 + tol) ** p
            assert (1 - tol) ** p <= nd <= (1 + tol) ** p


def test_two_unit_zero_vector_special_case():
    y = two_unit_decomposition(zero_vector(), L2, F(1, 1000))
    assert y == from_coords([1])


def test_two_unit_bracket_endpoints():
    # exact precondition check doubles as the bracket certificate:
    # distance to x/||x|| is 1 - ||x|| < 1, to -x/||x|| is 1 + ||x|| > 1
    x = vec("1/2", "1/4")
    power = lp_power_distance(x, zero_vector(), 2)
    assert 0 < power < 1


def test_two_unit_rejects_bad_inputs():
    with pytest.raises(ValueError):
        two_unit_decomposition(vec("1/2"), L2, F(1, 100), dim=1)
    with pytest.raises(ValueError):
        two_unit_decomposition(vec(2, 0), L2, F(1, 100))  # norm >= 1
    with pytest.raises(ValueError):
        two_unit_decomposition(vec("1/2", 0), LINF, F(1, 100))
