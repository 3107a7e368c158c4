"""Profiles: kink tail, loop librations, and glued stationary states."""

import math

import numpy as np
import pytest

from tadpole_sg.elliptic import complete_K
from tadpole_sg.errors import DomainError, InvalidStateError
from tadpole_sg.existence import shift_map_a
from tadpole_sg.profiles import (Branch, GraphParams, KinkTail,
                                 LibrationProfile, degenerate_state,
                                 kink_derivative, kink_value,
                                 libration_derivative, libration_value,
                                 loop_potential, make_state, sample_state,
                                 tail_potential)
from tadpole_sg.spectral import Discretization

import _oracles

# frozen: 4*arctan(e) from mpmath at 30 digits
FOUR_ARCTAN_E = 4.873131620069111


def test_graph_params_validation():
    with pytest.raises(DomainError):
        GraphParams(L=-1.0, c1=1.0, c2=1.0, Z=0.0)
    with pytest.raises(DomainError):
        GraphParams(L=1.0, c1=0.0, c2=1.0, Z=0.0)


def test_kink_value_at_origin_zero_shift():
    tail = KinkTail(a=0.0, c2=1.0)
    assert kink_value(tail, 0.0) == pytest.approx(math.pi, abs=1e-14)


def test_kink_decays_to_zero():
    tail = KinkTail(a=0.7, c2=2.0)
    assert kink_value(tail, 200.0) < 1e-20
    x = np.linspace(0.0, 30.0, 500)
    assert np.all(np.diff(kink_value(tail, x)) < 0)


def test_kink_high_precision_point():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    oracle = float(4 * mpmath.atan(mpmath.e))
    assert oracle == pytest.approx(FOUR_ARCTAN_E, abs=1e-15)
    tail = KinkTail(a=-1.0, c2=1.0)
    assert kink_value(tail, 0.0) == pytest.approx(FOUR_ARCTAN_E, rel=1e-14)


def test_kink_derivative_closed_form():
    tail = KinkTail(a=0.0, c2=1.0)
    assert kink_derivative(tail, 0.0) == pytest.approx(-2.0, abs=1e-14)
    tail2 = KinkTail(a=0.4, c2=1.7)
    for x in [0.0, 0.5, 2.0, 7.3]:
        fd = _oracles.centered_diff(lambda t: kink_value(tail2, t), x + 1.0)
        assert kink_derivative(tail2, x + 1.0) == pytest.approx(fd, abs=1e-9)


def test_kink_domain_error():
    tail = KinkTail(a=0.0, c2=1.0, origin=2.0)
    with pytest.raises(DomainError):
        kink_value(tail, 1.0)


def test_branch_window_enforced():
    # above-pi needs K(k) > L/c1
    with pytest.raises(InvalidStateError):
        LibrationProfile.create(0.5, 1.0, math.pi, Branch.ABOVE_PI)
    # crossing needs K(k) < L/c1
    with pytest.raises(InvalidStateError):
        LibrationProfile.create(0.99, 1.0, 1.0, Branch.CROSSING)


def test_above_pi_maximum_value():
    k = math.sqrt(0.98)
    p = LibrationProfile.create(k, 1.0, math.pi, Branch.ABOVE_PI)
    # phi(0) = 2 pi - arccos(2 k^2 - 1)
    assert libration_value(p, 0.0) == pytest.approx(
        2 * math.pi - math.acos(2 * k * k - 1), abs=1e-12)
    x = np.linspace(-math.pi, math.pi, 801)
    vals = libration_value(p, x)
    assert np.all(vals > math.pi)
    assert np.argmax(vals) == 400      # single interior maximum at x = 0


def test_crossing_value_at_switch_point():
    p = LibrationProfile.create(math.sqrt(0.5), 1.0, math.pi, Branch.CROSSING)
    assert p.b == pytest.approx(complete_K(math.sqrt(0.5)), rel=1e-15)
    assert p.b == pytest.approx(1.8540746773013719, rel=1e-12)
    assert libration_value(p, p.b) == pytest.approx(math.pi, abs=1e-7)
    assert libration_value(p, -p.b) == pytest.approx(math.pi, abs=1e-7)


def test_libration_evenness():
    for k, branch, L in [(math.sqrt(0.98), Branch.ABOVE_PI, math.pi),
                         (math.sqrt(0.5), Branch.CROSSING, math.pi),
                         (0.3, Branch.ABOVE_PI, 1.2)]:
        p = LibrationProfile.create(k, 1.0, L, branch)
        x = np.linspace(0.0, L, 257)
        assert np.max(np.abs(libration_value(p, x) - libration_value(p, -x))) < 1e-12


def test_libration_derivative_zero_at_origin():
    p = LibrationProfile.create(0.4, 1.0, 1.0, Branch.ABOVE_PI)
    assert libration_derivative(p, 0.0) == pytest.approx(0.0, abs=1e-13)


def test_libration_derivative_at_boundary_closed_form():
    k, L, c1 = math.sqrt(0.98), math.pi, 1.0
    from tadpole_sg.elliptic import jacobi_sn_cn_dn
    p = LibrationProfile.create(k, c1, L, Branch.ABOVE_PI)
    sn, _, dn = jacobi_sn_cn_dn(L / c1, k)
    kp = math.sqrt(1 - k * k)
    expected = -(2 * k * kp / c1) * sn / dn
    assert libration_derivative(p, L) == pytest.approx(expected, rel=1e-12)


def test_libration_derivative_matches_finite_differences():
    for k, branch in [(math.sqrt(0.98), Branch.ABOVE_PI),
                      (math.sqrt(0.5), Branch.CROSSING)]:
        p = LibrationProfile.create(k, 1.0, math.pi, Branch(branch))
        for x in [-2.5, -0.7, 0.3, 1.1, 2.9]:
            fd = _oracles.centered_diff(lambda t: libration_value(p, t), x)
            assert libration_derivative(p, x) == pytest.approx(fd, abs=5e-9)


def test_crossing_one_sided_derivatives_agree():
    p = LibrationProfile.create(math.sqrt(0.5), 1.0, math.pi, Branch.CROSSING)
    eps = 1e-7
    left = (libration_value(p, p.b) - libration_value(p, p.b - eps)) / eps
    right = (libration_value(p, p.b + eps) - libration_value(p, p.b)) / eps
    assert left == pytest.approx(right, abs=5e-6)
    assert libration_derivative(p, p.b - 1e-12) == pytest.approx(
        libration_derivative(p, p.b + 1e-12), abs=1e-10)


def test_above_pi_concavity():
    p = LibrationProfile.create(math.sqrt(0.98), 1.0, math.pi, Branch.ABOVE_PI)
    x = np.linspace(-math.pi + 0.01, math.pi - 0.01, 301)
    d2 = np.array([_oracles.second_diff(lambda t: libration_value(p, t), xi)
                   for xi in x])
    assert np.all(d2 < 0)


def test_crossing_convexity_pattern():
    p = LibrationProfile.create(math.sqrt(0.5), 1.0, math.pi, Branch.CROSSING)
    inner = np.linspace(-p.b + 0.05, p.b - 0.05, 101)
    outer = np.concatenate([np.linspace(-math.pi + 0.02, -p.b - 0.05, 40),
                            np.linspace(p.b + 0.05, math.pi - 0.02, 40)])
    d2_in = np.array([_oracles.second_diff(lambda t: libration_value(p, t), xi)
                      for xi in inner])
    d2_out = np.array([_oracles.second_diff(lambda t: libration_value(p, t), xi)
                       for xi in outer])
    assert np.all(d2_in < 0)
    assert np.all(d2_out > 0)


def test_ode_residual_above_pi():
    # -c1^2 phi'' + sin(phi) = 0 via finite differences
    k, c1, L = math.sqrt(0.98), 1.0, math.pi
    p = LibrationProfile.create(k, c1, L, Branch.ABOVE_PI)
    x = np.linspace(-L + 0.05, L - 0.05, 101)
    for xi in x[::10]:
        d2 = _oracles.second_diff(lambda t: libration_value(p, t), xi, h=1e-4)
        resid = -c1**2 * d2 + math.sin(libration_value(p, xi))
        assert abs(resid) < 1e-6


def test_energy_relation_pointwise():
    for k, branch in [(math.sqrt(0.98), Branch.ABOVE_PI),
                      (math.sqrt(0.5), Branch.CROSSING),
                      (0.35, Branch.ABOVE_PI)]:
        L = math.pi if branch is Branch.CROSSING or k > 0.9 else 1.2
        p = LibrationProfile.create(k, 1.0, L, branch)
        E = 2.0 - 2.0 * k * k
        x = np.linspace(-L, L, 501)
        phi = libration_value(p, x)
        dphi = libration_derivative(p, x)
        resid = -(1.0 / 2.0) * dphi**2 + 1.0 - np.cos(phi) - E
        assert np.max(np.abs(resid)) < 1e-10


def test_tail_potential_identity():
    g = GraphParams(L=1.0, c1=1.0, c2=1.3, Z=0.1)
    s = make_state(g, 0.3, shift_map_a(0.3, g, Branch.ABOVE_PI), Branch.ABOVE_PI)
    x = np.linspace(0.0, 30.0, 700)
    direct = np.cos(kink_value(s.tail, x))
    assert np.max(np.abs(tail_potential(s, x) - direct)) < 1e-12


def test_center_state_and_admissibility():
    g_ok = GraphParams(L=1.0, c1=1.0, c2=1.0, Z=2 / math.pi)
    s = degenerate_state(g_ok)
    assert s.admissible
    assert s.energy_E == pytest.approx(2.0)
    assert abs(s.flux_residual()) < 1e-12
    g_bad = GraphParams(L=1.0, c1=1.0, c2=1.0, Z=0.3)
    assert not degenerate_state(g_bad).admissible


def test_vertex_continuity_enforced():
    g = GraphParams(L=1.2, c1=1.0, c2=0.8, Z=0.0)
    with pytest.raises(InvalidStateError):
        make_state(g, 0.3, 1.234, Branch.ABOVE_PI)   # wrong shift


def test_sample_state_vertex_duplication():
    g = GraphParams(L=1.0, c1=1.0, c2=1.0, Z=2 / math.pi)
    s = degenerate_state(g)
    d = Discretization.for_graph(g, h=0.01, R=5.0)
    loop_vals, tail_vals = sample_state(s, d)
    assert np.all(loop_vals == math.pi)
    assert loop_vals[0] == loop_vals[-1] == tail_vals[0]


def test_sample_state_tail_truncation_bound():
    g = GraphParams(L=1.5, c1=1.0, c2=0.5, Z=0.8)
    s = make_state(g, 0.35, shift_map_a(0.35, g, Branch.ABOVE_PI), Branch.ABOVE_PI)
    d = Discretization.for_graph(g)     # default R = 40 c2
    _, tail_vals = sample_state(s, d)
    assert tail_vals[-1] < 4.0 * math.exp(-d.R / g.c2) * math.exp(-s.tail.a / g.c2) + 1e-30


def test_loop_potential_matches_cos():
    g = GraphParams(L=1.2, c1=1.0, c2=1.0, Z=0.1)
    s = make_state(g, 0.4, shift_map_a(0.4, g, Branch.ABOVE_PI), Branch.ABOVE_PI)
    x = np.linspace(-g.L, g.L, 101)
    assert np.max(np.abs(loop_potential(s, x)
                         - np.cos(libration_value(s.loop, x)))) < 1e-14
