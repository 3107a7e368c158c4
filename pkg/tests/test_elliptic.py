"""Elliptic layer: K(k) and sn/cn/dn against quadrature, ODE, and mpmath."""

import math

import numpy as np
import pytest

from tadpole_sg.elliptic import (EllipticModulus, as_modulus, complete_K,
                                 jacobi_sn_cn_dn, shift_identities)
from tadpole_sg.errors import DomainError

import _oracles

K_LATTICE = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]

# frozen from the quadrature oracle below (K_quadrature(0.5))
K_HALF_QUAD = 1.6857503548125963


def test_modulus_invariants():
    for k in K_LATTICE:
        m = EllipticModulus.from_k(k)
        assert abs(m.k**2 + m.k_comp**2 - 1.0) < 1e-14


@pytest.mark.parametrize("bad", [1.0, 1.5, -0.2, float("nan")])
def test_modulus_domain(bad):
    with pytest.raises(DomainError):
        EllipticModulus.from_k(bad)


def test_K_at_zero():
    assert complete_K(0.0) == pytest.approx(math.pi / 2.0, abs=1e-15)


def test_K_against_quadrature():
    oracle = _oracles.K_quadrature(0.5)
    assert oracle == pytest.approx(K_HALF_QUAD, abs=1e-13)
    assert complete_K(0.5) == pytest.approx(oracle, abs=1e-12)
    for k in K_LATTICE[1:]:
        assert complete_K(k) == pytest.approx(_oracles.K_quadrature(k), abs=1e-11)


def test_K_strictly_increasing():
    ks = np.arange(0.0, 0.9991, 1e-3)
    vals = np.array([complete_K(k) for k in ks])
    assert np.all(np.diff(vals) > 0)


def test_K_lobe_bound_value():
    # K at the single-lobe modulus bound k_l, k_l^2 = (1 + cos theta0)/2
    k_l = math.sqrt(0.3913831858943892)
    assert complete_K(k_l) == pytest.approx(1.77160, abs=1e-4)


def test_sncndn_origin():
    for k in K_LATTICE:
        assert jacobi_sn_cn_dn(0.0, k) == (0.0, 1.0, 1.0)


def test_sn_at_quarter_period():
    for k in K_LATTICE[1:]:
        sn, _, dn = jacobi_sn_cn_dn(complete_K(k), k)
        assert sn == pytest.approx(1.0, abs=1e-12)
        # dn(K) = k' feeds the shift map
        assert dn == pytest.approx(as_modulus(k).k_comp, abs=1e-12)


def test_sncndn_against_ode_oracle():
    sn, cn, dn = jacobi_sn_cn_dn(0.7, 0.6)
    o_sn, o_cn, o_dn = _oracles.sncndn_ode(0.7, 0.6)
    assert sn == pytest.approx(o_sn, abs=1e-11)
    assert cn == pytest.approx(o_cn, abs=1e-11)
    assert dn == pytest.approx(o_dn, abs=1e-11)


def test_sncndn_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    for u, k in [(0.7, 0.6), (2.3, 0.3), (-1.9, 0.9), (5.5, 0.99)]:
        sn, cn, dn = jacobi_sn_cn_dn(u, k)
        assert sn == pytest.approx(float(mpmath.ellipfun("sn", u, k=k)), abs=1e-12)
        assert cn == pytest.approx(float(mpmath.ellipfun("cn", u, k=k)), abs=1e-12)
        assert dn == pytest.approx(float(mpmath.ellipfun("dn", u, k=k)), abs=1e-12)


def test_sncndn_vs_scipy_on_grids():
    for k in K_LATTICE:
        K = complete_K(k) if k else math.pi / 2
        u = np.linspace(-4 * K, 4 * K, 801)
        sn, cn, dn = jacobi_sn_cn_dn(u, k)
        o_sn, o_cn, o_dn = _oracles.sncndn_scipy(u, k)
        assert np.max(np.abs(sn - o_sn)) < 1e-12
        assert np.max(np.abs(cn - o_cn)) < 1e-12
        assert np.max(np.abs(dn - o_dn)) < 1e-12


def test_pythagorean_identities():
    for k in K_LATTICE:
        K = complete_K(k) if k else math.pi / 2
        u = np.linspace(-4 * K, 4 * K, 1201)
        sn, cn, dn = jacobi_sn_cn_dn(u, k)
        assert np.max(np.abs(sn**2 + cn**2 - 1.0)) < 1e-12
        assert np.max(np.abs(dn**2 + (k * sn) ** 2 - 1.0)) < 1e-12


def test_parity():
    for k in K_LATTICE:
        u = np.linspace(0.0, 8.0, 400)
        sp, cp, dp = jacobi_sn_cn_dn(u, k)
        sm, cm, dm = jacobi_sn_cn_dn(-u, k)
        assert np.max(np.abs(sm + sp)) < 1e-12
        assert np.max(np.abs(cm - cp)) < 1e-12
        assert np.max(np.abs(dm - dp)) < 1e-12


def test_periodicity():
    for k in [0.3, 0.7, 0.95]:
        K = complete_K(k)
        u = np.linspace(-2 * K, 2 * K, 301)
        s0, _, _ = jacobi_sn_cn_dn(u, k)
        s4, _, _ = jacobi_sn_cn_dn(u + 4 * K, k)
        assert np.max(np.abs(s4 - s0)) < 1e-12
        s2a, _, _ = jacobi_sn_cn_dn(u, k)
        s2b, _, _ = jacobi_sn_cn_dn(u + 2 * K, k)
        assert np.max(np.abs(s2b**2 - s2a**2)) < 1e-12  # sn^2 has period 2K


def test_shift_identities_origin():
    for k in K_LATTICE[1:]:
        kp = as_modulus(k).k_comp
        sn_s, cn_s, dn_s = shift_identities(0.0, k)
        assert sn_s == pytest.approx(1.0, abs=1e-14)
        assert cn_s == pytest.approx(0.0, abs=1e-14)
        assert dn_s == pytest.approx(kp, abs=1e-14)


def test_shift_identity_sn_2K_zero():
    for k in [0.2, 0.5, 0.9]:
        K = complete_K(k)
        sn_s, _, _ = shift_identities(K, k)   # sn(2K) = 0
        assert abs(sn_s) < 1e-12


def test_shift_identities_cross_evaluation():
    for u, k in [(0.3, 0.4), (1.1, 0.7), (-0.8, 0.9)]:
        K = complete_K(k)
        direct = jacobi_sn_cn_dn(u + K, k)
        shifted = shift_identities(u, k)
        for d, s in zip(direct, shifted):
            assert d == pytest.approx(s, abs=1e-12)


def test_nonfinite_argument_rejected():
    with pytest.raises(DomainError):
        jacobi_sn_cn_dn(float("inf"), 0.5)


def test_near_one_hyperbolic_crossover():
    # above the crossover the functions are the hyperbolic limits
    sn, cn, dn = jacobi_sn_cn_dn(2.0, math.sqrt(1.0 - 1e-16))
    assert sn == pytest.approx(math.tanh(2.0), abs=1e-12)
    assert cn == pytest.approx(1.0 / math.cosh(2.0), abs=1e-12)
    assert dn == pytest.approx(1.0 / math.cosh(2.0), abs=1e-12)
