from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import primerange

from mirimanoff.characters import DeltaChar
from mirimanoff.cyclotomic import (
    CycloCtx,
    alpha_class_search,
    apply,
    d_rho,
    d_rho_bridge,
    e_theta_apply,
    galois,
    galois_trace,
    inv_pi_identity,
    lemma1_check,
    lemma5_trace,
    non_square_classes,
    normal_basis_check,
    restriction_compatible,
    stickelberger_projection_check,
    t_element,
    teichmuller_alphas,
    theorem4_dn_check,
    thm1_tn_identity,
    trace_inv_pi,
)
from mirimanoff.errors import BadAlpha, BadEll, NotUnit
from mirimanoff.iwasawa import IwasawaPoly
from mirimanoff.padic import PadicCtx, teichmuller_int

CTX51 = CycloCtx(5, 1, 2)


def elems(ctx):
    return st.lists(st.integers(0, ctx.modulus - 1), min_size=ctx.degree, max_size=ctx.degree).map(ctx.element)


def units(ctx):
    return st.integers(1, ctx.P - 1).filter(lambda a: a % ctx.p)


def test_reduction_relation():
    ctx = CycloCtx(5, 1, 3)
    x = ctx.zeta()
    assert x**25 == 1 and x**5 != 1
    phi = sum((x ** (5 * i) for i in range(5)), ctx.zero())
    assert phi == 0


@given(elems(CTX51), elems(CTX51), units(CTX51), units(CTX51))
def test_galois_is_an_automorphism(e, f, a, b):
    assert galois(a, e * f) == galois(a, e) * galois(a, f)
    assert galois(a, e + f) == galois(a, e) + galois(a, f)
    assert galois(a, galois(b, e)) == galois(a * b % 25, e)
    assert galois(1, e) == e


def test_galois_rejects_non_units():
    with pytest.raises(NotUnit):
        galois(5, CTX51.zeta())


def test_trace_of_zeta():
    assert galois_trace(CycloCtx(5, 1, 2).zeta()) == 0
    assert galois_trace(CycloCtx(7, 1, 3).zeta()) == 0
    assert galois_trace(CycloCtx(5, 0, 2).zeta()) == (-1) % 25


@given(elems(CTX51))
def test_inverse(e):
    if e.is_unit():
        assert e * e.inverse() == 1
    else:
        with pytest.raises(NotUnit):
            e.inverse()


def test_t_element():
    assert t_element(CycloCtx(5, 0, 2)) == CycloCtx(5, 0, 2).zeta()
    t = t_element(CTX51)
    assert [i for i, c in enumerate(t.coeffs) if c] == [1, 5]


def test_normal_basis():
    assert normal_basis_check(t_element(CycloCtx(5, 0, 2))) .det_valuation == 0
    for p, n in [(5, 1), (7, 1)]:
        r = normal_basis_check(t_element(CycloCtx(p, n, 4)))
        assert r.independent and r.det_valuation > 0
    # an element fixed by a nontrivial subgroup has dependent translates
    assert not normal_basis_check(CTX51.one())


@given(elems(CTX51))
def test_idempotents(e):
    ctx = PadicCtx(5, 2)
    projections = [e_theta_apply(DeltaChar(ctx, j), e) for j in range(4)]
    assert sum(projections, CTX51.zero()) == e
    for j, pj in enumerate(projections):
        assert e_theta_apply(DeltaChar(ctx, j), pj) == pj
        for k in range(4):
            if k != j:
                assert e_theta_apply(DeltaChar(ctx, k), pj) == 0


def test_trivial_idempotent_fixes_invariants():
    ctx = PadicCtx(7, 2)
    c = CycloCtx(7, 1, 2)
    fixed = sum((galois(teichmuller_int(a, 7, 2), c.zeta()) for a in range(1, 7)), c.zero())
    assert e_theta_apply(DeltaChar(ctx, 0), fixed) == fixed


def test_d_rho():
    ctx = CycloCtx(5, 1, 3)
    x = ctx.zeta()
    assert d_rho(-1, ctx) == x * (1 + x).inverse()
    for alpha in teichmuller_alphas(ctx):
        assert (ctx.scalar(alpha) - x) * d_rho(alpha, ctx) == -x
    with pytest.raises(BadAlpha):
        d_rho(6, ctx)


@pytest.mark.parametrize("p,n,N", [(5, 0, 3), (5, 1, 3), (7, 1, 2)])
def test_inv_pi_identity(p, n, N):
    assert inv_pi_identity(CycloCtx(p, n, N))


@pytest.mark.parametrize("p,n", [(5, 0), (5, 1), (7, 1)])
def test_thm1_identities(p, n):
    ctx = CycloCtx(p, n, 2)
    for alpha in teichmuller_alphas(ctx):
        assert thm1_tn_identity(alpha, ctx)
        assert restriction_compatible(alpha, ctx)


@pytest.mark.parametrize("p,j,n", [(5, 2, 0), (5, 2, 1), (7, 4, 1), (7, 2, 1)])
def test_stickelberger_projection(p, j, n):
    assert stickelberger_projection_check(DeltaChar(PadicCtx(p, 2), j), CycloCtx(p, n, 2))


@pytest.mark.parametrize("p,n", [(5, 1), (7, 1)])
def test_oracle_cross_validation(p, n):
    ctx = CycloCtx(p, n, 2)
    for j in range(2, p - 1):
        theta = DeltaChar(PadicCtx(p, 2), j)
        for alpha in teichmuller_alphas(ctx):
            assert d_rho_bridge(theta, alpha, ctx)
            assert theorem4_dn_check(theta, alpha, ctx)


def test_theorem4_example():
    assert theorem4_dn_check(DeltaChar(PadicCtx(5, 2), 2), teichmuller_int(2, 5, 2), CycloCtx(5, 1, 2))


@given(st.lists(st.integers(0, 24), min_size=5, max_size=5), st.lists(st.integers(0, 24), min_size=5, max_size=5),
       elems(CTX51))
def test_group_ring_action_commutes(a, b, e):
    ctx = PadicCtx(5, 2)
    A = IwasawaPoly(ctx, 1, np.array(a)[:, None])
    B = IwasawaPoly(ctx, 1, np.array(b)[:, None])
    assert apply(A, apply(B, e)) == apply(B, apply(A, e)) == apply(A * B, e)


def test_lemma1():
    ctx = CycloCtx(5, 1, 3)
    assert lemma1_check(-1, 2, ctx)
    c7 = CycloCtx(7, 1, 3)
    primitive_sixth = teichmuller_int(3, 7, 3)
    assert lemma1_check(primitive_sixth, 3, c7)
    assert pow(1 + 7, 7, 49) == 1  # the Galois element in the kernel congruence is trivial


def test_trace_helpers():
    assert trace_inv_pi(7) == Fraction(-3)
    assert trace_inv_pi(7, 2) == Fraction(36, 4) - Fraction(30, 3) == -1
    for ell in (11, 13, 31):
        assert trace_inv_pi(ell) == Fraction(1 - ell, 2)
        assert trace_inv_pi(ell, 2) == Fraction((ell - 1) ** 2, 4) - Fraction((ell - 1) * (ell - 2), 3)


def test_lemma5_example():
    r = lemma5_trace(31, 5)
    assert r.exact == r.closed == -10 and r.matches and r.square_flag
    with pytest.raises(BadEll):
        lemma5_trace(5, 5)


@pytest.mark.parametrize("p", [5, 7])
def test_lemma5_matches(p):
    for ell in primerange(p * p, 120):
        assert lemma5_trace(int(ell), p).matches


def test_alpha_search():
    found = alpha_class_search(5)
    assert found.alpha == 2 and found.confirmed and len(found.primes) == 10
    assert all(ell % 5 == 2 and ell >= 25 for ell in found.primes)
    a7 = alpha_class_search(7).alpha
    assert (a7 * a7 + 2) * pow(3, -1, 7) % 7 not in (1, 2, 4)
    assert all(non_square_classes(int(p)) for p in primerange(5, 98))
