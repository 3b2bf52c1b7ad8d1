import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import Poly, binomial
from sympy.abc import T

from mirimanoff.errors import NotUnit, ZeroInput
from mirimanoff.iwasawa import IwasawaPoly, lemma2_identities, omega_poly
from mirimanoff.padic import PadicCtx
from mirimanoff.unramified import make_splitting_ctx


def oracle_reduce(coeffs, p, n, N):
    """Monomial coefficients of sum c_k T^k mod (p^N, omega_n) by sympy long division."""
    f = Poly(sum(int(c) * T**k for k, c in enumerate(coeffs)), T)
    w = Poly((1 + T) ** (p**n) - 1, T)
    r = f.rem(w).all_coeffs()[::-1]
    r = [int(c) % p**N for c in r] + [0] * (p**n - len(r))
    return r


def monomial(f):
    return [int(c) for c in f.monomial()[:, 0]]


levels = st.sampled_from([(5, 1), (5, 2), (7, 1), (3 + 2, 0)])
vectors = st.lists(st.integers(0, 10**5), min_size=1, max_size=40)


@given(levels, vectors, vectors)
def test_product_matches_polynomial_oracle(level, a, b):
    p, n = level
    N = 3
    ctx = PadicCtx(p, N)
    f, g = IwasawaPoly.from_monomial(ctx, n, a), IwasawaPoly.from_monomial(ctx, n, b)
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    assert monomial(f * g) == oracle_reduce(prod, p, n, N)
    assert monomial(f) == oracle_reduce(a, p, n, N)


@given(levels, vectors)
def test_group_ring_round_trip(level, a):
    p, n = level
    ctx = PadicCtx(p, 2)
    f = IwasawaPoly(ctx, n, np.array([[x % 25] for x in (a + [0] * p**n)[: p**n]]))
    assert IwasawaPoly.from_monomial(ctx, n, monomial(f)) == f


def test_from_group_ring_examples():
    ctx = PadicCtx(5, 2)
    assert monomial(IwasawaPoly.from_group_ring(ctx, 1, {0: 3})) == [3, 0, 0, 0, 0]
    assert monomial(IwasawaPoly.from_group_ring(ctx, 1, {1: 1})) == [1, 1, 0, 0, 0]
    g = IwasawaPoly.from_group_ring(ctx, 2, {24: 1})
    assert g.group_coeff(24).value == 1 and int(g.to_group_ring().sum()) == 1


@given(levels, vectors, st.integers(1, 200), st.integers(1, 200))
def test_substitute(level, a, c, c2):
    p, n = level
    if c % p == 0 or c2 % p == 0:
        return
    ctx = PadicCtx(p, 2)
    f = IwasawaPoly.from_monomial(ctx, n, a)
    g = IwasawaPoly.from_monomial(ctx, n, a[::-1])
    assert f.substitute(1) == f
    assert f.substitute(-1).substitute(-1) == f
    assert f.substitute(c).substitute(c2) == f.substitute(c * c2)
    assert (f * g).substitute(c) == f.substitute(c) * g.substitute(c)
    with pytest.raises(NotUnit):
        f.substitute(p)


def test_substitute_against_composition_oracle():
    p, n, N = 5, 1, 3
    ctx = PadicCtx(p, N)
    a = [3, 1, 4, 1, 5]
    f = IwasawaPoly.from_monomial(ctx, n, a)
    for c in (2, 3, 7):
        expr = Poly(sum(x * ((1 + T) ** c - 1) ** k for k, x in enumerate(a)), T)
        assert monomial(f.substitute(c)) == oracle_reduce(expr.all_coeffs()[::-1], p, n, N)


def test_omega_image_vanishes():
    ctx = PadicCtx(5, 2)
    w = IwasawaPoly.from_monomial(ctx, 1, omega_poly(5, 1))
    assert w.is_zero() and w.substitute(2).is_zero()
    assert omega_poly(5, 1) == [0, 5, 10, 10, 5, 1]


def test_scale_shift():
    ctx = PadicCtx(5, 3)
    Tp = IwasawaPoly.T(ctx, 1)
    assert Tp.scale_shift(1) == Tp
    assert IwasawaPoly.constant(ctx, 1, 7).scale_shift(6) == IwasawaPoly.constant(ctx, 1, 7)
    assert monomial(Tp.scale_shift(6)) == [5, 6, 0, 0, 0]


def test_derivative():
    ctx = PadicCtx(7, 2)
    assert monomial(IwasawaPoly.from_monomial(ctx, 1, [0, 0, 1]).derivative()) == [0, 2, 0, 0, 0, 0, 0]
    assert IwasawaPoly.constant(ctx, 1, 3).derivative().is_zero()
    g5 = IwasawaPoly.gamma(ctx, 1, 5)
    assert g5.derivative() == IwasawaPoly.gamma(ctx, 1, 4).scale(5)


@given(st.lists(st.integers(0, 1000), min_size=3, max_size=3), st.lists(st.integers(0, 1000), min_size=3, max_size=3))
def test_leibniz_on_low_degree_representatives(a, b):
    # degrees stay below p^n so representatives multiply without reduction
    ctx = PadicCtx(7, 3)
    f, g = IwasawaPoly.from_monomial(ctx, 1, a), IwasawaPoly.from_monomial(ctx, 1, b)
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


def test_restrict():
    ctx = PadicCtx(5, 2)
    assert IwasawaPoly.constant(ctx, 2, 4).restrict() == IwasawaPoly.constant(ctx, 1, 4)
    w = IwasawaPoly.from_monomial(ctx, 2, omega_poly(5, 1))
    assert w.restrict().is_zero()


def test_mu_lambda_examples():
    ctx = PadicCtx(5, 2)
    f = IwasawaPoly.from_monomial(ctx, 1, [5, 10, 0, 1])
    assert tuple(f.mu_lambda()) == (0, 3)
    assert tuple(IwasawaPoly.constant(ctx, 1, 10).mu_lambda()) == (1, 0)
    with pytest.raises(ZeroInput):
        IwasawaPoly.zero(ctx, 1).mu_lambda()


@given(st.integers(0, 3), st.integers(0, 3), st.lists(st.integers(0, 10**4), min_size=6, max_size=6))
def test_mu_lambda_multiplicative(l1, l2, junk):
    p, n, N = 5, 2, 3
    ctx = PadicCtx(p, N)
    f = IwasawaPoly.from_monomial(ctx, n, [p * x for x in junk[:3]][:l1] + [1] + junk[:2])
    g = IwasawaPoly.from_monomial(ctx, n, [p * x for x in junk[3:]][:l2] + [2] + junk[3:5])
    mf, mg, mfg = f.mu_lambda(), g.mu_lambda(), (f * g).mu_lambda()
    assert mfg.mu == mf.mu + mg.mu and mfg.lam == mf.lam + mg.lam


def test_extension_coefficients():
    ring = make_splitting_ctx(5, 2, 3)
    rho = ring.gen()
    f = IwasawaPoly.from_group_ring(ring, 1, {0: rho, 3: rho * rho})
    g = f * f
    assert g.group_coeff(0) == rho**2 and g.group_coeff(3) == 2 * rho**3 and g.group_coeff(1) == rho**4


@pytest.mark.parametrize("p,n,d", [(5, 1, 0), (5, 2, 1), (7, 2, 2), (5, 3, 3), (7, 3, 1)])
def test_lemma2_examples(p, n, d):
    assert lemma2_identities(p, n, d)
