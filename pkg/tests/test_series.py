import pytest
from hypothesis import given, strategies as st

from mirimanoff.characters import DeltaChar
from mirimanoff.errors import BadA, BadD, OutOfRange
from mirimanoff.iwasawa import IwasawaPoly
from mirimanoff.padic import PadicCtx, gamma_index_of, teichmuller_int
from mirimanoff.series import (
    derivative_vanishes_mod_p,
    frobenius_invariant,
    lemma4_check,
    mirimanoff_at_zero_check,
    mirimanoff_poly,
    mirimanoff_series,
    phi,
    primitive_sum,
    u_series,
)
from mirimanoff.unramified import frobenius, make_splitting_ctx, roots_of_unity


def brute_u(p, j, a, n, N):
    """u_n(omega^j, a) for an integer a, one k at a time."""
    M = p**N
    out = [0] * p**n
    for k in range(1, p ** (n + 1)):
        if k % p:
            w = teichmuller_int(k, p, N)
            out[gamma_index_of(k, p, n)] += pow(w, (j - 1) % (p - 1), M) * pow(a, k, M)
    return [x % M for x in out]


def theta(p, j, N=2):
    return DeltaChar(PadicCtx(p, N), j)


def group(f):
    return [int(c) for c in f.to_group_ring()[:, 0]]


def test_phi_examples():
    assert list(phi(1, 5)) == [0, 1, 1, 1, 1]
    assert list(phi(2, 5)) == [0, 1, 2, 3, 4]
    assert list(phi(3, 5)) == [0, 1, 4, 4, 1]
    with pytest.raises(OutOfRange):
        phi(0, 5)


@pytest.mark.parametrize("p,j,a,n", [(5, 2, 2, 1), (7, 3, 3, 2), (11, 4, 5, 1), (5, 0, 3, 2), (7, 1, 6, 1)])
def test_u_series_against_brute_force(p, j, a, n):
    N = 3
    assert group(u_series(theta(p, j, N), a, n, N)) == brute_u(p, j, a, n, N)


def test_frozen_values():
    # augmentation of M_1(omega^2, 2) at p = 5: 18 mod 25, which is 3 mod 5 = phi_2(2)/(2^5 - 1)
    m = mirimanoff_series(theta(5, 2), 2, 1, 2)
    assert int(m.evaluate_at_zero()) == 18
    assert 98 * pow(31, -1, 5) % 5 == 3
    inv = pow(2**25 - 1, -1, 25)
    oracle = [x * inv % 25 for x in brute_u(5, 2, 2, 1, 2)]
    assert group(m.poly) == oracle == [4, 23, 6, 17, 18]


def test_sum_over_alpha_of_u0():
    p, N = 7, 3
    for j in range(p - 1):
        if j == 1:
            continue  # theta = omega is excluded: the sum is (p-1) - (p-1) = 0
        total = IwasawaPoly.zero(PadicCtx(p, N), 0)
        for a in range(2, p):
            total = total + u_series(theta(p, j, N), teichmuller_int(a, p, N), 0, N)
        sign = 1 if (j - 1) % 2 == 0 else -1
        assert int(total.augmentation()) == (p - 1) * sign % p**N


def test_odd_theta_at_minus_one_vanishes():
    for p in (5, 7):
        for j in (1, 3):
            assert mirimanoff_poly(theta(p, j), -1, 2, 2).is_zero()


@pytest.mark.parametrize("p", [5, 7])
def test_teichmuller_collapse(p):
    N, n = 3, 2
    for a in range(2, p):
        alpha = teichmuller_int(a, p, N)
        for j in range(p - 1):
            t = theta(p, j, N)
            assert mirimanoff_poly(t, alpha, n, N).scale(alpha - 1) == u_series(t, alpha, n, N)


def test_bad_a():
    with pytest.raises(BadA):
        mirimanoff_poly(theta(5, 2), 6, 1, 2)
    with pytest.raises(BadA):
        mirimanoff_poly(theta(5, 2), 10, 1, 2)


@given(st.sampled_from([5, 7, 11]), st.integers(0, 9), st.integers(2, 10**4), st.integers(0, 1))
def test_lemma3_restriction(p, j, a, n):
    if a % p in (0, 1):
        return
    t = theta(p, j)
    assert mirimanoff_poly(t, a, n + 1, 2).restrict() == mirimanoff_poly(t, a, n, 2)


@given(st.sampled_from([5, 7, 11]), st.integers(0, 9), st.integers(2, 10**4))
def test_lemma4_random(p, j, a):
    if a % p in (0, 1):
        return
    assert lemma4_check(theta(p, j), a, 2, 2)


def test_lemma4_examples():
    assert lemma4_check(theta(5, 2), 2, 1, 2)
    assert lemma4_check(theta(7, 3), 3, 1, 2)
    assert lemma4_check(theta(5, 2), -1, 1, 2)


def test_lemma3_and_4_on_cube_roots():
    ring = make_splitting_ctx(7, 2, 3)
    for rho in roots_of_unity(ring, 3):
        for j in range(6):
            t = theta(7, j)
            assert mirimanoff_poly(t, rho, 2, 2).restrict() == mirimanoff_poly(t, rho, 1, 2)
            assert lemma4_check(t, rho, 1, 2)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_value_at_zero(p):
    for j in range(p - 1):
        for a in range(2, p):
            assert mirimanoff_at_zero_check(theta(p, j), a, 2)


def test_derivative_examples():
    assert derivative_vanishes_mod_p(theta(5, 3, 1), -1, 2)
    assert derivative_vanishes_mod_p(theta(5, 3, 1), 4, 2)
    test = derivative_vanishes_mod_p(theta(5, 2, 1), 2, 2)
    assert not test and test.witness is not None and test.witness % 5


def test_primitive_sum():
    t_odd, t_even = theta(5, 3), theta(5, 2)
    assert primitive_sum(t_odd, 2, 1).is_zero()
    assert primitive_sum(t_even, 2, 1) == mirimanoff_poly(t_even, -1, 1, 2)
    s = primitive_sum(t_even, 3, 1)
    assert s.ring.degree == 1
    with pytest.raises(BadD):
        primitive_sum(t_even, 5, 1)


def test_frobenius_invariance_of_primitive_sums():
    ring = make_splitting_ctx(5, 2, 3)
    total = IwasawaPoly.zero(ring, 1)
    for rho in roots_of_unity(ring, 3):
        total = total + mirimanoff_poly(theta(5, 2), rho, 1, 2)
    assert frobenius_invariant(total)
    # Frobenius sends rho to rho^-1; by the symmetry in a -> 1/a the single
    # term is fixed for even theta and changes sign for odd theta.
    rho = roots_of_unity(ring, 3)[0]
    even = mirimanoff_poly(theta(5, 2), rho, 1, 2)
    odd = mirimanoff_poly(theta(5, 3), rho, 1, 2)
    assert frobenius_invariant(even) and not frobenius_invariant(odd)
    assert odd.map_coeffs(frobenius) == -odd
