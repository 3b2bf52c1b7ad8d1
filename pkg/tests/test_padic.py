import pytest
from hypothesis import given, strategies as st

from mirimanoff.errors import BadBase, DivisibleByP, NotPrincipalUnit, NotUnit
from mirimanoff.padic import (
    PadicCtx,
    angle,
    class_matrix,
    gamma_index,
    gamma_index_table,
    iwasawa_log,
    teichmuller,
    teichmuller_int,
)

PRIMES = [5, 7, 11, 13]


def brute_gamma_index(k, p, n, base):
    """Linear scan for base^i = <k> mod p^(n+1); <k> from the closed-form Teichmuller a^(p^n)."""
    M = p ** (n + 1)
    w = pow(k, p**n, M)
    target = k * pow(w, -1, M) % M
    x = 1
    for i in range(p**n):
        if x == target:
            return i
        x = x * base % M
    raise AssertionError("no index")


def test_teichmuller_examples():
    assert teichmuller(PadicCtx(5, 2)(1)).value == 1
    assert teichmuller(PadicCtx(7, 2)(3)).value == 31
    assert teichmuller(PadicCtx(5, 2)(4)).value == 24
    assert pow(31, 3, 49) == 48


def test_teichmuller_rejects_multiples_of_p():
    with pytest.raises(DivisibleByP):
        teichmuller(PadicCtx(5, 2)(10))


@given(st.sampled_from(PRIMES), st.integers(1, 5), st.integers(1, 10**6))
def test_teichmuller_matches_closed_form(p, N, a):
    if a % p == 0:
        a += 1
    w = teichmuller_int(a, p, N)
    assert w == pow(a, p ** (N - 1), p**N)
    assert pow(w, p - 1, p**N) == 1 and (w - a) % p == 0


def test_angle_examples():
    ctx = PadicCtx(5, 2)
    assert angle(ctx(6)).value == 6
    assert angle(ctx(7)).value == 1
    assert angle(PadicCtx(7, 2)(3)).value == 3 * pow(31, -1, 49) % 49


@given(st.sampled_from(PRIMES), st.integers(1, 4), st.integers(1, 10**6))
def test_teichmuller_times_angle(p, N, a):
    if a % p == 0:
        a += 1
    x = PadicCtx(p, N)(a)
    assert teichmuller(x) * angle(x) == x
    assert angle(x).value % p == 1


def test_iwasawa_log_basics():
    ctx = PadicCtx(5, 2)
    assert iwasawa_log(ctx(1)).value == 0
    u = PadicCtx(5, 3)(6)
    assert iwasawa_log(u * u) == iwasawa_log(u) * 2
    with pytest.raises(NotPrincipalUnit):
        iwasawa_log(ctx(2))


def test_iwasawa_log_value_frozen():
    # log(6) = 5 - 25/2 + 125/3 - ... ; mod 25 only 5 - 25/2 survives, 25/2 = 0 mod 25
    assert iwasawa_log(PadicCtx(5, 2)(6)).value == 5


@given(st.sampled_from(PRIMES), st.integers(1, 4), st.integers(0, 50), st.integers(0, 50))
def test_iwasawa_log_is_additive(p, N, s, t):
    ctx = PadicCtx(p, N)
    u, v = ctx(1 + p * s), ctx(1 + p * t)
    assert iwasawa_log(u * v) == iwasawa_log(u) + iwasawa_log(v)


def test_gamma_index_examples():
    assert gamma_index(6, 2, 6, p=5) == 1
    assert gamma_index(7, 1, 6, p=5) == 0
    assert gamma_index(1, 2, p=5) == 0
    with pytest.raises(BadBase):
        gamma_index(3, 2, 26, p=5)
    with pytest.raises(NotUnit):
        gamma_index(10, 2, p=5)


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("n", [0, 1, 2])
def test_gamma_index_against_scan(p, n):
    M = p ** (n + 1)
    for base in (1 + p, 1 + 2 * p):
        for k in range(1, M, max(1, M // 97)):
            if k % p:
                assert gamma_index(k, n, base, p=p) == brute_gamma_index(k, p, n, base)


@pytest.mark.parametrize("p", [5, 7])
def test_gamma_index_is_a_homomorphism(p):
    n = 2
    M, L = p ** (n + 1), p**n
    units = [k for k in range(1, M) if k % p]
    table = gamma_index_table(p, n)
    for k in units[::7]:
        for kk in units[::11]:
            assert table[k * kk % M] == (table[k] + table[kk]) % L


@pytest.mark.parametrize("p", [5, 7, 11])
def test_log_ratio_agrees_with_gamma_index(p):
    n, N = 2, 6
    ctx = PadicCtx(p, N)
    log_base = iwasawa_log(ctx(1 + p)).value // p
    for k in range(2, 60):
        if k % p:
            lk = iwasawa_log(angle(ctx(k))).value
            assert lk % p == 0
            ratio = (lk // p) * pow(log_base, -1, p**n) % p**n
            assert ratio == gamma_index(k, n, p=p)


@pytest.mark.parametrize("p,n", [(5, 1), (7, 2), (11, 1)])
def test_class_matrix_partitions_units(p, n):
    K = class_matrix(p, n)
    values = sorted(int(v) for v in K.ravel())
    assert values == [k for k in range(1, p ** (n + 1)) if k % p]
    table = gamma_index_table(p, n)
    for i in range(p**n):
        assert all(table[int(k)] == i for k in K[i])
