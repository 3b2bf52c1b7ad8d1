"""Stickelberger elements, the Iwasawa series f(T, theta), G(T, theta) and g(T, chi).

The element v_n(theta) is

    v_n(theta) = -p^-(n+1) sum_{k < p^(n+1), p not | k} k theta omega^-1(k) gamma_n(k)

and f(T, theta) is obtained from it by T -> 1/(1+T) - 1 (group inversion).
The class sums are integer matrix products K @ W, where K[i, t] lists the
residues in class gamma^i and W[t, c] holds the character values, so every
even character of a prime is handled by one BLAS call.  All sums are taken
at working precision N + n + 1 and divided by p^(n+1) exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional

import numpy as np
from sympy import bernoulli, divisors, mobius, primerange
from sympy.abc import X
from sympy import Poly

from .characters import DeltaChar, DirichletChar, dirichlet_character
from .errors import (
    ClosedFormMismatch,
    InexactDivision,
    NeedsHigherPrecision,
    OutOfRange,
    PrecisionTooLow,
    UnsupportedCharacter,
)
from .iwasawa import IwasawaPoly, MuLambda
from .kernels import lucas_transform, matmul_mod
from .padic import (
    PadicCtx,
    PadicInt,
    class_matrix,
    gamma_index_of,
    gamma_index_table,
    teichmuller_int,
    teichmuller_table,
    valuation,
)
from .series import mirimanoff_poly, primitive_sum


# -- Stickelberger class sums ------------------------------------------------

def _character_matrix(p: int, exponents: Iterable[int], W: int) -> np.ndarray:
    """C[t-1, c] = omega(t)^e_c mod p^W."""
    M = p**W
    teich = teichmuller_table(p, W)[1:]
    cols = [[pow(w, e % (p - 1), M) for w in teich] for e in exponents]
    dtype = np.int64 if M < (1 << 31) else object
    return np.array(cols, dtype=object).T.astype(dtype)


def stickelberger_sums(p: int, n: int, js: Iterable[int], W: int) -> np.ndarray:
    """S[i, c] = sum over k in class i of k omega^(j_c - 1)(k), mod p^W.

    k runs through integers 1..p^(n+1)-1 prime to p; column c is theta = omega^j_c.
    """
    js = list(js)
    K = class_matrix(p, n)
    C = _character_matrix(p, [j - 1 for j in js], W)
    Kw = K if p**W < (1 << 31) else K.astype(object)
    return matmul_mod(Kw, C, p**W)


def _divide_sums(sums: np.ndarray, p: int, n: int, N: int) -> np.ndarray:
    q = p ** (n + 1)
    if np.any(sums % q):
        bad = np.argwhere(sums % q != 0)[0]
        raise InexactDivision(f"class sum at {tuple(int(b) for b in bad)} is not divisible by {p}^{n + 1}")
    return (-(sums // q)) % p**N


def v_element(theta: DeltaChar, n: int, N: Optional[int] = None) -> IwasawaPoly:
    """v_n(theta); for trivial theta the (1 - (1+p) gamma_0) multiple."""
    p = theta.p
    N = theta.ctx.N if N is None else N
    W = N + n + 1
    sums = stickelberger_sums(p, n, [theta.j], W)[:, 0]
    if theta.j == 0:
        M = p**W
        sums = (sums - (1 + p) * np.roll(sums, 1)) % M
    group = _divide_sums(sums, p, n, N)
    return IwasawaPoly(PadicCtx(p, N), n, group[:, None])


def w_element(theta: DeltaChar, n: int, N: Optional[int] = None) -> IwasawaPoly:
    """The division-free p^(n+1) v_n(theta) = -sum k theta omega^-1(k) gamma_n(k)."""
    p = theta.p
    N = theta.ctx.N if N is None else N
    sums = stickelberger_sums(p, n, [theta.j], N)[:, 0]
    return IwasawaPoly(PadicCtx(p, N), n, ((-sums) % p**N)[:, None])


@dataclass(frozen=True)
class LSeriesResult:
    poly: IwasawaPoly
    label: str
    n: int
    N: int
    working_precision: int
    odd: bool = False  # the series is zero by convention
    pole_factored: bool = False  # holds (1 - (1+p)/(1+T)) f for the trivial character

    def mu_lambda(self) -> MuLambda:
        return self.poly.mu_lambda()


def f_series(theta: DeltaChar, n: int, N: Optional[int] = None) -> LSeriesResult:
    N = theta.ctx.N if N is None else N
    label = f"omega^{theta.j}"
    if not theta.is_even():
        return LSeriesResult(IwasawaPoly.zero(PadicCtx(theta.p, N), n), label, n, N, N, odd=True)
    v = v_element(theta, n, N)
    return LSeriesResult(v.substitute(-1), label, n, N, N + n + 1,
                         pole_factored=theta.is_trivial())


# -- exact Bernoulli oracle --------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_poly_coeffs(m: int) -> tuple[Fraction, ...]:
    """Coefficients of the Bernoulli polynomial B_m(x), constant term first."""
    coeffs = Poly(bernoulli(m, X), X).all_coeffs()[::-1]
    return tuple(Fraction(int(c.p), int(c.q)) for c in coeffs)


def bernoulli_number(m: int) -> Fraction:
    """B_m with B_1 = -1/2."""
    return bernoulli_poly_coeffs(m)[0]


def _bernoulli_poly_at(m: int, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(bernoulli_poly_coeffs(m)):
        acc = acc * x + c
    return acc


def _reduce_rational(r: Fraction, p: int, N: int) -> int:
    if r.denominator % p == 0:
        raise InexactDivision(f"{r} is not p-integral")
    M = p**N
    return r.numerator * pow(r.denominator, -1, M) % M


@dataclass
class BernoulliOracle:
    """Generalised Bernoulli numbers B_{m, omega^k} evaluated p-adically.

    B_{m,chi} = f^(m-1) sum_{a=1}^{f} chi(a) B_m(a/f) with exact rational
    B_m(a/f); the Teichmuller values are taken at enough extra digits to
    absorb the powers of p in the denominators.
    """

    p: int
    cache: dict = field(default_factory=dict)

    def _pieces(self, m: int, conductor: int) -> list[Fraction]:
        key = (m, conductor)
        if key not in self.cache:
            f = conductor
            self.cache[key] = [Fraction(f) ** (m - 1) * _bernoulli_poly_at(m, Fraction(a, f))
                               for a in range(1, f + 1)]
        return self.cache[key]

    def generalized(self, m: int, k: int, N: int) -> tuple[int, int]:
        """B_{m, omega^k} as a pair (x, e) with B = x / p^e and x known mod p^(N+e)."""
        p = self.p
        k %= p - 1
        if k == 0:
            b = _bernoulli_poly_at(m, Fraction(1))
            e = valuation(b.denominator, p)
            return _reduce_rational(b * p**e, p, N + e), e
        pieces = self._pieces(m, p)
        e = max(valuation(r.denominator, p) for r in pieces if r)
        D = 1
        for r in pieces:
            D = D * r.denominator // gcd(D, r.denominator)
        M = p ** (N + e)
        total = 0
        for a, r in enumerate(pieces, start=1):
            if a % p == 0 or not r:
                continue
            chi = pow(teichmuller_int(a, p, N + e), k, M)
            total += chi * (r.numerator * (D // r.denominator))
        # total / D = (total / unit) / p^e, with e = v_p(D)
        unit = D // p**e
        return total * pow(unit, -1, M) % M, e

    def l_value(self, j: int, m: int, N: int) -> PadicInt:
        """L_p(1-m, omega^j) = -(1 - chi(p) p^(m-1)) B_{m,chi} / m, chi = omega^(j-m)."""
        p = self.p
        s = valuation(m, p)
        x, e = self.generalized(m, j - m, N + s)
        M = p ** (N + s + e)
        euler = 1 - p ** (m - 1) if (j - m) % (p - 1) == 0 else 1
        num = (-x * euler) % M
        if num % p ** (e + s):
            raise InexactDivision("L-value is not p-integral")
        value = (num // p ** (e + s)) * pow(m // p**s, -1, p**N) % p**N
        return PadicInt(PadicCtx(p, N), value)


def interpolation_check(theta: DeltaChar, m: int, n: int, N: int) -> bool:
    """f((1+p)^(1-m) - 1, theta) = L_p(1-m, theta), mod p^min(N, n+1).

    On the points m = 0 mod (p-1) the right side is -B_{m,theta}/m.
    """
    p = theta.p
    if not theta.is_even() or theta.is_trivial():
        raise OutOfRange("interpolation is checked for even nontrivial characters")
    if m < 1:
        raise OutOfRange(f"m must be >= 1, got {m}")
    K = min(N, n + 1)
    if K < 1:
        raise PrecisionTooLow("comparison modulus would be p^0")
    f = f_series(theta, n, N).poly
    t = pow(1 + p, 1 - m, p**N) - 1
    lhs = int(f.evaluate(t)) % p**K
    rhs = int(BernoulliOracle(p).l_value(theta.j, m, N)) % p**K
    return lhs == rhs


def irregular_indices(p: int) -> list[int]:
    """Even j in [2, p-3] with p dividing the numerator of B_j."""
    return [j for j in range(2, p - 2, 2) if bernoulli_number(j).numerator % p == 0]


# -- G(T, theta) ------------------------------------------------------------

def G_definitional(theta: DeltaChar, n: int, N: int) -> IwasawaPoly:
    """sum over alpha in mu_(p-1), alpha != 1, of (alpha - 1) M_n(theta, alpha)."""
    p = theta.p
    ctx = PadicCtx(p, N)
    total = IwasawaPoly.zero(ctx, n)
    for w in teichmuller_table(p, N)[2:]:
        total = total + mirimanoff_poly(theta, ctx(w), n, N).scale(w - 1)
    return total


def G_closed_form(theta: DeltaChar, n: int, N: int, upper: Optional[int] = None) -> IwasawaPoly:
    """(p-1) theta omega^-1(-1) gamma_n(p-1) sum_{l <= upper, p not | l} theta omega^-1(l) gamma_n(l).

    The default upper limit (p^(n+1) - 1)/(p - 1) is the range of l with
    (p-1) l < p^(n+1).
    """
    p = theta.p
    upper = (p ** (n + 1) - 1) // (p - 1) if upper is None else upper
    ctx = PadicCtx(p, N)
    M = ctx.modulus
    e = (theta.j - 1) % (p - 1)
    g = ctx.zeros(p**n)
    for ell in range(1, upper + 1):
        if ell % p:
            i = gamma_index_of(ell, p, n)
            g[i] = (g[i] + pow(teichmuller_int(ell, p, N), e, M)) % M
    sign = 1 if (theta.j - 1) % 2 == 0 else -1
    poly = IwasawaPoly(ctx, n, g) * IwasawaPoly.gamma(ctx, n, gamma_index_of(p - 1, p, n))
    return poly.scale((p - 1) * sign)


def G_series(theta: DeltaChar, n: int, N: Optional[int] = None) -> IwasawaPoly:
    N = theta.ctx.N if N is None else N
    if theta.j in (0, 1):
        raise OutOfRange("G is defined for theta different from 1 and omega")
    direct = G_definitional(theta, n, N)
    closed = G_closed_form(theta, n, N)
    if direct != closed:
        raise ClosedFormMismatch(f"G({theta}) at level {n}")
    return direct


# -- Mobius-twisted identity and the derivative sweep ---------------------------

def mobius_factor(theta: DeltaChar, d: int, n: int, N: int) -> IwasawaPoly:
    """sum_{l | d} l mu(d/l) theta omega^-1(l) gamma_n(l)."""
    p = theta.p
    ctx = PadicCtx(p, N)
    M = ctx.modulus
    e = (theta.j - 1) % (p - 1)
    g = ctx.zeros(p**n)
    for ell in divisors(d):
        mu = int(mobius(d // ell))
        if mu:
            i = gamma_index_of(ell, p, n)
            g[i] = (g[i] + ell * mu * pow(teichmuller_int(ell, p, N), e, M)) % M
    return IwasawaPoly(ctx, n, g)


def theorem5_sides(theta: DeltaChar, d: int, n: int, N: int) -> tuple[IwasawaPoly, IwasawaPoly]:
    """Both sides of the primitive-root identity, the left built from Mirimanoff series.

    For the trivial character both sides are multiplied by 1 - (1+p) gamma_0,
    the factor carried by the stored pole-factored series.
    """
    lhs = primitive_sum(theta, d, n, N)
    f = f_series(theta, n, N).poly
    rhs = -(f.substitute(-1) * mobius_factor(theta, d, n, N))
    if theta.is_trivial():
        ctx = lhs.ring
        lhs = lhs * (IwasawaPoly.constant(ctx, n, 1) - IwasawaPoly.gamma(ctx, n).scale(1 + theta.p))
    return lhs, rhs


def theorem5_check(theta: DeltaChar, d: int, n: int, N: Optional[int] = None) -> bool:
    N = theta.ctx.N if N is None else N
    lhs, rhs = theorem5_sides(theta, d, n, N)
    return lhs == rhs


@dataclass(frozen=True)
class Cor1Result:
    certified: bool
    witness: Optional[int]  # least i, p not | i, with c_i != 0 mod p
    reason: str

    def __bool__(self):
        return self.certified


def _cor1_from_coeffs(coeffs: np.ndarray, p: int) -> Cor1Result:
    idx = np.arange(coeffs.shape[0])
    nz = coeffs != 0
    hits = np.flatnonzero(nz & (idx % p != 0))
    if len(hits):
        return Cor1Result(True, int(hits[0]), "coefficient")
    first = np.flatnonzero(nz)
    if len(first) and first[0] >= 1 and first[0] % p:
        return Cor1Result(True, None, "lambda")
    raise NeedsHigherPrecision("f mod p is supported on p-th powers at this level")


def corollary1_check(theta: DeltaChar, n: int = 2) -> Cor1Result:
    """Certify f'(T, theta) != 0 mod p from f mod (p, omega_n)."""
    if not theta.is_even() or theta.is_trivial():
        raise OutOfRange("needs an even nontrivial character")
    f = f_series(theta, n, 1).poly
    return _cor1_from_coeffs(f.monomial_mod_p()[:, 0], theta.p)


def f_mod_p_batch(p: int, n: int, js: list[int]) -> np.ndarray:
    """Monomial coefficients mod p of f(T, omega^j) at level n, one column per j."""
    L = p**n
    sums = stickelberger_sums(p, n, js, n + 2)
    v = _divide_sums(sums, p, n, 1)
    f = v[(-np.arange(L)) % L]
    return lucas_transform(f, p, n)


def corollary1_sweep(p: int, n: int = 2) -> dict[int, Cor1Result]:
    js = list(range(2, p - 2, 2))
    if not js:
        return {}
    coeffs = f_mod_p_batch(p, n, js)
    return {j: _cor1_from_coeffs(coeffs[:, c], p) for c, j in enumerate(js)}


@dataclass(frozen=True)
class LambdaRow:
    p: int
    j: int
    mu: int
    lam: Optional[int]
    fprime_nonzero: Optional[bool]


def lambda_rows(p: int, n: int = 2) -> list[LambdaRow]:
    """mu, lambda and the f' flag for every even nontrivial omega^j."""
    js = list(range(2, p - 2, 2))
    if not js:
        return []
    coeffs = f_mod_p_batch(p, n, js)
    rows = []
    idx = np.arange(p**n)
    for c, j in enumerate(js):
        col = coeffs[:, c]
        nz = np.flatnonzero(col)
        if len(nz):
            mu, lam = 0, int(nz[0])
            fprime = bool(np.any((col != 0) & (idx % p != 0)))
        else:
            # f = 0 mod p: retry at higher precision for an honest report
            mu, lam = f_series(DeltaChar(PadicCtx(p, 3), j), n, 3).mu_lambda()
            fprime = None
        rows.append(LambdaRow(p, j, mu, lam, fprime))
    return rows


def lambda_table(primes: Iterable[int], n: int = 2) -> list[LambdaRow]:
    out = []
    for p in primes:
        out.extend(lambda_rows(int(p), n))
    return out


def primes_between(lo: int, hi: int) -> list[int]:
    return [int(q) for q in primerange(max(lo, 5), hi + 1)]


# -- the series g(T, chi) -----------------------------------------------------

def B_fractional(y, q0: int, N: int, p: Optional[int] = None) -> PadicInt:
    """B(y) = (1+q0){y} - {(1+q0) y} - q0/2 in Z/p^N."""
    y = Fraction(y)
    if p is None:
        raise TypeError("the prime p is required")

    def frac(x: Fraction) -> Fraction:
        return x - (x.numerator // x.denominator)

    value = (1 + q0) * frac(y) - frac((1 + q0) * y) - Fraction(q0, 2)
    return PadicInt(PadicCtx(p, N), _reduce_rational(value, p, N))


def g_series(chi: DirichletChar, n: int, N: Optional[int] = None) -> LSeriesResult:
    """g(T, chi) from the fractional-part sum over a < q_n = p^(n+1) d."""
    p, d = chi.p, chi.d
    N = chi.ring.N if N is None else N
    if chi.ring.N != N:
        chi = dirichlet_character(p, d, chi.psi, chi.j, N)
    if not chi.is_even():
        raise UnsupportedCharacter("g is defined for even characters")
    ring = chi.ring
    M = ring.modulus
    q0 = p * d
    qn = p ** (n + 1) * d
    a = np.arange(1, qn + 1, dtype=np.int64)
    a = a[np.gcd(a, q0) == 1]
    # B(a/q_n) = floor((1+q0) a / q_n) - q0/2
    B = ((2 * (((1 + q0) * a) // qn) - q0) % M) * pow(2, -1, M) % M
    inv_teich = np.array([0] + [pow(w, -1, M) for w in teichmuller_table(p, N)[1:]], dtype=np.int64)
    twisted = ring.mul(chi.values, inv_teich[np.arange(q0) % p][:, None] if ring.dtype != object
                       else inv_teich[np.arange(q0) % p][:, None].astype(object))
    gamma = gamma_index_table(p, n, 1 + q0)
    expo = (-gamma[a % p ** (n + 1)] - 1) % p**n
    vals = ring.mul(twisted[a % q0], B[:, None].astype(ring.dtype))
    group = ring.zeros(p**n)
    np.add.at(group, expo, vals)
    poly = IwasawaPoly(ring, n, group % M)
    return LSeriesResult(poly, repr(chi), n, N, N)


@dataclass(frozen=True)
class Theorem6Result:
    g_nonzero: bool
    gprime_nonzero: bool
    cross_identity: Optional[bool]  # only checked for d = 1
    witness: Optional[int]

    def __bool__(self):
        return self.g_nonzero and self.gprime_nonzero and self.cross_identity is not False


def g_cross_identity(chi: DirichletChar, n: int, N: int) -> bool:
    """(1+T) g = (T - q0) f for d = 1; for the trivial character g equals the stored series."""
    if chi.d != 1:
        raise OutOfRange("the cross-identity compares with f, so it needs d = 1")
    g = g_series(chi, n, N).poly
    ring = g.ring
    f = f_series(DeltaChar(PadicCtx(chi.p, N), chi.j), n, N)
    fw = f.poly.embed(ring)
    if f.pole_factored:
        return g == fw
    one_plus_T = IwasawaPoly.gamma(ring, n)
    T_minus_q0 = one_plus_T - (1 + chi.p)
    return one_plus_T * g == T_minus_q0 * fw


def theorem6_check(chi: DirichletChar, n: int = 2, N: int = 2) -> Theorem6Result:
    g = g_series(chi, n, N).poly
    nonzero = not g.is_zero_mod_p()
    witness = g.derivative_support_mod_p()
    cross = g_cross_identity(chi, n, N) if chi.d == 1 else None
    return Theorem6Result(nonzero, witness is not None, cross, witness)
