"""Brute-force model of Z_p[zeta_P]/p^N, P = p^(n+1), and exact traces over Q(zeta_l).

Elements of O = (Z/p^N)[x]/(Phi_P(x)) are coefficient vectors of length
D = (p-1)p^n.  Products are cyclic convolutions of length P (x^P = 1 holds
in O) followed by the reduction x^D = -(1 + x^(p^n) + ... + x^((p-2)p^n)).
The Galois element sigma(a) is the exponent map x^e -> x^(ae mod P).

Nothing here goes through the group-ring code except :func:`apply`, which
lets an IwasawaPoly act through sigma(1+p); that is what makes the checks
below an independent cross-validation of the Lambda-side constructions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from sympy import Poly, QQ, legendre_symbol, n_order, nextprime
from sympy.abc import X
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcdex
from sympy.polys.matrices import DomainMatrix

from .characters import DeltaChar
from .errors import BadAlpha, BadEll, NotFound, NotUnit
from .iwasawa import IwasawaPoly
from .kernels import cyclic_convolve
from .lfunction import G_series, w_element
from .padic import PadicCtx, PadicInt, teichmuller_table
from .series import mirimanoff_poly, u_series


@dataclass(frozen=True)
class CycloCtx:
    p: int
    n: int
    N: int

    @property
    def P(self) -> int:
        return self.p ** (self.n + 1)

    @property
    def degree(self) -> int:
        return (self.p - 1) * self.p**self.n

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def element(self, coeffs) -> "CycloElem":
        arr = np.zeros(self.degree, dtype=np.int64)
        coeffs = np.asarray(coeffs, dtype=object).ravel()
        arr[: len(coeffs)] = [int(c) % self.modulus for c in coeffs]
        return CycloElem(self, arr)

    def scalar(self, c) -> "CycloElem":
        return self.element([int(c)])

    def zero(self) -> "CycloElem":
        return self.element([])

    def one(self) -> "CycloElem":
        return self.scalar(1)

    def zeta(self) -> "CycloElem":
        return self.monomial(1)

    def monomial(self, e: int, c: int = 1) -> "CycloElem":
        wide = np.zeros(self.P, dtype=np.int64)
        wide[e % self.P] = c % self.modulus
        return CycloElem(self, self.reduce(wide))

    def reduce(self, wide: np.ndarray) -> np.ndarray:
        """Reduce a length-P vector (a residue mod x^P - 1) modulo Phi_P."""
        D = self.degree
        tail = np.tile(wide[D:], self.p - 1)
        return (wide[:D] - tail) % self.modulus

    def _widen(self, arr: np.ndarray) -> np.ndarray:
        wide = np.zeros(self.P, dtype=np.int64)
        wide[: self.degree] = arr
        return wide


@dataclass(frozen=True, eq=False)
class CycloElem:
    ctx: CycloCtx
    coeffs: np.ndarray

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, CycloElem):
            if other.ctx != self.ctx:
                raise ValueError("elements live in different rings")
            return other.coeffs
        if isinstance(other, PadicInt):
            other = other.value
        return self.ctx.scalar(int(other)).coeffs

    def __add__(self, other):
        return CycloElem(self.ctx, (self.coeffs + self._coerce(other)) % self.ctx.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return CycloElem(self.ctx, (self.coeffs - self._coerce(other)) % self.ctx.modulus)

    def __rsub__(self, other):
        return CycloElem(self.ctx, (self._coerce(other) - self.coeffs) % self.ctx.modulus)

    def __neg__(self):
        return CycloElem(self.ctx, (-self.coeffs) % self.ctx.modulus)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, PadicInt)):
            c = int(other) % self.ctx.modulus
            return CycloElem(self.ctx, (self.coeffs * c) % self.ctx.modulus)
        ctx = self.ctx
        wide = cyclic_convolve(ctx._widen(self.coeffs), ctx._widen(self._coerce(other)), ctx.modulus)
        return CycloElem(ctx, ctx.reduce(np.asarray(wide, dtype=np.int64)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, CycloElem):
            other = CycloElem(self.ctx, self._coerce(other))
        return self.ctx == other.ctx and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        terms = [f"{c}*x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"

    def is_zero_mod(self, modulus: int) -> bool:
        return not np.any(self.coeffs % modulus)

    def is_unit(self) -> bool:
        # The residue ring is F_p[x]/(x-1)^D, so units are the elements with
        # nonzero value at x = 1.
        return int(self.coeffs.sum()) % self.ctx.p != 0

    def inverse(self) -> "CycloElem":
        """Inverse mod p by the extended Euclidean algorithm, then Newton lifting."""
        ctx = self.ctx
        if not self.is_unit():
            raise NotUnit("element is not a unit of the cyclotomic ring")
        p = ctx.p
        f = [int(c) % p for c in self.coeffs[::-1]]
        phi = [1 if k % ctx.p**ctx.n == 0 else 0 for k in range(ctx.degree + 1)]
        s, _, g = gf_gcdex(_strip(f), phi, p, ZZ)
        if g != [1]:
            raise NotUnit("gcd with the cyclotomic polynomial is not 1")
        y = ctx.element([int(c) for c in s[::-1]])
        precision = 1
        while precision < ctx.N:
            y = y * (2 - self * y)
            precision *= 2
        assert self * y == ctx.one()
        return y


def _strip(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    return coeffs


# -- Galois action -------------------------------------------------------------

def galois(a: int, e: CycloElem) -> CycloElem:
    """sigma(a): x -> x^a."""
    ctx = e.ctx
    if a % ctx.p == 0:
        raise NotUnit(f"{a} is divisible by {ctx.p}")
    wide = np.zeros(ctx.P, dtype=np.int64)
    idx = (np.arange(ctx.degree) * (a % ctx.P)) % ctx.P
    wide[idx] = e.coeffs  # the exponent map is injective on [0, P)
    return CycloElem(ctx, ctx.reduce(wide))


def apply(poly: IwasawaPoly, e: CycloElem) -> CycloElem:
    """sum_i g_i sigma((1+p)^i)(e) for poly = sum_i g_i gamma^i."""
    ctx = e.ctx
    if poly.p != ctx.p or poly.n != ctx.n:
        raise ValueError("group ring and cyclotomic level disagree")
    if poly.ring.degree != 1:
        poly = poly.coerce_to_base()
    coeffs = [int(c) for c in poly.to_group_ring()[:, 0]]
    out = ctx.zero()
    u = 1
    for c in coeffs:
        if c % ctx.modulus:
            out = out + galois(u, e) * c
        u = u * (1 + ctx.p) % ctx.P
    return out


def apply_full(weights: dict[int, int], e: CycloElem) -> CycloElem:
    """sum_k w_k sigma(k)(e), an element of Z_p[Gamma_n x Delta] acting on e."""
    out = e.ctx.zero()
    for k, w in weights.items():
        if w % e.ctx.modulus:
            out = out + galois(k, e) * w
    return out


def t_element(ctx: CycloCtx) -> CycloElem:
    """T_n = zeta_p + zeta_(p^2) + ... + zeta_(p^(n+1))."""
    out = ctx.zero()
    for d in range(ctx.n + 1):
        out = out + ctx.monomial(ctx.p ** (ctx.n - d))
    return out


def galois_trace(e: CycloElem) -> int:
    """Tr to Z/p^N, summing all Galois conjugates."""
    ctx = e.ctx
    total = ctx.zero()
    for a in range(1, ctx.P):
        if a % ctx.p:
            total = total + galois(a, e)
    return int(total.coeffs[0])


@dataclass(frozen=True)
class NormalBasisResult:
    independent: bool  # the translates are linearly independent over Q_p
    det_valuation: Optional[int]  # p-adic valuation of their determinant

    def __bool__(self):
        return self.independent


def normal_basis_check(e: CycloElem) -> NormalBasisResult:
    """Independence of the Galois translates of e, read off their integer determinant.

    Coefficients are lifted to the symmetric range, so the test is exact for
    elements with small integer coefficients such as T_n.
    """
    ctx = e.ctx
    M = ctx.modulus
    rows = []
    for a in range(1, ctx.P):
        if a % ctx.p:
            rows.append([ZZ(int(c) - M if c > M // 2 else int(c)) for c in galois(a, e).coeffs])
    det = int(DomainMatrix(rows, (len(rows), ctx.degree), ZZ).det())
    if det == 0:
        return NormalBasisResult(False, None)
    v = 0
    while det % ctx.p == 0:
        det //= ctx.p
        v += 1
    return NormalBasisResult(True, v)


# -- idempotents and closed-form logarithmic derivatives -------------------------

def e_theta_apply(theta: DeltaChar, e: CycloElem) -> CycloElem:
    """(p-1)^-1 sum_a theta^-1(a) sigma(omega(a))(e)."""
    ctx = e.ctx
    p, M = ctx.p, ctx.modulus
    teich_N = teichmuller_table(p, ctx.N)
    teich_P = teichmuller_table(p, ctx.n + 1)
    out = ctx.zero()
    inv_exp = (-theta.j) % (p - 1)
    for a in range(1, p):
        weight = pow(teich_N[a], inv_exp, M)
        out = out + galois(teich_P[a], e) * weight
    return out * pow(p - 1, -1, M)


def _alpha_residue(alpha, ctx: CycloCtx) -> int:
    a = alpha.value if isinstance(alpha, PadicInt) else int(alpha)
    if a % ctx.p == 1 % ctx.p or a % ctx.p == 0:
        raise BadAlpha(f"alpha = {a} must be a unit different from 1 mod {ctx.p}")
    return a % ctx.modulus


def d_rho(alpha, ctx: CycloCtx) -> CycloElem:
    """-x (alpha - x)^-1, the logarithmic derivative of (alpha - zeta)."""
    a = _alpha_residue(alpha, ctx)
    return -ctx.zeta() * (ctx.scalar(a) - ctx.zeta()).inverse()


def teichmuller_alphas(ctx: CycloCtx) -> list[int]:
    """The (p-1)-th roots of unity other than 1, as residues mod p^N."""
    return [w for w in teichmuller_table(ctx.p, ctx.N)[2:]]


# -- identities -----------------------------------------------------------------

def inv_pi_identity(ctx: CycloCtx) -> bool:
    """(x - 1) sum_{k < P} k x^k = P, the multiplied form of 1/(zeta - 1)."""
    s = ctx.zero()
    for k in range(1, ctx.P):
        s = s + ctx.monomial(k, k)
    return (ctx.zeta() - 1) * s == ctx.scalar(ctx.P)


def u_full(alpha: int, ctx: CycloCtx) -> dict[int, int]:
    """u_n(alpha) = sum_{p not | k < P} alpha^k sigma(k) as a weight table."""
    M = ctx.modulus
    return {k: pow(alpha, k, M) for k in range(1, ctx.P) if k % ctx.p}


def thm1_tn_identity(alpha, ctx: CycloCtx) -> bool:
    """(alpha x - 1)(u_n(alpha)(T_n) + 1) = alpha - 1."""
    a = _alpha_residue(alpha, ctx)
    image = apply_full(u_full(a, ctx), t_element(ctx))
    return (ctx.zeta() * a - 1) * (image + 1) == ctx.scalar(a - 1)


def restriction_compatible(alpha, ctx: CycloCtx) -> bool:
    """u_(n+1)(alpha) and u_n(alpha) act identically on elements of level n."""
    a = _alpha_residue(alpha, ctx)
    upper = CycloCtx(ctx.p, ctx.n + 1, ctx.N)
    t = t_element(ctx)
    lifted = _lift(t, upper)
    lhs = apply_full(u_full(a, upper), lifted)
    return lhs == _lift(apply_full(u_full(a, ctx), t), upper)


def _lift(e: CycloElem, upper: CycloCtx) -> CycloElem:
    """Embed level n into level n+1 through zeta_P -> zeta_(pP)^p."""
    out = upper.zero()
    for k, c in enumerate(e.coeffs):
        if c:
            out = out + upper.monomial(upper.p * k, int(c))
    return out


def d_rho_bridge(theta: DeltaChar, alpha, ctx: CycloCtx) -> bool:
    """e_(theta omega^-1) d_rho(alpha) = (alpha^-1 - 1)^-1 u_n(theta, alpha^-1) e_(theta omega^-1) T_n."""
    a = _alpha_residue(alpha, ctx)
    M = ctx.modulus
    twist = theta.with_precision(ctx.N).twist_omega_inv()
    lhs = e_theta_apply(twist, d_rho(a, ctx))
    a_inv = pow(a, -1, M)
    u = u_series(theta.with_precision(ctx.N), a_inv, ctx.n, ctx.N)
    rhs = apply(u, e_theta_apply(twist, t_element(ctx))) * pow(a_inv - 1, -1, M)
    return lhs == rhs


def stickelberger_projection_check(theta: DeltaChar, ctx: CycloCtx) -> bool:
    """e_(theta omega^-1)(sum_k k x^k) = -w_n(theta) e_(theta omega^-1) T_n."""
    theta = theta.with_precision(ctx.N)
    twist = theta.twist_omega_inv()
    s = ctx.zero()
    for k in range(1, ctx.P):
        s = s + ctx.monomial(k, k)
    lhs = e_theta_apply(twist, s)
    rhs = -apply(w_element(theta, ctx.n, ctx.N), e_theta_apply(twist, t_element(ctx)))
    return lhs == rhs


@dataclass(frozen=True)
class Lemma1Result:
    kernel: bool  # ((1+p)^(p^n) sigma((1+p)^(p^n)) - 1) D = 0 mod p^min(N, n+1)
    sigma_rule: bool  # D(u^sigma(a)) = a sigma(a) D(u)
    equivariance: bool  # D(u^e_theta) = e_(theta omega^-1) D(u) for every theta

    def __bool__(self):
        return self.kernel and self.sigma_rule and self.equivariance


def _d_rho_power(alpha: int, a: int, ctx: CycloCtx) -> CycloElem:
    """Closed form -a x^a (alpha - x^a)^-1, the derivative of alpha - zeta^a.

    ``a`` is read mod P in the exponent and mod p^N as a scalar, so pass it
    at precision max(N, n+1).
    """
    xa = ctx.zeta() ** (a % ctx.P)
    return -(xa * a) * (ctx.scalar(alpha) - xa).inverse()


def lemma1_check(alpha, a: int, ctx: CycloCtx) -> Lemma1Result:
    al = _alpha_residue(alpha, ctx)
    if a % ctx.p == 0:
        raise NotUnit(f"{a} is divisible by {ctx.p}")
    p, M = ctx.p, ctx.modulus
    D = d_rho(al, ctx)
    g = pow(1 + p, p**ctx.n)
    kernel = (galois(g, D) * g - D).is_zero_mod(p ** min(ctx.N, ctx.n + 1))
    sigma_rule = _d_rho_power(al, a, ctx) == galois(a, D) * a
    wide = teichmuller_table(p, max(ctx.N, ctx.n + 1))
    conj = [_d_rho_power(al, wide[b], ctx) for b in range(1, p)]
    base = PadicCtx(p, ctx.N)
    equivariance = True
    for j in range(p - 1):
        lhs = ctx.zero()
        for b, term in enumerate(conj, start=1):
            lhs = lhs + term * pow(wide[b], (-j) % (p - 1), M)
        lhs = lhs * pow(p - 1, -1, M)
        equivariance &= lhs == e_theta_apply(DeltaChar(base, j - 1), D)
    return Lemma1Result(kernel, sigma_rule, bool(equivariance))


def d_eta(ctx: CycloCtx) -> CycloElem:
    """sum over beta != 1 of (beta^-1 - 1) d_rho(beta)."""
    M = ctx.modulus
    out = ctx.zero()
    for beta in teichmuller_alphas(ctx):
        out = out + d_rho(beta, ctx) * (pow(beta, -1, M) - 1)
    return out


def theorem4_dn_check(theta: DeltaChar, alpha, ctx: CycloCtx) -> bool:
    """G_n e d_rho(alpha) = M_n(theta, alpha^-1) e D_eta, with e = e_(theta omega^-1)."""
    a = _alpha_residue(alpha, ctx)
    theta = theta.with_precision(ctx.N)
    twist = theta.twist_omega_inv()
    G = G_series(theta, ctx.n, ctx.N)
    M_poly = mirimanoff_poly(theta, pow(a, -1, ctx.modulus), ctx.n, ctx.N)
    lhs = apply(G, e_theta_apply(twist, d_rho(a, ctx)))
    rhs = apply(M_poly, e_theta_apply(twist, d_eta(ctx)))
    return lhs == rhs


# -- exact traces over Q(zeta_l) -------------------------------------------------

@dataclass(frozen=True)
class ExactCycloCtx:
    """Q[x]/(Phi_l(x)) with exact rational coefficients."""

    ell: int

    @property
    def modulus(self) -> Poly:
        return Poly([1] * self.ell, X, domain=QQ)

    def poly(self, exponents: dict[int, int]) -> Poly:
        deg = max(exponents)
        coeffs = [0] * (deg + 1)
        for e, c in exponents.items():
            coeffs[deg - e] += c
        return Poly(coeffs, X, domain=QQ).rem(self.modulus)

    def inverse(self, f: Poly) -> Poly:
        return f.invert(self.modulus)

    def mul(self, f: Poly, g: Poly) -> Poly:
        return (f * g).rem(self.modulus)

    def trace(self, f: Poly) -> Fraction:
        """Tr to Q: Tr(1) = l - 1 and Tr(x^k) = -1 for 0 < k < l - 1."""
        coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(f.all_coeffs())]
        return coeffs[0] * self.ell - sum(coeffs, Fraction(0))


def _check_ell(ell: int, p: int) -> None:
    if ell == p:
        raise BadEll(f"l must differ from p = {p}")
    if ell < 5:
        raise BadEll(f"l = {ell} is below the supported range")


def trace_inv_pi(ell: int, power: int = 1) -> Fraction:
    """Tr(1/(zeta_l - 1)^power), computed exactly."""
    ctx = ExactCycloCtx(ell)
    inv = ctx.inverse(ctx.poly({1: 1, 0: -1}))
    out = ctx.poly({0: 1})
    for _ in range(power):
        out = ctx.mul(out, inv)
    return ctx.trace(out)


def lemma5_exact(ell: int, p: int) -> Fraction:
    """Tr((zeta^(p+1) + zeta^(p-1)) / (zeta^p - 1)^2) over Q(zeta_l)."""
    _check_ell(ell, p)
    ctx = ExactCycloCtx(ell)
    inv = ctx.inverse(ctx.poly({p % ell: 1, 0: -1}))
    num = ctx.poly({(p + 1) % ell: 1, (p - 1) % ell: 1})
    return ctx.trace(ctx.mul(num, ctx.mul(inv, inv)))


def lemma5_closed(ell: int, p: int) -> Fraction:
    """-b^2 + b(l + 2) - (l^2 + 6l + 5)/6, b = (1 - p^(m-1)) mod l, m = ord_l(p)."""
    _check_ell(ell, p)
    m = int(n_order(p, ell))
    b = (1 - pow(p, m - 1, ell)) % ell
    return Fraction(-b * b + b * (ell + 2)) - Fraction(ell * ell + 6 * ell + 5, 6)


def square_flag(ell: int, p: int) -> bool:
    """Whether (l^2 + 2)/3 is a square mod p (0 counts as a square)."""
    r = (ell * ell + 2) * pow(3, -1, p) % p
    return r == 0 or legendre_symbol(r, p) == 1


@dataclass(frozen=True)
class TraceResult:
    ell: int
    p: int
    exact: Optional[Fraction]
    closed: Fraction
    square_flag: bool

    @property
    def matches(self) -> bool:
        return self.exact is None or self.exact == self.closed


def lemma5_trace(ell: int, p: int, exact: bool = True) -> TraceResult:
    """Exact trace, closed form and the square test; ``exact=False`` skips the trace."""
    value = lemma5_exact(ell, p) if exact else None
    return TraceResult(ell, p, value, lemma5_closed(ell, p), square_flag(ell, p))


@dataclass(frozen=True)
class AlphaClass:
    p: int
    alpha: int  # residue mod p
    primes: tuple[int, ...]  # confirming primes l = alpha mod p, l >= p^2
    traces: tuple[Fraction, ...]

    @property
    def confirmed(self) -> bool:
        return all(S.denominator == 1 and S.numerator % self.p for S in self.traces)


def non_square_classes(p: int) -> list[int]:
    """Residues alpha != 0, 1 with (alpha^2 + 2)/3 a non-square mod p."""
    inv3 = pow(3, -1, p)
    return [a for a in range(2, p)
            if (a * a + 2) * inv3 % p and legendre_symbol((a * a + 2) * inv3 % p, p) == -1]


def alpha_class_search(p: int, count: int = 10) -> AlphaClass:
    """Smallest class alpha forcing S != 0 mod p, confirmed on ``count`` primes via the closed form."""
    classes = non_square_classes(p)
    if not classes:
        raise NotFound(f"no admissible class mod {p}")
    alpha = classes[0]
    primes: list[int] = []
    ell = p * p
    while len(primes) < count:
        ell = int(nextprime(ell))
        if ell % p == alpha:
            primes.append(ell)
    traces = tuple(lemma5_closed(ell, p) for ell in primes)
    return AlphaClass(p, alpha, tuple(primes), traces)
