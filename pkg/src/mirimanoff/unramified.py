"""Truncated unramified extensions W = (Z/p^N)[x]/(h(x)).

The defining polynomial is the minimal polynomial of a Teichmuller root of
unity, so in every context built by :func:`make_splitting_ctx` the
generator x satisfies x^(q-1) = 1 exactly and Frobenius is x -> x^p.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import cyclotomic_poly, n_order, primefactors, totient
from sympy.abc import X
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf

from .errors import BadD, NotRational, NotUnit
from .kernels import as_residues, dtype_for
from .padic import PadicCtx, PadicInt, teichmuller_int


@dataclass(frozen=True)
class UnramCtx:
    base: PadicCtx
    h: tuple[int, ...]  # monic, constant term first, length m + 1
    d: int = 1  # x is a primitive d-th root of unity

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def N(self) -> int:
        return self.base.N

    @property
    def modulus(self) -> int:
        return self.base.modulus

    @property
    def degree(self) -> int:
        return len(self.h) - 1

    @property
    def q(self) -> int:
        return self.p**self.degree

    @property
    def dtype(self):
        return dtype_for(self.modulus)

    def __call__(self, value) -> "UnramElem":
        return UnramElem(self, tuple(int(v) for v in self.to_array(value)))

    def with_precision(self, N: int) -> "UnramCtx":
        return make_splitting_ctx(self.p, N, self.d)

    def gen(self) -> "UnramElem":
        if self.degree == 1:
            return self(-self.h[0])
        return UnramElem(self, (0, 1) + (0,) * (self.degree - 2))

    # -- coefficient-ring protocol

    def zeros(self, *shape) -> np.ndarray:
        return np.zeros(shape + (self.degree,), dtype=self.dtype)

    def to_array(self, x) -> np.ndarray:
        if isinstance(x, UnramElem):
            if x.ctx != self:
                raise ValueError("element belongs to a different extension")
            return as_residues(x.coeffs, self.modulus)
        if isinstance(x, PadicInt):
            x = x.value
        out = [int(x)] + [0] * (self.degree - 1)
        return as_residues(out, self.modulus)

    def element(self, arr) -> "UnramElem":
        return UnramElem(self, tuple(int(v) for v in np.asarray(arr).reshape(-1)))

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        m, M = self.degree, self.modulus
        if m == 1:
            return (a * b) % M
        a, b = np.broadcast_arrays(a, b)
        prod = np.zeros(a.shape[:-1] + (2 * m - 1,), dtype=a.dtype)
        for u in range(m):
            for v in range(m):
                prod[..., u + v] = (prod[..., u + v] + a[..., u] * b[..., v]) % M
        return self.reduce_wide(prod)

    def reduce_wide(self, prod: np.ndarray) -> np.ndarray:
        """Reduce arrays of 2m-1 coefficients (..., 2m-1) modulo h."""
        m, M = self.degree, self.modulus
        prod = prod.copy()
        h = self.h
        for k in range(prod.shape[-1] - 1, m - 1, -1):
            top = prod[..., k]
            for i in range(m):
                if h[i]:
                    prod[..., k - m + i] = (prod[..., k - m + i] - top * h[i]) % M
        return prod[..., :m]

    def pow(self, a: np.ndarray, e: int) -> np.ndarray:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.to_array(1)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_unit(self, a: np.ndarray) -> bool:
        # Units are the elements that are nonzero in the residue field.
        return bool(np.any(np.asarray(a) % self.p))

    def inv(self, a: np.ndarray) -> np.ndarray:
        if not self.is_unit(a):
            raise NotUnit("element vanishes mod p")
        one = self.to_array(1)
        # a^(q-2) inverts a modulo p; Newton steps then double the precision.
        y = self.pow(a, self.q - 2)
        for _ in range(2 * self.N.bit_length() + 4):
            ay = self.mul(a, y)
            if np.array_equal(ay, one):
                return y
            y = self.mul(y, (2 * one - ay) % self.modulus)
        raise AssertionError("Newton inversion did not converge")

    def reduce_mod_p(self, a: np.ndarray) -> np.ndarray:
        return a % self.p


@dataclass(frozen=True)
class UnramElem:
    ctx: UnramCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        M = self.ctx.modulus
        if len(self.coeffs) != self.ctx.degree:
            raise ValueError("coefficient vector has the wrong length")
        object.__setattr__(self, "coeffs", tuple(int(c) % M for c in self.coeffs))

    @property
    def array(self) -> np.ndarray:
        return self.ctx.to_array(self)

    def _other(self, other) -> np.ndarray:
        return self.ctx.to_array(other)

    def __add__(self, other):
        return self.ctx.element((self.array + self._other(other)) % self.ctx.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return self.ctx.element((self.array - self._other(other)) % self.ctx.modulus)

    def __rsub__(self, other):
        return self.ctx.element((self._other(other) - self.array) % self.ctx.modulus)

    def __neg__(self):
        return self.ctx.element((-self.array) % self.ctx.modulus)

    def __mul__(self, other):
        return self.ctx.element(self.ctx.mul(self.array, self._other(other)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return self.ctx.element(self.ctx.pow(self.array, e))

    def inverse(self) -> "UnramElem":
        return self.ctx.element(self.ctx.inv(self.array))

    def is_unit(self) -> bool:
        return self.ctx.is_unit(self.array)

    def __eq__(self, other):
        if isinstance(other, UnramElem):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        if isinstance(other, (int, PadicInt)):
            return self.coeffs == tuple(int(v) for v in self.ctx.to_array(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"

    def to_base(self) -> PadicInt:
        if any(self.coeffs[1:]):
            raise NotRational(f"{self!r} is not in Z/p^N")
        return PadicInt(self.ctx.base, self.coeffs[0])


def _poly_mul_over(ctx: UnramCtx, f: list, g: list) -> list:
    out = [ctx.zeros() for _ in range(len(f) + len(g) - 1)]
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + ctx.mul(a, b)) % ctx.modulus
    return out


def _residue_factor(p: int, d: int) -> list[int]:
    """Smallest irreducible factor of Phi_d mod p, coefficients high -> low."""
    phi = [int(c) % p for c in cyclotomic_poly(d, X, polys=True).all_coeffs()]
    factors = gf_factor_sqf(phi, p, ZZ)[1] if len(phi) > 2 else [phi]
    return min(factors, key=lambda f: (len(f), f))


@lru_cache(maxsize=None)
def make_splitting_ctx(p: int, N: int, d: int) -> UnramCtx:
    """Degree ord_d(p) extension in which x is a primitive d-th root of unity."""
    if d < 1 or gcd(d, p) != 1:
        raise BadD(f"d={d} must be a positive integer prime to {p}")
    base = PadicCtx(p, N)
    m = 1 if d <= 2 else int(n_order(p, d))
    if m == 1:
        r = next(r for r in range(1, p) if pow(r, d, p) == 1
                 and all(pow(r, d // s, p) != 1 for s in primefactors(d)))
        return UnramCtx(base, (-teichmuller_int(r, p, N) % base.modulus, 1), d)
    hbar = _residue_factor(p, d)[::-1]
    naive = UnramCtx(base, tuple(hbar), d)
    rho = teichmuller_lift(naive.gen())
    conj = [rho]
    for _ in range(m - 1):
        conj.append(conj[-1] ** p)
    poly = [naive.to_array(1)]
    for c in conj:
        poly = _poly_mul_over(naive, poly, [(-c.array) % base.modulus, naive.to_array(1)])
    h = []
    for coeff in poly:
        if np.any(coeff[1:]):
            raise NotRational("Teichmuller minimal polynomial left the base ring")
        h.append(int(coeff[0]))
    return UnramCtx(base, tuple(h), d)


def teichmuller_lift(e: UnramElem) -> UnramElem:
    """The (q-1)-th root of unity congruent to e mod p (fixpoint of x -> x^q)."""
    if not e.is_unit():
        raise NotUnit("Teichmuller lift of a non-unit")
    q = e.ctx.q
    x = e
    for _ in range(e.ctx.N + 1):
        y = x**q
        if y == x:
            return x
        x = y
    raise AssertionError("Teichmuller iteration failed to stabilise")


def _generator(ctx: UnramCtx) -> UnramElem:
    q, p, m = ctx.q, ctx.p, ctx.degree
    primes = primefactors(q - 1)
    for code in range(1, q):
        digits = [(code // p**i) % p for i in range(m)]
        e = ctx.element(digits)
        if all(np.any(ctx.pow(e.array, (q - 1) // r) % p != ctx.to_array(1) % p)
               for r in primes):
            return teichmuller_lift(e)
    raise AssertionError("no generator of the residue field found")


def roots_of_unity(ctx: UnramCtx, d: int) -> list[UnramElem]:
    """All primitive d-th roots of unity in W."""
    q = ctx.q
    if d < 1 or (q - 1) % d:
        raise BadD(f"{d} does not divide q - 1 = {q - 1}")
    if ctx.d % d == 0:
        g, order = ctx.gen(), ctx.d
    else:
        g, order = _generator(ctx), q - 1
    step = order // d
    out = [g ** (k * step) for k in range(1, d + 1) if gcd(k, d) == 1]
    assert len(out) == int(totient(d))
    return out


def frobenius(e: UnramElem) -> UnramElem:
    """The lift of x -> x^p; with a Teichmuller generator it is e(x) -> e(x^p)."""
    ctx = e.ctx
    if ctx.degree == 1:
        return e
    xp = ctx.gen() ** ctx.p
    out = ctx(0)
    power = ctx(1)
    for c in e.coeffs:
        out = out + power * c
        power = power * xp
    return out


def trace_to_base(e: UnramElem) -> PadicInt:
    total = e
    conj = e
    for _ in range(e.ctx.degree - 1):
        conj = frobenius(conj)
        total = total + conj
    return total.to_base()
