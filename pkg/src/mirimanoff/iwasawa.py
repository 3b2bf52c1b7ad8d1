"""The truncated Iwasawa algebra Lambda_{R,n,N} = R[T]/(p^N, omega_n(T)).

Elements are stored in the group-ring basis: ``group[i]`` is the coefficient
of (1+T)^i = gamma_0^i for 0 <= i < p^n.  Every sum in the theory is a sum of
group elements, so this basis makes multiplication a cyclic convolution,
restriction a fold and T -> (1+T)^c - 1 an exponent permutation.  The
monomial basis is computed on demand by the binomial (Pascal) transform.

Note that sum_{i<p^n} g_i (1+T)^i, read as an honest polynomial, is also the
canonical monomial representative of degree < p^n, so operations defined on
representatives (derivative, scale_shift, evaluation) are exact here too.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import NamedTuple, Optional

import numpy as np

from .errors import NotRational, NotUnit, OutOfRange, ZeroInput
from .kernels import (
    as_residues,
    cyclic_convolve,
    lucas_transform,
    matmul_mod,
    pascal_matrix,
)
from .padic import valuation


class MuLambda(NamedTuple):
    mu: int
    lam: Optional[int]  # None when the precision cannot certify lambda

    @property
    def resolved(self) -> bool:
        return self.lam is not None


@dataclass(frozen=True, eq=False)
class IwasawaPoly:
    ring: object  # PadicCtx or UnramCtx
    n: int
    group: np.ndarray  # shape (p^n, ring.degree)

    def __post_init__(self):
        L, m = self.p**self.n, self.ring.degree
        g = np.asarray(self.group)
        if g.shape != (L, m):
            raise ValueError(f"expected group array of shape {(L, m)}, got {g.shape}")
        g = g.astype(self.ring.dtype) % self.ring.modulus
        g.setflags(write=False)
        object.__setattr__(self, "group", g)

    # -- construction

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def N(self) -> int:
        return self.ring.N

    @property
    def length(self) -> int:
        return self.p**self.n

    @classmethod
    def zero(cls, ring, n: int) -> "IwasawaPoly":
        return cls(ring, n, ring.zeros(ring.p**n))

    @classmethod
    def constant(cls, ring, n: int, c) -> "IwasawaPoly":
        g = ring.zeros(ring.p**n)
        g[0] = ring.to_array(c)
        return cls(ring, n, g)

    @classmethod
    def from_group_ring(cls, ring, n: int, entries) -> "IwasawaPoly":
        """From {exponent: coefficient}; exponents are reduced mod p^n."""
        L = ring.p**n
        g = ring.zeros(L)
        for i, c in dict(entries).items():
            g[i % L] = (g[i % L] + ring.to_array(c)) % ring.modulus
        return cls(ring, n, g)

    @classmethod
    def gamma(cls, ring, n: int, i: int = 1) -> "IwasawaPoly":
        """The group element gamma_0^i = (1+T)^i."""
        return cls.from_group_ring(ring, n, {i: 1})

    @classmethod
    def from_monomial(cls, ring, n: int, coeffs) -> "IwasawaPoly":
        """From c_0 + c_1 T + ...; any length, reduced mod omega_n."""
        L, M = ring.p**n, ring.modulus
        arr = np.stack([ring.to_array(c) for c in coeffs]) if len(coeffs) else ring.zeros(0)
        out = np.zeros((L, ring.degree), dtype=object)
        # T^k = sum_i (-1)^(k-i) C(k, i) (1+T)^i
        for k in range(arr.shape[0]):
            if not np.any(arr[k]):
                continue
            for i in range(k + 1):
                coef = (-1) ** (k - i) * comb(k, i)
                out[i % L] = out[i % L] + arr[k].astype(object) * coef
        return cls(ring, n, as_residues(out, M))

    @classmethod
    def T(cls, ring, n: int) -> "IwasawaPoly":
        return cls.from_group_ring(ring, n, {1: 1, 0: -1})

    # -- views

    def to_group_ring(self) -> np.ndarray:
        return self.group.copy()

    def group_coeff(self, i: int):
        return self.ring.element(self.group[i % self.length])

    def monomial(self) -> np.ndarray:
        """Monomial coefficients (shape (p^n, m)) of the canonical representative."""
        return matmul_mod(pascal_matrix(self.length, self.ring.modulus), self.group,
                          self.ring.modulus)

    def monomial_mod_p(self) -> np.ndarray:
        """Monomial coefficients mod p, through the Lucas factorisation."""
        return lucas_transform(self.group % self.p, self.p, self.n)

    def coeff_list(self) -> list:
        """Monomial coefficients as ring elements."""
        return [self.ring.element(row) for row in self.monomial()]

    # -- arithmetic

    def _same(self, other: "IwasawaPoly"):
        if not isinstance(other, IwasawaPoly):
            raise TypeError(f"expected IwasawaPoly, got {type(other).__name__}")
        if other.ring != self.ring or other.n != self.n:
            raise ValueError("operands live in different Iwasawa algebras")

    def __add__(self, other):
        if not isinstance(other, IwasawaPoly):
            other = IwasawaPoly.constant(self.ring, self.n, other)
        self._same(other)
        return IwasawaPoly(self.ring, self.n, (self.group + other.group) % self.ring.modulus)

    __radd__ = __add__

    def __neg__(self):
        return IwasawaPoly(self.ring, self.n, (-self.group) % self.ring.modulus)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "IwasawaPoly":
        """Multiply by a ring element c."""
        return IwasawaPoly(self.ring, self.n, self.ring.mul(self.group, self.ring.to_array(c)))

    def __mul__(self, other):
        if not isinstance(other, IwasawaPoly):
            return self.scale(other)
        self._same(other)
        ring, M, m = self.ring, self.ring.modulus, self.ring.degree
        wide = np.zeros((self.length, 2 * m - 1), dtype=self.group.dtype)
        for u in range(m):
            for v in range(m):
                part = cyclic_convolve(self.group[:, u], other.group[:, v], M)
                wide[:, u + v] = (wide[:, u + v] + part) % M
        return IwasawaPoly(ring, self.n, ring.reduce_wide(wide))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = IwasawaPoly.constant(self.ring, self.n, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, IwasawaPoly):
            return NotImplemented
        return (self.ring == other.ring and self.n == other.n
                and np.array_equal(self.group, other.group))

    __hash__ = None

    def is_zero(self) -> bool:
        return not np.any(self.group)

    def is_zero_mod_p(self) -> bool:
        return not np.any(self.group % self.p)

    def __repr__(self):
        nz = {i: self.ring.element(row) for i, row in enumerate(self.group) if np.any(row)}
        if len(nz) > 6:
            return f"IwasawaPoly(p={self.p}, n={self.n}, N={self.N}, {len(nz)} nonzero terms)"
        body = " + ".join(f"({c!r})g^{i}" for i, c in nz.items()) or "0"
        return f"IwasawaPoly(p={self.p}, n={self.n}, N={self.N}: {body})"

    # -- substitutions and maps

    def substitute(self, c: int) -> "IwasawaPoly":
        """f((1+T)^c - 1): gamma_0^i -> gamma_0^(i c)."""
        c = int(c)
        if c % self.p == 0:
            raise NotUnit(f"substitution exponent {c} is divisible by {self.p}")
        L = self.length
        out = self.ring.zeros(L)
        idx = (np.arange(L, dtype=np.int64) * (c % L)) % L if L > 1 else np.zeros(1, dtype=np.int64)
        np.add.at(out, idx, self.group)
        return IwasawaPoly(self.ring, self.n, out % self.ring.modulus)

    def scale_shift(self, u) -> "IwasawaPoly":
        """f(u(1+T) - 1) on the canonical representative: g_i -> u^i g_i."""
        ring = self.ring
        ua = ring.to_array(u)
        powers = ring.zeros(self.length)
        acc = ring.to_array(1)
        for i in range(self.length):
            powers[i] = acc
            acc = ring.mul(acc, ua)
        return IwasawaPoly(ring, self.n, ring.mul(self.group, powers))

    def derivative(self) -> "IwasawaPoly":
        """d/dT of the canonical representative (sum i g_i (1+T)^(i-1))."""
        L, M = self.length, self.ring.modulus
        out = self.ring.zeros(L)
        if L > 1:
            i = np.arange(1, L, dtype=object if self.group.dtype == object else np.int64)
            out[:-1] = (self.group[1:] * (i % M)[:, None]) % M
        return IwasawaPoly(self.ring, self.n, out)

    def restrict(self, n: Optional[int] = None) -> "IwasawaPoly":
        """Res_{n', n}: reduce exponents mod p^n (default: one level down)."""
        n = self.n - 1 if n is None else n
        if not 0 <= n <= self.n:
            raise OutOfRange(f"cannot restrict level {self.n} to level {n}")
        L = self.p**n
        folded = self.group.reshape(self.length // L, L, self.ring.degree).sum(axis=0)
        return IwasawaPoly(self.ring, n, folded % self.ring.modulus)

    def evaluate(self, t):
        """Value of the canonical representative at T = t (a ring element)."""
        ring = self.ring
        s = (ring.to_array(t) + ring.to_array(1)) % ring.modulus
        acc = ring.zeros()
        for row in self.group[::-1]:
            acc = (ring.mul(acc, s) + row) % ring.modulus
        return ring.element(acc)

    def augmentation(self):
        """Sum of the group-ring coefficients, i.e. the value at T = 0."""
        return self.ring.element(self.group.sum(axis=0) % self.ring.modulus)

    def with_precision(self, N: int) -> "IwasawaPoly":
        if N > self.N:
            raise ValueError("cannot raise precision")
        ring = self.ring.with_precision(N)
        return IwasawaPoly(ring, self.n, self.group % ring.modulus)

    def coerce_to_base(self) -> "IwasawaPoly":
        if self.ring.degree == 1:
            return IwasawaPoly(self.ring.base, self.n, self.group)
        if np.any(self.group[:, 1:]):
            raise NotRational("coefficients do not lie in Z/p^N")
        return IwasawaPoly(self.ring.base, self.n, self.group[:, :1])

    def embed(self, ring) -> "IwasawaPoly":
        """Coefficients from Z/p^N into an extension ring of the same precision."""
        if self.ring.degree != 1 or ring.modulus != self.ring.modulus:
            raise ValueError("can only embed base-ring elements at equal precision")
        g = ring.zeros(self.length)
        g[:, 0] = self.group[:, 0]
        return IwasawaPoly(ring, self.n, g)

    def map_coeffs(self, fn) -> "IwasawaPoly":
        """Apply a ring endomorphism (given on elements) coefficientwise."""
        rows = [self.ring.to_array(fn(self.ring.element(r))) for r in self.group]
        return IwasawaPoly(self.ring, self.n, np.stack(rows))

    # -- invariants

    def valuation(self) -> int:
        """min v_p of the coefficients, capped at N (basis independent)."""
        if self.is_zero():
            return self.N
        return min(valuation(int(v), self.p, self.N) for v in self.group.ravel() if v)

    def mu_lambda(self) -> MuLambda:
        """Iwasawa mu and lambda read from the first coefficient of minimal valuation.

        The binomial transform is unimodular, so mu is the content valuation
        of the group-ring coefficients.  lambda is certified only when mu < N.
        """
        if self.is_zero():
            raise ZeroInput("mu/lambda of the zero series")
        mu = self.valuation()
        if mu >= self.N:
            return MuLambda(mu, None)
        unit_part = np.vectorize(lambda v: (int(v) // self.p**mu) % self.p, otypes=[np.int64])(
            self.group
        )
        coeffs = lucas_transform(unit_part, self.p, self.n)
        nz = np.flatnonzero(np.any(coeffs, axis=1))
        return MuLambda(mu, int(nz[0]) if len(nz) else None)

    def derivative_support_mod_p(self) -> Optional[int]:
        """Least i with p not dividing i and c_i != 0 mod p, or None.

        A witness exists exactly when f' is nonzero mod (p, T^(p^n - 1)).
        """
        coeffs = self.monomial_mod_p()
        idx = np.arange(self.length)
        hits = np.flatnonzero(np.any(coeffs, axis=1) & (idx % self.p != 0))
        return int(hits[0]) if len(hits) else None


def omega_poly(p: int, n: int) -> list[int]:
    """Integer coefficients of omega_n(T) = (1+T)^(p^n) - 1, constant term first."""
    L = p**n
    return [0] + [comb(L, k) for k in range(1, L + 1)]


def omega_quotient(p: int, n: int, d: int) -> np.ndarray:
    """omega_n / omega_d as an integer group-ring vector of length p^n (d <= n).

    omega_n / omega_d = sum_{l < p^(n-d)} (1+T)^(l p^d).
    """
    L = p**n
    out = np.zeros(L, dtype=object)
    out[:: p**d] = 1
    return out


def _poly_from_group(vec) -> list[int]:
    """Exact integer monomial coefficients of sum_i v_i (1+T)^i."""
    L = len(vec)
    coeffs = [0] * L
    for i, v in enumerate(vec):
        if v:
            for k in range(i + 1):
                coeffs[k] += int(v) * comb(i, k)
    return coeffs


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (constant term first); den monic."""
    num = list(num)
    dn = len(den) - 1
    while dn > 0 and den[dn] == 0:
        dn -= 1
    if den[dn] != 1:
        raise ValueError("divisor must be monic")
    out = [0] * max(len(num) - dn, 1)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            out[k - dn] = c
            for i in range(dn + 1):
                num[k - dn + i] -= c * den[i]
    if any(num[:dn]):
        raise ValueError("division is not exact")
    return out


def _ramanujan_sum(q: int, ell: int) -> int:
    """c_q(l) = sum of zeta^l over the roots of unity zeta of exact order q."""
    from sympy import divisors, mobius

    g = np.gcd(q, ell) if ell else q
    return sum(int(mobius(q // e)) * e for e in divisors(int(g)))


def lemma2_identities(p: int, n: int, d: int) -> bool:
    """Check the polynomial identities behind the maximal-order ideal U_n.

    (a) sum over l = 0 mod p of (p-1)(1+T)^(l p^(d-1)) equals (p-1) omega_n/omega_d;
    (b) sum over l != 0 mod p of -(1+T)^(l p^(d-1)) equals omega_n/omega_d - omega_n/omega_(d-1);
    (c) p^(n+1) e_d = p^(d+1) omega_n/omega_d - p^d omega_n/omega_(d-1) mod omega_n,
        and p^(n+1) e_0 = p omega_n/T, with e_d built from Ramanujan sums;
    (d) the right-hand sides lie in (p, omega_n).
    Quotients omega_n/omega_d are obtained by exact long division, independently
    of the geometric-sum expressions on the other side.
    """
    if not 0 <= d <= n:
        raise OutOfRange(f"need 0 <= d <= n, got d={d}, n={n}")
    L = p**n
    om_n = omega_poly(p, n)

    def quotient(k: int) -> list[int]:
        q = _poly_div_exact(om_n, omega_poly(p, k))
        return (q + [0] * L)[:L]

    def from_exponents(weights: dict) -> list[int]:
        vec = [0] * L
        for e, w in weights.items():
            vec[e] += w
        return _poly_from_group(vec)

    ok = True
    # e_d as a group-ring vector: p^(n+1) e_d = p * sum_l c_{p^d}(-l) gamma^l
    ed = [p * _ramanujan_sum(p**d, l) for l in range(L)]
    ed_poly = _poly_from_group(ed)
    if d == 0:
        rhs = [p * c for c in quotient(0)]  # p * omega_n / T
        ok &= ed_poly == rhs
    else:
        q_d, q_dm1 = quotient(d), quotient(d - 1)
        step = p ** (d - 1)
        top = p ** (n - d + 1)
        lhs_a = from_exponents({l * step: p - 1 for l in range(0, top, p)})
        ok &= lhs_a == [(p - 1) * c for c in q_d]
        lhs_b = from_exponents({l * step: -1 for l in range(top) if l % p})
        ok &= lhs_b == [a - b for a, b in zip(q_d, q_dm1)]
        rhs = [p ** (d + 1) * a - p**d * b for a, b in zip(q_d, q_dm1)]
        ok &= ed_poly == rhs
    ok &= all(c % p == 0 for c in rhs)
    return bool(ok)
