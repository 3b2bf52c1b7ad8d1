"""Fixed-precision arithmetic in Z/p^N.

Besides the scalar type :class:`PadicInt` this module provides the
Teichmuller decomposition a = omega(a) <a>, the Iwasawa logarithm on
principal units, and the discrete logarithm ``gamma_index`` that labels
elements of Gamma_n = Gal(K_n/K_0) by exponents of a topological generator.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import isprime

from .errors import (
    BadBase,
    DivisibleByP,
    InexactDivision,
    NotPrincipalUnit,
    NotUnit,
)
from .kernels import as_residues, dtype_for


@dataclass(frozen=True)
class PadicCtx:
    """The ring Z/p^N.  Also serves as a degree-1 coefficient ring."""

    p: int
    N: int

    def __post_init__(self):
        if self.p < 5 or not isprime(self.p):
            raise ValueError(f"p must be a prime >= 5, got {self.p}")
        if self.N < 1:
            raise ValueError(f"precision N must be >= 1, got {self.N}")

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    def degree(self) -> int:
        return 1

    @property
    def dtype(self):
        return dtype_for(self.modulus)

    @property
    def base(self) -> "PadicCtx":
        return self

    def __call__(self, value) -> "PadicInt":
        return PadicInt(self, int(value))

    def with_precision(self, N: int) -> "PadicCtx":
        return PadicCtx(self.p, N)

    # -- coefficient-ring protocol (arrays carry a trailing axis of length 1)

    def zeros(self, *shape) -> np.ndarray:
        return np.zeros(shape + (1,), dtype=self.dtype)

    def to_array(self, x) -> np.ndarray:
        if isinstance(x, PadicInt):
            x = x.value
        elif hasattr(x, "coeffs"):
            raise TypeError("cannot coerce an extension element into Z/p^N")
        return as_residues([int(x)], self.modulus)

    def element(self, arr) -> "PadicInt":
        return PadicInt(self, int(np.asarray(arr).reshape(-1)[0]))

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a * b) % self.modulus

    def inv(self, a: np.ndarray) -> np.ndarray:
        v = int(a[0])
        if v % self.p == 0:
            raise NotUnit(f"{v} is not a unit mod {self.p}")
        return as_residues([pow(v, -1, self.modulus)], self.modulus)

    def pow(self, a: np.ndarray, e: int) -> np.ndarray:
        return as_residues([pow(int(a[0]), e, self.modulus)], self.modulus)

    def is_unit(self, a: np.ndarray) -> bool:
        return int(a[0]) % self.p != 0

    def reduce_mod_p(self, a: np.ndarray) -> np.ndarray:
        return a % self.p

    def reduce_wide(self, prod: np.ndarray) -> np.ndarray:
        return prod % self.modulus


@dataclass(frozen=True)
class PadicInt:
    """A p-adic integer known modulo p^N, stored as its residue."""

    ctx: PadicCtx
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.ctx.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, PadicInt):
            if other.ctx != self.ctx:
                raise ValueError("mismatched p-adic contexts")
            return other.value
        return int(other)

    def __add__(self, other):
        return PadicInt(self.ctx, self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PadicInt(self.ctx, self.value - self._coerce(other))

    def __rsub__(self, other):
        return PadicInt(self.ctx, self._coerce(other) - self.value)

    def __mul__(self, other):
        return PadicInt(self.ctx, self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(self.ctx, -self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicInt(self.ctx, pow(self.value, e, self.ctx.modulus))

    def __truediv__(self, other):
        return self * PadicInt(self.ctx, self._coerce(other)).inverse()

    def __eq__(self, other):
        if isinstance(other, PadicInt):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.ctx.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.ctx.p}^{self.ctx.N})"

    def is_unit(self) -> bool:
        return self.value % self.ctx.p != 0

    def inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise NotUnit(f"{self.value} is not a unit mod {self.ctx.p}")
        return PadicInt(self.ctx, pow(self.value, -1, self.ctx.modulus))

    def valuation(self) -> int:
        """v_p of the residue, capped at N."""
        return valuation(self.value, self.ctx.p, self.ctx.N)


def valuation(x: int, p: int, cap: int | None = None) -> int:
    if x == 0:
        if cap is None:
            raise ValueError("valuation of 0")
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
        if cap is not None and v >= cap:
            return cap
    return v


def exact_divide(x: int, p: int, t: int, modulus: int) -> int:
    """Return x / p^t reduced mod ``modulus``; raise unless p^t | x."""
    q, r = divmod(int(x), p**t)
    if r:
        raise InexactDivision(f"{x} is not divisible by {p}^{t}")
    return q % modulus


@lru_cache(maxsize=None)
def teichmuller_int(a: int, p: int, N: int) -> int:
    """omega(a) mod p^N as the fixpoint of x -> x^p."""
    modulus = p**N
    x = a % modulus
    if x % p == 0:
        raise DivisibleByP(f"{a} is divisible by {p}")
    for _ in range(N + 1):
        y = pow(x, p, modulus)
        if y == x:
            return x
        x = y
    raise AssertionError("Teichmuller iteration failed to stabilise")


@lru_cache(maxsize=None)
def teichmuller_table(p: int, N: int) -> tuple[int, ...]:
    """omega(r) mod p^N for r = 0..p-1, with 0 in slot 0."""
    return (0,) + tuple(teichmuller_int(r, p, N) for r in range(1, p))


def teichmuller(a: PadicInt) -> PadicInt:
    ctx = a.ctx
    return PadicInt(ctx, teichmuller_int(a.value, ctx.p, ctx.N))


def angle(a: PadicInt) -> PadicInt:
    """The principal-unit part <a> = a / omega(a)."""
    return a * teichmuller(a).inverse()


def iwasawa_log(u: PadicInt) -> PadicInt:
    """Log_p(u) for a principal unit u, exact mod p^N.

    The term x^k/k is evaluated at precision N + v_p(k) before the division
    by p^{v_p(k)}, so no digits are lost to the denominators.
    """
    ctx = u.ctx
    p, N = ctx.p, ctx.N
    x = u.value - 1
    if x % p:
        raise NotPrincipalUnit(f"{u.value} is not 1 mod {p}")
    total = 0
    for k in range(1, 2 * N + 5):
        e = valuation(k, p)
        if k - e >= N:
            continue
        wide = p ** (N + e)
        term = pow(x, k, wide) // p**e
        term = term * pow(k // p**e, -1, ctx.modulus)
        total += term if k % 2 else -term
    return PadicInt(ctx, total)


def check_gamma_base(base: int, p: int) -> None:
    if base % p != 1 or base % (p * p) == 1:
        raise BadBase(f"{base} does not generate 1 + p Z_p")


def _gamma_index_int(k: int, p: int, n: int, base: int) -> int:
    modulus = p ** (n + 1)
    target = (k * pow(teichmuller_int(k, p, n + 1), -1, modulus)) % modulus
    binv = pow(base, -1, modulus)
    index = 0
    for s in range(1, n + 1):
        wide = p ** (s + 1)
        rest = (target * pow(binv, index, wide)) % wide
        step = pow(base, p ** (s - 1), wide)
        c = ((step - 1) // p**s) % p
        digit = (((rest - 1) // p**s) * pow(c, -1, p)) % p
        index += digit * p ** (s - 1)
    return index


def gamma_index(k, n: int, base: int | None = None, *, p: int | None = None) -> int:
    """The i mod p^n with base^i = <k> (mod p^{n+1}); base defaults to 1+p.

    ``k`` is a PadicInt of precision >= n+1, or an exact int together with
    ``p``.  Solved one base-p digit at a time.
    """
    if isinstance(k, PadicInt):
        if k.ctx.N < n + 1:
            raise ValueError(f"need precision >= {n + 1} to read gamma_{n}")
        return gamma_index_of(k.value, k.ctx.p, n, base)
    if p is None:
        raise TypeError("an integer k needs the prime p")
    return gamma_index_of(int(k), p, n, base)


def gamma_index_of(k: int, p: int, n: int, base: int | None = None) -> int:
    base = 1 + p if base is None else base
    check_gamma_base(base, p)
    if k % p == 0:
        raise NotUnit(f"{k} is divisible by {p}")
    if n == 0:
        return 0
    return _gamma_index_int(k, p, n, base)


@lru_cache(maxsize=64)
def class_matrix(p: int, n: int, base: int | None = None) -> np.ndarray:
    """K[i, t-1] = omega(t) * base^i mod p^{n+1}, for i < p^n and 1 <= t < p.

    Row i lists the p-1 residues k in [1, p^{n+1}) with gamma_n(k) = i;
    column t-1 those with k = t (mod p).
    """
    base = 1 + p if base is None else base
    check_gamma_base(base, p)
    modulus = p ** (n + 1)
    powers = np.empty(p**n, dtype=object)
    x = 1
    for i in range(p**n):
        powers[i] = x
        x = (x * base) % modulus
    teich = np.array(teichmuller_table(p, n + 1)[1:], dtype=object)
    out = (powers[:, None] * teich[None, :]) % modulus
    out = out.astype(np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def gamma_index_table(p: int, n: int, base: int | None = None) -> np.ndarray:
    """Array g of length p^{n+1}: g[k] = gamma_n(k), and -1 where p | k."""
    mat = class_matrix(p, n, base)
    table = np.full(p ** (n + 1), -1, dtype=np.int64)
    rows = np.broadcast_to(np.arange(p**n)[:, None], mat.shape)
    table[mat.ravel()] = rows.ravel()
    table.setflags(write=False)
    return table
