"""Characters of Delta = Gal(Q_p(mu_p)/Q_p) and even Dirichlet characters mod pd."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm

import numpy as np
from sympy import factorint, primitive_root

from .errors import DivisibleByP, UnsupportedCharacter
from .padic import PadicCtx, PadicInt, teichmuller_int, teichmuller_table
from .unramified import UnramCtx, UnramElem, make_splitting_ctx, roots_of_unity


@dataclass(frozen=True)
class DeltaChar:
    """theta = omega^j."""

    ctx: PadicCtx
    j: int

    def __post_init__(self):
        object.__setattr__(self, "j", self.j % (self.ctx.p - 1))

    @property
    def p(self) -> int:
        return self.ctx.p

    def __repr__(self):
        return f"omega^{self.j} (p={self.p})"

    def value(self, a) -> PadicInt:
        a = a.value if isinstance(a, PadicInt) else int(a)
        if a % self.p == 0:
            raise DivisibleByP(f"theta({a}) with {self.p} | {a}")
        w = teichmuller_int(a, self.p, self.ctx.N)
        return self.ctx(pow(w, self.j, self.ctx.modulus))

    __call__ = value

    def table(self, N: int | None = None) -> np.ndarray:
        """theta(r) mod p^N for r = 0..p-1 (0 at r = 0), as Python ints."""
        N = self.ctx.N if N is None else N
        modulus = self.p**N
        teich = teichmuller_table(self.p, N)
        return np.array([0] + [pow(t, self.j, modulus) for t in teich[1:]], dtype=object)

    def is_even(self) -> bool:
        return self.j % 2 == 0

    def is_trivial(self) -> bool:
        return self.j == 0

    def sign(self) -> int:
        """theta(-1) as +-1."""
        return 1 if self.is_even() else -1

    def twist_omega_inv(self) -> "DeltaChar":
        return DeltaChar(self.ctx, self.j - 1)

    def with_precision(self, N: int) -> "DeltaChar":
        return DeltaChar(self.ctx.with_precision(N), self.j)


def is_even(theta) -> bool:
    return theta.is_even()


def twist_omega_inv(theta: DeltaChar) -> DeltaChar:
    return theta.twist_omega_inv()


def enumerate_even_nontrivial(p: int, N: int = 1) -> list[DeltaChar]:
    ctx = PadicCtx(p, N)
    return [DeltaChar(ctx, j) for j in range(2, p - 2, 2)]


# -- Dirichlet characters modulo q0 = p d ------------------------------------

@lru_cache(maxsize=None)
def unit_group_generators(d: int) -> tuple[tuple[int, int], ...]:
    """Cyclic decomposition of (Z/d)^* as (generator, order) pairs.

    Each generator is a CRT lift that is 1 modulo the other prime powers.
    """
    gens = []
    for r, e in sorted(factorint(d).items()):
        q = r**e
        rest = d // q
        cyclic = []
        if r == 2:
            if e == 2:
                cyclic = [(q - 1, 2)]
            elif e >= 3:
                cyclic = [(q - 1, 2), (5, 2 ** (e - 2))]
        else:
            cyclic = [(int(primitive_root(q)), q - q // r)]
        for g, order in cyclic:
            # x = g mod q, x = 1 mod rest
            lifted = (g * rest * pow(rest, -1, q) + q * pow(q, -1, rest)) % d if rest > 1 else g % d
            gens.append((lifted, order))
    return tuple(gens)


@lru_cache(maxsize=None)
def _discrete_logs(d: int) -> dict[int, tuple[int, ...]]:
    gens = unit_group_generators(d)
    logs = {}
    for exps in product(*(range(o) for _, o in gens)):
        x = 1
        for (g, _), e in zip(gens, exps):
            x = x * pow(g, e, d) % d
        logs[x % d] = exps
    return logs


def _psi_exponent(d: int, psi: tuple[int, ...], a: int) -> Fraction:
    """psi(a) = exp(2 pi i * result) (result taken mod 1)."""
    gens = unit_group_generators(d)
    logs = _discrete_logs(d)[a % d] if d > 1 else ()
    return sum((Fraction(c * e, o) for (_, o), c, e in zip(gens, psi, logs)), Fraction(0)) % 1


def _psi_order(d: int, psi: tuple[int, ...]) -> int:
    gens = unit_group_generators(d)
    return lcm(1, *(o // gcd(c, o) for (_, o), c in zip(gens, psi)))


def psi_is_primitive(d: int, psi: tuple[int, ...]) -> bool:
    """True when the character mod d is not induced from a proper divisor."""
    if d == 1:
        return True
    for r in factorint(d):
        smaller = d // r
        kernel = [a for a in range(1, d) if gcd(a, d) == 1 and a % smaller == 1 % smaller]
        if all(_psi_exponent(d, psi, a) == 0 for a in kernel):
            return False
    return True


@dataclass(frozen=True, eq=False)
class DirichletChar:
    """chi = psi * omega^j modulo q0 = p d, with values in an unramified ring."""

    p: int
    d: int
    psi: tuple[int, ...]
    j: int
    ring: UnramCtx
    values: np.ndarray = field(repr=False)

    @property
    def q0(self) -> int:
        return self.p * self.d

    @property
    def order(self) -> int:
        return lcm(_psi_order(self.d, self.psi), (self.p - 1) // gcd(self.j, self.p - 1))

    def value(self, a: int) -> UnramElem:
        return self.ring.element(self.values[a % self.q0])

    __call__ = value

    def is_even(self) -> bool:
        return self.value(-1) == 1

    def is_primitive_mod_d(self) -> bool:
        return psi_is_primitive(self.d, self.psi)

    def conductor(self) -> int:
        return self.d * (self.p if self.j % (self.p - 1) else 1) if self.is_primitive_mod_d() else 0

    def twist_omega_inv(self) -> "DirichletChar":
        return dirichlet_character(self.p, self.d, self.psi, self.j - 1, self.ring.N)

    def __repr__(self):
        return f"DirichletChar(p={self.p}, d={self.d}, psi={self.psi}, j={self.j})"


def psi_choices(d: int) -> list[tuple[int, ...]]:
    gens = unit_group_generators(d)
    return list(product(*(range(o) for _, o in gens)))


@lru_cache(maxsize=None)
def dirichlet_character(p: int, d: int, psi: tuple[int, ...], j: int, N: int) -> DirichletChar:
    if d < 1 or d % p == 0:
        raise ValueError(f"d={d} must be a positive integer prime to {p}")
    j %= p - 1
    psi_order = _psi_order(d, psi)
    if psi_order % p == 0:
        raise UnsupportedCharacter(f"character of order divisible by {p}")
    big = lcm(psi_order, p - 1)
    ring = make_splitting_ctx(p, N, big)
    zeta = roots_of_unity(ring, big)[0]
    zpow = [zeta**k for k in range(big)]
    q0 = p * d
    vals = ring.zeros(q0)
    for a in range(q0):
        if gcd(a, q0) != 1:
            continue
        frac = _psi_exponent(d, psi, a) * big
        assert frac.denominator == 1
        w = teichmuller_int(a, p, N)
        vals[a] = (zpow[int(frac) % big] * pow(w, j, ring.modulus)).array
    vals.setflags(write=False)
    return DirichletChar(p, d, tuple(psi), j, ring, vals)


def character_from_index(p: int, d: int, index: int, N: int = 2) -> DirichletChar:
    """Characters mod pd are indexed as psi_index * (p-1) + j."""
    choices = psi_choices(d)
    psi_index, j = divmod(index, p - 1)
    if not 0 <= psi_index < len(choices):
        raise ValueError(f"index {index} out of range for d={d}")
    return dirichlet_character(p, d, choices[psi_index], j, N)


def supported_even_characters(p: int, d: int, N: int = 2) -> list[tuple[int, DirichletChar]]:
    """Even characters psi*omega^j with psi primitive mod d and order prime to p."""
    out = []
    for psi_index, psi in enumerate(psi_choices(d)):
        if not psi_is_primitive(d, psi) or _psi_order(d, psi) % p == 0:
            continue
        for j in range(p - 1):
            chi = dirichlet_character(p, d, psi, j, N)
            if chi.is_even():
                out.append((psi_index * (p - 1) + j, chi))
    return out
