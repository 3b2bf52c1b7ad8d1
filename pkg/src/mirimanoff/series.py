"""Mirimanoff polynomials and the power series M(T, theta, a).

For a unit a with a - 1 also a unit,

    u_n(theta, a) = sum_{k < p^(n+1), p not | k} theta omega^-1(k) a^k gamma_n(k)
    M_n(theta, a) = u_n(theta, a) / (a^(p^(n+1)) - 1)

The class of k in Gamma_n only depends on gamma_index(k), so the sums are
assembled from the class matrix K[i, t] = omega(t) (1+p)^i mod p^(n+1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .characters import DeltaChar
from .errors import BadA, BadD, OutOfRange
from .iwasawa import IwasawaPoly
from .padic import PadicCtx, PadicInt, class_matrix, teichmuller_table
from .unramified import UnramElem, frobenius, make_splitting_ctx, roots_of_unity


def phi(j: int, p: int) -> np.ndarray:
    """Coefficients of phi_j(T) = sum_{a=1}^{p-1} a^(j-1) T^a over F_p (index = degree)."""
    if not 1 <= j <= p - 1:
        raise OutOfRange(f"j must lie in 1..{p - 1}, got {j}")
    out = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        out[a] = pow(a, j - 1, p)
    return out


def phi_eval(j: int, p: int, a: int) -> int:
    return int(sum(int(c) * pow(a, e, p) for e, c in enumerate(phi(j, p))) % p)


def _as_element(a, ring=None):
    """Normalise a to (ring, array) with ring a PadicCtx or UnramCtx."""
    if isinstance(a, UnramElem):
        return a.ctx, a.array
    if isinstance(a, PadicInt):
        return a.ctx, a.ctx.to_array(a)
    if ring is None:
        raise TypeError("an integer a needs an explicit ring")
    return ring, ring.to_array(a)


def _power_table(ring, a: np.ndarray, count: int) -> np.ndarray:
    """a^k for 0 <= k < count, built by doubling."""
    out = ring.zeros(count)
    out[0] = ring.to_array(1)
    filled, step = 1, a
    while filled < count:
        take = min(filled, count - filled)
        out[filled:filled + take] = ring.mul(out[:take], step)
        filled += take
        step = ring.mul(step, step)
    return out


def _class_weights(theta: DeltaChar, modulus_N: int) -> np.ndarray:
    """theta omega^-1(t) mod p^N for t = 1..p-1."""
    p = theta.p
    table = teichmuller_table(p, modulus_N)
    M = p**modulus_N
    return np.array([pow(int(w), (theta.j - 1) % (p - 1), M) for w in table[1:]], dtype=object)


def u_series(theta: DeltaChar, a, n: int, N: Optional[int] = None) -> IwasawaPoly:
    """u_n(theta, a) in R[Gamma_n], with R the ring of a."""
    N = theta.ctx.N if N is None else N
    ring, arr = _normalise(a, theta.p, N)
    if not ring.is_unit(arr):
        raise BadA("a must be a unit")
    p = theta.p
    K = class_matrix(p, n)  # (p^n, p-1)
    powers = _power_table(ring, arr, p ** (n + 1))
    weights = as_ring_scalars(ring, _class_weights(theta, N))
    terms = ring.mul(powers[K], weights[None, :, :])  # (p^n, p-1, m)
    group = terms.sum(axis=1) % ring.modulus
    return IwasawaPoly(ring, n, group)


def as_ring_scalars(ring, values) -> np.ndarray:
    out = ring.zeros(len(values))
    for i, v in enumerate(values):
        out[i] = ring.to_array(int(v))
    return out


@dataclass(frozen=True)
class MirimanoffSeries:
    poly: IwasawaPoly
    theta: DeltaChar
    a: object
    n: int
    N: int

    def evaluate_at_zero(self):
        return self.poly.augmentation()


def _check_a(ring, arr):
    one = ring.to_array(1)
    if not ring.is_unit(arr) or not ring.is_unit((arr - one) % ring.modulus):
        raise BadA("need a(a-1) to be a unit")


def _normalise(a, p: int, N: int):
    """(ring, array) for a at precision N; integers land in Z/p^N."""
    ring, arr = _as_element(a, PadicCtx(p, N))
    if ring.N != N:
        ring = ring.with_precision(N)
        arr = arr % ring.modulus
    return ring, arr


def mirimanoff_series(theta: DeltaChar, a, n: int, N: Optional[int] = None) -> MirimanoffSeries:
    N = theta.ctx.N if N is None else N
    ring, arr = _normalise(a, theta.p, N)
    _check_a(ring, arr)
    u = u_series(theta, ring.element(arr), n, N)
    denom = (ring.pow(arr, theta.p ** (n + 1)) - ring.to_array(1)) % ring.modulus
    poly = u.scale(ring.element(ring.inv(denom)))
    return MirimanoffSeries(poly, theta, ring.element(arr), n, N)


def mirimanoff_poly(theta: DeltaChar, a, n: int, N: Optional[int] = None) -> IwasawaPoly:
    return mirimanoff_series(theta, a, n, N).poly


def lemma4_check(theta: DeltaChar, a, n: int, N: Optional[int] = None) -> bool:
    """M(T, theta, a) = -theta(-1) omega^-1(-1) M(T, theta, 1/a)."""
    N = theta.ctx.N if N is None else N
    ring, arr = _normalise(a, theta.p, N)
    lhs = mirimanoff_poly(theta, ring.element(arr), n, N)
    rhs = mirimanoff_poly(theta, ring.element(ring.inv(arr)), n, N)
    # theta(-1) omega^-1(-1) = (-1)^(j-1)
    sign = -((-1) ** (theta.j - 1))
    return lhs == rhs.scale(sign)


@dataclass(frozen=True)
class DerivativeTest:
    """Outcome of the finite-precision test M' = 0 mod (pi, T^(p^n))."""

    vanishes: bool
    degree_bound: int  # coefficients below this degree were inspected
    witness: Optional[int]  # index i, p not | i, with c_i != 0 mod p

    def __bool__(self):
        return self.vanishes


def derivative_vanishes_mod_p(theta: DeltaChar, a, n: int = 2) -> DerivativeTest:
    """Whether M mod (p, omega_n) is supported on exponents divisible by p."""
    poly = mirimanoff_poly(theta, a, n, 1)
    witness = poly.derivative_support_mod_p()
    return DerivativeTest(witness is None, poly.length, witness)


def primitive_sum(theta: DeltaChar, d: int, n: int, N: Optional[int] = None) -> IwasawaPoly:
    """sum of M(T, theta, rho) over rho of exact order d, coerced to Z/p^N."""
    N = theta.ctx.N if N is None else N
    p = theta.p
    if d < 2 or d % p == 0:
        raise BadD(f"d={d} must be >= 2 and prime to {p}")
    ring = make_splitting_ctx(p, N, d)
    total = IwasawaPoly.zero(ring, n)
    for rho in roots_of_unity(ring, d):
        total = total + mirimanoff_poly(theta, rho, n, N)
    return total.coerce_to_base()


def frobenius_invariant(poly: IwasawaPoly) -> bool:
    """True when every coefficient is fixed by Frobenius."""
    if poly.ring.degree == 1:
        return True
    return poly.map_coeffs(frobenius) == poly


def mirimanoff_at_zero_check(theta: DeltaChar, a: int, n: int) -> bool:
    """M(0, theta, a) = phi_j(a) / (a^p - 1) mod p, with j taken in 1..p-1."""
    p = theta.p
    j = (theta.j - 1) % (p - 1) + 1
    value = mirimanoff_series(theta, a, n, 1).evaluate_at_zero()
    expected = phi_eval(j, p, a) * pow(pow(a, p, p) - 1, -1, p) % p
    return int(value) % p == expected
