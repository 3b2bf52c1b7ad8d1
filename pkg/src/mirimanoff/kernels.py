"""Modular array kernels shared by the Iwasawa-algebra and L-function code.

Residues mod M are stored as int64 when M < 2**31 (so a single product
fits in a signed 64-bit word) and as Python-int object arrays otherwise.
"""
from __future__ import annotations

import numpy as np

INT64_LIMIT = 1 << 31
_FLOAT_EXACT_BITS = 53


def dtype_for(modulus: int):
    return np.int64 if modulus < INT64_LIMIT else object


def as_residues(values, modulus: int) -> np.ndarray:
    # Reduce as Python ints first: raw inputs may exceed int64.
    obj = np.array(values, dtype=object)
    if obj.size:
        obj = np.vectorize(lambda v: int(v) % modulus, otypes=[object])(obj)
    return obj.astype(dtype_for(modulus))


def mul_mod(a: np.ndarray, b, modulus: int) -> np.ndarray:
    """Elementwise (a * b) % modulus without int64 overflow."""
    return (a * b) % modulus


def _limbs(x: np.ndarray, bits: int, count: int) -> list[np.ndarray]:
    mask = (1 << bits) - 1
    out = []
    for u in range(count):
        out.append(((x >> (u * bits)) & mask).astype(np.float64))
    return out


def matmul_mod(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    """Exact ``(a @ b) % modulus`` for non-negative residue matrices.

    For int64 inputs the operands are cut into limbs small enough that every
    float64 partial product sum is exact, so the heavy lifting goes through
    BLAS.  Object arrays fall back to exact Python-int dot products.
    """
    if a.dtype == object or b.dtype == object or modulus >= INT64_LIMIT:
        return np.dot(np.asarray(a, dtype=object), np.asarray(b, dtype=object)) % modulus
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    inner = a.shape[-1]
    if inner == 0:
        shape = a.shape[:-1] + b.shape[1:]
        return np.zeros(shape, dtype=np.int64)
    bits_a = max(int(a.max()).bit_length(), 1) if a.size else 1
    bits_b = max(int(b.max()).bit_length(), 1) if b.size else 1
    budget = _FLOAT_EXACT_BITS - max(inner - 1, 1).bit_length()
    if bits_a + bits_b <= budget:
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % modulus
    half = max(budget // 2, 1)
    la = min(bits_a, max(half, budget - bits_b))
    lb = budget - la
    if lb < 1:
        la, lb = half, budget - half
    na = -(-bits_a // la)
    nb = -(-bits_b // lb)
    a_parts = _limbs(a, la, na)
    b_parts = _limbs(b, lb, nb)
    out = None
    for u, au in enumerate(a_parts):
        for v, bv in enumerate(b_parts):
            part = (au @ bv).astype(np.int64) % modulus
            scale = pow(2, u * la + v * lb, modulus)
            term = (part * scale) % modulus
            out = term if out is None else (out + term) % modulus
    return out


def binomial_columns(length: int, modulus: int, dtype=None):
    """Yield ``(m, col)`` with ``col[i] = C(i, m) % modulus`` for i < length.

    Uses the hockey-stick identity C(i, m) = sum_{k<i} C(k, m-1), so no
    division ever happens and the values are exact for any modulus.
    """
    dtype = dtype or dtype_for(modulus)
    col = np.ones(length, dtype=dtype)
    if modulus == 1:
        col[:] = 0
    m = 0
    while True:
        yield m, col
        m += 1
        if m >= length:
            return
        nxt = np.zeros(length, dtype=dtype)
        nxt[1:] = np.cumsum(col[:-1]) % modulus
        col = nxt


def pascal_matrix(length: int, modulus: int) -> np.ndarray:
    """Matrix P with P[m, i] = C(i, m) % modulus, the group-ring -> monomial map."""
    dtype = dtype_for(modulus)
    out = np.zeros((length, length), dtype=dtype)
    for m, col in binomial_columns(length, modulus, dtype):
        out[m] = col
    return out


def cyclic_convolve(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    """Cyclic convolution of two 1-d residue vectors of equal length."""
    length = a.shape[0]
    nz_a = np.flatnonzero(a)
    nz_b = np.flatnonzero(b)
    if min(len(nz_a), len(nz_b)) <= 64:
        if len(nz_b) < len(nz_a):
            a, b, nz_a = b, a, nz_b
        out = np.zeros(length, dtype=b.dtype)
        for s in nz_a:
            out = (out + np.roll(b, int(s)) * a[s]) % modulus
        return out
    idx = (np.arange(length)[:, None] - np.arange(length)[None, :]) % length
    return matmul_mod(b[idx], a, modulus)


def lucas_transform(group: np.ndarray, p: int, n: int) -> np.ndarray:
    """Monomial coefficients mod p of sum_i g_i (1+T)^i, for i < p^n.

    Mod p, (1+T)^(i_0 + i_1 p + ...) = prod_k (1 + T^(p^k))^(i_k) (Lucas), so
    the length p^n Pascal transform factors into n transforms of size p.
    ``group`` has shape (p^n, ...) and holds residues mod p; the result is
    indexed the same way, by monomial exponent.
    """
    rest = group.shape[1:]
    if n == 0:
        return np.asarray(group, dtype=np.int64) % p
    small = pascal_matrix(p, p).astype(np.float64)
    # C-order reshape puts the most significant digit first.
    t = (np.asarray(group, dtype=np.int64) % p).astype(np.float64).reshape((p,) * n + rest)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(small, t, axes=([1], [axis])), 0, axis)
        t = np.fmod(t, p)
    return t.reshape((p**n,) + rest).astype(np.int64)
