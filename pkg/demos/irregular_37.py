"""The irregular pair (37, 32): where lambda becomes positive.

Run with: python3 demos/irregular_37.py
"""
from sympy import bernoulli

from mirimanoff import DeltaChar, PadicCtx, f_series, lambda_rows

p = 37

# %% Bernoulli numerators divisible by p mark the irregular indices
irregular = [j for j in range(2, p - 2, 2) if bernoulli(j).p % p == 0]
print(f"irregular indices for p={p}: {irregular}")

# %% mu and lambda of every even nontrivial branch at level 1
rows = lambda_rows(p, 1)
print("j  mu lambda f'!=0")
for r in rows:
    marker = "  <-" if r.lam else ""
    print(f"{r.j:2d} {r.mu:2d} {r.lam:6d} {str(r.fprime_nonzero):>6}{marker}")

# %% the series itself: constant term vanishes mod p, linear term does not
f = f_series(DeltaChar(PadicCtx(p, 2), 32), 1, 2)
coeffs = f.poly.monomial()[:4, 0]
print(f"first coefficients of f(T, omega^32) mod {p}^2: {[int(c) for c in coeffs]}")
print(f"reduced mod {p}: {[int(c) % p for c in coeffs]}")
