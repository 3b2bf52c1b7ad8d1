"""Exact traces of 1/(zeta_l - 1) against their closed form.

For each p the table lists primes l >= p^2, the exact rational trace computed
in Q(zeta_l), the closed form, and whether the value is a square mod p.

Run with: python3 demos/trace_table.py
"""
from mirimanoff.cyclotomic import alpha_class_search, lemma5_trace
from mirimanoff.suites import lemma5_ells

for p in (5, 7, 11, 13):
    print(f"p = {p}")
    for ell in lemma5_ells(p):
        r = lemma5_trace(ell, p)
        print(f"  l={ell:3d}  exact={str(r.exact):>6}  closed={str(r.closed):>6}  "
              f"match={r.matches}  square={r.square_flag}")

# %% a residue class of primes where the non-square case occurs
for p in (5, 7, 11, 13):
    found = alpha_class_search(p)
    print(f"p={p}: alpha={found.alpha} confirmed on l in {found.primes[:4]}...")
