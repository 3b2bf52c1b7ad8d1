"""Two independent routes to the same group-ring element.

The cyclotomic oracle works in (Z/p^N)[x]/Phi_{p^(n+1)} and applies a
Coleman-type derivative to cyclotomic units; the Iwasawa side builds the
Mirimanoff series directly. Projecting the oracle onto a character component
must reproduce the series.

Run with: python3 demos/oracle_crosscheck.py
"""
from mirimanoff import DeltaChar, PadicCtx
from mirimanoff.cyclotomic import (
    CycloCtx,
    d_rho_bridge,
    inv_pi_identity,
    teichmuller_alphas,
    theorem4_dn_check,
    thm1_tn_identity,
)

for p, n in [(5, 0), (5, 1), (7, 1)]:
    ctx = CycloCtx(p, n, 2)
    alphas = teichmuller_alphas(ctx)
    print(f"p={p} n={n}: ring degree {ctx.degree}, {len(alphas)} admissible alpha")
    print(f"  inverse-uniformizer identity: {inv_pi_identity(ctx)}")
    print(f"  T_n identity for all alpha:   {all(thm1_tn_identity(a, ctx) for a in alphas)}")
    for j in range(2, p - 1):
        theta = DeltaChar(PadicCtx(p, 2), j)
        bridge = all(d_rho_bridge(theta, a, ctx) for a in alphas)
        dn = all(theorem4_dn_check(theta, a, ctx) for a in alphas)
        print(f"  omega^{j}: derivative bridge {bridge}, D_n image {dn}")
