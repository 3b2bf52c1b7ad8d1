"""Verification suites: each one expands a configuration into pass/fail records."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Optional

from sympy import isprime, primerange

from . import __version__
from .characters import DeltaChar, supported_even_characters
from .cyclotomic import (
    CycloCtx,
    alpha_class_search,
    d_rho_bridge,
    inv_pi_identity,
    lemma1_check,
    lemma5_trace,
    normal_basis_check,
    restriction_compatible,
    stickelberger_projection_check,
    t_element,
    teichmuller_alphas,
    theorem4_dn_check,
    thm1_tn_identity,
)
from .errors import NeedsHigherPrecision, PadicError
from .iwasawa import IwasawaPoly, lemma2_identities
from .lfunction import G_series, corollary1_sweep, interpolation_check, theorem5_check, theorem6_check
from .padic import PadicCtx
from .series import (
    derivative_vanishes_mod_p,
    lemma4_check,
    mirimanoff_at_zero_check,
    mirimanoff_poly,
)
from .unramified import make_splitting_ctx, roots_of_unity

PASS, FAIL, UNRESOLVED = "pass", "fail", "unresolved"
STATUS_RANK = {PASS: 0, UNRESOLVED: 1, FAIL: 2}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    primes: tuple[int, ...]
    n: int = 2
    N: int = 2
    d: Optional[tuple[int, ...]] = None
    theta: Optional[int] = None
    a: Optional[int] = None
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if not self.primes:
            raise ConfigError("no primes selected")
        for p in self.primes:
            if p < 5 or not isprime(p):
                raise ConfigError(f"p = {p} must be a prime >= 5")
        if not 0 <= self.n <= 3:
            raise ConfigError(f"n = {self.n} must lie in 0..3")
        if not 1 <= self.N <= 8:
            raise ConfigError(f"N = {self.N} must lie in 1..8")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")

    def provenance(self, p=None) -> dict:
        return {"p": list(self.primes) if p is None else p, "n": self.n, "N": self.N,
                "seed": self.seed, "version": __version__}

    def js(self, p: int, keep: Callable[[int], bool] = lambda j: True) -> list[int]:
        js = range(p - 1) if self.theta is None else [self.theta % (p - 1)]
        return [j for j in js if keep(j)]


def primes_up_to(p_max: int) -> tuple[int, ...]:
    return tuple(int(q) for q in primerange(5, p_max + 1))


@dataclass
class Record:
    statement: str
    parameters: dict
    status: str
    witness: Optional[int] = None
    runtime: float = 0.0
    detail: str = field(default="")

    def as_dict(self) -> dict:
        out = asdict(self)
        if not out["detail"]:
            del out["detail"]
        return out


def _timed(statement: str, parameters: dict, fn) -> Record:
    """Run fn() -> bool | (status, witness) and wrap the outcome as a record."""
    start = time.perf_counter()
    witness, detail = None, ""
    try:
        result = fn()
        if isinstance(result, tuple):
            status, witness = result
        else:
            status = PASS if result else FAIL
    except NeedsHigherPrecision as exc:
        status, detail = UNRESOLVED, str(exc)
    except PadicError as exc:
        status, detail = FAIL, f"{type(exc).__name__}: {exc}"
    return Record(statement, parameters, status, witness, round(time.perf_counter() - start, 6), detail)


def first_difference(lhs: IwasawaPoly, rhs: IwasawaPoly) -> Optional[int]:
    diff = (lhs - rhs).to_group_ring()
    rows = [i for i in range(diff.shape[0]) if any(int(c) for c in diff[i])]
    return rows[0] if rows else None


def _even_nontrivial(j: int) -> bool:
    return j % 2 == 0 and j != 0


def _not_one_or_omega(j: int) -> bool:
    return j not in (0, 1)


def _a_values(config: RunConfig, p: int) -> list[int]:
    return list(range(2, p)) if config.a is None else [config.a]


def _theta(p: int, j: int, N: int) -> DeltaChar:
    return DeltaChar(PadicCtx(p, N), j)


# -- suites, one prime at a time --------------------------------------------------

def suite_lemma1(config: RunConfig, p: int) -> Iterator[Record]:
    ctx = CycloCtx(p, config.n, config.N)
    for alpha in teichmuller_alphas(ctx):
        for a in ([2, p - 1, p + 1] if config.a is None else [config.a]):
            yield _timed("lemma1", {"p": p, "n": config.n, "N": config.N, "alpha": alpha, "a": a},
                         lambda: bool(lemma1_check(alpha, a, ctx)))


def suite_lemma2(config: RunConfig, p: int) -> Iterator[Record]:
    for d in range(config.n + 1):
        yield _timed("lemma2", {"p": p, "n": config.n, "d": d}, lambda: lemma2_identities(p, config.n, d))


def _mu_samples(p: int, N: int) -> list:
    """Primitive cube and fourth roots of unity in a splitting ring."""
    out = []
    for d in (3, 4):
        ring = make_splitting_ctx(p, N, d)
        out.extend((f"mu{d}[{k}]", rho) for k, rho in enumerate(roots_of_unity(ring, d)))
    return out


def suite_lemma3(config: RunConfig, p: int) -> Iterator[Record]:
    n, N = config.n, config.N
    samples = [(str(a), a) for a in _a_values(config, p)] + _mu_samples(p, N)
    for j in config.js(p):
        theta = _theta(p, j, N)
        for label, a in samples:
            params = {"p": p, "j": j, "a": label, "n": n, "N": N}

            def check():
                upper = mirimanoff_poly(theta, a, n + 1, N).restrict()
                lower = mirimanoff_poly(theta, a, n, N)
                w = first_difference(upper, lower)
                return (PASS, None) if w is None else (FAIL, w)

            yield _timed("lemma3", params, check)
            if isinstance(a, int):
                yield _timed("mirimanoff-at-zero", params, lambda: mirimanoff_at_zero_check(theta, a, n))


def suite_lemma4(config: RunConfig, p: int) -> Iterator[Record]:
    n, N = config.n, config.N
    samples = [(str(a), a) for a in _a_values(config, p)] + _mu_samples(p, N)
    for j in config.js(p):
        theta = _theta(p, j, N)
        for label, a in samples:
            yield _timed("lemma4", {"p": p, "j": j, "a": label, "n": n, "N": N},
                         lambda: lemma4_check(theta, a, n, N))


def lemma5_ells(p: int, hi: int = 200) -> list[int]:
    return [int(ell) for ell in primerange(max(7, p * p), hi + 1) if ell != p]


def suite_lemma5(config: RunConfig, p: int) -> Iterator[Record]:
    for ell in lemma5_ells(p):
        def check():
            r = lemma5_trace(ell, p)
            return r.matches and (r.exact.numerator % p != 0 or r.square_flag)

        yield _timed("lemma5", {"p": p, "ell": ell}, check)

    def search():
        found = alpha_class_search(p)
        return (PASS if found.confirmed else FAIL), found.alpha

    yield _timed("lemma5-alpha", {"p": p}, search)


def suite_lemma6(config: RunConfig, p: int) -> Iterator[Record]:
    n, N = config.n, config.N
    M = p**N
    for j in config.js(p, _not_one_or_omega):
        theta = _theta(p, j, N)

        def check():
            G = G_series(theta, n, N)
            unit = int(G.augmentation()) % p != 0
            sign = 1 if (j - 1) % 2 == 0 else -1
            base = int(G_series(theta, 0, N).augmentation()) == (p - 1) * sign % M
            return unit and base

        yield _timed("lemma6", {"p": p, "j": j, "n": n, "N": N}, check)


def suite_thm1(config: RunConfig, p: int) -> Iterator[Record]:
    ctx = CycloCtx(p, config.n, config.N)
    base = {"p": p, "n": config.n, "N": config.N}
    yield _timed("thm1-normal-basis", base, lambda: bool(normal_basis_check(t_element(ctx))))
    for alpha in teichmuller_alphas(ctx):
        params = dict(base, alpha=alpha)
        yield _timed("thm1-tn-identity", params, lambda: thm1_tn_identity(alpha, ctx))
        yield _timed("thm1-restriction", params, lambda: restriction_compatible(alpha, ctx))
        for j in config.js(p, _not_one_or_omega):
            theta = _theta(p, j, config.N)
            yield _timed("thm1-d-rho-bridge", dict(params, j=j), lambda: d_rho_bridge(theta, alpha, ctx))


def _mirimanoff_cases(config: RunConfig, p: int) -> list:
    return [(str(a), a, a % p == p - 1) for a in _a_values(config, p)] + \
        [(label, rho, False) for label, rho in _mu_samples(p, 1)]


def suite_thm2(config: RunConfig, p: int) -> Iterator[Record]:
    for j in config.js(p):
        theta = _theta(p, j, 1)
        for label, a, minus_one in _mirimanoff_cases(config, p):
            expected = minus_one and j % 2 == 1

            def check():
                test = derivative_vanishes_mod_p(theta, a, config.n)
                return (PASS if test.vanishes == expected else FAIL), test.witness

            yield _timed("thm2", {"p": p, "j": j, "a": label, "n": config.n}, check)


def suite_thm4(config: RunConfig, p: int) -> Iterator[Record]:
    ctx = CycloCtx(p, config.n, config.N)
    base = {"p": p, "n": config.n, "N": config.N}
    yield _timed("thm4-inv-pi", base, lambda: inv_pi_identity(ctx))
    for j in config.js(p, _even_nontrivial):
        theta = _theta(p, j, config.N)
        yield _timed("thm4-stickelberger", dict(base, j=j), lambda: stickelberger_projection_check(theta, ctx))
    for j in config.js(p, _not_one_or_omega):
        theta = _theta(p, j, config.N)
        for alpha in teichmuller_alphas(ctx):
            yield _timed("thm4-dn", dict(base, j=j, alpha=alpha), lambda: theorem4_dn_check(theta, alpha, ctx))


def suite_thm5(config: RunConfig, p: int) -> Iterator[Record]:
    ds = config.d or (2, 3, 4, 6, 8, 12)
    for d in ds:
        if d % p == 0:
            continue
        for j in config.js(p, _even_nontrivial):
            theta = _theta(p, j, config.N)
            yield _timed("thm5", {"p": p, "j": j, "d": d, "n": config.n, "N": config.N},
                         lambda: theorem5_check(theta, d, config.n, config.N))


def suite_thm6(config: RunConfig, p: int) -> Iterator[Record]:
    ds = config.d or (1, 3, 4)
    for d in ds:
        if d % p == 0:
            continue
        for index, chi in supported_even_characters(p, d, config.N):
            if config.theta is not None and chi.j != config.theta % (p - 1):
                continue

            def check():
                r = theorem6_check(chi, config.n, config.N)
                return (PASS if r else FAIL), r.witness

            yield _timed("thm6", {"p": p, "d": d, "index": index, "j": chi.j, "n": config.n, "N": config.N},
                         check)


def suite_cor1(config: RunConfig, p: int) -> Iterator[Record]:
    start = time.perf_counter()
    try:
        results = corollary1_sweep(p, config.n)
    except NeedsHigherPrecision as exc:
        yield Record("cor1", {"p": p, "n": config.n}, UNRESOLVED, None,
                     round(time.perf_counter() - start, 6), str(exc))
        return
    share = round((time.perf_counter() - start) / max(len(results), 1), 6)
    for j, r in results.items():
        if config.theta is not None and j != config.theta % (p - 1):
            continue
        yield Record("cor1", {"p": p, "j": j, "n": config.n}, PASS if r else FAIL, r.witness, share, r.reason)


def suite_interpolation(config: RunConfig, p: int) -> Iterator[Record]:
    for j in config.js(p, _even_nontrivial):
        theta = _theta(p, j, config.N)
        for m in range(1, 2 * (p - 1) + 1):
            yield _timed("interpolation", {"p": p, "j": j, "m": m, "n": config.n, "N": config.N},
                         lambda: interpolation_check(theta, m, config.n, config.N))


SUITES: dict[str, Callable[[RunConfig, int], Iterator[Record]]] = {
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "lemma3": suite_lemma3,
    "lemma4": suite_lemma4,
    "lemma5": suite_lemma5,
    "lemma6": suite_lemma6,
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "thm4": suite_thm4,
    "thm5": suite_thm5,
    "thm6": suite_thm6,
    "cor1": suite_cor1,
    "interpolation": suite_interpolation,
}


def _run_one(args) -> list[Record]:
    name, config, p = args
    return list(SUITES[name](config, p))


def run_suite(name: str, config: RunConfig) -> list[Record]:
    """All records of a suite, in prime order regardless of parallelism."""
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}")
    tasks = [(name, config, p) for p in config.primes]
    if config.jobs == 1 or len(tasks) == 1:
        chunks = map(_run_one, tasks)
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(_run_one, tasks))
    return [r for chunk in chunks for r in chunk]


def worst_status(records: list[Record]) -> str:
    return max((r.status for r in records), key=STATUS_RANK.__getitem__, default=PASS)
