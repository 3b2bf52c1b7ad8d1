"""Command-line front end.

Exit codes: 0 when every record passes, 1 on any fail or unresolved record,
2 on a configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .characters import DeltaChar
from .cyclotomic import lemma5_trace
from .errors import PadicError
from .lfunction import f_series, lambda_rows
from .padic import PadicCtx
from .series import mirimanoff_poly
from .suites import SUITES, PASS, ConfigError, RunConfig, lemma5_ells, primes_up_to, run_suite, worst_status


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, action="append", help="prime (repeatable)")
    common.add_argument("--p-max", type=int, help="every prime 5 <= p <= P_MAX")
    common.add_argument("--n", type=int, default=2, help="level (default 2)")
    common.add_argument("--N", type=int, default=2, help="p-adic precision (default 2)")
    common.add_argument("--theta", type=int, help="restrict to theta = omega^j")
    common.add_argument("--d", type=int, action="append", help="auxiliary modulus (repeatable)")
    common.add_argument("--a", type=int, help="restrict to one integer a")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0,
                        help="recorded in provenance; factor choices are deterministic")

    parser = argparse.ArgumentParser(prog="mirimanoff", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("--suite", required=True, choices=sorted(SUITES))
    sub.add_parser("lambda-table", parents=[common], help="mu and lambda for even characters")
    sub.add_parser("fseries", parents=[common], help="coefficients of f(T, theta)")
    sub.add_parser("mirimanoff", parents=[common], help="coefficients of M(T, theta, a)")
    sub.add_parser("trace", parents=[common], help="exact and closed-form traces for l <= 200")
    return parser


def _config(args) -> RunConfig:
    primes = set(args.p or [])
    if args.p_max is not None:
        primes |= set(primes_up_to(args.p_max))
    return RunConfig(tuple(sorted(primes)), args.n, args.N, tuple(args.d) if args.d else None,
                     args.theta, args.a, args.seed, args.jobs)


def _csv(rows: list[list], header: list[str], provenance: dict) -> str:
    buf = io.StringIO()
    buf.write("# " + " ".join(f"{k}={v}" for k, v in provenance.items()) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _flag(value: Optional[bool]) -> str:
    return "" if value is None else str(value).lower()


def _cmd_verify(args, config: RunConfig) -> tuple[str, int]:
    records = run_suite(args.suite, config)
    status = worst_status(records)
    if args.format == "csv":
        rows = [[r.statement, json.dumps(r.parameters, sort_keys=True), r.status,
                 "" if r.witness is None else r.witness, r.runtime] for r in records]
        text = _csv(rows, ["statement", "parameters", "status", "witness", "runtime"], config.provenance())
    else:
        text = json.dumps({"provenance": config.provenance(), "suite": args.suite, "status": status,
                           "records": [r.as_dict() for r in records]}, indent=2) + "\n"
    return text, 0 if status == PASS else 1


def _cmd_lambda(args, config: RunConfig) -> tuple[str, int]:
    rows = [r for p in config.primes for r in lambda_rows(p, config.n)]
    if config.theta is not None:
        rows = [r for r in rows if r.j == config.theta]
    ok = all(r.mu == 0 and r.lam is not None for r in rows)
    if args.format == "json":
        text = json.dumps({"provenance": config.provenance(),
                           "rows": [{"p": r.p, "j": r.j, "mu": r.mu, "lambda": r.lam,
                                     "fprime_nonzero": r.fprime_nonzero} for r in rows]}, indent=2) + "\n"
    else:
        text = _csv([[r.p, r.j, r.mu, "" if r.lam is None else r.lam, _flag(r.fprime_nonzero)] for r in rows],
                    ["p", "j", "mu", "lambda", "fprime_nonzero"], config.provenance())
    return text, 0 if ok else 1


def _coeff_dump(config: RunConfig, build) -> list[dict]:
    out = []
    for p in config.primes:
        for j in config.js(p):
            poly = build(DeltaChar(PadicCtx(p, config.N), j))
            if poly is None:
                continue
            coeffs = [[int(c) for c in row] for row in poly.monomial()]
            out.append({"p": p, "j": j, "monomial": coeffs if poly.ring.degree > 1 else [c[0] for c in coeffs]})
    return out


def _cmd_fseries(args, config: RunConfig) -> tuple[str, int]:
    def build(theta):
        return f_series(theta, config.n, config.N).poly if theta.is_even() else None

    series = _coeff_dump(config, build)
    return json.dumps({"provenance": config.provenance(), "series": series}, indent=2) + "\n", 0


def _cmd_mirimanoff(args, config: RunConfig) -> tuple[str, int]:
    if config.a is None:
        raise ConfigError("mirimanoff needs --a")
    series = _coeff_dump(config, lambda theta: mirimanoff_poly(theta, config.a, config.n, config.N))
    return json.dumps({"provenance": config.provenance(), "a": config.a, "series": series}, indent=2) + "\n", 0


def _cmd_trace(args, config: RunConfig) -> tuple[str, int]:
    rows = []
    ok = True
    for p in config.primes:
        for ell in lemma5_ells(p):
            r = lemma5_trace(ell, p)
            ok &= r.matches
            rows.append([p, ell, str(r.exact), str(r.closed), _flag(r.matches), _flag(r.square_flag)])
    if args.format == "json":
        keys = ["p", "ell", "exact", "closed", "matches", "square_flag"]
        text = json.dumps({"provenance": config.provenance(), "rows": [dict(zip(keys, r)) for r in rows]},
                          indent=2) + "\n"
    else:
        text = _csv(rows, ["p", "ell", "exact", "closed", "matches", "square_flag"], config.provenance())
    return text, 0 if ok else 1


COMMANDS = {
    "verify": _cmd_verify,
    "lambda-table": _cmd_lambda,
    "fseries": _cmd_fseries,
    "mirimanoff": _cmd_mirimanoff,
    "trace": _cmd_trace,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        config = _config(args)
        text, code = COMMANDS[args.command](args, config)
    except (ConfigError, PadicError) as exc:
        print(f"mirimanoff: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
