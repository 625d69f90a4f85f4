"""Command-line interface.

Exit status: 0 on success, 1 when a mathematical contract fails (non-unit,
bad normalization, ...), 2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .adic import TOP, Domain, parse_domain
from .errors import TateError
from .experiments import ExperimentReport, char_p_report, unimodular_witness
from .inversion import adic_lift_inverse, decay_profile, invert_map, transfer_check
from .io import (
    ParseError,
    dump_json,
    load_json,
    load_map,
    map_from_json,
    map_to_json,
    parse_series,
    series_to_json,
)
from .maps import PolyMap, normalize
from .oracles import bijectivity_oracle, generate_tame, lagrange_oracle
from .series import tate_invert_unit, tate_is_unit

log = logging.getLogger("tatejac")


def _fmt(v):
    return "TOP" if v == TOP else str(v)


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        print(dump_json(payload))
    else:
        print("\n".join(lines))


def _domain_arg(text):
    try:
        return parse_domain(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _map_or_series(args) -> PolyMap:
    if getattr(args, "map", None):
        return load_map(args.map, args.domain)
    if getattr(args, "series", None):
        if args.domain is None:
            raise ParseError("--series needs --domain")
        return PolyMap([parse_series(args.series, args.domain)])
    raise ParseError("pass --map FILE or --series EXPR")


# --------------------------------------------------------------------------
# subcommands


def cmd_invert(args):
    F = _map_or_series(args)
    if any(c != 0 for c in F.constant_terms()):
        norm = normalize(F)
        from .inversion import formal_inverse

        G = formal_inverse(norm.normalized, args.degree)
        payload = {
            "normalized_inverse": map_to_json(G),
            "shift": [str(s) for s in norm.shift],
            "linear": [[str(a) for a in row] for row in norm.linear],
            "note": "F(0) != 0: inverse of F is normalized_inverse o L^{-1}(X - shift)",
        }
        lines = [f"F(0) = {list(map(str, norm.shift))} != 0; inverse of the normalized map:"]
    else:
        G = invert_map(F, args.degree)
        payload = {"inverse": map_to_json(G)}
        lines = [f"inverse through degree {args.degree - 1} over {F.domain}:"]
    lines += [f"  g{i + 1} = {g}" for i, g in enumerate(G)]
    _emit(args, payload, lines)
    return 0


def cmd_unit_check(args):
    f = parse_series(args.series, args.domain) if args.series else _map_or_series(args)[0]
    check = tate_is_unit(f)
    payload = {"series": series_to_json(f), "unit": check.is_unit, "reason": check.reason}
    if check.monomial is not None:
        payload["certificate"] = list(check.monomial)
    lines = [("unit" if check else "not a unit") + f": {check.reason}"]
    if check:
        inv = tate_invert_unit(f, cap=args.degree)
        payload["inverse"] = series_to_json(inv)
        lines.append(f"inverse (mod degree {args.degree}): {inv}")
    _emit(args, payload, lines)
    return 0 if check else 1


def cmd_lift(args):
    F = load_map(args.map, args.domain)
    G0 = load_map(args.g0, F.domain)
    res = adic_lift_inverse(F, G0, precision=args.precision, degree=args.degree)
    ledger = [
        {"step": s.step, "error_valuation": s.error_valuation, "required": s.required}
        for s in res.ledger
    ]
    payload = {"inverse": map_to_json(res.inverse), "ledger": ledger, "steps": res.steps}
    lines = ["step  error valuation  required"]
    lines += [f"{s.step:>4}  {_fmt(s.error_valuation):>15}  {s.required:>8}" for s in res.ledger]
    lines += [f"  g{i + 1} = {g}" for i, g in enumerate(res.inverse)]
    _emit(args, payload, lines)
    return 0


def cmd_transfer(args):
    F = load_map(args.map, args.domain)
    rep = transfer_check(F, degree=args.degree, precision=args.precision)
    payload = {
        "invertible_mod_I": rep.invertible_mod_I,
        "obstruction": rep.obstruction,
        "heuristic": rep.heuristic,
        "evidence": rep.evidence,
        "lifted": map_to_json(rep.lifted) if rep.lifted else None,
    }
    lines = [
        f"invertible mod I: {rep.invertible_mod_I}" + (" (heuristic)" if rep.heuristic else ""),
        f"obstruction: {rep.obstruction}",
    ] + [f"  - {e}" for e in rep.evidence]
    if rep.lifted:
        lines += [f"  g{i + 1} = {g}" for i, g in enumerate(rep.lifted)]
    _emit(args, payload, lines)
    return 0


def cmd_profile(args):
    G = load_map(args.map, args.domain)
    prof = decay_profile(G)
    payload = prof.to_json()
    lines = ["degree  min valuation  tail min"]
    lines += [
        f"{d:>6}  {_fmt(v):>13}  {_fmt(t):>8}"
        for d, (v, t) in enumerate(zip(prof.entries, prof.tail_min))
    ]
    _emit(args, payload, lines)
    return 0


def _witness_one(job):
    obj, p, N, D, point = job
    F = map_from_json(obj, Domain.truncated(p, N))
    return unimodular_witness(F, D, point).to_json()


def cmd_witness(args):
    obj = load_json(args.map)
    if isinstance(obj, dict):
        obj = {k: v for k, v in obj.items() if k != "domain"}
    point = [int(a) for a in args.point.split(",")] if args.point else None
    primes = [int(p) for p in str(args.p).split(",")]
    jobs = [(obj, p, args.N, args.degree, point) for p in primes]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(_witness_one, jobs))
    else:
        reports = [_witness_one(j) for j in jobs]
    parsed = [json.loads(r) for r in reports]
    if args.json:
        print(reports[0] if len(reports) == 1 else dump_json(parsed))
    else:
        for p, rep in zip(primes, parsed):
            out = rep["outcome"]
            print(f"p = {p}: b = {out['b']}, F(b) = {out['F_of_b']}, "
                  f"hits target: {out['F_of_b_equals_target']}, unimodular: {out['unimodular']}, "
                  f"tail precision: {out['tail_precision']}")
            for c in rep["caveats"]:
                print(f"  caveat: {c}")
    return 0


def cmd_char_p(args):
    rep: ExperimentReport = char_p_report(args.c, args.n, args.D)
    out = rep.outcome
    lines = [
        f"F = (X_i - X_i^{args.c}) over (Z,({args.c})), n = {args.n}, D = {args.D}",
        f"det JF Tate unit: {out['tate_unit']} ({out['tate_unit_reason']})",
        f"degrees with valuation-0 coefficients: {out['valuation_zero_degrees']}",
        f"Lagrange oracle agreement: {out['lagrange_agreement']}",
        f"bijective mod {args.c}: {out['bijective_mod_c']}",
        out["conclusion"],
    ]
    if args.json:
        print(rep.to_json())
    else:
        print("\n".join(lines))
    return 0


def cmd_oracle(args):
    if args.oracle == "lagrange":
        f = parse_series(args.series, args.domain or Domain.rational())
        g = lagrange_oracle(f, args.degree)
        _emit(args, {"inverse": series_to_json(g)}, [f"g = {g}"])
    else:
        F = load_map(args.map, args.domain)
        ok = bijectivity_oracle(F, args.m)
        _emit(args, {"bijective": ok, "m": args.m}, [f"bijective on (Z/{args.m})^{F.n}: {ok}"])
    return 0


def cmd_gen(args):
    pair = generate_tame(args.seed, args.n, args.degree, args.length, args.domain)
    if args.out_f:
        Path(args.out_f).write_text(dump_json(map_to_json(pair.F)) + "\n")
    if args.out_g:
        Path(args.out_g).write_text(dump_json(map_to_json(pair.G)) + "\n")
    payload = {"F": map_to_json(pair.F), "G": map_to_json(pair.G), "steps": pair.steps}
    lines = [f"F{i + 1} = {f}" for i, f in enumerate(pair.F)]
    lines += [f"G{i + 1} = {g}" for i, g in enumerate(pair.G)]
    _emit(args, payload, lines)
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tatejac", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, map_required=False):
        p.add_argument("--domain", type=_domain_arg, default=None,
                       help="z-adic:M:N, z-exact:M or q (overrides the file header)")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        if map_required:
            p.add_argument("--map", required=True)

    p = sub.add_parser("invert", help="formal inverse of a map")
    common(p)
    p.add_argument("--map")
    p.add_argument("--series")
    p.add_argument("--degree", type=int, default=12)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("unit-check", help="Tate unit criterion and inverse")
    common(p)
    p.add_argument("--series")
    p.add_argument("--map")
    p.add_argument("--degree", type=int, default=8)
    p.set_defaults(func=cmd_unit_check)

    p = sub.add_parser("lift", help="I-adic lifting of an inverse mod I")
    common(p, map_required=True)
    p.add_argument("--g0", required=True)
    p.add_argument("--precision", type=int)
    p.add_argument("--degree", type=int, default=12)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("transfer", help="invert mod I, then lift")
    common(p, map_required=True)
    p.add_argument("--degree", type=int, default=16)
    p.add_argument("--precision", type=int)
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("profile", help="per-degree coefficient valuations of a map")
    common(p, map_required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("witness", help="unimodular witness b = G(1)")
    p.add_argument("--map", required=True)
    p.add_argument("--p", required=True, help="prime or comma-separated primes")
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--degree", type=int, default=16)
    p.add_argument("--point", help="target point, comma separated (default all ones)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("char-p", help="diagnostics for X - X^c over (Z,(c))")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--D", type=int, default=64)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_char_p)

    p = sub.add_parser("oracle", help="independent oracles")
    p.add_argument("oracle", choices=["lagrange", "bijective"])
    common(p)
    p.add_argument("--series")
    p.add_argument("--map")
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="random tame automorphism with its inverse")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--length", type=int, default=3)
    p.add_argument("--domain", type=_domain_arg, default=Domain.rational())
    p.add_argument("--out-f")
    p.add_argument("--out-g")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
