"""``snc`` command-line front end.

Exit codes: 0 when everything checked passes, 1 for a failed check or a bad
input file, 2 when the request exceeds what the field or network allows.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from snc.errors import CapabilityError, DimensionMismatch, SNCError
from snc.formats import (emit_kernels, emit_matrix, parse_kernels, parse_matrix,
                         parse_network)
from snc.gf import FieldSpec
from snc.lnc import construct_decodable, is_decodable
from snc.network import min_cut_to_edge_set, primary_min_cut, primary_subsets
from snc.oracle import all_wiretap_sets, exhaustive_decodability, exhaustive_secrecy
from snc.slnc import SecureCode, build_family, failing_set, field_size_bound, reduce_rate

EXIT_OK, EXIT_FAIL, EXIT_CAPABILITY = 0, 1, 2


def _fmt_set(a: Sequence[str]) -> str:
    return "{" + ",".join(a) + "}"


def _load(args) -> tuple:
    net, f = parse_network(args.network)
    if getattr(args, "field", None):
        f = FieldSpec(args.field)
    return net, f


def _parse_pins(tokens: Sequence[str] | None) -> dict:
    pins: dict = {}
    for tok in tokens or ():
        key, sep, val = tok.partition("=")
        if not sep or key not in ("h", "theta"):
            raise argparse.ArgumentTypeError(f"bad pin {tok!r}; use h=<v1,v2,...> or theta=<t>")
        try:
            pins[key] = [int(x) for x in val.split(",")] if key == "h" else int(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad pin value in {tok!r}") from None
    return pins


def cmd_mincut(args) -> int:
    net, _ = _load(args)
    if args.edges:
        cap, _ = min_cut_to_edge_set(net, args.edges)
        a = net.edge_set(args.edges)
        print(f"mincut(s, {_fmt_set(a)}) = {cap}")
        print(f"primary cut: {_fmt_set(primary_min_cut(net, a))}")
        return EXIT_OK
    for t, cap in net.sink_capacities.items():
        print(f"mincut(s, {t}) = {cap}")
    print(f"C_min = {net.c_min}")
    return EXIT_OK


def cmd_primary_sets(args) -> int:
    net, _ = _load(args)
    coll = primary_subsets(net, args.security)
    for a in coll:
        print(_fmt_set(a))
    print(f"|A_{args.security}| = {len(coll)}")
    return EXIT_OK


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_construct(args) -> int:
    net, f = _load(args)
    n = net.c_min if args.dimension is None else args.dimension
    code = construct_decodable(net, n, f, args.seed)
    _write(args.out, emit_kernels(code))
    return EXIT_OK


def cmd_reduce(args) -> int:
    net, f = _load(args)
    code = parse_kernels(args.kernels, net, f)
    q = parse_matrix(args.Q, f)
    sc = SecureCode(code, q, args.rate, args.security)
    pins = _parse_pins(args.pin_choices)
    coll = primary_subsets(net, args.security)
    out, ctx = reduce_rate(sc, coll, h=pins.get("h"), theta=pins.get("theta"))
    print(f"kept columns: {list(ctx.kept)}")
    print("dependent sets: " + " ".join(_fmt_set(a) for a in ctx.partition_dependent))
    print("independent sets: " + " ".join(_fmt_set(a) for a in ctx.partition_independent))
    print(f"h = {list(ctx.h)}")
    for a, t in ctx.theta_table.items():
        print(f"theta_{_fmt_set(a)} = {t}")
    print(f"theta = {ctx.theta}")
    print(f"k = {list(ctx.k)}")
    print(f"removed column: {ctx.removed_column + 1}")
    print("source kernel:")
    sys.stdout.write(emit_matrix(out.code.source_kernel))
    print("Q:")
    sys.stdout.write(emit_matrix(out.Q))
    if args.out_kernels:
        _write(args.out_kernels, emit_kernels(out.code))
    if args.out_q:
        _write(args.out_q, emit_matrix(out.Q))
    return EXIT_OK


def cmd_family(args) -> int:
    net, f = _load(args)
    base = parse_kernels(args.kernels, net, f) if args.kernels else None
    coll = primary_subsets(net, args.security)
    bound = field_size_bound(net, coll)
    fam = build_family(net, args.security, f, args.seed, base_code=base,
                       best_effort=args.best_effort, collection=coll)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    report = [
        f"network: {len(net.nodes)} nodes, {len(net.edges)} edges, C_min = {net.c_min}",
        f"field: F_{f.p}",
        f"security level: {args.security}",
        f"|A_{args.security}| = {len(coll)}",
        "primary sets: " + " ".join(_fmt_set(a) for a in coll),
        f"field-size check: q = {f.p} > max(|T|, |A_r|) = {bound}: "
        + ("yes" if f.p > bound else "no (best effort)"),
        f"shared non-source kernels: {'yes' if fam.shares_kernels() else 'no'}",
    ]
    ok = fam.shares_kernels()
    for m in fam.members:
        sec = failing_set(m.code, m.Q, m.rate, m.security_level, coll) is None
        dec = is_decodable(m.code)
        ok = ok and sec and dec
        report.append(f"rate {m.rate}: security {'PASS' if sec else 'FAIL'}, "
                      f"decodability {'PASS' if dec else 'FAIL'}")
        (outdir / f"rate-{m.rate}.kern").write_text(emit_kernels(m.code))
        (outdir / f"rate-{m.rate}.Q").write_text(emit_matrix(m.Q))
    text = "\n".join(report) + "\n"
    (outdir / "report.txt").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    net, f = _load(args)
    code = parse_kernels(args.kernels, net, f)
    q = parse_matrix(args.Q, f)
    n = code.dimension
    if args.rate + args.security != n:
        print(f"FAIL dimension: rate {args.rate} + security {args.security} != dimension {n}")
        return EXIT_FAIL
    if q.shape != (n, n):
        raise DimensionMismatch(f"Q has shape {q.shape}, expected {(n, n)}")
    sc = SecureCode(code, q, args.rate, args.security)
    coll = primary_subsets(net, args.security)
    results = []
    bad = failing_set(code, q, args.rate, args.security, coll)
    results.append(("security", bad is None, bad))
    results.append(("decodability", is_decodable(code), None))
    if args.oracle:
        rep = exhaustive_secrecy(sc, all_wiretap_sets(net, args.security))
        results.append(("oracle-secrecy", rep.passed, rep.failing_set))
        drep = exhaustive_decodability(sc)
        results.append(("oracle-decodability", drep.passed,
                        (drep.failing_sink,) if drep.failing_sink else None))
    for name, passed, witness in results:
        line = f"{'PASS' if passed else 'FAIL'} {name}"
        if not passed and witness is not None:
            line += f" {_fmt_set(witness)}"
        print(line)
    return EXIT_OK if all(p for _, p, _ in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="snc", description="Secure linear network codes.")
    sub = ap.add_subparsers(dest="command", required=True)

    def net_cmd(name: str, help: str):
        p = sub.add_parser(name, help=help)
        p.add_argument("network")
        p.add_argument("--field", type=int, help="override the field order in the network file")
        return p

    p = net_cmd("mincut", "min-cut capacities, or the primary cut of an edge set")
    p.add_argument("edges", nargs="*")
    p.set_defaults(func=cmd_mincut)

    p = net_cmd("primary-sets", "list the primary edge subsets of size r")
    p.add_argument("--security", "-r", type=int, required=True)
    p.set_defaults(func=cmd_primary_sets)

    p = net_cmd("construct", "build a decodable linear network code")
    p.add_argument("--dimension", "-n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_construct)

    p = net_cmd("reduce", "one rate-reduction step")
    p.add_argument("kernels")
    p.add_argument("Q")
    p.add_argument("--rate", type=int, required=True)
    p.add_argument("--security", "-r", type=int, required=True)
    p.add_argument("--pin-choices", nargs="+", metavar="KEY=VALUE")
    p.add_argument("--out-kernels")
    p.add_argument("--out-q")
    p.set_defaults(func=cmd_reduce)

    p = net_cmd("family", "secure codes at every rate for a fixed security level")
    p.add_argument("--security", "-r", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kernels")
    p.add_argument("--best-effort", action="store_true")
    p.add_argument("--out", default="family")
    p.set_defaults(func=cmd_family)

    p = net_cmd("verify", "check security and decodability of a secure code")
    p.add_argument("kernels")
    p.add_argument("Q")
    p.add_argument("--rate", type=int, required=True)
    p.add_argument("--security", "-r", type=int, required=True)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (SNCError, OSError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
