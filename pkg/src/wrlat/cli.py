"""Command-line front end: ``wrlat <command> ...`` (or ``python -m wrlat``).

Exit codes: 0 ok / verified, 1 usage, 2 validation, 3 verification mismatch,
4 search ceiling reached.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys

from .classes import class_witnesses, conic_points
from .lattice import ValidationError, gram_of, parse_class, sublattice_gram
from .oracle import CeilingReached, brute_wr_census, find_wr_sublattice, rescale_to_integral
from .reduction import reduced, similarity_class_of
from .sublattices import enumerate_all_wr, enumerate_similar
from .zeta import (
    CoeffSeries,
    growth_report,
    sandwich_check,
    z_class_epstein_partial,
)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_MISMATCH, EXIT_CEILING = 0, 1, 2, 3, 4



class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit(text: str, path):
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _class_arg(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    cls = parse_class(value)
    if cls.is_square_class:
        print(f"note: {name} {cls.text} is the square class, admitted with p = 0", file=sys.stderr)
    return cls


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def cmd_classes(args):
    _require(args, "d", "q_max")
    witnesses = class_witnesses(args.d, args.q_max)
    header = ["p", "r", "q", "D", "m", "n", "e"] + (["mult"] if args.multiplicity else [])
    rows = []
    for c, ws in witnesses.items():
        m, n = ws[0]
        e = 0 if c.D % 2 == 0 or (m * n) % 2 == 0 else 1
        row = [c.p, c.r, c.q, c.D, m, n, e]
        if args.multiplicity:
            row.append(len(ws))
        rows.append(row)
    _emit(_csv(header, rows), args.out)
    return EXIT_OK


def _records(ambient, by_index):
    omega = gram_of(ambient, scaled=True)
    for n, handles in by_index.items():
        for h, witnesses in handles.items():
            yield {
                "ambient": ambient.text,
                "target": h.target.text,
                "index": n,
                "hnf": list(h.hnf),
                "gram_reduced": list(reduced(sublattice_gram(omega, h.matrix)).entries),
                "witnesses": witnesses,
            }


def cmd_sublattices(args):
    ambient = _class_arg(args, "ambient")
    target = _class_arg(args, "target")
    _require(args, "index_max")
    found = enumerate_similar(ambient, target, args.index_max)
    lines = "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in _records(ambient, found))
    _emit(lines, args.out)
    return EXIT_OK


def _wr_series(ambient, N, threads):
    by_index = enumerate_all_wr(ambient, N, threads=threads)
    return CoeffSeries({n: len(hs) for n, hs in by_index.items()}, N), by_index


def cmd_count_wr(args):
    ambient = _class_arg(args, "ambient")
    _require(args, "index_max")
    N = args.index_max
    series, _ = _wr_series(ambient, N, args.threads)
    series_csv = _csv(["n", "c_n"], [[n, c] for n, c in enumerate(series.as_list(), start=1)])
    checkpoints = args.checkpoints or [2**j for j in range(N.bit_length()) if 2**j <= N]
    rows = []
    for g in growth_report(series, checkpoints):
        rows.append(
            [
                g.N,
                g.C,
                fmt(g.C_over_N),
                "" if g.C_over_NlogN is None else fmt(g.C_over_NlogN),
                fmt(g.C_over_N2),
                "" if g.doubling is None else fmt(g.doubling),
            ]
        )
    growth_csv = _csv(["N", "C", "C_over_N", "C_over_NlogN", "C_over_N2", "doubling"], rows)
    _emit(series_csv, args.series_out)
    if args.growth_out:
        _emit(growth_csv, args.growth_out)
    elif args.series_out:
        _emit(growth_csv, None)
    return EXIT_OK


def cmd_zeta(args):
    ambient = _class_arg(args, "ambient")
    _require(args, "s", "index_max")
    s, N = args.s, args.index_max
    series, by_index = _wr_series(ambient, N, args.threads)
    per_class: dict = {}
    for n, handles in by_index.items():
        for h in handles:
            per_class.setdefault(h.target, []).append(n)
    out = [f"ambient {ambient.text} s {fmt(s)} index_max {N}"]
    out.append(f"zeta_WR_partial {fmt(series.partial_sum(s))}")
    out.append(f"sublattices {series.cumulative()}")
    out.append("target,count,Z_class,Z_epstein_raw")
    for target in sorted(per_class, key=lambda c: c.sort_key()):
        indices = per_class[target]
        z = sum(n**-s for n in sorted(indices))
        raw = z_class_epstein_partial(ambient, target, s, N)
        out.append(f"\"{target.text}\",{len(indices)},{fmt(z)},{fmt(raw)}")
    print("\n".join(out))
    return EXIT_OK


def cmd_sandwich(args):
    _require(args, "d", "s", "q_max")
    rep = sandwich_check(args.d, args.s, args.q_max, args.box)
    print(f"D {rep.D} s {fmt(rep.s)} q_max {rep.q_max} box {rep.box}")
    print(f"lower_bound {fmt(rep.lower)}")
    print(f"zeta_d_partial {fmt(rep.zeta_d)} tail_allowance {fmt(rep.zeta_d_tail)}")
    print(f"zeta_m_partial {fmt(rep.zeta_m)}")
    print(f"epstein_partial {fmt(rep.epstein)} tail_bound {fmt(rep.epstein_tail)}")
    for key, margin in rep.margins.items():
        status = rep.status.get(key, "")
        print(f"margin {key} {fmt(margin)} {status}".rstrip())
    return EXIT_OK if all(v != "fail" for v in rep.status.values()) else EXIT_VALIDATION


def cmd_conic(args):
    _require(args, "d", "q_max")
    pts = conic_points(args.d, args.q_max)
    text = _csv(["p", "r", "q"], [[pt.p, pt.r, pt.q] for pt in pts])
    if args.s is not None:
        total = sum(pt.q ** -args.s for pt in pts)
        text += f"# points {len(pts)} height_zeta_partial {fmt(total)}\n"
    _emit(text, args.out)
    return EXIT_OK


def verify(ambient, N, threads=1) -> tuple[bool, list[str], int]:
    """Compare the formula path with the brute-force census. Returns (same, diffs, count)."""
    formula = enumerate_all_wr(ambient, N, threads=threads)
    census = brute_wr_census(gram_of(ambient, scaled=True), N)
    diffs = []
    total = 0
    for n in range(1, N + 1):
        f = {(h.hnf, h.target) for h in formula.get(n, {})}
        b = {((T[0][0], T[0][1], T[1][1]), c) for T, c in census.get(n, [])}
        total += len(b)
        if f != b:
            for item in sorted(b - f, key=str):
                diffs.append(f"index {n}: oracle only {item[0]} {item[1].text}")
            for item in sorted(f - b, key=str):
                diffs.append(f"index {n}: formula only {item[0]} {item[1].text}")
    return not diffs, diffs, total


def cmd_verify(args):
    ambient = _class_arg(args, "ambient")
    _require(args, "index_max")
    same, diffs, total = verify(ambient, args.index_max, args.threads)
    if same:
        print(f"identical, {args.index_max} indices, {total} sublattices")
        return EXIT_OK
    for line in diffs:
        print(line)
    print(f"mismatch, {len(diffs)} differences")
    return EXIT_MISMATCH


def cmd_find_wr(args):
    _require(args, "gram")
    parts = args.gram.split(",")
    if len(parts) != 3:
        raise UsageError(f"--gram expects g11,g12,g22, got {args.gram!r}")
    try:
        alpha, G = rescale_to_integral(parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad Gram entries {args.gram!r}: {exc}") from None
    try:
        T, index = find_wr_sublattice(G, ceiling=args.ceiling)
    except CeilingReached as exc:
        print(str(exc))
        return EXIT_CEILING
    H = sublattice_gram(G, T)
    cls = similarity_class_of(H)
    print(f"scale {alpha}")
    print(f"gram_integral {G.g11},{G.g12},{G.g22}")
    print(f"hnf {T[0][0]},{T[0][1]},{T[1][1]}")
    print(f"index {index}")
    print(f"gram_reduced {','.join(map(str, reduced(H).entries))}")
    print(f"class {cls.text}")
    return EXIT_OK


def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    env_threads = os.environ.get("WRLAT_THREADS")
    parser = _Parser(prog="wrlat", description="Well-rounded sublattices of planar arithmetic lattices.")
    parser.add_argument("--config", help="file of 'key = value' lines presetting any flag")
    parser.add_argument("--threads", type=int, default=int(env_threads) if env_threads else 1)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("classes", help="IWR classes of type D as CSV")
    p.add_argument("--d", type=int)
    p.add_argument("--q-max", type=int)
    p.add_argument("--out")
    p.add_argument("--multiplicity", action="store_true", help="append the number of (m, n) witnesses")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("sublattices", help="sublattices of Omega(ambient) similar to Omega(target), JSON lines")
    p.add_argument("--ambient")
    p.add_argument("--target")
    p.add_argument("--index-max", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sublattices)

    p = sub.add_parser("count-wr", help="WR coefficient series and growth table")
    p.add_argument("--ambient")
    p.add_argument("--index-max", type=int)
    p.add_argument("--series-out")
    p.add_argument("--growth-out")
    p.add_argument("--checkpoints", type=_int_list)
    p.set_defaults(func=cmd_count_wr)

    p = sub.add_parser("zeta", help="partial sums of the WR zeta-function")
    p.add_argument("--ambient")
    p.add_argument("--s", type=float)
    p.add_argument("--index-max", type=int)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("sandwich", help="check the class zeta-function bounds numerically")
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--q-max", type=int)
    p.add_argument("--box", type=int)
    p.set_defaults(func=cmd_sandwich)

    p = sub.add_parser("conic", help="primitive points on p^2 + D r^2 = q^2")
    p.add_argument("--d", type=int)
    p.add_argument("--q-max", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_conic)

    p = sub.add_parser("verify", help="formula path against the brute-force oracle")
    p.add_argument("--ambient")
    p.add_argument("--index-max", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("find-wr", help="least-index WR sublattice of a rational Gram matrix")
    p.add_argument("--gram")
    p.add_argument("--ceiling", type=int, default=10_000)
    p.set_defaults(func=cmd_find_wr)
    return parser


def read_config(path) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (x.strip() for x in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _apply_config(parser, argv, config):
    """Re-parse with config values as defaults so explicit flags win."""
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    actions = [*parser._actions, *(a for sp in sub_action.choices.values() for a in sp._actions)]
    known = {a.dest for a in actions if a.option_strings} - {"help", "config"}
    unknown = sorted(set(config) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    for action in actions:
        if action.dest in config and action.option_strings:
            raw = config[action.dest]
            if action.const is True and action.nargs == 0:
                action.default = raw.lower() in ("1", "true", "yes", "on")
            else:
                action.default = action.type(raw) if action.type else raw
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            args = _apply_config(parser, argv, read_config(args.config))
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        if not getattr(args, "func", None):
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        print(f"wrlat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, OSError) as exc:
        print(f"wrlat: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
