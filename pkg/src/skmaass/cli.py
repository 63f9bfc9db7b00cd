"""Command line front end.

Exit codes are the same for every subcommand: 0 when all checks pass, 1 on a
mathematical failure, 2 on usage, I/O or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import qform, rayclass
from .arith import is_fundamental_discriminant
from .bessel import maass_identity_sides
from .sklift import SFCParseError, format_sfc, igusa_chi10, read_sfc, verify_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SWEEP_D = (-3, -4, -7, -8, -11, -15, -19, -20, -23, -24)


class UsageError(Exception):
    pass


def parse_int_list(text: str) -> list[int]:
    """``"1-12"``, ``"1,2,6"`` or a mix like ``"-24,-3,1-4"``."""
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            lo, sep, hi = part[1:].partition("-")
            if sep:
                start, stop = int(part[0] + lo), int(hi)
                if stop < start:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(start, stop + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"malformed integer list {text!r}") from None
    if not out:
        raise UsageError("empty list")
    return out


def _check_d(d: int) -> None:
    if d >= 0 or not is_fundamental_discriminant(d):
        raise UsageError(f"{d} is not a negative fundamental discriminant")


def _positive(name: str, values) -> None:
    for v in values:
        if v < 1:
            raise UsageError(f"{name} must be positive, got {v}")


def emit(rows: list[dict], fmt: str, out) -> None:
    if not rows:
        return
    if fmt == "json":
        json.dump(rows, out, indent=1)
        out.write("\n")
    elif fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        cols = list(rows[0])
        cells = [[str(r[c]) for c in cols] for r in rows]
        widths = [max(len(c), *(len(x[i]) for x in cells)) for i, c in enumerate(cols)]
        out.write("  ".join(c.rjust(w) for c, w in zip(cols, widths)) + "\n")
        for x in cells:
            out.write("  ".join(v.rjust(w) for v, w in zip(x, widths)) + "\n")


# ---------------------------------------------------------------- classes / sweep


def cmd_classes(args, out) -> int:
    _check_d(args.d)
    _positive("M, L, N", (args.M, args.L, args.N))
    row = {"d": args.d, "M": args.M, "L": args.L, "N": args.N}
    ok = True
    reps = None
    if not args.enumerate:
        row["formula"] = qform.count_classes_formula(args.d, args.M, args.L, args.N)
    if not args.formula_only:
        reps = qform.enumerate_classes(args.d, args.M, args.L, args.N).representatives
        row["enumerated"] = len(reps)
    if "formula" in row and "enumerated" in row:
        ok = row["formula"] == row["enumerated"]
        row["ok"] = ok
    emit([row], args.format, out)
    if reps is not None and args.format == "table":
        for T in reps:
            out.write(f"  {T}\n")
    return EXIT_OK if ok else EXIT_FAIL


def sweep_point(d: int, M: int, L: int, N: int) -> dict:
    row = {"d": d, "M": M, "L": L, "N": N}
    try:
        formula = qform.count_classes_formula(d, M, L, N)
        enumerated = len(qform.enumerate_classes(d, M, L, N).representatives)
        h1 = len(qform.h1_classes(d, M, L, N, check=False).representatives)
        ray = rayclass.raycl_size(d, M * N, check=False)
        ray_oracle = rayclass.class_number(d * (M * N) ** 2)
        surjective = qform.is_phi_surjective(d, M, N)
        swap = len(qform.enumerate_classes(d, M * N, L, 1).representatives) == enumerated
        row.update(
            formula=formula,
            enumerated=enumerated,
            h1=h1,
            raycl=ray,
            surjective=surjective,
            h1_is_all=h1 == enumerated,
            level_swap=swap,
        )
        row["ok"] = (
            formula == enumerated
            and h1 == ray
            and ray == ray_oracle
            and surjective == (h1 == enumerated) == swap
        )
    except ArithmeticError as exc:
        row["error"] = str(exc)
        row["ok"] = False
    return row


def _star(t):
    return sweep_point(*t)


def cmd_sweep(args, out) -> int:
    ds = parse_int_list(args.d) if args.d else list(SWEEP_D)
    Ms, Ls, Ns = (parse_int_list(x) for x in (args.M, args.L, args.N))
    for d in ds:
        _check_d(d)
    _positive("M, L, N", Ms + Ls + Ns)
    grid = [(d, M, L, N) for d in ds for M in Ms for L in Ls for N in Ns]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_star, grid, chunksize=8))
    else:
        rows = [sweep_point(*t) for t in grid]
    # keep columns aligned across rows
    cols = ["d", "M", "L", "N", "formula", "enumerated", "h1", "raycl", "surjective", "h1_is_all", "level_swap", "ok", "error"]
    rows = [{c: r.get(c, "") for c in cols} for r in rows]
    if args.failures_only:
        emit([r for r in rows if not r["ok"]], args.format, out)
    else:
        emit(rows, args.format, out)
    bad = sum(1 for r in rows if not r["ok"])
    print(f"sweep: {len(rows) - bad}/{len(rows)} points pass", file=sys.stderr)
    return EXIT_OK if bad == 0 else EXIT_FAIL


# ---------------------------------------------------------------- bessel


def cmd_bessel_identity(args, out) -> int:
    n2s = parse_int_list(args.n2)
    _positive("--lm-max and N2", [args.lm_max, *n2s])
    rows = []
    for N2 in n2s:
        for L in range(1, args.lm_max + 1):
            for M in range(1, args.lm_max // L + 1):
                lhs, rhs = maass_identity_sides(L, M, N2)
                ok = lhs == rhs
                if not ok or args.verbose:
                    rows.append({"L": L, "M": M, "N2": N2, "ok": ok, "lhs": repr(lhs), "rhs": repr(rhs)})
                if not ok:
                    print(f"identity fails at L={L} M={M} N2={N2}", file=sys.stderr)
    emit(rows, args.format, out)
    total = sum(args.lm_max // L for L in range(1, args.lm_max + 1)) * len(n2s)
    bad = sum(1 for r in rows if not r["ok"])
    print(f"bessel-identity: {total - bad}/{total} cases hold", file=sys.stderr)
    return EXIT_OK if bad == 0 else EXIT_FAIL


# ---------------------------------------------------------------- chi10 / verify


def cmd_chi10(args, out) -> int:
    if args.bound < 2:
        raise UsageError("--bound must be at least 2")
    text = format_sfc(igusa_chi10(args.bound))
    if args.output in (None, "-"):
        out.write(text)
    else:
        try:
            with open(args.output, "w") as f:
                f.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc}") from None
    return EXIT_OK


def cmd_verify_maass(args, out) -> int:
    try:
        table = read_sfc(args.infile)
    except OSError as exc:
        raise UsageError(f"cannot read {args.infile}: {exc}") from None
    except SFCParseError as exc:
        raise UsageError(f"{args.infile}: {exc}") from None
    if not args.level_N and table.level != (1, 1):
        raise UsageError(f"table has level {table.level}; use --level-N")
    report = verify_table(table, level_n=args.level_N)
    row = {
        "mode": "level-N" if args.level_N else "classical",
        "k": table.k,
        "N1": table.N1,
        "N2": table.N2,
        "bound": table.bound,
        "checked": report.checked,
        "passed": report.passed,
        "failed": len(report.failures),
        "skipped": report.skipped,
        "first_failure": str(report.first_failure) if report.failures else "",
        "jacobi": (report.jacobi_error or "consistent") if table.level == (1, 1) else "n/a",
    }
    emit([row], args.format, out)
    if not report.ok:
        if report.failures:
            print(f"Maass relation fails at T = {report.first_failure}", file=sys.stderr)
        if report.jacobi_error:
            print(f"Jacobi coefficients inconsistent: {report.jacobi_error}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skmaass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_format(p):
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")
        return p

    p = with_format(sub.add_parser("classes", help="Gamma^0(N)-classes of L*[dM^2] forms"))
    p.add_argument("-d", type=int, required=True, help="negative fundamental discriminant")
    p.add_argument("-M", type=int, default=1)
    p.add_argument("-L", type=int, default=1)
    p.add_argument("-N", type=int, default=1)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--formula-only", action="store_true")
    g.add_argument("--enumerate", action="store_true", help="enumerate only, skip the closed formula")
    p.set_defaults(func=cmd_classes)

    p = with_format(sub.add_parser("sweep", help="counting, H_1 and ray class checks over a grid"))
    p.add_argument("-d", default=None, help="discriminants, e.g. -d=-3,-4,-7 (default: the standard ten)")
    p.add_argument("-M", default="1-3")
    p.add_argument("-L", default="1-2")
    p.add_argument("-N", default="1-12")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--failures-only", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = with_format(sub.add_parser("bessel-identity", help="type-IIb Bessel identity for L*M <= bound"))
    p.add_argument("--lm-max", type=int, default=200)
    p.add_argument("--n2", default="1,2,3,4,6,12", help="comma-separated N2 values")
    p.add_argument("-v", "--verbose", action="store_true", help="list every case")
    p.set_defaults(func=cmd_bessel_identity)

    p = sub.add_parser("chi10", help="write Igusa's chi_10 coefficient table")
    p.add_argument("--bound", type=int, default=10)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_chi10)

    p = with_format(sub.add_parser("verify-maass", help="check Maass relations on an SFC table"))
    p.add_argument("infile")
    p.add_argument("--level-N", action="store_true", help="use the level-N relations")
    p.set_defaults(func=cmd_verify_maass)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
