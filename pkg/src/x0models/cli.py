"""Command line: ``x0models {invariants,cusps,modpoly,model,verify,series}``.

Exit status: 0 on success, 1 when a verification or search fails, 2 on a
usage error.  Results go to stdout (or --out); progress goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__, arith, forms, implicit, modpoly

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("x0models")


class UsageError(Exception):
    pass


def parse_range(text: str) -> range:
    """'A..B' (inclusive) or a single integer.  B < A gives the empty range."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or an integer, got {text!r}") from None
    return range(n, n + 1)


def _levels(args) -> range:
    if args.level is not None and args.range is not None:
        raise UsageError("give either --level or --range, not both")
    if args.level is not None:
        return range(args.level, args.level + 1)
    if args.range is not None:
        return args.range
    raise UsageError("one of --level/-N or --range is required")


def _envelope(command: str, payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "version": __version__, "command": command, **payload}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


# -- invariants ------------------------------------------------------------------


def invariants_row(N: int) -> dict:
    inv = arith.LevelInvariants.of(N)
    s4, _ = arith.dim_spaces(N, 4)
    _, m12 = arith.dim_spaces(N, 12)
    try:
        w4 = arith.min_degree_weight4(N)
    except ValueError:
        w4 = None
    return {
        "N": N,
        "psi": inv.index,
        "nu2": inv.nu2,
        "nu3": inv.nu3,
        "nu_inf": inv.nu_inf,
        "genus": inv.genus,
        "dim_S4": s4,
        "dim_M12": m12,
        "min_degree_weight4": w4,
    }


_INV_COLUMNS = ("N", "psi", "nu2", "nu3", "nu_inf", "genus", "dim_S4", "dim_M12", "min_degree_weight4")


def cmd_invariants(args) -> tuple[int, str]:
    levels = _levels(args)
    if levels and levels[0] < 1:
        raise UsageError("levels must be >= 1")
    rows = [invariants_row(N) for N in levels]
    if args.format == "json":
        return EXIT_OK, _dump(_envelope("invariants", {"rows": rows}))
    lines = ["\t".join(_INV_COLUMNS)]
    for r in rows:
        lines.append("\t".join("-" if r[c] is None else str(r[c]) for c in _INV_COLUMNS))
    return EXIT_OK, "\n".join(lines) + "\n"


# -- cusps -----------------------------------------------------------------------

_DIVISORS = {
    "delta": forms.divisor_delta,
    "delta_dilated": forms.divisor_delta_dilated,
    "e4_cubed": forms.divisor_e4_cubed,
    "e4_cubed_dilated": forms.divisor_e4_cubed_dilated,
}


def cmd_cusps(args) -> tuple[int, str]:
    if args.level is None or args.level < 1:
        raise UsageError("cusps needs --level N with N >= 1")
    N = args.level
    div = _DIVISORS[args.divisor](N) if args.divisor else None
    table = forms.cusp_table(N, div)
    if args.format == "json":
        return EXIT_OK, _dump(_envelope("cusps", table))
    lines = ["cusp\tk\twidth\tcount_class"]
    for c in forms.cusps(N):
        lines.append(f"{c.label}\t{c.k}\t{c.width}\t{c.count_class}")
    if div is not None:
        lines.append(f"# div({args.divisor}) degree {div.degree}")
        for entry in div.to_dict():
            lines.append(f"{entry['label']}\t{entry['num']}/{entry['den']}")
    return EXIT_OK, "\n".join(lines) + "\n"


# -- modpoly ---------------------------------------------------------------------


def cmd_modpoly(args) -> tuple[int, str]:
    N = args.level
    if N is None:
        raise UsageError("modpoly needs --level N")
    if N < 2 or N > args.n_max:
        raise UsageError(f"N must satisfy 2 <= N <= {args.n_max} (raise --n-max to go further)")
    if N > modpoly.N_MAX_DEFAULT:
        log.warning("N=%d is beyond the default limit; expect long runtimes and large memory use", N)
    log.info("computing Phi_%d", N)
    P = modpoly.phi(N, n_max=args.n_max)
    checks = modpoly.checks(N, P)
    summary = modpoly.summary(N, P)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"phi_{N}.txt").write_text(P.to_text())
        (out / f"phi_{N}.json").write_text(_dump(summary))
    status = EXIT_OK if all(checks.values()) else EXIT_FAIL
    if args.format == "json":
        return status, _dump(_envelope("modpoly", {"summary": summary, "checks": checks}))
    lines = [f"{k}: {summary[k]}" for k in ("N", "psi", "deg_x", "deg_y", "total_degree", "diag_degree", "sha256")]
    lines += [f"check {k}: {'PASS' if v else 'FAIL'}" for k, v in checks.items()]
    if not args.out:
        lines.append("# coefficients (r s c)")
        lines.append(P.to_text().rstrip("\n"))
    return status, "\n".join(lines) + "\n"


# -- model -----------------------------------------------------------------------


def cmd_model(args) -> tuple[int, str]:
    N = args.level
    if N is None or N < 2:
        raise UsageError("model needs --level N with N >= 2")
    if args.weight not in (12, 24):
        raise UsageError("--weight must be 12 (alpha/beta search) or 24 (j-map triple)")
    if args.weight == 12:
        if args.bound < 1:
            raise UsageError("--bound must be >= 1")
        rejected: list = []
        hits = implicit.search_ab(N, args.bound, max_hits=args.max_hits, jobs=args.jobs, rejected=rejected)
        reports = [{"alpha": a, "beta": b, "report": rep.to_dict()} for a, b, rep in hits]
        rejects = [{"alpha": a, "beta": b, "reason": why} for a, b, _, why in rejected]
        eqs = [(f"model_{N}_{a}_{b}.txt", rep.equation.to_text()) for a, b, rep in hits]
    else:
        d = arith.total_degree_formula(N)
        prec = args.prec or implicit.required_precision(N, 24, d)
        min_prec = implicit.required_precision(N, 24, d)
        if prec < min_prec:
            raise UsageError(f"--prec {prec} below policy minimum {min_prec}")
        f, g, h = implicit.weight24_j_triple(N, prec)
        rep = implicit.minimal_model(f, g, h, d, family="weight24_j")
        reports = [{"report": rep.to_dict()}]
        rejects = []
        eqs = [(f"model_{N}_j.txt", rep.equation.to_text())]
        hits = [rep]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in eqs:
            (out / name).write_text(text)
    status = EXIT_OK if hits else EXIT_FAIL
    if args.format == "json":
        return status, _dump(_envelope("model", {"N": N, "weight": args.weight, "accepted": reports, "rejected": rejects}))
    lines = [f"N={N} weight={args.weight} accepted={len(reports)} rejected={len(rejects)}"]
    for r in reports:
        rep = r["report"]
        tag = f"({r['alpha']}, {r['beta']})" if "alpha" in r else "j-map"
        lines.append(
            f"{tag}: degree {rep['found_degree']} predicted {rep['predicted_degree']} "
            f"kernel_dim {rep['kernel_dim']} integral {rep['integral']}"
        )
    for r in rejects:
        lines.append(f"rejected ({r['alpha']}, {r['beta']}): {r['reason']}")
    return status, "\n".join(lines) + "\n"


# -- verify ----------------------------------------------------------------------


def verify_level(N: int) -> dict[str, bool]:
    """Every series-free identity at one level."""
    psi = arith.psi(N)
    out = {}
    try:
        arith.LevelInvariants.of(N)
        out["genus_consistency"] = True
    except arith.ConsistencyError:
        out["genus_consistency"] = False
    out["psi_identity"] = arith.psi_identity_check(N)
    out["total_equals_diag"] = arith.total_degree_formula(N) == arith.diag_degree(N)
    out["cusp_count"] = len(forms.cusps(N)) == arith.nu_inf(N)
    out["cusp_widths"] = sum(c.width for c in forms.cusps(N)) == psi
    out["div_delta_degree"] = forms.divisor_delta(N).degree == psi
    out["div_delta_dilated_degree"] = forms.divisor_delta_dilated(N).degree == psi
    s24, _ = arith.dim_spaces(N, 24)
    out["min_sum_identity"] = (
        s24 + arith.genus(N) - 1 - forms.min_sum_weight24_triple(N) == arith.total_degree_formula(N)
    )
    try:
        w4 = arith.min_degree_weight4(N)
        out["weight4_degree"] = w4 == arith.dim_spaces(N, 4)[0] + arith.genus(N) - 1
    except ValueError:
        pass
    return out


def _verify_chunk(levels: list[int]) -> list[tuple[int, dict]]:
    return [(N, verify_level(N)) for N in levels]


def cmd_verify(args) -> tuple[int, str]:
    levels = list(_levels(args))
    if levels and levels[0] < 2:
        raise UsageError("verify needs levels >= 2")
    if args.jobs > 1 and len(levels) > 1:
        chunks = [levels[i :: args.jobs] for i in range(args.jobs)]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            merged = dict(r for part in pool.map(_verify_chunk, chunks) for r in part)
        results = [(N, merged[N]) for N in levels]
    else:
        results = _verify_chunk(levels)
    failures = [(N, k) for N, res in results for k, ok in res.items() if not ok]
    names = sorted({k for _, res in results for k in res})
    counts = {k: sum(1 for _, res in results if k in res) for k in names}
    status = EXIT_FAIL if failures else EXIT_OK
    if args.format == "json":
        payload = {
            "levels": len(levels),
            "checks": counts,
            "failures": [{"N": N, "check": k} for N, k in failures],
            "passed": not failures,
        }
        return status, _dump(_envelope("verify", payload))
    lines = [f"{k}: {counts[k]} levels checked" for k in names]
    lines += [f"FAIL N={N} {k}" for N, k in failures]
    lines.append(f"{'PASS' if not failures else 'FAIL'}: {len(levels)} levels, {len(failures)} failures")
    return status, "\n".join(lines) + "\n"


# -- series ----------------------------------------------------------------------

_SERIES = {
    "delta": forms.delta,
    "e4": forms.eisenstein_e4,
    "e6": forms.eisenstein_e6,
    "e4_cubed": forms.e4_cubed,
    "j": forms.j_invariant,
}


def cmd_series(args) -> tuple[int, str]:
    if args.prec is None or args.prec < 2:
        raise UsageError("series needs --prec P with P >= 2")
    form = _SERIES[args.name](args.prec)
    ser = form.series
    if args.level is not None:
        if args.level < 1:
            raise UsageError("--level must be >= 1")
        ser = ser.dilate(args.level).truncate(args.prec) if args.level > 1 else ser
    if args.format == "json":
        return EXIT_OK, _dump(_envelope("series", {"name": args.name, "dilation": args.level or 1, "series": ser.to_dict()}))
    lines = [f"{e} {ser[e]}" for e in range(ser.val, ser.prec) if ser[e]]
    lines.append(f"O(q^{ser.prec})")
    return EXIT_OK, "\n".join(lines) + "\n"


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--level", "-N", type=int)
    common.add_argument("--range", type=parse_range, metavar="A..B")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", help="output file, or directory for modpoly/model artifacts")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    p = argparse.ArgumentParser(prog="x0models", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("invariants", parents=[common], help="psi, elliptic points, cusps, genus, dimensions")
    c = sub.add_parser("cusps", parents=[common], help="cusp representatives and widths")
    c.add_argument("--divisor", choices=sorted(_DIVISORS))
    m = sub.add_parser("modpoly", parents=[common], help="classical modular polynomial Phi_N")
    m.add_argument("--n-max", type=int, default=modpoly.N_MAX_DEFAULT)
    mo = sub.add_parser("model", parents=[common], help="plane model by implicitization")
    mo.add_argument("--weight", type=int, default=12)
    mo.add_argument("--bound", type=int, default=3)
    mo.add_argument("--max-hits", type=int)
    mo.add_argument("--prec", type=int)
    sub.add_parser("verify", parents=[common], help="arithmetic identity suite over a range of levels")
    s = sub.add_parser("series", parents=[common], help="dump a q-expansion")
    s.add_argument("name", choices=sorted(_SERIES))
    s.add_argument("--prec", type=int)
    return p


_COMMANDS = {
    "invariants": cmd_invariants,
    "cusps": cmd_cusps,
    "modpoly": cmd_modpoly,
    "model": cmd_model,
    "verify": cmd_verify,
    "series": cmd_series,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.jobs < 1:
        print("x0models: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        status, text = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"x0models {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out and args.command not in ("modpoly", "model"):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status
