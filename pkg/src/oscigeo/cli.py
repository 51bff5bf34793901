"""oscigeo command line: describe | check | scan.

Exit codes: 0 success, 2 input error, 3 I/O error, 4 verdict conflict (--strict).
"""
import argparse
from fractions import Fraction
import sys

import numpy as np

from ._scalars import DomainError, InputError, max_abs
from .field_geometry import DEFAULT_TOL
from .lie_metric import (
    curvature,
    curvature_defects,
    koszul_connection,
    metric_compatibility_defect,
    torsion_defect,
)
from .report import (
    SCHEMA,
    RunConfig,
    build_group,
    dumps,
    field_record,
    normalize_field,
    scan,
    to_csv,
)

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_CONFLICT = 0, 2, 3, 4

_VULGAR = {
    Fraction(1, 2): "½", Fraction(1, 4): "¼", Fraction(3, 4): "¾",
    Fraction(1, 3): "⅓", Fraction(2, 3): "⅔", Fraction(1, 8): "⅛",
}


def _parse_scalar(text):
    text = text.strip()
    try:
        return Fraction(text) if "." not in text and "e" not in text.lower() else float(text)
    except ValueError as exc:
        raise InputError(f"cannot parse number {text!r}") from exc


def _parse_list(text):
    if text is None or not text.strip():
        return []
    return [_parse_scalar(t) for t in text.split(",")]


def _fmt_coef(c):
    if isinstance(c, Fraction):
        sign, a = ("-" if c < 0 else ""), abs(c)
        if a == 1:
            return sign
        if a in _VULGAR:
            return sign + _VULGAR[a]
        return sign + (str(a.numerator) if a.denominator == 1 else f"({a})")
    if abs(c - 1) < 1e-15:
        return ""
    if abs(c + 1) < 1e-15:
        return "-"
    return f"{c:.6g}"


def format_vector(vec, labels):
    terms = []
    for c, lab in zip(vec, labels):
        if c == 0 or (not isinstance(c, Fraction) and abs(c) < 1e-14):
            continue
        s = _fmt_coef(c) + lab
        if terms:
            s = (" - " + s[1:]) if s.startswith("-") else " + " + s
        terms.append(s)
    return "".join(terms) if terms else "0"


def describe(group):
    alg = group.algebra
    lab = alg.labels
    conn = koszul_connection(alg)
    cur = curvature(alg, conn)
    d = alg.dim
    conn_rows = [
        {"X": lab[i], "Y": lab[j], "value": format_vector(conn.gamma[i, j], lab)}
        for i in range(d) for j in range(d)
    ]
    curv_rows = []
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                val = cur.r[i, j, k]
                if float(max_abs(val)) > 1e-14:
                    curv_rows.append({"X": lab[i], "Y": lab[j], "Z": lab[k],
                                      "value": format_vector(val, lab)})
    checks = {"jacobi": alg.jacobi_residual(), "torsion": torsion_defect(conn),
              "metric_compatibility": metric_compatibility_defect(conn)}
    checks.update(curvature_defects(cur))
    return {"connection": conn_rows, "curvature": curv_rows,
            "checks": {k: float(v) for k, v in checks.items()}}


def describe_text(desc):
    lines = ["# Levi-Civita connection (∇_X Y)"]
    lines += [f"∇_{{{r['X']}}} {r['Y']} = {r['value']}" for r in desc["connection"]]
    lines.append("# Curvature R(X, Y)Z, nonzero components with X before Y")
    lines += [f"R({r['X']}, {r['Y']}){r['Z']} = {r['value']}" for r in desc["curvature"]]
    lines.append("# Identity residuals")
    lines += [f"{k}: {v:.3g}" for k, v in desc["checks"].items()]
    return "\n".join(lines) + "\n"


def _write(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", default="oscillator", choices=["oscillator", "heisenberg", "custom"])
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--lambda", dest="lam", default=None,
                        help="comma-separated structure constants (default: all 1)")
    common.add_argument("--algebra", dest="algebra_path", help="JSON algebra document (custom family)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--format", default=None, choices=["json", "csv"])
    common.add_argument("--out", dest="output_path")
    common.add_argument("--strict", action="store_true", help="exit 4 on generic/closed-form disagreement")

    p = argparse.ArgumentParser(prog="oscigeo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("describe", parents=[common], help="connection table, curvature, identity checks")
    chk = sub.add_parser("check", parents=[common], help="classify one left-invariant field")
    chk.add_argument("--field", required=True, help="comma-separated frame coefficients")
    sc = sub.add_parser("scan", parents=[common], help="classify seeded random unit fields")
    sc.add_argument("--samples", type=int, default=100)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--subspace", default="full", help="full | xy | comma-separated 0/1 mask")
    sc.add_argument("--workers", type=int, default=1)
    return p


def _config(args):
    lam = _parse_list(args.lam)
    if not lam:
        lam = [1] * max(args.n, 0)
    return RunConfig(
        family=args.family, n=args.n, lam=tuple(lam), tolerance=args.tol,
        seed=getattr(args, "seed", 0), samples=getattr(args, "samples", 1),
        subspace=getattr(args, "subspace", "full"), output_path=args.output_path,
        format=args.format or "json", algebra_path=args.algebra_path, strict=args.strict,
        workers=getattr(args, "workers", 1),
    )


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        group = build_group(config)
        if args.command == "describe":
            desc = describe(group)
            if args.format is None:
                text = describe_text(desc)
            else:
                text = dumps({"schema": SCHEMA, "group": group.describe(config), **desc}) + "\n"
            _write(text, config.output_path)
            return EXIT_OK
        if args.command == "check":
            coeffs = _parse_list(args.field)
            if len(coeffs) != group.algebra.dim:
                raise InputError(f"field needs {group.algebra.dim} coefficients, got {len(coeffs)}")
            v, norm = normalize_field(coeffs)
            rec = field_record(group, config, v, original_norm=norm)
            text = dumps(rec) + "\n" if config.format == "json" else to_csv([rec])
            _write(text, config.output_path)
            return EXIT_CONFLICT if (config.strict and rec["conflict"]) else EXIT_OK
        records, summary = scan(config)
        if config.format == "json":
            text = dumps({"schema": SCHEMA, "group": group.describe(config),
                          "seed": config.seed, "subspace": config.subspace,
                          "summary": summary, "records": records}) + "\n"
        else:
            text = to_csv(records)
        _write(text, config.output_path)
        if config.output_path:
            sys.stdout.write(dumps({"summary": summary}) + "\n")
        else:
            sys.stderr.write(dumps({"summary": summary}, indent=None) + "\n")
        return EXIT_CONFLICT if (config.strict and summary["conflicts"]) else EXIT_OK
    except (InputError, DomainError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"oscigeo: error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"oscigeo: I/O error: {exc}\n")
        return EXIT_IO


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
