"""Run configuration, seeded sphere sampling, sweeps and report serialization."""
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
from fractions import Fraction
import io
import json
import math
import re

import numpy as np

from ._scalars import InputError, as_array, is_exact, to_float
from .field_geometry import DEFAULT_TOL, classify
from .lie_metric import MetricLieAlgebra, curvature, koszul_connection
from .oscillator import (
    FieldDecomposition,
    OscillatorSpec,
    classify_minimal_xy,
    harmonic_map_set_membership,
    heisenberg_algebra,
    oscillator_algebra,
)

SCHEMA = "oscigeo/1"
FAMILIES = ("oscillator", "heisenberg", "custom")


@dataclass
class RunConfig:
    family: str = "oscillator"
    n: int = 1
    lam: tuple = (1,)
    tolerance: float = DEFAULT_TOL
    seed: int = 0
    samples: int = 100
    subspace: str = "full"
    output_path: str = None
    format: str = "json"
    algebra_path: str = None
    strict: bool = False
    workers: int = 1
    algebra_doc: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}")
        if self.samples < 1:
            raise InputError("samples must be >= 1")
        if not self.tolerance > 0:
            raise InputError("tolerance must be positive")
        if self.format not in ("json", "csv"):
            raise InputError("format must be json or csv")
        if self.workers < 1:
            raise InputError("workers must be >= 1")


@dataclass
class Group:
    algebra: MetricLieAlgebra
    spec: OscillatorSpec = None

    def describe(self, config):
        if config.family == "custom":
            return {"family": "custom", "n": None, "lambda": None, "dim": self.algebra.dim}
        lam = None if self.spec is None else [_num(x) for x in self.spec.lam]
        return {"family": config.family, "n": config.n, "lambda": lam}


def build_group(config):
    if config.family == "oscillator":
        spec = OscillatorSpec(config.n, tuple(config.lam))
        return Group(oscillator_algebra(spec), spec)
    if config.family == "heisenberg":
        return Group(heisenberg_algebra(config.n))
    doc = config.algebra_doc
    if doc is None:
        if not config.algebra_path:
            raise InputError("custom family needs --algebra PATH")
        try:
            with open(config.algebra_path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read algebra file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"algebra file is not JSON: {exc}") from exc
    return Group(MetricLieAlgebra.from_dict(doc))


def subspace_mask(group, subspace):
    d = group.algebra.dim
    if subspace == "full":
        return np.ones(d, dtype=bool)
    if subspace == "xy":
        if group.spec is not None:
            n = group.spec.n
        elif d % 2 == 1:
            n = (d - 1) // 2
        else:
            raise InputError("xy subspace needs an oscillator or heisenberg family")
        mask = np.zeros(d, dtype=bool)
        mask[: 2 * n] = True
        return mask
    try:
        bits = [int(b) for b in subspace.split(",")]
    except ValueError as exc:
        raise InputError(f"bad subspace {subspace!r}") from exc
    if len(bits) != d or not any(bits) or any(b not in (0, 1) for b in bits):
        raise InputError(f"subspace mask needs {d} entries of 0/1, not all zero")
    return np.array(bits, dtype=bool)


def sample_field(seed, index, mask):
    """Uniform point on the unit sphere of the masked coordinates.

    Each sample owns a counter-based stream keyed by (seed, index), so the
    result is independent of how samples are split across workers.
    """
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    x = np.zeros(mask.shape[0])
    x[mask] = rng.standard_normal(int(mask.sum()))
    return x / np.linalg.norm(x)


def normalize_field(coeffs):
    """Scale to unit length; rational vectors with rational norm stay exact."""
    v = as_array(coeffs)
    n2 = np.dot(v, v)
    if n2 == 0:
        raise InputError("zero field cannot be normalized")
    if is_exact(v):
        num, den = n2.numerator, n2.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            norm = Fraction(rn, rd)
            return v / norm, norm
        v = to_float(v)
    norm = math.sqrt(float(n2))
    return v / norm, norm


def closed_form(group, v, tol):
    if group.spec is None:
        return {"minimal_xy": None, "harmonic_map_member": None}
    dec = FieldDecomposition.from_vector(group.spec, v)
    minimal = classify_minimal_xy(group.spec, dec, tol) if dec.on_xy(tol) else None
    return {"minimal_xy": minimal, "harmonic_map_member": harmonic_map_set_membership(group.spec, dec, tol)}


def conflicts(report, cf):
    out = []
    if cf["minimal_xy"] is not None and cf["minimal_xy"] != report.minimal:
        out.append("minimal")
    if cf["harmonic_map_member"] is not None and cf["harmonic_map_member"] != report.harmonic_map:
        out.append("harmonic_map")
    return out


def field_record(group, config, v, original_norm=None, index=None, conn=None, cur=None):
    alg = group.algebra
    rep = classify(alg, v, config.tolerance, conn=conn, cur=cur)
    cf = closed_form(group, v, config.tolerance)
    bad = conflicts(rep, cf)
    rec = {"schema": SCHEMA, "group": group.describe(config)}
    if index is not None:
        rec["index"] = index
    rec["field"] = [_num(x) for x in v]
    if original_norm is not None:
        rec["original_norm"] = _num(original_norm)
    rec["residuals"] = rep.residuals
    rec["singular_values"] = rep.singular_values
    rec["verdicts"] = rep.verdicts
    rec["closed_form"] = cf
    rec["conflict"] = bool(bad)
    rec["conflicts"] = bad
    return rec


def _scan_chunk(args):
    config, indices = args
    group = build_group(config)
    alg = group.algebra.as_float()
    group = Group(alg, group.spec)
    conn = koszul_connection(alg)
    cur = curvature(alg, conn)
    mask = subspace_mask(group, config.subspace)
    return [
        field_record(group, config, sample_field(config.seed, i, mask), index=i, conn=conn, cur=cur)
        for i in indices
    ]


def scan(config):
    """Classify ``config.samples`` seeded random unit fields; returns (records, summary)."""
    group = build_group(config)
    subspace_mask(group, config.subspace)  # validate before spawning workers
    idx = list(range(config.samples))
    if config.workers == 1:
        records = _scan_chunk((config, idx))
    else:
        chunks = [idx[k:: config.workers] for k in range(config.workers)]
        with ProcessPoolExecutor(config.workers) as ex:
            parts = list(ex.map(_scan_chunk, [(config, c) for c in chunks]))
        records = sorted((r for p in parts for r in p), key=lambda r: r["index"])
    summary = {
        "samples": len(records),
        "minimal": sum(r["verdicts"]["minimal"] for r in records),
        "harmonic": sum(r["verdicts"]["harmonic"] for r in records),
        "harmonic_map": sum(r["verdicts"]["harmonic_map"] for r in records),
        "totally_geodesic": sum(r["verdicts"]["totally_geodesic"] for r in records),
        "conflicts": sum(r["conflict"] for r in records),
    }
    return records, summary


# ---- serialization -----------------------------------------------------------

_MARK = "\x00num:"
_MARK_RE = re.compile(r'"\\u0000num:([^"]*)"')


def _num(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return float(x)


def _mark(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, (float, np.floating, Fraction)):
        return _MARK + format(float(obj), ".17g")
    if isinstance(obj, dict):
        return {k: _mark(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_mark(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """JSON with every float written to 17 significant digits."""
    text = json.dumps(_mark(obj), indent=indent, ensure_ascii=False)
    return _MARK_RE.sub(lambda m: _fix_number(m.group(1)), text)


def _fix_number(s):
    if s in ("inf", "-inf", "nan"):
        raise ValueError("non-finite values are not valid JSON")
    return s if any(c in s for c in ".e") else s + ".0"


def _flatten(rec, prefix=""):
    out = {}
    for k, v in rec.items():
        if k in ("schema", "conflicts"):
            continue
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            for i, x in enumerate(v):
                out[f"{key}.{i + 1}"] = x
        else:
            out[key] = v
    return out


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def to_csv(records):
    buf = io.StringIO()
    rows = [_flatten(r) for r in records]
    header = list(rows[0]) if rows else []
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(row.get(h)) for h in header])
    return buf.getvalue()
