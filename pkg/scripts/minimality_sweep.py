"""Compare the generic engine with the closed-form minimality rules on random xy fields.

    python3 scripts/minimality_sweep.py --samples 2000 --seed 1
"""
import argparse

import numpy as np

from oscigeo.field_geometry import classify
from oscigeo.oscillator import (
    FieldDecomposition,
    OscillatorSpec,
    classify_minimal_xy,
    minimal_xy_by_modulus,
    oscillator_algebra,
)
from oscigeo.report import sample_field

CASES = [(1, 1), (1, -1), (1, 2), (1, -1.1), (2, -2), (1, 1, -1), (1, 2, 3)]


def sweep(lam, samples, seed, tol):
    spec = OscillatorSpec(len(lam), tuple(float(x) for x in lam))
    alg = oscillator_algebra(spec)
    n = spec.n
    counts = {"generic": 0, "closed": 0, "modulus": 0, "closed_conflicts": 0, "modulus_conflicts": 0}
    rng = np.random.default_rng(seed)
    for i in range(samples):
        # random support pattern so single-block fields show up
        mask = np.zeros(spec.dim, dtype=bool)
        blocks = rng.random(n) < 0.6
        if not blocks.any():
            blocks[rng.integers(n)] = True
        mask[:n] = mask[n: 2 * n] = blocks
        v = sample_field(seed, i, mask)
        dec = FieldDecomposition.from_vector(spec, v)
        generic = classify(alg, v, tol=tol).minimal
        closed = classify_minimal_xy(spec, dec, tol=tol)
        modulus = minimal_xy_by_modulus(spec, dec, tol=tol)
        counts["generic"] += generic
        counts["closed"] += closed
        counts["modulus"] += modulus
        counts["closed_conflicts"] += generic != closed
        counts["modulus_conflicts"] += generic != modulus
    return counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-9)
    args = ap.parse_args()
    print(f"{'lambda':>16} {'generic':>8} {'closed':>8} {'modulus':>8} {'c-diff':>7} {'m-diff':>7}")
    for lam in CASES:
        c = sweep(lam, args.samples, args.seed, args.tol)
        print(f"{str(lam):>16} {c['generic']:8d} {c['closed']:8d} {c['modulus']:8d} "
              f"{c['closed_conflicts']:7d} {c['modulus_conflicts']:7d}")


if __name__ == "__main__":
    main()
