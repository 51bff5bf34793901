"""Find minimal two-block xy fields on g_2(l1, l2) with l1^2 != l2^2.

With block weights w1 + w2 = 1 the closed-form condition d_1 = d_2 reads
l1 w1 + l2 w2 = 5/2 (l1 + l2), which has a solution with both weights in
(0, 1) whenever that mean lies strictly between l1 and l2.

    python3 scripts/unequal_lambda_minimal.py 1 -1.1
"""
import argparse
import math

import numpy as np

from oscigeo.field_geometry import classify
from oscigeo.oscillator import FieldDecomposition, OscillatorSpec, classify_minimal_xy, oscillator_algebra


def balanced_weights(l1, l2):
    if l1 == l2:
        return None
    w1 = (2.5 * (l1 + l2) - l2) / (l1 - l2)
    return (w1, 1 - w1) if 0 < w1 < 1 else None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("l1", type=float)
    ap.add_argument("l2", type=float)
    ap.add_argument("--angles", type=int, default=4, help="rotations tried inside each block")
    args = ap.parse_args()
    w = balanced_weights(args.l1, args.l2)
    if w is None:
        print(f"no two-block minimal field for lambda = ({args.l1}, {args.l2})")
        return
    spec = OscillatorSpec(2, (args.l1, args.l2))
    alg = oscillator_algebra(spec)
    print(f"weights w1 = {w[0]:.12g}, w2 = {w[1]:.12g}")
    for k in range(args.angles):
        t1, t2 = k * math.pi / (2 * args.angles), 0.3 + k
        r1, r2 = math.sqrt(w[0]), math.sqrt(w[1])
        v = np.array([r1 * math.cos(t1), r2 * math.cos(t2), r1 * math.sin(t1), r2 * math.sin(t2), 0.0, 0.0])
        rep = classify(alg, v)
        closed = classify_minimal_xy(spec, FieldDecomposition.from_vector(spec, v))
        print(f"  angles ({t1:.3f}, {t2:.3f}): |H| = {rep.mean_curvature_norm:.3e}  "
              f"generic minimal = {rep.minimal}  closed form = {closed}")
    off = np.array([math.sqrt(w[0] + 0.05), math.sqrt(w[1] - 0.05), 0, 0, 0, 0]) if w[1] > 0.05 else None
    if off is not None:
        print(f"  perturbed weights: |H| = {classify(alg, off).mean_curvature_norm:.3e}")


if __name__ == "__main__":
    main()
