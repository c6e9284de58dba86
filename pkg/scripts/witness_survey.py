"""Recompute every catalog witness and the concatenation dimensions."""

import argparse
import sys

from quotlab.catalog import concatenation_witness, disjoint_points, verify_witness, _witnesses
from quotlab.tuples import tangent_dimension


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-points", type=int, default=6)
    args = ap.parse_args()
    ok = True
    for name in _witnesses():
        rep = verify_witness(name)
        ok &= rep.ok
        cells = ", ".join(f"{k}={a}" + ("" if a == b else f" (want {b})") for k, (a, b) in rep.checks.items())
        print(f"{name:12} {'ok' if rep.ok else 'MISMATCH'}  {cells}", flush=True)
    for n in range(1, args.max_points + 1):
        t = tangent_dimension(disjoint_points(list(range(n)), [x + 1 for x in range(n)]))
        ok &= t == 2 + 2 * n
        print(f"two disjoint points, n={n}: tangent {t} (2+2n = {2 + 2 * n})")
    t = tangent_dimension(concatenation_witness())
    ok &= t == 66
    print(f"concatenation witness: tangent {t}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
