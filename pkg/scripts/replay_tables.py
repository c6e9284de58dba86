"""Recompute both component-count tables (d <= 7, n <= 7) and diff against the catalog."""

import argparse
import sys

from quotlab.catalog import replay_tables


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.parse_args()
    rep = replay_tables()
    print("commuting matrices, components of C_n(M_d)")
    for n in range(1, 8):
        print(f"  n={n}: " + " ".join(f"{rep.commuting[(n, d)][0]:>3}" for d in range(1, 8)))
    print("Quot schemes, components of Quot_d^r for r = 1, 2, ... until stable")
    for n in range(1, 8):
        print(f"  n={n}: " + "  ".join(str(rep.quot[(n, d)][0]) for d in range(1, 8)))
    if rep.ok:
        print("all entries match")
        return 0
    print("mismatches:", rep.mismatches)
    return 1


if __name__ == "__main__":
    sys.exit(main())
