"""Independent reference computations on sympy's DomainMatrix (no quotlab linear algebra)."""

from fractions import Fraction
from itertools import combinations

from sympy.polys.domains import QQ as SQQ
from sympy.polys.matrices import DomainMatrix


def _q(x):
    f = Fraction(str(x))
    return SQQ(f.numerator, f.denominator)


def rank_qq(rows, ncols):
    if not rows:
        return 0
    return DomainMatrix([[_q(x) for x in r] for r in rows], (len(rows), ncols), SQQ).rank()


def commutator_jacobian_rank(mats):
    """Rank of the differential of (X_i, X_j) -> [X_i, X_j] at the given tuple."""
    n, d = len(mats), len(mats[0])
    X = [[[Fraction(str(x)) for x in row] for row in m] for m in mats]
    rows = []
    for i, j in combinations(range(n), 2):
        for r in range(d):
            for c in range(d):
                row = [0] * (n * d * d)
                # [Z_i, X_j] + [X_i, Z_j] at (r, c)
                for k in range(d):
                    row[i * d * d + r * d + k] += X[j][k][c]
                    row[i * d * d + k * d + c] -= X[j][r][k]
                    row[j * d * d + k * d + c] += X[i][r][k]
                    row[j * d * d + r * d + k] -= X[i][k][c]
                if any(row):
                    rows.append(row)
    return rank_qq(rows, n * d * d)


def tangent_dim(mats):
    n, d = len(mats), len(mats[0])
    return n * d * d - commutator_jacobian_rank(mats)


def _apply(m, v):
    d = len(v)
    return [sum(m[r][c] * v[c] for c in range(d)) for r in range(d)]


def loewy_dims(mats):
    """dims of m^i M / m^{i+1} M for M = k^d with y_i acting by the (nilpotent) matrices."""
    d = len(mats[0])
    X = [[[Fraction(str(x)) for x in row] for row in m] for m in mats]
    space = [[Fraction(int(r == c)) for c in range(d)] for r in range(d)]
    dims = []
    while True:
        rk = rank_qq(space, d)
        if rk == 0:
            return tuple(dims)
        nxt = [_apply(x, v) for x in X for v in space]
        dims.append(rk - rank_qq(nxt, d))
        space = nxt
