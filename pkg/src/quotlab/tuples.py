"""Tuples of commuting matrices: tangent spaces, actions, support, invariants."""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import lcm

from gmpy2 import mpq

from .errors import NotCommutingError, PreconditionError, ShapeError, SingularMatrixError, SupportNotSplit
from .field import QQ
from .linalg import (ExactMatrix, Echelon, common_kernel_dim, inverse, is_invertible, mat_mul,
                     sparse_kernel, sparse_rank)


def _commutator_is_zero(a, b, field):
    return mat_mul(a, b, field) == mat_mul(b, a, field)


def first_noncommuting_pair(matrices):
    """(i, j) with i < j of the first pair that fails to commute, or None."""
    if not matrices:
        return None
    d = matrices[0].nrows
    for m in matrices:
        if m.nrows != d or m.ncols != d:
            raise ShapeError("all matrices must be square of equal size")
    field = matrices[0].field
    rows = [m.rows() for m in matrices]
    for i, j in combinations(range(len(matrices)), 2):
        if not _commutator_is_zero(rows[i], rows[j], field):
            return (i, j)
    return None


def is_commuting(matrices):
    """True iff all pairwise commutators vanish."""
    return first_noncommuting_pair(list(matrices)) is None


@dataclass(frozen=True, eq=False)
class CommTuple:
    """An n-tuple of pairwise commuting d x d matrices over one field."""

    matrices: tuple

    def __post_init__(self):
        mats = tuple(self.matrices)
        if not mats:
            raise ShapeError("a tuple needs at least one matrix")
        fields = {m.field for m in mats}
        if len(fields) > 1:
            from .errors import ArithmeticDomainError
            raise ArithmeticDomainError("matrices over different fields")
        object.__setattr__(self, "matrices", mats)
        pair = first_noncommuting_pair(list(mats))
        if pair is not None:
            raise NotCommutingError(pair)

    @classmethod
    def from_rows(cls, mats, field=QQ):
        return cls(tuple(ExactMatrix.from_rows(m, field) for m in mats))

    @classmethod
    def zero(cls, n, d, field=QQ):
        return cls(tuple(ExactMatrix.zeros(d, d, field).to_dense() for _ in range(n)))

    @property
    def n(self):
        return len(self.matrices)

    @property
    def d(self):
        return self.matrices[0].nrows

    @property
    def field(self):
        return self.matrices[0].field

    @cached_property
    def rows(self):
        return tuple(m.rows() for m in self.matrices)

    def __eq__(self, other):
        return isinstance(other, CommTuple) and self.matrices == other.matrices

    def __hash__(self):
        return hash(self.matrices)

    def __repr__(self):
        return f"CommTuple(n={self.n}, d={self.d}, field={self.field.label()})"


def _elementary(d, entries, field):
    """d x d matrix with 1 at each given 1-based (row, col)."""
    rows = [[field.zero] * d for _ in range(d)]
    for r, c in entries:
        rows[r - 1][c - 1] = field.one
    return ExactMatrix(field, d, d, dense=tuple(tuple(r) for r in rows))


def tuple_from_E(d, spec, field=QQ):
    """Tuple where ``spec[i]`` lists the 1-based (row, col) positions of ones in x_{i+1}."""
    return CommTuple(tuple(_elementary(d, s, field) for s in spec))


def tuple_from_tensor(table, n, field=QQ):
    """Tuple from tensor notation: table[r][c] is a dict {variable index (1-based): coeff}."""
    d = len(table)
    mats = [[[field.zero] * d for _ in range(d)] for _ in range(n)]
    for r, row in enumerate(table):
        for c, entry in enumerate(row):
            for i, v in (entry or {}).items():
                mats[i - 1][r][c] = field(v)
    return CommTuple(tuple(ExactMatrix(field, d, d, dense=tuple(tuple(r) for r in m)) for m in mats))


# ---------------------------------------------------------------- tangent space

def tangent_system(t):
    """Sparse rows of the linearized commutator equations.

    Unknowns are z_j[k][c] at index j*d*d + k*d + c; constraints are ordered by
    (i < j, row, col) and express [x_i, z_j] + [z_i, x_j] = 0.
    """
    n, d, field = t.n, t.d, t.field
    p = field.p
    X = t.rows
    cols = [[[X[i][r][c] for r in range(d)] for c in range(d)] for i in range(n)]

    def var(j, r, c):
        return j * d * d + r * d + c

    rows = []
    for i, j in combinations(range(n), 2):
        xi, xj = X[i], X[j]
        for r in range(d):
            for c in range(d):
                row = {}

                def bump(key, v):
                    nv = row.get(key, 0) + v
                    if p:
                        nv %= p
                    if nv:
                        row[key] = nv
                    else:
                        row.pop(key, None)

                for k in range(d):
                    a = xi[r][k]
                    if a:
                        bump(var(j, k, c), a)
                    a = cols[i][c][k]
                    if a:
                        bump(var(j, r, k), -a)
                    a = cols[j][c][k]
                    if a:
                        bump(var(i, r, k), a)
                    a = xj[r][k]
                    if a:
                        bump(var(i, k, c), -a)
                rows.append(row)
    return rows


@dataclass(frozen=True)
class TangentSpace:
    dimension: int
    basis: tuple  # tuples of n ExactMatrix (z_1..z_n)


def tangent_dimension(t):
    return t.n * t.d * t.d - sparse_rank(tangent_system(t), t.field.p)


def tangent_space(t, with_basis=True):
    """Tangent space to C_n(M_d) at t: (dimension, basis of z-tuples)."""
    n, d, field = t.n, t.d, t.field
    rows = tangent_system(t)
    if not with_basis:
        return TangentSpace(n * d * d - sparse_rank(rows, field.p), ())
    kern = sparse_kernel(rows, n * d * d, field.p, field.one)
    basis = []
    for v in kern:
        mats = []
        for j in range(n):
            entries = {}
            for r in range(d):
                for c in range(d):
                    x = v.get(j * d * d + r * d + c)
                    if x:
                        entries[(r, c)] = x
            mats.append(ExactMatrix(field, d, d, sparse=entries))
        basis.append(tuple(mats))
    return TangentSpace(len(basis), tuple(basis))


def is_tangent_vector(t, zs):
    field = t.field
    for i, j in combinations(range(t.n), 2):
        xi, xj = t.rows[i], t.rows[j]
        zi, zj = zs[i].rows(), zs[j].rows()
        a = mat_mul(xi, zj, field)
        b = mat_mul(zj, xi, field)
        c = mat_mul(zi, xj, field)
        e = mat_mul(xj, zi, field)
        for r in range(t.d):
            for s in range(t.d):
                if field.norm(a[r][s] - b[r][s] + c[r][s] - e[r][s]):
                    return False
    return True


# ---------------------------------------------------------------- actions

def translate(t, alpha):
    """x_i -> x_i + alpha_i I."""
    field = t.field
    alpha = [field(a) for a in alpha]
    if len(alpha) != t.n:
        raise ShapeError("need one scalar per matrix")
    out = []
    for m, a in zip(t.rows, alpha):
        rows = [list(r) for r in m]
        for k in range(t.d):
            rows[k][k] = field.norm(rows[k][k] + a)
        out.append(ExactMatrix(field, t.d, t.d, dense=tuple(tuple(r) for r in rows)))
    return CommTuple(tuple(out))


def linear_change(t, A):
    """x_i -> sum_j a_ij x_j for invertible A."""
    if A.shape != (t.n, t.n):
        raise ShapeError("A must be n x n")
    if not is_invertible(A):
        raise SingularMatrixError("A is singular")
    field = t.field
    Ar = A.rows()
    out = []
    for i in range(t.n):
        rows = [[field.zero] * t.d for _ in range(t.d)]
        for j in range(t.n):
            a = Ar[i][j]
            if not a:
                continue
            for r in range(t.d):
                for c in range(t.d):
                    v = t.rows[j][r][c]
                    if v:
                        rows[r][c] = field.norm(rows[r][c] + a * v)
        out.append(ExactMatrix(field, t.d, t.d, dense=tuple(tuple(r) for r in rows)))
    return CommTuple(tuple(out))


def conjugate(t, g):
    """Simultaneous conjugation x_i -> g x_i g^{-1}."""
    if g.shape != (t.d, t.d):
        raise ShapeError("g must be d x d")
    gi = inverse(g)
    return CommTuple(tuple(g @ m @ gi for m in t.matrices))


def block_diag(a, b, field):
    da, db = a.nrows, b.nrows
    rows = [[field.zero] * (da + db) for _ in range(da + db)]
    ar, br = a.rows(), b.rows()
    for r in range(da):
        rows[r][:da] = ar[r]
    for r in range(db):
        rows[da + r][da:] = br[r]
    return ExactMatrix(field, da + db, da + db, dense=tuple(tuple(r) for r in rows))


def concat(g, t1, t2):
    """g diag(x_i, x'_i) g^{-1}."""
    if t1.n != t2.n:
        raise ShapeError("tuples must have the same length")
    if t1.field != t2.field:
        from .errors import ArithmeticDomainError
        raise ArithmeticDomainError("tuples over different fields")
    size = t1.d + t2.d
    if g.shape != (size, size):
        raise ShapeError(f"g must be {size} x {size}")
    blocks = CommTuple(tuple(block_diag(a, b, t1.field) for a, b in zip(t1.matrices, t2.matrices)))
    return conjugate(blocks, g)


def pad(t, extra):
    """Append ``extra`` zero matrices."""
    z = ExactMatrix.zeros(t.d, t.d, t.field).to_dense()
    return CommTuple(t.matrices + (z,) * extra)


# ---------------------------------------------------------------- kernels and images

def image_sum_basis(mats, field, space=None):
    """Echelon basis of sum_i x_i(space) (space defaults to k^d)."""
    d = mats[0].nrows
    ech = Echelon(field)
    if space is None:
        space = [{k: field.one} for k in range(d)]
    p = field.p
    for m in mats:
        rows = m.rows()
        for v in space:
            img = {}
            for r in range(d):
                s = 0
                for k, x in v.items():
                    y = rows[r][k]
                    if y:
                        s += y * x
                if p:
                    s %= p
                if s:
                    img[r] = s
            if img:
                ech.add(img)
    return ech


def products(t, k):
    """All products x_{i1}...x_{ik} over multisets (commutative, so multisets suffice)."""
    from itertools import combinations_with_replacement
    field = t.field
    out = []
    for combo in combinations_with_replacement(range(t.n), k):
        m = t.rows[combo[0]]
        for i in combo[1:]:
            m = mat_mul(m, t.rows[i], field)
        out.append(ExactMatrix(field, t.d, t.d, dense=tuple(tuple(r) for r in m)))
    return out


def nilpotency_bound(t):
    """Least D with every degree-D product of the x_i equal to zero."""
    field = t.field
    D = 0
    space = Echelon(field, [{k: field.one} for k in range(t.d)])
    while space.dim:
        if D > t.d:
            raise SupportNotSplit("tuple is not nilpotent")
        space = image_sum_basis(list(t.matrices), field, space.basis())
        D += 1
    return D


def is_nilpotent(t):
    field = t.field
    for m in t.rows:
        power = m
        for _ in range(t.d - 1):
            power = mat_mul(power, m, field)
        if any(v for r in power for v in r):
            return False
    return True


@dataclass(frozen=True)
class CubeZeroInvariants:
    a: int
    aPlusB: int
    aPlusC: int
    aT: int

    @property
    def b(self):
        return self.aPlusB - self.a

    @property
    def c(self):
        return self.aPlusC - self.a


def cube_zero_invariants(t):
    """dim K1, dim K2, dim(im + K1), dim of the common kernel of transposes."""
    field = t.field
    mats = list(t.matrices)
    a = common_kernel_dim(mats)
    a_plus_b = common_kernel_dim(products(t, 2))
    im = image_sum_basis(mats, field)
    k1 = sparse_kernel([r for m in mats for r in m.sparse_rows() if r], t.d, field.p, field.one)
    for v in k1:
        im.add(v)
    a_t = common_kernel_dim([m.transpose() for m in mats])
    return CubeZeroInvariants(a, a_plus_b, im.dim, a_t)


def is_cube_zero(t):
    return all(m.is_zero() for m in products(t, 3))


def is_square_zero(t):
    return all(m.is_zero() for m in products(t, 2))


# ---------------------------------------------------------------- eigenvalues and support

def charpoly(m):
    """Characteristic polynomial coefficients [c_0, ..., c_d] (monic), Faddeev-LeVerrier."""
    field = m.field
    d = m.nrows
    if field.p is not None and field.p <= d:
        raise SupportNotSplit("characteristic too small for Faddeev-LeVerrier")
    A = m.rows()
    coeffs = [field.zero] * (d + 1)
    coeffs[d] = field.one
    Mk = [[field.zero] * d for _ in range(d)]
    p = field.p
    for k in range(1, d + 1):
        AM = mat_mul(A, Mk, field) if k > 1 else [[field.zero] * d for _ in range(d)]
        c_prev = coeffs[d - k + 1]
        Mk = [[field.norm(AM[r][c] + (c_prev if r == c else 0)) for c in range(d)] for r in range(d)]
        AMk = mat_mul(A, Mk, field)
        tr = sum((AMk[r][r] for r in range(d)), field.zero)
        ck = field.norm(-tr * field.inv(field(k)))
        coeffs[d - k] = ck
    return coeffs


def _poly_eval(coeffs, x, field):
    s = field.zero
    for c in reversed(coeffs):
        s = field.norm(s * x + c)
    return s


def _deflate(coeffs, root, field):
    """Divide by (t - root); assumes root is a root."""
    d = len(coeffs) - 1
    out = [field.zero] * d
    carry = field.zero
    for k in range(d, 0, -1):
        carry = field.norm(coeffs[k] + carry * root) if k < d else coeffs[d]
        out[k - 1] = carry
    return out


def _divisors(n):
    n = abs(int(n))
    small = [k for k in range(1, int(n ** 0.5) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def rational_roots(coeffs, field):
    """Roots with multiplicity; raises SupportNotSplit if the polynomial does not split."""
    d = len(coeffs) - 1
    roots = []
    cur = list(coeffs)
    if field.p is not None:
        candidates = range(field.p)
        while len(cur) > 1:
            for r in candidates:
                if not _poly_eval(cur, r, field):
                    roots.append(r)
                    cur = _deflate(cur, r, field)
                    break
            else:
                raise SupportNotSplit("characteristic polynomial does not split over the prime field")
        return roots
    while len(cur) > 1 and not cur[0]:
        roots.append(mpq(0))
        cur = cur[1:]
    while len(cur) > 1:
        den = lcm(*[int(mpq(c).denominator) for c in cur])
        ints = [int(c * den) for c in cur]
        found = None
        for pnum in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                for sgn in (1, -1):
                    r = mpq(sgn * pnum, q)
                    if not _poly_eval(cur, r, field):
                        found = r
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise SupportNotSplit("characteristic polynomial has non-rational roots")
        roots.append(found)
        cur = _deflate(cur, found, field)
    assert len(roots) == d
    return roots


def eigenvalues(m):
    """Distinct eigenvalues (sorted) of a matrix whose characteristic polynomial splits."""
    return sorted(set(rational_roots(charpoly(m), m.field)))


def _shifted_power_rows(m, lam, d, field):
    A = [list(r) for r in m.rows()]
    for k in range(d):
        A[k][k] = field.norm(A[k][k] - lam)
    P = A
    for _ in range(d - 1):
        P = mat_mul(P, A, field)
    return [{c: v for c, v in enumerate(r) if v} for r in P]


def joint_eigenspaces(t):
    """Joint generalized eigenspaces: list of (lambda tuple, basis vectors as dicts)."""
    field = t.field
    d = t.d
    eig = [eigenvalues(m) for m in t.matrices]
    powers = [{lam: _shifted_power_rows(m, lam, d, field) for lam in ev} for m, ev in zip(t.matrices, eig)]
    out = []

    def rec(i, lams, constraint_rows):
        if i == t.n:
            kern = sparse_kernel(constraint_rows, d, field.p, field.one)
            if kern:
                out.append((tuple(lams), kern))
            return
        for lam in eig[i]:
            rows = constraint_rows + [r for r in powers[i][lam] if r]
            if d - sparse_rank(rows, field.p) > 0:
                rec(i + 1, lams + [lam], rows)

    rec(0, [], [])
    return out


def support_points(t):
    """Points lambda with M/(y - lambda)M != 0."""
    return {lams for lams, _ in joint_eigenspaces(t)}


def quotient_dim_at(t, lam):
    """dim M/(y - lambda)M = d - dim sum_i im(x_i - lambda_i)."""
    field = t.field
    shifted = translate(t, [field.norm(-field(x)) for x in lam])
    return t.d - image_sum_basis(list(shifted.matrices), field).dim


def restrict(t, basis):
    """Tuple induced on an invariant subspace spanned by ``basis`` (dict vectors)."""
    field = t.field
    d = t.d
    k = len(basis)
    from .linalg import LinearSolver
    solver = LinearSolver(basis, d, field)
    mats = []
    for m in t.rows:
        cols = []
        for v in basis:
            img = {}
            for r in range(d):
                s = sum((m[r][c] * x for c, x in v.items() if m[r][c]), field.zero)
                s = field.norm(s)
                if s:
                    img[r] = s
            u = solver.solve(img)
            if u is None:
                raise PreconditionError("subspace is not invariant")
            cols.append(u)
        rows = [[cols[c].get(r, field.zero) for c in range(k)] for r in range(k)]
        mats.append(ExactMatrix(field, k, k, dense=tuple(tuple(x) for x in rows)))
    return CommTuple(tuple(mats))


def primary_decomposition(t):
    """[(lambda, restricted tuple)] over the joint generalized eigenspaces."""
    return [(lams, restrict(t, basis)) for lams, basis in joint_eigenspaces(t)]


# ---------------------------------------------------------------- Toeplitz structure

def jordan_blocks(m):
    """Block sizes if m is a nilpotent upper Jordan matrix with weakly decreasing blocks."""
    d = m.nrows
    rows = m.rows()
    one = m.field.one
    for r in range(d):
        for c in range(d):
            v = rows[r][c]
            if c == r + 1:
                if v and v != one:
                    return None
            elif v:
                return None
    sizes = []
    cur = 1
    for r in range(d - 1):
        if rows[r][r + 1]:
            cur += 1
        else:
            sizes.append(cur)
            cur = 1
    sizes.append(cur)
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        return None
    return sizes


def is_toeplitz_block(block, k, l):
    """Upper-triangular Toeplitz test for a k x l block."""
    shift = max(l - k, 0)
    values = {}
    for r in range(k):
        for c in range(l):
            v = block[r][c]
            delta = c - r - shift
            if delta < 0:
                if v:
                    return False
                continue
            if delta in values:
                if values[delta] != v:
                    return False
            else:
                values[delta] = v
    return True


def is_toeplitz_relative(t):
    """Each x_i (i >= 2) is block upper-triangular Toeplitz for the Jordan pattern of x_1."""
    sizes = jordan_blocks(t.matrices[0])
    if sizes is None:
        raise PreconditionError("x_1 must be nilpotent, in Jordan form, with weakly decreasing blocks")
    starts = [sum(sizes[:i]) for i in range(len(sizes))]
    for m in t.rows[1:]:
        for bi, k in enumerate(sizes):
            for bj, l in enumerate(sizes):
                r0, c0 = starts[bi], starts[bj]
                block = [m[r0 + r][c0:c0 + l] for r in range(k)]
                if not is_toeplitz_block(block, k, l):
                    return False
    return True


def centralizer_basis(t):
    """Basis of matrices commuting with every x_i."""
    field = t.field
    d = t.d
    p = field.p
    rows = []
    for m in t.rows:
        for r in range(d):
            for c in range(d):
                row = {}
                for k in range(d):
                    a = m[r][k]
                    if a:
                        key = k * d + c
                        row[key] = field.norm(row.get(key, 0) + a)
                    a = m[k][c]
                    if a:
                        key = r * d + k
                        row[key] = field.norm(row.get(key, 0) - a)
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    kern = sparse_kernel(rows, d * d, p, field.one)
    return [ExactMatrix(field, d, d, sparse={(i // d, i % d): v for i, v in z.items()}) for z in kern]
