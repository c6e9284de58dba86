"""Exact dense and sparse linear algebra over a ``Field``.

Sparse vectors are plain dicts ``{column: value}`` with no stored zeros.
Everything returned to callers is canonical (reduced row echelon form), so
the dense and sparse code paths give identical answers.
"""

from gmpy2 import mpq

from .errors import ArithmeticDomainError, ShapeError, SingularMatrixError
from .field import QQ, Fp, infer_field

SPARSE_THRESHOLD = 0.1


class ExactMatrix:
    """Immutable matrix over an exact field, stored dense or coordinate-sparse."""

    __slots__ = ("field", "nrows", "ncols", "_dense", "_sparse")

    def __init__(self, field, nrows, ncols, dense=None, sparse=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self._dense = dense
        self._sparse = sparse

    @classmethod
    def from_rows(cls, rows, field=None):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        flat = [x for r in rows for x in r]
        if field is None:
            field = infer_field(flat)
        else:
            kinds = {x.p for x in flat if isinstance(x, Fp)}
            if kinds and (len(kinds) > 1 or field.p not in kinds):
                raise ArithmeticDomainError(f"entries from F_{sorted(kinds)} do not belong to {field.label()}")
        data = tuple(tuple(field(x) for x in r) for r in rows)
        return cls(field, len(rows), ncols, dense=data)

    @classmethod
    def from_sparse(cls, field, nrows, ncols, entries):
        clean = {}
        for (r, c), v in entries.items():
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise ShapeError(f"entry {(r, c)} outside {nrows}x{ncols}")
            v = field(v)
            if v:
                clean[(r, c)] = v
        return cls(field, nrows, ncols, sparse=clean)

    @classmethod
    def zeros(cls, nrows, ncols, field=QQ):
        return cls(field, nrows, ncols, sparse={})

    @classmethod
    def identity(cls, n, field=QQ):
        return cls(field, n, n, sparse={(i, i): field.one for i in range(n)})

    @property
    def is_sparse(self):
        return self._sparse is not None

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def rows(self):
        """Dense list-of-lists copy of the entries."""
        if self._dense is not None:
            return [list(r) for r in self._dense]
        out = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self._sparse.items():
            out[r][c] = v
        return out

    def sparse_rows(self):
        out = [dict() for _ in range(self.nrows)]
        if self._sparse is not None:
            for (r, c), v in self._sparse.items():
                out[r][c] = v
        else:
            for i, r in enumerate(self._dense):
                out[i] = {c: v for c, v in enumerate(r) if v}
        return out

    def nnz(self):
        if self._sparse is not None:
            return len(self._sparse)
        return sum(1 for r in self._dense for v in r if v)

    def density(self):
        size = self.nrows * self.ncols
        return self.nnz() / size if size else 0.0

    def to_dense(self):
        return ExactMatrix(self.field, self.nrows, self.ncols, dense=tuple(tuple(r) for r in self.rows()))

    def to_sparse(self):
        entries = {}
        for i, r in enumerate(self.sparse_rows()):
            for c, v in r.items():
                entries[(i, c)] = v
        return ExactMatrix(self.field, self.nrows, self.ncols, sparse=entries)

    def __getitem__(self, rc):
        r, c = rc
        if self._dense is not None:
            return self._dense[r][c]
        return self._sparse.get((r, c), self.field.zero)

    def transpose(self):
        rows = self.rows()
        return ExactMatrix(self.field, self.ncols, self.nrows,
                           dense=tuple(tuple(rows[r][c] for r in range(self.nrows)) for c in range(self.ncols)))

    T = property(transpose)

    def _check(self, other):
        if self.field != other.field:
            raise ArithmeticDomainError(f"{self.field.label()} vs {other.field.label()}")

    def __matmul__(self, other):
        self._check(other)
        if self.ncols != other.nrows:
            raise ShapeError(f"{self.shape} @ {other.shape}")
        return ExactMatrix(self.field, self.nrows, other.ncols,
                           dense=tuple(tuple(r) for r in mat_mul(self.rows(), other.rows(), self.field)))

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"{self.shape} + {other.shape}")
        a, b = self.rows(), other.rows()
        f = self.field
        return ExactMatrix(f, self.nrows, self.ncols,
                           dense=tuple(tuple(f.norm(x + y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b)))

    def __neg__(self):
        f = self.field
        return ExactMatrix(f, self.nrows, self.ncols, dense=tuple(tuple(f.norm(-x) for x in r) for r in self.rows()))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        f = self.field
        s = f(s)
        return ExactMatrix(f, self.nrows, self.ncols, dense=tuple(tuple(f.norm(s * x) for x in r) for r in self.rows()))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows() == other.rows()

    def __hash__(self):
        return hash((self.field, self.shape, tuple(tuple(r) for r in self.rows())))

    def is_zero(self):
        return self.nnz() == 0

    def to_json(self):
        return [[self.field.to_json(v) for v in r] for r in self.rows()]

    def __repr__(self):
        body = "; ".join(" ".join(str(self.field.signed(v)) for v in r) for r in self.rows())
        return f"ExactMatrix[{self.field.label()}]({body})"


# ---------------------------------------------------------------- dense helpers

def mat_mul(a, b, field):
    """Product of dense row lists."""
    p = field.p
    if not a:
        return []
    m = len(b[0]) if b else 0
    out = []
    bcols = list(zip(*b)) if b else [() for _ in range(m)]
    for row in a:
        nz = [(k, v) for k, v in enumerate(row) if v]
        new = []
        for col in bcols:
            s = 0
            for k, v in nz:
                w = col[k]
                if w:
                    s += v * w
            new.append(s % p if p else field.norm(s) if s else field.zero)
        out.append(new)
    return out


def identity_rows(n, field):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def _dense_rref(rows, ncols, field):
    p = field.p
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    m = len(a)
    for c in range(ncols):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        if inv != 1:
            a[r] = [(x * inv) % p if p else x * inv for x in a[r]]
        prow = a[r]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                ai = a[i]
                if p:
                    a[i] = [(x - f * y) % p for x, y in zip(ai, prow)]
                else:
                    a[i] = [x - f * y if y else x for x, y in zip(ai, prow)]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        a[i] = [field.zero] * ncols
    return a, pivots


# ---------------------------------------------------------------- sparse helpers

def sparse_echelon(rows, p=None, pivots=None):
    """Forward elimination by leading column.

    Returns ``{pivot_col: row}`` with each row monic at its pivot, not yet
    back-reduced.  ``pivots`` may be an existing dict to extend.
    """
    piv = {} if pivots is None else pivots
    for r in rows:
        r = dict(r)
        while r:
            c = min(r)
            prow = piv.get(c)
            if prow is None:
                lead = r[c]
                if lead != 1:
                    if p:
                        inv = pow(lead, p - 2, p)
                        r = {k: v * inv % p for k, v in r.items()}
                    else:
                        inv = mpq(1) / lead
                        r = {k: v * inv for k, v in r.items()}
                piv[c] = r
                break
            f = r[c]
            if p:
                for k, v in prow.items():
                    nv = (r.get(k, 0) - f * v) % p
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
            else:
                for k, v in prow.items():
                    nv = r.get(k, 0) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
    return piv


def back_reduce(piv, p=None):
    """Turn a leading-column echelon dict into reduced form, in place."""
    done = {}
    for c in sorted(piv, reverse=True):
        r = piv[c]
        targets = [k for k in r if k != c and k in done]
        for k in targets:
            f = r.get(k)
            if not f:
                continue
            prow = done[k]
            if p:
                for kk, v in prow.items():
                    nv = (r.get(kk, 0) - f * v) % p
                    if nv:
                        r[kk] = nv
                    else:
                        r.pop(kk, None)
            else:
                for kk, v in prow.items():
                    nv = r.get(kk, 0) - f * v
                    if nv:
                        r[kk] = nv
                    else:
                        r.pop(kk, None)
        done[c] = r
    return piv


def sparse_rref(rows, p=None):
    """Reduced row echelon form of sparse rows: list of (pivot, row) sorted by pivot."""
    piv = back_reduce(sparse_echelon(rows, p), p)
    return [(c, piv[c]) for c in sorted(piv)]


def sparse_rank(rows, p=None):
    return len(sparse_echelon(rows, p))


def sparse_kernel(rows, ncols, p=None, one=1):
    """Basis of {v : rows . v = 0} as sparse dicts, one per free column (ascending)."""
    red = sparse_rref(rows, p)
    pivset = {c for c, _ in red}
    kern = {f: {f: one} for f in range(ncols) if f not in pivset}
    for c, r in red:
        for k, v in r.items():
            if k != c:
                kern[k][c] = (-v) % p if p else -v
    return [kern[f] for f in sorted(kern)]


def transpose_columns(columns, nrows=None):
    """Sparse columns (list of dicts over rows) to sparse rows."""
    rows = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    if nrows is None:
        return [rows[i] for i in sorted(rows)]
    return [rows.get(i, {}) for i in range(nrows)]


def kernel_of_columns(columns, p=None, one=1):
    """Kernel of the map whose j-th column is ``columns[j]``."""
    return sparse_kernel(transpose_columns(columns), len(columns), p, one)


def vec_add(u, v, p=None, s=1):
    """u + s*v as a new sparse vector."""
    out = dict(u)
    for k, x in v.items():
        nv = out.get(k, 0) + s * x
        if p:
            nv %= p
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def vec_scale(v, s, p=None):
    if not s:
        return {}
    if p:
        return {k: x * s % p for k, x in v.items() if x * s % p}
    return {k: x * s for k, x in v.items()}


class Echelon:
    """A subspace of k^N kept as fully reduced rows keyed by pivot column."""

    def __init__(self, field, rows=None):
        self.field = field
        self.p = field.p
        self.rows = {}
        if rows:
            self.rows = back_reduce(sparse_echelon(rows, self.p), self.p)

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, v):
        p = self.p
        v = dict(v)
        targets = [k for k in v if k in self.rows]
        for k in targets:
            f = v.get(k)
            if not f:
                continue
            for kk, x in self.rows[k].items():
                nv = v.get(kk, 0) - f * x
                if p:
                    nv %= p
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)
        return v

    def contains(self, v):
        return not self.reduce(v)

    def add(self, v):
        """Insert v; return True when it enlarged the space."""
        w = self.reduce(v)
        if not w:
            return False
        p = self.p
        c = min(w)
        inv = self.field.inv(w[c])
        w = vec_scale(w, inv, p)
        for k, r in self.rows.items():
            f = r.get(c)
            if f:
                self.rows[k] = vec_add(r, w, p, -f)
        self.rows[c] = w
        return True

    def basis(self):
        return [self.rows[c] for c in sorted(self.rows)]

    def pivots(self):
        return sorted(self.rows)

    def complement_in(self, vectors):
        """Canonical basis (RREF) of span(vectors) modulo this subspace."""
        reduced = [self.reduce(v) for v in vectors]
        return [r for _, r in sparse_rref([r for r in reduced if r], self.p)]


class LinearSolver:
    """Solve A u = b for many right-hand sides, A given by sparse columns."""

    def __init__(self, columns, nrows, field):
        self.field = field
        self.p = field.p
        self.n = nrows
        aug = []
        for j, col in enumerate(columns):
            v = dict(col)
            v[nrows + j] = field.one
            aug.append(v)
        piv = sparse_echelon(aug, self.p)
        self.piv = {c: r for c, r in piv.items() if c < nrows}
        self.rank = len(self.piv)

    def solve(self, b):
        """A particular solution (sparse dict over columns) or None."""
        p = self.p
        v = dict(b)
        while True:
            lows = [k for k in v if k < self.n]
            if not lows:
                break
            c = min(lows)
            prow = self.piv.get(c)
            if prow is None:
                return None
            f = v[c]
            for k, x in prow.items():
                nv = v.get(k, 0) - f * x
                if p:
                    nv %= p
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return {k - self.n: ((-x) % p if p else -x) for k, x in v.items()}


# ---------------------------------------------------------------- public API

def _choose_sparse(m):
    return m.density() < SPARSE_THRESHOLD


def rref(m, method="auto"):
    """Reduced row echelon form: (matrix, pivot columns, rank)."""
    field = m.field
    use_sparse = _choose_sparse(m) if method == "auto" else method == "sparse"
    if use_sparse:
        red = sparse_rref(m.sparse_rows(), field.p)
        entries = {}
        for i, (_, r) in enumerate(red):
            for c, v in r.items():
                entries[(i, c)] = v
        pivots = tuple(c for c, _ in red)
        out = ExactMatrix(field, m.nrows, m.ncols, sparse=entries)
    else:
        rows, piv = _dense_rref(m.rows(), m.ncols, field)
        pivots = tuple(piv)
        out = ExactMatrix(field, m.nrows, m.ncols, dense=tuple(tuple(r) for r in rows))
    return out, pivots, len(pivots)


def rank(m):
    return sparse_rank(m.sparse_rows(), m.field.p)


def kernel_basis(m, method="auto"):
    """Basis of the right kernel, one vector per free column in ascending order."""
    red, pivots, _ = rref(m, method)
    field = m.field
    pivset = set(pivots)
    rows = red.sparse_rows()
    out = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [field.zero] * m.ncols
        v[f] = field.one
        for i, c in enumerate(pivots):
            x = rows[i].get(f)
            if x:
                v[c] = field.norm(-x)
        out.append(tuple(v))
    return out


def inverse(m):
    if m.nrows != m.ncols:
        raise ShapeError("inverse of a non-square matrix")
    n = m.nrows
    f = m.field
    aug = [r + ident for r, ident in zip(m.rows(), identity_rows(n, f))]
    red, piv = _dense_rref(aug, 2 * n, f)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrixError("matrix is singular")
    return ExactMatrix(f, n, n, dense=tuple(tuple(r[n:]) for r in red))


def is_invertible(m):
    return m.nrows == m.ncols and rank(m) == m.nrows


def mat_vec(m, v):
    f = m.field
    p = f.p
    out = []
    for r in m.rows():
        s = sum((a * b for a, b in zip(r, v) if a and b), f.zero)
        out.append(s % p if p else s)
    return tuple(out)


def column_space_dim(mats):
    """Dimension of the sum of column spaces of several matrices with equal row count."""
    if not mats:
        return 0
    cols = []
    for m in mats:
        rows = m.rows()
        for c in range(m.ncols):
            col = {r: rows[r][c] for r in range(m.nrows) if rows[r][c]}
            if col:
                cols.append(col)
    return sparse_rank(cols, mats[0].field.p)


def common_kernel_dim(mats):
    """dim of the intersection of the kernels of matrices with equal column count."""
    if not mats:
        return 0
    rows = []
    for m in mats:
        rows.extend(r for r in m.sparse_rows() if r)
    return mats[0].ncols - sparse_rank(rows, mats[0].field.p)


def common_kernel(mats):
    rows = []
    for m in mats:
        rows.extend(r for r in m.sparse_rows() if r)
    f = mats[0].field
    return sparse_kernel(rows, mats[0].ncols, f.p, f.one)


def dense_rank_mod_p(rows, ncols, p):
    """Rank of sparse integer rows modulo a prime p < 2^31 by dense elimination."""
    import numpy as np
    if p >= 2 ** 31:
        raise ValueError("dense modular rank needs p < 2^31")
    if not rows or not ncols:
        return 0
    a = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, r in enumerate(rows):
        for k, v in r.items():
            a[i, k] = int(v) % p
    rank = 0
    nrows = a.shape[0]
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank] = a[rank] * inv % p
        below = a[rank + 1:, c]
        idx = np.nonzero(below)[0] + rank + 1
        if idx.size:
            f = a[idx, c][:, None]
            a[idx, c:] = (a[idx, c:] - f * a[rank, c:][None, :]) % p
        rank += 1
    return rank
