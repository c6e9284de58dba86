"""The ADHM dictionary, Hilbert functions, duality and apolarity.

A stable pair (x, v) gives the Quot point F/K with K = ker(e_g -> v_g).
Apolarity pairs F with F* = sum k[z] e_j^* by <y^a e_i, z^b e_j^*> = [a=b][i=j];
y acts on F* by coefficientless contraction.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import GradingError, PreconditionError, ShapeError, StabilityError, SupportNotSplit
from .field import QQ
from .linalg import Echelon, ExactMatrix, LinearSolver, sparse_kernel, transpose_columns
from .modules import (GradedModule, ModulePresentation, kernel_generators_filtered,
                      kernel_generators_graded)
from .poly import DualElement, FreeModule, _monomials, contract_mono, mono_mul, unit
from .tuples import (CommTuple, common_kernel_dim, image_sum_basis, is_nilpotent, nilpotency_bound,
                     primary_decomposition, support_points, translate)


def _matvec(rows, v, field):
    p = field.p
    out = {}
    for r, row in enumerate(rows):
        s = 0
        for c, x in v.items():
            a = row[c]
            if a:
                s += a * x
        if p:
            s %= p
        if s:
            out[r] = s
    return out


def _as_sparse(vec, field):
    if isinstance(vec, dict):
        return {k: field(v) for k, v in vec.items() if field(v)}
    return {k: field(v) for k, v in enumerate(vec) if field(v)}


# ---------------------------------------------------------------- modules from tuples

@dataclass(frozen=True, eq=False)
class FiniteModule:
    """k^d with y_i acting as x_i."""

    tuple: CommTuple

    @property
    def dim(self):
        return self.tuple.d

    def act(self, i, vec):
        """y_i (1-based) applied to a sparse or dense vector."""
        t = self.tuple
        return _matvec(t.rows[i - 1], _as_sparse(vec, t.field), t.field)

    def act_mono(self, mono, vec):
        t = self.tuple
        v = _as_sparse(vec, t.field)
        for i, a in enumerate(mono):
            for _ in range(a):
                v = _matvec(t.rows[i], v, t.field)
        return v

    def submodule_span(self, vectors):
        """Echelon basis of the S-submodule generated by ``vectors``."""
        return closure(self.tuple, [_as_sparse(v, self.tuple.field) for v in vectors])

    def min_generator_count(self):
        """dim M / m M (equals the number of minimal generators for local M)."""
        return self.dim - image_sum_basis(list(self.tuple.matrices), self.tuple.field).dim

    def summands(self):
        """Local summands: [(support point, FiniteModule)]."""
        return [(lam, FiniteModule(sub)) for lam, sub in primary_decomposition(self.tuple)]

    def support(self):
        return support_points(self.tuple)


def module_from_tuple(t):
    return FiniteModule(t)


def closure(t, vectors):
    """Breadth-first closure of the vectors under x_1..x_n; returns an Echelon."""
    field = t.field
    ech = Echelon(field)
    queue = []
    for v in vectors:
        if ech.add(v):
            queue.append(v)
    while queue:
        nxt = []
        for v in queue:
            for rows in t.rows:
                w = _matvec(rows, v, field)
                if w and ech.add(w):
                    nxt.append(w)
        queue = nxt
    return ech


@dataclass(frozen=True, eq=False)
class StablePair:
    """A commuting tuple plus r vectors of length d."""

    tuple: CommTuple
    vectors: tuple

    def __post_init__(self):
        field = self.tuple.field
        vecs = []
        for v in self.vectors:
            v = tuple(field(x) for x in v)
            if len(v) != self.tuple.d:
                raise ShapeError("vector length must equal d")
            vecs.append(v)
        object.__setattr__(self, "vectors", tuple(vecs))

    @property
    def r(self):
        return len(self.vectors)

    @classmethod
    def from_basis_indices(cls, t, indices):
        """Pair whose vectors are standard basis vectors (0-based indices)."""
        f = t.field
        vecs = [tuple(f.one if k == i else f.zero for k in range(t.d)) for i in indices]
        return cls(t, tuple(vecs))


def is_stable(pair):
    """Do the iterated images of the vectors span k^d?"""
    field = pair.tuple.field
    vecs = [{k: x for k, x in enumerate(v) if x} for v in pair.vectors]
    return closure(pair.tuple, [v for v in vecs if v]).dim == pair.tuple.d


def _monomial_images(t, vecs, D):
    """{(g, mono): x^mono v_g} for |mono| < D."""
    field = t.field
    n = t.n
    out = {}
    for g, v in enumerate(vecs):
        out[(g, tuple([0] * n))] = v
        for k in range(1, D):
            for m in _monomials(n, k):
                i = next(a for a, e in enumerate(m) if e)
                prev = list(m)
                prev[i] -= 1
                out[(g, m)] = _matvec(t.rows[i], out[(g, tuple(prev))], field)
    return out


def evaluation_is_graded(t, vecs, degrees, D):
    """True iff V = sum_j ev(F_j) is a direct sum (the pair defines a graded module)."""
    field = t.field
    F = FreeModule(t.n, degrees)
    imgs = _monomial_images(t, vecs, D)
    total = 0
    for j in range(min(degrees), max(degrees) + D):
        ech = Echelon(field)
        for g, m in F.basis(j):
            w = imgs.get((g, m))
            if w:
                ech.add(w)
        total += ech.dim
    return total == t.d


def quot_point(pair, degrees=None, translate_to_origin=False):
    """ModulePresentation of F/K where K = ker(F -> k^d, e_g -> v_g)."""
    if not is_stable(pair):
        raise StabilityError("the vectors do not generate k^d under the tuple")
    t = pair.tuple
    field = t.field
    if not is_nilpotent(t):
        if not translate_to_origin:
            raise SupportNotSplit("tuple is not nilpotent; pass translate_to_origin=True for local modules")
        pts = support_points(t)
        if len(pts) != 1:
            raise SupportNotSplit(f"support has {len(pts)} points; translation cannot centre it")
        lam = next(iter(pts))
        t = translate(t, [field.norm(-x) for x in lam])
    r = pair.r
    degrees = tuple([0] * r) if degrees is None else tuple(degrees)
    if len(degrees) != r:
        raise ShapeError("one degree per vector required")
    vecs = [{k: x for k, x in enumerate(v) if x} for v in pair.vectors]
    D = nilpotency_bound(t)
    d = t.d
    imgs = _monomial_images(t, vecs, D)
    if evaluation_is_graded(t, vecs, degrees, D):
        F = FreeModule(t.n, degrees)

        def columns(j):
            return [imgs.get((g, m), {}) for g, m in F.basis(j)], d

        kgens = kernel_generators_graded(F, min(degrees), max(degrees) + D, columns, field)
    else:
        kgens = kernel_generators_filtered(t.n, degrees, D - 1, lambda c: imgs.get(c, {}), d, field)
    return ModulePresentation(t.n, degrees, tuple(kgens), field)


def tuple_from_module(pres):
    """(CommTuple on a basis of F/K, images of the generators e_g)."""
    if pres.is_graded:
        return graded_tuple(pres.graded)
    return pres.filtered.tuple_and_vectors()


def graded_tuple(G):
    """Tuple of a GradedQuotient on the basis ordered by degree then standard coordinate."""
    field = G.field
    offsets = {}
    off = 0
    for j in sorted(G.dims):
        offsets[j] = off
        off += G.dims[j]
    d = off
    mats = []
    for i in range(G.n):
        rows = [[field.zero] * d for _ in range(d)]
        for j in sorted(G.dims):
            for k in range(G.dims[j]):
                img = G.apply_var(i, j, {k: field.one})
                for rr, v in img.items():
                    rows[offsets[j + 1] + rr][offsets[j] + k] = v
        mats.append(ExactMatrix(field, d, d, dense=tuple(tuple(x) for x in rows)))
    vecs = []
    zero = tuple([0] * G.n)
    for g, dg in enumerate(G.pres.degrees):
        v = [field.zero] * d
        if dg in G.dims:
            img = G.project(dg, G.F.to_vector({(g, zero): field.one}, dg))
            for k, x in img.items():
                v[offsets[dg] + k] = x
        vecs.append(tuple(v))
    return CommTuple(tuple(mats)), vecs


# ---------------------------------------------------------------- Hilbert functions and duality

@dataclass(frozen=True)
class HilbertFunction:
    """Degreewise dimensions starting at degree ``start``; trailing zeros trimmed."""

    values: tuple
    start: int = 0

    @property
    def total(self):
        return sum(self.values)

    def as_dict(self):
        return {self.start + i: v for i, v in enumerate(self.values) if v}

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def _hf_from_dims(dims):
    if not dims:
        return HilbertFunction(())
    start = min(0, min(dims))
    top = max(dims)
    return HilbertFunction(tuple(dims.get(j, 0) for j in range(start, top + 1)), start)


def hilbert_function(pres):
    """Graded Hilbert function of F/K; raises GradingError for inhomogeneous K."""
    if not pres.is_graded:
        raise GradingError("Hilbert function needs homogeneous K")
    return _hf_from_dims(pres.graded.dims)


def local_hilbert_function(t):
    """dims of m^i M / m^{i+1} M for the module of a nilpotent tuple."""
    field = t.field
    mats = list(t.matrices)
    cur = Echelon(field, [{k: field.one} for k in range(t.d)])
    out = []
    while cur.dim:
        nxt = image_sum_basis(mats, field, cur.basis())
        out.append(cur.dim - nxt.dim)
        if nxt.dim == cur.dim:
            raise SupportNotSplit("the module is not supported at the origin")
        cur = nxt
    return HilbertFunction(tuple(out))


def associated_graded(t):
    """gr M = sum m^i M / m^{i+1} M as a GradedModule (generated in degree 0).

    This is the limit of the torus orbit of the point, so open conditions
    such as trivial negative tangents may be checked there.
    """
    field = t.field
    fm = FiniteModule(t)
    layers = [Echelon(field, [{k: field.one} for k in range(t.d)])]
    while layers[-1].dim:
        nxt = image_sum_basis(list(t.matrices), field, layers[-1].basis())
        if nxt.dim == layers[-1].dim:
            raise SupportNotSplit("the module is not supported at the origin")
        layers.append(nxt)
    comps = [layers[i + 1].complement_in(layers[i].basis()) for i in range(len(layers) - 1)]
    dims = {i: len(c) for i, c in enumerate(comps)}
    act = {}
    for i in range(len(comps) - 1):
        below = layers[i + 2].basis()
        solver = LinearSolver(comps[i + 1] + below, t.d, field)
        m = len(comps[i + 1])
        for v in range(t.n):
            cols = []
            for vec in comps[i]:
                u = solver.solve(fm.act(v + 1, vec))
                cols.append({c: x for c, x in u.items() if c < m and x})
            act[(v, i)] = cols
    return GradedModule(t.n, dims, act, field)


def associated_graded_presentation(t):
    """Graded presentation of gr M with all generators in degree 0."""
    return associated_graded(t).minimal_presentation()[0]


def dual_tuple(t):
    """x^T: the tuple of M^vee."""
    return CommTuple(tuple(m.transpose() for m in t.matrices))


def min_generators(t):
    """Minimal number of generators of a local (nilpotent) module: dim of the common kernel of x^T."""
    if not is_nilpotent(t):
        raise PreconditionError("min_generators expects a nilpotent tuple")
    return common_kernel_dim([m.transpose() for m in t.matrices])


def dual_module(pres):
    """M^vee of a graded quotient, as a GradedModule."""
    return pres.graded.dual()


# ---------------------------------------------------------------- apolarity

def _dual_coords(n, degrees, top):
    """Coordinates (g, z-mono) of F* with total degree deg g + |mono| <= top, by degree."""
    out = []
    for k in range(min(degrees), top + 1):
        for g, dg in enumerate(degrees):
            if k - dg >= 0:
                out.extend((g, m) for m in _monomials(n, k - dg))
    return out


def _terms_of(sigma):
    return sigma.as_dict() if isinstance(sigma, DualElement) else dict(sigma)


def apolar_span(sigmas, n, field=QQ):
    """All contractions y^a o sigma_i: (Echelon over coordinates, list of coordinates)."""
    terms = [{k: field(v) for k, v in _terms_of(s).items()} for s in sigmas]
    top = max((sum(m) for s in terms for (g, m) in s), default=0)
    coord_list = []
    index = {}

    def vec(s):
        v = {}
        for key, c in s.items():
            i = index.get(key)
            if i is None:
                i = index[key] = len(coord_list)
                coord_list.append(key)
            v[i] = c
        return v

    ech = Echelon(field)
    queue = [s for s in terms if s]
    for s in queue:
        ech.add(vec(s))
    seen = list(queue)
    # contractions by all monomials up to the top degree
    for a in range(1, top + 1):
        for mono in _monomials(n, a):
            for s in seen:
                c = contract_mono(mono, s)
                if c:
                    ech.add(vec(c))
    return ech, coord_list


def _is_homogeneous_dual(sigma, degrees):
    return len({degrees[g] + sum(m) for (g, m) in sigma}) <= 1


def perp_of_dual_gens(sigmas, n, r=None, degrees=None, field=QQ):
    """K = M^perp for the S-submodule M of F* generated by ``sigmas``, minimally generated."""
    terms = [{k: field(v) for k, v in _terms_of(s).items() if field(v)} for s in sigmas]
    if r is None:
        r = max((s.rank for s in sigmas if isinstance(s, DualElement)), default=0)
        r = max([r] + [g + 1 for s in terms for (g, _) in s])
    degrees = tuple([0] * r) if degrees is None else tuple(degrees)
    for s in terms:
        for (g, m) in s:
            if not 0 <= g < r or len(m) != n:
                raise ShapeError(f"dual term {(g, m)} does not fit n={n}, r={r}")
    ech, coords = apolar_span(terms, n, field)
    basis = [{coords[c]: x for c, x in v.items()} for v in ech.basis()]
    if all(_is_homogeneous_dual(s, degrees) for s in terms):
        F = FreeModule(n, degrees)
        by_deg = {}
        for b in basis:
            j = next(degrees[g] + sum(m) for (g, m) in b)
            by_deg.setdefault(j, []).append(b)
        top = max(by_deg, default=min(degrees) - 1)

        def columns(j):
            mb = by_deg.get(j, [])
            cols = [{t: b[key] for t, b in enumerate(mb) if key in b} for key in F.basis(j)]
            return cols, len(mb)

        kgens = kernel_generators_graded(F, min(degrees), max(top, max(degrees)) + 1, columns, field)
    else:
        D = max((sum(m) for b in basis for (g, m) in b), default=-1) + 1

        def column(key):
            return {t: b[key] for t, b in enumerate(basis) if key in b}

        kgens = kernel_generators_filtered(n, degrees, D, column, len(basis), field)
    return ModulePresentation(n, degrees, tuple(kgens), field)


def dual_gens_of_module(pres):
    """Basis of K^perp (reduced with respect to the standard coordinates) as DualElements."""
    field = pres.field
    n, r = pres.n, pres.r
    out = []
    if pres.is_graded:
        G = pres.graded
        for j in sorted(G.dims):
            rows = G.kech[j].basis()
            basis = G.F.basis(j)
            for v in sparse_kernel(rows, len(basis), field.p, field.one):
                out.append(DualElement.make(n, r, {basis[c]: x for c, x in v.items()}))
    else:
        Q = pres.filtered
        for v in sparse_kernel(Q.kech.basis(), len(Q.coords), field.p, field.one):
            out.append(DualElement.make(n, r, {Q.coords[c]: x for c, x in v.items()}))
    return out


def minimal_dual_generators(sigmas, n, field=QQ):
    """Canonical minimal generators of S o {sigma}: a complement of m o M in M."""
    terms = [{k: field(v) for k, v in _terms_of(s).items()} for s in sigmas]
    ech, coords = apolar_span(terms, n, field)
    basis = [{coords[c]: x for c, x in v.items()} for v in ech.basis()]
    index = {c: i for i, c in enumerate(coords)}
    inner = Echelon(field)
    for b in basis:
        for i in range(n):
            c = contract_mono(unit(n, i), b)
            if c:
                inner.add({index[k]: x for k, x in c.items()})
    rank = max((s.rank for s in sigmas if isinstance(s, DualElement)), default=0)
    rank = max([rank] + [g + 1 for (g, _) in coords])
    comp = inner.complement_in(ech.basis())
    return [DualElement.make(n, rank, {coords[c]: x for c, x in v.items()}) for v in comp]


def pairs_to_zero(pres, sigmas):
    """Check <k, sigma> = 0 for all K-generators times monomials (up to the sigma degree)."""
    field = pres.field
    p = field.p
    for s in sigmas:
        terms = _terms_of(s)
        top = max((sum(m) for (g, m) in terms), default=0)
        for k in pres.elements():
            for a in range(top + 1):
                for mono in _monomials(pres.n, a):
                    tot = 0
                    for (g, m), c in k.items():
                        v = terms.get((g, mono_mul(m, mono)))
                        if v:
                            tot += c * v
                    if (tot % p if p else tot):
                        return False
    return True
