"""Finite-degree modules F/K: presentations, graded pieces, and the S-action.

A ``ModulePresentation`` records F = sum S(-deg e_j) and generators of K.
Graded presentations expose a ``GradedQuotient`` whose degree-j piece has
as basis the F_j coordinates that are not pivots of the reduced echelon
form of K_j ("standard" coordinates).  Any graded module given by action
matrices is a ``GradedModule``; quotients are a special case.
"""

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .errors import GradingError, PreconditionError, ShapeError
from .field import QQ
from .linalg import Echelon, sparse_kernel, sparse_rref, transpose_columns
from .poly import FreeModule, mono_mul, sort_terms, unit, _monomials

# degree loops give up beyond this many degrees past the generators
COFINITE_LIMIT = 64


def _freeze(elem):
    return tuple(sorted(((g, tuple(m)), v) for (g, m), v in elem.items() if v))


@dataclass(frozen=True, eq=False)
class ModulePresentation:
    """F/K with F of rank r (generator degrees ``degrees``) and K = S*kgens."""

    n: int
    degrees: tuple
    kgens: tuple  # frozen elements: tuple of ((gen, mono), coeff)
    field: object = QQ

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(x) for x in self.degrees))
        frozen = []
        for k in self.kgens:
            items = dict(k) if not isinstance(k, dict) else k
            for (g, m) in items:
                if not 0 <= g < len(self.degrees) or len(m) != self.n or min(m, default=0) < 0:
                    raise ShapeError(f"term {(g, m)} does not fit n={self.n}, r={len(self.degrees)}")
            frozen.append(_freeze({key: self.field.norm(self.field(v)) for key, v in items.items()}))
        object.__setattr__(self, "kgens", tuple(k for k in frozen if k))

    @classmethod
    def make(cls, n, degrees, kgens, field=QQ):
        return cls(n, tuple(degrees), tuple(kgens), field)

    @property
    def r(self):
        return len(self.degrees)

    @cached_property
    def free(self):
        return FreeModule(self.n, self.degrees)

    def elements(self):
        return [dict(k) for k in self.kgens]

    def element_degrees(self):
        """Set of degrees occurring in each generator."""
        return [{self.degrees[g] + sum(m) for (g, m), _ in k} for k in self.kgens]

    @cached_property
    def is_graded(self):
        return all(len(s) == 1 for s in self.element_degrees())

    @cached_property
    def graded(self):
        if not self.is_graded:
            raise GradingError("K has inhomogeneous generators")
        return GradedQuotient(self)

    @cached_property
    def filtered(self):
        return FilteredQuotient(self)

    @cached_property
    def degree(self):
        """dim_k F/K."""
        if self.is_graded:
            return self.graded.total_dim
        return self.filtered.dim

    @cached_property
    def truncation_bound(self):
        """Least D with m^D (F/K) = 0."""
        if self.is_graded:
            return self.graded.nilpotency_length()
        return self.filtered.D

    def __eq__(self, other):
        return (isinstance(other, ModulePresentation) and self.n == other.n and self.degrees == other.degrees
                and self.field == other.field and self.kgens == other.kgens)

    def __hash__(self):
        return hash((self.n, self.degrees, self.kgens))

    def __repr__(self):
        return f"ModulePresentation(n={self.n}, degrees={list(self.degrees)}, {len(self.kgens)} K-generators)"


# ---------------------------------------------------------------- graded modules

class GradedModule:
    """Finite-dimensional graded S-module given by dimensions and action columns.

    ``act[(i, j)]`` lists, for each basis vector of M_j, its image under y_i
    as a sparse vector over M_{j+1}.
    """

    def __init__(self, n, dims, act, field=QQ):
        self.n = n
        self.field = field
        self.dims = {j: v for j, v in dims.items() if v}
        self.act = act
        self._mono_cache = {}

    @property
    def lo(self):
        return min(self.dims) if self.dims else 0

    @property
    def hi(self):
        return max(self.dims) if self.dims else -1

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def dim(self, j):
        return self.dims.get(j, 0)

    def hilbert_series(self):
        return dict(sorted(self.dims.items()))

    def apply_var(self, i, j, vec):
        if not vec:
            return {}
        cols = self.act.get((i, j))
        if cols is None:
            return {}
        p = self.field.p
        out = {}
        for k, c in vec.items():
            for r, v in cols[k].items():
                nv = out.get(r, 0) + c * v
                if p:
                    nv %= p
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out

    def mono_columns(self, mono, j):
        """Images of the basis of M_j under y^mono."""
        key = (mono, j)
        cols = self._mono_cache.get(key)
        if cols is None:
            if not any(mono):
                cols = [{k: self.field.one} for k in range(self.dim(j))]
            else:
                i = next(t for t, a in enumerate(mono) if a)
                rest = list(mono)
                rest[i] -= 1
                rest = tuple(rest)
                base = self.mono_columns(rest, j)
                cols = [self.apply_var(i, j + sum(rest), v) for v in base]
            self._mono_cache[key] = cols
        return cols

    def apply_mono(self, mono, j, vec):
        """y^mono applied to a vector of M_j."""
        if not vec or not self.dim(j + sum(mono)):
            return {}
        cols = self.mono_columns(mono, j)
        p = self.field.p
        out = {}
        for k, c in vec.items():
            for r, v in cols[k].items():
                nv = out.get(r, 0) + c * v
                if p:
                    nv %= p
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out

    def apply_poly(self, poly_terms, j, vec):
        """sum c * y^mono applied to vec in M_j, for homogeneous poly of degree e (result in M_{j+e})."""
        p = self.field.p
        out = {}
        for mono, c in poly_terms:
            img = self.apply_mono(mono, j, vec)
            for r, v in img.items():
                nv = out.get(r, 0) + c * v
                if p:
                    nv %= p
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out

    def socle_dims(self):
        """dim (0 :_M m) in each degree."""
        out = {}
        for j, dj in self.dims.items():
            cols_by_var = [self.act.get((i, j), [{}] * dj) for i in range(self.n)]
            rows = []
            for cols in cols_by_var:
                rows.extend(r for r in transpose_columns(cols, self.dim(j + 1)) if r)
            out[j] = dj - len(sparse_rref(rows, self.field.p))
        return {j: v for j, v in out.items() if v}

    def nilpotency_length(self):
        """Least D with m^D M = 0."""
        cur = {j: [{k: self.field.one} for k in range(dj)] for j, dj in self.dims.items()}
        D = 0
        while any(cur.values()):
            nxt = {}
            for j, vecs in cur.items():
                for i in range(self.n):
                    for v in vecs:
                        w = self.apply_var(i, j, v)
                        if w:
                            nxt.setdefault(j + 1, Echelon(self.field)).add(w)
            cur = {j: e.basis() for j, e in nxt.items()}
            D += 1
        return D

    def image_of_maximal_ideal(self, j):
        """Echelon of sum_i y_i M_{j-1} inside M_j."""
        ech = Echelon(self.field)
        for i in range(self.n):
            for v in self.act.get((i, j - 1), []):
                if v:
                    ech.add(v)
        return ech

    def minimal_generators(self):
        """Canonical minimal homogeneous generators: {degree: list of vectors in M_j}."""
        out = {}
        for j in sorted(self.dims):
            ech = self.image_of_maximal_ideal(j)
            comp = ech.complement_in([{k: self.field.one} for k in range(self.dims[j])])
            if comp:
                out[j] = comp
        return out

    def dual(self):
        """M^vee with (M^vee)_j = (M_{-j})^* and transposed action."""
        dims = {-j: v for j, v in self.dims.items()}
        act = {}
        for (i, j), cols in self.act.items():
            # y_i: M_j -> M_{j+1} dualizes to (M_{j+1})^* -> (M_j)^*, i.e. degree -(j+1) -> -j
            src = self.dim(j + 1)
            new = [dict() for _ in range(src)]
            for k, col in enumerate(cols):
                for r, v in col.items():
                    new[r][k] = v
            act[(i, -(j + 1))] = new
        return GradedModule(self.n, dims, act, self.field)

    def shift(self, s):
        """M(s): degree j piece is M_{j+s}."""
        dims = {j - s: v for j, v in self.dims.items()}
        act = {(i, j - s): cols for (i, j), cols in self.act.items()}
        return GradedModule(self.n, dims, act, self.field)

    def minimal_presentation(self):
        """ModulePresentation F/K isomorphic to this module, F on minimal generators."""
        gens = self.minimal_generators()
        degrees = []
        images = []
        for j in sorted(gens):
            for v in gens[j]:
                degrees.append(j)
                images.append(v)
        kgens = graded_kernel_of_evaluation(self, degrees, images)
        pres = ModulePresentation(self.n, tuple(degrees), tuple(kgens), self.field)
        return pres, images


def graded_kernel_of_evaluation(module, degrees, images):
    """Minimal generators of K = ker(F -> M, e_g -> images[g]) for homogeneous images."""
    if not degrees:
        return []
    F = FreeModule(module.n, degrees)

    def columns(j):
        return [module.apply_mono(mono, degrees[g], images[g]) for g, mono in F.basis(j)], module.dim(j)

    top = max(module.hi, max(degrees))
    return kernel_generators_graded(F, min(degrees), top + 1, columns, module.field)


def kernel_generators_graded(F, lo, hi, columns, field):
    """Minimal generators of a graded submodule K of F given degreewise as kernels.

    ``columns(j)`` returns (images of the F_j basis, target dimension); K_j is
    the kernel.  Degrees lo..hi are scanned; new generators in degree j are the
    canonical complement of y*K_{j-1} in K_j.
    """
    n = F.n
    gens = []
    prev = None
    for j in range(lo, hi + 1):
        basis = F.basis(j)
        cols, tdim = columns(j)
        if tdim:
            kern = sparse_kernel(transpose_columns(cols, tdim), len(basis), field.p, field.one)
        else:
            kern = [{c: field.one} for c in range(len(basis))]
        ech = Echelon(field)
        if prev:
            for i in range(n):
                smap = F.shift_map(i, j - 1)
                for v in prev:
                    ech.add({smap[c]: x for c, x in v.items()})
        for v in ech.complement_in(kern):
            gens.append(F.from_vector(v, j))
        prev = kern
    return gens


def kernel_generators_filtered(n, degrees, D, columns, tdim, field):
    """Generators of K = ker(L) + m^{D+1}F where L is defined on F_{<=D} (order = monomial degree).

    ``columns`` maps each coordinate (gen, mono) with |mono| <= D to its image.
    Generators are extracted order by order with the lowest-order part monic.
    """
    coords = _order_basis(n, degrees, D + 1)
    index = {c: i for i, c in enumerate(coords)}
    cols = [columns(c) for c in coords]
    gens = []
    prev = []
    count = 0
    for k in range(D + 1):
        count += len(degrees) * len(_monomials(n, k))
        sub = cols[:count]
        kern = sparse_kernel(transpose_columns(sub, tdim), count, field.p, field.one) if tdim else \
            [{c: field.one} for c in range(count)]
        ech = Echelon(field)
        for v in prev:
            ech.add(v)
            for i in range(n):
                e = unit(n, i)
                w = {}
                for c, x in v.items():
                    g, m = coords[c]
                    nk = index.get((g, mono_mul(m, e)))
                    if nk is not None:
                        w[nk] = x
                ech.add(w)
        for v in ech.complement_in(kern):
            gens.append({coords[c]: x for c, x in v.items()})
        prev = kern
    # every coordinate of order D+1 lies in K; only those outside y*(order-D part of K) are new
    top_coords = [(g, m) for g in range(len(degrees)) for m in _monomials(n, D + 1)]
    top_index = {c: i for i, c in enumerate(top_coords)}
    top = Echelon(field)
    for v in prev:
        for i in range(n):
            e = unit(n, i)
            w = {}
            for c, x in v.items():
                g, m = coords[c]
                if sum(m) == D:
                    w[top_index[(g, mono_mul(m, e))]] = x
            if w:
                top.add(w)
    for t, c in enumerate(top_coords):
        if top.add({t: field.one}):
            gens.append({c: field.one})
    return gens


class GradedQuotient(GradedModule):
    """The graded module F/K of a homogeneous presentation, with projection and lift."""

    def __init__(self, pres):
        self.pres = pres
        field = pres.field
        self.F = pres.free
        n = pres.n
        F = self.F
        by_degree = {}
        for k, degs in zip(pres.elements(), pres.element_degrees()):
            by_degree.setdefault(degs.pop(), []).append(F.to_vector(k, self.F.element_degree(k)))
        gen_lo = min(pres.degrees) if pres.degrees else 0
        gen_hi = max(pres.degrees) if pres.degrees else -1
        self.kech = {}
        self.mingens = {}
        dims = {}
        j = gen_lo
        prev = None
        while True:
            ech = Echelon(field)
            if prev is not None:
                for i in range(n):
                    smap = F.shift_map(i, j - 1)
                    for v in prev.basis():
                        ech.add({smap[c]: x for c, x in v.items()})
            new = ech.complement_in(by_degree.get(j, []))
            for v in new:
                ech.add(v)
            if new:
                self.mingens[j] = new
            self.kech[j] = ech
            dims[j] = F.dim(j) - ech.dim
            prev = ech
            if j >= gen_hi and dims[j] == 0:
                break
            if j > gen_hi + COFINITE_LIMIT:
                raise PreconditionError("K does not have finite colength")
            j += 1
        self.top_degree = j
        self.std = {}
        self.pos = {}
        for jj, ech in self.kech.items():
            piv = set(ech.pivots())
            s = [c for c in range(F.dim(jj)) if c not in piv]
            self.std[jj] = s
            self.pos[jj] = {c: t for t, c in enumerate(s)}
        act = {}
        for jj in self.std:
            if not self.std[jj] or not self.std.get(jj + 1):
                continue
            for i in range(n):
                smap = F.shift_map(i, jj)
                act[(i, jj)] = [self.project(jj + 1, {smap[c]: field.one}) for c in self.std[jj]]
        super().__init__(n, dims, act, field)

    def project(self, j, vec):
        """pi: F_j -> M_j in coordinates."""
        pos = self.pos.get(j)
        if not pos or not vec:
            return {}
        red = self.kech[j].reduce(vec)
        return {pos[c]: v for c, v in red.items()}

    def project_element(self, elem):
        """pi of a homogeneous element dict; returns (degree, vector)."""
        if not elem:
            return None, {}
        j = self.F.element_degree(elem)
        return j, self.project(j, self.F.to_vector(elem, j))

    def lift(self, j, mvec):
        """Standard-monomial lift M_j -> F_j."""
        s = self.std.get(j, [])
        return {s[k]: v for k, v in mvec.items()}

    def lift_element(self, j, mvec):
        return self.F.from_vector(self.lift(j, mvec), j)

    def min_kgens(self):
        """Minimal generators of K as element dicts, ordered by degree then discovery."""
        out = []
        for j in sorted(self.mingens):
            for v in self.mingens[j]:
                out.append(self.F.from_vector(v, j))
        return out

    def contains(self, elem):
        """Is the homogeneous element in K?"""
        if not elem:
            return True
        j = self.F.element_degree(elem)
        if j > self.top_degree or j not in self.kech:
            return j > self.top_degree
        return self.kech[j].contains(self.F.to_vector(elem, j))


# ---------------------------------------------------------------- filtered quotients

def _order_basis(n, degrees, D):
    """Coordinates (gen, mono) with |mono| < D, ordered by (|mono|, gen, mono)."""
    coords = []
    for k in range(D):
        for g in range(len(degrees)):
            coords.extend((g, m) for m in _monomials(n, k))
    return coords


class FilteredQuotient:
    """F/K for possibly inhomogeneous K supported at the origin, via F/(K + m^D F)."""

    def __init__(self, pres):
        self.pres = pres
        field = pres.field
        n, r = pres.n, pres.r
        elems = pres.elements()
        span = max((sum(m) for k in elems for (g, m) in k), default=0)
        prev_dim = None
        D = 0
        while True:
            coords = _order_basis(n, pres.degrees, D)
            index = {c: i for i, c in enumerate(coords)}
            ech = Echelon(field)
            for k in elems:
                for a in range(D):
                    for mu in _monomials(n, a):
                        v = {}
                        for (g, m), c in k.items():
                            key = (g, mono_mul(m, mu))
                            i = index.get(key)
                            if i is not None:
                                v[i] = c
                        if v:
                            ech.add(v)
            dim = len(coords) - ech.dim
            if prev_dim is not None and dim == prev_dim:
                D -= 1
                coords = _order_basis(n, pres.degrees, D)
                index = {c: i for i, c in enumerate(coords)}
                self._build(coords, index, stored)
                break
            stored = (ech, coords, index)
            prev_dim = dim
            D += 1
            if D > span + COFINITE_LIMIT:
                raise PreconditionError("K does not have finite colength at the origin")
        self.D = D
        self.dim = prev_dim

    def _build(self, coords, index, stored):
        ech, _, _ = stored
        self.coords = coords
        self.index = index
        self.kech = ech
        piv = set(ech.pivots())
        self.std = [i for i in range(len(coords)) if i not in piv]
        self.pos = {c: t for t, c in enumerate(self.std)}

    def project(self, vec):
        red = self.kech.reduce(vec)
        return {self.pos[c]: v for c, v in red.items()}

    def project_element(self, elem):
        v = {}
        for key, c in elem.items():
            i = self.index.get(key)
            if i is not None:
                v[i] = c
        return self.project(v)

    def tuple_and_vectors(self):
        """Matrices of y_1..y_n on the standard basis of F/K, and the images of the e_g."""
        from .linalg import ExactMatrix
        from .tuples import CommTuple
        field = self.pres.field
        n = self.pres.n
        d = len(self.std)
        mats = []
        for i in range(n):
            e = unit(n, i)
            rows = [[field.zero] * d for _ in range(d)]
            for col, c in enumerate(self.std):
                g, m = self.coords[c]
                img = self.project_element({(g, mono_mul(m, e)): field.one})
                for r, v in img.items():
                    rows[r][col] = v
            mats.append(ExactMatrix(field, d, d, dense=tuple(tuple(x) for x in rows)))
        vecs = []
        for g in range(self.pres.r):
            zero = tuple([0] * n)
            img = self.project_element({(g, zero): field.one})
            vecs.append(tuple(img.get(k, field.zero) for k in range(d)))
        return CommTuple(tuple(mats)), vecs


def element_to_terms(elem, degrees):
    """Canonically ordered terms [(coeff, mono, gen)]."""
    return [(v, m, g) for (g, m), v in sort_terms(elem, degrees)]
