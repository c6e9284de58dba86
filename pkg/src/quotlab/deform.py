"""Graded Hom(K, M) and Ext^1(K, M) for a Quot point M = F/K.

Both come from applying Hom(-, M) to F_1 <- F_2 <- F_3 (the resolution of K).
Hom(F_i, M)_e = sum_g M_{deg g + e}; its coordinates are (generator, basis
index of M_{deg g + e}) in generator order.  The resolution is extended only
as far as a requested degree needs: degree e uses generators of degree at
most (top of M) - e.
"""

from dataclasses import dataclass, field as dc_field

from .errors import GradingError
from .linalg import Echelon, sparse_kernel, sparse_rank, transpose_columns
from .resolution import Resolution

SMOOTH = "smooth-on-elementary"
INCONCLUSIVE = "inconclusive"


class HomComplex:
    """Hom(F_bullet, M) for the resolution of K, degree by degree."""

    def __init__(self, pres):
        if not pres.is_graded:
            raise GradingError("graded Hom/Ext need homogeneous K")
        self.pres = pres
        self.M = pres.graded
        self.field = pres.field
        self.n = pres.n
        self.res = Resolution(pres)
        self._hom = {}
        self._ext = {}
        self._delta = {}

    # -- coordinates

    def _gens(self, i, e):
        """Generators of F_i contributing to Hom(F_i, M)_e, ensuring F_i is complete there."""
        cap = self.M.hi - e
        if i >= 2:
            cap = min(cap, self.res.window(i) - 1)
            self.res.ensure(i, cap)
        degs = self.res.degrees[i] if i < len(self.res.degrees) else []
        return [(g, dg) for g, dg in enumerate(degs) if self.M.dim(dg + e)]

    def coords(self, i, e):
        """[(generator, M-basis index)] spanning Hom(F_i, M)_e."""
        return [(g, k) for g, dg in self._gens(i, e) for k in range(self.M.dim(dg + e))]

    def offsets(self, i, e):
        out = {}
        off = 0
        for g, dg in self._gens(i, e):
            out[g] = off
            off += self.M.dim(dg + e)
        return out, off

    def values(self, i, e, vec):
        """Split a Hom(F_i, M)_e vector into {generator: vector in M_{deg g + e}}."""
        out = {}
        offs, _ = self.offsets(i, e)
        gens = dict(self._gens(i, e))
        sizes = {g: self.M.dim(gens[g] + e) for g in gens}
        for c, v in vec.items():
            for g, o in offs.items():
                if o <= c < o + sizes[g]:
                    out.setdefault(g, {})[c - o] = v
                    break
        return out

    def pack(self, i, e, values):
        offs, _ = self.offsets(i, e)
        out = {}
        for g, vec in values.items():
            if g not in offs:
                if vec:
                    raise ValueError(f"generator {g} of F_{i} has no room in degree {e}")
                continue
            for k, v in vec.items():
                out[offs[g] + k] = v
        return out

    # -- differentials

    def compose(self, i, e, values):
        """psi -> psi o d_i: values on F_i generators to values on F_{i+1} generators."""
        M = self.M
        p = self.field.p
        out = {}
        src = dict(self._gens(i, e))
        for h, dh in self._gens(i + 1, e):
            img = {}
            for (g, m), c in self.res.maps[i][h].items():
                vec = values.get(g)
                if not vec:
                    continue
                part = M.apply_mono(m, src[g] + e, vec)
                for r, v in part.items():
                    nv = img.get(r, 0) + c * v
                    if p:
                        nv %= p
                    if nv:
                        img[r] = nv
                    else:
                        img.pop(r, None)
            if img:
                out[h] = img
        return out

    def delta(self, i, e):
        """Columns of Hom(F_i, M)_e -> Hom(F_{i+1}, M)_e."""
        key = (i, e)
        if key not in self._delta:
            cols = []
            one = self.field.one
            for g, k in self.coords(i, e):
                cols.append(self.pack(i + 1, e, self.compose(i, e, {g: {k: one}})))
            self._delta[key] = cols
        return self._delta[key]

    # -- Hom and Ext

    def hom(self, e):
        """Basis (sparse vectors over Hom(F_1, M)_e coordinates) of Hom(K, M)_e."""
        if e not in self._hom:
            field = self.field
            cols = self.delta(1, e)
            _, tdim = self.offsets(2, e)
            nsrc = len(cols)
            if tdim:
                basis = sparse_kernel(transpose_columns(cols, tdim), nsrc, field.p, field.one)
            else:
                basis = [{c: field.one} for c in range(nsrc)]
            self._hom[e] = basis
        return self._hom[e]

    def hom_dim(self, e):
        field = self.field
        cols = self.delta(1, e)
        return len(cols) - sparse_rank([c for c in cols if c], field.p) if cols else 0

    def ext(self, e):
        """(representatives, coboundary echelon) for Ext^1(K, M)_e."""
        if e not in self._ext:
            field = self.field
            cols2 = self.delta(2, e)
            _, tdim = self.offsets(3, e)
            nsrc = len(cols2)
            if tdim:
                z = sparse_kernel(transpose_columns(cols2, tdim), nsrc, field.p, field.one)
            else:
                z = [{c: field.one} for c in range(nsrc)]
            B = Echelon(field, [c for c in self.delta(1, e) if c])
            reps = B.complement_in(z)
            self._ext[e] = (reps, B)
        return self._ext[e]

    def ext_dim(self, e):
        return len(self.ext(e)[0])

    def ext_coordinates(self, e, cocycle):
        """Coordinates of the class of a cocycle in the canonical representative basis."""
        reps, B = self.ext(e)
        r = B.reduce(cocycle)
        coords = []
        for rep in reps:
            piv = min(rep)
            coords.append(r.get(piv, self.field.zero))
        # sanity: r must equal sum coords * reps
        p = self.field.p
        check = dict(r)
        for w, rep in zip(coords, reps):
            if w:
                for k, v in rep.items():
                    nv = check.get(k, 0) - w * v
                    if p:
                        nv %= p
                    if nv:
                        check[k] = nv
                    else:
                        check.pop(k, None)
        if check:
            raise ValueError("vector is not a cocycle in the stated degree")
        return coords

    def is_cocycle(self, e, vec):
        """delta_2 applied to a Hom(F_2, M)_e vector vanishes."""
        values = self.values(2, e, vec)
        return not self.compose(2, e, values)

    # -- windows

    def hom_window(self):
        d1 = self.res.degrees[1]
        if not d1 or not self.M.dims:
            return range(0)
        return range(self.M.lo - max(d1), self.M.hi - min(d1) + 1)

    def ext_window(self):
        self.res.ensure(2, self.res.window(2) - 1)
        d2 = self.res.degrees[2]
        if not d2 or not self.M.dims:
            return range(0)
        return range(self.M.lo - max(d2), self.M.hi - min(d2) + 1)


@dataclass(frozen=True)
class GradedHomSpace:
    dims: dict
    bases: dict = dc_field(default_factory=dict, hash=False, compare=False)

    @property
    def total(self):
        return sum(self.dims.values())

    def nonzero(self):
        return {e: v for e, v in sorted(self.dims.items()) if v}


@dataclass(frozen=True)
class GradedExtSpace:
    dims: dict
    representatives: dict = dc_field(default_factory=dict, hash=False, compare=False)

    @property
    def total(self):
        return sum(self.dims.values())

    def nonzero(self):
        return {e: v for e, v in sorted(self.dims.items()) if v}


def _complex(m):
    return m if isinstance(m, HomComplex) else HomComplex(m)


def hom_graded(m, degrees=None, with_basis=False):
    """Hom(K, M)_e for every e in the support window (or the given degrees)."""
    hc = _complex(m)
    es = list(hc.hom_window()) if degrees is None else list(degrees)
    dims = {}
    bases = {}
    for e in es:
        if with_basis:
            bases[e] = hc.hom(e)
            dims[e] = len(bases[e])
        else:
            dims[e] = hc.hom_dim(e)
    return GradedHomSpace(dims, bases)


def ext1_graded(m, degrees=None):
    hc = _complex(m)
    es = list(hc.ext_window()) if degrees is None else list(degrees)
    dims = {}
    reps = {}
    for e in es:
        r, _ = hc.ext(e)
        dims[e] = len(r)
        reps[e] = r
    return GradedExtSpace(dims, reps)


def hom_total(m):
    return hom_graded(m).total


def quot_tangent_consistency(m, t):
    """dim Hom(K, M) = r d - d^2 + dim T_t C_n(M_d)."""
    from .tuples import tangent_dimension
    d = t.d
    return hom_total(m) == m.r * d - d * d + tangent_dimension(t)


def negative_tangent_dim(m):
    hc = _complex(m)
    return sum(hc.hom_dim(e) for e in hc.hom_window() if e < 0)


def has_trivial_negative_tangents(m):
    """sum_{e<0} dim Hom(K, M)_e = n."""
    hc = _complex(m)
    return negative_tangent_dim(hc) == hc.n


def nonnegative_ext_dims(m):
    hc = _complex(m)
    top = hc.M.hi - min(hc.res.degrees[1], default=0)
    out = {}
    for e in range(0, max(top, -1) + 1):
        gens2 = hc._gens(2, e)
        out[e] = hc.ext_dim(e) if gens2 else 0
    return out


def elementary_smoothness(m):
    """smooth-on-elementary iff TNT holds and Ext^1(K, M)_{>=0} = 0."""
    hc = _complex(m)
    if not has_trivial_negative_tangents(hc):
        return INCONCLUSIVE
    if any(nonnegative_ext_dims(hc).values()):
        return INCONCLUSIVE
    return SMOOTH


@dataclass(frozen=True)
class BBData:
    sign: str
    tangent: dict
    obstruction: dict

    @property
    def tangent_total(self):
        return sum(self.tangent.values())


def bb_graded_data(m, sign):
    """Tangent/obstruction dimensions restricted to degrees >= 0 (sign '+') or <= 0 (sign '-')."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    hc = _complex(m)
    keep = (lambda e: e >= 0) if sign == "+" else (lambda e: e <= 0)
    tangent = {e: hc.hom_dim(e) for e in hc.hom_window() if keep(e)}
    obstruction = {e: hc.ext_dim(e) for e in hc.ext_window() if keep(e)}
    return BBData(sign, {e: v for e, v in tangent.items() if v}, {e: v for e, v in obstruction.items() if v})


# ---------------------------------------------------------------- local (filtered) route
#
# A point [F/K] supported at the origin need not be fixed by the torus.  Using
# deg y_i = 1, deg e_a = 0, the tangent space to the Bialynicki-Birula cell is
# the space of filtered homomorphisms {phi : phi(K cap m^i F) in m^i M}; for
# homogeneous K this is Hom(K, M)_{>=0}.  On the tuple side a tangent vector
# (z, j) of the stable pair (x, v) gives
#   phi(sum f_a e_a) = sum_a D f_a(x)[z] v_a + f_a(x) j_a,
# which can be evaluated on any element of K.


def _word(mono):
    return [i for i, k in enumerate(mono) for _ in range(k)]


def _apply_word(mats, word, vec, field):
    p = field.p
    for i in reversed(word):
        vec = _mat_sparse(mats[i], vec, p)
    return vec


def _mat_sparse(rows, vec, p):
    out = {}
    for r, row in enumerate(rows):
        s = 0
        for k, x in vec.items():
            y = row[k]
            if y:
                s += y * x
        if p:
            s %= p
        if s:
            out[r] = s
    return out


def _derivative_word(xs, zs, word, vec, field):
    """D(x_word)[z] vec, applying letters right to left."""
    p = field.p
    val, der = vec, {}
    for i in reversed(word):
        der = _sadd(_mat_sparse(xs[i], der, p), _mat_sparse(zs[i], val, p), p)
        val = _mat_sparse(xs[i], val, p)
    return der


def _sadd(a, b, p):
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, 0) + v
        if p:
            nv %= p
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


@dataclass(frozen=True)
class LocalTangentReport:
    hom_total: int
    nonnegative: int
    negative: int
    n: int

    @property
    def trivial_negative_tangents(self):
        return self.negative == self.n


def local_tangent_report(pair):
    """Hom(K, M) split into filtered (>= 0) and negative parts for a stable pair."""
    from .admodules import local_hilbert_function, module_from_tuple
    from .linalg import sparse_rank
    from .poly import _monomials
    from .tuples import image_sum_basis, tangent_space

    t = pair.tuple
    field, n, d = t.field, t.n, t.d
    p = field.p
    vs = [{k: x for k, x in enumerate(v) if x} for v in pair.vectors]
    r = len(vs)
    N = len(local_hilbert_function(t).values)
    xs = [m.rows() for m in t.matrices]
    layers = [Echelon(field, [{k: field.one} for k in range(d)])]
    for _ in range(N):
        layers.append(image_sum_basis(list(t.matrices), field, layers[-1].basis()))
    # truncated free module: coordinates (a, mono) with |mono| <= N, by degree
    coords = [(a, m) for k in range(N + 1) for a in range(r) for m in _monomials(n, k)]
    index = {c: i for i, c in enumerate(coords)}
    evals = [_apply_word(xs, _word(m), vs[a], field) for a, m in coords]
    gens = []  # (filtration level, element as {coord index: coeff})
    prev = []
    for i in range(1, N + 1):
        allowed = [c for c, (a, m) in enumerate(coords) if sum(m) >= i]
        cols = [evals[c] for c in allowed]
        kern = sparse_kernel(transpose_columns(cols, d), len(allowed), p, field.one) if cols else []
        kern = [{allowed[c]: x for c, x in v.items()} for v in kern]
        shifted = []
        for v in prev:
            for l in range(n):
                w = {}
                for c, x in v.items():
                    a, m = coords[c]
                    mm = list(m)
                    mm[l] += 1
                    key = index.get((a, tuple(mm)))
                    if key is not None:
                        w[key] = x
                if w:
                    shifted.append(w)
        new = Echelon(field, shifted).complement_in(kern)
        gens.extend((i, v) for v in new)
        prev = kern

    def phi_residues(zs, js):
        out = {}
        for g, (i, elem) in enumerate(gens):
            val = {}
            for c, x in elem.items():
                a, m = coords[c]
                w = _word(m)
                part = _derivative_word(xs, zs, w, vs[a], field) if zs is not None else {}
                if js is not None and js[a]:
                    part = _sadd(part, _apply_word(xs, w, js[a], field), p)
                for k, y in part.items():
                    nv = val.get(k, 0) + x * y
                    if p:
                        nv %= p
                    if nv:
                        val[k] = nv
                    else:
                        val.pop(k, None)
            res = layers[i].reduce(val)
            for k, y in res.items():
                out[g * d + k] = y
        return out

    rows = []
    ts = tangent_space(t, with_basis=True)
    for zs in ts.basis:
        rows.append(phi_residues([z.rows() for z in zs], None))
    for a in range(r):
        for c in range(d):
            js = [None] * r
            js[a] = {c: field.one}
            rows.append(phi_residues(None, js))
    neg = sparse_rank([w for w in rows if w], p)
    total = ts.dimension + r * d - d * d
    return LocalTangentReport(total, total - neg, neg, n)


def family_dimension_bound(t, directions):
    """Rank of the orbit-family differential: span of the given tangent tuples and [A, x].

    A tuple lying on the image of a parametrized family g . x(params) g^-1 gives
    a lower bound on the local dimension of C_n(M_d); equality with the
    tangent dimension certifies smoothness.
    """
    from .linalg import sparse_rank
    from .tuples import is_tangent_vector
    field, n, d = t.field, t.n, t.d
    p = field.p
    vecs = []
    for zs in directions:
        if not is_tangent_vector(t, zs):
            raise ValueError("family direction is not tangent to the commuting variety")
        v = {}
        for i, z in enumerate(zs):
            for r_, row in enumerate(z.rows()):
                for c, x in enumerate(row):
                    if x:
                        v[i * d * d + r_ * d + c] = x
        vecs.append(v)
    for a in range(d):
        for b in range(d):
            # [E_ab, x_i] = E_ab x_i - x_i E_ab
            v = {}
            for i, x in enumerate(t.rows):
                for c in range(d):
                    if x[b][c]:
                        k = i * d * d + a * d + c
                        v[k] = field.norm(v.get(k, 0) + x[b][c])
                for r_ in range(d):
                    if x[r_][a]:
                        k = i * d * d + r_ * d + b
                        v[k] = field.norm(v.get(k, 0) - x[r_][a])
            v = {k: y for k, y in v.items() if y}
            if v:
                vecs.append(v)
    return sparse_rank(vecs, p)


def local_elementary_smoothness(pair, family_directions):
    """smooth-on-elementary via filtered TNT and a family whose dimension equals the tangent dimension."""
    from .tuples import tangent_dimension
    rep = local_tangent_report(pair)
    if not rep.trivial_negative_tangents:
        return INCONCLUSIVE
    if family_dimension_bound(pair.tuple, family_directions) != tangent_dimension(pair.tuple):
        return INCONCLUSIVE
    return SMOOTH
