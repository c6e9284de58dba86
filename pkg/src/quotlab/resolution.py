"""Graded free resolutions by degree-by-degree linear algebra, and Betti tables.

Maps between free modules are stored as the images of the source generators,
each a dict {(target gen, monomial): coeff}.  Syzygy modules are computed one
internal degree at a time as kernels, and new generators are the canonical
complement of m * (kernel in the previous degree).
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

from .errors import GradingError, ResolutionWindowError
from .field import QQ
from .linalg import Echelon, sparse_kernel, sparse_rank, transpose_columns
from .modules import GradedModule, ModulePresentation, kernel_generators_graded
from .poly import FreeModule, apply_map, elem_add, mono_mul, _monomials


def _image_vector(H, images, g, mono, j, p):
    """Coordinates in H_j of mono * images[g]."""
    idx = H.index(j)
    out = {}
    for (h, m), c in images[g].items():
        k = idx[(h, mono_mul(m, mono))]
        nv = out.get(k, 0) + c
        if p:
            nv %= p
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def graded_kernel_generators(source_degrees, target_degrees, images, n, max_degree, field=QQ):
    """Minimal homogeneous generators of ker(phi) in degrees <= max_degree.

    phi sends source generator g to ``images[g]`` in the free module with
    ``target_degrees``; each image must be homogeneous of degree source_degrees[g].
    """
    G = FreeModule(n, source_degrees)
    H = FreeModule(n, target_degrees)
    images = [{k: field(v) for k, v in im.items() if field(v)} for im in images]
    for g, im in enumerate(images):
        if im and H.element_degree(im) != source_degrees[g]:
            raise GradingError(f"image of generator {g} is not of degree {source_degrees[g]}")
    p = field.p

    def columns(j):
        return [_image_vector(H, images, g, m, j, p) for g, m in G.basis(j)], H.dim(j)

    lo = min(source_degrees) if source_degrees else 0
    return kernel_generators_graded(G, lo, max_degree, columns, field)


class _SyzygyStep:
    """Incremental kernel computation for phi: G -> H (G grows only in degrees above the done range)."""

    def __init__(self, n, field):
        self.n = n
        self.field = field
        self.done = None
        self.prev = None
        self.new_gens = []  # (degree, element)

    def extend(self, source_degrees, target_degrees, images, through):
        G = FreeModule(self.n, source_degrees)
        H = FreeModule(self.n, target_degrees)
        p = self.field.p
        field = self.field
        start = (min(source_degrees) if source_degrees else through + 1) if self.done is None else self.done + 1
        for j in range(start, through + 1):
            basis = G.basis(j)
            cols = [_image_vector(H, images, g, m, j, p) for g, m in basis]
            hd = H.dim(j)
            kern = sparse_kernel(transpose_columns(cols, hd), len(basis), p, field.one) if hd else \
                [{c: field.one} for c in range(len(basis))]
            ech = Echelon(field)
            if self.prev:
                for i in range(self.n):
                    smap = G.shift_map(i, j - 1)
                    for v in self.prev:
                        ech.add({smap[c]: x for c, x in v.items()})
            for v in ech.complement_in(kern):
                self.new_gens.append((j, G.from_vector(v, j)))
            self.prev = kern
            self.done = j
        if self.done is None or self.done < through:
            self.done = through
            self.prev = self.prev or []


class Resolution:
    """Lazy graded free resolution F_0 <- F_1 <- F_2 <- ... of a homogeneous presentation.

    F_0 is the free module of the presentation and F_1 maps onto minimal
    generators of K.  ``degrees[i]`` and ``maps[i]`` (images of F_{i+1}
    generators in F_i) grow on demand through ``ensure(i, through)``.
    """

    def __init__(self, pres):
        if not pres.is_graded:
            raise GradingError("resolutions need homogeneous K")
        self.pres = pres
        self.n = pres.n
        self.field = pres.field
        G = pres.graded
        self.module = G
        kg = G.min_kgens()
        self.degrees = [list(pres.degrees), [G.F.element_degree(k) for k in kg]]
        self.maps = [kg]
        self.computed = {0: float("inf"), 1: float("inf")}
        self._steps = {}
        self.top = max([G.hi] + list(pres.degrees))

    def ensure(self, i, through):
        """Make F_i complete in all generator degrees <= through."""
        if self.computed.get(i, -float("inf")) >= through:
            return
        # F/K has finite length, so F_{i-1} has no generators beyond its window
        self.ensure(i - 1, min(through, self.window(i - 1)) if i > 2 else through)
        step = self._steps.get(i)
        if step is None:
            step = self._steps[i] = _SyzygyStep(self.n, self.field)
            self.degrees.append([])
            self.maps.append([])
        step.extend(self.degrees[i - 1], self.degrees[i - 2], self.maps[i - 2], int(through))
        for j, el in step.new_gens[len(self.degrees[i]):]:
            self.degrees[i].append(j)
            self.maps[i - 1].append(el)
        self.computed[i] = through

    def rank(self, i):
        return len(self.degrees[i]) if i < len(self.degrees) else 0

    def window(self, i):
        """Degree through which step i is computed for a complete minimal resolution."""
        return self.top + i + 1

    def complete(self, through_step=None):
        """Compute every step up to ``through_step`` (default n + 1) on the full window."""
        last = self.n + 1 if through_step is None else through_step
        for i in range(2, last + 1):
            self.ensure(i, self.window(i))
            if any(j >= self.window(i) for j in self.degrees[i]):
                raise ResolutionWindowError(f"step {i} has a generator at the window boundary {self.window(i)}")
        return self

    def betti(self):
        """{(i, j): beta_ij} over the computed steps."""
        out = {}
        for i, degs in enumerate(self.degrees):
            for j in degs:
                out[(i, j)] = out.get((i, j), 0) + 1
        return out

    # -- checks

    def compose_is_zero(self, i):
        """d_{i-1} o d_i = 0 for the map F_{i+1} -> F_i -> F_{i-1} (needs i >= 1)."""
        if i >= len(self.maps) or i < 1:
            return True
        p = self.field.p
        for el in self.maps[i]:
            if apply_map(self.maps[i - 1], el, p):
                return False
        return True

    def is_minimal(self, start=1):
        """No constant entries in d_i for i >= start."""
        for i in range(start, len(self.maps)):
            for el in self.maps[i]:
                if any(not any(m) for (_, m) in el):
                    return False
        return True

    def step_matrix(self, i):
        """d_i as rows[target gen][source gen] of polynomial dicts {mono: coeff}."""
        tgt = len(self.degrees[i])
        src = self.maps[i]
        rows = [[{} for _ in src] for _ in range(tgt)]
        for c, el in enumerate(src):
            for (g, m), v in el.items():
                rows[g][c][m] = v
        return rows


@dataclass(frozen=True)
class ResolutionData:
    """Degrees of the F_i, the maps d_i: F_{i+1} -> F_i, and the Betti table."""

    degrees: tuple
    maps: tuple
    betti: dict = dc_field(hash=False)

    @property
    def length(self):
        return max((i for i, d in enumerate(self.degrees) if d), default=0)


def minimal_resolution(pres, through_step=None):
    """Resolution object for the minimal presentation of F/K, completed through a step."""
    minimal, _ = pres.graded.minimal_presentation()
    return Resolution(minimal).complete(through_step)


def minimal_free_resolution(pres, through_step=None):
    """Minimal graded free resolution of F/K as ResolutionData."""
    res = minimal_resolution(pres, through_step)
    return ResolutionData(tuple(tuple(d) for d in res.degrees), tuple(tuple(m) for m in res.maps), res.betti())


def betti_table(module):
    """Betti numbers of a GradedModule or a homogeneous presentation."""
    if isinstance(module, ModulePresentation):
        module = module.graded
    pres, _ = module.minimal_presentation()
    return Resolution(pres).complete().betti()


def koszul_betti(module):
    """beta_ij = dim Tor_i(k, M)_j from the Koszul complex wedge^i k^n (x) M_{j-i}."""
    n = module.n
    field = module.field
    p = field.p
    subsets = {i: list(combinations(range(n), i)) for i in range(n + 2)}
    index = {i: {s: k for k, s in enumerate(subsets[i])} for i in subsets}

    def boundary_rank(i, j):
        # d: wedge^i (x) M_{j-i} -> wedge^{i-1} (x) M_{j-i+1}
        if i < 1 or i > n:
            return 0
        src_dim = module.dim(j - i)
        tgt_dim = module.dim(j - i + 1)
        if not src_dim or not tgt_dim:
            return 0
        cols = []
        for s in subsets[i]:
            for k in range(src_dim):
                col = {}
                for pos, var in enumerate(s):
                    sign = -1 if pos % 2 else 1
                    rest = s[:pos] + s[pos + 1:]
                    img = module.apply_var(var, j - i, {k: field.one})
                    base = index[i - 1][rest] * tgt_dim
                    for rr, v in img.items():
                        key = base + rr
                        nv = col.get(key, 0) + sign * v
                        if p:
                            nv %= p
                        if nv:
                            col[key] = nv
                        else:
                            col.pop(key, None)
                cols.append(col)
        return sparse_rank(cols, p)

    out = {}
    lo, hi = module.lo, module.hi
    for i in range(n + 1):
        for j in range(lo + i, hi + i + 1):
            chain = comb(n, i) * module.dim(j - i)
            if not chain:
                continue
            b = chain - boundary_rank(i, j) - boundary_rank(i + 1, j)
            if b:
                out[(i, j)] = b
    return out


def euler_check(betti, module, n, upto):
    """sum_i (-1)^i sum_j beta_ij dim S_{k-j} equals dim M_k for k <= upto."""
    lo = min((j for (_, j) in betti), default=0)
    for k in range(lo, upto + 1):
        s = 0
        for (i, j), b in betti.items():
            if k >= j:
                s += (-1) ** i * b * comb(n - 1 + k - j, n - 1)
        if s != module.dim(k):
            return False
    return True


# ---------------------------------------------------------------- duality

def _transpose_map(images, target_rank):
    """Images of e_g^* (g in the target) under the transpose of a free map."""
    out = [dict() for _ in range(target_rank)]
    for h, el in enumerate(images):
        for (g, m), v in el.items():
            out[g][(h, m)] = v
    return out


def transposed_complex(res, n):
    """G_k = F_{n-k}^*: (degrees, maps) with maps[k]: G_{k+1} -> G_k, i.e. d_{n-k-1}^T."""
    degs = [[-j for j in res.degrees[n - k]] if n - k < len(res.degrees) else [] for k in range(n + 1)]
    maps = []
    for k in range(n):
        i = n - k - 1
        maps.append(_transpose_map(res.maps[i], len(res.degrees[i])) if i < len(res.maps) else [])
    return degs, maps


def _homology_dims(degs, maps, n, field, k, j):
    """dim H_k in degree j of a complex of free modules (maps[k]: G_{k+1} -> G_k)."""
    p = field.p

    def rank_of(kk):
        if kk < 0 or kk >= len(maps) or not degs[kk + 1]:
            return 0
        G = FreeModule(n, degs[kk + 1])
        H = FreeModule(n, degs[kk])
        cols = [_image_vector(H, maps[kk], g, m, j, p) for g, m in G.basis(j)]
        return sparse_rank(cols, p)

    dim_k = FreeModule(n, degs[k]).dim(j) if degs[k] else 0
    return dim_k - rank_of(k - 1) - rank_of(k)


@dataclass(frozen=True)
class DualityReport:
    betti_M: dict
    betti_dual: dict
    betti_symmetric: bool
    transposed_exact: bool
    cokernel_matches: bool
    minimal: bool

    @property
    def ok(self):
        return self.betti_symmetric and self.transposed_exact and self.cokernel_matches and self.minimal


def duality_report(pres):
    """Compare the resolution of M with that of M^vee and with the transposed complex."""
    n = pres.n
    field = pres.field
    res = minimal_resolution(pres, n + 1)
    bM = res.betti()
    dual = pres.graded.dual()
    bD = betti_table(dual)
    sym = {(n - i, n - j): b for (i, j), b in bM.items()} == bD
    degs, maps = transposed_complex(res, n)
    all_degs = [d for ds in degs for d in ds]
    exact = True
    if all_degs:
        lo, hi = min(all_degs), max(all_degs) + n + pres.graded.hi + 1
        for k in range(1, n + 1):
            if not degs[k]:
                continue
            for j in range(lo, hi + 1):
                if _homology_dims(degs, maps, n, field, k, j):
                    exact = False
                    break
    minimal = all(not any(not any(m) for (_, m) in el) for mp in maps for el in mp)
    # cokernel of G_1 -> G_0 = F_n^* should have the Hilbert function of M^vee(n)
    if degs[0]:
        coker = ModulePresentation(n, tuple(degs[0]), tuple(el for el in maps[0] if el), field)
        target = {j - n: v for j, v in dual.dims.items()}
        got = coker.graded.dims
        coker_ok = got == {j: v for j, v in target.items() if v}
    else:
        coker_ok = not pres.graded.dims
    return DualityReport(bM, bD, sym, exact, coker_ok, minimal)


def dual_resolution_check(pres):
    return duality_report(pres).ok
