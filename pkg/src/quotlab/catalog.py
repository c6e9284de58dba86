"""Named witness points, component dimensions and the atom enumeration for d <= 7."""

from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .errors import NotFoundError, OutOfCatalogError
from .field import QQ
from .tuples import CommTuple, tuple_from_E

MAX_DEGREE = 7


# ---------------------------------------------------------------- atoms

@dataclass(frozen=True, order=True)
class ElementaryAtom:
    kind: str       # point | square-zero | w332 | w332T
    d: int
    minN: int
    gens: int
    m: int = 0      # rank of the image for square-zero atoms

    def __post_init__(self):
        if self.gens < 1:
            raise ValueError("an atom needs at least one generator")
        if self.kind == "square-zero" and self.gens != self.d - self.m:
            raise ValueError("square-zero atoms are generated by d - m elements")

    @property
    def label(self):
        if self.kind == "point":
            return "pt"
        if self.kind == "square-zero":
            return f"sq({self.d},{self.m})"
        return self.kind

    def dimension(self, n):
        """Dimension of the elementary component of C_n(M_d) for n >= minN."""
        if self.kind == "point":
            return n
        if self.kind == "square-zero":
            return square_zero_dimension(n, self.d, self.m)
        # matrices of the 7x7 shape: 9 parameters per matrix plus 26 from u and the orbit
        return 9 * n + 26


def _sq(d, m, min_n):
    return ElementaryAtom("square-zero", d, min_n, d - m, m)


# Elementary components for d <= 7.  Square-zero entries are (d, m, least n);
# the general module of a square-zero atom has d - m generators.  The 7x7
# cube-nonzero-free family and its transpose need 2 and 3 generators.
ATOMS = (
    ElementaryAtom("point", 1, 1, 1),
    _sq(4, 2, 4),
    _sq(5, 2, 5), _sq(5, 3, 5),
    _sq(6, 2, 6), _sq(6, 3, 6), _sq(6, 4, 6),
    _sq(7, 2, 7), _sq(7, 3, 5), _sq(7, 4, 5), _sq(7, 5, 7),
    ElementaryAtom("w332", 7, 5, 2),
    ElementaryAtom("w332T", 7, 5, 3),
)

# sq(7,3) and sq(7,4) at n = 4 are not listed as atoms: in that case the
# square-zero locus is taken to lie in a concatenated component (the
# computational evidence for this is strong but it is not proven).
UNSETTLED = ((4, 7, 3), (4, 7, 4))


@dataclass(frozen=True)
class ComponentDescriptor:
    atoms: tuple  # sorted, largest first

    @property
    def d(self):
        return sum(a.d for a in self.atoms)

    @property
    def gens(self):
        return max(a.gens for a in self.atoms)

    def realizable(self, n):
        return all(a.minN <= n for a in self.atoms)

    @property
    def label(self):
        parts = []
        for a in self.atoms:
            parts.append(a.label)
        return "+".join(parts)

    def __str__(self):
        return self.label


def atom(label):
    for a in ATOMS:
        if a.label == label:
            return a
    raise NotFoundError(f"unknown atom {label!r}")


def parse_descriptor(text):
    """'sq(4,2)+pt+pt+pt' -> ComponentDescriptor."""
    atoms = [atom(part.strip()) for part in text.split("+") if part.strip()]
    return ComponentDescriptor(tuple(sorted(atoms, key=_atom_key)))


def _atom_key(a):
    return (-a.d, a.kind, -a.m)


# ---------------------------------------------------------------- dimension formulas

def principal_dimension(n, d):
    return d * d + (n - 1) * d


def quot_principal_dimension(n, d, r):
    return (n + r - 1) * d


def square_zero_dimension(n, d, m):
    """Dimension of the square-zero locus with image of rank m."""
    return (n + 1) * m * (d - m) + n


def cube_zero_dimension(n, a, b, c):
    """Dimension of the cube-zero family with invariants (a, b, c)."""
    return n * (a * (b - c + 1) + c) + a * c * (c + 1) // 2 + a * b + b * c - c * c + a + b


def concatenation_dimension(d1, dim1, d2, dim2):
    return dim1 + dim2 + 2 * d1 * d2


def component_dimension(desc, n):
    """dim of the component of C_n(M_d) given by concatenating the atoms."""
    if isinstance(desc, str):
        desc = parse_descriptor(desc)
    if not desc.realizable(n):
        raise ValueError(f"{desc} does not exist for n = {n}")
    dim, deg = 0, 0
    for a in desc.atoms:
        dim = concatenation_dimension(deg, dim, a.d, a.dimension(n))
        deg += a.d
    return dim


def quot_component_dimension(desc, n, r):
    """r d - d^2 + dim of the matching component of C_n(M_d)."""
    if isinstance(desc, str):
        desc = parse_descriptor(desc)
    if desc.gens > r:
        raise ValueError(f"{desc} needs {desc.gens} generators")
    d = desc.d
    return r * d - d * d + component_dimension(desc, n)


# ---------------------------------------------------------------- enumeration

def _check_degree(d):
    if d < 1:
        raise ValueError("d must be positive")
    if d > MAX_DEGREE:
        raise OutOfCatalogError(f"components are classified only for d <= {MAX_DEGREE}")


@lru_cache(maxsize=None)
def _multisets(n, d):
    available = sorted((a for a in ATOMS if a.minN <= n), key=_atom_key)
    out = []

    def rec(start, remaining, chosen):
        if remaining == 0:
            out.append(ComponentDescriptor(tuple(chosen)))
            return
        for k in range(start, len(available)):
            a = available[k]
            if a.d <= remaining:
                rec(k, remaining - a.d, chosen + [a])

    rec(0, d, [])
    return tuple(out)


def enumerate_components(n, d):
    """(count, descriptors) of irreducible components of C_n(M_d)."""
    _check_degree(d)
    if n < 1:
        raise ValueError("n must be positive")
    comps = _multisets(n, d)
    return len(comps), list(comps)


def enumerate_quot_components(n, d, r):
    """Components of Quot_r^d(A^n): descriptors whose atoms each need at most r generators."""
    if r < 1:
        raise ValueError("r must be positive")
    _, comps = enumerate_components(n, d)
    return sum(1 for c in comps if c.gens <= r)


def quot_count_sequence(n, d):
    """Counts for r = 1, 2, ... up to stabilization."""
    total = enumerate_components(n, d)[0]
    seq = []
    r = 1
    while True:
        seq.append(enumerate_quot_components(n, d, r))
        if seq[-1] == total:
            return tuple(seq)
        r += 1


# Expected tables (rows n = 1..7, columns d = 1..7).  n >= 7 behaves like n = 7.
TABLE_COMMUTING = {
    1: (1, 1, 1, 1, 1, 1, 1),
    2: (1, 1, 1, 1, 1, 1, 1),
    3: (1, 1, 1, 1, 1, 1, 1),
    4: (1, 1, 1, 2, 2, 2, 2),
    5: (1, 1, 1, 2, 4, 4, 8),
    6: (1, 1, 1, 2, 4, 7, 11),
    7: (1, 1, 1, 2, 4, 7, 13),
}

TABLE_QUOT = {
    1: ((1,),) * 7,
    2: ((1,),) * 7,
    3: ((1,),) * 7,
    4: ((1,), (1,), (1,), (1, 2), (1, 2), (1, 2), (1, 2)),
    5: ((1,), (1,), (1,), (1, 2), (1, 3, 4), (1, 3, 4), (1, 4, 7, 8)),
    6: ((1,), (1,), (1,), (1, 2), (1, 3, 4), (1, 4, 6, 7), (1, 5, 9, 11)),
    7: ((1,), (1,), (1,), (1, 2), (1, 3, 4), (1, 4, 6, 7), (1, 6, 10, 12, 13)),
}


@dataclass(frozen=True)
class TableReplay:
    commuting: dict      # (n, d) -> (computed, expected)
    quot: dict           # (n, d) -> (computed sequence, expected sequence)

    @property
    def mismatches(self):
        bad = [("C", k) for k, (a, b) in self.commuting.items() if a != b]
        bad += [("Quot", k) for k, (a, b) in self.quot.items() if a != b]
        return bad

    @property
    def ok(self):
        return not self.mismatches


def replay_tables():
    comm, quot = {}, {}
    for n in range(1, 8):
        for d in range(1, MAX_DEGREE + 1):
            comm[(n, d)] = (enumerate_components(n, d)[0], TABLE_COMMUTING[n][d - 1])
            quot[(n, d)] = (quot_count_sequence(n, d), TABLE_QUOT[n][d - 1])
    return TableReplay(comm, quot)


# ---------------------------------------------------------------- witnesses

@dataclass(frozen=True, eq=False)
class WitnessEntry:
    name: str
    n: int
    d: int
    tangent: int | None
    hilbert: tuple
    quot_dim: int | None = None
    tuple: CommTuple | None = None
    generators: tuple = ()          # 0-based basis indices generating the module
    kgens: tuple = ()               # K generators for presentation-only witnesses
    rank: int = 0
    atom: str | None = None
    description: str = ""
    graded: bool = True
    extra: dict = dc_field(default_factory=dict)

    def pair(self):
        from .admodules import StablePair
        if self.tuple is None:
            raise NotFoundError(f"witness {self.name} has no tuple")
        return StablePair.from_basis_indices(self.tuple, list(self.generators))

    def module(self):
        """Presentation F/K (generators in degree 0)."""
        from .admodules import quot_point
        from .modules import ModulePresentation
        if self.kgens:
            return ModulePresentation(self.n, (0,) * self.rank, self.kgens, QQ)
        return quot_point(self.pair())

    def family_directions(self):
        fam = self.extra.get("family")
        if fam is None:
            return None
        return family_directions(fam, self.extra["base"])


def _sqz(name, n, d, m, spec, hf, quot_dim=None):
    t = tuple_from_E(d, spec)
    return WitnessEntry(name, n, d, square_zero_dimension(n, d, m), hf, quot_dim, t,
                        tuple(range(m, d)), rank=d - m, atom=f"sq({d},{m})",
                        description=f"square-zero {d}x{d} {n}-tuple with image of rank {m}")


def w332_family(params):
    """The 54-parameter family of 7x7 quintuples: (mu, lam1, lam2, stars, u)."""
    mu, lam1, lam2 = params[0:5], params[5:10], params[10:15]
    stars = params[15:45]
    u = [params[45 + 3 * j: 48 + 3 * j] for j in range(3)]  # u[j][k] = u_{j+1, k+1}
    mats = []
    for i in range(5):
        rows = [[0] * 7 for _ in range(7)]
        for k in range(7):
            rows[k][k] = mu[i]
        for k in range(3):
            rows[k][3] = lam1[i] * u[0][k] + lam2[i] * u[1][k]
            rows[k][4] = lam1[i] * u[1][k] + lam2[i] * u[2][k]
            rows[k][5] = stars[6 * i + 2 * k]
            rows[k][6] = stars[6 * i + 2 * k + 1]
        rows[3][6] = lam1[i]
        rows[4][6] = lam2[i]
        mats.append(rows)
    return mats


def _w332_base():
    p = [0] * 54
    p[5] = 1            # lambda_{1,1}
    p[11] = 1           # lambda_{2,2}
    for i, k in ((2, 0), (3, 1), (4, 2)):
        p[15 + 6 * i + 2 * k] = 1   # x3 = E16, x4 = E26, x5 = E36
    for j in range(3):
        p[45 + 4 * j] = 1           # u = identity
    return tuple(p)


def family_directions(family, base):
    """Derivatives of a family (entries of degree <= 2 in the parameters) at base.

    (f(b + e) - f(b - e)) / 2 is the exact derivative for such entries.
    """
    from .linalg import ExactMatrix
    from gmpy2 import mpq
    out = []
    for k in range(len(base)):
        plus = list(base)
        minus = list(base)
        plus[k] += 1
        minus[k] -= 1
        fp, fm = family(plus), family(minus)
        mats = []
        for a, b in zip(fp, fm):
            rows = tuple(tuple(QQ(mpq(x - y, 2)) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))
            mats.append(ExactMatrix(QQ, len(rows), len(rows), dense=rows))
        out.append(tuple(mats))
    return out


def _w332_entry():
    base = _w332_base()
    mats = w332_family(base)
    t = CommTuple.from_rows(mats)
    return WitnessEntry("w332", 5, 7, 71, (2, 2, 3), None, t, (5, 6), rank=2, atom="w332",
                        description="7x7 quintuple with nonzero square, generated by two elements",
                        graded=False, extra={"family": w332_family, "base": base})


def _y(i):
    m = [0, 0, 0, 0]
    m[i - 1] = 1
    return tuple(m)


def _nonreduced_kgens():
    # columns of the 4 x 12 matrix over k[y1..y4]; entries are linear forms
    y1, y2, y3, y4 = ({i: 1} for i in (1, 2, 3, 4))
    z = {}
    rows = [
        [y1, y2, y3, y4, z, z, z, z, z, z, z, z],
        [z, z, z, z, y1, y2, y3, y4, z, z, z, z],
        [z, z, z, z, z, z, z, z, y1, y2, y3, y4],
        [z, z, y4, y1, y2, z, z, {1: 2, 2: 3, 3: 1, 4: 2}, {2: 1, 3: 1}, {1: 2, 2: 3, 3: 5, 4: 5}, z, z],
    ]
    cols = []
    for c in range(12):
        elem = {}
        for g in range(4):
            for i, v in rows[g][c].items():
                elem[(g, _y(i))] = v
        cols.append(elem)
    return tuple(cols)


def _nonreduced_entry():
    return WitnessEntry("nonreduced-8", 4, 8, None, (4, 4), None, None, (), _nonreduced_kgens(), rank=4,
                        description="rank-4 module with Hilbert series 4+4T on a generically nonreduced component",
                        extra={"betti": {(1, 1): 12, (2, 2): 8}, "hom": {-1: 16, 0: 48},
                               "ext_degree": -2})


@lru_cache(maxsize=None)
def _witnesses():
    entries = [
        _sqz("sq-4-2", 4, 4, 2, [[(1, 3)], [(1, 4)], [(2, 3)], [(2, 4)]], (2, 2)),
        _sqz("sq-5-2", 5, 5, 2, [[(1, 3), (2, 4)], [(1, 4), (2, 5)], [(1, 5)], [(2, 3)], [(2, 4)]], (3, 2), 31),
        _sqz("sq-6-3", 6, 6, 3, [[(1, 4), (2, 5), (3, 6)], [(1, 5), (2, 6)], [(1, 6)], [(2, 4), (3, 5)],
                                 [(2, 5), (3, 6)], [(3, 4)]], (3, 3), 51),
        _sqz("sq-6-2", 6, 6, 2, [[(1, 3), (2, 4)], [(1, 4), (2, 5)], [(1, 5), (2, 6)], [(1, 6)], [(2, 3)],
                                 [(2, 4)]], (4, 2), 50),
        _sqz("sq-7-3-n5", 5, 7, 3, [[(1, 4), (2, 5), (3, 6)], [(1, 5), (2, 6), (3, 7)], [(1, 6), (2, 7)],
                                    [(2, 4), (3, 5)], [(2, 6), (3, 7)]], (4, 3), 56),
        _sqz("sq-7-2-n7", 7, 7, 2, [[(1, 3), (2, 4)], [(1, 4), (2, 5)], [(1, 5), (2, 6)], [(1, 6), (2, 7)],
                                    [(1, 7)], [(2, 3)], [(2, 4)]], (5, 2), 73),
        _w332_entry(),
        _nonreduced_entry(),
    ]
    return {e.name: e for e in entries}


WITNESS_NAMES = ("sq-4-2", "sq-5-2", "sq-6-3", "sq-6-2", "sq-7-3-n5", "sq-7-2-n7", "w332", "nonreduced-8")


def witness(name):
    try:
        return _witnesses()[name]
    except KeyError:
        raise NotFoundError(f"unknown witness {name!r}; known: {', '.join(WITNESS_NAMES)}") from None


def concatenation_witness(lam=0):
    """4-tuple of 7x7 matrices joining the 4x4 square-zero block with a 3x3 principal point."""
    from .tuples import CommTuple
    t = tuple_from_E(7, [[(1, 5), (2, 6), (5, 7)], [(2, 5), (3, 6), (6, 7)], [(1, 4)], [(2, 4)]])
    if lam:
        rows = [list(map(list, r)) for r in t.rows]
        for k in (2, 5, 6):
            rows[0][k][k] = QQ(lam)
        t = CommTuple.from_rows(rows)
    return t


def second_concatenation_witness():
    return tuple_from_E(7, [[(1, 4), (2, 5), (3, 6), (4, 7)], [(1, 3), (4, 6)], [(2, 3), (5, 6)], [(2, 7)]])


def disjoint_points(a, b):
    """Concatenation of two 1x1 tuples a, b (lists of scalars) as a 2x2 diagonal tuple."""
    rows = [[[QQ(x), QQ(0)], [QQ(0), QQ(y)]] for x, y in zip(a, b)]
    return CommTuple.from_rows(rows)


# ---------------------------------------------------------------- replay

@dataclass(frozen=True)
class WitnessReport:
    name: str
    checks: dict   # check -> (computed, expected)

    @property
    def ok(self):
        return all(a == b for a, b in self.checks.values())


def verify_witness(name):
    """Recompute the stored data of a witness."""
    from .admodules import hilbert_function, local_hilbert_function, min_generators
    from .deform import (elementary_smoothness, has_trivial_negative_tangents, hom_graded,
                         local_elementary_smoothness, local_tangent_report, SMOOTH)
    from .tuples import tangent_dimension
    e = witness(name)
    checks = {}
    if e.tuple is not None:
        tan = tangent_dimension(e.tuple)
        checks["tangent"] = (tan, e.tangent)
        r = min_generators(e.tuple)
        checks["generators"] = (r, e.rank)
        if e.quot_dim is not None:
            checks["quot_dim"] = (r * e.d - e.d * e.d + tan, e.quot_dim)
    if e.graded:
        pres = e.module()
        checks["hilbert"] = (hilbert_function(pres).values, e.hilbert)
        tnt = has_trivial_negative_tangents(pres)
        if e.name == "nonreduced-8":
            hom = hom_graded(pres).nonzero()
            checks["hom"] = (hom, e.extra["hom"])
            checks["tnt"] = (tnt, False)
        else:
            checks["tnt"] = (tnt, True)
            checks["smoothness"] = (elementary_smoothness(pres), SMOOTH)
    else:
        checks["hilbert"] = (local_hilbert_function(e.tuple).values, e.hilbert)
        rep = local_tangent_report(e.pair())
        checks["tnt"] = (rep.trivial_negative_tangents, True)
        checks["hom_total"] = (rep.hom_total, e.tangent + e.rank * e.d - e.d * e.d)
        checks["smoothness"] = (local_elementary_smoothness(e.pair(), e.family_directions()), SMOOTH)
    return WitnessReport(name, checks)
