"""Monomials, graded free modules over k[y1..yn], and the restricted dual.

Monomials are exponent tuples.  Within one degree they are listed in
descending graded reverse lexicographic order; a basis of a free module in
degree j is ordered by (generator index, monomial).  Module elements are
dicts ``{(gen, monomial): coeff}``.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

from .errors import ShapeError
from .field import QQ
from .linalg import ExactMatrix


@lru_cache(maxsize=None)
def _monomials(n, k):
    out = set()
    for combo in combinations_with_replacement(range(n), k):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.add(tuple(e))
    return tuple(sorted(out, key=lambda a: a[::-1]))


def monomial_basis(n, k):
    """All monomials of degree exactly k in n variables, canonical order."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return list(_monomials(n, k))


@lru_cache(maxsize=None)
def monomial_index(n, k):
    return {m: i for i, m in enumerate(_monomials(n, k))}


def grevlex_key(m):
    """Sort key placing larger monomials (in grevlex) first within a degree."""
    return (sum(m), m[::-1])


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    """a / b or None when b does not divide a."""
    out = tuple(x - y for x, y in zip(a, b))
    return None if any(x < 0 for x in out) else out


def unit(n, i):
    e = [0] * n
    e[i] = 1
    return tuple(e)


def mono_str(m, var="y"):
    parts = []
    for i, a in enumerate(m):
        if a == 1:
            parts.append(f"{var}{i + 1}")
        elif a > 1:
            parts.append(f"{var}{i + 1}^{a}")
    return "*".join(parts) if parts else "1"


class FreeModule:
    """F = sum_g S(-deg g) over S = k[y1..yn]."""

    def __init__(self, n, degrees):
        self.n = n
        self.degrees = tuple(degrees)
        self._basis = {}
        self._index = {}

    @property
    def rank(self):
        return len(self.degrees)

    def basis(self, j):
        b = self._basis.get(j)
        if b is None:
            b = []
            for g, dg in enumerate(self.degrees):
                if j - dg >= 0:
                    b.extend((g, m) for m in _monomials(self.n, j - dg))
            b = tuple(b)
            self._basis[j] = b
            self._index[j] = {x: i for i, x in enumerate(b)}
        return b

    def index(self, j):
        if j not in self._index:
            self.basis(j)
        return self._index[j]

    def dim(self, j):
        return sum(comb(self.n - 1 + j - dg, self.n - 1) for dg in self.degrees if j >= dg)

    def element_degree(self, elem):
        """Degree of a homogeneous element, None for zero, ValueError if mixed."""
        degs = {self.degrees[g] + sum(m) for (g, m) in elem}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("inhomogeneous element")
        return degs.pop()

    def to_vector(self, elem, j):
        idx = self.index(j)
        return {idx[key]: c for key, c in elem.items()}

    def from_vector(self, vec, j):
        b = self.basis(j)
        return {b[i]: c for i, c in vec.items()}

    def shift_map(self, i, j):
        """Index map for multiplication by y_i from degree j to degree j+1."""
        e = unit(self.n, i)
        tgt = self.index(j + 1)
        return [tgt[(g, mono_mul(m, e))] for (g, m) in self.basis(j)]

    def __eq__(self, other):
        return isinstance(other, FreeModule) and (self.n, self.degrees) == (other.n, other.degrees)

    def __hash__(self):
        return hash((self.n, self.degrees))

    def __repr__(self):
        return f"FreeModule(n={self.n}, degrees={list(self.degrees)})"


# ---------------------------------------------------------------- elements

def elem_add(a, b, p=None, s=1):
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, 0) + s * v
        if p:
            nv %= p
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def elem_scale(a, s, p=None):
    if not s:
        return {}
    if p:
        return {k: v * s % p for k, v in a.items() if v * s % p}
    return {k: v * s for k, v in a.items()}


def elem_mul_mono(a, mono):
    return {(g, mono_mul(m, mono)): v for (g, m), v in a.items()}


def poly_mul_elem(poly, a, p=None):
    """poly (dict mono->coeff) times a module element."""
    out = {}
    for mu, c in poly.items():
        for (g, m), v in a.items():
            key = (g, mono_mul(m, mu))
            nv = out.get(key, 0) + c * v
            if p:
                nv %= p
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
    return out


def apply_map(images, elem, p=None):
    """Evaluate the S-linear map sending generator g to images[g] on elem."""
    out = {}
    for (g, m), c in elem.items():
        for (h, mm), v in images[g].items():
            key = (h, mono_mul(mm, m))
            nv = out.get(key, 0) + c * v
            if p:
                nv %= p
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
    return out


def sort_terms(elem, degrees):
    """Terms in canonical order: (degree, generator, monomial)."""
    return sorted(elem.items(), key=lambda kv: (degrees[kv[0][0]] + sum(kv[0][1]), kv[0][0], kv[0][1][::-1]))


@dataclass(frozen=True)
class FreeModuleElement:
    """Element of a graded free module with canonically ordered nonzero terms."""

    rank: int
    degrees: tuple
    terms: tuple  # ((coeff, monomial, gen), ...)

    @classmethod
    def from_dict(cls, elem, degrees):
        ordered = sort_terms({k: v for k, v in elem.items() if v}, degrees)
        return cls(len(degrees), tuple(degrees), tuple((v, m, g) for (g, m), v in ordered))

    def to_dict(self):
        return {(g, m): c for c, m, g in self.terms}

    def is_homogeneous(self):
        return len({self.degrees[g] + sum(m) for _, m, g in self.terms}) <= 1

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{mono_str(m)}*e{g + 1}" for c, m, g in self.terms)


# ---------------------------------------------------------------- dual

@dataclass(frozen=True)
class DualElement:
    """Element of F* = sum_j k[z1..zn] e_j^*, terms as dict {(gen, z-monomial): coeff}."""

    n: int
    rank: int
    terms: tuple  # sorted ((gen, mono), coeff)

    @classmethod
    def make(cls, n, rank, terms):
        clean = {k: v for k, v in dict(terms).items() if v}
        for g, m in clean:
            if not 0 <= g < rank or len(m) != n:
                raise ShapeError(f"term {(g, m)} does not fit n={n}, r={rank}")
        return cls(n, rank, tuple(sorted(clean.items(), key=lambda kv: (sum(kv[0][1]), kv[0][0], kv[0][1][::-1]))))

    def as_dict(self):
        return dict(self.terms)

    def degree(self):
        return max((sum(m) for (g, m), _ in self.terms), default=None)

    def is_zero(self):
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{mono_str(m, 'z')}*e{g + 1}^*" for (g, m), c in self.terms)


def contract(i, sigma):
    """y_i acting on sigma by deleting one z_i (no coefficients); i is 1-based."""
    if not 1 <= i <= sigma.n:
        raise ShapeError(f"variable index {i} outside 1..{sigma.n}")
    k = i - 1
    out = {}
    for (g, m), c in sigma.terms:
        if m[k] > 0:
            mm = list(m)
            mm[k] -= 1
            out[(g, tuple(mm))] = c
    return DualElement.make(sigma.n, sigma.rank, out)


def contract_mono(mono, terms):
    """Contraction of a dict-form dual element by the monomial y^mono."""
    out = {}
    for (g, m), c in terms.items():
        r = mono_div(m, mono)
        if r is not None:
            out[(g, r)] = c
    return out


def pairing(elem, dual_terms, p=None):
    """<f, sigma> = sum of coefficient products over matching basis elements."""
    s = 0
    for key, c in elem.items():
        v = dual_terms.get(key)
        if v:
            s += c * v
    return s % p if p else s


def multiply_by_variable_map(i, k, degrees, n, field=QQ):
    """Matrix of y_i: F_k -> F_{k+1} in the canonical monomial bases (i is 1-based)."""
    if k < 0:
        raise ValueError("k >= 0 required")
    F = FreeModule(n, degrees)
    src = F.basis(k)
    smap = F.shift_map(i - 1, k)
    return ExactMatrix.from_sparse(field, F.dim(k + 1), len(src), {(r, c): 1 for c, r in enumerate(smap)})
