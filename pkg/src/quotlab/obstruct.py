"""Primary obstructions for Quot points and the nonreducedness certificate.

For a tangent vector phi in Hom(K, M)_e the chain lift is
  s1(phi)(g) = standard-monomial lift of phi(d0 g)        (F_1 -> F_0)
  s2(phi)(h) = a solution u of d0(u) = s1(phi)(d1 h)      (F_2 -> F_1)
and the primary obstruction of (phi1, phi2) is the class of
  pi o (s1(phi1) s2(phi2) + s1(phi2) s2(phi1))  in Ext^1(K, M).
Since pi is S-linear, pi(s1(phi)(u)) only needs phi's values.
"""

import random
from dataclasses import dataclass
from math import comb

from .config import CertificateConfig, QuadricConfig
from .deform import HomComplex, _complex
from .errors import PreconditionError
from .field import Field
from .linalg import Echelon, LinearSolver, dense_rank_mod_p, sparse_rank, sparse_rref
from .poly import _monomials, monomial_index, mono_mul

NONREDUCED = "NONREDUCED"
INCONCLUSIVE = "INCONCLUSIVE"


class ObstructionCalculator:
    """Caches lifts and solvers for one presentation."""

    def __init__(self, m):
        self.hc = _complex(m)
        self.M = self.hc.M
        self.F0 = self.M.F
        self.field = self.hc.field
        self._solvers = {}

    # -- lifting

    def _solver(self, j):
        """Solver for d0 restricted to F_1 in degree j."""
        s = self._solvers.get(j)
        if s is None:
            from .poly import FreeModule
            res = self.hc.res
            F1 = FreeModule(self.hc.n, res.degrees[1])
            basis = F1.basis(j)
            idx0 = self.F0.index(j)
            cols = []
            p = self.field.p
            for g, m in basis:
                col = {}
                for (h, mm), c in res.maps[0][g].items():
                    k = idx0[(h, mono_mul(mm, m))]
                    nv = col.get(k, 0) + c
                    if p:
                        nv %= p
                    if nv:
                        col[k] = nv
                    else:
                        col.pop(k, None)
                cols.append(col)
            s = (LinearSolver(cols, self.F0.dim(j), self.field), F1, basis)
            self._solvers[j] = s
        return s

    def s1(self, e, values):
        """{F_1 generator: F_0 element} lifting phi's values."""
        out = {}
        degs = self.hc.res.degrees[1]
        for g, vec in values.items():
            out[g] = self.M.lift_element(degs[g] + e, vec)
        return out

    def apply_s1(self, s1, u):
        """s1 applied to an F_1 element (dict)."""
        p = self.field.p
        out = {}
        for (g, m), c in u.items():
            img = s1.get(g)
            if not img:
                continue
            for (h, mm), v in img.items():
                key = (h, mono_mul(mm, m))
                nv = out.get(key, 0) + c * v
                if p:
                    nv %= p
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        return out

    def s2(self, e, s1, through):
        """{F_2 generator h: F_1 element} with d0 s2(h) = s1(d1 h), for deg h <= through."""
        res = self.hc.res
        res.ensure(2, min(through, res.window(2) - 1))
        out = {}
        for h, dh in enumerate(res.degrees[2]):
            if dh > through:
                continue
            target = self.apply_s1(s1, res.maps[1][h])
            if not target:
                continue
            j = dh + e
            solver, F1, basis = self._solver(j)
            vec = self.F0.to_vector(target, j)
            u = solver.solve(vec)
            if u is None:
                raise ArithmeticError("s1 o d1 does not lift through d0; phi is not a homomorphism")
            out[h] = {basis[c]: x for c, x in u.items() if x}
        return out

    def lift(self, e, phi_vec, through=None):
        """ChainLift of the Hom(K, M)_e vector phi_vec."""
        values = self.hc.values(1, e, phi_vec)
        s1 = self.s1(e, values)
        if through is None:
            through = self.M.hi - 2 * e
        s2 = self.s2(e, s1, through)
        return ChainLift(e, values, s1, s2, through)

    # -- obstruction

    def half(self, lift_a, lift_b):
        """pi o s1(a) o s2(b), as values on F_2 generators (degree e_a + e_b)."""
        res = self.hc.res
        M = self.M
        p = self.field.p
        e = lift_a.degree + lift_b.degree
        degs1 = res.degrees[1]
        out = {}
        for h, u in lift_b.s2.items():
            if not M.dim(res.degrees[2][h] + e):
                continue
            img = {}
            for (g, m), c in u.items():
                val = lift_a.values.get(g)
                if not val:
                    continue
                part = M.apply_mono(m, degs1[g] + lift_a.degree, val)
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

    def obstruction_cocycle(self, lift1, lift2):
        """Hom(F_2, M)_{e1+e2} vector of pi(s1(l1)s2(l2) + s1(l2)s2(l1))."""
        e = lift1.degree + lift2.degree
        self.hc.res.ensure(2, min(self.M.hi - e, self.hc.res.window(2) - 1))
        a = self.hc.pack(2, e, self.half(lift1, lift2))
        b = self.hc.pack(2, e, self.half(lift2, lift1))
        return _vadd(a, b, self.field.p)

    def primary_obstruction(self, e1, phi1, e2, phi2):
        """Ext^1 class coordinates of the primary obstruction of (phi1, phi2)."""
        through = self.M.hi - e1 - e2
        l1 = self.lift(e1, phi1, through)
        l2 = self.lift(e2, phi2, through)
        coc = self.obstruction_cocycle(l1, l2)
        return self.hc.ext_coordinates(e1 + e2, coc)

    # -- identity checks

    def check_lift(self, lift):
        """pi s1 = phi d0 on F_1 and d0 s2 = s1 d1 on F_2."""
        res = self.hc.res
        degs1 = res.degrees[1]
        for g, vec in lift.values.items():
            j, proj = self.M.project_element(lift.s1[g])
            if proj != vec or (lift.s1[g] and j != degs1[g] + lift.degree):
                return False
        p = self.field.p
        for h, u in lift.s2.items():
            lhs = self.apply_map_d0(u)
            rhs = self.apply_s1(lift.s1, res.maps[1][h])
            if _vadd(lhs, rhs, p, -1):
                return False
        return True

    def apply_map_d0(self, u):
        from .poly import apply_map
        return apply_map(self.hc.res.maps[0], u, self.field.p)

    def perturbed_lift(self, lift, rng, shift_s1=True):
        """Another valid lift: s1 + d0 sigma, s2 + sigma d1 + d1 tau for random sigma, tau."""
        from .poly import apply_map
        res = self.hc.res
        field = self.field
        p = field.p
        e = lift.degree
        n = self.hc.n
        degs1, degs2 = res.degrees[1], res.degrees[2]

        def rand_elem(degs, j):
            el = {}
            for g, dg in enumerate(degs):
                if j - dg < 0:
                    continue
                for m in _monomials(n, j - dg):
                    c = rng.randint(-2, 2)
                    if c:
                        el[(g, m)] = field(c)
            return el

        sigma = {g: rand_elem(degs1, dg + e) for g, dg in enumerate(degs1)} if shift_s1 else {}
        s1 = {}
        for g in range(len(degs1)):
            base = lift.s1.get(g, {})
            extra = apply_map(res.maps[0], sigma.get(g, {}), p)
            s1[g] = _vadd(base, extra, p)
        s2 = {}
        for h, dh in enumerate(degs2):
            if dh > lift.through:
                continue
            u = lift.s2.get(h, {})
            d1h = res.maps[1][h]
            shift = apply_map(sigma, d1h, p) if sigma else {}
            tau = rand_elem(degs2, dh + e)
            t = apply_map(res.maps[1], tau, p) if tau else {}
            s2[h] = _vadd(_vadd(u, shift, p), t, p)
        # values are unchanged: pi(d0 sigma) = 0
        return ChainLift(e, lift.values, s1, s2, lift.through)

    def half_from_s1(self, lift_a, lift_b):
        """pi o s1(a) o s2(b) computed through the explicit F_0 lift (independent route)."""
        res = self.hc.res
        e = lift_a.degree + lift_b.degree
        out = {}
        for h, u in lift_b.s2.items():
            el = self.apply_s1(lift_a.s1, u)
            if not el:
                continue
            j, vec = self.M.project_element(el)
            if vec and j == res.degrees[2][h] + e:
                out[h] = vec
        return out


def _vadd(a, b, p, s=1):
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


@dataclass(frozen=True, eq=False)
class ChainLift:
    degree: int
    values: dict  # phi on F_1 generators
    s1: dict      # F_1 generator -> F_0 element
    s2: dict      # F_2 generator -> F_1 element (zero entries omitted)
    through: int  # s2 covers F_2 generators of degree <= through

    def is_zero(self):
        return not any(self.s1.values()) and not any(self.s2.values())


def lift_chain(m, e, phi):
    calc = m if isinstance(m, ObstructionCalculator) else ObstructionCalculator(m)
    return calc.lift(e, phi)


def primary_obstruction(m, e1, phi1, e2, phi2):
    calc = m if isinstance(m, ObstructionCalculator) else ObstructionCalculator(m)
    return calc.primary_obstruction(e1, phi1, e2, phi2)


@dataclass(frozen=True)
class IdentityReport:
    lifts: bool
    cocycle: bool
    symmetry: bool
    lift_independence: bool
    bilinearity: bool
    two_routes: bool
    pairs: int
    perturbed: int  # pairs whose perturbed lift differed from the original

    @property
    def ok(self):
        return all((self.lifts, self.cocycle, self.symmetry, self.lift_independence,
                    self.bilinearity, self.two_routes))


def _lift_differs(a, b):
    return any(a.s1.get(g, {}) != b.s1.get(g, {}) for g in set(a.s1) | set(b.s1)) or \
        any(a.s2.get(h, {}) != b.s2.get(h, {}) for h in set(a.s2) | set(b.s2))


def obstruction_identities(m, degree=-1, seed=0, max_pairs=None, other_degree=None):
    """Check the internal identities of the primary obstruction on Hom_degree x Hom_other_degree."""
    calc = m if isinstance(m, ObstructionCalculator) else ObstructionCalculator(m)
    hc = calc.hc
    field = calc.field
    p = field.p
    rng = random.Random(seed)
    e1 = degree
    e2 = degree if other_degree is None else other_degree
    E = e1 + e2
    basis1, basis2 = hc.hom(e1), hc.hom(e2)
    through = calc.M.hi - E
    lifts1 = [calc.lift(e1, phi, through) for phi in basis1]
    lifts2 = lifts1 if e1 == e2 else [calc.lift(e2, phi, through) for phi in basis2]
    ok_lift = all(calc.check_lift(l) for l in lifts1 + (lifts2 if e1 != e2 else []))
    if e1 == e2:
        pairs = [(i, j) for i in range(len(basis1)) for j in range(i, len(basis1))]
    else:
        pairs = [(i, j) for i in range(len(basis1)) for j in range(len(basis2))]
    if max_pairs is not None and len(pairs) > max_pairs:
        pairs = rng.sample(pairs, max_pairs)
    ok_coc = ok_sym = ok_ind = ok_routes = True
    perturbed = 0
    hc.res.ensure(2, min(calc.M.hi - E, hc.res.window(2) - 1))
    for i, j in pairs:
        a, b = lifts1[i], lifts2[j]
        coc = calc.obstruction_cocycle(a, b)
        if not hc.is_cocycle(E, coc):
            ok_coc = False
            continue
        cls = hc.ext_coordinates(E, coc)
        if hc.ext_coordinates(E, calc.obstruction_cocycle(b, a)) != cls:
            ok_sym = False
        pa, pb = calc.perturbed_lift(a, rng), calc.perturbed_lift(b, rng)
        if _lift_differs(a, pa) or _lift_differs(b, pb):
            perturbed += 1
        if not (calc.check_lift(pa) and calc.check_lift(pb)):
            ok_ind = False
        else:
            alt = _vadd(hc.pack(2, E, calc.half_from_s1(pa, pb)), hc.pack(2, E, calc.half_from_s1(pb, pa)), p)
            if not hc.is_cocycle(E, alt) or hc.ext_coordinates(E, alt) != cls:
                ok_ind = False
        direct = _vadd(hc.pack(2, E, calc.half_from_s1(a, b)), hc.pack(2, E, calc.half_from_s1(b, a)), p)
        if direct != coc:
            ok_routes = False
    ok_bil = True
    if len(basis1) >= 2 and basis2:
        for _ in range(3):
            i, k = rng.randrange(len(basis1)), rng.randrange(len(basis1))
            j = rng.randrange(len(basis2))
            x, y = field(rng.randint(-3, 3)), field(rng.randint(-3, 3))
            combo = _vadd({c: x * v for c, v in basis1[i].items()}, {c: y * v for c, v in basis1[k].items()}, p)
            lhs = calc.primary_obstruction(e1, combo, e2, basis2[j])
            r1 = calc.primary_obstruction(e1, basis1[i], e2, basis2[j])
            r2 = calc.primary_obstruction(e1, basis1[k], e2, basis2[j])
            rhs = [field.norm(x * u + y * w) for u, w in zip(r1, r2)]
            if [field.norm(c) for c in lhs] != rhs:
                ok_bil = False
        if any(calc.primary_obstruction(e1, basis1[0], e2, {})):
            ok_bil = False
    return IdentityReport(ok_lift, ok_coc, ok_sym, ok_ind, ok_bil, ok_routes, len(pairs), perturbed)


# ---------------------------------------------------------------- quadrics

@dataclass(frozen=True, eq=False)
class ObstructionQuadrics:
    """Quadrics in t_1..t_m: each a dict {(i, j): coeff} with i <= j."""

    nvars: int
    quadrics: tuple
    field: Field
    tangent_degree: int = -1
    ext_degree: int = -2
    diagonal: str = "half"

    def __len__(self):
        return len(self.quadrics)


def obstruction_quadrics(m, tangent_degree=-1, config=None):
    """Quadrics psi(o(t)) for the Ext^1 basis functionals psi in degree 2 * tangent_degree."""
    config = config or QuadricConfig()
    calc = m if isinstance(m, ObstructionCalculator) else ObstructionCalculator(m)
    hc = calc.hc
    field = calc.field
    if field.characteristic == 2:
        raise PreconditionError("characteristic 2 is not supported")
    e = tangent_degree
    E = 2 * e
    if hc.ext_dim(E) == 0:
        basis = []
    else:
        basis = hc.hom(e)
    nvars = len(basis)
    ext_dim = hc.ext_dim(E) if nvars else 0
    if not nvars or not ext_dim:
        return ObstructionQuadrics(nvars, (), field, e, E, config.diagonal)
    lifts = [calc.lift(e, phi) for phi in basis]
    p = field.p
    diag = field(config.diagonal_factor())
    halves = {}
    for i in range(nvars):
        for j in range(nvars):
            halves[(i, j)] = hc.pack(2, E, calc.half(lifts[i], lifts[j]))
    quad = [dict() for _ in range(ext_dim)]
    for i in range(nvars):
        for j in range(i, nvars):
            coc = _vadd(halves[(i, j)], halves[(j, i)], p)
            w = hc.ext_coordinates(E, coc)
            for k, c in enumerate(w):
                if i == j:
                    c = field.norm(c * diag)
                if c:
                    quad[k][(i, j)] = c
    return ObstructionQuadrics(nvars, tuple(quad), field, e, E, config.diagonal)


# ---------------------------------------------------------------- dimension certificate

@dataclass(frozen=True)
class DimensionCertificate:
    targetDim: int
    linearFormsUsed: tuple
    vanishingDegree: int | None
    seed: int
    verdict: bool
    hilbert: tuple = ()
    evidence: str = "verified"
    selfCheck: bool | None = None
    attempts: int = 1


def _quad_to_poly(q, field):
    """{(i, j): c} -> {exponent tuple key (i, j) sorted}: kept as dict over index pairs."""
    return {tuple(sorted(k)): field(v) for k, v in q.items()}


def _substitute(quadric, subst, free_index, nfree, field):
    """Substitute t_p -> sum_f a_pf u_f into a quadric over index pairs; result over u monomials."""
    p = field.p

    def lin(i):
        if i in free_index:
            return {free_index[i]: field.one}
        return subst[i]

    out = {}
    for (i, j), c in quadric.items():
        li, lj = lin(i), lin(j)
        for a, x in li.items():
            for b, y in lj.items():
                e = [0] * nfree
                e[a] += 1
                e[b] += 1
                key = tuple(e)
                nv = out.get(key, 0) + c * x * y
                if p:
                    nv %= p
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
    return out


def graded_quotient_dims(polys, nvars, field, max_degree, start_degree=2):
    """dim (k[u]/(polys))_k for k = 0..max_degree, polys homogeneous of degree start_degree.

    I_{k+1} = span(u_i * I_k); stops early once a degree piece vanishes.
    """
    dims = []
    for k in range(min(start_degree, max_degree + 1)):
        dims.append(comb(nvars - 1 + k, k) if nvars else (1 if k == 0 else 0))
    if max_degree < start_degree:
        return dims
    idx = monomial_index(nvars, start_degree) if nvars else {}
    ech = Echelon(field)
    for q in polys:
        v = {idx[m]: c for m, c in q.items()}
        if v:
            ech.add(v)
    k = start_degree
    while True:
        total = comb(nvars - 1 + k, k) if nvars else 0
        dims.append(total - ech.dim)
        if dims[-1] == 0 or k >= max_degree:
            return dims
        mons = _monomials(nvars, k)
        nidx = monomial_index(nvars, k + 1)
        rows = []
        for v in ech.basis():
            for i in range(nvars):
                w = {}
                for c, x in v.items():
                    m = list(mons[c])
                    m[i] += 1
                    w[nidx[tuple(m)]] = x
                rows.append(w)
        ech = Echelon(field, rows)
        k += 1


def _draw_forms(rng, target, nvars):
    return [[rng.randint(-3, 3) for _ in range(nvars)] for _ in range(target)]


def _modular_images(polys, field, primes):
    """Reduce rational polynomials mod the first prime that divides no denominator."""
    from .errors import ArithmeticDomainError
    from .field import prime_field
    for p in primes:
        fp = prime_field(p)
        try:
            return fp, [{m: fp(c) for m, c in poly.items() if fp(c)} for poly in polys]
        except ArithmeticDomainError:
            continue
    return field, polys


def _certify_once(q, target, seed, config):
    field = q.field if config.field is None else config.field
    m = q.nvars
    rng = random.Random(seed)
    forms = _draw_forms(rng, target, m)
    p = field.p
    red = sparse_rref([{c: field(v) for c, v in enumerate(f) if v} for f in forms], p)
    pivots = [c for c, _ in red]
    free = [c for c in range(m) if c not in set(pivots)]
    free_index = {c: i for i, c in enumerate(free)}
    subst = {}
    for c, row in red:
        subst[c] = {free_index[k]: field.norm(-v) for k, v in row.items() if k != c}
    v = len(free)
    polys = [_substitute(_quad_to_poly(quad, field), subst, free_index, v, field) for quad in q.quadrics]
    max_degree = v + 1 if config.max_degree is None else min(v + 1, config.max_degree)
    work = field
    if field.is_rational and config.modular:
        # rank mod p <= rank over Q, so a zero piece mod p is a zero piece over Q
        work, polys = _modular_images(polys, field, config.primes)
    dims = graded_quotient_dims(polys, v, work, max_degree)
    vanish = next((k for k, x in enumerate(dims) if x == 0), None)
    return DimensionCertificate(target, tuple(tuple(f) for f in forms), vanish, seed, vanish is not None,
                                tuple(dims), field.evidence())


def dim_upper_certificate(q, target, seed=0, config=None, self_check=False):
    """One-sided certificate that k[t]/(quadrics) has Krull dimension <= target."""
    config = config or CertificateConfig()
    if target < 0:
        raise ValueError("target must be non-negative")
    attempts = 0
    cert = None
    for s in range(seed, seed + 1 + config.retries):
        attempts += 1
        cert = _certify_once(q, target, s, config)
        if cert.verdict:
            break
    checked = None
    if self_check and cert.verdict:
        checked = brute_force_vanishes(q, cert.linearFormsUsed, cert.vanishingDegree, config)
    return DimensionCertificate(cert.targetDim, cert.linearFormsUsed, cert.vanishingDegree, cert.seed,
                                cert.verdict, cert.hilbert, cert.evidence, checked, attempts)


def brute_force_vanishes(q, forms, degree, config=None):
    """Degree-``degree`` piece of k[t]/(quadrics, forms) is zero, via all monomial multiples.

    Works in all m variables without substitution, so it checks the
    certificate by a separate route.
    """
    config = config or CertificateConfig()
    field = q.field if config.field is None else config.field
    m = q.nvars
    if degree is None or degree == 0:
        return False
    total = comb(m - 1 + degree, degree) if m else 0
    gens = [({(c,): field(v) for c, v in enumerate(f) if v}, 1) for f in forms]
    if degree >= 2:
        gens += [(_quad_to_poly(quad, field), 2) for quad in q.quadrics]
    work = field
    if field.is_rational and config.modular:
        work, polys = _modular_images([g for g, _ in gens], field, config.primes)
        gens = [(poly, k) for poly, (_, k) in zip(polys, gens)]
    idx = monomial_index(m, degree)
    rows = []
    for poly, k in gens:
        for mu in _monomials(m, degree - k):
            row = {}
            for vars_, v in poly.items():
                e = list(mu)
                for i in vars_:
                    e[i] += 1
                key = idx[tuple(e)]
                row[key] = work.norm(row.get(key, 0) + v)
            row = {a: b for a, b in row.items() if b}
            if row:
                rows.append(row)
    if work.p is not None and work.p < 2 ** 31:
        return dense_rank_mod_p(rows, total, work.p) == total
    return sparse_rank(rows, work.p) == total


# ---------------------------------------------------------------- verdict

@dataclass(frozen=True)
class NonreducednessReport:
    assumption1: bool
    betti1: dict
    assumption2: bool
    tangent_total: int
    tangent_dims: dict
    assumption3: bool | None
    certificate: DimensionCertificate | None
    obstruction_dims: dict
    bound: int | None
    verdict: str
    evidence: str


def nonreducedness_verdict(m, seed=0, self_check=False, target=4, config=None):
    """Check Assumptions 1-3 for a 4+4T module and conclude generic nonreducedness."""
    from .deform import hom_graded, ext1_graded
    hc = _complex(m)
    M = hc.M
    if M.hilbert_series() != {0: 4, 1: 4} or hc.n != 4:
        raise PreconditionError(f"expected Hilbert series 4+4T over 4 variables, got {M.hilbert_series()}")
    betti1 = {}
    for j in hc.res.degrees[1]:
        betti1[j] = betti1.get(j, 0) + 1
    a1 = set(betti1) == {1}
    hom = hom_graded(hc)
    tangent = hom.nonzero()
    a2 = hom.total == 64
    ext = ext1_graded(hc).nonzero()
    cert = None
    a3 = None
    bound = None
    if a1 and a2:
        q = obstruction_quadrics(hc, -1, config.quadrics if config else None)
        cert = dim_upper_certificate(q, target, seed, config.certificate if config else None, self_check)
        a3 = cert.verdict and (cert.selfCheck is not False)
        bound = sum(v for e, v in tangent.items() if e >= 0) + target
    verdict = NONREDUCED if (a1 and a2 and a3 and bound < hom.total) else INCONCLUSIVE
    return NonreducednessReport(a1, betti1, a2, hom.total, tangent, a3, cert, ext, bound, verdict,
                                hc.field.evidence())
