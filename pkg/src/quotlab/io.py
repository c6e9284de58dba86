"""JSON encodings for tuples, module presentations, dual generators and results."""

import json

from gmpy2 import mpq

from .errors import QuotlabError
from .field import Fp, QQ, default_field, parse_field
from .linalg import ExactMatrix
from .modules import ModulePresentation
from .poly import DualElement


class InputError(QuotlabError):
    """Malformed input file; ``location`` points at the offending part."""

    def __init__(self, message, location=""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def load(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc), str(path)) from None
    return loads(text, str(path))


def loads(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False)


# ---------------------------------------------------------------- scalars

def _field_of(obj, where):
    spec = obj.get("field")
    if "modulus" in obj and spec in (None, "rational"):
        spec = {"prime": obj["modulus"]}
    try:
        return default_field() if spec is None else parse_field(spec)
    except QuotlabError as exc:
        raise InputError(str(exc), f"{where}.field") from None


def scalar_from_json(x, field, where):
    if isinstance(x, bool) or x is None or isinstance(x, (list, dict, float)):
        raise InputError(f"expected a scalar, got {x!r}", where)
    try:
        if field.is_rational:
            return mpq(x.strip()) if isinstance(x, str) else mpq(int(x))
        return field(x)
    except (ValueError, ZeroDivisionError, QuotlabError) as exc:
        raise InputError(f"bad scalar {x!r} ({exc})", where) from None


def scalar_to_json(x, field):
    return field.to_json(x)


def _field_header(field):
    out = {"field": field.spec()}
    if not field.is_rational:
        out["modulus"] = field.p
    return out


def _require(obj, key, kind, where):
    if not isinstance(obj, dict):
        raise InputError("expected an object", where)
    if key not in obj:
        raise InputError(f"missing key {key!r}", where)
    val = obj[key]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise InputError(f"{key!r} must be an integer", f"{where}.{key}")
    if kind is list and not isinstance(val, list):
        raise InputError(f"{key!r} must be a list", f"{where}.{key}")
    return val


# ---------------------------------------------------------------- tuples

def tuple_to_json(t):
    f = t.field
    out = {"n": t.n, "d": t.d}
    out.update(_field_header(f))
    out["matrices"] = [[[f.to_json(x) for x in row] for row in m.rows()] for m in t.matrices]
    return out


def tuple_from_json(obj, where="tuple"):
    from .tuples import CommTuple
    n = _require(obj, "n", int, where)
    d = _require(obj, "d", int, where)
    mats = _require(obj, "matrices", list, where)
    field = _field_of(obj, where)
    if len(mats) != n:
        raise InputError(f"expected {n} matrices, got {len(mats)}", f"{where}.matrices")
    out = []
    for i, m in enumerate(mats):
        loc = f"{where}.matrices[{i}]"
        if not isinstance(m, list) or len(m) != d:
            raise InputError(f"expected {d} rows", loc)
        rows = []
        for r, row in enumerate(m):
            if not isinstance(row, list) or len(row) != d:
                raise InputError(f"expected {d} entries", f"{loc}[{r}]")
            rows.append(tuple(scalar_from_json(x, field, f"{loc}[{r}][{c}]") for c, x in enumerate(row)))
        out.append(ExactMatrix(field, d, d, dense=tuple(rows)))
    return CommTuple(tuple(out))


# ---------------------------------------------------------------- modules

def _terms_to_json(elem, field, key):
    terms = sorted(elem.items(), key=lambda kv: (sum(kv[0][1]), kv[0][0], kv[0][1][::-1]))
    return [{"coeff": field.to_json(c), key: list(m), "gen": g} for (g, m), c in terms if c]


def _terms_from_json(items, n, r, field, key, where):
    if not isinstance(items, list):
        raise InputError("expected a list of terms", where)
    elem = {}
    for k, term in enumerate(items):
        loc = f"{where}[{k}]"
        if not isinstance(term, dict):
            raise InputError("expected a term object", loc)
        mono = _require(term, key, list, loc)
        g = _require(term, "gen", int, loc)
        if len(mono) != n or any(not isinstance(a, int) or isinstance(a, bool) or a < 0 for a in mono):
            raise InputError(f"{key} must list {n} non-negative integers", f"{loc}.{key}")
        if not 0 <= g < r:
            raise InputError(f"gen must be in 0..{r - 1}", f"{loc}.gen")
        c = scalar_from_json(term.get("coeff", "1"), field, f"{loc}.coeff")
        keyt = (g, tuple(mono))
        elem[keyt] = field.norm(elem.get(keyt, 0) + c)
    return {k: v for k, v in elem.items() if v}


def module_to_json(pres):
    f = pres.field
    out = {"n": pres.n, "r": pres.r, "generatorDegrees": list(pres.degrees)}
    if not f.is_rational:
        out.update(_field_header(f))
    out["kGenerators"] = [_terms_to_json(k, f, "monomial") for k in pres.elements()]
    return out


def module_from_json(obj, where="module"):
    n = _require(obj, "n", int, where)
    r = _require(obj, "r", int, where)
    field = _field_of(obj, where)
    degrees = obj.get("generatorDegrees", [0] * r)
    if not isinstance(degrees, list) or len(degrees) != r or any(not isinstance(x, int) for x in degrees):
        raise InputError(f"generatorDegrees must list {r} integers", f"{where}.generatorDegrees")
    kg = _require(obj, "kGenerators", list, where)
    kgens = [_terms_from_json(items, n, r, field, "monomial", f"{where}.kGenerators[{i}]")
             for i, items in enumerate(kg)]
    return ModulePresentation(n, tuple(degrees), tuple(kgens), field)


def dual_to_json(sigmas, field=QQ):
    if not sigmas:
        return {"n": 0, "r": 0, "dualGenerators": []}
    out = {"n": sigmas[0].n, "r": sigmas[0].rank}
    if not field.is_rational:
        out.update(_field_header(field))
    out["dualGenerators"] = [_terms_to_json(s.as_dict(), field, "z") for s in sigmas]
    return out


def dual_from_json(obj, where="dual"):
    n = _require(obj, "n", int, where)
    r = _require(obj, "r", int, where)
    field = _field_of(obj, where)
    gens = _require(obj, "dualGenerators", list, where)
    sigmas = [DualElement.make(n, r, _terms_from_json(items, n, r, field, "z", f"{where}.dualGenerators[{i}]"))
              for i, items in enumerate(gens)]
    return sigmas, field


# ---------------------------------------------------------------- results

def graded_dims_to_json(dims):
    return {str(e): v for e, v in sorted(dims.items())}


def graded_dims_from_json(obj):
    return {int(e): v for e, v in obj.items()}


def betti_to_json(betti):
    return [{"i": i, "j": j, "beta": b} for (i, j), b in sorted(betti.items()) if b]


def betti_from_json(items):
    return {(x["i"], x["j"]): x["beta"] for x in items}


def public_scalar(x, field):
    """JSON scalar for any internal or Fp value."""
    if isinstance(x, Fp):
        return int(x.value)
    return field.to_json(x)
