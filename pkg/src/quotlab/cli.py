"""Command-line front end: ``quotlab <subcommand> ...``."""

import argparse
import sys
from dataclasses import dataclass

from . import io
from .errors import NotCommutingError, NotFoundError, OutOfCatalogError, QuotlabError

OK, FAILED, BAD_INPUT = 0, 1, 2


@dataclass
class CommandResult:
    text: str
    payload: dict
    code: int = OK


class VerificationFailure(Exception):
    pass


# ---------------------------------------------------------------- helpers

def _tuple(path):
    return io.tuple_from_json(io.load(path))


def _module(path):
    return io.module_from_json(io.load(path))


def _dims_lines(dims):
    return "\n".join(f"{e}: {v}" for e, v in sorted(dims.items())) or "(all zero)"


def _betti_grid(betti):
    if not betti:
        return "(zero)"
    cols = range(0, max(i for i, _ in betti) + 1)
    rows = sorted({j - i for i, j in betti})
    width = max(len(str(b)) for b in betti.values()) + 1
    head = "      " + "".join(f"{i:>{width}}" for i in cols)
    lines = [head, "      " + "-" * (width * len(cols))]
    for s in rows:
        cells = "".join(f"{betti.get((i, i + s), 0) or '.':>{width}}" for i in cols)
        lines.append(f"{s:>4}: {cells}")
    return "\n".join(lines)


def _elem_text(elem, field):
    from .poly import mono_str
    terms = sorted(elem.items(), key=lambda kv: (sum(kv[0][1]), kv[0][0], kv[0][1][::-1]))
    parts = []
    for (g, m), c in terms:
        c = field.signed(c)
        mono = mono_str(m, "y")
        coef = "" if c == 1 else ("-" if c == -1 else f"{c}*")
        body = f"{mono}*e{g + 1}" if mono != "1" else f"e{g + 1}"
        parts.append(f"{coef}{body}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def _module_summary(pres):
    from .admodules import hilbert_function
    lines = [f"n = {pres.n}, r = {pres.r}, generator degrees {list(pres.degrees)}"]
    if pres.is_graded:
        lines.append(f"degree {pres.degree}, Hilbert function {hilbert_function(pres).values}")
    else:
        lines.append(f"degree {pres.degree} (K is not homogeneous)")
    lines.append(f"K generators ({len(pres.kgens)}):")
    lines += ["  " + _elem_text(k, pres.field) for k in pres.elements()]
    return "\n".join(lines)


# ---------------------------------------------------------------- commands

def cmd_tangent(a):
    from .tuples import tangent_space
    t = _tuple(a.file)
    ts = tangent_space(t, with_basis=a.full)
    payload = {"tangent": ts.dimension}
    text = f"tangent dimension: {ts.dimension}"
    if a.full:
        payload["basis"] = [[[[t.field.to_json(x) for x in row] for row in z.rows()] for z in zs] for zs in ts.basis]
        text += f"\nbasis: {len(ts.basis)} tuples (see --json)"
    return CommandResult(text, payload)


def cmd_support(a):
    from .tuples import joint_eigenspaces
    t = _tuple(a.file)
    f = t.field
    pts = [{"point": [f.to_json(x) for x in lam], "multiplicity": len(basis)} for lam, basis in joint_eigenspaces(t)]
    text = "\n".join(f"({', '.join(str(x) for x in p['point'])}) multiplicity {p['multiplicity']}" for p in pts)
    return CommandResult(text or "(empty)", {"support": pts})


def cmd_module(a):
    from .admodules import StablePair, quot_point
    t = _tuple(a.file)
    try:
        idx = [int(x) - 1 for x in a.gens.replace(",", " ").split()]
    except ValueError:
        raise io.InputError("--gens takes 1-based basis indices, e.g. 3,4") from None
    if any(not 0 <= i < t.d for i in idx):
        raise io.InputError(f"--gens indices must be in 1..{t.d}")
    pres = quot_point(StablePair.from_basis_indices(t, idx), translate_to_origin=a.translate)
    return CommandResult(_module_summary(pres), io.module_to_json(pres))


def cmd_hilbert(a):
    from .admodules import hilbert_function
    pres = _module(a.file)
    hf = hilbert_function(pres)
    return CommandResult(f"Hilbert function: {hf.values}\ndegree: {hf.total}",
                         {"hilbert": list(hf.values), "start": hf.start, "degree": hf.total})


def cmd_betti(a):
    from .resolution import betti_table
    pres = _module(a.file)
    b = betti_table(pres)
    return CommandResult(_betti_grid(b), {"betti": io.betti_to_json(b)})


def cmd_apolar(a):
    from .admodules import perp_of_dual_gens
    sigmas, field = io.dual_from_json(io.load(a.dual))
    if not sigmas:
        raise io.InputError("no dual generators given")
    pres = perp_of_dual_gens(sigmas, sigmas[0].n, sigmas[0].rank, field=field)
    return CommandResult(_module_summary(pres), io.module_to_json(pres))


def cmd_hom(a):
    from .deform import hom_graded
    pres = _module(a.file)
    h = hom_graded(pres, with_basis=a.full)
    dims = h.nonzero()
    payload = {"dims": io.graded_dims_to_json(dims), "total": h.total}
    if a.full:
        payload["bases"] = {str(e): [{str(k): pres.field.to_json(v) for k, v in vec.items()} for vec in b]
                            for e, b in h.bases.items() if b}
    return CommandResult(_dims_lines(dims) + f"\ntotal: {h.total}", payload)


def cmd_ext1(a):
    from .deform import ext1_graded
    pres = _module(a.file)
    x = ext1_graded(pres)
    dims = x.nonzero()
    return CommandResult(_dims_lines(dims) + f"\ntotal: {x.total}",
                         {"dims": io.graded_dims_to_json(dims), "total": x.total})


def cmd_tnt(a):
    from .deform import elementary_smoothness, negative_tangent_dim
    pres = _module(a.file)
    if not pres.is_graded:
        return _tnt_filtered(pres)
    neg = negative_tangent_dim(pres)
    tnt = neg == pres.n
    verdict = elementary_smoothness(pres)
    text = f"negative tangents: {neg} (n = {pres.n})\nTNT: {str(tnt).lower()}\nsmoothness: {verdict}"
    return CommandResult(text, {"negative": neg, "n": pres.n, "tnt": tnt, "smoothness": verdict})


def _tnt_filtered(pres):
    # inhomogeneous K: filtered Hom on the tuple side; smoothness needs a family, so it stays open
    from .admodules import StablePair, tuple_from_module
    from .deform import INCONCLUSIVE, local_tangent_report
    t, vecs = tuple_from_module(pres)
    rep = local_tangent_report(StablePair(t, tuple(vecs)))
    tnt = rep.trivial_negative_tangents
    text = (f"K is not homogeneous: filtered Hom(K, M) = {rep.hom_total} "
            f"(nonnegative {rep.nonnegative}, negative {rep.negative})\n"
            f"negative tangents: {rep.negative} (n = {pres.n})\nTNT: {str(tnt).lower()}\n"
            f"smoothness: {INCONCLUSIVE} (no family supplied; see `witness --verify`)")
    return CommandResult(text, {"negative": rep.negative, "nonnegative": rep.nonnegative, "hom": rep.hom_total,
                                "n": pres.n, "tnt": tnt, "smoothness": INCONCLUSIVE, "route": "filtered"})


def cmd_obstruction(a):
    from .obstruct import ObstructionCalculator, obstruction_identities, obstruction_quadrics
    pres = _module(a.file)
    calc = ObstructionCalculator(pres)
    q = obstruction_quadrics(calc, a.degree)
    ids = obstruction_identities(calc, a.degree, seed=a.seed, max_pairs=a.pairs)
    f = q.field
    lines = [f"tangent block: degree {a.degree}, {q.nvars} variables",
             f"Ext^1 degree {2 * a.degree}: {len(q.quadrics)} quadrics",
             f"identities on {ids.pairs} pairs (seed {a.seed}): cocycle {ids.cocycle}, symmetry {ids.symmetry}, "
             f"lift independence {ids.lift_independence}, bilinearity {ids.bilinearity}, two routes {ids.two_routes}"]
    payload = {"seed": a.seed, "variables": q.nvars, "quadrics": len(q.quadrics), "identities": ids.__dict__ | {"ok": ids.ok}}
    if a.full:
        payload["quadricTerms"] = [[{"i": i + 1, "j": j + 1, "coeff": f.to_json(c)} for (i, j), c in sorted(qq.items())]
                                   for qq in q.quadrics]
        for k, qq in enumerate(q.quadrics):
            terms = " + ".join(f"{f.signed(c)}*t{i + 1}*t{j + 1}" for (i, j), c in sorted(qq.items()))
            lines.append(f"Q{k + 1} = {terms or '0'}")
    return CommandResult("\n".join(lines), payload, OK if ids.ok else FAILED)


def cmd_nonreduced(a):
    from .config import CertificateConfig, VerdictConfig
    from .obstruct import NONREDUCED, nonreducedness_verdict
    pres = _module(a.file)
    cfg = VerdictConfig(certificate=CertificateConfig(modular=not a.exact))
    rep = nonreducedness_verdict(pres, seed=a.seed, self_check=a.self_check, config=cfg)
    cert = rep.certificate
    lines = [f"seed: {a.seed}",
             f"linear generation (K generated in degree 1): {str(rep.assumption1).lower()}  betti_1 {rep.betti1}",
             f"tangent size (Hom total = 64): {str(rep.assumption2).lower()}  tangent {rep.tangent_total} {rep.tangent_dims}"]
    if cert is None:
        lines.append("obstruction dimension: not evaluated (needs the two checks above)")
    else:
        lines.append(f"obstruction dimension (cone dim <= {cert.targetDim}): {str(rep.assumption3).lower()}  "
                     f"vanishing degree {cert.vanishingDegree}, seed used {cert.seed}, "
                     f"Hilbert function {cert.hilbert}")
        if cert.selfCheck is not None:
            lines.append(f"self-check: {str(cert.selfCheck).lower()}")
    lines.append(f"obstruction dims: {rep.obstruction_dims}")
    if rep.bound is not None:
        lines.append(f"local dimension bound: {rep.bound} vs tangent {rep.tangent_total}")
    lines.append(f"verdict: {rep.verdict} ({rep.evidence})")
    payload = {"seed": a.seed, "assumption1": rep.assumption1, "betti1": {str(k): v for k, v in rep.betti1.items()},
               "assumption2": rep.assumption2, "tangentTotal": rep.tangent_total,
               "tangentDims": io.graded_dims_to_json(rep.tangent_dims), "assumption3": rep.assumption3,
               "obstructionDims": io.graded_dims_to_json(rep.obstruction_dims), "bound": rep.bound,
               "verdict": rep.verdict, "evidence": rep.evidence}
    if cert is not None:
        payload["certificate"] = {"targetDim": cert.targetDim, "linearFormsUsed": [list(x) for x in cert.linearFormsUsed],
                                  "vanishingDegree": cert.vanishingDegree, "seed": cert.seed,
                                  "verdict": cert.verdict, "hilbert": list(cert.hilbert),
                                  "selfCheck": cert.selfCheck, "attempts": cert.attempts}
    failed = cert is not None and cert.selfCheck is False
    return CommandResult("\n".join(lines), payload, FAILED if failed else OK)


def cmd_enumerate(a):
    from .catalog import enumerate_components, enumerate_quot_components
    count, comps = enumerate_components(a.n, a.d)
    if a.r is not None:
        comps = [c for c in comps if c.gens <= a.r]
        count = enumerate_quot_components(a.n, a.d, a.r)
        head = f"components of Quot (n={a.n}, d={a.d}, r={a.r}): {count}"
    else:
        head = f"components of C_n(M_d) (n={a.n}, d={a.d}): {count}"
    lines = [head]
    payload = {"n": a.n, "d": a.d, "r": a.r, "count": count}
    if a.list:
        lines += [c.label for c in comps]
        payload["components"] = [c.label for c in comps]
    return CommandResult("\n".join(lines), payload)


def cmd_witness(a):
    from .catalog import verify_witness, witness
    e = witness(a.name)
    lines = [f"{e.name}: {e.description}", f"n = {e.n}, d = {e.d}, r = {e.rank}"]
    payload = {"name": e.name, "n": e.n, "d": e.d, "r": e.rank, "hilbert": list(e.hilbert),
               "tangent": e.tangent, "quotDim": e.quot_dim}
    if e.tuple is not None:
        payload["tuple"] = io.tuple_to_json(e.tuple)
        payload["generators"] = [g + 1 for g in e.generators]
    if e.kgens:
        payload["module"] = io.module_to_json(e.module())
    code = OK
    if a.verify:
        rep = verify_witness(a.name)
        for k, (got, want) in rep.checks.items():
            mark = "ok" if got == want else "MISMATCH"
            shown = str(got).lower() if isinstance(got, bool) else got
            lines.append(f"{k}: {shown}  [{mark}]")
        payload["checks"] = {k: {"computed": _jsonable(g), "expected": _jsonable(w)} for k, (g, w) in rep.checks.items()}
        payload["ok"] = rep.ok
        code = OK if rep.ok else FAILED
    else:
        if e.tangent is not None:
            lines.append(f"tangent {e.tangent}")
        lines.append(f"Hilbert function {e.hilbert}")
    return CommandResult("\n".join(lines), payload, code)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def cmd_replay_tables(a):
    from .catalog import replay_tables
    rep = replay_tables()
    lines = ["Components of C_n(M_d)", "n\\d " + " ".join(f"{d:>4}" for d in range(1, 8))]
    for n in range(1, 8):
        cells = []
        for d in range(1, 8):
            got, want = rep.commuting[(n, d)]
            cells.append(f"{got:>4}" if got == want else f"{got}!{want}")
        lines.append(f"{n:>3} " + " ".join(cells))
    lines += ["", "Components of Quot for r = 1, 2, ... (until stable)"]
    for n in range(1, 8):
        cells = []
        for d in range(1, 8):
            got, want = rep.quot[(n, d)]
            s = ",".join(map(str, got))
            cells.append(s if got == want else f"{s}!{','.join(map(str, want))}")
        lines.append(f"n={n}: " + "  ".join(f"d{d}:{c}" for d, c in zip(range(1, 8), cells)))
    lines.append("all entries match" if rep.ok else f"mismatches: {rep.mismatches}")
    payload = {"commuting": [{"n": n, "d": d, "count": g, "expected": w} for (n, d), (g, w) in rep.commuting.items()],
               "quot": [{"n": n, "d": d, "counts": list(g), "expected": list(w)} for (n, d), (g, w) in rep.quot.items()],
               "ok": rep.ok}
    return CommandResult("\n".join(lines), payload, OK if rep.ok else FAILED)


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON payload instead of text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps (echoed)")
    common.add_argument("--full", action="store_true", help="include bases and other large outputs")

    p = argparse.ArgumentParser(prog="quotlab", description="Quot schemes of points and commuting matrices")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, file_arg=None):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if file_arg:
            sp.add_argument("file", help=file_arg)
        sp.set_defaults(func=func)
        return sp

    add("tangent", cmd_tangent, "tangent space dimension of C_n(M_d)", "tuple JSON")
    add("support", cmd_support, "support points of the module of a tuple", "tuple JSON")
    sp = add("module", cmd_module, "Quot point of a tuple with basis-vector generators", "tuple JSON")
    sp.add_argument("--gens", required=True, help="1-based basis indices, e.g. 3,4")
    sp.add_argument("--translate", action="store_true", help="move a one-point support to the origin")
    add("hilbert", cmd_hilbert, "Hilbert function", "module JSON")
    add("betti", cmd_betti, "graded Betti table", "module JSON")
    sp = sub.add_parser("apolar", parents=[common], help="K = annihilator of dual generators")
    sp.add_argument("--dual", required=True, help="dual generators JSON")
    sp.set_defaults(func=cmd_apolar)
    add("hom", cmd_hom, "graded Hom(K, M)", "module JSON")
    add("ext1", cmd_ext1, "graded Ext^1(K, M)", "module JSON")
    add("tnt", cmd_tnt, "trivial negative tangents and smoothness", "module JSON")
    sp = add("obstruction", cmd_obstruction, "obstruction quadrics and identity checks", "module JSON")
    sp.add_argument("--degree", type=int, default=-1, help="tangent degree (default -1)")
    sp.add_argument("--pairs", type=int, default=40, help="pairs sampled for identity checks")
    sp = add("nonreduced", cmd_nonreduced, "generic nonreducedness verdict for 4+4T modules", "module JSON")
    sp.add_argument("--self-check", action="store_true", help="re-check the certificate by brute force")
    sp.add_argument("--exact", action="store_true", help="rational elimination instead of modular rank")
    sp = sub.add_parser("enumerate", parents=[common], help="count components for d <= 7")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--r", type=int)
    sp.add_argument("--list", action="store_true")
    sp.set_defaults(func=cmd_enumerate)
    sp = sub.add_parser("witness", parents=[common], help="catalog witness data")
    sp.add_argument("name")
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(func=cmd_witness)
    sp = sub.add_parser("replay-tables", parents=[common], help="recompute the component tables")
    sp.set_defaults(func=cmd_replay_tables)
    return p


def run(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandResult("", {}, BAD_INPUT if exc.code else OK)
    try:
        res = args.func(args)
    except NotCommutingError as exc:
        i, j = exc.pair
        return CommandResult(f"error: input is not a commuting tuple: matrices {i + 1} and {j + 1} do not commute",
                             {"error": "not commuting", "pair": [i + 1, j + 1]}, BAD_INPUT)
    except (io.InputError, NotFoundError, OutOfCatalogError, QuotlabError, ValueError) as exc:
        return CommandResult(f"error: {exc}", {"error": str(exc)}, BAD_INPUT)
    if "seed" not in res.payload:
        res.payload = {"seed": args.seed} | res.payload
    res.payload["_json"] = args.json
    return res


def main(argv=None):
    res = run(sys.argv[1:] if argv is None else argv)
    as_json = res.payload.pop("_json", False)
    if as_json:
        print(io.dumps(res.payload))
    elif res.text:
        out = sys.stderr if res.code == BAD_INPUT else sys.stdout
        print(res.text, file=out)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
