"""Command-line interface.

Exit codes: 0 success, 1 computed negative answer (not homogeneous, no
amalgam found, a failed check), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import BandMap, FiniteBand, validate_table
from .errors import BandError, ParseError

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# -- band documents --------------------------------------------------------


def parse_band_document(text: str) -> FiniteBand:
    """Parse a plain-text or JSON band document and validate it."""
    stripped = text.strip()
    if not stripped:
        raise ParseError(1, 1, "empty document")
    if stripped[0] == "{":
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, exc.colno, exc.msg) from None
        return band_from_json(doc)
    lines = [ln for ln in text.split("\n")]
    rows = []
    n = None
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        toks = line.split()
        vals = []
        col = 1
        for tok in toks:
            col = line.index(tok, col - 1) + 1
            try:
                vals.append(int(tok))
            except ValueError:
                raise ParseError(lineno, col, f"not an integer: {tok!r}") from None
            col += len(tok)
        if n is None:
            if len(vals) != 1 or vals[0] < 0:
                raise ParseError(lineno, 1, "first line must be the order n")
            n = vals[0]
            continue
        if len(vals) != n:
            raise ParseError(lineno, 1, f"expected {n} entries, got {len(vals)}")
        rows.append(vals)
    if n is None:
        raise ParseError(1, 1, "missing order")
    if len(rows) != n:
        raise ParseError(len(lines), 1, f"expected {n} rows, got {len(rows)}")
    return validate_table(n, rows)


def band_from_json(doc) -> FiniteBand:
    if not isinstance(doc, dict) or "table" not in doc:
        raise ParseError(1, 1, "band document needs 'n' and 'table'")
    table = doc["table"]
    n = doc.get("n", len(table))
    if not isinstance(n, int) or not isinstance(table, list):
        raise ParseError(1, 1, "bad 'n' or 'table'")
    for i, row in enumerate(table):
        if not isinstance(row, list) or not all(isinstance(v, int) for v in row):
            raise ParseError(i + 1, 1, "table rows must be integer lists")
    return validate_table(n, table, doc.get("labels"))


def band_to_json(B: FiniteBand) -> dict:
    doc = {"n": B.size, "table": [list(r) for r in B.table]}
    if B.labels:
        doc["labels"] = list(B.labels)
    return doc


def band_to_text(B: FiniteBand) -> str:
    return "\n".join([str(B.size)] + [" ".join(map(str, r)) for r in B.table]) + "\n"


def _read_band(path: str) -> FiniteBand:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_band_document(text)


def _read_json(arg: str):
    """Inline JSON or a path to a JSON file."""
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        try:
            text = Path(arg).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from None


# -- DOT -------------------------------------------------------------------


def _hasse_edges(n, leq):
    edges = []
    for a in range(n):
        for b in range(n):
            if a != b and leq(a, b):
                if not any(c not in (a, b) and leq(a, c) and leq(c, b) for c in range(n)):
                    edges.append((a, b))
    return edges


def export_dot(B: FiniteBand, mode: str) -> str:
    """Hasse diagram as a DOT digraph, edges from lower to upper."""
    from .structure import mclean_decompose

    if mode == "order":
        t = B.table
        names = [f"n{e}" for e in range(B.size)]
        labels = [B.label(e) for e in range(B.size)]
        edges = _hasse_edges(B.size, lambda a, b: t[a][b] == a and t[b][a] == a)
        title = "band"
    elif mode == "semilattice":
        dec = mclean_decompose(B)
        t = dec.Y.table
        names = [f"c{a}" for a in range(dec.Y.size)]
        labels = [f"{a}: {n}x{m}" for a, (n, m) in enumerate(dec.class_dims)]
        edges = _hasse_edges(dec.Y.size, lambda a, b: t[a][b] == a)
        title = "structure_semilattice"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out = [f"digraph {title} {{", "  rankdir=BT;"]
    for name, label in zip(names, labels):
        out.append(f'  {name} [label="{label}"];')
    for a, b in edges:
        out.append(f"  {names[a]} -> {names[b]};")
    out.append("}")
    return "\n".join(out) + "\n"


# -- commands --------------------------------------------------------------


def _witness_json(w):
    if w is None:
        return None
    return {
        "dom": list(w.dom),
        "image": list(w.image),
        "pi_hat": list(w.pi_hat) if w.pi_hat is not None else None,
    }


def cmd_validate(args):
    B = _read_band(args.band)
    return EXIT_OK, {"command": "validate", "ok": True, "n": B.size}, f"ok: band of order {B.size}"


def cmd_analyze(args):
    from .green import compute_green
    from .structure import mclean_decompose
    from .varieties import variety_profile

    B = _read_band(args.band)
    g = compute_green(B)
    dec = mclean_decompose(B)
    prof = variety_profile(B).as_dict()
    data = {
        "command": "analyze",
        "n": B.size,
        "R": list(g.R),
        "L": list(g.L),
        "D": list(g.D),
        "Y": band_to_json(FiniteBand(dec.Y.size, dec.Y.table)),
        "dims": [list(d) for d in dec.class_dims],
        "varieties": prof,
    }
    dims = ", ".join(f"({n},{m})" for n, m in dec.class_dims)
    text = "\n".join([
        f"order: {B.size}",
        f"R classes: {[list(c) for c in g.r_classes()]}",
        f"L classes: {[list(c) for c in g.l_classes()]}",
        f"D classes: {[list(c) for c in g.d_classes()]}",
        f"|Y|={dec.Y.size}",
        f"dims: {dims}",
        "varieties: " + " ".join(f"{k}={'true' if v else 'false'}" for k, v in prof.items()),
    ])
    return EXIT_OK, data, text


def cmd_homog(args):
    from .homogeneity import is_homogeneous, is_k_homogeneous, is_structure_homogeneous

    B = _read_band(args.band)
    if args.structure:
        res = is_structure_homogeneous(B)
        kind = "structure-homogeneous"
    elif args.k is not None:
        res = is_k_homogeneous(B, args.k)
        kind = f"{args.k}-homogeneous"
    else:
        res = is_homogeneous(B)
        kind = "homogeneous"
    data = {
        "command": "homog",
        "mode": "structure" if args.structure else ("k" if args.k is not None else "full"),
        "k": args.k,
        "homogeneous": res.ok,
        "witness": _witness_json(res.witness),
    }
    if res.ok:
        text = f"{kind}: yes"
    else:
        text = f"{kind}: no, witness {res.witness.describe(B)} does not extend"
    return (EXIT_OK if res.ok else EXIT_NEGATIVE), data, text


def cmd_classify(args):
    from .homogeneity import classify_finite

    B = _read_band(args.band)
    v = classify_finite(B)
    data = {
        "command": "classify",
        "homogeneous": v.homogeneous,
        "verdict": str(v),
        "dims": list(v.dims) if v.dims else None,
        "witness": _witness_json(v.witness),
    }
    return (EXIT_OK if v.homogeneous else EXIT_NEGATIVE), data, str(v)


def _semilattice_from_recipe(r) -> FiniteBand:
    from .constructors import build_semilattice_band

    if "table" in r:
        return band_from_json(r)
    return build_semilattice_band(int(r["n"]), [tuple(p) for p in r.get("order", [])])


def _strong_spec_from_recipe(r):
    from .structure import StrongSemilatticeSpec

    Y = _semilattice_from_recipe(r["Y"])
    dims = tuple(tuple(d) for d in r["dims"])
    psi = {}
    for a in range(Y.size):
        psi[(a, a)] = tuple(range(dims[a][0] * dims[a][1]))
    for entry in r.get("psi", []):
        psi[(int(entry["from"]), int(entry["to"]))] = tuple(entry["map"])
    return StrongSemilatticeSpec(Y, dims, psi)


def build_from_recipe(kind: str, recipe: dict) -> FiniteBand:
    from . import constructors as c

    try:
        if kind == "rect":
            return c.build_rectangular(int(recipe["n"]), int(recipe["m"]))
        if kind == "semilattice":
            return _semilattice_from_recipe(recipe)
        if kind == "strong":
            spec = _strong_spec_from_recipe(recipe)
            c.validate_strong_spec(spec)
            return c.build_strong(spec)
        if kind == "spined":
            Lb = band_from_json(recipe["left"])
            Rb = band_from_json(recipe["right"])
            Y = _semilattice_from_recipe(recipe["Y"])
            return c.build_spined(
                Lb, Rb, BandMap(Lb, Y, tuple(recipe["left_to_y"])), BandMap(Rb, Y, tuple(recipe["right_to_y"]))
            )
        if kind == "direct":
            return c.build_direct(_semilattice_from_recipe(recipe["Y"]), int(recipe["n"]), int(recipe["m"]))
        if kind == "image-trivial":
            tree = c.SemilinearTruncation(tuple(recipe["parent"]))
            assign = {int(k): int(v) for k, v in recipe["assign"].items()}
            spec = c.build_image_trivial_truncation(
                tree, int(recipe["n"]), int(recipe["m"]), int(recipe["k"]), assign
            )
            return c.build_strong(spec)
        if kind == "chain":
            return c.build_d_covering_chain(int(recipe["levels"]), int(recipe["n"]), int(recipe["m"]))
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"bad recipe for {kind}: {exc!r}") from None
    raise InputError(f"unknown construction {kind!r}")


POSITIONAL_RECIPES = {"rect": ("n", "m"), "chain": ("levels", "n", "m")}


def cmd_construct(args):
    if args.spec is not None:
        recipe = _read_json(args.spec)
    else:
        names = POSITIONAL_RECIPES.get(args.kind)
        if names is None or len(args.params) != len(names):
            raise InputError(f"construct {args.kind} needs --spec"
                             + (f" or {len(names)} integers" if names else ""))
        recipe = dict(zip(names, args.params))
    B = build_from_recipe(args.kind, recipe)
    B = validate_table(B.size, B.table, B.labels)
    return EXIT_OK, band_to_json(B), band_to_text(B).rstrip("\n")


def cmd_enumerate(args):
    from .catalog import BandCatalog, analysis_props, catalog_store
    from .enumeration import enumerate_bands

    try:
        bands = enumerate_bands(args.order)
    except BandError as exc:
        raise InputError(str(exc)) from None
    if args.out:
        cat = BandCatalog(bands={args.order: bands})
        for i, B in enumerate(bands):
            cat.props[(args.order, i)] = analysis_props(B, homogeneity=False)
        catalog_store(cat, args.out)
    data = {"command": "enumerate", "order": args.order, "count": len(bands), "out": args.out}
    return EXIT_OK, data, f"order {args.order}: {len(bands)} bands"


def cmd_verify_suite(args):
    from .catalog import build_catalog
    from .lemmas import verify_lemma_suite

    cat = build_catalog(args.max_order, homogeneity_max_order=min(args.max_order, 5))
    rep = verify_lemma_suite(cat, args.max_order)
    data = {
        "command": "verify-suite",
        "max_order": args.max_order,
        "ok": rep.ok,
        "checks": [
            {"name": r.name, "passed": r.passed, "checked": r.checked, "witness": r.witness}
            for r in rep.results
        ],
    }
    return (EXIT_OK if rep.ok else EXIT_NEGATIVE), data, "\n".join(rep.lines())


def problem_from_json(doc):
    from .fraisse import AmalgamationProblem

    try:
        return AmalgamationProblem(
            band_from_json(doc["A"]),
            band_from_json(doc["B1"]),
            band_from_json(doc["B2"]),
            tuple(doc["f1"]),
            tuple(doc["f2"]),
            doc.get("class", "AllBands"),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad problem document: {exc!r}") from None


def cmd_amalgamate(args):
    from .fraisse import NotFoundWithinBound, amalgamate

    p = problem_from_json(_read_json(args.problem))
    try:
        am = amalgamate(p, args.bound, exhaustive_limit=args.exhaustive_limit)
    except NotFoundWithinBound as exc:
        data = {"command": "amalgamate", "found": False, "D": None, "g1": None, "g2": None,
                "method": None, "bound": args.bound, "complete_up_to": exc.args[1]}
        text = (f"no amalgam within {args.bound} (complete search up to order {exc.args[1]}); "
                "bounded evidence only")
        return EXIT_NEGATIVE, data, text
    data = {"command": "amalgamate", "found": True, "D": band_to_json(am.D), "g1": list(am.g1),
            "g2": list(am.g2), "method": am.method, "bound": args.bound,
            "complete_up_to": min(args.bound, args.exhaustive_limit)}
    text = f"amalgam of order {am.D.size} ({am.method}); g1={list(am.g1)} g2={list(am.g2)}\n"
    text += band_to_text(am.D).rstrip("\n")
    return EXIT_OK, data, text


def cmd_fraisse(args):
    from .errors import BudgetExhausted
    from .fraisse import CLASS_VARIETY, StageChain, audit_extension_property, chain_load, chain_store, grow_stage

    if args.cls not in CLASS_VARIETY:
        raise InputError(f"unknown class {args.cls!r}")
    if args.chain and Path(args.chain).exists():
        chain = chain_load(args.chain)
        if chain.class_constraint != args.cls:
            raise InputError(f"chain class {chain.class_constraint} differs from --class {args.cls}")
    else:
        start = _read_band(args.start) if args.start else validate_table(1, [[0]])
        chain = StageChain.start(start, args.cls, pattern_size=args.k)
    if args.action == "grow":
        exhausted = None
        for _ in range(args.stages):
            before = len(chain.stages)
            try:
                grow_stage(chain, args.budget)
            except BudgetExhausted as exc:
                exhausted = exc
                break
            if len(chain.stages) == before:
                break
        if args.chain:
            chain_store(chain, args.chain)
        data = {"command": "fraisse-grow", "class": args.cls,
                "stages": [S.size for S in chain.stages], "patterns": len(chain.log),
                "budget_exhausted": exhausted is not None}
        text = f"stages: {[S.size for S in chain.stages]}; patterns handled: {len(chain.log)}"
        if exhausted is not None:
            text += f"\nstopped: {exhausted}"
        return (EXIT_NEGATIVE if exhausted else EXIT_OK), data, text
    rep = audit_extension_property(chain, args.k)
    data = {"command": "fraisse-audit", "class": args.cls, "k": args.k, "stage": rep.stage,
            "types": len(rep.entries), "realized": len(rep.realized), "full": len(rep.full),
            "pending": len(rep.pending), "complete": rep.complete}
    return EXIT_OK, data, "\n".join(rep.lines())


def cmd_export_dot(args):
    B = _read_band(args.band)
    text = export_dot(B, args.mode)
    return EXIT_OK, None, text.rstrip("\n")


# -- dispatch --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bandkit", description="Finite band toolkit")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def band_cmd(name, func, help):
        s = sub.add_parser(name, help=help)
        s.add_argument("band", nargs="?", default="-", help="band document path, or - for stdin")
        s.set_defaults(func=func)
        return s

    band_cmd("validate", cmd_validate, "check the band axioms")
    band_cmd("analyze", cmd_analyze, "Green's relations, decomposition and varieties")
    s = band_cmd("homog", cmd_homog, "homogeneity check")
    s.add_argument("--k", type=int)
    s.add_argument("--structure", action="store_true")
    band_cmd("classify", cmd_classify, "finite homogeneity classification")

    s = sub.add_parser("construct", help="build a band from a recipe")
    s.add_argument("kind", choices=["rect", "semilattice", "strong", "spined", "direct", "image-trivial", "chain"])
    s.add_argument("params", nargs="*", type=int)
    s.add_argument("--spec", help="JSON recipe, inline or a file path")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("enumerate", help="bands of one order up to isomorphism")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("verify-suite", help="run the structural checks over the catalogue")
    s.add_argument("--max-order", type=int, required=True)
    s.set_defaults(func=cmd_verify_suite)

    s = sub.add_parser("amalgamate", help="solve an amalgamation problem")
    s.add_argument("--problem", required=True)
    s.add_argument("--bound", type=int, default=32)
    s.add_argument("--exhaustive-limit", type=int, default=7)
    s.set_defaults(func=cmd_amalgamate)

    s = sub.add_parser("fraisse", help="grow or audit a stage chain")
    s.add_argument("action", choices=["grow", "audit"])
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--chain", help="stage chain file, read if present and written after grow")
    s.add_argument("--start", help="band document for the first stage (default: one point)")
    s.add_argument("--stages", type=int, default=1)
    s.add_argument("--budget", type=int, default=64)
    s.add_argument("--k", type=int, default=2)
    s.set_defaults(func=cmd_fraisse)

    s = sub.add_parser("export-dot", help="Hasse diagram in DOT")
    s.add_argument("mode", choices=["order", "semilattice"])
    s.add_argument("band", nargs="?", default="-")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    want_json = argv is not None and "--json" in argv or argv is None and "--json" in sys.argv[1:]
    try:
        args = build_parser().parse_args(argv)
        code, data, text = args.func(args)
    except (BandError, InputError) as exc:
        msg = str(exc)
        if want_json:
            print(json.dumps({"error": msg}), file=stdout)
        print(f"error: {msg}", file=stderr)
        return EXIT_INPUT
    if args.json and data is not None:
        print(json.dumps(data, sort_keys=True), file=stdout)
    else:
        print(text, file=stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
