"""Command-line interface: ``relext -c CATEGORY.toml <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib

from . import defects as D
from . import oracle as O
from . import relative as R
from . import verify as V
from .backends import QuiverSpec, StmodSpec, build_quiver_category, build_stmod_category
from .category import BasedCategory, CategoryError, Obj


class InputError(Exception):
    pass


def _read_document(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        if path.suffix == ".json":
            return json.loads(text)
        return tomllib.loads(text)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: parse error: {exc}") from exc


def category_from_spec(doc: dict) -> BasedCategory:
    known = {"backend", "n", "p", "orientation"}
    extra = set(doc) - known
    if extra:
        raise InputError(f"unknown keys in category spec: {sorted(extra)}")
    backend = doc.get("backend")
    try:
        if backend in ("quiverA", "quiver"):
            return build_quiver_category(QuiverSpec(doc.get("n"), doc.get("orientation", ""), doc.get("p", 2)))
        if backend == "stmod":
            if "orientation" in doc:
                raise InputError("the stmod backend takes no orientation")
            return build_stmod_category(StmodSpec(doc.get("n"), doc.get("p", 2)))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"backend must be 'quiverA' or 'stmod', got {backend!r}")


def load_category(path: str | Path) -> BasedCategory:
    return category_from_spec(_read_document(path))


def load_subfunctor(cat: BasedCategory, path: str | Path) -> R.Subfunctor:
    """Read ``[[pair]]`` tables with keys ``c``, ``a`` and ``basis`` (list of vectors)."""
    doc = _read_document(path)
    bases: dict = {}
    for entry in doc.get("pair", []):
        try:
            j, i = cat.index(entry["c"]), cat.index(entry["a"])
        except KeyError as exc:
            raise InputError(f"pair entry missing key {exc}") from exc
        dim = cat.ext_dim(j, i)
        for v in entry.get("basis", []):
            if not isinstance(v, list) or len(v) != dim or not all(isinstance(x, int) for x in v):
                raise InputError(f"E({entry['c']},{entry['a']}) needs integer vectors of length {dim}, got {v!r}")
            bases.setdefault((j, i), []).append(v)
    return R.Subfunctor.from_bases(cat, bases)


# ---------------------------------------------------------------------------
# formatting


def _table(rows: list[str], cols: list[str], cell) -> str:
    width = max(len(x) for x in rows + cols) + 1
    out = [" " * width + "".join(c.rjust(width) for c in cols)]
    for r, name in enumerate(rows):
        out.append(name.ljust(width) + "".join(str(cell(r, c)).rjust(width) for c in range(len(cols))))
    return "\n".join(out)


def subfunctor_json(f: R.Subfunctor) -> list[dict]:
    cat = f.cat
    return [{"c": cat.name(j), "a": cat.name(i), "basis": f.spaces[j, i].matrix.tolist()}
            for j, i in cat.pairs() if f.spaces[j, i].dim]


def subfunctor_toml(f: R.Subfunctor) -> str:
    parts = []
    for e in subfunctor_json(f):
        parts.append(f'[[pair]]\nc = "{e["c"]}"\na = "{e["a"]}"\nbasis = {e["basis"]}\n')
    return "\n".join(parts) if parts else "# zero subfunctor\n"


def _elem(d) -> str:
    cat = d.cat
    return f"E({cat.obj_name(d.c_obj)},{cat.obj_name(d.a_obj)}) {d.coords.tolist()}"


def _dims(cat: BasedCategory, dims) -> dict[str, int]:
    return {cat.name(i): int(x) for i, x in enumerate(dims)}


def _names(cat: BasedCategory, text: str) -> list[int]:
    # commas inside brackets belong to interval names such as [1,2]
    return [cat.index(x) for x in re.findall(r"\[[^\]]*\]|[^,\s]+", text)]


# ---------------------------------------------------------------------------
# commands


def cmd_info(cat: BasedCategory, args) -> int:
    names = [cat.name(i) for i in range(cat.n)]
    print(f"category: {cat.label} over F_{cat.p}")
    print("indecomposables: " + ", ".join(n + ("*" if cat.indecs[i].is_projective else "")
                                          for i, n in enumerate(names)))
    print("projectives (*): " + (", ".join(cat.name(i) for i in cat.projectives) or "none"))
    print("\ndim Hom(row, column):")
    print(_table(names, names, lambda r, c: cat.hom_dim[r, c]))
    print("\ndim E(row, column):")
    print(_table(names, names, lambda r, c: cat.ext_dim(r, c)))
    return 0


def cmd_ext_table(cat: BasedCategory, args) -> int:
    names = [cat.name(i) for i in range(cat.n)]
    if args.format == "json":
        ext = [[int(cat.ext_dim(j, i)) for i in range(cat.n)] for j in range(cat.n)]
        print(json.dumps({"objects": names, "ext": ext}))
    else:
        print(_table(names, names, lambda r, c: cat.ext_dim(r, c)))
    return 0


def cmd_closed(cat: BasedCategory, args) -> int:
    entries = D.enumerate_closed(cat, bound=args.bound)
    edges = D.covering_edges(entries)
    if args.format == "json":
        print(json.dumps({
            "nodes": [{"id": k, "serre": [cat.name(x) for x in e.serre.sorted()],
                       "subfunctor": subfunctor_json(e.subfunctor)} for k, e in enumerate(entries)],
            "edges": [list(e) for e in edges],
        }, indent=1))
    elif args.format == "dot":
        print("digraph closed {")
        print("  rankdir=BT;")
        for k, e in enumerate(entries):
            print(f'  n{k} [label="{e.serre.label(cat)}"];')
        for a, b in edges:
            print(f"  n{a} -> n{b};")
        print("}")
    else:
        for k, e in enumerate(entries):
            dims = sum(s.dim for s in e.subfunctor.spaces.values())
            print(f"{k}: F({e.serre.label(cat)}) total dim {dims}")
        print(f"{len(entries)} closed subfunctors")
    return 0


def cmd_subfunctor_check(cat: BasedCategory, args) -> int:
    f = load_subfunctor(cat, args.file)
    rep = R.validate_subfunctor(f)
    if not rep.ok:
        print("additive: no")
        for v in rep.violations[:10]:
            print(f"  {v}")
        return 1
    print("additive: yes")
    s = D.support(f)
    print(f"support: {s.label(cat)}")
    w = R.composition_falsifier(f, args.bound)
    closed = R.is_closed(f, args.bound)
    print(f"closed: {'yes' if closed else 'no'}")
    if w is not None:
        print("counterexample (deflations that do not compose):")
        print(f"  outer     {_elem(w.outer)}")
        print(f"  inner     {_elem(w.inner)}")
        print(f"  composite {_elem(w.composite)} not in F")
    return 0 if closed else 1


def cmd_relative(cat: BasedCategory, args) -> int:
    if args.yoneda is not None:
        f = R.e_r(cat, R.restricted_yoneda(cat, _names(cat, args.yoneda)))
    elif args.co_yoneda is not None:
        f = R.e_r(cat, R.restricted_coyoneda(cat, _names(cat, args.co_yoneda)))
    elif args.projectivize is not None:
        f = R.e_r(cat, D.projectivization(cat, _names(cat, args.projectivize)))
    else:
        f = R.e_exact(cat)
    if args.format == "json":
        print(json.dumps({"support": [cat.name(x) for x in D.support(f).sorted()],
                          "closed": R.is_closed(f), "pairs": subfunctor_json(f)}))
    else:
        print(f"# support {D.support(f).label(cat)}, closed: {R.is_closed(f)}")
        print(subfunctor_toml(f), end="")
    return 0


def cmd_defect(cat: BasedCategory, args) -> int:
    c, a = Obj.of(cat.index(args.c)), Obj.of(cat.index(args.a))
    try:
        coords = [int(x) for x in args.coords]
    except ValueError as exc:
        raise InputError(f"coordinates must be integers: {args.coords}") from exc
    d = cat.ext_elem(c, a, coords)
    contra = D.defect_of(d)
    co = D.co_defect_of(d)
    factors = D.composition_factors(contra.underlying)
    report = {
        "extension": _elem(d),
        "middle": cat.obj_name(contra.triangle.b),
        "contravariant": _dims(cat, contra.underlying.dims),
        "covariant": _dims(cat, co.dims),
        "composition_factors": {cat.name(i): m for i, m in factors.items()},
    }
    if args.format == "json":
        print(json.dumps(report))
    else:
        for k, v in report.items():
            print(f"{k}: {v}")
    return 0


def cmd_verify(cat: BasedCategory | None, args) -> int:
    failed = False
    if cat is None:
        for k in sorted(V.FAMILIES):
            out = V.criterion(k, seed=args.seed)
            print(out.summary())
            if args.verbose:
                print("\n".join(out.lines))
            failed |= not out.passed
    else:
        for res in V.run_all(cat, seed=args.seed):
            print(f"check {res.criterion:2d} [{res.status.upper()}] {V.TITLES[res.criterion]}: {res.detail}")
            for line in res.failures[: 5 if not args.verbose else None]:
                print(f"    {line}")
            failed |= not res.ok
    return 1 if failed else 0


def cmd_oracle(cat: BasedCategory, args) -> int:
    try:
        rep = O.oracle_closed(cat, cap=args.cap, bound=args.bound)
    except O.OracleTooLarge as exc:
        raise InputError(str(exc)) from exc
    theory = {e.subfunctor for e in D.enumerate_closed(cat, check=False)}
    agree = set(rep.closed) == theory
    print(f"search space: {O.search_space_size(cat)} families")
    print(f"additive subfunctors: {len(rep.additive)}")
    print(f"closed (composition search, bound {args.bound}): {len(rep.closed)}")
    print(f"closed (Serre sets): {len(theory)}")
    print(f"agreement: {'yes' if agree else 'no'}")
    for k in sorted(rep.witnesses):
        print(f"  non-closed #{k}: support {D.support(rep.additive[k]).label(cat)}, "
              f"dims {sum(s.dim for s in rep.additive[k].spaces.values())}")
    return 0 if agree else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relext", description="Relative extriangulated structures on small categories.")
    ap.add_argument("-c", "--category", help="category spec (TOML or JSON)")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("info", help="objects, projectives, Hom and E tables")

    p = sub.add_parser("ext-table", help="matrix of dim E(I_j, I_i)")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("closed", help="closed subfunctors")
    p.add_argument("action", choices=["enumerate"])
    p.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p.add_argument("--bound", type=int, default=3)

    p = sub.add_parser("subfunctor", help="check a subfunctor file")
    p.add_argument("action", choices=["check"])
    p.add_argument("file")
    p.add_argument("--bound", type=int, default=3)

    p = sub.add_parser("relative", help="E_R of a half exact functor")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--yoneda", metavar="X1,X2,...")
    g.add_argument("--co-yoneda", metavar="X1,X2,...")
    g.add_argument("--projectivize", metavar="S")
    g.add_argument("--exact", action="store_true")
    p.add_argument("--format", choices=["toml", "json"], default="toml")

    p = sub.add_parser("defect", help="defects of an extension")
    p.add_argument("--ext", nargs=2, metavar=("C", "A"), required=True)
    p.add_argument("coords", nargs="*")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("action", choices=["all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("oracle", help="brute-force enumeration")
    p.add_argument("action", choices=["enumerate"])
    p.add_argument("--cap", type=int, default=200_000)
    p.add_argument("--bound", type=int, default=3)
    return ap


COMMANDS = {
    "info": cmd_info, "ext-table": cmd_ext_table, "closed": cmd_closed,
    "subfunctor": cmd_subfunctor_check, "relative": cmd_relative, "defect": cmd_defect,
    "verify": cmd_verify, "oracle": cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "defect":
            args.c, args.a = args.ext
        if getattr(args, "bound", 1) < 1 or getattr(args, "cap", 1) < 1:
            raise InputError("--bound and --cap must be positive")
        if args.category is None:
            if args.command != "verify":
                raise InputError("--category is required for this command")
            cat = None
        else:
            cat = load_category(args.category)
        return COMMANDS[args.command](cat, args)
    except (InputError, CategoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
