"""Command-line front end.

Exit status: 0 all checks pass, 1 a verdict failed, 2 usage or parse error,
3 an enumeration budget was exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .approx import check_approx, compose
from .closure import check_ccc, enumerate_mappings_by_image, fct_st_iso, roundtrips
from .config import budget_from_env
from .core import InfoSystem, Verdict, check_alg, check_axioms, check_bc, check_gip
from .errors import BudgetExceeded, IswError, NotLDomain, ParseError, SystemMismatch, WellFormednessError
from .fixtures import FIXTURES
from .function_space import materialize_exponent
from .io import (export_dot, parse_mapping, parse_mapping_header, parse_poset, parse_system,
                 read_exponent_sidecar, serialize_mapping, serialize_system,
                 write_exponent)
from .posets import check_lpo, info_from_domain, order_iso
from .products import product
from .states import check_ldomain, enumerate_states
from .sweep import sweep_posets

OK, FAIL, USAGE, BUDGET = 0, 1, 2, 3


def _first_directive(text: str) -> str:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line.split()[0]
    return ""


def load_system(arg: str) -> InfoSystem:
    """A fixture name, a system file, or a poset file (converted to its system)."""
    path = Path(arg)
    if not path.exists():
        key = arg.upper()
        if key in FIXTURES:
            return FIXTURES[key]()
        raise ParseError(f"no such file or fixture: {arg}")
    text = path.read_text(encoding="utf-8")
    if _first_directive(text) == "poset":
        return info_from_domain(parse_poset(text))
    return parse_system(text)


def _resolve_near(name: str, base: Path) -> InfoSystem:
    for cand in (base / f"{name}.isw", base / f"{name.lower()}.isw"):
        if cand.exists():
            return parse_system(cand.read_text(encoding="utf-8"))
    return load_system(name)


def load_mapping(arg: str):
    path = Path(arg)
    text = path.read_text(encoding="utf-8")
    _, src, dst = parse_mapping_header(text)
    return parse_mapping(text, _resolve_near(src, path.parent), _resolve_near(dst, path.parent))


def _emit(lines):
    for line in lines:
        print(line)


def _status(verdicts) -> int:
    return OK if all(v.ok for v in verdicts) else FAIL


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args, budget) -> int:
    s = load_system(args.system)
    rep = check_axioms(s)
    print(f"{s!r}")
    _emit(rep.lines())
    if not rep.ok:
        return FAIL
    gip = check_gip(s)
    print(gip.line())
    print("info " + check_alg(s).line())
    print("info " + check_bc(s).line())
    return _status([gip])


def cmd_states(args, budget) -> int:
    s = load_system(args.system)
    sp = enumerate_states(s, budget)
    for st in sp.states:
        print(sp.labels[st])
    v = check_ldomain(sp)
    print(f"{len(sp)} states; {v.line()}")
    if args.dot:
        Path(args.dot).write_text(export_dot(sp), encoding="utf-8")
    return _status([v])


def cmd_from_poset(args, budget) -> int:
    p = parse_poset(Path(args.poset).read_text(encoding="utf-8"))
    v = check_lpo(p)
    if not v.ok:
        print(v.line())
        return FAIL
    s = info_from_domain(p)
    text = serialize_system(s)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    rep = check_axioms(s)
    iso = order_iso(p, enumerate_states(s, budget).as_poset()) is not None
    verdicts = list(rep.verdicts) + [Verdict("states isomorphic to poset", iso)]
    for v in verdicts:
        if not v.ok:
            print(v.line(), file=sys.stderr)
    return _status(verdicts)


def cmd_iso(args, budget) -> int:
    a, b = load_system(args.a), load_system(args.b)
    pa, pb = enumerate_states(a, budget).as_poset(), enumerate_states(b, budget).as_poset()
    m = order_iso(pa, pb)
    if m is None:
        print(f"FAIL state posets of {a.name} and {b.name} are not isomorphic")
        return FAIL
    for k in pa.elems:
        print(f"{k} -> {m[k]}")
    return OK


def cmd_product(args, budget) -> int:
    a, b = load_system(args.a), load_system(args.b)
    pr = product(a, b, budget)
    Path(args.output).write_text(serialize_system(pr.sys), encoding="utf-8")
    rep = check_axioms(pr.sys)
    print(f"{pr.sys!r}")
    _emit(v.line() for v in rep.failures())
    return _status(rep.verdicts)


def cmd_expo(args, budget) -> int:
    a, b = load_system(args.a), load_system(args.b)
    out = Path(args.output)
    side = out.with_suffix(out.suffix + ".tokens")
    if out.exists() and side.exists() and not args.materialize:
        s = parse_system(out.read_text(encoding="utf-8"))
        raw = sum(len(v) for v in read_exponent_sidecar(side).values())
        print(f"cached {s!r} ({raw} raw tokens)")
        return OK
    ex = materialize_exponent(a, b, budget)
    write_exponent(ex, out)
    print(f"{ex.system!r} from {len(ex.tokens)} raw tokens in {len(ex.classes)} classes")
    rep = check_axioms(ex.system)
    verdicts = list(rep.verdicts)
    if rep.ok:
        verdicts.append(check_gip(ex.system))
    _emit(v.line() for v in verdicts if not v.ok)
    return _status(verdicts)


def cmd_map_check(args, budget) -> int:
    h = load_mapping(args.mapping)
    rep = check_approx(h)
    _emit(rep.lines())
    return OK if rep.ok else FAIL


def cmd_compose(args, budget) -> int:
    h, g = load_mapping(args.first), load_mapping(args.second)
    if h.target != g.source:
        raise SystemMismatch(f"{h.name} ends in {h.target.name}, {g.name} starts in {g.source.name}")
    c = compose(h, g)
    Path(args.output).write_text(serialize_mapping(c), encoding="utf-8")
    rep = check_approx(c)
    _emit(v.line() for v in rep.failures())
    return OK if rep.ok else FAIL


def cmd_roundtrips(args, budget) -> int:
    a, b = load_system(args.a), load_system(args.b)
    ex = materialize_exponent(a, b, budget)
    maps = enumerate_mappings_by_image(a, b, budget)
    rt = roundtrips(ex, maps, budget)
    iso = fct_st_iso(ex, budget)
    print(f"{rt.states} exponent states, {rt.mappings} approximable mappings, {iso.functions} monotone functions")
    _emit([rt.st_am.line(), rt.am_st.line(), iso.verdict.line()])
    return _status([rt.st_am, rt.am_st, iso.verdict])


def cmd_check_ccc(args, budget) -> int:
    a, a1, a2 = load_system(args.a), load_system(args.b), load_system(args.c)
    rep = check_ccc(a, a1, a2, budget)
    _emit(rep.lines())
    return OK if rep.ok else FAIL


def cmd_sweep(args, budget) -> int:
    rep = sweep_posets(args.max_n, budget)
    print(f"{rep.generated} pointed posets, {rep.l_posets} L-posets, {rep.bounded_complete} bounded-complete")
    for r in rep.failures():
        print(f"{r.poset.name}: " + "; ".join(v.line() for v in r.verdicts if not v.ok))
    print("PASS sweep" if rep.ok else "FAIL sweep")
    return OK if rep.ok else FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isw", description="Finite information systems with witnesses.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the axioms and global interpolation")
    p.add_argument("system")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("states", help="list states and check the L-domain property")
    p.add_argument("system")
    p.add_argument("--dot", metavar="FILE")
    p.set_defaults(run=cmd_states)

    p = sub.add_parser("from-poset", help="system of a finite L-poset")
    p.add_argument("poset")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_from_poset)

    p = sub.add_parser("iso", help="order isomorphism between two state posets")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_iso)

    p = sub.add_parser("product", help="binary product")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(run=cmd_product)

    p = sub.add_parser("expo", help="function-space system, cached with a token sidecar")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--materialize", action="store_true", help="rebuild even when a cache exists")
    p.set_defaults(run=cmd_expo)

    p = sub.add_parser("map-check", help="check the approximable-mapping conditions")
    p.add_argument("mapping")
    p.set_defaults(run=cmd_map_check)

    p = sub.add_parser("compose", help="compose two mappings, first then second")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(run=cmd_compose)

    p = sub.add_parser("roundtrips", help="exponent states versus approximable mappings")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_roundtrips)

    p = sub.add_parser("check-ccc", help="currying equations for A x B -> C")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.set_defaults(run=cmd_check_ccc)

    p = sub.add_parser("sweep-posets", help="check every small pointed poset")
    p.add_argument("--max-n", type=int, default=5)
    p.set_defaults(run=cmd_sweep)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        budget = budget_from_env()
        return args.run(args, budget)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return BUDGET
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return USAGE
    except (WellFormednessError, SystemMismatch, NotLDomain, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except IswError as e:
        print(f"error: {e}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
