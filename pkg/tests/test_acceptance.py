"""The nine acceptance criteria, one test each, with wall-clock limits.

Each test prints a single PASS/FAIL line; the lines are repeated in the
terminal summary.
"""
import pytest

import oracles
from acceptance_log import criterion
from mutations import single_edit_mutations
from isw.cli import BUDGET, main
from isw.closure import check_ccc, enumerate_mappings_by_image, fct_st_iso, roundtrips, st_raw
from isw.core import AXIOMS, check_alg, check_axioms, check_bc, check_gip, subsets
from isw.errors import BudgetExceeded
from isw.fixtures import bfly, flat2, term
from isw.function_space import Arrow, materialize_exponent, materialize_raw
from isw.posets import info_from_domain, pointed_posets, check_lpo
from isw.products import pairing, product, terminal, terminal_mediator
from isw.approx import compose
from isw.states import check_ldomain, enumerate_states, local_lub, way_below
from isw.sweep import sweep_posets

FIXTURES = (term, flat2, bfly)
EXP_PAIRS = ((term, term), (term, flat2), (flat2, term))
_EXPS = {}


def exponent(src, dst):
    key = (src.__name__, dst.__name__)
    if key not in _EXPS:
        _EXPS[key] = materialize_exponent(src(), dst())
    return _EXPS[key]


def test_criterion_1_axiom_suite():
    with criterion(1, "fixtures pass the axioms and GIP; single-edit mutations are caught", 1.0) as notes:
        for f in FIXTURES:
            s = f()
            assert check_axioms(s).ok and check_gip(s).ok, s.name
            muts = single_edit_mutations(s)
            failing = 0
            for desc, m in muts:
                rep = check_axioms(m)
                if rep.ok:
                    # a surviving mutation must really be a valid system
                    assert all(oracles.axiom_verdicts(m)), desc
                    continue
                failing += 1
                for v in rep.failures():
                    ax = next(a for a in AXIOMS if a.name == v.name)
                    assert not ax.holds(m, *v.counterexample), (desc, v)
            need = min(20, len(muts))
            assert failing >= need, (s.name, failing, need)
            notes.append(f"{s.name} {failing}/{len(muts)} caught")


def test_criterion_2_poset_sweep():
    with criterion(2, "every L-poset with at most 5 elements is represented faithfully", 60.0) as notes:
        rep = sweep_posets(5)
        assert rep.generated == 25
        assert rep.ok, [r.poset.name for r in rep.failures()]
        notes.append(f"{rep.generated} posets, {rep.l_posets} L-posets, {rep.bounded_complete} bounded-complete")


def test_criterion_3_l_domains_and_way_below():
    with criterion(3, "state posets are L-domains; way-below matches; butterfly has two local lubs", 10.0) as notes:
        systems = [f() for f in FIXTURES]
        systems += [info_from_domain(p) for p in pointed_posets(5) if check_lpo(p).ok]
        for s in systems:
            sp = enumerate_states(s)
            assert check_ldomain(sp).ok, s.name
            by_entail = {(x, y) for x in sp.states for y in sp.states if way_below(sp, x, y)}
            assert by_entail == sp.way_below_order, s.name
        b = bfly()
        sp = enumerate_states(b)
        x, y = frozenset({"bot", "x"}), frozenset({"bot", "y"})
        zp, zq = frozenset({"bot", "x", "y", "p"}), frozenset({"bot", "x", "y", "q"})
        assert local_lub(b, sp, x, y, zp) != local_lub(b, sp, x, y, zq)
        notes.append(f"{len(systems)} systems")


def test_criterion_4_exponents_are_systems(tmp_path, capsys):
    with criterion(4, "materialised exponents pass the axioms and GIP; oversized ones stop with exit 3", 600.0) as notes:
        for src, dst in EXP_PAIRS:
            ex = exponent(src, dst)
            assert check_axioms(ex.system).ok and check_gip(ex.system).ok, ex.system.name
            notes.append(f"{ex.system.name} {len(ex.classes)} classes")
        for src, dst in ((flat2, flat2), (term, bfly), (bfly, term)):
            with pytest.raises(BudgetExceeded):
                materialize_exponent(src(), dst())
        assert main(["expo", "term", "bfly", "-o", str(tmp_path / "x.isw")]) == BUDGET
        capsys.readouterr()


def test_criterion_5_state_mapping_bijection():
    with criterion(5, "St and am are inverse on all states and mappings", 600.0) as notes:
        for src, dst in EXP_PAIRS:
            ex = exponent(src, dst)
            rt = roundtrips(ex, enumerate_mappings_by_image(src(), dst()))
            assert rt.ok, (rt.st_am, rt.am_st)
            assert rt.states == rt.mappings
            notes.append(f"{src().name}->{dst().name} {rt.states}")


def test_criterion_6_function_space_isomorphism():
    with criterion(6, "fct and st are inverse order isomorphisms", 600.0) as notes:
        for src, dst in EXP_PAIRS:
            rep = fct_st_iso(exponent(src, dst))
            assert rep.ok, rep.verdict
            notes.append(f"{src().name}->{dst().name} {rep.states}")
        assert fct_st_iso(exponent(term, flat2)).functions == 3


def test_criterion_7_alg_and_bc_inherited():
    with criterion(7, "ALG and BC carry over to the exponents", 600.0) as notes:
        for src, dst in EXP_PAIRS:
            a, b = src(), dst()
            ex = exponent(src, dst)
            if check_alg(a).ok and check_alg(b).ok:
                assert check_alg(ex.system).ok
            if check_bc(b).ok:
                assert check_bc(ex.system).ok
            notes.append(f"{ex.system.name} ok")


def _product_universal(src, a1, a2):
    prod = product(a1, a2)
    cands = enumerate_mappings_by_image(src, prod.sys)
    for f in enumerate_mappings_by_image(src, a1):
        for g in enumerate_mappings_by_image(src, a2):
            h = pairing(f, g, prod)
            hits = [k for k in cands if compose(k, prod.pr1) == f and compose(k, prod.pr2) == g]
            assert hits == [h]


def test_criterion_8_terminal_products_and_currying():
    with criterion(8, "terminal, product and currying laws hold with unique mediators", 600.0) as notes:
        for f in FIXTURES:
            a = f()
            assert enumerate_mappings_by_image(a, terminal()) == [terminal_mediator(a)]
        for a1, a2 in ((flat2, term), (term, term)):
            for src in (term, flat2):
                _product_universal(src(), a1(), a2())
        for triple in ((term, term, flat2), (flat2, term, term)):
            rep = check_ccc(*(f() for f in triple))
            assert rep.ok, rep.lines()
        notes.append("CCC on (TERM,TERM,FLAT2) and (FLAT2,TERM,TERM)")


def test_criterion_9_oracle_cross_checks():
    with criterion(9, "associates and exponent states match brute-force oracles", 600.0) as notes:
        n, extra = 0, 0
        for src, dst, k in ((term(), term(), None), (flat2(), term(), 2)):
            ar = Arrow(src, dst)
            for v in subsets(ar.all_cpts):
                if k is not None and len(v) > k:
                    continue
                got = {oracles.as_plain(w) for w in ar.enumerate_associates(v)}
                want = {oracles.as_plain(w) for w in oracles.associates_by_filter(src, dst, v)}
                assert got == want, v
                # reported only: associates reachable under other choices of representatives
                extra += len(oracles.associates_any_representatives(src, dst, v) - got)
                n += 1
        raw, names = materialize_raw(term(), term())
        ex = exponent(term, term)
        via_st = {frozenset(names[t] for t in st_raw(ex, h)) for h in enumerate_mappings_by_image(term(), term())}
        assert set(enumerate_states(raw).states) == via_st
        notes.append(f"{n} entry sets checked")
        notes.append(f"{extra} further associates under non-canonical representatives (not asserted)")
