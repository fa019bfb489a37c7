import pytest
from hypothesis import given

import oracles
from mutations import single_edit_mutations
from strategies import domain_systems, perturbed_systems
from isw.core import (ALG, AXIOMS, BC, GIP, SALG, ConsPair, build_system, check_alg, check_axioms, check_bc,
                      check_derived_rules, check_gip, entailed_set, reflexive_pairs, subsets)
from isw.errors import DanglingEntail, NotConsistent, PreconditionViolated, UnknownToken
from isw.fixtures import FIXTURES, bfly, flat2, term

ALL = [f() for f in FIXTURES.values()]


def test_term_data_builds():
    s = term()
    assert s.tokens == ("delta",)
    assert s.con == {ConsPair("delta", frozenset()), ConsPair("delta", frozenset({"delta"}))}
    assert all(v == {"delta"} for v in s.entail.values())


def test_empty_con_is_well_formed_but_fails_axioms():
    s = build_system(["d"], "d", [], {})
    assert not check_axioms(s).ok


def test_dangling_entailment_rejected():
    with pytest.raises(DanglingEntail):
        build_system(["a", "b"], "a", [("a", ())], {("a", frozenset({"b"})): {"a"}})


def test_unknown_token_rejected():
    with pytest.raises(UnknownToken):
        build_system(["a"], "a", [("a", {"z"})], {})


@pytest.mark.parametrize("sys", ALL, ids=lambda s: s.name)
def test_fixtures_pass_axioms_and_match_oracle(sys):
    rep = check_axioms(sys)
    assert rep.ok, rep.lines()
    assert [v.ok for v in rep.verdicts] == oracles.axiom_verdicts(sys)
    assert check_gip(sys).ok and oracles.gip(sys)


def test_axiom_three_counterexample_on_term():
    s = term()
    ent = dict(s.entail)
    ent[ConsPair("delta", frozenset())] = frozenset()
    bad = build_system(s.tokens, s.delta, s.con, ent)
    v = check_axioms(bad)[3]
    assert not v.ok and v.counterexample == ("delta",)
    assert not AXIOMS[2].holds(bad, *v.counterexample)


def test_report_indexing_by_position_and_name():
    rep = check_axioms(flat2())
    assert rep[1] is rep["self_consistency"]
    assert rep[11].name == "entailment_conservative"
    assert len(rep.lines()) == 11


# mutations that leave a valid system, as confirmed by the literal oracle
SURVIVORS = {"TERM": [], "FLAT2": ["drop (a, {a}) |- a", "drop (b, {b}) |- b"], "BFLY": []}


@pytest.mark.parametrize("sys", ALL, ids=lambda s: s.name)
def test_single_edit_mutations(sys):
    muts = single_edit_mutations(sys)
    assert len(muts) == len(sys.con) + sum(len(v) for v in sys.entail.values())
    survivors = []
    for desc, m in muts:
        rep = check_axioms(m)
        assert [v.ok for v in rep.verdicts] == oracles.axiom_verdicts(m), desc
        if rep.ok:
            survivors.append(desc)
        for v in rep.failures():
            ax = next(a for a in AXIOMS if a.name == v.name)
            assert not ax.holds(m, *v.counterexample), (desc, v)
    assert survivors == SURVIVORS[sys.name]


@given(perturbed_systems())
def test_axiom_verdicts_agree_with_oracle(sys):
    assert [v.ok for v in check_axioms(sys).verdicts] == oracles.axiom_verdicts(sys)


@given(perturbed_systems())
def test_counterexamples_reevaluate_false(sys):
    for ax, v in zip(AXIOMS, check_axioms(sys).verdicts):
        if not v.ok:
            assert not ax.holds(sys, *v.counterexample)


@given(perturbed_systems())
def test_gip_matches_interpolation_pair(sys):
    rep = check_axioms(sys)
    pre = all(rep[n].ok for n in (4, 5, 9, 10, 11))
    if not pre:
        with pytest.raises(PreconditionViolated):
            check_gip(sys)
        return
    assert check_gip(sys).ok == (rep[7].ok and rep[8].ok)
    assert GIP.check(sys).ok == oracles.gip(sys)


def test_gip_fails_with_witness_generation_when_base_witness_removed():
    s = flat2()
    con = [p for p in s.con if p.witness != "bot"]
    m = build_system(s.tokens, s.delta, con, {p: s.entail[p] for p in con})
    rep = check_axioms(m)
    assert all(rep[n].ok for n in (4, 5, 9, 10, 11))
    assert not rep["witness_generation"].ok
    v = check_gip(m)
    assert not v.ok and not oracles.gip(m)
    assert not GIP.holds(m, *v.counterexample)


@given(domain_systems())
def test_validated_systems_have_closure_and_base_sets(sys):
    for p in sys.con:
        for y in subsets(p.set):
            assert sys.is_con(p.witness, y)
    for i in sys.tokens:
        assert sys.is_con(i, ()) and sys.is_con(i, {sys.delta})
        assert entailed_set(sys, (i, ())) == entailed_set(sys, (sys.delta, ()))


@pytest.mark.parametrize("sys", ALL, ids=lambda s: s.name)
def test_derived_rules(sys):
    assert check_derived_rules(sys).ok


@given(domain_systems())
def test_derived_rules_on_domain_systems(sys):
    assert check_derived_rules(sys).ok


def test_entailed_sets():
    assert entailed_set(term(), ("delta", ())) == {"delta"}
    assert entailed_set(flat2(), ("a", {"a"})) == {"bot", "a"}
    assert entailed_set(bfly(), ("p", {"x", "y"})) == {"bot", "x", "y", "p"}
    with pytest.raises(NotConsistent):
        entailed_set(flat2(), ("a", {"b"}))


def test_reflexive_pairs():
    s = term()
    assert reflexive_pairs(s) == s.con
    f = flat2()
    assert ConsPair("a", frozenset({"a"})) in reflexive_pairs(f)
    assert ConsPair("a", frozenset()) not in reflexive_pairs(f)


@pytest.mark.parametrize("sys", ALL, ids=lambda s: s.name)
def test_alg_holds_and_agrees_with_salg(sys):
    assert check_alg(sys).ok and SALG.check(sys).ok


@given(domain_systems())
def test_alg_equals_salg(sys):
    assert ALG.check(sys).ok == SALG.check(sys).ok


def test_bc_verdicts():
    assert check_bc(term()).ok and check_bc(flat2()).ok
    v = check_bc(bfly())
    assert not v.ok
    i, j, xs = v.counterexample
    assert {i, j} == {"p", "q"} and xs == {"x", "y"}
    assert not BC.holds(bfly(), *v.counterexample)
    assert "p" in entailed_set(bfly(), ("p", xs)) and "p" not in entailed_set(bfly(), ("q", xs))
