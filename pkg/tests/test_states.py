import pytest
from hypothesis import given

import oracles
from strategies import domain_systems
from isw.core import check_bc, reflexive_pairs, subsets
from isw.errors import NotBounded
from isw.fixtures import FIXTURES, bfly, flat2, term
from isw.posets import is_bounded_complete, order_iso
from isw.states import (check_ldomain, compact_states, enumerate_states, hasse_edges, is_state, local_lub,
                        principal_state, states_bounded_complete, way_below)

ALL = [f() for f in FIXTURES.values()]
S = frozenset


def test_state_examples():
    assert is_state(term(), {"delta"}).ok
    v = is_state(term(), set())
    assert not v.ok and v.name == "finitely_consistent" and v.counterexample == (S(),)
    v = is_state(flat2(), {"bot", "a", "b"})
    assert not v.ok and v.name == "finitely_consistent"


@pytest.mark.parametrize("sys", ALL, ids=lambda s: s.name)
def test_is_state_matches_oracle_on_every_subset(sys):
    for x in subsets(sys.tokens):
        assert is_state(sys, x).ok == oracles.is_state(sys, x)


def test_state_enumeration():
    assert enumerate_states(term()).states == (S({"delta"}),)
    assert set(enumerate_states(flat2()).states) == {S({"bot"}), S({"bot", "a"}), S({"bot", "b"})}
    sp = enumerate_states(bfly())
    assert len(sp) == 5
    assert order_iso(sp.as_poset(), enumerate_states(bfly()).as_poset()) is not None


@given(domain_systems())
def test_state_enumeration_matches_oracle(sys):
    assert set(enumerate_states(sys).states) == set(oracles.states(sys))


def test_principal_states():
    assert principal_state(term(), ("delta", ())) == {"delta"}
    assert principal_state(bfly(), ("p", {"x", "y"})) == {"bot", "x", "y", "p"}
    assert principal_state(flat2(), ("a", ())) == {"bot"}


@pytest.mark.parametrize("sys", ALL, ids=lambda s: s.name)
def test_way_below_characterisation(sys):
    sp = enumerate_states(sys)
    for x in sp.states:
        assert way_below(sp, sp.bottom, x)
        for y in sp.states:
            if way_below(sp, x, y):
                assert x <= y
            # on a finite poset way-below is the order
            assert way_below(sp, x, y) == (x <= y)
    assert way_below(enumerate_states(flat2()), S({"bot"}), S({"bot", "a"}))


@pytest.mark.parametrize("sys", ALL, ids=lambda s: s.name)
def test_way_below_basic_properties(sys):
    sp = enumerate_states(sys)
    st = sp.states
    wb = {(x, y) for x in st for y in st if way_below(sp, x, y)}
    for x in st:
        assert (sp.bottom, x) in wb
        for y in st:
            if (x, y) in wb:
                assert x <= y
            for z in st:
                if (x, y) in wb and (y, z) in wb:
                    assert (x, z) in wb
                if (x, y) in wb and y <= z:
                    assert (x, z) in wb


def test_local_lubs_depend_on_the_bound():
    sys = bfly()
    sp = enumerate_states(sys)
    x, y = S({"bot", "x"}), S({"bot", "y"})
    zp, zq = S({"bot", "x", "y", "p"}), S({"bot", "x", "y", "q"})
    assert local_lub(sys, sp, x, y, zp) == zp
    assert local_lub(sys, sp, x, y, zq) == zq
    assert zp != zq
    assert local_lub(sys, sp, x, sp.bottom, zp) == x
    with pytest.raises(NotBounded):
        local_lub(sys, sp, zp, zq, zp)


@given(domain_systems())
def test_local_lub_is_least_bound_below(sys):
    sp = enumerate_states(sys)
    for z in sp.states:
        below = [s for s in sp.states if s <= z]
        for x in below:
            for y in below:
                got = local_lub(sys, sp, x, y, z)
                ubs = [s for s in below if x <= s and y <= s]
                assert got in ubs and all(got <= u for u in ubs)


@pytest.mark.parametrize("sys", ALL, ids=lambda s: s.name)
def test_state_posets_are_l_domains(sys):
    sp = enumerate_states(sys)
    assert check_ldomain(sp).ok
    assert compact_states(sys, sp) == frozenset(sp.states)


def test_bounded_completeness_of_fixture_state_posets():
    assert states_bounded_complete(enumerate_states(flat2()))
    assert not states_bounded_complete(enumerate_states(bfly()))


@given(domain_systems())
def test_syntactic_bc_implies_bounded_complete(sys):
    sp = enumerate_states(sys)
    if check_bc(sys).ok:
        assert states_bounded_complete(sp)
    assert check_ldomain(sp).ok


@given(domain_systems())
def test_basis_union_and_principal_states_of_reflexive_pairs_are_compact(sys):
    sp = enumerate_states(sys)
    cs = compact_states(sys, sp)
    for p in reflexive_pairs(sys):
        assert principal_state(sys, p) in cs
    for z in sp.states:
        fam = [sys.entail[p] for p in sys.pairs if p.witness in z and p.set <= z]
        assert frozenset().union(*fam) == z


def test_hasse_edges():
    assert hasse_edges(enumerate_states(term())) == []
    assert len(hasse_edges(enumerate_states(flat2()))) == 2
    # the butterfly has six covering pairs: bottom to x and y, and each of x, y to p and q
    assert len(hasse_edges(enumerate_states(bfly()))) == 6


def test_bfly_state_poset_not_bounded_complete_semantically():
    p = enumerate_states(bfly()).as_poset()
    assert not is_bounded_complete(p)
