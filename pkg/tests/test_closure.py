import pytest

import oracles
from isw.approx import ApproxMapping, check_approx, constant_bottom, identity
from isw.closure import (Closure, am, check_ccc, enumerate_mappings_by_image, exp_states, fct, fct_st_iso, h_of_g,
                         l_of_h, roundtrips, st, st_raw)
from isw.core import ConsPair
from isw.fixtures import bfly, flat2, term
from isw.function_space import materialize_exponent, materialize_raw
from isw.posets import monotone_functions
from isw.states import enumerate_states

S = frozenset
PAIRS = [(term, term), (term, flat2), (flat2, term)]
EXPS = {}


def exponent(src, dst):
    key = (src.__name__, dst.__name__)
    if key not in EXPS:
        EXPS[key] = materialize_exponent(src(), dst())
    return EXPS[key]


@pytest.mark.parametrize("src,dst,n", [(term, term, 1), (term, flat2, 3), (flat2, term, 1)], ids=str)
def test_state_mapping_roundtrips(src, dst, n):
    ex = exponent(src, dst)
    maps = enumerate_mappings_by_image(src(), dst())
    rt = roundtrips(ex, maps)
    assert rt.ok and rt.states == rt.mappings == n


@pytest.mark.parametrize("src,dst", PAIRS, ids=str)
def test_am_of_every_state_is_approximable(src, dst):
    ex = exponent(src, dst)
    sp = exp_states(ex)
    for f in sp.states:
        assert check_approx(am(ex, ex.expand(f))).ok
    h = am(ex, ex.expand(sp.bottom))
    assert h.relates(h.source.delta, S(), h.target.delta)


def test_st_of_unique_term_mapping_is_the_unique_state():
    ex = exponent(term, term)
    (h,) = enumerate_mappings_by_image(term(), term())
    assert st(ex, h) == set(ex.names)


def test_st_rejects_non_approximable_relations():
    ex = exponent(term, flat2)
    for img in ({"bot", "a", "b"}, {"a"}):
        h = ApproxMapping(term(), flat2(), {p: S(img) for p in term().con})
        assert not check_approx(h).ok
        with pytest.raises(AssertionError):
            st(ex, h)


@pytest.mark.parametrize("src,dst,n", [(term, term, 1), (term, flat2, 3), (flat2, term, 1)], ids=str)
def test_fct_st_isomorphism(src, dst, n):
    rep = fct_st_iso(exponent(src, dst))
    assert rep.ok and rep.states == rep.functions == n


def test_st_is_monotone_on_term_to_flat2():
    ex = exponent(term, flat2)
    maps = enumerate_mappings_by_image(term(), flat2())
    for h in maps:
        for g in maps:
            if all(h.img(p) <= g.img(p) for p in term().con):
                assert st(ex, h) <= st(ex, g)


@pytest.mark.parametrize("f", [term, flat2, bfly])
def test_l_of_identity_and_constant(f):
    a = f()
    sp = enumerate_states(a)
    for x in sp.states:
        assert l_of_h(identity(a), x) == x
        assert l_of_h(constant_bottom(a, flat2()), x) == {"bot"}


def test_mappings_and_monotone_functions_correspond_on_flat2():
    a = flat2()
    sp = enumerate_states(a)
    p = sp.as_poset()
    funcs = monotone_functions(p, p)
    for g in funcs:
        h = h_of_g(g, a, a, sp, sp)
        assert check_approx(h).ok
        assert fct(h, sp, sp) == g
    ident = next(g for g in funcs if all(x == y for x, y in g.table))
    assert h_of_g(ident, a, a, sp, sp) == identity(a)
    for h in enumerate_mappings_by_image(a, a):
        assert h_of_g(fct(h, sp, sp), a, a, sp, sp) == h


def test_raw_exponent_states_agree_with_st_on_term():
    raw, names = materialize_raw(term(), term())
    ex = exponent(term, term)
    via_st = {S(names[t] for t in st_raw(ex, h)) for h in enumerate_mappings_by_image(term(), term())}
    assert set(enumerate_states(raw).states) == via_st


# ---------------------------------------------------------------------------
# evaluation and currying


def test_ev_relates_delta_pair():
    cc = Closure(term(), term(), flat2())
    ev = cc.ev()
    d = ConsPair(cc.ev_dom.sys.delta, S())
    assert "bot" in ev.img(d)
    assert check_approx(ev).ok


def test_ev_on_term_is_the_unique_mapping():
    cc = Closure(term(), term(), term())
    assert enumerate_mappings_by_image(cc.ev_dom.sys, term()) == [cc.ev()]


def _lambda_oracle(h, cc, p, t):
    """Currying read straight off its definition on a raw token."""
    dom, a2 = cc.dom, cc.a2
    a, s = p.witness, p.set
    for (i, xs), e in t.v:
        if e not in h.img(ConsPair(dom.tok[(a, i)], dom.rect(s, xs))):
            return False
    for (c, tt), b in t.w:
        rs = oracles.spectrum(cc.a1, (c, tt), oracles.as_plain(t.v))[2]
        img = h.img(ConsPair(dom.tok[(a, c)], dom.rect(s, tt)))
        if not any(oracles.sim(a2, j, b, rs) for j in img):
            return False
    return True


@pytest.mark.parametrize("triple", [(term, term, flat2), (flat2, term, term), (term, term, term)], ids=str)
def test_lambda_matches_its_definition(triple):
    a, a1, a2 = (f() for f in triple)
    cc = Closure(a, a1, a2)
    for h in enumerate_mappings_by_image(cc.dom.sys, a2):
        lam = cc.lam(h)
        assert check_approx(lam).ok
        for p in a.pairs:
            assert cc.exp.system.delta in lam.img(p)
            want = {cc.exp.name_of(t) for t in cc.exp.tokens if _lambda_oracle(h, cc, p, t)}
            assert lam.img(p) == want


@pytest.mark.parametrize("triple", [(term, term, term), (term, term, flat2), (flat2, term, term)], ids=str)
def test_currying_equations(triple):
    rep = check_ccc(*(f() for f in triple))
    assert rep.ok, rep.lines()
    assert len(rep.verdicts) == 3
