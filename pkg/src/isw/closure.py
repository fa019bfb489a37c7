"""Exponent states versus approximable mappings, evaluation, currying, and the
equations that make the category cartesian closed (checked on finite instances)."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .approx import ApproxMapping, MAP_CONDITIONS, check_approx, compose, identity
from .config import DEFAULT_BUDGET, Budget
from .core import ConsPair, InfoSystem, Verdict, pair_key
from .function_space import Arrow, ExpToken, Exponent, equiv_class, materialize_exponent, spectrum
from .posets import MonoFunction, is_monotone, mono_from_dict, monotone_functions, order_iso
from .products import ProductSystem, product, product_map
from .states import StatePoset, enumerate_states, is_state


# ---------------------------------------------------------------------------
# states <-> mappings


def am(ex: Exponent, f) -> ApproxMapping:
    """Union of the entry sets of all raw tokens in ``f``."""
    rel = {p: set() for p in ex.arrow.src.con}
    for t in f:
        for c in t.v:
            rel[c.pair].add(c.tok)
    return ApproxMapping(ex.arrow.src, ex.arrow.dst, {p: frozenset(v) for p, v in rel.items()}, "am")


def st_raw(ex: Exponent, h: ApproxMapping) -> frozenset:
    """Raw tokens ``<B | A>`` with ``A`` inside ``h`` and each entry of ``B``
    matched by some ``j`` related to its pair and equivalent to it on the spectrum."""
    src, dst = ex.arrow.src, ex.arrow.dst
    out = []
    for t in ex.tokens:
        if any(c.tok not in h.img(c.pair) for c in t.v):
            continue
        ok = True
        for c in t.w:
            rs = spectrum(src, c.pair, t.v)[2]
            cls = equiv_class(dst, c.tok, rs)
            if not any(j in cls for j in h.img(c.pair)):
                ok = False
                break
        if ok:
            out.append(t)
    return frozenset(out)


def st(ex: Exponent, h: ApproxMapping) -> frozenset:
    """The exponent state of ``h``, as class names; statehood is asserted."""
    raw = st_raw(ex, h)
    names = ex.contract(raw)
    assert ex.expand(names) == raw, "St(H) splits a token class"
    assert is_state(ex.system, names).ok, "St(H) is not a state"
    return names


def exp_states(ex: Exponent, budget: Budget = DEFAULT_BUDGET) -> StatePoset:
    return enumerate_states(ex.system, budget)


def enumerate_mappings_by_image(a: InfoSystem, b: InfoSystem, budget: Budget = DEFAULT_BUDGET,
                                states: StatePoset | None = None) -> list:
    """Every approximable mapping ``a -> b``.

    The image of each consistent pair must be a state of ``b`` (right closure,
    right interpolation and witness generation force it), so only state-valued
    relations are tried.
    """
    sp = states or enumerate_states(b, budget)
    pairs = a.pairs
    budget.need("state-valued relations", len(sp.states) ** len(pairs), "max_relations")
    out = []
    for choice in iproduct(sp.states, repeat=len(pairs)):
        h = ApproxMapping(a, b, dict(zip(pairs, choice)))
        if all(c.check(h).ok for c in MAP_CONDITIONS):
            out.append(h)
    return out


@dataclass
class Roundtrip:
    states: int
    mappings: int
    st_am: Verdict
    am_st: Verdict

    @property
    def ok(self):
        return self.st_am.ok and self.am_st.ok


def roundtrips(ex: Exponent, mappings, budget: Budget = DEFAULT_BUDGET) -> Roundtrip:
    sp = exp_states(ex, budget)
    v1 = Verdict("St(am(f)) = f", True)
    for f in sp.states:
        back = st(ex, am(ex, ex.expand(f)))
        if back != f:
            v1 = Verdict("St(am(f)) = f", False, (sorted(f),))
            break
    v2 = Verdict("am(St(H)) = H", True)
    for h in mappings:
        if am(ex, st_raw(ex, h)) != h:
            v2 = Verdict("am(St(H)) = H", False, (h.key(),))
            break
    return Roundtrip(len(sp.states), len(mappings), v1, v2)


# ---------------------------------------------------------------------------
# mappings <-> monotone functions on states


def l_of_h(h: ApproxMapping, x) -> frozenset:
    out = set()
    for p in h.source.pairs:
        if p.witness in x and p.set <= x:
            out |= h.img(p)
    return frozenset(out)


def fct(h: ApproxMapping, src_states: StatePoset, dst_states: StatePoset) -> MonoFunction:
    p, q = src_states.as_poset(), dst_states.as_poset()
    lab_s, lab_d = src_states.labels, dst_states.labels
    table = {}
    for x in src_states.states:
        y = l_of_h(h, x)
        assert y in dst_states.index, "L(H) maps a state outside the target states"
        table[lab_s[x]] = lab_d[y]
    assert is_monotone(p, q, table)
    return mono_from_dict(p, q, table)


def h_of_g(g: MonoFunction, src: InfoSystem, dst: InfoSystem, src_states: StatePoset,
           dst_states: StatePoset) -> ApproxMapping:
    """``(i, X) H b`` iff ``b`` lies in ``g`` of the state generated by ``(i, X)``."""
    back = {v: k for k, v in dst_states.labels.items()}
    lab = src_states.labels
    rel = {p: back[g(lab[src.entail[p]])] for p in src.con}
    return ApproxMapping(src, dst, rel, "H^g")


@dataclass
class IsoReport:
    states: int
    functions: int
    verdict: Verdict

    @property
    def ok(self):
        return self.verdict.ok


def fct_st_iso(ex: Exponent, budget: Budget = DEFAULT_BUDGET) -> IsoReport:
    """fct and st are inverse order isomorphisms between exponent states and
    monotone functions on the state posets."""
    src, dst = ex.arrow.src, ex.arrow.dst
    sa, sb, se = enumerate_states(src, budget), enumerate_states(dst, budget), exp_states(ex, budget)
    funcs = monotone_functions(sa.as_poset(), sb.as_poset(), budget)
    name = "fct/st isomorphism"
    fmap = {}
    for f in se.states:
        fmap[f] = fct(am(ex, ex.expand(f)), sa, sb)
    if sorted(fmap.values(), key=lambda g: g.table) != sorted(funcs, key=lambda g: g.table):
        return IsoReport(len(se), len(funcs), Verdict(name, False, (len(se), len(funcs)), "fct is not onto"))
    for g in funcs:
        f = st(ex, h_of_g(g, src, dst, sa, sb))
        if fmap[f] != g:
            return IsoReport(len(se), len(funcs), Verdict(name, False, (g.table,), "fct(st(g)) != g"))
    for f1 in se.states:
        for f2 in se.states:
            if (f1 <= f2) != fmap[f1].le(fmap[f2]):
                return IsoReport(len(se), len(funcs), Verdict(name, False, (sorted(f1), sorted(f2)),
                                                              "order not preserved"))
    return IsoReport(len(se), len(funcs), Verdict(name, True))


# ---------------------------------------------------------------------------
# evaluation and currying


@dataclass(eq=False)
class Closure:
    """Everything needed to evaluate and curry for a triple ``A, A', A''``."""

    a: InfoSystem
    a1: InfoSystem
    a2: InfoSystem
    budget: Budget = DEFAULT_BUDGET
    _cache: dict = field(default_factory=dict)

    def __post_init__(self):
        self.exp = materialize_exponent(self.a1, self.a2, self.budget)
        self.ev_dom = product(self.exp.system, self.a1, self.budget)
        self.dom = product(self.a, self.a1, self.budget)

    def ev(self) -> ApproxMapping:
        return ev_mapping(self.exp, self.ev_dom)

    def lam(self, h: ApproxMapping) -> ApproxMapping:
        return curry(h, self.dom, self.exp)

    def uncurry(self, g: ApproxMapping) -> ApproxMapping:
        return compose(product_map(g, identity(self.a1), self.dom, self.ev_dom), self.ev())


def ev_mapping(ex: Exponent, dom: ProductSystem) -> ApproxMapping:
    """``((t, a), Z) Ev b``: the lookup witness of ``t`` at ``(a, pr2 Z)`` together
    with the application set of the exponent tokens in ``Z`` entails ``b``."""
    ar = ex.arrow
    sums = {n: ar.summary(ex.representative(n)) for n in ex.names}
    rel = {}
    for p in dom.sys.con:
        t, a = dom.parts[p.witness]
        z2 = dom.pr(p.set, 1)
        n = ar.anchor_index[ConsPair(a, z2)]
        w = sums[t][0][n]
        app = frozenset().union(*(sums[u][1][n] for u in dom.pr(p.set, 0)))
        rel[p] = ar.dst.entail.get(ConsPair(w, app), frozenset())
    return ApproxMapping(dom.sys, ar.dst, rel, "Ev")


def curry(h: ApproxMapping, dom: ProductSystem, ex: Exponent) -> ApproxMapping:
    """``Lambda(H)``: computed on raw tokens, then read off on token classes."""
    a, a1, a2 = dom.left, dom.right, ex.arrow.dst
    hit = {}
    for p in a.pairs:
        s = p.set
        for t in ex.tokens:
            hit[(p, t)] = _curry_holds(h, dom, a2, p.witness, s, t)
    rel = {}
    for p in a.pairs:
        names = set()
        for k, cls in enumerate(ex.classes):
            vals = {hit[(p, t)] for t in cls}
            assert len(vals) == 1, "Lambda(H) distinguishes tokens of one class"
            if vals.pop():
                names.add(ex.names[k])
        rel[p] = frozenset(names)
    return ApproxMapping(a, ex.system, rel, f"Lambda({h.name})")


def _curry_holds(h, dom: ProductSystem, a2: InfoSystem, a, s, t: ExpToken) -> bool:
    for c in t.v:
        i, xs = c.pair
        if c.tok not in h.img(ConsPair(dom.tok[(a, i)], dom.rect(s, xs))):
            return False
    for c in t.w:
        cc, tt = c.pair
        rs = spectrum(dom.right, c.pair, t.v)[2]
        cls = equiv_class(a2, c.tok, rs)
        img = h.img(ConsPair(dom.tok[(a, cc)], dom.rect(s, tt)))
        if not any(j in cls for j in img):
            return False
    return True


@dataclass
class CCCReport:
    verdicts: list

    @property
    def ok(self):
        return all(v.ok for v in self.verdicts)

    def lines(self):
        return [v.line() for v in self.verdicts]


def check_ccc(a: InfoSystem, a1: InfoSystem, a2: InfoSystem, budget: Budget = DEFAULT_BUDGET) -> CCCReport:
    """Both currying equations for every approximable ``h : A x A' -> A''`` and
    every ``g : A -> (A' -> A'')``, plus uniqueness of the curried mediator."""
    cc = Closure(a, a1, a2, budget)
    out = []
    ev = cc.ev()
    out.append(Verdict("Ev approximable", check_approx(ev).ok))
    hs = enumerate_mappings_by_image(cc.dom.sys, a2, budget)
    gs = enumerate_mappings_by_image(a, cc.exp.system, budget)
    uncurried = {g: cc.uncurry(g) for g in gs}
    bad = None
    for h in hs:
        lam = cc.lam(h)
        if not check_approx(lam).ok:
            bad = Verdict("Lambda(H) approximable", False, (h.key(),))
            break
        if cc.uncurry(lam) != h:
            bad = Verdict("(Lambda(H) x Id) ; Ev = H", False, (h.key(),))
            break
        sols = [g for g in gs if uncurried[g] == h]
        if sols != [lam]:
            bad = Verdict("unique mediator", False, (h.key(), len(sols)))
            break
    out.append(bad or Verdict(f"(Lambda(H) x Id) ; Ev = H and uniqueness over {len(hs)} mappings", True))
    bad = None
    for g in gs:
        if cc.lam(uncurried[g]) != g:
            bad = Verdict("Lambda((G x Id) ; Ev) = G", False, (g.key(),))
            break
    out.append(bad or Verdict(f"Lambda((G x Id) ; Ev) = G over {len(gs)} mappings", True))
    return CCCReport(out)
