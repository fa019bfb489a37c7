"""Function-space tokens: witness equivalence, closures, associates and the
exponent consistency / entailment predicates.

``Arrow(A, B)`` bundles the per-pair caches.  Exponent tokens are pairs
``ExpToken(w, v)`` where ``v`` is a finite set of ``CPT`` entries and ``w`` one
of its associates.  Everything the exponent predicates need from a token is
summarised by two tuples indexed by the consistent pairs of ``A``: the lookup
witness ``w2`` and the application profile ``prof``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as iproduct
from typing import NamedTuple

from .config import DEFAULT_BUDGET, Budget
from .core import ConsPair, InfoSystem, fmt_set, pair_key, set_key, subsets, tok_key
from .errors import LookupNotUnique, NotConsistent, PreconditionViolated, WitnessInvalid

EMPTY = frozenset()


class CPT(NamedTuple):
    """An entry ``((i, X), c)`` of a function-space token."""

    pair: ConsPair
    tok: object

    def __repr__(self):
        return f"({self.pair!r}, {self.tok})"


def cpt(i, xs, c) -> CPT:
    return CPT(ConsPair(i, frozenset(xs)), c)


def cpt_key(c: CPT):
    return (pair_key(c.pair), tok_key(c.tok))


def cpts_key(cs):
    return (len(cs), tuple(sorted(cpt_key(c) for c in cs)))


class ExpToken(NamedTuple):
    w: frozenset
    v: frozenset

    def __repr__(self):
        def f(cs):
            return "{" + ", ".join(repr(c) for c in sorted(cs, key=cpt_key)) + "}"
        return f"<{f(self.w)} | {f(self.v)}>"


def exp_key(t: ExpToken):
    return (cpts_key(t.v), cpts_key(t.w))


# ---------------------------------------------------------------------------
# witness equivalence and the closure operators (single system)


def witness_equiv(sys: InfoSystem, i, j, xs) -> bool:
    """``i ~ j [X]``: ``X`` is consistent for both and they are linked through
    a chain of witnesses each of which keeps ``X`` consistent."""
    comp = sys.equiv_classes(frozenset(xs))
    return i in comp and j in comp and comp[i] == comp[j]


def equiv_class(sys: InfoSystem, i, xs) -> frozenset:
    comp = sys.equiv_classes(frozenset(xs))
    if i not in comp:
        return EMPTY
    c = comp[i]
    return frozenset(t for t, k in comp.items() if k == c)


def cl(sys: InfoSystem, anchor, xs) -> frozenset:
    """Members ``(i, X)`` of ``xs`` such that the anchor entails ``(j, X)`` for some ``j ~ i [X]``."""
    a, s = anchor
    e = sys.entail.get(ConsPair(a, frozenset(s)))
    if e is None:
        raise NotConsistent(f"{anchor!r} is not in Con")
    out = set()
    for p in xs:
        if p.set <= e and any(j in e for j in equiv_class(sys, p.witness, p.set)):
            out.add(p)
    return frozenset(out)


def ucl(sys: InfoSystem, anchor, xs) -> frozenset:
    a, s = anchor
    e = sys.entail.get(ConsPair(a, frozenset(s)))
    if e is None:
        raise NotConsistent(f"{anchor!r} is not in Con")
    out = set()
    for p in xs:
        if not p.set <= e:
            continue
        for j in equiv_class(sys, p.witness, p.set):
            if j in e:
                out.add(j)
                out |= p.set
    return frozenset(out)


def wit_set(sys: InfoSystem, xs) -> frozenset:
    """Witnesses of the union of ``xs`` that are equivalent to every member's witness."""
    xs = list(xs)
    union = frozenset().union(*(p.set for p in xs))
    return frozenset(a for a in sys.tokens if sys.is_con(a, union)
                     and all(witness_equiv(sys, a, p.witness, p.set) for p in xs))


def representatives(sys: InfoSystem, pairs) -> frozenset:
    """Canonical system of representatives: the least token of each class, with
    ``{Delta}`` for the empty family and ``{i}`` for a single pair."""
    pairs = frozenset(pairs)
    if not pairs:
        return frozenset([sys.delta])
    if len(pairs) == 1:
        return frozenset([next(iter(pairs)).witness])
    union = frozenset().union(*(p.set for p in pairs))
    w = wit_set(sys, pairs)
    comp = sys.equiv_classes(union)
    best = {}
    for t in sorted(w, key=tok_key):
        best.setdefault(comp[t], t)
    return frozenset(best.values())


def pr_set_union(cs) -> frozenset:
    return frozenset().union(*(c.pair.set for c in cs)) if cs else EMPTY


def is_v_maximal(sys: InfoSystem, a, u, v) -> bool:
    t = pr_set_union(u)
    return all(c in u for c in v if c.pair.set <= t and witness_equiv(sys, a, c.pair.witness, c.pair.set))


def spectrum(sys: InfoSystem, anchor, v):
    a, s = anchor
    s = frozenset(s)
    sp = frozenset(c for c in v if c.pair.set <= s and witness_equiv(sys, a, c.pair.witness, c.pair.set))
    return sp, frozenset(c.pair for c in sp), frozenset(c.tok for c in sp)


def ap(sys: InfoSystem, anchor, v) -> frozenset:
    pairs = cl(sys, anchor, frozenset(c.pair for c in v))
    return frozenset(c.tok for c in v if c.pair in pairs)


# ---------------------------------------------------------------------------
# the pair context


@dataclass(frozen=True)
class AssocLookup:
    e: object
    t: frozenset
    j: object
    m: frozenset  # the CPTs whose pairs lie in the closure of the anchor


@dataclass(frozen=True)
class Node:
    """A place in the associate chain: the CPTs ``J``, representative ``e``, union ``T``."""

    level: int
    e: object
    t: frozenset
    j_set: frozenset


@dataclass(eq=False)
class Arrow:
    src: InfoSystem
    dst: InfoSystem
    budget: Budget = DEFAULT_BUDGET
    _memo: dict = field(default_factory=dict, repr=False)

    @cached_property
    def anchors(self) -> tuple:
        return self.src.pairs

    @cached_property
    def anchor_index(self) -> dict:
        return {p: n for n, p in enumerate(self.anchors)}

    @cached_property
    def cl_table(self) -> dict:
        """``cl_table[p]``: the anchors whose closure contains the pair ``p``."""
        out = {p: set() for p in self.anchors}
        for n, anc in enumerate(self.anchors):
            for p in cl(self.src, anc, self.anchors):
                out[p].add(n)
        return {p: frozenset(v) for p, v in out.items()}

    @cached_property
    def all_cpts(self) -> tuple:
        return tuple(CPT(p, c) for p in self.anchors for c in self.dst.tokens)

    @cached_property
    def delta_token(self) -> ExpToken:
        return ExpToken(frozenset([CPT(ConsPair(self.src.delta, EMPTY), self.dst.delta)]), EMPTY)

    # -- associates -------------------------------------------------------

    def nodes(self, v: frozenset) -> list:
        """All (J, e) pairs with ``e`` a canonical representative and ``(e, J)`` maximal."""
        src = self.src
        sets = sorted({c.pair.set for c in v}, key=set_key)
        unions = {EMPTY}
        for s in sets:
            unions |= {u | s for u in unions}
        out = []
        for t in sorted(unions, key=set_key):
            for e in src.tokens:
                if not src.is_con(e, t):
                    continue
                js = frozenset(c for c in v if c.pair.set <= t
                               and witness_equiv(src, e, c.pair.witness, c.pair.set))
                if not js or pr_set_union(js) != t:
                    continue
                if e not in representatives(src, {c.pair for c in js}):
                    continue
                out.append(Node(len(js), e, t, js))
        return sorted(out, key=lambda n: (n.level, set_key(n.t), tok_key(n.e)))

    def level_zero(self, v) -> frozenset:
        if any(not c.pair.set for c in v):
            return EMPTY
        return frozenset([CPT(ConsPair(self.src.delta, EMPTY), self.dst.delta)])

    def node_targets(self, node: Node, prev: frozenset) -> frozenset:
        """The set that the chosen witness at ``node`` must make consistent."""
        out = {c.tok for c in node.j_set}
        for c in prev:
            if c.pair.set <= node.t and witness_equiv(self.src, c.pair.witness, node.e, c.pair.set):
                out.add(c.tok)
        return frozenset(out)

    def enumerate_associates(self, v) -> list:
        v = frozenset(v)
        nodes = self.nodes(v)
        levels = {}
        for nd in nodes:
            levels.setdefault(nd.level, []).append(nd)
        order = sorted(levels)
        results = []
        count = [0]

        def go(k, acc):
            count[0] += 1
            self.budget.need("associate branches", count[0], "max_branches")
            if k == len(order):
                results.append(acc)
                return
            lv = levels[order[k]]
            options = []
            for nd in lv:
                s = self.node_targets(nd, acc)
                js = [j for j in self.dst.tokens if self.dst.is_con(j, s)]
                if not js:
                    return
                options.append([CPT(ConsPair(nd.e, nd.t), j) for j in js])
            for choice in iproduct(*options):
                go(k + 1, acc | frozenset(choice))

        go(0, self.level_zero(v))
        return sorted(results, key=cpts_key)

    def is_associate(self, w, v) -> bool:
        """Reconstruct the chain level by level and compare with ``w``."""
        w, v = frozenset(w), frozenset(v)
        acc = self.level_zero(v)
        zero = CPT(ConsPair(self.src.delta, EMPTY), self.dst.delta)
        nodes = self.nodes(v)
        firsts = {}
        for c in w:
            firsts.setdefault(c.pair, []).append(c)
        allowed = {ConsPair(n.e, n.t) for n in nodes} | ({zero.pair} if acc else set())
        if set(firsts) - allowed:
            return False
        for lvl in sorted({n.level for n in nodes}):
            new = set()
            for nd in (n for n in nodes if n.level == lvl):
                got = firsts.get(ConsPair(nd.e, nd.t), [])
                if len(got) != 1:
                    return False
                s = self.node_targets(nd, acc)
                if not self.dst.is_con(got[0].tok, s):
                    return False
                new.add(got[0])
            acc = acc | new
        return acc == w

    def singleton_associate(self, p, z, b) -> ExpToken:
        c, u = p[0], frozenset(p[1])
        z = frozenset(z)
        need = z | {self.dst.delta} if u else z
        if not self.dst.is_con(b, need):
            raise WitnessInvalid(f"{fmt_set(need)} is not consistent under {b}")
        d = frozenset(CPT(ConsPair(c, u), t) for t in z)
        e = {CPT(ConsPair(c, u), b)}
        if u:
            e.add(CPT(ConsPair(self.src.delta, EMPTY), self.dst.delta))
        return ExpToken(frozenset(e), d)

    # -- lookup and per-token summaries ----------------------------------

    def closure_members(self, v, n: int) -> frozenset:
        return frozenset(c for c in v if n in self.cl_table[c.pair])

    def lookup(self, tok: ExpToken, anchor) -> AssocLookup:
        a = anchor[0]
        n = self.anchor_index[ConsPair(a, frozenset(anchor[1]))]
        m = self.closure_members(tok.v, n)
        t = pr_set_union(m)
        hits = [c for c in tok.w if c.pair.set == t and witness_equiv(self.src, c.pair.witness, a, t)]
        if len(hits) != 1:
            raise LookupNotUnique(f"{len(hits)} associate entries match anchor {anchor!r}")
        h = hits[0]
        assert self.dst.is_con(h.tok, frozenset(c.tok for c in m))
        return AssocLookup(h.pair.witness, t, h.tok, m)

    def summary(self, tok: ExpToken):
        """``(w2, prof)``: lookup witness and application set per anchor."""
        key = ("sum", tok)
        got = self._memo.get(key)
        if got is None:
            w2, prof = [], []
            for n, anc in enumerate(self.anchors):
                lk = self.lookup(tok, anc)
                w2.append(lk.j)
                prof.append(frozenset(c.tok for c in lk.m))
            got = self._memo[key] = (tuple(w2), tuple(prof))
        return got

    def ap_at(self, v, anchor) -> frozenset:
        n = self.anchor_index[ConsPair(anchor[0], frozenset(anchor[1]))]
        return frozenset(c.tok for c in self.closure_members(v, n))

    # -- exponent predicates on summaries --------------------------------

    def con_members_ok(self, head_w2, member) -> bool:
        """Witness-agreement requirement of one member against the head, at every anchor."""
        dst = self.dst
        g_w2, g_prof = member
        for n in range(len(self.anchors)):
            w = head_w2[n]
            cls = equiv_class(dst, g_w2[n], g_prof[n])
            if not any(dst.is_con(w, frozenset([k])) for k in cls):
                return False
        return True

    def con_union_ok(self, head_w2, head_prof, union_prof) -> bool:
        dst = self.dst
        for n in range(len(self.anchors)):
            w = head_w2[n]
            before = equiv_class(dst, w, head_prof[n])
            after = equiv_class(dst, w, union_prof[n])
            if not before <= after:
                return False
        return True

    def union_profile(self, profs) -> tuple:
        profs = list(profs)
        if not profs:
            return tuple(EMPTY for _ in self.anchors)
        return tuple(frozenset().union(*col) for col in zip(*profs))

    def entails_summary(self, head_w2, union_prof, rhs: ExpToken) -> bool:
        """Entailment of ``rhs`` from a head lookup table and the union profile of a set."""
        dst, src = self.dst, self.src
        idx = self.anchor_index
        for c in rhs.v:
            n = idx[c.pair]
            if not dst.entails(head_w2[n], union_prof[n], c.tok):
                return False
        for c in rhs.w:
            n = idx[c.pair]
            _, ds, rs = spectrum(src, c.pair, rhs.v)
            base = frozenset().union(*(union_prof[idx[p]] for p in ds)) if ds else EMPTY
            e = dst.entail.get(ConsPair(head_w2[n], base))
            if e is None or not rs <= e:
                return False
            if not any(k in e for k in equiv_class(dst, c.tok, rs)):
                return False
        return True

    def exp_con(self, head: ExpToken, members) -> bool:
        hw, hp = self.summary(head)
        sums = [self.summary(m) for m in members]
        if not all(self.con_members_ok(hw, s) for s in sums):
            return False
        return self.con_union_ok(hw, hp, self.union_profile(s[1] for s in sums))

    def exp_entail(self, head: ExpToken, members, rhs: ExpToken) -> bool:
        if not self.exp_con(head, members):
            raise PreconditionViolated("the set is not consistent under the head token")
        hw, _ = self.summary(head)
        return self.entails_summary(hw, self.union_profile(self.summary(m)[1] for m in members), rhs)

    # -- all tokens -------------------------------------------------------

    def all_tokens(self) -> list:
        """Every ``<W | V>`` with ``V`` ranging over all subsets of ``Con x A'``."""
        key = "tokens"
        if key in self._memo:
            return self._memo[key]
        cpts = self.all_cpts
        self.budget.need("Con x A' entries", len(cpts), "max_cpts")
        out = []
        for v in subsets(cpts):
            for w in self.enumerate_associates(v):
                out.append(ExpToken(w, v))
        out.sort(key=exp_key)
        self._memo[key] = out
        return out


# ---------------------------------------------------------------------------
# materialisation


@dataclass(eq=False)
class Exponent:
    """A materialised exponent.

    Raw tokens that no consistency or entailment instance can tell apart are
    merged into one class; the system is built over class names.  Every raw
    state is a union of classes, so the merge loses nothing.
    """

    arrow: Arrow
    tokens: list            # all raw ExpTokens
    classes: list           # list of lists of raw tokens, index = class id
    names: tuple            # class id -> token name in ``system``
    class_of: dict          # raw token -> class id
    system: InfoSystem

    def name_of(self, tok: ExpToken) -> str:
        return self.names[self.class_of[tok]]

    def expand(self, names) -> frozenset:
        """Raw tokens of a set of class names."""
        ids = {self.names.index(n) for n in names}
        return frozenset(t for k in ids for t in self.classes[k])

    def contract(self, toks) -> frozenset:
        return frozenset(self.name_of(t) for t in toks)

    def representative(self, name) -> ExpToken:
        return self.classes[self.names.index(name)][0]


def materialize_exponent(src: InfoSystem, dst: InfoSystem, budget: Budget = DEFAULT_BUDGET,
                         arrow: Arrow | None = None) -> Exponent:
    from .core import build_system

    ar = arrow or Arrow(src, dst, budget)
    toks = ar.all_tokens()
    sums = {t: ar.summary(t) for t in toks}
    w2s = sorted({s[0] for s in sums.values()}, key=repr)
    profs = {s[1] for s in sums.values()}
    unions = {ar.union_profile([])}
    for p in sorted(profs, key=repr):
        unions |= {ar.union_profile([u, p]) for u in unions}
    unions = sorted(unions, key=repr)
    groups = {}
    for t in toks:
        pred = tuple(ar.entails_summary(w, u, t) for w in w2s for u in unions)
        groups.setdefault((sums[t], pred), []).append(t)
    classes = sorted((sorted(g, key=exp_key) for g in groups.values()), key=lambda g: exp_key(g[0]))
    budget.need("exponent token classes", len(classes), "max_classes")
    names = tuple(f"e{n}" for n in range(len(classes)))
    class_of = {t: n for n, g in enumerate(classes) for t in g}
    csum = [sums[g[0]] for g in classes]
    rhs_rep = [g[0] for g in classes]

    ids = range(len(classes))
    member_ok = {(h, g): ar.con_members_ok(csum[h][0], csum[g]) for h in ids for g in ids}
    con, ent, memo = [], {}, {}
    for h in ids:
        hw, hp = csum[h]
        for sub in subsets(ids):
            if not all(member_ok[h, g] for g in sub):
                continue
            up = ar.union_profile(csum[g][1] for g in sub)
            if not ar.con_union_ok(hw, hp, up):
                continue
            key = (hw, up)
            if key not in memo:
                memo[key] = frozenset(names[r] for r in ids if ar.entails_summary(hw, up, rhs_rep[r]))
            pair = (names[h], frozenset(names[g] for g in sub))
            con.append(pair)
            ent[pair] = memo[key]
    delta = names[class_of[ar.delta_token]]
    system = build_system(names, delta, con, ent, f"{src.name}->{dst.name}")
    return Exponent(ar, toks, classes, names, class_of, system)


def materialize_raw(src: InfoSystem, dst: InfoSystem, budget: Budget = DEFAULT_BUDGET,
                    arrow: Arrow | None = None):
    """The unmerged exponent over raw tokens, evaluated with the token-level
    predicates.  Only feasible when the raw token count is tiny."""
    from .core import build_system

    ar = arrow or Arrow(src, dst, budget)
    toks = ar.all_tokens()
    budget.need("raw exponent tokens", len(toks), "max_tokens")
    names = {t: f"r{n}" for n, t in enumerate(toks)}
    con, ent = [], {}
    for h in toks:
        for sub in subsets(range(len(toks))):
            members = [toks[k] for k in sub]
            if ar.exp_con(h, members):
                pair = (names[h], frozenset(names[m] for m in members))
                con.append(pair)
                ent[pair] = frozenset(names[r] for r in toks if ar.exp_entail(h, members, r))
    return build_system(list(names.values()), names[ar.delta_token], con, ent,
                        f"{src.name}->{dst.name} raw"), names
