"""Finite information systems with witnesses and exhaustive axiom checks.

A system is stored extensionally: the consistency predicate is the full list
of witnessed pairs ``(i, X)`` and entailment is a total map from those pairs
to the set of tokens they entail.  Every decision procedure below quantifies
over that data directly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple

from .errors import DanglingEntail, NotConsistent, PreconditionViolated, UnknownToken

Token = Hashable
TokenSet = frozenset

TOKEN_RE = re.compile(r"^[A-Za-z0-9_'.\[\]]+$")


class ConsPair(NamedTuple):
    """A witnessed consistent set ``(i, X)``."""

    witness: Token
    set: frozenset

    def __repr__(self):
        return f"({self.witness}, {fmt_set(self.set)})"


def tok_key(t):
    return (0, t) if isinstance(t, str) else (1, repr(t))


def set_key(s):
    """Shortlex order on finite sets: size first, then sorted members."""
    return (len(s), tuple(sorted(s, key=tok_key)))


def pair_key(p: ConsPair):
    return (tok_key(p.witness), set_key(p.set))


def fmt_set(s) -> str:
    return "{" + ",".join(str(t) for t in sorted(s, key=tok_key)) + "}"


def subsets(items: Iterable, min_size: int = 0) -> Iterator[frozenset]:
    """All subsets of ``items`` in shortlex order."""
    items = sorted(set(items), key=tok_key)
    for r in range(min_size, len(items) + 1):
        for c in combinations(items, r):
            yield frozenset(c)


def _fs(xs) -> frozenset:
    return xs if isinstance(xs, frozenset) else frozenset(xs)


@dataclass(frozen=True, eq=False)
class InfoSystem:
    """An information system with witnesses ``(A, Con, |-, Delta)``.

    ``entail`` maps every member of ``con`` to the set of tokens it entails.
    Instances are immutable; derived indexes are cached on first use.
    """

    tokens: tuple
    delta: Token
    con: frozenset
    entail: Mapping
    name: str = "A"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __repr__(self):
        return f"InfoSystem({self.name!r}, |A|={len(self.tokens)}, |Con|={len(self.con)})"

    def __eq__(self, other):
        if not isinstance(other, InfoSystem):
            return NotImplemented
        return (set(self.tokens) == set(other.tokens) and self.delta == other.delta
                and self.con == other.con and dict(self.entail) == dict(other.entail))

    def __hash__(self):
        return hash((frozenset(self.tokens), self.delta, self.con))

    @cached_property
    def token_set(self) -> frozenset:
        return frozenset(self.tokens)

    @cached_property
    def order(self) -> dict:
        return {t: n for n, t in enumerate(self.tokens)}

    @cached_property
    def pairs(self) -> tuple:
        """Members of Con in canonical enumeration order."""
        return tuple(sorted(self.con, key=pair_key))

    @cached_property
    def con_of(self) -> dict:
        """``con_of[i]`` is the family ``Con(i)`` as a frozenset of frozensets."""
        out = {t: set() for t in self.tokens}
        for p in self.con:
            out[p.witness].add(p.set)
        return {t: frozenset(v) for t, v in out.items()}

    def is_con(self, i, xs) -> bool:
        return _fs(xs) in self.con_of.get(i, ())

    def entails(self, i, xs, a) -> bool:
        e = self.entail.get(ConsPair(i, _fs(xs)))
        return e is not None and a in e

    def entails_all(self, i, xs, ys) -> bool:
        e = self.entail.get(ConsPair(i, _fs(xs)))
        return e is not None and _fs(ys) <= e

    def entails_pair(self, i, xs, j, ys) -> bool:
        """``(i, X) |- (j, Y)``: both the witness and the set are entailed."""
        e = self.entail.get(ConsPair(i, _fs(xs)))
        return e is not None and j in e and _fs(ys) <= e

    @cached_property
    def links(self) -> dict:
        """``links[a]``: tokens ``b`` such that some ``k`` has ``{a}, {b}`` in ``Con(k)``."""
        out = {t: set() for t in self.tokens}
        for k in self.tokens:
            singles = [t for t in self.tokens if frozenset([t]) in self.con_of[k]]
            for a in singles:
                out[a].update(singles)
        return {t: frozenset(v) for t, v in out.items()}

    def equiv_classes(self, xs: frozenset) -> dict:
        """Components of ``~[X]``: token -> class id, for tokens with ``X`` in ``Con``."""
        cache = self._cache.setdefault("equiv", {})
        got = cache.get(xs)
        if got is not None:
            return got
        nodes = [t for t in self.tokens if xs in self.con_of[t]]
        node_set = set(nodes)
        comp = {}
        for start in nodes:
            if start in comp:
                continue
            comp[start] = start
            stack = [start]
            while stack:
                u = stack.pop()
                for v in self.links[u]:
                    if v in node_set and v not in comp:
                        comp[v] = start
                        stack.append(v)
        cache[xs] = comp
        return comp


def build_system(tokens, delta, con, entail, name: str = "A") -> InfoSystem:
    """Assemble a system after well-formedness checks only; axioms are not checked."""
    toks = frozenset(tokens)
    if delta not in toks:
        raise UnknownToken(f"delta {delta!r} is not a declared token")
    con_set = set()
    for p in con:
        p = ConsPair(p[0], frozenset(p[1]))
        if p.witness not in toks:
            raise UnknownToken(f"witness {p.witness!r} is not a declared token")
        bad = p.set - toks
        if bad:
            raise UnknownToken(f"tokens {sorted(bad, key=tok_key)} are not declared")
        con_set.add(p)
    ent = {}
    for k, v in dict(entail).items():
        k = ConsPair(k[0], frozenset(k[1]))
        if k not in con_set:
            raise DanglingEntail(f"entailment from {k!r}, which is not in Con")
        v = frozenset(v)
        bad = v - toks
        if bad:
            raise UnknownToken(f"entailed tokens {sorted(bad, key=tok_key)} are not declared")
        ent[k] = v
    for p in con_set:
        ent.setdefault(p, frozenset())
    return InfoSystem(tuple(sorted(toks, key=tok_key)), delta, frozenset(con_set), ent, name)


def entailed_set(sys: InfoSystem, p) -> frozenset:
    """``[X]_i``, the tokens entailed by ``(i, X)``."""
    p = ConsPair(p[0], frozenset(p[1]))
    if p not in sys.con:
        raise NotConsistent(f"{p!r} is not in Con")
    return sys.entail[p]


def reflexive_pairs(sys: InfoSystem) -> frozenset:
    """Pairs ``(j, V)`` with ``(j, V) |- (j, V)``."""
    return frozenset(p for p in sys.con if sys.entails_pair(p.witness, p.set, p.witness, p.set))


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    name: str
    ok: bool
    counterexample: tuple | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def line(self) -> str:
        if self.ok:
            return f"PASS {self.name}"
        return f"FAIL {self.name}: counterexample {self.counterexample!r} {self.detail}".rstrip()


@dataclass(frozen=True)
class Condition:
    """A universally quantified condition, decided by enumerating its instances.

    ``instances(sys)`` yields argument tuples in a deterministic order and
    ``holds(sys, *args)`` evaluates the formula at one instance, so any
    counterexample can be re-evaluated independently.
    """

    number: int | None
    name: str
    formula: str
    instances: Callable
    holds: Callable

    def check(self, sys) -> Verdict:
        for inst in self.instances(sys):
            if not self.holds(sys, *inst):
                return Verdict(self.name, False, inst, self.formula)
        return Verdict(self.name, True)


def _ent(sys, i, xs):
    return sys.entail.get(ConsPair(i, xs))


def _h_self_con(sys, i):
    return sys.is_con(i, frozenset([i]))


def _i_subsets_of_con(sys):
    for p in sys.pairs:
        for ys in subsets(p.set):
            yield (p.witness, p.set, ys)


def _h_subset_closed(sys, i, xs, ys):
    return not (ys <= xs and sys.is_con(i, xs)) or sys.is_con(i, ys)


def _h_delta(sys, i):
    return sys.entails(i, frozenset(), sys.delta)


def _i_entailed_subsets(sys):
    for p in sys.pairs:
        for ys in subsets(sys.entail[p]):
            yield (p.witness, p.set, ys)


def _h_preserve_con(sys, i, xs, ys):
    return not sys.entails_all(i, xs, ys) or sys.is_con(i, ys)


def _i_same_witness(sys):
    for p in sys.pairs:
        for ys in sorted(sys.con_of[p.witness], key=set_key):
            if p.set <= ys:
                yield (p.witness, p.set, ys)


def _h_monotone(sys, i, xs, ys):
    if not (sys.is_con(i, xs) and sys.is_con(i, ys) and xs <= ys):
        return True
    return _ent(sys, i, xs) <= _ent(sys, i, ys)


def _i_transitive(sys):
    for p in sys.pairs:
        e = sys.entail[p]
        for ys in sorted(sys.con_of[p.witness], key=set_key):
            if ys <= e:
                yield (p.witness, p.set, ys)


def _h_transitive(sys, i, xs, ys):
    if not (sys.is_con(i, xs) and sys.entails_all(i, xs, ys) and sys.is_con(i, ys)):
        return True
    return _ent(sys, i, ys) <= _ent(sys, i, xs)


def _i_entailed_tokens(sys):
    for p in sys.pairs:
        for a in sorted(sys.entail[p], key=tok_key):
            yield (p.witness, p.set, a)


def _h_interpolate(sys, i, xs, a):
    e = _ent(sys, i, xs)
    if e is None or a not in e:
        return True
    return any(zs <= e and a in _ent(sys, i, zs) for zs in sys.con_of[i])


def _h_witness_gen(sys, i, xs, ys):
    e = _ent(sys, i, xs)
    if e is None or not ys <= e:
        return True
    return any(ys in sys.con_of[w] for w in e)


def _i_linked(sys):
    for j in sys.tokens:
        for i in sys.tokens:
            if sys.is_con(j, frozenset([i])):
                yield (i, j)


def _h_con_inherit(sys, i, j):
    return not sys.is_con(j, frozenset([i])) or sys.con_of[i] <= sys.con_of[j]


def _i_linked_sets(sys):
    for i, j in _i_linked(sys):
        for xs in sorted(sys.con_of[i], key=set_key):
            yield (i, j, xs)


def _h_ent_up(sys, i, j, xs):
    if not (sys.is_con(j, frozenset([i])) and sys.is_con(i, xs)):
        return True
    ei, ej = _ent(sys, i, xs), _ent(sys, j, xs)
    return ei <= ej if ej is not None else not ei


def _h_ent_down(sys, i, j, xs):
    if not (sys.is_con(j, frozenset([i])) and sys.is_con(i, xs)):
        return True
    ej = _ent(sys, j, xs)
    return ej is None or ej <= _ent(sys, i, xs)


AXIOMS = (
    Condition(1, "self_consistency", "{i} in Con(i)",
              lambda s: ((t,) for t in s.tokens), _h_self_con),
    Condition(2, "subset_closure", "Y <= X and X in Con(i) => Y in Con(i)",
              _i_subsets_of_con, _h_subset_closed),
    Condition(3, "delta_entailed", "(i, {}) |- Delta",
              lambda s: ((t,) for t in s.tokens), _h_delta),
    Condition(4, "entailment_preserves_con", "(i, X) |- Y => Y in Con(i)",
              _i_entailed_subsets, _h_preserve_con),
    Condition(5, "monotone", "X, Y in Con(i), X <= Y, (i, X) |- a => (i, Y) |- a",
              _i_same_witness, _h_monotone),
    Condition(6, "transitive", "(i, X) |- Y and (i, Y) |- a => (i, X) |- a",
              _i_transitive, _h_transitive),
    Condition(7, "interpolation", "(i, X) |- a => exists Z in Con(i): (i, X) |- Z, (i, Z) |- a",
              _i_entailed_tokens, _h_interpolate),
    Condition(8, "witness_generation", "(i, X) |- Y => exists e: (i, X) |- e, Y in Con(e)",
              _i_entailed_subsets, _h_witness_gen),
    Condition(9, "con_inherited", "{i} in Con(j) => Con(i) <= Con(j)",
              _i_linked, _h_con_inherit),
    Condition(10, "entailment_inherited",
              "{i} in Con(j), X in Con(i), (i, X) |- a => (j, X) |- a",
              _i_linked_sets, _h_ent_up),
    Condition(11, "entailment_conservative",
              "{i} in Con(j), X in Con(i), (j, X) |- a => (i, X) |- a",
              _i_linked_sets, _h_ent_down),
)

AXIOM_BY_NAME = {ax.name: ax for ax in AXIOMS}


@dataclass(frozen=True)
class AxiomReport:
    verdicts: tuple

    def __getitem__(self, key) -> Verdict:
        if isinstance(key, int):
            return self.verdicts[key - 1]
        return {v.name: v for v in self.verdicts}[key]

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def failures(self) -> list:
        return [v for v in self.verdicts if not v.ok]

    def lines(self) -> list:
        return [f"[{n}] {v.line()}" for n, v in enumerate(self.verdicts, 1)]


def check_axioms(sys: InfoSystem) -> AxiomReport:
    return AxiomReport(tuple(ax.check(sys) for ax in AXIOMS))


def require_axioms(sys: InfoSystem, names=None) -> None:
    axioms = AXIOMS if names is None else [AXIOM_BY_NAME[n] for n in names]
    for ax in axioms:
        v = ax.check(sys)
        if not v.ok:
            raise PreconditionViolated(f"{sys.name}: {v.line()}")


# ---------------------------------------------------------------------------
# interpolation-style conditions


def _i_entailed_finite(sys):
    for p in sys.pairs:
        for fs in subsets(sys.entail[p]):
            yield (p.witness, p.set, fs)


def _interpolants(sys, i, xs, pool):
    e = _ent(sys, i, xs)
    return [q for q in pool if q.witness in e and q.set <= e]


def _h_gip(sys, i, xs, fs):
    if not sys.entails_all(i, xs, fs):
        return True
    return any(fs <= sys.entail[q] for q in _interpolants(sys, i, xs, sys.pairs))


GIP = Condition(None, "GIP", "(i, X) |- F => exists (j, Y): (i, X) |- (j, Y), (j, Y) |- F",
                _i_entailed_finite, _h_gip)


def check_gip(sys: InfoSystem) -> Verdict:
    """Global interpolation, cross-checked against interpolation plus witness generation."""
    require_axioms(sys, ["entailment_preserves_con", "monotone", "con_inherited",
                         "entailment_inherited", "entailment_conservative"])
    v = GIP.check(sys)
    pair = AXIOM_BY_NAME["interpolation"].check(sys).ok and \
        AXIOM_BY_NAME["witness_generation"].check(sys).ok
    assert v.ok == pair, "GIP disagrees with interpolation + witness generation"
    return v


def _h_set_interpolate(sys, i, xs, fs):
    e = _ent(sys, i, xs)
    if e is None or not fs <= e:
        return True
    return any(zs <= e and fs <= _ent(sys, i, zs) for zs in sys.con_of[i])


def _i_chain(sys):
    for p in sys.pairs:
        e = sys.entail[p]
        for q in sys.pairs:
            if q.witness in e and q.set <= e:
                yield (p.witness, p.set, q.witness, q.set)


def _h_strong_trans(sys, i, xs, j, ys):
    if not sys.entails_pair(i, xs, j, ys) or ConsPair(j, ys) not in sys.con:
        return True
    return _ent(sys, j, ys) <= _ent(sys, i, xs)


SET_INTERPOLATION = Condition(None, "set_interpolation",
                              "(i, X) |- F => exists Z in Con(i): (i, X) |- Z, (i, Z) |- F",
                              _i_entailed_finite, _h_set_interpolate)
STRONG_TRANSITIVITY = Condition(None, "strong_transitivity",
                                "(i, X) |- (j, Y) and (j, Y) |- a => (i, X) |- a",
                                _i_chain, _h_strong_trans)


def check_derived_rules(sys: InfoSystem) -> Verdict:
    """Both derived rules; a failure on a valid system means a bug somewhere."""
    for cond in (SET_INTERPOLATION, STRONG_TRANSITIVITY):
        v = cond.check(sys)
        if not v.ok:
            return v
    return Verdict("derived_rules", True)


def _h_alg(sys, i, xs, fs):
    if not sys.entails_all(i, xs, fs):
        return True
    refl = sys._cache.get("refl")
    if refl is None:
        refl = sys._cache["refl"] = sorted(reflexive_pairs(sys), key=pair_key)
    return any(fs <= sys.entail[q] for q in _interpolants(sys, i, xs, refl))


def _h_salg(sys, i, xs, a):
    e = _ent(sys, i, xs)
    if e is None or a not in e:
        return True
    for zs in sys.con_of[i]:
        ez = _ent(sys, i, zs)
        if zs <= e and zs <= ez and a in ez:
            return True
    return False


ALG = Condition(None, "ALG", "(i, X) |- F => exists reflexive (j, V): (i, X) |- (j, V), (j, V) |- F",
                _i_entailed_finite, _h_alg)
SALG = Condition(None, "SALG", "(i, X) |- a => exists Z in Con(i): (i, X) |- Z, (i, Z) |- Z, (i, Z) |- a",
                 _i_entailed_tokens, _h_salg)


def check_alg(sys: InfoSystem) -> Verdict:
    v = ALG.check(sys)
    s = SALG.check(sys)
    assert v.ok == s.ok, "ALG and SALG disagree"
    return v


def _i_shared_sets(sys):
    by_set = {}
    for p in sys.pairs:
        by_set.setdefault(p.set, []).append(p.witness)
    for xs in sorted(by_set, key=set_key):
        ws = by_set[xs]
        for i in ws:
            for j in ws:
                if i != j:
                    yield (i, j, xs)


def _h_bc(sys, i, j, xs):
    ei, ej = _ent(sys, i, xs), _ent(sys, j, xs)
    return ei is None or ej is None or ei == ej


BC = Condition(None, "BC", "(i, X), (j, X) in Con => [X]_i = [X]_j", _i_shared_sets, _h_bc)


def check_bc(sys: InfoSystem) -> Verdict:
    return BC.check(sys)
