"""States of a finite system and the L-domain they form."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .config import DEFAULT_BUDGET, Budget
from .core import ConsPair, InfoSystem, Verdict, entailed_set, fmt_set, reflexive_pairs, set_key, subsets
from .errors import NotBounded
from .posets import FinitePoset, check_lpo, is_bounded_complete, way_below_table


def _finitely_consistent(sys, x) -> tuple | None:
    for fs in subsets(x):
        if not any(sys.is_con(i, fs) for i in x):
            return (fs,)
    return None


def _closed(sys, x) -> tuple | None:
    for p in sys.pairs:
        if p.witness in x and p.set <= x:
            extra = sys.entail[p] - x
            if extra:
                return (p, min(extra))
    return None


def _derivable(sys, x) -> tuple | None:
    for a in sorted(x):
        if not any(p.witness in x and p.set <= x and a in sys.entail[p] for p in sys.pairs):
            return (a,)
    return None


def _st(sys, x) -> bool:
    inside = [sys.entail[p] for p in sys.pairs if p.witness in x and p.set <= x]
    return all(any(fs <= e for e in inside) for fs in subsets(x))


def is_state(sys: InfoSystem, x) -> Verdict:
    """Finitely consistent, closed under entailment, and every member derivable."""
    x = frozenset(x)
    c1, c2, c3 = _finitely_consistent(sys, x), _closed(sys, x), _derivable(sys, x)
    assert _st(sys, x) == (c1 is None and c3 is None), "combined state condition disagrees"
    for name, cex in (("finitely_consistent", c1), ("closed", c2), ("derivable", c3)):
        if cex is not None:
            return Verdict(name, False, cex)
    return Verdict("state", True)


def state_label(x) -> str:
    return fmt_set(x)


@dataclass(frozen=True, eq=False)
class StatePoset:
    sys: InfoSystem
    states: tuple       # frozensets in shortlex order
    bottom: frozenset

    @cached_property
    def index(self) -> dict:
        return {s: n for n, s in enumerate(self.states)}

    @cached_property
    def order(self) -> tuple:
        """Adjacency matrix of inclusion."""
        return tuple(tuple(a <= b for b in self.states) for a in self.states)

    def le(self, x, y) -> bool:
        return self.order[self.index[x]][self.index[y]]

    @cached_property
    def labels(self) -> dict:
        return {s: state_label(s) for s in self.states}

    def as_poset(self) -> FinitePoset:
        lab = self.labels
        leq = frozenset((lab[a], lab[b]) for a in self.states for b in self.states if a <= b)
        return FinitePoset(tuple(lab[s] for s in self.states), leq, lab[self.bottom], self.sys.name)

    @cached_property
    def way_below_order(self) -> frozenset:
        """Order-theoretic way-below, over states."""
        back = {v: k for k, v in self.labels.items()}
        return frozenset((back[a], back[b]) for a, b in way_below_table(self.as_poset()))

    def __len__(self):
        return len(self.states)


def enumerate_states(sys: InfoSystem, budget: Budget = DEFAULT_BUDGET) -> StatePoset:
    budget.need(f"state enumeration over {sys.name}", len(sys.tokens), "max_tokens")
    states = tuple(x for x in subsets(sys.tokens, 1) if is_state(sys, x).ok)
    bottom = entailed_set(sys, (sys.delta, frozenset()))
    assert bottom in states and all(bottom <= s for s in states)
    return StatePoset(sys, states, bottom)


def principal_state(sys: InfoSystem, p) -> frozenset:
    x = entailed_set(sys, p)
    assert is_state(sys, x).ok
    return x


def way_below(sp: StatePoset, x, y) -> bool:
    """``x << y`` iff some consistent pair inside ``y`` entails all of ``x``."""
    sys = sp.sys
    via_entail = any(p.witness in y and p.set <= y and x <= sys.entail[p] for p in sys.pairs)
    assert via_entail == ((x, y) in sp.way_below_order), "way-below characterisation disagrees"
    return via_entail


def local_lub(sys: InfoSystem, sp: StatePoset, x, y, z) -> frozenset:
    """Least upper bound of ``x`` and ``y`` among states below ``z``."""
    if not (x <= z and y <= z):
        raise NotBounded("x and y must both lie below z")
    xy = x | y
    out = set()
    for p in sys.pairs:
        if p.witness in z and p.set <= xy:
            out |= sys.entail[p]
    out = frozenset(out)
    ubs = [s for s in sp.states if x <= s and y <= s and s <= z]
    assert out in ubs and all(out <= s for s in ubs), "local lub formula is not the least bound"
    return out


def _basis_of(sys, z) -> list:
    return [sys.entail[p] for p in sys.pairs if p.witness in z and p.set <= z]


def check_ldomain(sp: StatePoset) -> Verdict:
    if any(not sp.bottom <= s for s in sp.states):
        return Verdict("L-domain", False, (sp.bottom,), "bottom is not least")
    v = check_lpo(sp.as_poset())
    if not v.ok:
        return v
    for z in sp.states:
        fam = _basis_of(sp.sys, z)
        if frozenset().union(*fam) != z:
            return Verdict("L-domain", False, (z,), "state is not the union of its basis")
        for a in fam:
            for b in fam:
                if not any(a <= c and b <= c for c in fam):
                    return Verdict("L-domain", False, (z, a, b), "basis family is not directed")
    return Verdict("L-domain", True)


def compact_states(sys: InfoSystem, sp: StatePoset) -> frozenset:
    out = frozenset(s for s in sp.states if way_below(sp, s, s))
    assert {sys.entail[p] for p in reflexive_pairs(sys)} <= out
    return out


def states_bounded_complete(sp: StatePoset) -> bool:
    return is_bounded_complete(sp.as_poset())


def hasse_edges(sp: StatePoset) -> list:
    out = []
    for a in sp.states:
        for b in sp.states:
            if a < b and not any(a < c < b for c in sp.states):
                out.append((a, b))
    return sorted(out, key=lambda e: (sp.index[e[0]], sp.index[e[1]]))


def sorted_states(xs) -> list:
    return sorted(xs, key=set_key)


def bottom_pair(sys: InfoSystem) -> ConsPair:
    return ConsPair(sys.delta, frozenset())
