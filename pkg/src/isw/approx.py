"""Approximable mappings between finite systems."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .config import DEFAULT_BUDGET, Budget
from .core import Condition, ConsPair, InfoSystem, Verdict, pair_key, subsets, tok_key
from .errors import SystemMismatch, UnknownToken


@dataclass(frozen=True, eq=False)
class ApproxMapping:
    """A relation from ``Con`` of ``source`` to tokens of ``target``, stored as
    the image of every consistent pair (missing pairs have empty image)."""

    source: InfoSystem
    target: InfoSystem
    rel: dict
    name: str = "H"

    def img(self, p) -> frozenset:
        return self.rel.get(p, frozenset())

    def relates(self, i, xs, b) -> bool:
        return b in self.rel.get(ConsPair(i, xs), ())

    def relates_all(self, i, xs, ys) -> bool:
        return ys <= self.rel.get(ConsPair(i, xs), frozenset())

    def __eq__(self, other):
        if not isinstance(other, ApproxMapping):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self) -> tuple:
        """Canonical form: the nonempty images in pair order."""
        return tuple((p, tuple(sorted(self.rel[p], key=tok_key)))
                     for p in sorted(self.rel, key=pair_key) if self.rel[p])

    def pairs(self):
        for p in sorted(self.rel, key=pair_key):
            for b in sorted(self.rel[p], key=tok_key):
                yield (p, b)

    def __repr__(self):
        return f"ApproxMapping({self.name!r}: {self.source.name} -> {self.target.name}, {len(list(self.pairs()))} pairs)"


def make_mapping(source, target, rel, name="H") -> ApproxMapping:
    out = {p: frozenset() for p in source.con}
    for k, v in dict(rel).items():
        k = ConsPair(k[0], frozenset(k[1]))
        if k not in source.con:
            raise UnknownToken(f"{k!r} is not consistent in {source.name}")
        v = frozenset(v)
        if not v <= target.token_set:
            raise UnknownToken(f"{sorted(v - target.token_set)} not tokens of {target.name}")
        out[k] = v
    return ApproxMapping(source, target, out, name)


# ---------------------------------------------------------------------------
# the nine conditions; instances are tuples over pairs and tokens


def _img(h, i, xs):
    return h.rel.get(ConsPair(i, xs), frozenset())


def _i_pairs(h):
    return ((p.witness, p.set) for p in h.source.pairs)


def _i_pair_tok(h):
    for p in h.source.pairs:
        for b in sorted(h.img(p), key=tok_key):
            yield (p.witness, p.set, b)


def _h1(h):
    return h.relates(h.source.delta, frozenset(), h.target.delta)


def _i2(h):
    s = h.source
    for p in s.pairs:
        for b in sorted(h.img(p), key=tok_key):
            for xs2 in sorted(s.con_of[p.witness], key=lambda z: (len(z), sorted(z))):
                if p.set <= xs2:
                    yield (p.witness, p.set, xs2, b)


def _h2(h, i, xs, xs2, b):
    if not (xs <= xs2 and h.source.is_con(i, xs2) and h.relates(i, xs, b)):
        return True
    return h.relates(i, xs2, b)


def _i3(h):
    s = h.source
    for p in s.pairs:
        e = s.entail[p]
        for xs2 in sorted(s.con_of[p.witness], key=lambda z: (len(z), sorted(z))):
            if xs2 <= e:
                for b in sorted(h.img(ConsPair(p.witness, xs2)), key=tok_key):
                    yield (p.witness, p.set, xs2, b)


def _h3(h, i, xs, xs2, b):
    s = h.source
    if not (s.entails_all(i, xs, xs2) and h.relates(i, xs2, b)):
        return True
    return h.relates(i, xs, b)


def _h4(h, i, xs, b):
    if not h.relates(i, xs, b):
        return True
    s = h.source
    e = s.entail[ConsPair(i, xs)]
    return any(u <= e and h.relates(i, u, b) for u in s.con_of[i])


def _i5(h):
    t = h.target
    for p in h.source.pairs:
        im = h.img(p)
        for q in t.pairs:
            if q.witness in im and q.set <= im:
                for b in sorted(t.entail[q], key=tok_key):
                    yield (p.witness, p.set, q.witness, q.set, b)


def _h5(h, i, xs, k, ys, b):
    if not (h.relates_all(i, xs, ys | {k}) and h.target.entails(k, ys, b)):
        return True
    return h.relates(i, xs, b)


def _h6(h, i, xs, b):
    if not h.relates(i, xs, b):
        return True
    im = _img(h, i, xs)
    t = h.target
    return any(q.witness in im and q.set <= im and b in t.entail[q] for q in t.pairs)


def _i7(h):
    for p in h.source.pairs:
        for fs in subsets(h.img(p)):
            yield (p.witness, p.set, fs)


def _h7(h, i, xs, fs):
    im = _img(h, i, xs)
    if not fs <= im:
        return True
    return any(h.target.is_con(e, fs) for e in im)


def _i89(h):
    s = h.source
    for j in s.tokens:
        for i in s.tokens:
            if s.is_con(j, frozenset([i])):
                for xs in sorted(s.con_of[i], key=lambda z: (len(z), sorted(z))):
                    for b in h.target.tokens:
                        yield (i, j, xs, b)


def _h8(h, i, j, xs, b):
    s = h.source
    if not (s.is_con(j, frozenset([i])) and s.is_con(i, xs) and h.relates(i, xs, b)):
        return True
    return h.relates(j, xs, b)


def _h9(h, i, j, xs, b):
    s = h.source
    if not (s.is_con(j, frozenset([i])) and s.is_con(i, xs) and h.relates(j, xs, b)):
        return True
    return h.relates(i, xs, b)


MAP_CONDITIONS = (
    Condition(1, "delta", "(Delta, {}) H Delta'", lambda h: [()], lambda h: _h1(h)),
    Condition(2, "monotone", "X <= X', (i, X) H b => (i, X') H b", _i2, _h2),
    Condition(3, "left_entailment", "(i, X) |- X', (i, X') H b => (i, X) H b", _i3, _h3),
    Condition(4, "left_interpolation", "(i, X) H b => exists U: (i, X) |- U, (i, U) H b",
              _i_pair_tok, _h4),
    Condition(5, "right_closure", "(i, X) H (k, Y), (k, Y) |-' b => (i, X) H b", _i5, _h5),
    Condition(6, "right_interpolation", "(i, X) H b => exists (d, V): (i, X) H (d, V), (d, V) |-' b",
              _i_pair_tok, _h6),
    Condition(7, "witness_generation", "(i, X) H F => exists e: (i, X) H e, F in Con'(e)", _i7, _h7),
    Condition(8, "witness_up", "{i} in Con(j), (i, X) H b => (j, X) H b", _i89, _h8),
    Condition(9, "witness_down", "{i} in Con(j), (j, X) H b => (i, X) H b", _i89, _h9),
)
MAP_BY_NAME = {c.name: c for c in MAP_CONDITIONS}


# combined rules


def _left_pairs(h, i, xs, fs):
    s = h.source
    e = s.entail[ConsPair(i, xs)]
    return [q for q in s.pairs if q.witness in e and q.set <= e and fs <= h.img(q)]


def _right_pairs(h, im, fs):
    t = h.target
    return [q for q in t.pairs if q.witness in im and q.set <= im and fs <= t.entail[q]]


def _h_left(h, i, xs, fs):
    return not fs <= _img(h, i, xs) or bool(_left_pairs(h, i, xs, fs))


def _h_right(h, i, xs, fs):
    im = _img(h, i, xs)
    return not fs <= im or bool(_right_pairs(h, im, fs))


def _h_both(h, i, xs, fs):
    if not fs <= _img(h, i, xs):
        return True
    s = h.source
    e = s.entail[ConsPair(i, xs)]
    for c in s.pairs:
        if c.witness in e and c.set <= e:
            if _right_pairs(h, h.img(c), fs):
                return True
    return False


def _i_strong(h):
    s = h.source
    for p in s.pairs:
        e = s.entail[p]
        for q in s.pairs:
            if q.witness in e and q.set <= e:
                for b in sorted(h.img(q), key=tok_key):
                    yield (p.witness, p.set, q.witness, q.set, b)


def _h_strong(h, i, xs, j, ys, b):
    if not (h.source.entails_pair(i, xs, j, ys) and h.relates(j, ys, b)):
        return True
    return h.relates(i, xs, b)


LEFT_RULE = Condition(None, "left_rule", "(i, X) H F => exists (c, U): (i, X) |- (c, U), (c, U) H F",
                      _i7, _h_left)
RIGHT_RULE = Condition(None, "right_rule", "(i, X) H F => exists (e, V): (i, X) H (e, V), (e, V) |-' F",
                       _i7, _h_right)
BOTH_RULE = Condition(None, "interpolation_rule",
                      "(i, X) H F => exists (c, U), (e, V): (i, X) |- (c, U) H (e, V) |-' F",
                      _i7, _h_both)
STRONG_LEFT = Condition(None, "strong_left_entailment", "(i, X) |- (j, Y), (j, Y) H b => (i, X) H b",
                        _i_strong, _h_strong)


@dataclass(frozen=True)
class MapReport:
    verdicts: tuple
    rules: tuple

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def __bool__(self):
        return self.ok

    def __getitem__(self, key):
        if isinstance(key, int):
            return self.verdicts[key - 1]
        return {v.name: v for v in self.verdicts + self.rules}[key]

    def failures(self):
        return [v for v in self.verdicts if not v.ok]

    def lines(self):
        return [f"[{n}] {v.line()}" for n, v in enumerate(self.verdicts, 1)]


def check_approx(h: ApproxMapping) -> MapReport:
    """All nine conditions, plus the combined interpolation rules.

    When monotonicity, left entailment, right closure and witness-up all hold,
    the combined rules must agree with the conditions they replace; this is
    asserted.  On a mapping that passes, the strengthened left rule must hold.
    """
    vs = tuple(c.check(h) for c in MAP_CONDITIONS)
    left, right, both = LEFT_RULE.check(h), RIGHT_RULE.check(h), BOTH_RULE.check(h)
    strong = STRONG_LEFT.check(h)
    byname = {v.name: v.ok for v in vs}
    if all(byname[n] for n in ("monotone", "left_entailment", "right_closure", "witness_up")):
        assert left.ok == (byname["left_interpolation"] and byname["witness_down"])
        assert right.ok == (byname["right_interpolation"] and byname["witness_generation"])
        assert both.ok == (left.ok and right.ok)
    if all(v.ok for v in vs):
        assert strong.ok, "strengthened left rule fails on an approximable mapping"
    return MapReport(vs, (left, right, both, strong))


def identity(a: InfoSystem) -> ApproxMapping:
    return ApproxMapping(a, a, dict(a.entail), f"Id_{a.name}")


def compose(h: ApproxMapping, g: ApproxMapping) -> ApproxMapping:
    """Diagrammatic order: first ``h``, then ``g``."""
    if h.target != g.source:
        raise SystemMismatch(f"{h.target.name} is not {g.source.name}")
    mid = h.target
    rel = {}
    for p in h.source.pairs:
        im = h.img(p)
        out = set()
        for q in mid.pairs:
            if q.witness in im and q.set <= im:
                out |= g.img(q)
        rel[p] = frozenset(out)
    return ApproxMapping(h.source, g.target, rel, f"{h.name};{g.name}")


def constant_bottom(a: InfoSystem, b: InfoSystem) -> ApproxMapping:
    """Every pair relates exactly to the bottom state of ``b``."""
    bot = b.entail[ConsPair(b.delta, frozenset())]
    return ApproxMapping(a, b, {p: bot for p in a.con}, f"bot_{a.name}_{b.name}")


def transport_along_equiv(h: ApproxMapping) -> Verdict:
    """Related pairs stay related when the witness moves within its equivalence class."""
    from .function_space import witness_equiv

    s = h.source
    for p in s.pairs:
        for j in s.tokens:
            if j == p.witness or not witness_equiv(s, p.witness, j, p.set):
                continue
            missing = h.img(p) - h.img(ConsPair(j, p.set))
            if missing:
                return Verdict("transport", False, (p.witness, j, p.set, min(missing, key=tok_key)))
    return Verdict("transport", True)


def enumerate_mappings(a: InfoSystem, b: InfoSystem, budget: Budget = DEFAULT_BUDGET) -> list:
    """Every approximable mapping ``a -> b`` by filtering all relations.

    Images are restricted to entailment-closed-looking candidates only through
    the condition checks themselves; the raw search space is ``2**(|Con|*|B|)``.
    """
    pairs = a.pairs
    budget.need("relation search", 1 << (len(pairs) * len(b.tokens)), "max_relations")
    images = list(subsets(b.tokens))
    out = []
    for choice in iproduct(images, repeat=len(pairs)):
        h = ApproxMapping(a, b, dict(zip(pairs, choice)))
        if _h1(h) and all(c.check(h).ok for c in MAP_CONDITIONS):
            out.append(h)
    return out
