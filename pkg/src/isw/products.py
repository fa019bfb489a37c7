"""Terminal object, binary products, projections and pairing."""
from __future__ import annotations

from dataclasses import dataclass

from .approx import ApproxMapping, compose
from .config import DEFAULT_BUDGET, Budget
from .core import ConsPair, InfoSystem, build_system, subsets
from .errors import ParseError, SystemMismatch
from .fixtures import term


def terminal() -> InfoSystem:
    return term()


def _wrap(t: str) -> str:
    return f"[{t}]" if ("." in t or "[" in t or "]" in t) else t


def pair_token(l: str, r: str) -> str:
    """Flat name for a product token; components containing ``.`` are bracketed."""
    return f"{_wrap(l)}.{_wrap(r)}"


def _take(s: str, pos: int):
    if s.startswith("[", pos):
        depth = 0
        for k in range(pos, len(s)):
            if s[k] == "[":
                depth += 1
            elif s[k] == "]":
                depth -= 1
                if depth == 0:
                    return s[pos + 1:k], k + 1
        raise ParseError(f"unbalanced brackets in {s!r}")
    k = s.find(".", pos)
    return (s[pos:], len(s)) if k < 0 else (s[pos:k], k)


def split_token(t: str):
    left, pos = _take(t, 0)
    if pos >= len(t) or t[pos] != ".":
        raise ParseError(f"{t!r} is not a product token")
    right, end = _take(t, pos + 1)
    if end != len(t):
        raise ParseError(f"trailing text in product token {t!r}")
    return left, right


@dataclass(frozen=True, eq=False)
class ProductSystem:
    sys: InfoSystem
    left: InfoSystem
    right: InfoSystem
    pr1: ApproxMapping
    pr2: ApproxMapping
    parts: dict  # product token -> (left token, right token)
    tok: dict    # (left token, right token) -> product token

    def pr(self, xs, side: int) -> frozenset:
        return frozenset(self.parts[t][side] for t in xs)

    def rect(self, s, x) -> frozenset:
        """The product tokens of ``S x X``."""
        return frozenset(self.tok[(a, b)] for a in s for b in x)


def product(a1: InfoSystem, a2: InfoSystem, budget: Budget = DEFAULT_BUDGET) -> ProductSystem:
    toks, parts, back = [], {}, {}
    for l in a1.tokens:
        for r in a2.tokens:
            t = pair_token(l, r)
            toks.append(t)
            parts[t] = (l, r)
            back[(l, r)] = t
    budget.need(f"product {a1.name} x {a2.name}", len(toks), "max_tokens")

    def pr(xs, k):
        return frozenset(parts[t][k] for t in xs)

    con, ent = [], {}
    sets = list(subsets(toks))
    for t in toks:
        i, j = parts[t]
        for xs in sets:
            x1, x2 = pr(xs, 0), pr(xs, 1)
            if a1.is_con(i, x1) and a2.is_con(j, x2):
                e1, e2 = a1.entail[ConsPair(i, x1)], a2.entail[ConsPair(j, x2)]
                con.append((t, xs))
                ent[(t, xs)] = frozenset(back[(u, v)] for u in e1 for v in e2)
    sys = build_system(toks, back[(a1.delta, a2.delta)], con, ent, f"{a1.name}x{a2.name}")
    p1 = {p: a1.entail[ConsPair(parts[p.witness][0], pr(p.set, 0))] for p in sys.con}
    p2 = {p: a2.entail[ConsPair(parts[p.witness][1], pr(p.set, 1))] for p in sys.con}
    return ProductSystem(sys, a1, a2, ApproxMapping(sys, a1, p1, "Pr1"),
                         ApproxMapping(sys, a2, p2, "Pr2"), parts, back)


def pairing(f: ApproxMapping, g: ApproxMapping, prod: ProductSystem) -> ApproxMapping:
    """``(i, X) <f, g> (a1, a2)`` iff ``(i, X) f a1`` and ``(i, X) g a2``."""
    if f.source != g.source:
        raise SystemMismatch("pairing needs a common source")
    if f.target != prod.left or g.target != prod.right:
        raise SystemMismatch("pairing targets differ from the product factors")
    rel = {p: frozenset(prod.tok[(u, v)] for u in f.img(p) for v in g.img(p)) for p in f.source.con}
    return ApproxMapping(f.source, prod.sys, rel, f"<{f.name},{g.name}>")


def product_map(f: ApproxMapping, g: ApproxMapping, dom: ProductSystem, cod: ProductSystem) -> ApproxMapping:
    """``f x g`` between products, as pairing of the composites with the projections."""
    return pairing(compose(dom.pr1, f), compose(dom.pr2, g), cod)


def terminal_mediator(a: InfoSystem, t: InfoSystem | None = None) -> ApproxMapping:
    t = t or terminal()
    return ApproxMapping(a, t, {p: frozenset([t.delta]) for p in a.con}, f"!_{a.name}")
