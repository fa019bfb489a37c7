"""Finite pointed posets, their canonical information systems, and brute-force
order-theoretic helpers used as independent oracles."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations, product

from .config import DEFAULT_BUDGET, Budget
from .core import InfoSystem, Verdict, build_system, subsets, tok_key
from .errors import NotBelow, NotBounded, NotLDomain


@dataclass(frozen=True, eq=False)
class FinitePoset:
    elems: tuple
    leq: frozenset  # pairs (x, y) meaning x <= y; reflexive-transitive closed
    bottom: object = None
    name: str = "D"

    def le(self, x, y) -> bool:
        return (x, y) in self.leq

    @cached_property
    def down(self) -> dict:
        return {y: frozenset(x for x in self.elems if (x, y) in self.leq) for y in self.elems}

    @cached_property
    def up(self) -> dict:
        return {x: frozenset(y for y in self.elems if (x, y) in self.leq) for x in self.elems}

    def __eq__(self, other):
        return (isinstance(other, FinitePoset) and set(self.elems) == set(other.elems)
                and self.leq == other.leq and self.bottom == other.bottom)

    def __hash__(self):
        return hash((frozenset(self.elems), self.leq))

    def __repr__(self):
        return f"FinitePoset({self.name!r}, {list(self.elems)})"


def make_poset(elems, pairs, bottom=None, name="D") -> FinitePoset:
    """Build a poset from any generating set of ``x <= y`` pairs."""
    elems = tuple(elems)
    es = set(elems)
    rel = {(x, x) for x in elems}
    for x, y in pairs:
        if x not in es or y not in es:
            raise ValueError(f"pair ({x}, {y}) uses an undeclared element")
        rel.add((x, y))
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    for (a, b) in rel:
        if a != b and (b, a) in rel:
            raise ValueError(f"antisymmetry fails: {a} and {b} are mutually below")
    if bottom is None:
        mins = [x for x in elems if all((x, y) in rel for y in elems)]
        bottom = mins[0] if mins else None
    return FinitePoset(elems, frozenset(rel), bottom, name)


def is_pointed(p: FinitePoset) -> bool:
    return p.bottom is not None and all(p.le(p.bottom, x) for x in p.elems)


def upper_bounds(p: FinitePoset, xs, within=None) -> list:
    pool = p.elems if within is None else within
    return [u for u in pool if all(p.le(x, u) for x in xs)]


def least(p: FinitePoset, cands):
    for c in cands:
        if all(p.le(c, d) for d in cands):
            return c
    return None


def minimal(p: FinitePoset, cands) -> list:
    return [c for c in cands if not any(d != c and p.le(d, c) for d in cands)]


def local_join(p: FinitePoset, xs, z):
    """Least upper bound of ``xs`` inside the principal ideal of ``z``."""
    xs = list(xs)
    if any(not p.le(x, z) for x in xs):
        raise NotBounded(f"{xs} is not below {z}")
    lub = least(p, upper_bounds(p, xs, p.down[z]))
    if lub is None:
        raise NotBounded(f"{xs} has no least upper bound below {z}")
    return lub


def global_join(p: FinitePoset, xs):
    return least(p, upper_bounds(p, xs))


def check_lpo(p: FinitePoset) -> Verdict:
    """Pointed, and every pair bounded by ``z`` has a least upper bound in the ideal of ``z``."""
    if not is_pointed(p):
        return Verdict("L-domain", False, (), "no least element")
    for x, y in product(p.elems, repeat=2):
        for z in upper_bounds(p, (x, y)):
            if least(p, upper_bounds(p, (x, y), p.down[z])) is None:
                return Verdict("L-domain", False, (x, y, z),
                               "pair has no least upper bound below z")
    return Verdict("L-domain", True)


def is_bounded_complete(p: FinitePoset) -> bool:
    """Every bounded subset has a least upper bound (finite case: pairs and the empty set)."""
    if not is_pointed(p):
        return False
    for x, y in product(p.elems, repeat=2):
        ubs = upper_bounds(p, (x, y))
        if ubs and least(p, ubs) is None:
            return False
    return True


def directed_subsets(p: FinitePoset, budget: Budget = DEFAULT_BUDGET):
    budget.need("directed-set search", len(p.elems), "max_tokens")
    for ds in subsets(p.elems, 1):
        if all(upper_bounds(p, (a, b), ds) for a, b in combinations(ds, 2)):
            yield ds


def way_below_table(p: FinitePoset, budget: Budget = DEFAULT_BUDGET) -> frozenset:
    """``x << y`` computed from the directed-set definition."""
    dirs = [(d, global_join(p, d)) for d in directed_subsets(p, budget)]
    out = set()
    for x, y in product(p.elems, repeat=2):
        ok = True
        for d, lub in dirs:
            if lub is not None and p.le(y, lub) and not any(p.le(x, e) for e in d):
                ok = False
                break
        if ok:
            out.add((x, y))
    return frozenset(out)


def info_from_domain(p: FinitePoset, name: str | None = None) -> InfoSystem:
    """Canonical system of a finite L-domain: every element is a basis token,
    ``(i, X)`` is consistent when ``X`` lies below ``i``, and ``(i, X)`` entails
    everything below the join of ``X`` taken inside the ideal of ``i``."""
    v = check_lpo(p)
    if not v.ok:
        raise NotLDomain(v.line())
    wb = way_below_table(p)
    assert wb == p.leq, "way-below differs from the order on a finite poset"
    con, ent = [], {}
    for i in p.elems:
        for xs in subsets(p.down[i]):
            top = local_join(p, xs, i)
            con.append((i, xs))
            ent[(i, xs)] = p.down[top]
    return build_system(p.elems, p.bottom, con, ent, name or p.name)


# ---------------------------------------------------------------------------
# isomorphism and enumeration


def _signature(p: FinitePoset, x):
    return (len(p.down[x]), len(p.up[x]))


def order_iso(p: FinitePoset, q: FinitePoset):
    """An order isomorphism ``p -> q`` as a dict, or ``None``."""
    if len(p.elems) != len(q.elems) or len(p.leq) != len(q.leq):
        return None
    ps = sorted(p.elems, key=lambda x: (_signature(p, x), tok_key(x)))
    cands = {x: [y for y in q.elems if _signature(q, y) == _signature(p, x)] for x in ps}
    m, used = {}, set()

    def extend(k):
        if k == len(ps):
            return True
        x = ps[k]
        for y in cands[x]:
            if y in used:
                continue
            if all(p.le(x, u) == q.le(y, m[u]) and p.le(u, x) == q.le(m[u], y) for u in m):
                m[x] = y
                used.add(y)
                if extend(k + 1):
                    return True
                del m[x]
                used.discard(y)
        return False

    return dict(m) if extend(0) else None


def canonical_form(n: int, rel: frozenset) -> tuple:
    """Lexicographically least adjacency matrix over all relabelings."""
    best = None
    for perm in permutations(range(n)):
        mat = tuple(sorted((perm[a], perm[b]) for a, b in rel))
        if best is None or mat < best:
            best = mat
    return best


def pointed_posets(max_n: int):
    """All pointed posets with 1..max_n elements, one per isomorphism class."""
    out = []
    for n in range(1, max_n + 1):
        m = n - 1
        seen = set()
        pairs = [(a, b) for a in range(m) for b in range(m) if a != b]
        for bits in range(1 << len(pairs)):
            rel = {(a, a) for a in range(m)}
            rel.update(pr for k, pr in enumerate(pairs) if bits >> k & 1)
            if any((b, a) in rel for a, b in rel if a != b):
                continue
            if any((a, d) not in rel for a, b in rel for c, d in rel if b == c):
                continue
            key = canonical_form(m, frozenset(rel))
            if key in seen:
                continue
            seen.add(key)
            names = ["bot"] + [f"d{k}" for k in range(m)]
            full = [("bot", nm) for nm in names] + [(f"d{a}", f"d{b}") for a, b in rel]
            out.append(make_poset(names, full, "bot", f"P{n}_{len(seen)}"))
    return out


def product_poset(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    elems = [(x, y) for x in p.elems for y in q.elems]
    rel = [((a, b), (c, d)) for (a, b) in elems for (c, d) in elems if p.le(a, c) and q.le(b, d)]
    return make_poset(elems, rel, (p.bottom, q.bottom), f"{p.name}x{q.name}")


# ---------------------------------------------------------------------------
# monotone functions


@dataclass(frozen=True)
class MonoFunction:
    src: FinitePoset
    dst: FinitePoset
    table: tuple = field(compare=True)  # ((x, f(x)), ...) in src order

    def __call__(self, x):
        return dict(self.table)[x]

    @cached_property
    def as_dict(self) -> dict:
        return dict(self.table)

    def le(self, other: "MonoFunction") -> bool:
        return all(self.dst.le(self.as_dict[x], other.as_dict[x]) for x in self.src.elems)


def mono_from_dict(p, q, d: dict) -> MonoFunction:
    return MonoFunction(p, q, tuple((x, d[x]) for x in p.elems))


def is_monotone(p, q, d: dict) -> bool:
    return all(q.le(d[x], d[y]) for x, y in p.leq)


def monotone_functions(p: FinitePoset, q: FinitePoset, budget: Budget = DEFAULT_BUDGET) -> list:
    """All monotone maps ``p -> q`` by backtracking in a linear extension of ``p``."""
    order = sorted(p.elems, key=lambda x: len(p.down[x]))
    out = []
    cur = {}

    def go(k):
        if k == len(order):
            out.append(mono_from_dict(p, q, cur))
            budget.need("monotone functions", len(out), "max_relations")
            return
        x = order[k]
        for y in q.elems:
            if all(q.le(cur[u], y) for u in p.down[x] if u in cur and u != x):
                cur[x] = y
                go(k + 1)
                del cur[x]

    go(0)
    return out


def single_step(p, q, d, d2) -> MonoFunction:
    """``x -> d2`` when ``d << x``, else bottom."""
    wb = way_below_table(p)
    f = {x: d2 if (d, x) in wb else q.bottom for x in p.elems}
    assert is_monotone(p, q, f)
    return mono_from_dict(p, q, f)


def step_join_below(f: MonoFunction, steps) -> MonoFunction:
    """Pointwise join of single steps, taken below ``f``."""
    p, q = f.src, f.dst
    for d, d2 in steps:
        s = single_step(p, q, d, d2)
        if not s.le(f):
            raise NotBelow(f"step ({d}, {d2}) is not below the function")
    out = {}
    for x in p.elems:
        active = [d2 for d, d2 in steps if p.le(d, x)]
        out[x] = local_join(q, active, f(x))
    g = mono_from_dict(p, q, out)
    assert is_monotone(p, q, out)
    return g


def flat(names, bottom="bot", name="FLAT") -> FinitePoset:
    return make_poset([bottom, *names], [(bottom, n) for n in names], bottom, name)
