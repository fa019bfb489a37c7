"""The three reference systems and their source posets."""
from __future__ import annotations

from .core import InfoSystem, build_system
from .posets import FinitePoset, flat, info_from_domain, make_poset


def term() -> InfoSystem:
    """The one-point system."""
    d = "delta"
    con = [(d, frozenset()), (d, frozenset([d]))]
    return build_system([d], d, con, {p: {d} for p in con}, "TERM")


def flat2_poset() -> FinitePoset:
    return flat(["a", "b"], name="FLAT2")


def bfly_poset() -> FinitePoset:
    lo, hi = ["x", "y"], ["p", "q"]
    pairs = [("bot", t) for t in lo] + [(l, h) for l in lo for h in hi]
    return make_poset(["bot", *lo, *hi], pairs, "bot", "BFLY")


def flat2() -> InfoSystem:
    return info_from_domain(flat2_poset(), "FLAT2")


def bfly() -> InfoSystem:
    return info_from_domain(bfly_poset(), "BFLY")


FIXTURES = {"TERM": term, "FLAT2": flat2, "BFLY": bfly}
