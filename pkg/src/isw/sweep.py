"""Exhaustive checks over small pointed posets."""
from __future__ import annotations

from dataclasses import dataclass, field

from .config import DEFAULT_BUDGET, Budget
from .core import Verdict, check_alg, check_axioms, check_bc, check_gip
from .posets import FinitePoset, check_lpo, info_from_domain, is_bounded_complete, order_iso, pointed_posets
from .states import check_ldomain, enumerate_states


@dataclass
class PosetResult:
    poset: FinitePoset
    verdicts: list

    @property
    def ok(self):
        return all(v.ok for v in self.verdicts)


@dataclass
class SweepReport:
    generated: int = 0
    l_posets: int = 0
    bounded_complete: int = 0
    results: list = field(default_factory=list)

    @property
    def ok(self):
        return all(r.ok for r in self.results)

    def failures(self):
        return [r for r in self.results if not r.ok]


def check_poset(p: FinitePoset, budget: Budget = DEFAULT_BUDGET) -> PosetResult:
    """Represent ``p`` as a system and compare it with its own state poset."""
    sys = info_from_domain(p)
    out = list(check_axioms(sys).verdicts)
    if all(v.ok for v in out):
        out.append(check_gip(sys))
    out.append(check_alg(sys))
    sp = enumerate_states(sys, budget)
    out.append(Verdict("states isomorphic to poset", order_iso(p, sp.as_poset()) is not None))
    out.append(check_ldomain(sp))
    bc = is_bounded_complete(p)
    out.append(Verdict("BC iff bounded-complete", check_bc(sys).ok == bc, None if check_bc(sys).ok == bc else (bc,)))
    return PosetResult(p, out)


def sweep_posets(max_n: int, budget: Budget = DEFAULT_BUDGET) -> SweepReport:
    rep = SweepReport()
    for p in pointed_posets(max_n):
        rep.generated += 1
        if not check_lpo(p).ok:
            continue
        rep.l_posets += 1
        rep.bounded_complete += is_bounded_complete(p)
        rep.results.append(check_poset(p, budget))
    return rep
