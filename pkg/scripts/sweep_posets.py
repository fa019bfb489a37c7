"""Tabulate the small-poset sweep: per size, how many pointed posets, L-posets
and bounded-complete ones, and whether every check passed."""
import argparse
import time
from collections import Counter

from isw.posets import check_lpo, is_bounded_complete, pointed_posets
from isw.sweep import check_poset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()
    t0 = time.perf_counter()
    total, lpo, bc, bad = Counter(), Counter(), Counter(), []
    for p in pointed_posets(args.max_n):
        n = len(p.elems)
        total[n] += 1
        if not check_lpo(p).ok:
            continue
        lpo[n] += 1
        bc[n] += is_bounded_complete(p)
        r = check_poset(p)
        if not r.ok:
            bad.append(p.name)
    print(f"{'size':>4} {'posets':>7} {'L':>4} {'BC':>4}")
    for n in sorted(total):
        print(f"{n:>4} {total[n]:>7} {lpo[n]:>4} {bc[n]:>4}")
    print(f"failures: {bad or 'none'}   [{time.perf_counter() - t0:.2f}s]")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
