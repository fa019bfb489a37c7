"""Report function-space sizes for every fixture pair: raw token count, class
count after merging, and state count, or the budget that stops the build."""
import time
from itertools import product

from isw.closure import exp_states
from isw.errors import BudgetExceeded
from isw.fixtures import FIXTURES
from isw.function_space import materialize_exponent


def main():
    names = sorted(FIXTURES, key=lambda k: len(FIXTURES[k]().tokens))
    print(f"{'pair':<16} {'raw':>6} {'classes':>8} {'states':>7} {'secs':>6}")
    for a, b in product(names, repeat=2):
        t0 = time.perf_counter()
        try:
            ex = materialize_exponent(FIXTURES[a](), FIXTURES[b]())
            row = f"{len(ex.tokens):>6} {len(ex.classes):>8} {len(exp_states(ex)):>7}"
        except BudgetExceeded as e:
            row = f"over budget ({e})"
        print(f"{a + '->' + b:<16} {row} {time.perf_counter() - t0:>6.2f}")


if __name__ == "__main__":
    main()
