"""Time the compiled and pure-Python assignment sweeps on the same programs.

    python3 benchmarks/bench_kernel.py [--repeat N] [--vars 4 6 8]
"""
from __future__ import annotations

import argparse
import random
import sys
import timeit
from pathlib import Path

import numpy as np

from essentree import App, Var, load_fta, variables
from essentree import _pykernel
from essentree.automaton import _emit

try:
    from essentree import _ckernel
except ImportError:
    _ckernel = None

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def chain_term(n_vars: int):
    """Left-leaning sum/product alternation over x1..xn for the mod-3 automaton."""
    t = Var(1)
    for i in range(2, n_vars + 1):
        f = "g1" if i % 2 else "g2"
        t = App(f, (t, App("f2", (Var(i),)), App("1")))
    return t


def random_term(rng: random.Random, n_vars: int, size: int):
    leaves = [Var(i) for i in range(1, n_vars + 1)]
    nodes = list(leaves)
    for _ in range(size):
        f = rng.choice(["g1", "g2", "f0", "f1", "f2"])
        k = 3 if f.startswith("g") else 1
        nodes.append(App(f, tuple(rng.choice(nodes) for _ in range(k))))
    return nodes[-1]


def compile_program(a, t):
    comp = a._compiled()
    order = sorted(variables(t))
    _, code = _emit(comp, a.signature, t, {v: k for k, v in enumerate(order)})
    prog = np.array(code, dtype=np.int32).reshape(-1, 3)
    return (prog, comp.tables, comp.leaf_states, len(a.states), len(order)), len(prog)


def bench(fn, args, repeat: int) -> float:
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--vars", type=int, nargs="+", default=[4, 6, 8])
    args = ap.parse_args(argv)
    if _ckernel is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first", file=sys.stderr)
        return 1

    a = load_fta(FIXTURES / "a2.fta")
    rng = random.Random(0)
    cases = []
    for n in args.vars:
        cases.append((f"chain n={n}", chain_term(n)))
        cases.append((f"random n={n}", random_term(rng, n, 4 * n)))

    print(f"{'case':<14}{'runs':>8}{'ops':>6}{'python s':>12}{'cython s':>12}{'speedup':>9}")
    for name, t in cases:
        prog_args, ops = compile_program(a, t)
        runs = 3 ** prog_args[-1]
        assert np.array_equal(_pykernel.sweep(*prog_args), _ckernel.sweep(*prog_args))
        py = bench(_pykernel.sweep, prog_args, args.repeat)
        cy = bench(_ckernel.sweep, prog_args, args.repeat)
        print(f"{name:<14}{runs:>8}{ops:>6}{py:>12.4f}{cy:>12.6f}{py / cy:>8.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
