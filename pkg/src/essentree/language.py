"""Ground tree languages of automata: finiteness, enumeration, minimization.

``L(A)`` here is the set of ground terms whose run ends in a final state.
Terms with variables are handled by :mod:`essentree.reduction`; once a
variable occurs, renaming it gives infinitely many recognizable terms, so
finiteness is only meaningful for the ground part.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .automaton import SearchBudget, TreeAutomaton, as_budget, dump_fta
from .equivalence import a_equivalent
from .errors import SearchBudgetExceeded
from .reduction import RewriteStep, reduce
from .terms import App, Term, format_term

DEFAULT_OUTPUT_LIMIT = 10**6


@dataclass(frozen=True)
class UsefulnessReport:
    reachable: frozenset[str]
    coreachable: frozenset[str]

    @property
    def useful(self) -> frozenset[str]:
        return self.reachable & self.coreachable


def _reachable(a: TreeAutomaton) -> set[str]:
    reach = set(a.nullary[f] for f in a.signature.nullary)
    changed = True
    while changed:
        changed = False
        for f, n in a.signature.items():
            if n == 0:
                continue
            for args in itertools.product(sorted(reach), repeat=n):
                q = a.rules[f][args]
                if q not in reach:
                    reach.add(q)
                    changed = True
    return reach


def _contexts(a: TreeAutomaton, reach: set[str]):
    """Yield ``(source, symbol, slot, target)`` for transitions whose other slots are reachable."""
    for f, n in a.signature.items():
        if n == 0:
            continue
        for args, q in a.rules[f].items():
            for k, src in enumerate(args):
                if all(s in reach for j, s in enumerate(args) if j != k):
                    yield src, f, k, q


def usefulness(a: TreeAutomaton) -> UsefulnessReport:
    a._compiled()
    reach = _reachable(a)
    co = set(a.final)
    edges = list(_contexts(a, reach))
    changed = True
    while changed:
        changed = False
        for src, _, _, q in edges:
            if q in co and src not in co:
                co.add(src)
                changed = True
    return UsefulnessReport(frozenset(reach), frozenset(co))


@dataclass(frozen=True)
class FinitenessResult:
    """``cycle`` lists ``(state, symbol, next_state)`` edges of a pumpable loop when infinite."""

    finite: bool
    cycle: tuple[tuple[str, str, str], ...] = ()

    def __bool__(self) -> bool:
        return self.finite

    def __str__(self) -> str:
        if self.finite:
            return "finite"
        path = " → ".join([self.cycle[0][0]] + [dst for _, _, dst in self.cycle])
        via = ",".join(dict.fromkeys(f for _, f, _ in self.cycle))
        return f"infinite: pumping cycle {path} via {via}"


def is_finite_language(a: TreeAutomaton) -> FinitenessResult:
    """Finite iff no cycle runs through useful states along transitions with reachable side slots.

    A cycle ``q → ... → q`` through a useful ``q`` yields a context that can
    be stacked arbitrarily often between a term reaching ``q`` and a context
    taking ``q`` into a final state. Edges over low-arity symbols are tried
    first, so the reported witness is the simplest available loop.
    """
    rep = usefulness(a)
    useful = rep.useful
    order = {q: k for k, q in enumerate(a.states)}
    sym_order = {f: k for k, f in enumerate(a.signature)}
    adj: dict[str, list[tuple[str, str]]] = {q: [] for q in a.states if q in useful}
    for src, f, k, dst in _contexts(a, set(rep.reachable)):
        if src in useful and dst in useful and (f, dst) not in adj[src]:
            adj[src].append((f, dst))
    for q in adj:
        adj[q].sort(key=lambda e: (a.signature.arity(e[0]), sym_order[e[0]], order[e[1]]))

    colour = {q: 0 for q in adj}
    stack: list[tuple[str, str, str]] = []

    def dfs(q: str):
        colour[q] = 1
        for f, dst in adj[q]:
            stack.append((q, f, dst))
            if colour[dst] == 1:
                start = next(k for k, e in enumerate(stack) if e[0] == dst)
                return tuple(stack[start:])
            if colour[dst] == 0:
                found = dfs(dst)
                if found:
                    return found
            stack.pop()
        colour[q] = 2
        return None

    for q in sorted(adj, key=order.get):
        if colour[q] == 0:
            cycle = dfs(q)
            if cycle:
                return FinitenessResult(False, cycle)
    return FinitenessResult(True)


def count_ground(a: TreeAutomaton, max_depth: int) -> dict[str, int]:
    """Number of ground terms of depth ≤ ``max_depth`` reaching each state."""
    a._compiled()
    base = {q: 0 for q in a.states}
    for f in a.signature.nullary:
        base[a.nullary[f]] += 1
    counts = dict(base)
    for _ in range(max_depth):
        nxt = dict(base)
        for f, n in a.signature.items():
            if n == 0:
                continue
            for args, q in a.rules[f].items():
                prod = 1
                for s in args:
                    prod *= counts[s]
                    if not prod:
                        break
                nxt[q] += prod
        counts = nxt
    return counts


def count_accepted(a: TreeAutomaton, max_depth: int) -> int:
    counts = count_ground(a, max_depth)
    return sum(counts[q] for q in a.final)


def enumerate_ground(
    a: TreeAutomaton, max_depth: int, limit: int = DEFAULT_OUTPUT_LIMIT
) -> list[Term]:
    """Accepted ground terms of depth ≤ ``max_depth``, by depth then by text.

    ``limit`` caps how many terms (accepted or not) may be built.
    """
    a._compiled()
    # entries are (term, state, depth)
    by_depth: list[list[tuple[Term, str, int]]] = [[(App(f), a.nullary[f], 0) for f in a.signature.nullary]]
    upto = list(by_depth[0])
    built = len(upto)
    for d in range(1, max_depth + 1):
        prev_upto = len(upto) - len(by_depth[-1])
        layer: list[tuple[Term, str, int]] = []
        for f, n in a.signature.items():
            if n == 0:
                continue
            built += len(upto) ** n - prev_upto**n
            if built > limit:
                raise SearchBudgetExceeded(f"enumeration to depth {max_depth} exceeds {limit} terms")
            for combo in itertools.product(upto, repeat=n):
                if all(cd < d - 1 for _, _, cd in combo):
                    continue
                args = tuple(q for _, q, _ in combo)
                layer.append((App(f, tuple(c for c, _, _ in combo)), a.rules[f][args], d))
        by_depth.append(layer)
        upto.extend(layer)
    out = []
    for layer in by_depth:
        out.extend(sorted((format_term(t), t) for t, q, _ in layer if q in a.final))
    return [t for _, t in out]


def minimal_language(
    a: TreeAutomaton,
    terms: Iterable[Term],
    mode: str = "A",
    budget: SearchBudget | int | None = None,
) -> list[Term]:
    return _minimal_language(a, terms, mode, budget)[0]


def _minimal_language(a, terms, mode, budget) -> tuple[list[Term], list[list[RewriteStep]]]:
    budget = as_budget(budget)
    out: list[Term] = []
    traces: list[list[RewriteStep]] = []
    seen: set[Term] = set()
    for t in terms:
        r, trace = reduce(a, t, mode, budget)
        if r not in seen:
            seen.add(r)
            out.append(r)
            traces.append(trace)
    return out, traces


def languages_equivalent(
    a: TreeAutomaton,
    l1: Sequence[Term],
    l2: Sequence[Term],
    budget: SearchBudget | int | None = None,
) -> bool:
    """Every term of each language has an ≃_A partner in the other."""
    budget = as_budget(budget)

    def covered(xs, ys):
        return all(any(a_equivalent(a, x, y, budget) for y in ys) for x in xs)

    return covered(l1, l2) and covered(l2, l1)


def minimize_automaton(a: TreeAutomaton) -> TreeAutomaton:
    """Quotient of the reachable part by the coarsest congruence separating final states.

    Blocks are refined until, for every symbol, slot, and placement of
    reachable states in the other slots, states of one block lead into one
    block. Output states are named ``q0, q1, ...`` with blocks ordered by
    the least (string-compared) original state name they contain.
    """
    a._compiled()
    reach = _reachable(a)
    live = [q for q in a.states if q in reach]
    block = {q: 0 if q in a.final else 1 for q in live}
    n_blocks = len(set(block.values()))
    positive = [(f, n) for f, n in a.signature.items() if n > 0]
    while True:
        sigs = {}
        for q in live:
            row = [block[q]]
            for f, n in positive:
                for k in range(n):
                    for rest in itertools.product(live, repeat=n - 1):
                        args = rest[:k] + (q,) + rest[k:]
                        row.append(block[a.rules[f][args]])
            sigs[q] = tuple(row)
        ids: dict[tuple, int] = {}
        block = {q: ids.setdefault(sigs[q], len(ids)) for q in live}
        if len(ids) == n_blocks:
            break
        n_blocks = len(ids)

    # canonical order: blocks sorted by the least state name they contain
    least: dict[int, str] = {}
    for q in live:
        least[block[q]] = min(least.get(block[q], q), q)
    ranked = sorted(least, key=least.get)
    block = {q: ranked.index(b) for q, b in block.items()}
    names = [f"q{k}" for k in range(n_blocks)]
    rep = {block[q]: q for q in reversed(live)}
    final = [names[b] for b, q in rep.items() if q in a.final]
    nullary = {f: names[block[a.nullary[f]]] for f in a.signature.nullary}
    rules = {}
    for f, n in positive:
        rules[f] = {
            tuple(names[b] for b in bs): names[block[a.rules[f][tuple(rep[b] for b in bs)]]]
            for bs in itertools.product(range(n_blocks), repeat=n)
        }
    return TreeAutomaton(names, final, nullary, rules, a.signature)


@dataclass(frozen=True)
class OptimalPair:
    automaton: TreeAutomaton
    language: list[Term]
    traces: list[list[RewriteStep]] = field(default_factory=list)

    def write(self, prefix: str | Path) -> tuple[Path, Path]:
        """Write ``<prefix>.fta`` and ``<prefix>.terms``; returns both paths."""
        prefix = Path(prefix)
        fta = prefix.with_name(prefix.name + ".fta")
        terms = prefix.with_name(prefix.name + ".terms")
        dump_fta(self.automaton, fta)
        terms.write_text("".join(format_term(t) + "\n" for t in self.language), encoding="utf-8")
        return fta, terms


@dataclass(frozen=True)
class InfiniteLanguage:
    """Reported instead of a pair when ``L(A)`` is infinite."""

    finiteness: FinitenessResult

    def __str__(self) -> str:
        return f"language is {self.finiteness}; no optimal pair is computed"


def optimal_pair(
    a: TreeAutomaton, mode: str = "A", budget: SearchBudget | int | None = None
) -> OptimalPair | InfiniteLanguage:
    """Minimal automaton plus minimal ground language, or the pumping witness if infinite."""
    fin = is_finite_language(a)
    if not fin:
        return InfiniteLanguage(fin)
    language, traces = _minimal_language(a, enumerate_ground(a, len(a.states)), mode, budget)
    return OptimalPair(minimize_automaton(a), language, traces)
