"""Deterministic complete bottom-up finite tree automata.

An automaton maps every nullary symbol to a state and every ``n``-ary symbol
plus ``n``-tuple of states to a state. Nondeterminism cannot be expressed:
transitions are stored as ``{symbol: {state_tuple: state}}``.

Two evaluation routes exist. :func:`run` walks a term recursively through
the rule dictionaries and is the reference semantics. :func:`sweep`
compiles the term into a postfix program over integer tables and evaluates
it under every assignment of a list of variables at once; all exhaustive
searches in the package go through it.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _kernel
from .errors import AutomatonError, SearchBudgetExceeded, UnboundVariable
from .terms import App, Signature, Term, Var, format_term, is_variable_name, variables

Assignment = Mapping[int, str]

DEFAULT_BUDGET = 10**6


class SearchBudget:
    """Counts automaton runs against a limit shared by nested searches."""

    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def charge(self, runs: int) -> None:
        if self.used + runs > self.limit:
            raise SearchBudgetExceeded(
                f"search needs {runs} more runs; budget {self.limit}, already used {self.used}"
            )
        self.used += runs

    def __repr__(self) -> str:
        return f"SearchBudget(limit={self.limit}, used={self.used})"


def as_budget(budget: SearchBudget | int | None) -> SearchBudget:
    if isinstance(budget, SearchBudget):
        return budget
    return SearchBudget(DEFAULT_BUDGET if budget is None else budget)


@dataclass(frozen=True)
class _Compiled:
    index: Mapping[str, int]
    leaf_states: np.ndarray  # state index of each nullary symbol, F0 order
    nullary_state: Mapping[str, int]
    offset: Mapping[str, int]
    tables: np.ndarray
    final_mask: np.ndarray


class TreeAutomaton:
    """``⟨Q, F, Qf, Δ⟩`` with ``Δ`` split into ``nullary`` (Δ0) and ``rules`` (Δ1..Δn).

    The signature is inferred from ``nullary`` and ``rules`` when not given.
    Construction never fails on incomplete tables; call :func:`validate` or
    use any evaluating function, which validates on first use.
    """

    def __init__(
        self,
        states: Iterable[str],
        final: Iterable[str],
        nullary: Mapping[str, str],
        rules: Mapping[str, Mapping[tuple[str, ...], str]],
        signature: Signature | None = None,
    ):
        self.states: tuple[str, ...] = tuple(states)
        self.final: frozenset[str] = frozenset(final)
        self.nullary = MappingProxyType(dict(nullary))
        self.rules = MappingProxyType(
            {f: MappingProxyType({tuple(k): v for k, v in table.items()}) for f, table in rules.items()}
        )
        if signature is None:
            # inconsistent tuple lengths are left for validate() to report
            decl = [(f, 0) for f in nullary]
            decl += [(f, max((len(k) for k in table), default=1)) for f, table in rules.items()]
            signature = Signature(decl)
        self.signature = signature
        self._cache: _Compiled | None = None

    @classmethod
    def from_functions(
        cls,
        states: Sequence[str],
        final: Iterable[str],
        nullary: Mapping[str, str],
        functions: Mapping[str, tuple[int, Callable[..., str]]],
    ) -> "TreeAutomaton":
        """Tabulate ``functions[f] = (arity, fn)`` over all state tuples."""
        rules = {
            f: {args: fn(*args) for args in itertools.product(states, repeat=n)}
            for f, (n, fn) in functions.items()
        }
        sig = Signature([(f, 0) for f in nullary] + [(f, n) for f, (n, _) in functions.items()])
        return cls(states, final, nullary, rules, sig)

    def delta(self, symbol: str, *args: str) -> str:
        if not args:
            return self.nullary[symbol]
        return self.rules[symbol][args]

    def _compiled(self) -> _Compiled:
        if self._cache is None:
            problems = validate(self)
            if problems:
                raise AutomatonError("invalid automaton", problems)
            index = {q: i for i, q in enumerate(self.states)}
            nq = len(self.states)
            offset: dict[str, int] = {}
            chunks = []
            pos = 0
            for f, n in self.signature.items():
                if n == 0:
                    continue
                table = self.rules[f]
                chunk = np.array(
                    [index[table[args]] for args in itertools.product(self.states, repeat=n)],
                    dtype=np.int32,
                )
                offset[f] = pos
                pos += nq**n
                chunks.append(chunk)
            tables = np.concatenate(chunks) if chunks else np.zeros(1, dtype=np.int32)
            nullary_state = {f: index[self.nullary[f]] for f in self.signature.nullary}
            self._cache = _Compiled(
                index=index,
                leaf_states=np.array([nullary_state[f] for f in self.signature.nullary], dtype=np.int32),
                nullary_state=nullary_state,
                offset=offset,
                tables=np.ascontiguousarray(tables, dtype=np.int32),
                final_mask=np.array([q in self.final for q in self.states], dtype=bool),
            )
        return self._cache

    def __repr__(self) -> str:
        return (
            f"TreeAutomaton(states={list(self.states)}, final={sorted(self.final)}, "
            f"signature={self.signature!r})"
        )


def validate(a: TreeAutomaton) -> list[str]:
    """Every violation of the automaton invariants; empty when valid."""
    problems: list[str] = []
    known = set(a.states)
    if len(known) != len(a.states):
        problems.append("duplicate state names")
    if not a.states:
        problems.append("no states")
    for q in sorted(a.final - known):
        problems.append(f"unknown final state {q}")
    sig = a.signature
    for f, q in a.nullary.items():
        if f not in sig or sig.arity(f) != 0:
            problems.append(f"constant {f} is not a nullary symbol of the signature")
        if q not in known:
            problems.append(f"unknown state {q} in const {f}")
    for f in sig.nullary:
        if f not in a.nullary:
            problems.append(f"missing const {f}")
    for f, table in a.rules.items():
        if f not in sig or sig.arity(f) == 0:
            problems.append(f"rules given for {f}, which is not a symbol of positive arity")
            continue
        n = sig.arity(f)
        for args, q in table.items():
            if len(args) != n:
                problems.append(f"arity mismatch in rule {f}({','.join(args)}): expected {n} states")
            for s in args:
                if s not in known:
                    problems.append(f"unknown state {s} in rule {f}({','.join(args)})")
            if q not in known:
                problems.append(f"unknown state {q} as target of rule {f}({','.join(args)})")
    for f, n in sig.items():
        if n == 0:
            continue
        table = a.rules.get(f, {})
        for args in itertools.product(a.states, repeat=n):
            if args not in table:
                problems.append(f"missing transition {f}({','.join(args)})")
    return problems


# -- assignments -------------------------------------------------------------


def assignments_over(vars: Iterable[int], sig: Signature) -> Iterator[dict[int, str]]:
    """All assignments of nullary symbols to ``vars``.

    Ordered lexicographically: the lowest variable index varies slowest and
    each variable cycles through F0 in declaration order.
    """
    order = sorted(vars)
    for values in itertools.product(sig.nullary, repeat=len(order)):
        yield dict(zip(order, values))


def decode_assignment(index: int, order: Sequence[int], sig: Signature) -> dict[int, str]:
    """The ``index``-th assignment of :func:`assignments_over` for sorted ``order``."""
    f0 = sig.nullary
    base = len(f0)
    values = []
    for _ in order:
        index, d = divmod(index, base)
        values.append(f0[d])
    return dict(zip(order, reversed(values)))


def format_assignment(g: Assignment) -> str:
    return "{" + ",".join(f"x{i}={g[i]}" for i in sorted(g)) + "}"


def parse_assignment(text: str, sig: Signature) -> dict[int, str]:
    """Parse ``x1=0,x2=1`` (optionally in braces) into an assignment."""
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    out: dict[int, str] = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        name, sep, value = (s.strip() for s in item.partition("="))
        if not sep or not is_variable_name(name) or int(name[1:]) < 1:
            raise ValueError(f"bad binding {item!r}; expected x<i>=<constant>")
        if value not in sig or sig.arity(value) != 0:
            raise ValueError(f"{value!r} is not a nullary symbol")
        out[int(name[1:])] = value
    return out


# -- evaluation --------------------------------------------------------------


def run(a: TreeAutomaton, g: Assignment, t: Term) -> str:
    """The state ``A(γ, t)`` reached bottom-up."""
    if isinstance(t, Var):
        if t.index not in g:
            raise UnboundVariable(f"variable x{t.index} is not bound by the assignment")
        return a.nullary[g[t.index]]
    if t.symbol not in a.signature:
        raise AutomatonError(f"symbol {t.symbol!r} is unknown to the automaton")
    if not t.children:
        return a.nullary[t.symbol]
    args = tuple(run(a, g, c) for c in t.children)
    try:
        return a.rules[t.symbol][args]
    except KeyError:
        raise AutomatonError(f"no transition {t.symbol}({','.join(args)})") from None


def accepts(a: TreeAutomaton, g: Assignment, t: Term) -> bool:
    return run(a, g, t) in a.final


def _emit(comp: _Compiled, sig: Signature, t: Term, slot: Mapping[int, int]):
    """Postfix code for ``t``; ground subterms fold to a single constant push."""
    if isinstance(t, Var):
        return None, [(1, slot[t.index], 0)]
    if t.symbol not in sig:
        raise AutomatonError(f"symbol {t.symbol!r} is unknown to the automaton")
    if not t.children:
        return comp.nullary_state[t.symbol], []
    parts = [_emit(comp, sig, c, slot) for c in t.children]
    n = len(parts)
    if all(st is not None for st, _ in parts):
        idx = 0
        for st, _ in parts:
            idx = idx * len(comp.index) + st
        return int(comp.tables[comp.offset[t.symbol] + idx]), []
    code = []
    for st, sub in parts:
        code.extend([(0, st, 0)] if st is not None else sub)
    code.append((2, n, comp.offset[t.symbol]))
    return None, code


def sweep(
    a: TreeAutomaton,
    t: Term,
    order: Sequence[int],
    budget: SearchBudget | int | None = None,
) -> np.ndarray:
    """State indices of ``t`` under every assignment of the variables ``order``.

    Entry ``k`` corresponds to the ``k``-th assignment of
    :func:`assignments_over` (``order`` must be sorted). Every variable of
    ``t`` must appear in ``order``.
    """
    comp = a._compiled()
    missing = variables(t) - set(order)
    if missing:
        raise UnboundVariable(f"variables {sorted(missing)} are not swept")
    runs = len(comp.leaf_states) ** len(order)
    as_budget(budget).charge(runs)
    slot = {v: k for k, v in enumerate(order)}
    state, code = _emit(comp, a.signature, t, slot)
    if state is not None:
        return np.full(runs, state, dtype=np.int32)
    prog = np.ascontiguousarray(np.array(code, dtype=np.int32).reshape(-1, 3))
    return _kernel.sweep(prog, comp.tables, comp.leaf_states, len(a.states), len(order))


def state_name(a: TreeAutomaton, index: int) -> str:
    return a.states[index]


def recognizable(
    a: TreeAutomaton, t: Term, budget: SearchBudget | int | None = None
) -> dict[int, str] | None:
    """First assignment (enumeration order) under which ``a`` accepts ``t``, or None."""
    order = sorted(variables(t))
    results = sweep(a, t, order, budget)
    hits = np.flatnonzero(a._compiled().final_mask[results])
    if hits.size == 0:
        return None
    return decode_assignment(int(hits[0]), order, a.signature)


# -- .fta files --------------------------------------------------------------

_CONST_RE = re.compile(r"const\s+(\w+)\s*->\s*(\w+)\Z")
_RULE_RE = re.compile(r"rule\s+(\w+)\s*\(([^()]*)\)\s*->\s*(\w+)\Z")


def parse_fta(text: str, source: str = "<string>") -> TreeAutomaton:
    """Parse the line-oriented ``.fta`` format and validate the result."""
    states: list[str] | None = None
    final: list[str] | None = None
    decl: dict[str, int] = {}
    nullary: dict[str, str] = {}
    rules: dict[str, dict[tuple[str, ...], str]] = {}
    problems: list[str] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{source}:{lineno}"
        if states is None:
            if not line.startswith("states:"):
                raise AutomatonError(f"{where}: first line must be 'states: ...'")
            states = line[len("states:"):].split()
            continue
        if line.startswith("states:"):
            problems.append(f"{where}: 'states:' given twice")
        elif line.startswith("final:"):
            if final is not None:
                problems.append(f"{where}: 'final:' given twice")
            final = line[len("final:"):].split()
        elif m := _CONST_RE.match(line):
            f, q = m.groups()
            if decl.setdefault(f, 0) != 0:
                problems.append(f"{where}: {f} used with arities {decl[f]} and 0")
            if f in nullary:
                problems.append(f"{where}: duplicate const {f}")
            nullary[f] = q
        elif m := _RULE_RE.match(line):
            f, argtext, q = m.groups()
            args = tuple(s.strip() for s in argtext.split(",")) if argtext.strip() else ()
            if not args or not all(args):
                problems.append(f"{where}: malformed argument list in {line!r}")
                continue
            if decl.setdefault(f, len(args)) != len(args):
                problems.append(f"{where}: {f} used with arities {decl[f]} and {len(args)}")
                continue
            table = rules.setdefault(f, {})
            if args in table:
                problems.append(f"{where}: duplicate rule {f}({','.join(args)})")
            table[args] = q
        else:
            problems.append(f"{where}: cannot parse {line!r}")

    if states is None:
        raise AutomatonError(f"{source}: no 'states:' line")
    if final is None:
        problems.append(f"{source}: no 'final:' line")
    for f in decl:
        if is_variable_name(f):
            problems.append(f"{source}: symbol {f} collides with the variable namespace")
    if problems:
        raise AutomatonError(f"cannot load {source}", problems)
    try:
        sig = Signature(list(decl.items()))
    except ValueError as exc:
        raise AutomatonError(f"cannot load {source}", [str(exc)]) from None
    a = TreeAutomaton(states, final or [], nullary, rules, sig)
    problems = validate(a)
    if problems:
        raise AutomatonError(f"invalid automaton in {source}", problems)
    return a


def load_fta(path: str | Path) -> TreeAutomaton:
    path = Path(path)
    return parse_fta(path.read_text(encoding="utf-8"), str(path))


def format_fta(a: TreeAutomaton) -> str:
    lines = ["states: " + " ".join(a.states), "final: " + " ".join(q for q in a.states if q in a.final)]
    sig = a.signature
    for f in sig.nullary:
        lines.append(f"const {f} -> {a.nullary[f]}")
    for f, n in sig.items():
        if n == 0:
            continue
        for args in itertools.product(a.states, repeat=n):
            lines.append(f"rule {f}({','.join(args)}) -> {a.rules[f][args]}")
    return "\n".join(lines) + "\n"


def dump_fta(a: TreeAutomaton, path: str | Path) -> None:
    Path(path).write_text(format_fta(a), encoding="utf-8")


__all__ = [
    "Assignment",
    "DEFAULT_BUDGET",
    "SearchBudget",
    "TreeAutomaton",
    "accepts",
    "as_budget",
    "assignments_over",
    "decode_assignment",
    "dump_fta",
    "format_assignment",
    "format_fta",
    "load_fta",
    "parse_assignment",
    "parse_fta",
    "recognizable",
    "run",
    "state_name",
    "sweep",
    "validate",
]
