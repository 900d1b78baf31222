"""Essential and recognizably-essential input variables.

A variable is essential for ``(t, A)`` when changing only its value can
change the state ``A`` reaches on ``t``; it is r-essential when such a change
can flip acceptance. Both are decided by one exhaustive sweep over
assignments of ``Var(t)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .automaton import SearchBudget, TreeAutomaton, as_budget, decode_assignment, format_assignment, sweep
from .terms import App, Position, Term, format_term, subterm_at, variables


@dataclass(frozen=True)
class Witness:
    """Two assignments equal except at ``variable`` with the states they reach."""

    variable: int
    gamma1: dict[int, str]
    gamma2: dict[int, str]
    state1: str
    state2: str

    def __str__(self) -> str:
        return (
            f"witness γ1={format_assignment(self.gamma1)} γ2={format_assignment(self.gamma2)} "
            f"states {self.state1}/{self.state2}"
        )


def _first_witness(values: np.ndarray, n_values: int, n_vars: int, k: int) -> tuple[int, int] | None:
    """First (row, column) where slot ``k`` matters.

    ``row`` indexes assignments of the other slots in enumeration order and
    ``column`` is the value paired against value 0. Because value 0 is the
    first in every pair, the first non-constant row always pairs with it.
    """
    grid = values.reshape((n_values,) * n_vars)
    rows = np.moveaxis(grid, k, -1).reshape(-1, n_values)
    differs = rows != rows[:, :1]
    hit = np.flatnonzero(differs.any(axis=1))
    if hit.size == 0:
        return None
    r = int(hit[0])
    return r, int(np.flatnonzero(differs[r])[0])


def _witness(a: TreeAutomaton, order: list[int], states: np.ndarray, key: np.ndarray, i: int) -> Witness | None:
    f0 = a.signature.nullary
    k = order.index(i)
    found = _first_witness(key, len(f0), len(order), k)
    if found is None:
        return None
    row, col = found
    rest = order[:k] + order[k + 1:]
    base = decode_assignment(row, rest, a.signature)
    g1 = dict(sorted({**base, i: f0[0]}.items()))
    g2 = dict(sorted({**base, i: f0[col]}.items()))
    grid = states.reshape((len(f0),) * len(order))
    idx1 = tuple(f0.index(g1[v]) for v in order)
    idx2 = tuple(f0.index(g2[v]) for v in order)
    return Witness(i, g1, g2, a.states[grid[idx1]], a.states[grid[idx2]])


def _sweep_term(a: TreeAutomaton, t: Term, budget) -> tuple[list[int], np.ndarray]:
    order = sorted(variables(t))
    return order, sweep(a, t, order, budget)


def is_essential(
    a: TreeAutomaton, t: Term, i: int, budget: SearchBudget | int | None = None
) -> Witness | None:
    """A witness that ``x<i>`` is essential for ``(t, a)``, or None if it is fictive or absent."""
    if i not in variables(t):
        return None
    order, states = _sweep_term(a, t, budget)
    return _witness(a, order, states, states, i)


def is_r_essential(
    a: TreeAutomaton, t: Term, i: int, budget: SearchBudget | int | None = None
) -> Witness | None:
    """Like :func:`is_essential` but only acceptance of the reached state counts."""
    if i not in variables(t):
        return None
    order, states = _sweep_term(a, t, budget)
    return _witness(a, order, states, a._compiled().final_mask[states], i)


def ess_set(a: TreeAutomaton, t: Term, budget: SearchBudget | int | None = None) -> frozenset[int]:
    return essentiality_report(a, t, budget).essential


def r_ess_set(a: TreeAutomaton, t: Term, budget: SearchBudget | int | None = None) -> frozenset[int]:
    return essentiality_report(a, t, budget).r_essential


@dataclass(frozen=True)
class EssentialityReport:
    term: Term
    variables: frozenset[int]
    essential: frozenset[int]
    r_essential: frozenset[int]
    witnesses: dict[int, Witness] = field(default_factory=dict)
    r_witnesses: dict[int, Witness] = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = []
        for i in sorted(self.variables):
            if i in self.essential:
                r = "r-essential" if i in self.r_essential else "NOT r-essential"
                out.append(f"x{i}: essential, {r}, {self.witnesses[i]}")
            else:
                out.append(f"x{i}: fictive, r-fictive")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def essentiality_report(
    a: TreeAutomaton, t: Term, budget: SearchBudget | int | None = None
) -> EssentialityReport:
    order, states = _sweep_term(a, t, budget)
    accepted = a._compiled().final_mask[states]
    wit, rwit = {}, {}
    for i in order:
        w = _witness(a, order, states, states, i)
        if w is not None:
            wit[i] = w
            rw = _witness(a, order, states, accepted, i)
            if rw is not None:
                rwit[i] = rw
    return EssentialityReport(
        term=t,
        variables=frozenset(order),
        essential=frozenset(wit),
        r_essential=frozenset(rwit),
        witnesses=wit,
        r_witnesses=rwit,
    )


def essential_chain(
    a: TreeAutomaton, t: Term, i: int, budget: SearchBudget | int | None = None
) -> list[Position] | None:
    """Positions from an occurrence of ``x<i>`` up to the root along which ``x<i>`` stays essential.

    Built top-down: at each node, descend into the leftmost child in which
    ``x<i>`` is still essential. Such a child always exists, because a node
    whose children all ignore ``x<i>`` ignores it too. None when ``x<i>`` is
    fictive for ``t``.
    """
    budget = as_budget(budget)
    if is_essential(a, t, i, budget) is None:
        return None
    path: Position = ()
    node = t
    while isinstance(node, App):
        for k, child in enumerate(node.children, 1):
            if is_essential(a, child, i, budget) is not None:
                path += (k,)
                node = child
                break
        else:  # pragma: no cover - excluded by compositionality of run
            raise AssertionError(f"x{i} essential in {format_term(node)} but in none of its children")
    assert subterm_at(t, path) == node
    return [path[:k] for k in range(len(path), -1, -1)]
