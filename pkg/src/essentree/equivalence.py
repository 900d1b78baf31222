"""Behavioral equivalence of terms under an automaton.

``t ≃_A s`` holds when both terms reach the same state under every
assignment; ``t ≃_rA s`` only asks for the same acceptance. Quantifying over
assignments of ``Var(t) ∪ Var(s)`` is enough because the other variables
never influence a run.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import SearchBudget, TreeAutomaton, as_budget, decode_assignment, format_assignment, sweep
from .errors import InvalidPosition, PreconditionViolation
from .essential import is_essential
from .terms import Position, Term, Var, format_position, replace_at, subterm_at, variables


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Outcome of an exhaustive comparison.

    When not equivalent, ``counterexample`` is the first assignment in
    enumeration order on which the terms disagree, and ``left``/``right`` are
    the states they reach under it.
    """

    equivalent: bool
    counterexample: dict[int, str] | None = None
    left: str | None = None
    right: str | None = None

    def __bool__(self) -> bool:
        return self.equivalent

    def __str__(self) -> str:
        if self.equivalent:
            return "equivalent"
        return (
            f"not equivalent: counterexample γ={format_assignment(self.counterexample)} "
            f"gives {self.left} vs {self.right}"
        )


def _compare(a: TreeAutomaton, t: Term, s: Term, accepting_only: bool, budget) -> EquivalenceVerdict:
    budget = as_budget(budget)
    order = sorted(variables(t) | variables(s))
    left = sweep(a, t, order, budget)
    right = sweep(a, s, order, budget)
    if accepting_only:
        mask = a._compiled().final_mask
        bad = np.flatnonzero(mask[left] != mask[right])
    else:
        bad = np.flatnonzero(left != right)
    if bad.size == 0:
        return EquivalenceVerdict(True)
    k = int(bad[0])
    return EquivalenceVerdict(
        False, decode_assignment(k, order, a.signature), a.states[left[k]], a.states[right[k]]
    )


def a_equivalent(
    a: TreeAutomaton, t: Term, s: Term, budget: SearchBudget | int | None = None
) -> EquivalenceVerdict:
    return _compare(a, t, s, False, budget)


def ra_equivalent(
    a: TreeAutomaton, t: Term, s: Term, budget: SearchBudget | int | None = None
) -> EquivalenceVerdict:
    return _compare(a, t, s, True, budget)


def equivalent(a: TreeAutomaton, t: Term, s: Term, mode: str = "A", budget=None) -> EquivalenceVerdict:
    """Dispatch on ``mode``: ``"A"`` for ≃_A, ``"rA"`` for ≃_rA."""
    if mode == "A":
        return a_equivalent(a, t, s, budget)
    if mode == "rA":
        return ra_equivalent(a, t, s, budget)
    raise ValueError(f"unknown mode {mode!r}; expected 'A' or 'rA'")


@dataclass(frozen=True)
class CoverageVerdict:
    covered: bool
    counterexample: dict[int, str] | None = None
    state: str | None = None

    def __bool__(self) -> bool:
        return self.covered

    def __str__(self) -> str:
        if self.covered:
            return "F0-covered"
        return (
            f"not F0-covered: γ={format_assignment(self.counterexample)} reaches {self.state}, "
            "which no constant reaches"
        )


def is_f0_covered(a: TreeAutomaton, t: Term, budget: SearchBudget | int | None = None) -> CoverageVerdict:
    """Whether every run over ``t`` ends in a state some constant also reaches."""
    comp = a._compiled()
    image = np.zeros(len(a.states), dtype=bool)
    image[comp.leaf_states] = True
    order = sorted(variables(t))
    states = sweep(a, t, order, budget)
    bad = np.flatnonzero(~image[states])
    if bad.size == 0:
        return CoverageVerdict(True)
    k = int(bad[0])
    return CoverageVerdict(False, decode_assignment(k, order, a.signature), a.states[states[k]])


def _occurrences(t: Term, i: int) -> int:
    if isinstance(t, Var):
        return int(t.index == i)
    return sum(_occurrences(c, i) for c in t.children)


def check_theorem2_replacement(
    a: TreeAutomaton,
    t: Term,
    p1: Position,
    s: Term,
    single_occurrence: bool = True,
    budget: SearchBudget | int | None = None,
) -> EquivalenceVerdict:
    """Check that putting an F0-covered ``s`` at a fictive variable leaf preserves every run.

    Hypotheses: ``p1`` holds a variable ``x<i>``, ``s`` is F0-covered, and
    some prefix ``p`` of ``p1`` has ``x<i>`` fictive in ``t|p``. With
    ``single_occurrence`` (the default) that prefix must also contain no
    other occurrence of ``x<i>``: without it the conclusion can fail, e.g.
    for ``g(x1,x1)`` with ``g`` an exclusive-or, where ``x1`` is fictive but
    replacing one copy is not.

    Raises :class:`PreconditionViolation` when a hypothesis fails, so that a
    non-equivalent verdict always means the hypotheses held.
    """
    budget = as_budget(budget)
    try:
        leaf = subterm_at(t, p1)
    except InvalidPosition:
        raise PreconditionViolation(f"position {format_position(p1)} is not in the term") from None
    if not isinstance(leaf, Var):
        raise PreconditionViolation(f"position {format_position(p1)} is not a variable position")
    i = leaf.index
    if not is_f0_covered(a, s, budget):
        raise PreconditionViolation("replacement term is not F0-covered")
    prefixes = [p1[:k] for k in range(len(p1), -1, -1)]
    ok = False
    for p in prefixes:
        sub = subterm_at(t, p)
        if single_occurrence and _occurrences(sub, i) != 1:
            continue
        if is_essential(a, sub, i, budget) is None:
            ok = True
            break
    if not ok:
        extra = " with a single occurrence of it" if single_occurrence else ""
        raise PreconditionViolation(f"no prefix of {format_position(p1)} where x{i} is fictive{extra}")
    return a_equivalent(a, t, replace_at(t, p1, s), budget)
