"""Removing and adding fictive inputs.

Four rewrite rules, each producing a :class:`RewriteStep`:

``RFI-var``
    replace every ``x<i>`` inside the deepest subterm on the leaf-to-root
    chain of a variable leaf where ``x<i>`` is fictive by the first constant.
``RFI-subterm``
    replace a subterm by a proper subterm of itself that is equivalent to it.
``AFI-var``
    the inverse of ``RFI-var`` at one constant leaf.
``AFI-subterm``
    the inverse of ``RFI-subterm``.

Every rule takes a ``mode``. In ``"A"`` mode conditions use ``Ess`` and
``≃_A``; in ``"rA"`` mode the condition checked at the root uses ``rEss``
and ``≃_rA`` instead. Sites below the root keep the ``A`` conditions in both
modes, since acceptance-only facts about a subterm say nothing about its
context.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .automaton import SearchBudget, TreeAutomaton, as_budget
from .equivalence import equivalent
from .errors import InvalidPosition
from .essential import is_essential, is_r_essential
from .terms import (
    App,
    Position,
    Term,
    Var,
    format_position,
    format_term,
    is_proper_subterm,
    iter_subterms,
    positions,
    replace_at,
    shortlex,
    size,
    subterm_at,
    substitute,
    variable_leaf_count,
    variables,
)

RFI_VAR = "RFI-var"
RFI_SUBTERM = "RFI-subterm"
AFI_VAR = "AFI-var"
AFI_SUBTERM = "AFI-subterm"


@dataclass(frozen=True)
class RewriteStep:
    """``before`` with the subterm at ``site`` replaced by ``replacement`` gives ``after``.

    ``variable`` and ``constant`` describe the variable rules; ``inner`` is
    the position (in ``before``) of the subterm kept by ``RFI-subterm``.
    """

    kind: str
    site: Position
    before: Term
    after: Term
    replaced: Term
    replacement: Term
    variable: int | None = None
    constant: str | None = None
    leaf: Position | None = None
    inner: Position | None = None

    def replay(self) -> Term:
        return replace_at(self.before, self.site, self.replacement)

    def __str__(self) -> str:
        at = format_position(self.site)
        if self.kind == RFI_VAR:
            return f"{self.kind} @{at}: x{self.variable} <- {self.constant} in {format_term(self.replaced)}"
        if self.kind == AFI_VAR:
            return (
                f"{self.kind} @{at}: {self.constant} at {format_position(self.leaf)} -> x{self.variable} "
                f"in {format_term(self.replaced)}"
            )
        return f"{self.kind} @{at}: replaced {format_term(self.replaced)} by {format_term(self.replacement)}"


def _check_mode(mode: str) -> None:
    if mode not in ("A", "rA"):
        raise ValueError(f"unknown mode {mode!r}; expected 'A' or 'rA'")


def _fictive(a, sub: Term, i: int, mode: str, at_root: bool, budget) -> bool:
    if mode == "rA" and at_root:
        return is_r_essential(a, sub, i, budget) is None
    return is_essential(a, sub, i, budget) is None


def _same(a, x: Term, y: Term, mode: str, at_root: bool, budget) -> bool:
    return equivalent(a, x, y, "rA" if mode == "rA" and at_root else "A", budget).equivalent


def _step(kind, t, site, replacement, **detail) -> RewriteStep:
    return RewriteStep(
        kind=kind,
        site=site,
        before=t,
        after=replace_at(t, site, replacement),
        replaced=subterm_at(t, site),
        replacement=replacement,
        **detail,
    )


def rfi_variable_step(
    a: TreeAutomaton,
    t: Term,
    p1: Position,
    mode: str = "A",
    budget: SearchBudget | int | None = None,
) -> RewriteStep | None:
    """Remove the variable at ``p1`` from the deepest chain subterm in which it is fictive."""
    _check_mode(mode)
    budget = as_budget(budget)
    leaf = subterm_at(t, p1)
    if not isinstance(leaf, Var):
        raise InvalidPosition(f"position {format_position(p1)} is not a variable position")
    i = leaf.index
    f0 = a.signature.nullary[0]
    for k in range(len(p1), -1, -1):
        p = p1[:k]
        sub = subterm_at(t, p)
        if _fictive(a, sub, i, mode, not p, budget):
            return _step(RFI_VAR, t, p, substitute(sub, {i: App(f0)}), variable=i, constant=f0)
    return None


def rfi_subterm_step(
    a: TreeAutomaton,
    t: Term,
    p2: Position,
    mode: str = "A",
    budget: SearchBudget | int | None = None,
) -> RewriteStep | None:
    """Replace ``t|p2`` by its shallowest, then leftmost, equivalent proper subterm."""
    _check_mode(mode)
    budget = as_budget(budget)
    outer = subterm_at(t, p2)
    seen: set[Term] = set()
    below = sorted((q for q, _ in iter_subterms(outer) if q), key=shortlex)
    for q in below:
        inner = subterm_at(outer, q)
        if inner in seen:
            continue
        seen.add(inner)
        if _same(a, inner, outer, mode, not p2, budget):
            return _step(RFI_SUBTERM, t, p2, inner, inner=p2 + q)
    return None


def afi_variable_step(
    a: TreeAutomaton,
    t: Term,
    p1: Position,
    i: int,
    mode: str = "A",
    budget: SearchBudget | int | None = None,
) -> RewriteStep | None:
    """Put ``x<i>`` at the constant leaf ``p1`` where it stays fictive.

    Only chain subterms not already containing ``x<i>`` qualify: otherwise
    the new occurrence would be tied to the old ones and the step could
    change the reached state.
    """
    _check_mode(mode)
    budget = as_budget(budget)
    leaf = subterm_at(t, p1)
    if not (isinstance(leaf, App) and not leaf.children):
        raise InvalidPosition(f"position {format_position(p1)} is not a constant position")
    for k in range(len(p1), -1, -1):
        p = p1[:k]
        sub = subterm_at(t, p)
        if i in variables(sub):
            break
        candidate = replace_at(sub, p1[k:], Var(i))
        if _fictive(a, candidate, i, mode, not p, budget):
            return _step(AFI_VAR, t, p, candidate, variable=i, constant=leaf.symbol, leaf=p1)
    return None


def afi_subterm_step(
    a: TreeAutomaton,
    t: Term,
    p: Position,
    t2: Term,
    mode: str = "A",
    budget: SearchBudget | int | None = None,
) -> RewriteStep | None:
    """Replace ``t|p`` by the equivalent superterm ``t2``."""
    _check_mode(mode)
    current = subterm_at(t, p)
    if is_proper_subterm(current, t2) is None:
        raise ValueError(f"{format_term(t2)} does not properly contain {format_term(current)}")
    if _same(a, current, t2, mode, not p, as_budget(budget)):
        return _step(AFI_SUBTERM, t, p, t2)
    return None


def _first_rfi_step(a, t, mode, budget) -> RewriteStep | None:
    pos = positions(t)
    for p in sorted(pos.all, key=shortlex):
        step = rfi_subterm_step(a, t, p, mode, budget)
        if step is not None:
            return step
    for p in sorted(pos.variable):
        step = rfi_variable_step(a, t, p, mode, budget)
        if step is not None:
            return step
    return None


def reduce(
    a: TreeAutomaton,
    t: Term,
    mode: str = "A",
    budget: SearchBudget | int | None = None,
) -> tuple[Term, list[RewriteStep]]:
    """Apply RFI steps until none applies; returns the result and the trace.

    Subterm steps are tried before variable steps and shallow sites before
    deep ones. Each step lowers (node count, variable-leaf count)
    lexicographically, so the loop terminates.
    """
    _check_mode(mode)
    budget = as_budget(budget)
    trace: list[RewriteStep] = []
    while (step := _first_rfi_step(a, t, mode, budget)) is not None:
        trace.append(step)
        t = step.after
    return t, trace


def is_rfi_irreducible(
    a: TreeAutomaton, t: Term, mode: str = "A", budget: SearchBudget | int | None = None
) -> bool:
    _check_mode(mode)
    return _first_rfi_step(a, t, mode, as_budget(budget)) is None


def measure(t: Term) -> tuple[int, int]:
    """Termination measure decreased by every RFI step."""
    return size(t), variable_leaf_count(t)


def rfi_successors(
    a: TreeAutomaton, t: Term, budget: SearchBudget | int | None = None
) -> Iterator[Term]:
    """Every term reachable from ``t`` by one A-mode RFI step, under any choice the rules allow.

    Unlike :func:`reduce`, this considers every fictive chain prefix, every
    constant, and every equivalent proper subterm.
    """
    budget = as_budget(budget)
    seen: set[Term] = set()
    pos = positions(t)
    for p in sorted(pos.all, key=shortlex):
        outer = subterm_at(t, p)
        for q, inner in iter_subterms(outer):
            if q and equivalent(a, inner, outer, "A", budget):
                after = replace_at(t, p, inner)
                if after not in seen:
                    seen.add(after)
                    yield after
    for p1 in sorted(pos.variable):
        i = subterm_at(t, p1).index
        for k in range(len(p1), -1, -1):
            sub = subterm_at(t, p1[:k])
            if is_essential(a, sub, i, budget) is None:
                for f0 in a.signature.nullary:
                    after = replace_at(t, p1[:k], substitute(sub, {i: App(f0)}))
                    if after not in seen:
                        seen.add(after)
                        yield after


def reduces_to(
    a: TreeAutomaton, source: Term, target: Term, budget: SearchBudget | int | None = None
) -> bool:
    """Whether ``source ⊨_R target`` (zero or more RFI steps)."""
    budget = as_budget(budget)
    goal = measure(target)
    frontier = deque([source])
    visited = {source}
    while frontier:
        t = frontier.popleft()
        if t == target:
            return True
        for nxt in rfi_successors(a, t, budget):
            if nxt not in visited and measure(nxt) >= goal:
                visited.add(nxt)
                frontier.append(nxt)
    return False


def is_minimal_in(
    a: TreeAutomaton,
    t: Term,
    candidates: Iterable[Term],
    budget: SearchBudget | int | None = None,
) -> bool:
    """Minimality of ``t`` relative to an explicit finite stand-in for ``L(A)``.

    True iff every candidate ≃_A ``t`` is ``t`` itself or reduces to it.
    """
    budget = as_budget(budget)
    for s in candidates:
        if s == t or not equivalent(a, s, t, "A", budget):
            continue
        if not reduces_to(a, s, t, budget):
            return False
    return True
