"""Terms over a ranked alphabet.

A term is either a :class:`Var` (``x1``, ``x2``, ...) or an :class:`App` of a
symbol to as many children as its arity. Positions are tuples of 1-based
child indices, the empty tuple being the root.

Both node types are frozen dataclasses, so structural equality and hashing
come for free and terms can be shared freely.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple, Union

from .errors import InvalidPosition, SignatureError, TermSyntaxError

Position = tuple[int, ...]
ROOT: Position = ()

_VAR_RE = re.compile(r"x[0-9]+\Z")
_IDENT_RE = re.compile(r"[A-Za-z0-9_]+")


def is_variable_name(name: str) -> bool:
    return _VAR_RE.match(name) is not None


class Signature:
    """A ranked alphabet: symbol names with arities, in declaration order."""

    __slots__ = ("_arity",)

    def __init__(self, symbols: Mapping[str, int] | list[tuple[str, int]]):
        items = symbols.items() if isinstance(symbols, Mapping) else symbols
        arity: dict[str, int] = {}
        for name, n in items:
            if not isinstance(name, str) or not _IDENT_RE.fullmatch(name):
                raise SignatureError(f"invalid symbol name {name!r}")
            if is_variable_name(name):
                raise SignatureError(f"symbol name {name!r} collides with the variable namespace")
            if not isinstance(n, int) or n < 0:
                raise SignatureError(f"arity of {name!r} must be a non-negative integer, got {n!r}")
            if name in arity and arity[name] != n:
                raise SignatureError(f"symbol {name!r} declared with arities {arity[name]} and {n}")
            arity[name] = n
        if not any(n == 0 for n in arity.values()):
            raise SignatureError("signature needs at least one nullary symbol")
        self._arity = arity

    def arity(self, name: str) -> int:
        return self._arity[name]

    def __contains__(self, name: object) -> bool:
        return name in self._arity

    def __iter__(self) -> Iterator[str]:
        return iter(self._arity)

    def __len__(self) -> int:
        return len(self._arity)

    def items(self):
        return self._arity.items()

    @property
    def nullary(self) -> tuple[str, ...]:
        """F0 in declaration order."""
        return tuple(f for f, n in self._arity.items() if n == 0)

    def of_arity(self, n: int) -> tuple[str, ...]:
        return tuple(f for f, k in self._arity.items() if k == n)

    @property
    def max_arity(self) -> int:
        return max(self._arity.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return list(self._arity.items()) == list(other._arity.items())

    def __hash__(self) -> int:
        return hash(tuple(self._arity.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{f}/{n}" for f, n in self._arity.items())
        return f"Signature({body})"


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"variable index must be a positive integer, got {self.index!r}")

    def __str__(self) -> str:
        return f"x{self.index}"


@dataclass(frozen=True, slots=True)
class App:
    symbol: str
    children: tuple["Term", ...] = ()

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))

    def __str__(self) -> str:
        return format_term(self)


Term = Union[Var, App]


def check_term(t: Term, sig: Signature) -> None:
    """Raise :class:`SignatureError` unless every symbol of ``t`` fits ``sig``."""
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, App):
            if node.symbol not in sig:
                raise SignatureError(f"unknown symbol {node.symbol!r}")
            if sig.arity(node.symbol) != len(node.children):
                raise SignatureError(
                    f"symbol {node.symbol!r} has arity {sig.arity(node.symbol)}, "
                    f"applied to {len(node.children)} arguments"
                )
            stack.extend(node.children)


# -- text format -------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.i = 0

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def error(self, message: str, offset: int | None = None):
        offset = self.i if offset is None else offset
        where = "end of input" if offset >= len(self.text) else repr(self.text[offset])
        raise TermSyntaxError(f"{message} (found {where})", offset)

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def term(self) -> Term:
        self.skip_ws()
        start = self.i
        m = _IDENT_RE.match(self.text, self.i)
        if m is None:
            if self.peek() in (",", ")"):
                self.error("empty argument")
            self.error("expected a symbol or variable")
        name = m.group()
        self.i = m.end()
        self.skip_ws()
        children: list[Term] = []
        if self.peek() == "(":
            self.i += 1
            children.append(self.term())
            self.skip_ws()
            while self.peek() == ",":
                self.i += 1
                children.append(self.term())
                self.skip_ws()
            if self.peek() != ")":
                self.error("expected ',' or ')'")
            self.i += 1
        if is_variable_name(name):
            if children:
                raise TermSyntaxError(f"variable {name} cannot take arguments", start)
            if int(name[1:]) < 1:
                raise TermSyntaxError(f"variable indices start at 1, got {name}", start)
            return Var(int(name[1:]))
        if name not in self.sig:
            raise TermSyntaxError(f"unknown symbol {name!r}", start)
        if self.sig.arity(name) != len(children):
            raise TermSyntaxError(
                f"arity mismatch: {name!r} expects {self.sig.arity(name)} arguments, "
                f"got {len(children)}",
                start,
            )
        return App(name, tuple(children))


def parse_term(text: str, sig: Signature) -> Term:
    """Parse prefix notation such as ``g1(f1(x3),x2)``.

    Identifiers of the form ``x<digits>`` are variables; everything else must
    be a symbol of ``sig`` applied to exactly its arity. Whitespace between
    tokens is ignored.
    """
    p = _Parser(text, sig)
    t = p.term()
    p.skip_ws()
    if p.i != len(text):
        p.error("unexpected trailing input")
    return t


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if not t.children:
        return t.symbol
    return t.symbol + "(" + ",".join(format_term(c) for c in t.children) + ")"


def format_position(p: Position) -> str:
    """Digit string for single-digit paths, dot-separated otherwise; ``ε`` for the root."""
    if not p:
        return "ε"
    if all(k <= 9 for k in p):
        return "".join(map(str, p))
    return ".".join(map(str, p))


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("", "ε", "e", "eps"):
        return ROOT
    parts = text.split(".") if "." in text else list(text)
    try:
        p = tuple(int(k) for k in parts)
    except ValueError:
        raise ValueError(f"invalid position {text!r}") from None
    if any(k < 1 for k in p):
        raise ValueError(f"invalid position {text!r}: child indices start at 1")
    return p


# -- structure ---------------------------------------------------------------


def head(t: Term) -> str:
    """Label at the root: a symbol name or ``x<i>``."""
    return t.symbol if isinstance(t, App) else f"x{t.index}"


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.children:
        return 0
    return 1 + max(depth(c) for c in t.children)


def size(t: Term) -> int:
    """Number of nodes."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(c) for c in t.children)


def variables(t: Term) -> frozenset[int]:
    """Var(t) as a set of variable indices."""
    out: set[int] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.index)
        else:
            stack.extend(node.children)
    return frozenset(out)


def variable_leaf_count(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return sum(variable_leaf_count(c) for c in t.children)


def is_ground(t: Term) -> bool:
    return not variables(t)


def iter_subterms(t: Term, prefix: Position = ROOT) -> Iterator[tuple[Position, Term]]:
    """Yield ``(position, subterm)`` pairs in preorder, i.e. lexicographic path order."""
    yield prefix, t
    if isinstance(t, App):
        for k, c in enumerate(t.children, 1):
            yield from iter_subterms(c, prefix + (k,))


def shortlex(p: Position) -> tuple[int, Position]:
    """Sort key: shallower positions first, then lexicographic."""
    return (len(p), p)


class Positions(NamedTuple):
    all: frozenset[Position]
    frontier: frozenset[Position]
    variable: frozenset[Position]
    constant: frozenset[Position]


def positions(t: Term) -> Positions:
    """Pos(t) together with its frontier, variable and constant subsets."""
    every, frontier, var = [], [], []
    for p, s in iter_subterms(t):
        every.append(p)
        if isinstance(s, Var):
            frontier.append(p)
            var.append(p)
        elif not s.children:
            frontier.append(p)
    frontier_set = frozenset(frontier)
    var_set = frozenset(var)
    return Positions(frozenset(every), frontier_set, var_set, frontier_set - var_set)


def subterm_at(t: Term, p: Position) -> Term:
    node = t
    for k in p:
        if isinstance(node, Var) or not 1 <= k <= len(node.children):
            raise InvalidPosition(f"position {format_position(p)} not in term {format_term(t)}")
        node = node.children[k - 1]
    return node


def replace_at(t: Term, p: Position, u: Term) -> Term:
    """``t[u]_p``: the term ``t`` with the subterm at ``p`` replaced by ``u``."""
    if not p:
        return u
    if isinstance(t, Var) or not 1 <= p[0] <= len(t.children):
        raise InvalidPosition(f"position {format_position(p)} not in term {format_term(t)}")
    k = p[0] - 1
    children = list(t.children)
    children[k] = replace_at(children[k], p[1:], u)
    return App(t.symbol, tuple(children))


def substitute(t: Term, bindings: Mapping[int, Term]) -> Term:
    """Simultaneous substitution of ``bindings[i]`` for every occurrence of ``x<i>``."""
    if isinstance(t, Var):
        return bindings.get(t.index, t)
    if not t.children:
        return t
    return App(t.symbol, tuple(substitute(c, bindings) for c in t.children))


def strong_chain_to_root(t: Term, p: Position) -> list[Position]:
    """Positions ``p, parent(p), ..., ε``; the only strong chain from ``t|p`` to ``t``."""
    subterm_at(t, p)
    return [p[:k] for k in range(len(p), -1, -1)]


def is_proper_subterm(s: Term, t: Term) -> Position | None:
    """Shallowest, then leftmost, non-root position of ``t`` holding ``s``; None if ``s`` is not ◁ ``t``."""
    hits = [p for p, sub in iter_subterms(t) if p and sub == s]
    return min(hits, key=shortlex) if hits else None
