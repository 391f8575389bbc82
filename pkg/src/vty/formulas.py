"""Propositional formula trees and their prefix text syntax.

Formulas are immutable and compare structurally. No normalization is
applied anywhere: ``(and p q)`` and ``(and q p)`` are distinct values.

Text syntax, bit for bit::

    atom     [a-z][a-z0-9_]*
    bottom   bot
    unary    (not F)
    binary   (and F G) | (or F G) | (-> F G)

``parse_formula`` and ``format_formula`` are mutually inverse on
canonical text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import FormulaParseError
from .lex import LexError, Token, tokenize_line

ATOM_NAME = re.compile(r"[a-z][a-z0-9_]*\Z")


class Formula:
    __slots__ = ()

    def __repr__(self) -> str:
        return f"<{format_formula(self)}>"


@dataclass(frozen=True, slots=True, repr=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, slots=True, repr=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True, repr=False)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True, slots=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

_BINARY = {"and": And, "or": Or, "->": Implies}
_BINARY_NAMES = {And: "and", Or: "or", Implies: "->"}


def format_formula(formula: Formula) -> str:
    if isinstance(formula, Atom):
        return formula.name
    if isinstance(formula, Bottom):
        return "bot"
    if isinstance(formula, Not):
        return f"(not {format_formula(formula.operand)})"
    if isinstance(formula, (And, Or, Implies)):
        op = _BINARY_NAMES[type(formula)]
        return f"({op} {format_formula(formula.left)} {format_formula(formula.right)})"
    raise TypeError(f"not a formula: {formula!r}")


@lru_cache(maxsize=65536)
def formula_key(formula: Formula) -> str:
    """Canonical sort key used everywhere formulas are ordered."""
    return format_formula(formula)


def parse_formula_tokens(tokens: list[Token], index: int) -> tuple[Formula, int]:
    """Parse one formula from a token list, returning it and the next index."""
    if index >= len(tokens):
        col = tokens[-1].col + len(tokens[-1].text) if tokens else 0
        raise FormulaParseError("expected a formula", col)
    tok = tokens[index]
    if tok.kind == "WORD":
        if tok.text == "bot":
            return Bottom(), index + 1
        if ATOM_NAME.match(tok.text):
            return Atom(tok.text), index + 1
        raise FormulaParseError(f"bad atom name {tok.text!r}", tok.col)
    if tok.kind == "LPAREN":
        if index + 1 >= len(tokens):
            raise FormulaParseError("expected a connective after (", tok.col)
        op = tokens[index + 1]
        if op.kind != "WORD":
            raise FormulaParseError("expected a connective after (", op.col)
        if op.text == "not":
            operand, nxt = parse_formula_tokens(tokens, index + 2)
            nxt = _expect_rparen(tokens, nxt, tok.col)
            return Not(operand), nxt
        if op.text in _BINARY:
            left, nxt = parse_formula_tokens(tokens, index + 2)
            right, nxt = parse_formula_tokens(tokens, nxt)
            nxt = _expect_rparen(tokens, nxt, tok.col)
            return _BINARY[op.text](left, right), nxt
        raise FormulaParseError(f"unknown connective {op.text!r}", op.col)
    raise FormulaParseError(f"unexpected token {tok.text!r}", tok.col)


def _expect_rparen(tokens: list[Token], index: int, open_col: int) -> int:
    if index >= len(tokens):
        raise FormulaParseError("unclosed ( in formula", open_col)
    if tokens[index].kind != "RPAREN":
        raise FormulaParseError(f"expected ) but found {tokens[index].text!r}", tokens[index].col)
    return index + 1


def parse_formula(text: str) -> Formula:
    try:
        tokens = tokenize_line(text)
    except LexError as exc:
        raise FormulaParseError(exc.message, exc.col) from None
    if not tokens:
        raise FormulaParseError("expected a formula", 0)
    formula, index = parse_formula_tokens(tokens, 0)
    if index != len(tokens):
        raise FormulaParseError("unexpected trailing input", tokens[index].col)
    return formula


def atoms(formula: Formula) -> frozenset[str]:
    found: set[str] = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            found.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.operand)
        elif isinstance(node, (And, Or, Implies)):
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(found)


def subformulas(formula: Formula) -> Iterator[Formula]:
    """Yield the formula and every strict subformula, depth first."""
    yield formula
    if isinstance(formula, Not):
        yield from subformulas(formula.operand)
    elif isinstance(formula, (And, Or, Implies)):
        yield from subformulas(formula.left)
        yield from subformulas(formula.right)


def subformula_closure(formulas: Iterable[Formula]) -> frozenset[Formula]:
    out: set[Formula] = set()
    for formula in formulas:
        out.update(subformulas(formula))
    return frozenset(out)


def substitute(formula: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace atoms by formulas. Atoms not in the mapping stay fixed."""
    if isinstance(formula, Atom):
        return mapping.get(formula.name, formula)
    if isinstance(formula, Bottom):
        return formula
    if isinstance(formula, Not):
        return Not(substitute(formula.operand, mapping))
    cls = type(formula)
    return cls(substitute(formula.left, mapping), substitute(formula.right, mapping))


def rename_atoms(formula: Formula, mapping: Mapping[str, str]) -> Formula:
    if isinstance(formula, Atom):
        return Atom(mapping.get(formula.name, formula.name))
    if isinstance(formula, Bottom):
        return formula
    if isinstance(formula, Not):
        return Not(rename_atoms(formula.operand, mapping))
    cls = type(formula)
    return cls(rename_atoms(formula.left, mapping), rename_atoms(formula.right, mapping))


def evaluate(formula: Formula, assignment: Mapping[str, bool]) -> bool:
    if isinstance(formula, Atom):
        return assignment[formula.name]
    if isinstance(formula, Bottom):
        return False
    if isinstance(formula, Not):
        return not evaluate(formula.operand, assignment)
    if isinstance(formula, And):
        return evaluate(formula.left, assignment) and evaluate(formula.right, assignment)
    if isinstance(formula, Or):
        return evaluate(formula.left, assignment) or evaluate(formula.right, assignment)
    if isinstance(formula, Implies):
        return (not evaluate(formula.left, assignment)) or evaluate(formula.right, assignment)
    raise TypeError(f"not a formula: {formula!r}")


def match_pattern(
    pattern: Formula, target: Formula, bindings: Mapping[str, Formula] | None = None
) -> dict[str, Formula] | None:
    """One-way matching where every atom in the pattern is a metavariable.

    Returns the extended bindings, or None when the shapes disagree or a
    metavariable would need two different values.
    """
    out = dict(bindings) if bindings else {}
    if _match_into(pattern, target, out):
        return out
    return None


def _match_into(pattern: Formula, target: Formula, bindings: dict[str, Formula]) -> bool:
    if isinstance(pattern, Atom):
        bound = bindings.get(pattern.name)
        if bound is None:
            bindings[pattern.name] = target
            return True
        return bound == target
    if isinstance(pattern, Bottom):
        return isinstance(target, Bottom)
    if isinstance(pattern, Not):
        return isinstance(target, Not) and _match_into(pattern.operand, target.operand, bindings)
    if isinstance(pattern, (And, Or, Implies)):
        if type(target) is not type(pattern):
            return False
        return _match_into(pattern.left, target.left, bindings) and _match_into(
            pattern.right, target.right, bindings
        )
    raise TypeError(f"not a formula: {pattern!r}")
