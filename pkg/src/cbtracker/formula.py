"""KPI formula mini-language: AST, parser, canonical formatter, evaluator.

Grammar (left associative, ``*``/``/`` bind tighter than ``+``/``-``)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := number | kpiref | '(' expr ')'
    kpiref := '(' taskId ',' kpiName ')'
    taskId := digits ('.' digits)*
    number := digits (('.'|',') digits)?

A comma between two digits in a number is a decimal separator, so the
formulas ``(1.5,Streaming count)*0,45`` and ``(1.2, Streaming count)*0.5``
both parse. An opening parenthesis starts a reference iff its content up to
the next closing parenthesis looks like ``taskId , name`` where the name
contains at least one non-digit character; otherwise it is grouping. Inside
a reference the first comma after the task id is the argument separator
(names may contain further commas, but no parentheses). Canonical output
uses the dot separator, single spaces around operators, and ``(id,name)``
references without inner padding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Callable, Iterator, Union

from .errors import CbtError


class FormulaSyntaxError(CbtError):
    code = "formula_syntax"

    def __init__(self, message: str, column: int):
        super().__init__(message, location=f"column {column}")
        self.column = column


class DivisionByZeroError(CbtError):
    code = "division_by_zero"


@dataclass(frozen=True)
class Literal:
    value: Decimal


@dataclass(frozen=True)
class KpiRef:
    task_id: str
    kpi_name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "FormulaExpr"
    right: "FormulaExpr"
    # source column of the operator; not part of structural equality
    pos: int | None = field(default=None, compare=False)


FormulaExpr = Union[Literal, KpiRef, BinOp]

_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)?")
_KPIREF_RE = re.compile(r"^\s*(\d+(?:\.\d+)*)\s*,(.*)$", re.S)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> FormulaSyntaxError:
        column = (self.pos if pos is None else pos) + 1
        return FormulaSyntaxError(message, column)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> FormulaExpr:
        expr = self.parse_expr()
        self.skip_ws()
        if self.pos < len(self.text):
            raise self.error(f"unexpected {self.text[self.pos]!r}")
        return expr

    def parse_expr(self) -> FormulaExpr:
        expr = self.parse_term()
        while True:
            self.skip_ws()
            if self.peek() in ("+", "-"):
                op_pos = self.pos
                op = self.text[self.pos]
                self.pos += 1
                expr = BinOp(op, expr, self.parse_term(), pos=op_pos + 1)
            else:
                return expr

    def parse_term(self) -> FormulaExpr:
        expr = self.parse_factor()
        while True:
            self.skip_ws()
            if self.peek() in ("*", "/"):
                op_pos = self.pos
                op = self.text[self.pos]
                self.pos += 1
                expr = BinOp(op, expr, self.parse_factor(), pos=op_pos + 1)
            else:
                return expr

    def parse_factor(self) -> FormulaExpr:
        self.skip_ws()
        ch = self.peek()
        if ch.isdigit():
            return self.parse_number()
        if ch == "(":
            ref = self.try_parse_kpiref()
            if ref is not None:
                return ref
            self.pos += 1
            expr = self.parse_expr()
            self.skip_ws()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return expr
        if ch == "":
            raise self.error("unexpected end of formula")
        raise self.error(f"unexpected {ch!r}")

    def parse_number(self) -> Literal:
        match = _NUMBER_RE.match(self.text, self.pos)
        if not match:
            raise self.error("expected number")
        self.pos = match.end()
        try:
            value = Decimal(match.group().replace(",", "."))
        except InvalidOperation:  # pragma: no cover - regex guarantees shape
            raise self.error(f"bad number {match.group()!r}", match.start()) from None
        return Literal(value)

    def try_parse_kpiref(self) -> KpiRef | None:
        close = self.text.find(")", self.pos + 1)
        if close < 0:
            return None
        match = _KPIREF_RE.match(self.text[self.pos + 1 : close])
        if not match:
            return None
        name = match.group(2).strip()
        if not name:
            raise self.error("empty KPI name in reference")
        if all(c.isdigit() for c in name):
            # all-digit "name" means this is grouped arithmetic, not a reference
            return None
        self.pos = close + 1
        return KpiRef(task_id=match.group(1), kpi_name=name)


def parse_formula(text: str) -> FormulaExpr:
    """Parse formula text into an AST; raises FormulaSyntaxError with a column."""
    if not text.strip():
        raise FormulaSyntaxError("empty formula", 1)
    return _Parser(text).parse()


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _format(expr: FormulaExpr, parent_prec: int, right_side: bool) -> str:
    if isinstance(expr, Literal):
        return f"{expr.value:f}"
    if isinstance(expr, KpiRef):
        return f"({expr.task_id},{expr.kpi_name})"
    prec = _PRECEDENCE[expr.op]
    text = f"{_format(expr.left, prec, False)} {expr.op} {_format(expr.right, prec, True)}"
    if prec < parent_prec or (prec == parent_prec and right_side):
        return f"({text})"
    return text


def format_formula(expr: FormulaExpr) -> str:
    """Render the canonical text form; parse_formula(format_formula(e)) == e."""
    return _format(expr, 0, False)


def iter_refs(expr: FormulaExpr) -> Iterator[KpiRef]:
    """Yield every KPI reference in the expression, left to right."""
    if isinstance(expr, KpiRef):
        yield expr
    elif isinstance(expr, BinOp):
        yield from iter_refs(expr.left)
        yield from iter_refs(expr.right)


def evaluate_formula(
    expr: FormulaExpr, lookup: Callable[[str, str], Decimal]
) -> Decimal:
    """Evaluate with references resolved through ``lookup(task_id, kpi_name)``.

    Division by zero raises :class:`DivisionByZeroError` carrying the source
    column of the division operator when the AST was parsed from text.
    """
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, KpiRef):
        return lookup(expr.task_id, expr.kpi_name)
    left = evaluate_formula(expr.left, lookup)
    right = evaluate_formula(expr.right, lookup)
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    if expr.op == "*":
        return left * right
    if right == 0:
        location = f"column {expr.pos}" if expr.pos is not None else None
        raise DivisionByZeroError("division by zero", location=location)
    return left / right


def substitute(expr: FormulaExpr, task_id: str, kpi_name: str, value: Decimal) -> FormulaExpr:
    """Replace matching references by a literal; used for soundness checks."""
    if isinstance(expr, KpiRef) and expr.task_id == task_id and expr.kpi_name == kpi_name:
        return Literal(value)
    if isinstance(expr, BinOp):
        return BinOp(
            expr.op,
            substitute(expr.left, task_id, kpi_name, value),
            substitute(expr.right, task_id, kpi_name, value),
            pos=expr.pos,
        )
    return expr
