"""Expression tree for curve components and curvature functions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "sqrt")
VARIABLE = "s"

# binding strength used by the printer
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


@dataclass(frozen=True)
class Num:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value < 0:
            raise ValueError("literals are finite and non-negative; use Neg for signs")


@dataclass(frozen=True)
class Var:
    name: str = VARIABLE


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function {self.func}")


Expr = Union[Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call]

_BINARY = {Add: ("+", _PREC_ADD), Sub: ("-", _PREC_ADD), Mul: ("*", _PREC_MUL), Div: ("/", _PREC_MUL)}


def _precedence(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def print_expr(e: Expr) -> str:
    """Render ``e`` with the fewest parentheses that re-parse to the same tree."""
    if isinstance(e, Num):
        return _format_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({print_expr(e.arg)})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _PREC_NEG)
    if isinstance(e, Pow):
        base = print_expr(e.base)
        if _precedence(e.base) != _PREC_ATOM:
            base = f"({base})"
        return f"{base}^{e.exponent}"
    symbol, prec = _BINARY[type(e)]
    # left-associative: a right operand of equal strength needs parentheses
    return f"{_wrap(e.left, prec)} {symbol} {_wrap(e.right, prec + 1)}"


def _wrap(e: Expr, min_prec: int) -> str:
    text = print_expr(e)
    return f"({text})" if _precedence(e) < min_prec else text


def substitute(e: Expr, replacement: Expr) -> Expr:
    """Replace every occurrence of the parameter in ``e`` by ``replacement``."""
    if isinstance(e, Var):
        return replacement
    if isinstance(e, Num):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, replacement))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, replacement), e.exponent)
    if isinstance(e, Call):
        return Call(e.func, substitute(e.arg, replacement))
    return type(e)(substitute(e.left, replacement), substitute(e.right, replacement))


def constant(value: float) -> Expr:
    """Literal for any finite real, negative values wrapped in Neg."""
    return Neg(Num(-value)) if value < 0 else Num(value)


def depth(e: Expr) -> int:
    if isinstance(e, (Num, Var)):
        return 1
    if isinstance(e, (Neg, Pow)):
        return 1 + depth(e.operand if isinstance(e, Neg) else e.base)
    if isinstance(e, Call):
        return 1 + depth(e.arg)
    return 1 + max(depth(e.left), depth(e.right))
