from semibertrand.dsl.ast import Expr, constant, print_expr, substitute
from semibertrand.dsl.jets import Jet4, eval_jet, evaluate
from semibertrand.dsl.parser import parse_expr

__all__ = [
    "Expr",
    "Jet4",
    "constant",
    "eval_jet",
    "evaluate",
    "parse_expr",
    "print_expr",
    "substitute",
]
