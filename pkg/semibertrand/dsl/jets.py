"""Order-4 truncated Taylor arithmetic and expression evaluation.

A :class:`Jet4` stores normalized Taylor coefficients ``c_k = f^(k)(s0) / k!``
for k = 0..4. Coefficients may be scalars or equally shaped arrays, so one jet
can carry a whole grid of expansion points.
"""
from __future__ import annotations

import logging
import math
from typing import Callable, Dict, Tuple

import numpy as np

from semibertrand.core.exceptions import EvaluationDomainError, NonDifferentiableError, raise_domain_error
from semibertrand.dsl.ast import Add, Call, Div, Expr, Mul, Neg, Num, Pow, Sub, Var

logger = logging.getLogger(__name__)

ORDER = 4
_FACTORIALS = np.array([math.factorial(k) for k in range(ORDER + 1)], dtype=float)


class Jet4:
    """Truncated Taylor expansion through the fourth derivative."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape[0] != ORDER + 1:
            raise ValueError("a jet needs five coefficients")
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value, like=None) -> "Jet4":
        value = np.asarray(value, dtype=float)
        shape = np.shape(like) if like is not None else value.shape
        coeffs = np.zeros((ORDER + 1,) + shape)
        coeffs[0] = value
        return cls(coeffs)

    @classmethod
    def variable(cls, s0) -> "Jet4":
        s0 = np.asarray(s0, dtype=float)
        coeffs = np.zeros((ORDER + 1,) + s0.shape)
        coeffs[0] = s0
        coeffs[1] = 1.0
        return cls(coeffs)

    @classmethod
    def from_derivatives(cls, derivatives) -> "Jet4":
        d = np.asarray(derivatives, dtype=float)
        return cls(d / _FACTORIALS.reshape((-1,) + (1,) * (d.ndim - 1)))

    @property
    def value(self):
        return self.coeffs[0]

    def derivatives(self) -> np.ndarray:
        """Return (f, f', f'', f''', f'''') along the first axis."""
        return self.coeffs * _FACTORIALS.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))

    def derivative(self) -> "Jet4":
        """Jet of f'; its top coefficient is unknown and set to zero."""
        shifted = np.zeros_like(self.coeffs)
        k = np.arange(1, ORDER + 1).reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        shifted[:-1] = self.coeffs[1:] * k
        return Jet4(shifted)

    def __repr__(self) -> str:
        return f"Jet4({self.derivatives().tolist()})"

    # arithmetic

    @staticmethod
    def _lift(other) -> "Jet4":
        if isinstance(other, Jet4):
            return other
        return Jet4.constant(other)

    def __add__(self, other) -> "Jet4":
        other = self._lift(other)
        return Jet4(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet4":
        other = self._lift(other)
        return Jet4(self.coeffs - other.coeffs)

    def __rsub__(self, other) -> "Jet4":
        return self._lift(other) - self

    def __neg__(self) -> "Jet4":
        return Jet4(-self.coeffs)

    def __mul__(self, other) -> "Jet4":
        if not isinstance(other, Jet4):
            return Jet4(self.coeffs * np.asarray(other, dtype=float))
        a, b = np.broadcast_arrays(self.coeffs, other.coeffs)
        out = np.zeros(a.shape)
        for k in range(ORDER + 1):
            for j in range(k + 1):
                out[k] += a[j] * b[k - j]
        return Jet4(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet4":
        if not isinstance(other, Jet4):
            return Jet4(self.coeffs / np.asarray(other, dtype=float))
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "Jet4":
        return self._lift(other) * self.reciprocal()

    def reciprocal(self) -> "Jet4":
        b = self.coeffs
        if np.any(b[0] == 0):
            raise_domain_error("division by zero", None)
        q = np.zeros(b.shape)
        q[0] = 1.0 / b[0]
        for k in range(1, ORDER + 1):
            acc = sum(b[j] * q[k - j] for j in range(1, k + 1))
            q[k] = -acc / b[0]
        return Jet4(q)

    def __pow__(self, n: int) -> "Jet4":
        if not isinstance(n, (int, np.integer)):
            raise TypeError("jets only support integer powers")
        if n < 0:
            return self.reciprocal() ** (-n)
        result = Jet4.constant(np.ones_like(self.coeffs[0]))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # elementary functions through their defining differential equations

    def _first_order(self, f0, rhs: Callable[[np.ndarray, int], np.ndarray]) -> np.ndarray:
        a = self.coeffs
        out = np.zeros(a.shape)
        out[0] = f0
        for k in range(1, ORDER + 1):
            out[k] = rhs(out, k) / k
        return out

    def exp(self) -> "Jet4":
        a = self.coeffs
        return Jet4(self._first_order(np.exp(a[0]), lambda e, k: sum(j * a[j] * e[k - j] for j in range(1, k + 1))))

    def _trig_pair(self, hyperbolic: bool) -> Tuple["Jet4", "Jet4"]:
        a = self.coeffs
        sn = np.zeros(a.shape)
        cs = np.zeros(a.shape)
        if hyperbolic:
            sn[0], cs[0] = np.sinh(a[0]), np.cosh(a[0])
        else:
            sn[0], cs[0] = np.sin(a[0]), np.cos(a[0])
        sign = 1.0 if hyperbolic else -1.0
        for k in range(1, ORDER + 1):
            sn[k] = sum(j * a[j] * cs[k - j] for j in range(1, k + 1)) / k
            cs[k] = sign * sum(j * a[j] * sn[k - j] for j in range(1, k + 1)) / k
        return Jet4(sn), Jet4(cs)

    def sin(self) -> "Jet4":
        return self._trig_pair(hyperbolic=False)[0]

    def cos(self) -> "Jet4":
        return self._trig_pair(hyperbolic=False)[1]

    def sinh(self) -> "Jet4":
        return self._trig_pair(hyperbolic=True)[0]

    def cosh(self) -> "Jet4":
        return self._trig_pair(hyperbolic=True)[1]

    def sqrt(self) -> "Jet4":
        a = self.coeffs
        if np.any(a[0] < 0):
            raise_domain_error("sqrt of a negative value", None)
        if np.any(a[0] == 0):
            raise NonDifferentiableError("sqrt", None)
        r = np.zeros(a.shape)
        r[0] = np.sqrt(a[0])
        for k in range(1, ORDER + 1):
            acc = sum(r[j] * r[k - j] for j in range(1, k))
            r[k] = (a[k] - acc) / (2.0 * r[0])
        return Jet4(r)


_JET_FUNCTIONS: Dict[str, Callable[[Jet4], Jet4]] = {
    "sin": Jet4.sin,
    "cos": Jet4.cos,
    "sinh": Jet4.sinh,
    "cosh": Jet4.cosh,
    "exp": Jet4.exp,
    "sqrt": Jet4.sqrt,
}


def _jet(e: Expr, x: Jet4) -> Jet4:
    if isinstance(e, Num):
        return Jet4.constant(e.value, like=x.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_jet(e.operand, x)
    if isinstance(e, Add):
        return _jet(e.left, x) + _jet(e.right, x)
    if isinstance(e, Sub):
        return _jet(e.left, x) - _jet(e.right, x)
    if isinstance(e, Mul):
        return _jet(e.left, x) * _jet(e.right, x)
    if isinstance(e, Div):
        return _jet(e.left, x) / _jet(e.right, x)
    if isinstance(e, Pow):
        return _jet(e.base, x) ** e.exponent
    if isinstance(e, Call):
        return _JET_FUNCTIONS[e.func](_jet(e.arg, x))
    raise TypeError(f"not an expression: {e!r}")


def eval_jet(e: Expr, s0) -> Jet4:
    """Value and first four derivatives of ``e`` at ``s0`` (scalar or array)."""
    try:
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            return _jet(e, Jet4.variable(s0))
    except FloatingPointError as exc:
        raise_domain_error(str(exc), _describe_point(s0))
    except EvaluationDomainError as exc:
        # jets do not know their expansion point; attach it here
        raise _at_point(exc, s0) from None


def _at_point(exc: EvaluationDomainError, s0) -> EvaluationDomainError:
    operation = exc.details["operation"]
    if isinstance(exc, NonDifferentiableError):
        return NonDifferentiableError(operation, _describe_point(s0))
    return EvaluationDomainError(operation, _describe_point(s0))


def _sqrt(x):
    if np.any(x < 0):
        raise_domain_error("sqrt of a negative value", None)
    return np.sqrt(x)


_FLOAT_FUNCTIONS: Dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "exp": np.exp,
    "sqrt": _sqrt,
}


def _value(e: Expr, x: np.ndarray) -> np.ndarray:
    if isinstance(e, Num):
        return np.full(x.shape, e.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_value(e.operand, x)
    if isinstance(e, Add):
        return _value(e.left, x) + _value(e.right, x)
    if isinstance(e, Sub):
        return _value(e.left, x) - _value(e.right, x)
    if isinstance(e, Mul):
        return _value(e.left, x) * _value(e.right, x)
    if isinstance(e, Div):
        return _value(e.left, x) / _value(e.right, x)
    if isinstance(e, Pow):
        base = _value(e.base, x)
        if e.exponent < 0 and np.any(base == 0):
            raise_domain_error("division by zero", None)
        return base ** float(e.exponent)
    if isinstance(e, Call):
        return _FLOAT_FUNCTIONS[e.func](_value(e.arg, x))
    raise TypeError(f"not an expression: {e!r}")


def evaluate(e: Expr, s):
    """Plain float value of ``e`` at ``s`` (scalar or array), without derivatives."""
    x = np.asarray(s, dtype=float)
    try:
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            return _value(e, x)
    except FloatingPointError as exc:
        raise_domain_error(str(exc), _describe_point(s))
    except EvaluationDomainError as exc:
        raise _at_point(exc, s) from None


def _describe_point(s0):
    arr = np.asarray(s0, dtype=float)
    if arr.ndim == 0:
        return float(arr)
    return f"[{arr.min():.6g}, {arr.max():.6g}]"
