"""Tests for Taylor-jet evaluation of curve expressions."""

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from semibertrand.core.exceptions import EvaluationDomainError, NonDifferentiableError
from semibertrand.dsl import Jet4, eval_jet, evaluate, parse_expr
from semibertrand.dsl.ast import Add, Call, Div, Mul, Neg, Num, Pow, Sub, Var
from semibertrand.utils.finite_differences import richardson_derivatives

leaves = st.one_of(st.just(Var()), st.floats(0.5, 2.0).map(Num))


def _bounded(children):
    """Trees whose every subexpression stays inside its domain on [-1, 1]."""
    return st.one_of(
        st.builds(Neg, children),
        st.builds(Add, children, children),
        st.builds(Sub, children, children),
        st.builds(Mul, children, children),
        st.builds(lambda a, n: Pow(Call("cos", a), n), children, st.integers(0, 3)),
        st.builds(lambda a, b: Div(a, Add(Num(3.0), Call("sin", b))), children, children),
        st.builds(lambda a: Call("sqrt", Add(Num(1.5), Call("cos", a))), children),
        st.builds(lambda f, a: Call(f, Call("sin", a)), st.sampled_from(["exp", "sinh", "cosh"]), children),
        st.builds(lambda f, a: Call(f, a), st.sampled_from(["sin", "cos"]), children),
    )


bounded_expressions = st.recursive(leaves, _bounded, max_leaves=6)


def _mp_value(e, x):
    if isinstance(e, Num):
        return mpmath.mpf(e.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_mp_value(e.operand, x)
    if isinstance(e, Add):
        return _mp_value(e.left, x) + _mp_value(e.right, x)
    if isinstance(e, Sub):
        return _mp_value(e.left, x) - _mp_value(e.right, x)
    if isinstance(e, Mul):
        return _mp_value(e.left, x) * _mp_value(e.right, x)
    if isinstance(e, Div):
        return _mp_value(e.left, x) / _mp_value(e.right, x)
    if isinstance(e, Pow):
        return _mp_value(e.base, x) ** e.exponent
    return getattr(mpmath, e.func)(_mp_value(e.arg, x))


def _mp_derivatives(e, s0):
    with mpmath.workdps(40):
        return [float(d) for d in mpmath.diffs(lambda x: _mp_value(e, x), mpmath.mpf(s0), 4)]


@hypothesis_settings(max_examples=1000, deadline=None)
@given(bounded_expressions, st.floats(-1.0, 1.0))
def test_jet_matches_high_precision_derivatives(e, s0):
    """Test orders 0-4 against high-precision numerical differentiation."""
    jet = eval_jet(e, s0).derivatives()
    reference = _mp_derivatives(e, s0)
    for order in range(5):
        assert abs(jet[order] - reference[order]) <= 1e-6 * max(1.0, abs(reference[order]))


@pytest.mark.parametrize(
    "text",
    ["2*sinh(s)", "sqrt(3)*s", "exp(-s^2/2)", "1/(2 + cos(s))", "s^3 - 2*s + sqrt(1 + s^2)", "cosh(s)^(-2)"],
)
def test_jet_matches_richardson_differences(text):
    """Test jets against Richardson-extrapolated five-point differences."""
    e = parse_expr(text)
    spacing = 1e-3
    s = np.arange(-1.5, 1.5 + spacing / 2, spacing)
    values = evaluate(e, s)[:, None]
    indices = np.array([600, 1500, 2400])
    fd = richardson_derivatives(values, spacing, indices)[:, :, 0]
    jets = eval_jet(e, s[indices]).derivatives().T
    scale = np.maximum(1.0, np.abs(jets))
    assert np.all(np.abs(fd[:, 1:3] - jets[:, 1:3]) <= 1e-8 * scale[:, 1:3])
    assert np.all(np.abs(fd[:, 3:] - jets[:, 3:]) <= 1e-5 * scale[:, 3:])


def test_jet_of_known_functions():
    """Test closed-form derivatives of sinh and sqrt."""
    d = eval_jet(parse_expr("2*sinh(s)"), 0.5).derivatives()
    assert d == pytest.approx([2 * np.sinh(0.5), 2 * np.cosh(0.5)] * 2 + [2 * np.sinh(0.5)], rel=1e-14)
    d = eval_jet(parse_expr("sqrt(s)"), 4.0).derivatives()
    assert d == pytest.approx([2.0, 0.25, -1 / 32, 3 / 256, -15 / 2048], rel=1e-13)


def test_jet_vectorizes_over_points():
    """Test that array points give one jet per point."""
    s = np.linspace(0.0, 1.0, 7)
    jet = eval_jet(parse_expr("s^2"), s)
    assert jet.derivatives().shape == (5, 7)
    assert np.allclose(jet.derivatives()[2], 2.0)
    assert np.allclose(evaluate(parse_expr("3"), s), 3.0)


def test_jet_arithmetic():
    """Test products, quotients and the derivative shift."""
    x = Jet4.variable(2.0)
    q = (x * x) / (x + 1.0)
    assert q.value == pytest.approx(4.0 / 3.0)
    assert q.derivatives()[1] == pytest.approx((2 * 2.0 * 3.0 - 4.0) / 9.0)
    dx = (x**3).derivative()
    assert dx.derivatives()[:4] == pytest.approx([12.0, 12.0, 6.0, 0.0])


def test_domain_errors_carry_the_point():
    """Test sqrt, division and reciprocal-power failures."""
    with pytest.raises(EvaluationDomainError) as exc_info:
        eval_jet(parse_expr("sqrt(s)"), 0.0)
    assert exc_info.value.point == 0.0
    with pytest.raises(EvaluationDomainError):
        evaluate(parse_expr("1/s"), 0.0)
    with pytest.raises(EvaluationDomainError):
        evaluate(parse_expr("s^(-2)"), 0.0)
    with pytest.raises(EvaluationDomainError) as exc_info:
        evaluate(parse_expr("sqrt(s - 2)"), np.linspace(0.0, 1.0, 5))
    assert exc_info.value.point == "[0, 1]"


def test_overflow_is_a_domain_error():
    """Test that floating-point overflow surfaces as a domain error."""
    with pytest.raises(EvaluationDomainError):
        evaluate(parse_expr("exp(exp(s))"), 10.0)


def test_sqrt_at_zero_has_a_value_but_no_derivatives():
    """Test that sqrt(0) evaluates while its jet reports non-differentiability."""
    e = parse_expr("sqrt(s)")
    assert evaluate(e, 0.0) == 0.0
    assert np.allclose(evaluate(e, np.array([0.0, 4.0])), [0.0, 2.0])
    with pytest.raises(NonDifferentiableError) as exc_info:
        eval_jet(e, 0.0)
    assert exc_info.value.error_code == "NOT_DIFFERENTIABLE"
    assert "not differentiable" in exc_info.value.message
    with pytest.raises(EvaluationDomainError) as exc_info:
        eval_jet(e, -1.0)
    assert not isinstance(exc_info.value, NonDifferentiableError)
    assert exc_info.value.details["operation"] == "sqrt of a negative value"


@pytest.mark.parametrize("text", ["2*sinh(s)", "exp(-s^2/2)", "1/(2 + cos(s))", "cosh(s)^(-2) - s^3", "-sqrt(1 + s^2)"])
def test_evaluate_agrees_with_jet_values(text):
    """Test that the float evaluator matches the order-0 jet coefficient."""
    e = parse_expr(text)
    s = np.linspace(-1.5, 1.5, 31)
    assert np.allclose(evaluate(e, s), eval_jet(e, s).value, rtol=1e-14, atol=1e-14)
