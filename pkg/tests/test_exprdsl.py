"""Expression language tests: grammar, vectorized evaluation, and error
reporting with source positions."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlab.errors import ParseError
from rlab.exprdsl import parse_expr


def test_constant_and_variable():
    assert parse_expr("3.5")(0.2) == pytest.approx(3.5)
    assert parse_expr("s")(0.7) == pytest.approx(0.7)


def test_arithmetic_precedence():
    assert parse_expr("2+3*4")(0.0) == pytest.approx(14.0)
    assert parse_expr("(2+3)*4")(0.0) == pytest.approx(20.0)
    assert parse_expr("10-4-3")(0.0) == pytest.approx(3.0)
    assert parse_expr("8/4/2")(0.0) == pytest.approx(1.0)


def test_power_right_associative():
    assert parse_expr("2^3^2")(0.0) == pytest.approx(512.0)
    assert parse_expr("2^-s")(2.0) == pytest.approx(0.25)


def test_unary_minus():
    assert parse_expr("-s")(0.3) == pytest.approx(-0.3)
    assert parse_expr("--s")(0.3) == pytest.approx(0.3)
    assert parse_expr("2*-3")(0.0) == pytest.approx(-6.0)


def test_functions():
    assert parse_expr("log(exp(s))")(0.42) == pytest.approx(0.42)
    assert parse_expr("sqrt(s*s)")(0.9) == pytest.approx(0.9)
    assert parse_expr("exp(0)")(0.5) == pytest.approx(1.0)


def test_profile_example():
    f = parse_expr("2+1/log(10/s)")
    assert f(1.0) == pytest.approx(2.0 + 1.0 / np.log(10.0))
    # the limit toward 0 is 2
    assert f(1e-300) == pytest.approx(2.0, abs=1e-2)


def test_vectorized_evaluation():
    f = parse_expr("2 + s*s")
    s = np.linspace(0.0, 1.0, 11)
    out = f(s)
    assert out.shape == s.shape
    assert np.allclose(out, 2.0 + s * s)


def test_constant_broadcasts():
    f = parse_expr("4")
    out = f(np.linspace(0, 1, 5))
    assert out.shape == (5,)
    assert np.all(out == 4.0)


def test_scientific_notation():
    assert parse_expr("1.5e2")(0.0) == pytest.approx(150.0)
    assert parse_expr("2.5E-1")(0.0) == pytest.approx(0.25)


def test_whitespace_tolerated():
    assert parse_expr("  2 +  3 * s ")(2.0) == pytest.approx(8.0)


@pytest.mark.parametrize("source,fragment", [
    ("", "empty"),
    ("2 +", "unexpected end"),
    ("2 + * 3", "expected a value"),
    ("log 3", "expected '('"),
    ("log(3", "expected ')'"),
    ("foo(s)", "unknown name"),
    ("2 @ 3", "unexpected character"),
    ("(2+3))", "unexpected token"),
])
def test_parse_errors(source, fragment):
    with pytest.raises(ParseError) as exc:
        parse_expr(source)
    assert fragment in str(exc.value)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_expr("2 + foo(s)")
    err = exc.value
    assert err.position == 4
    assert "^" in str(err)


def test_repr_keeps_source():
    assert "2+s" in repr(parse_expr("2+s"))


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.99),
       st.floats(min_value=-5.0, max_value=5.0),
       st.floats(min_value=-5.0, max_value=5.0))
def test_linear_expression_matches_numpy(s, a, b):
    f = parse_expr(f"{a!r}*s+{b!r}")
    assert f(s) == pytest.approx(a * s + b, rel=1e-12, abs=1e-12)
