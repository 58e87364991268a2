import pytest
import sympy
from conftest import q_plane_context, swap_context

from twisted_forms.braiding import TensorForm, tensor
from twisted_forms.errors import (
    CapExceededError,
    ExpressionError,
    ExpressionSyntaxError,
    ScalarDivisionError,
    UnknownIdentifierError,
)
from twisted_forms.expressions import parse_expression, parse_form, parse_polynomial, parse_scalar, parse_tensor
from twisted_forms.kernel import FieldSpec, polynomial_ring
from twisted_forms.omega import DiffForm

Q_PLANE = q_plane_context()
SWAP = swap_context()

Q_PLANE_CORPUS = [
    "0",
    "1",
    "q",
    "x",
    "dx",
    "x^2",
    "x^3 - 2*x + 1",
    "dx*x",
    "x*dx",
    "x^2*dx + (1-q)*x",
    "(1+q)*dx*x^2",
    "dx*x*x",
    "x*dx*x",
    "1/(1+q)*x",
    "(x+1)^3",
    "(x + q*x)^2",
    "q^2*x*dx - x*dx",
    "dx*dx",
    "x*dx*dx",
    "-x",
    "-(x - 1)*dx",
    "2/3*x^2*dx",
    "x^6",
    "(1 - q^3)/(1 - q)*x",
    "x (x) x",
    "dx (x) x",
    "x*dx (x) x^2",
    "[x (x) dx] - [dx (x) x]",
    "-[1 (x) dx] + [q*dx (x) 1]",
    "x (x) x (x) dx",
]

SWAP_CORPUS = [
    "x + y",
    "dx*y",
    "dy*x",
    "dy*dx",
    "x*dy - y*dx",
    "(x - y)*dx + (x - y)*dy",
    "dx*dy*x",
    "x^2*y - y^2*x",
    "(x + y)^3",
    "dy*dy + dx*dx",
    "1/2*dx + 3*dy",
    "y*dy*x",
    "dx (x) dy",
    "x (x) y",
    "[x (x) dy] + [y (x) dx]",
    "x*dx (x) y*dy",
    "dx*dy (x) 1",
    "dy (x) dx (x) x",
    "-dy*x*y",
    "x*y*dx*dy",
]


def test_worked_examples() -> None:
    assert str(parse_expression("x^2*dx + (1-q)*x", Q_PLANE)) == "(1 - q)*x + x^2*dx"
    assert str(parse_expression("dx*x", Q_PLANE)) == "q*x*dx"
    value = parse_expression("x*dx (x) x^2", Q_PLANE)
    assert isinstance(value, TensorForm)
    assert str(value) == "x*dx (x) x^2"


def test_forms_and_tensors() -> None:
    x, dx = DiffForm.variable(Q_PLANE, 0), DiffForm.letter(Q_PLANE, 0)
    assert parse_form("x^2*dx", Q_PLANE) == x * x * dx
    assert parse_tensor("dx (x) x", Q_PLANE) == tensor(dx, x)
    assert parse_tensor("[x (x) dx] - [dx (x) x]", Q_PLANE) == tensor(x, dx) - tensor(dx, x)
    assert parse_tensor("0", Q_PLANE) == TensorForm.zero(Q_PLANE)
    assert parse_tensor("x (x) x (x) x", Q_PLANE, arity=3).arity == 3
    assert str(parse_expression("dy*dx", SWAP)) == "-dx*dx"


def test_precedence() -> None:
    x = DiffForm.variable(Q_PLANE, 0)
    assert parse_form("-x^2", Q_PLANE) == -(x * x)
    assert parse_form("2*-x", Q_PLANE) == x.scaled(-2)
    assert parse_form("x^2^1", Q_PLANE) == x * x
    assert parse_form("1 - x - x", Q_PLANE) == DiffForm.one(Q_PLANE) - x.scaled(2)
    assert parse_form("x/2*2", Q_PLANE) == x


@pytest.mark.parametrize("text", Q_PLANE_CORPUS)
def test_round_trip_q_plane(text: str) -> None:
    value = parse_expression(text, Q_PLANE)
    assert parse_expression(str(value), Q_PLANE) == value


@pytest.mark.parametrize("text", SWAP_CORPUS)
def test_round_trip_swap(text: str) -> None:
    value = parse_expression(text, SWAP)
    assert parse_expression(str(value), SWAP) == value


def test_syntax_errors() -> None:
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_expression("x +", Q_PLANE)
    assert excinfo.value.line == 1
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("x^x", Q_PLANE)
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("(x", Q_PLANE)
    with pytest.raises(ExpressionSyntaxError):
        parse_form("x (x) x", Q_PLANE)
    with pytest.raises(ExpressionSyntaxError):
        parse_tensor("x", Q_PLANE)
    with pytest.raises(ExpressionSyntaxError):
        parse_tensor("x (x) x (x) x", Q_PLANE)


def test_syntax_error_positions() -> None:
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_expression("x^x", Q_PLANE)
    assert (excinfo.value.line, excinfo.value.column) == (1, 3)
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_expression("x + x^(1+1)", Q_PLANE)
    assert (excinfo.value.line, excinfo.value.column) == (1, 7)


def test_unknown_identifiers() -> None:
    with pytest.raises(UnknownIdentifierError) as excinfo:
        parse_expression("x + z", Q_PLANE)
    assert (excinfo.value.line, excinfo.value.column) == (1, 5)
    assert "'z'" in str(excinfo.value)
    with pytest.raises(UnknownIdentifierError):
        parse_expression("q*x", SWAP)
    with pytest.raises(UnknownIdentifierError):
        parse_expression("dz", SWAP)


def test_division() -> None:
    with pytest.raises(ExpressionError):
        parse_expression("1/x", Q_PLANE)
    with pytest.raises(ScalarDivisionError):
        parse_expression("x/0", Q_PLANE)
    with pytest.raises(ScalarDivisionError):
        parse_expression("x/(1 - 1)", Q_PLANE)


def test_caps_are_enforced() -> None:
    with pytest.raises(CapExceededError):
        parse_expression("x^7", Q_PLANE)


def test_scalars() -> None:
    field_spec = FieldSpec.rational_functions()
    q = field_spec.q()
    assert parse_scalar("1/(1+q)", field_spec) == field_spec.invert(1 + q)
    assert parse_scalar("2^3^2", FieldSpec.rationals()) == sympy.QQ(512)
    assert parse_scalar("q^2", FieldSpec.rationals(3)) == sympy.QQ(9)
    assert parse_scalar("-1/2", FieldSpec.prime_field(5)) == FieldSpec.prime_field(5).convert(2)
    with pytest.raises(UnknownIdentifierError):
        parse_scalar("q", FieldSpec.rationals())
    with pytest.raises(UnknownIdentifierError):
        parse_scalar("x", field_spec)


def test_polynomials() -> None:
    field_spec = FieldSpec.rationals()
    ring = polynomial_ring(field_spec, ["x", "y"])
    x, y = ring.gens
    assert parse_polynomial("x^2 - x", ring, field_spec) == x**2 - x
    assert parse_polynomial("(x + 1)/2", ring, field_spec) == (x + 1).mul_ground(sympy.QQ(1, 2))
    assert parse_polynomial("y*(x - y)", ring, field_spec) == x * y - y**2
    with pytest.raises(UnknownIdentifierError):
        parse_polynomial("dx", ring, field_spec)
    with pytest.raises(ExpressionError):
        parse_polynomial("1/x", ring, field_spec)
