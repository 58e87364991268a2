"""The expression language for scalars, polynomials, forms and tensors of forms.

    expr   := term (('+' | '-') term)*        term := factor (('*' | '/') factor)*
    factor := '-' factor | power              power := atom ('^' int)*
    atom   := int | variable | 'd' variable | parameter | '(' expr ')'
    tensor := expr ('(x)' expr)+              sum := ['+' | '-'] '[' tensor ']' (('+' | '-') '[' tensor ']')*
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any, Generic, TypeVar

import pyparsing as pp
from sympy.polys.rings import PolyElement, PolyRing

from twisted_forms.braiding import TensorForm, tensor
from twisted_forms.errors import ExpressionError, ExpressionSyntaxError, ScalarDivisionError, UnknownIdentifierError
from twisted_forms.kernel import FieldSpec, Scalar
from twisted_forms.omega import AlgebraCtx, DiffForm

logger = logging.getLogger(__name__)

pp.ParserElement.enable_packrat()

V = TypeVar("V")

TENSOR_SEPARATOR = "(x)"


@dataclass(frozen=True)
class _Name:
    text: str
    location: int


@dataclass(frozen=True)
class _TensorNode:
    factors: tuple[Any, ...]
    location: int


class _Operator(str):
    """An operator token that remembers where it was read."""

    location: int

    def __new__(cls, text: str, location: int) -> "_Operator":
        operator = super().__new__(cls, text)
        operator.location = location
        return operator


@dataclass(frozen=True)
class _TensorSumNode:
    terms: tuple[tuple[str, _TensorNode], ...]


def _tensor_sum(tokens: pp.ParseResults) -> _TensorSumNode:
    items = list(tokens)
    return _TensorSumNode(tuple((items[index], items[index + 1]) for index in range(0, len(items), 2)))


def _build_grammar() -> tuple[pp.ParserElement, pp.ParserElement]:
    integer = pp.Word(pp.nums).set_parse_action(lambda tokens: int(tokens[0]))
    name = pp.Word(pp.alphas + "_", pp.alphanums + "_").set_parse_action(
        lambda _source, location, tokens: _Name(tokens[0], location)
    )
    caret = pp.Literal("^").set_parse_action(lambda _source, location, tokens: _Operator(tokens[0], location))
    expr = pp.infix_notation(
        integer | name,
        [
            (caret, 2, pp.OpAssoc.RIGHT),
            ("-", 1, pp.OpAssoc.RIGHT),
            (pp.one_of("* /"), 2, pp.OpAssoc.LEFT),
            (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT),
        ],
    )
    separator = pp.Suppress(pp.Literal(TENSOR_SEPARATOR))
    tensor_term = (expr + pp.OneOrMore(separator + expr)).set_parse_action(
        lambda _source, location, tokens: _TensorNode(tuple(tokens), location)
    )
    bracketed = pp.Suppress("[") + tensor_term + pp.Suppress("]")
    tensor_sum = (
        pp.Opt(pp.one_of("+ -"), default="+") + bracketed + pp.ZeroOrMore(pp.one_of("+ -") + bracketed)
    ).set_parse_action(_tensor_sum)
    return expr, tensor_sum | tensor_term | expr


_EXPRESSION, _INPUT = _build_grammar()


def _parse(text: str, grammar: pp.ParserElement) -> Any:
    try:
        return grammar.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as error:
        msg = f"cannot parse {text!r}: {error.msg} (line {error.lineno}, column {error.col})"
        raise ExpressionSyntaxError(msg, error.lineno, error.col) from error


# -- semantics ---------------------------------------------------------------------------------------------------------


class _Semantics(Generic[V]):
    def __init__(self, source: str) -> None:
        self.source = source

    def integer(self, value: int) -> V:
        raise NotImplementedError

    def name(self, name: _Name) -> V:
        raise NotImplementedError

    def add(self, left: V, right: V) -> V:
        return left + right  # type: ignore[operator,no-any-return]

    def subtract(self, left: V, right: V) -> V:
        return left - right  # type: ignore[operator,no-any-return]

    def multiply(self, left: V, right: V) -> V:
        return left * right  # type: ignore[operator,no-any-return]

    def negate(self, value: V) -> V:
        return -value  # type: ignore[operator,no-any-return]

    def divide(self, left: V, right: V) -> V:
        raise NotImplementedError

    def power(self, base: V, exponent: int) -> V:
        return base**exponent  # type: ignore[operator,no-any-return]

    def unknown(self, name: _Name, reason: str = "unknown identifier") -> UnknownIdentifierError:
        line, column = pp.lineno(name.location, self.source), pp.col(name.location, self.source)
        msg = f"{reason} {name.text!r} (line {line}, column {column})"
        return UnknownIdentifierError(msg, line, column)

    def syntax_error(self, reason: str, location: int) -> ExpressionSyntaxError:
        line, column = pp.lineno(location, self.source), pp.col(location, self.source)
        msg = f"{reason} in {self.source!r} (line {line}, column {column})"
        return ExpressionSyntaxError(msg, line, column)

    def evaluate(self, node: Any) -> V:
        if isinstance(node, int):
            return self.integer(node)
        if isinstance(node, _Name):
            return self.name(node)
        if isinstance(node, _TensorNode | _TensorSumNode):
            raise self.syntax_error("a tensor cannot appear inside an expression", _location(node) or 0)
        tokens = list(node)
        if isinstance(tokens[0], str):
            return self.negate(self._evaluate_tokens(tokens[1:]))
        if len(tokens) > 1 and tokens[1] == "^":
            caret = tokens[1]
            fallback = caret.location + 1 if isinstance(caret, _Operator) else 0
            exponent = _exponent(tokens[2:], self, fallback)
            return self.power(self.evaluate(tokens[0]), exponent)
        value = self.evaluate(tokens[0])
        operations: dict[str, Callable[[V, V], V]] = {
            "+": self.add,
            "-": self.subtract,
            "*": self.multiply,
            "/": self.divide,
        }
        for index in range(1, len(tokens), 2):
            value = operations[tokens[index]](value, self.evaluate(tokens[index + 1]))
        return value

    def _evaluate_tokens(self, tokens: list[Any]) -> V:
        if len(tokens) == 1:
            return self.evaluate(tokens[0])
        return self.evaluate(tokens)


def _exponent(tokens: list[Any], semantics: _Semantics[Any], fallback: int) -> int:
    """Exponents are nonnegative integer literals, possibly stacked right-associatively."""
    if len(tokens) == 1:
        (token,) = tokens
        if isinstance(token, int):
            return token
        if isinstance(token, pp.ParseResults):
            return _exponent(list(token), semantics, fallback)
    elif len(tokens) >= 3 and tokens[1] == "^" and isinstance(tokens[0], int):  # noqa: PLR2004
        return int(tokens[0] ** _exponent(tokens[2:], semantics, fallback))
    location = _location(tokens)
    reason = "exponents must be nonnegative integer literals"
    raise semantics.syntax_error(reason, fallback if location is None else location)


def _location(node: Any) -> int | None:
    """Offset of the first token in ``node`` that remembers where it was read."""
    if isinstance(node, _Name | _Operator | _TensorNode):
        return node.location
    if isinstance(node, pp.ParseResults | list | tuple):
        for item in node:
            location = _location(item)
            if location is not None:
                return location
    if isinstance(node, _TensorSumNode):
        return _location(node.terms)
    return None


class _ScalarSemantics(_Semantics[Scalar]):
    def __init__(self, source: str, field_spec: FieldSpec) -> None:
        super().__init__(source)
        self.field_spec = field_spec

    def integer(self, value: int) -> Scalar:
        return self.field_spec.convert(value)

    def name(self, name: _Name) -> Scalar:
        if name.text == self.field_spec.parameter and self.field_spec.has_q:
            return self.field_spec.q()
        raise self.unknown(name)

    def divide(self, left: Scalar, right: Scalar) -> Scalar:
        return self.field_spec.divide(left, right)

    def power(self, base: Scalar, exponent: int) -> Scalar:
        value = self.field_spec.one
        for _ in range(exponent):
            value *= base
        return value


class _PolynomialSemantics(_Semantics[PolyElement]):
    def __init__(self, source: str, ring: PolyRing, field_spec: FieldSpec) -> None:
        super().__init__(source)
        self.ring = ring
        self.field_spec = field_spec
        self.names = [str(symbol) for symbol in ring.symbols]

    def integer(self, value: int) -> PolyElement:
        return self.ring.ground_new(self.ring.domain.convert(value))

    def name(self, name: _Name) -> PolyElement:
        if name.text in self.names:
            return self.ring.gens[self.names.index(name.text)]
        if name.text == self.field_spec.parameter and self.field_spec.has_q:
            return self.ring.ground_new(self.field_spec.q())
        if name.text.startswith("d") and name.text[1:] in self.names:
            raise self.unknown(name, "differentials are not allowed in a polynomial:")
        raise self.unknown(name)

    def divide(self, left: PolyElement, right: PolyElement) -> PolyElement:
        if not right.is_ground:
            msg = f"only division by a scalar is supported in {self.source!r}"
            raise ExpressionError(msg)
        constant = right.get(self.ring.zero_monom, self.ring.domain.zero)
        return left.mul_ground(self.field_spec.invert(constant))


class _FormSemantics(_Semantics[DiffForm]):
    def __init__(self, source: str, ctx: AlgebraCtx) -> None:
        super().__init__(source)
        self.ctx = ctx

    def integer(self, value: int) -> DiffForm:
        return DiffForm.scalar(self.ctx, value)

    def name(self, name: _Name) -> DiffForm:
        variables = self.ctx.variables
        if name.text in variables:
            return DiffForm.variable(self.ctx, variables.index(name.text))
        field_spec = self.ctx.field_spec
        if name.text == field_spec.parameter and field_spec.has_q:
            return DiffForm.scalar(self.ctx, field_spec.q())
        if name.text.startswith("d") and name.text[1:] in variables:
            return DiffForm.letter(self.ctx, variables.index(name.text[1:]))
        raise self.unknown(name)

    def divide(self, left: DiffForm, right: DiffForm) -> DiffForm:
        constant = right.constant_value()
        if constant is None:
            msg = f"only division by a scalar is supported in {self.source!r}"
            raise ExpressionError(msg)
        if not constant:
            msg = f"division by zero in {self.source!r}"
            raise ScalarDivisionError(msg)
        return left.scaled(self.ctx.field_spec.invert(constant))


# -- entry points ------------------------------------------------------------------------------------------------------


def parse_expression(text: str, ctx: AlgebraCtx) -> DiffForm | TensorForm:
    """Parse a form or a tensor of forms and return its normal form."""
    node = _parse(text, _INPUT)
    semantics = _FormSemantics(text, ctx)
    if isinstance(node, _TensorNode):
        return _tensor_term(node, semantics)
    if isinstance(node, _TensorSumNode):
        terms = [_tensor_term(term, semantics) for _, term in node.terms]
        result = TensorForm.zero(ctx, terms[0].arity)
        for (sign, _), term in zip(node.terms, terms, strict=True):
            result = result - term if sign == "-" else result + term
        return result
    return semantics.evaluate(node)


def _tensor_term(node: _TensorNode, semantics: _FormSemantics) -> TensorForm:
    return tensor(*(semantics.evaluate(factor) for factor in node.factors))


def parse_form(text: str, ctx: AlgebraCtx) -> DiffForm:
    value = parse_expression(text, ctx)
    if isinstance(value, TensorForm):
        msg = f"expected a form, got a tensor: {text!r}"
        raise ExpressionSyntaxError(msg)
    return value


def parse_tensor(text: str, ctx: AlgebraCtx, arity: int = 2) -> TensorForm:
    value = parse_expression(text, ctx)
    if isinstance(value, DiffForm):
        if value:
            msg = f"expected a tensor written with {TENSOR_SEPARATOR!r}, got a form: {text!r}"
            raise ExpressionSyntaxError(msg)
        return TensorForm.zero(ctx, arity)
    if value.arity != arity:
        msg = f"expected a tensor with {arity} factors, got {value.arity}: {text!r}"
        raise ExpressionSyntaxError(msg)
    return value


def parse_scalar(text: str, field_spec: FieldSpec) -> Scalar:
    return _ScalarSemantics(text, field_spec).evaluate(_parse(text, _EXPRESSION))


def parse_polynomial(text: str, ring: PolyRing, field_spec: FieldSpec) -> PolyElement:
    return _PolynomialSemantics(text, ring, field_spec).evaluate(_parse(text, _EXPRESSION))
