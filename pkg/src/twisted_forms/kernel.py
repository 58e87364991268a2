"""Exact scalars, sparse polynomials, algebra endomorphisms and univariate quotient relations."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any

import sympy
from sympy import GF, QQ, Symbol
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from twisted_forms.errors import EndomorphismError, FieldError, ScalarDivisionError

logger = logging.getLogger(__name__)

# Elements of a sympy domain (QQ, GF(p) or QQ(q)); sympy exposes no common base class for them.
Scalar = Any
Exponents = tuple[int, ...]


class FieldKind(Enum):
    RATIONALS = "Q"
    PRIME = "Fp"
    RATIONAL_FUNCTIONS = "Qq"


@dataclass(frozen=True)
class FieldSpec:
    kind: FieldKind = FieldKind.RATIONALS
    prime: int | None = None
    parameter: str = "q"
    q_value: sympy.Rational | None = None

    def __post_init__(self) -> None:
        if self.kind is FieldKind.PRIME:
            if self.prime is None or not sympy.isprime(self.prime):
                msg = f"{self.prime} is not a prime"
                raise FieldError(msg)
        elif self.prime is not None:
            msg = "only prime fields carry a characteristic"
            raise FieldError(msg)
        if not self.parameter.isidentifier():
            msg = f"{self.parameter!r} is not a valid parameter name"
            raise FieldError(msg)
        if self.q_value is None:
            return
        if self.kind is FieldKind.RATIONAL_FUNCTIONS:
            msg = f"{self.parameter} is transcendental over a rational function field and cannot take a value"
            raise FieldError(msg)
        if self.prime is not None and self.q_value.q % self.prime == 0:
            msg = f"{self.parameter} = {self.q_value} has no image in GF({self.prime})"
            raise FieldError(msg)

    @classmethod
    def rationals(cls, q_value: sympy.Rational | int | str | None = None) -> "FieldSpec":
        return cls(FieldKind.RATIONALS, q_value=_as_rational(q_value))

    @classmethod
    def prime_field(cls, prime: int, q_value: sympy.Rational | int | str | None = None) -> "FieldSpec":
        return cls(FieldKind.PRIME, prime=prime, q_value=_as_rational(q_value))

    @classmethod
    def rational_functions(cls, parameter: str = "q") -> "FieldSpec":
        return cls(FieldKind.RATIONAL_FUNCTIONS, parameter=parameter)

    @cached_property
    def domain(self) -> Any:
        if self.kind is FieldKind.PRIME:
            return GF(self.prime)
        if self.kind is FieldKind.RATIONAL_FUNCTIONS:
            return QQ.frac_field(Symbol(self.parameter))
        return QQ

    @property
    def zero(self) -> Scalar:
        return self.domain.zero

    @property
    def one(self) -> Scalar:
        return self.domain.one

    @property
    def has_q(self) -> bool:
        return self.kind is FieldKind.RATIONAL_FUNCTIONS or self.q_value is not None

    def q(self) -> Scalar:
        if self.kind is FieldKind.RATIONAL_FUNCTIONS:
            return self.domain.gens[0]
        if self.q_value is None:
            msg = f"{self.describe()} carries no value for {self.parameter}"
            raise FieldError(msg)
        return self.rational(int(self.q_value.p), int(self.q_value.q))

    def convert(self, value: Scalar) -> Scalar:
        return self.domain.convert(value)

    def rational(self, numerator: int, denominator: int = 1) -> Scalar:
        return self.divide(self.domain.convert(numerator), self.domain.convert(denominator))

    def invert(self, value: Scalar) -> Scalar:
        if not value:
            msg = "cannot invert the zero scalar"
            raise ScalarDivisionError(msg)
        return self.domain.one / value

    def divide(self, numerator: Scalar, denominator: Scalar) -> Scalar:
        return numerator * self.invert(denominator)

    def specialize(self, value: sympy.Rational | int | str) -> "FieldSpec":
        if self.kind is not FieldKind.RATIONAL_FUNCTIONS:
            msg = f"{self.describe()} has no free parameter to specialize"
            raise FieldError(msg)
        return FieldSpec.rationals(value)

    def evaluate_at_q(self, value: Scalar, point: sympy.Rational | int | str) -> Scalar:
        """Evaluate a rational function at ``parameter = point``; the result lives in ``specialize(point)``."""
        target = self.specialize(point)
        if not value:
            return target.zero
        numerator = _evaluate_univariate(value.numer, target)
        denominator = _evaluate_univariate(value.denom, target)
        if not denominator:
            msg = f"denominator of {self.format(value)} vanishes at {self.parameter} = {point}"
            raise ScalarDivisionError(msg)
        return numerator / denominator

    def is_constant(self, value: Scalar) -> bool:
        if self.kind is not FieldKind.RATIONAL_FUNCTIONS:
            return True
        return value.numer.degree() <= 0 and value.denom.degree() <= 0

    def fraction_parts(self, value: Scalar) -> tuple[list[sympy.Rational], list[sympy.Rational]]:
        """Ascending coefficient lists of numerator and monic denominator."""
        if self.kind is not FieldKind.RATIONAL_FUNCTIONS:
            return [self.domain.to_sympy(value)], [sympy.Integer(1)]
        numerator = _coefficients(value.numer)
        denominator = _coefficients(value.denom)
        lead = denominator[-1]
        return [c / lead for c in numerator], [c / lead for c in denominator]

    def format(self, value: Scalar) -> str:
        if self.kind is FieldKind.PRIME:
            return str(int(self.domain.to_int(value)) % self.prime)
        if self.kind is FieldKind.RATIONALS:
            return str(self.domain.to_sympy(value))
        if not value:
            return "0"
        numerator, denominator = self.fraction_parts(value)
        numerator_text = _format_univariate(numerator, self.parameter)
        if len(denominator) == 1:
            return numerator_text
        denominator_text = _format_univariate(denominator, self.parameter)
        if not _is_atom(numerator_text):
            numerator_text = f"({numerator_text})"
        if not _is_atom(denominator_text):
            denominator_text = f"({denominator_text})"
        return f"{numerator_text}/{denominator_text}"

    def describe(self) -> str:
        if self.kind is FieldKind.PRIME:
            name = f"GF({self.prime})"
        elif self.kind is FieldKind.RATIONAL_FUNCTIONS:
            return f"QQ({self.parameter})"
        else:
            name = "QQ"
        if self.q_value is not None:
            return f"{name} with {self.parameter} = {self.q_value}"
        return name


def _as_rational(value: sympy.Rational | int | str | None) -> sympy.Rational | None:
    if value is None:
        return None
    try:
        rational = sympy.Rational(value)
    except (TypeError, ValueError) as error:
        msg = f"{value!r} is not a rational number"
        raise FieldError(msg) from error
    return rational


def _coefficients(polynomial: PolyElement) -> list[sympy.Rational]:
    degree = max(polynomial.degree(), 0)
    coefficients = [sympy.Integer(0)] * (degree + 1)
    for (power,), coefficient in polynomial.items():
        coefficients[power] = polynomial.ring.domain.to_sympy(coefficient)
    return coefficients


def _evaluate_univariate(polynomial: PolyElement, target: FieldSpec) -> Scalar:
    point = target.q()
    total = target.zero
    for power, coefficient in enumerate(_coefficients(polynomial)):
        if coefficient:
            total += target.rational(int(coefficient.p), int(coefficient.q)) * point**power
    return total


def _format_univariate(coefficients: list[sympy.Rational], parameter: str) -> str:
    pieces: list[tuple[bool, str]] = []
    for power, coefficient in enumerate(coefficients):
        if not coefficient:
            continue
        magnitude = abs(coefficient)
        if power == 0:
            body = str(magnitude)
        else:
            monomial = parameter if power == 1 else f"{parameter}^{power}"
            body = monomial if magnitude == 1 else f"{magnitude}*{monomial}"
        pieces.append((coefficient < 0, body))
    if not pieces:
        return "0"
    negative, body = pieces[0]
    text = f"-{body}" if negative else body
    for negative, body in pieces[1:]:
        text += f" - {body}" if negative else f" + {body}"
    return text


def _is_atom(text: str) -> bool:
    return not any(symbol in text.removeprefix("-") for symbol in " */-")


def polynomial_ring(field: FieldSpec, variables: Sequence[str]) -> PolyRing:
    return PolyRing([Symbol(name) for name in variables], field.domain, lex)


def monomial(ring: PolyRing, exponents: Exponents) -> PolyElement:
    return ring.term_new(tuple(exponents), ring.domain.one)


def q_integer(n: int, field: FieldSpec) -> Scalar:
    if n < 0:
        msg = f"q-integers are defined for nonnegative n, got {n}"
        raise ValueError(msg)
    q = field.q()
    total = field.zero
    power = field.one
    for _ in range(n):
        total += power
        power *= q
    return total


@dataclass(frozen=True)
class Relation:
    """``x_variable ** power = rhs`` with ``rhs`` univariate in the same variable of lower degree."""

    variable: int
    power: int
    rhs: PolyElement

    def polynomial(self) -> PolyElement:
        return self.rhs.ring.gens[self.variable] ** self.power - self.rhs


def reduce(polynomial: PolyElement, relations: Sequence[Relation]) -> PolyElement:
    if not relations or not polynomial:
        return polynomial
    ring = polynomial.ring
    reduced = ring.zero
    pending = polynomial
    while pending:
        carry = ring.zero
        for exponents, coefficient in pending.items():
            relation = next((r for r in relations if exponents[r.variable] >= r.power), None)
            if relation is None:
                reduced += ring.term_new(exponents, coefficient)
                continue
            lowered = list(exponents)
            lowered[relation.variable] -= relation.power
            carry += relation.rhs.mul_term((tuple(lowered), coefficient))
        pending = carry
    return reduced


class EndoKind(Enum):
    DIAGONAL = "diagonal"
    LINEAR = "matrix"
    GENERAL = "images"


@dataclass(frozen=True, eq=False)
class EndoSpec:
    ring: PolyRing
    kind: EndoKind
    images: tuple[PolyElement, ...]
    relations: tuple[Relation, ...] = ()

    def __post_init__(self) -> None:
        if self.ring.ngens == 0:
            msg = "an endomorphism needs at least one variable"
            raise EndomorphismError(msg)
        if len(self.images) != self.ring.ngens:
            msg = f"expected {self.ring.ngens} variable images, got {len(self.images)}"
            raise EndomorphismError(msg)
        if any(image.ring != self.ring for image in self.images):
            msg = "variable images must live in the polynomial ring of the endomorphism"
            raise EndomorphismError(msg)
        self._validate_relations()
        if any(reduce(image, self.relations) != image for image in self.images):
            msg = "variable images must be reduced modulo the relations"
            raise EndomorphismError(msg)
        for relation in self.relations:
            if self.apply(relation.polynomial()):
                msg = (
                    f"the endomorphism does not preserve the relation "
                    f"{self.ring.symbols[relation.variable]}^{relation.power} = {relation.rhs.as_expr()}"
                )
                raise EndomorphismError(msg)

    def _validate_relations(self) -> None:
        seen: set[int] = set()
        for relation in self.relations:
            if not 0 <= relation.variable < self.ring.ngens:
                msg = f"relation refers to unknown variable index {relation.variable}"
                raise EndomorphismError(msg)
            if relation.variable in seen:
                msg = f"more than one relation for {self.ring.symbols[relation.variable]}"
                raise EndomorphismError(msg)
            seen.add(relation.variable)
            if relation.power < 1:
                msg = f"relation power must be positive, got {relation.power}"
                raise EndomorphismError(msg)
            if relation.rhs.ring != self.ring:
                msg = "relation right-hand sides must live in the polynomial ring of the endomorphism"
                raise EndomorphismError(msg)
            for exponents in relation.rhs.keys():
                others = [e for index, e in enumerate(exponents) if index != relation.variable]
                if any(others) or exponents[relation.variable] >= relation.power:
                    msg = (
                        f"relation for {self.ring.symbols[relation.variable]} must be univariate "
                        f"of degree below {relation.power}"
                    )
                    raise EndomorphismError(msg)

    @classmethod
    def diagonal(
        cls, ring: PolyRing, scalars: Sequence[Scalar], relations: Sequence[Relation] = ()
    ) -> "EndoSpec":
        if len(scalars) != ring.ngens:
            msg = f"expected {ring.ngens} diagonal entries, got {len(scalars)}"
            raise EndomorphismError(msg)
        images = [gen.mul_ground(ring.domain.convert(scalar)) for gen, scalar in zip(ring.gens, scalars, strict=True)]
        return cls._build(ring, EndoKind.DIAGONAL, images, relations)

    @classmethod
    def linear(
        cls, ring: PolyRing, matrix: Sequence[Sequence[Scalar]], relations: Sequence[Relation] = ()
    ) -> "EndoSpec":
        if len(matrix) != ring.ngens or any(len(row) != ring.ngens for row in matrix):
            msg = f"expected a {ring.ngens}x{ring.ngens} matrix"
            raise EndomorphismError(msg)
        images = [
            sum(
                (gen.mul_ground(ring.domain.convert(entry)) for gen, entry in zip(ring.gens, row, strict=True)),
                ring.zero,
            )
            for row in matrix
        ]
        return cls._build(ring, EndoKind.LINEAR, images, relations)

    @classmethod
    def general(
        cls, ring: PolyRing, images: Sequence[PolyElement], relations: Sequence[Relation] = ()
    ) -> "EndoSpec":
        return cls._build(ring, EndoKind.GENERAL, images, relations)

    @classmethod
    def identity(cls, ring: PolyRing, relations: Sequence[Relation] = ()) -> "EndoSpec":
        return cls._build(ring, EndoKind.DIAGONAL, list(ring.gens), relations)

    @classmethod
    def _build(
        cls, ring: PolyRing, kind: EndoKind, images: Sequence[PolyElement], relations: Sequence[Relation]
    ) -> "EndoSpec":
        relations = tuple(sorted(relations, key=lambda relation: relation.variable))
        return cls(ring, kind, tuple(reduce(ring.ring_new(image), relations) for image in images), relations)

    def apply(self, polynomial: PolyElement) -> PolyElement:
        return reduce(polynomial.compose(list(zip(self.ring.gens, self.images, strict=True))), self.relations)

    def relation_for(self, variable: int) -> Relation | None:
        return next((relation for relation in self.relations if relation.variable == variable), None)

    @cached_property
    def is_graded(self) -> bool:
        linear = all(sum(exponents) == 1 for image in self.images for exponents in image.keys())
        return linear and not any(relation.rhs for relation in self.relations)

    @cached_property
    def is_finite(self) -> bool:
        return all(self.relation_for(variable) is not None for variable in range(self.ring.ngens))

    @cached_property
    def is_identity(self) -> bool:
        return all(image == gen for image, gen in zip(self.images, self.ring.gens, strict=True))

    @cached_property
    def is_involution(self) -> bool:
        return all(self.apply(image) == gen for image, gen in zip(self.images, self.ring.gens, strict=True))

    def describe(self) -> str:
        images = ", ".join(
            f"{name} -> {image.as_expr()}" for name, image in zip(self.ring.symbols, self.images, strict=True)
        )
        return f"{self.kind.value}({images})"


def apply_endo(polynomial: PolyElement, endo: EndoSpec) -> PolyElement:
    return endo.apply(polynomial)
