"""Twisted Kähler forms in left normal form.

A form is stored as coordinates on the canonical basis of each (form-degree, variable-degree) block. Raw forms,
used while computing, map a word of ``dx`` letters to its (left) polynomial coefficient.
"""

import logging
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement, product
from typing import Any, TypeVar

from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, PolyRing

from twisted_forms.errors import CapExceededError, EndomorphismError, UnsupportedContextError
from twisted_forms.kernel import EndoSpec, Exponents, FieldSpec, Scalar, monomial, reduce
from twisted_forms.reports import CheckRecorder, VerificationReport

logger = logging.getLogger(__name__)

Word = tuple[int, ...]
Label = tuple[Exponents, Word]
RawForm = dict[Word, PolyElement]

T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class AlgebraCtx:
    field_spec: FieldSpec
    variables: tuple[str, ...]
    endo: EndoSpec
    max_var_degree: int
    max_form_degree: int
    _tables: dict[str, dict[Any, Any]] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.max_var_degree < 0 or self.max_form_degree < 0:
            msg = f"caps must be nonnegative, got D={self.max_var_degree}, N={self.max_form_degree}"
            raise ValueError(msg)
        if tuple(str(symbol) for symbol in self.ring.symbols) != tuple(self.variables):
            msg = f"endomorphism is defined on {self.ring.symbols}, not on {self.variables}"
            raise ValueError(msg)
        if self.ring.domain != self.field_spec.domain:
            msg = f"endomorphism coefficients live in {self.ring.domain}, not in {self.field_spec.describe()}"
            raise ValueError(msg)
        if not (self.endo.is_graded or self.endo.is_finite) and (len(self.variables) > 1 or self.max_form_degree > 1):
            msg = (
                "a non-graded endomorphism of an infinite-dimensional algebra is supported only for one variable "
                f"up to form-degree 1, got {len(self.variables)} variables and N={self.max_form_degree}"
            )
            raise UnsupportedContextError(msg)

    @property
    def ring(self) -> PolyRing:
        return self.endo.ring

    @property
    def collapsed(self) -> bool:
        """Finite-dimensional algebra with a non-graded endomorphism: every form lives in variable-degree 0."""
        return self.endo.is_finite and not self.endo.is_graded

    def with_caps(self, max_var_degree: int, max_form_degree: int) -> "AlgebraCtx":
        return AlgebraCtx(self.field_spec, self.variables, self.endo, max_var_degree, max_form_degree)

    def table(self, name: str) -> dict[Any, Any]:
        return self._tables.setdefault(name, {})

    def memoized(self, name: str, key: Any, compute: Callable[[], T]) -> T:
        table = self.table(name)
        try:
            return table[key]  # type: ignore[no-any-return]
        except KeyError:
            pass
        return table.setdefault(key, compute())  # type: ignore[no-any-return]

    def weight(self, label: Label) -> int:
        exponents, word = label
        return sum(exponents) + len(word)

    def block_key(self, label: Label) -> tuple[int, int]:
        return len(label[1]), 0 if self.collapsed else self.weight(label)

    def check_caps(self, form_degree: int, var_degree: int) -> None:
        if form_degree > self.max_form_degree:
            msg = f"form-degree {form_degree} exceeds the cap N={self.max_form_degree}"
            raise CapExceededError(msg)
        if not self.collapsed and var_degree > self.max_var_degree:
            msg = f"variable-degree {var_degree} exceeds the cap D={self.max_var_degree}"
            raise CapExceededError(msg)


def monomials(variable_count: int, degree: int) -> list[Exponents]:
    exponents = []
    for letters in combinations_with_replacement(range(variable_count), degree):
        counts = [0] * variable_count
        for letter in letters:
            counts[letter] += 1
        exponents.append(tuple(counts))
    return sorted(exponents)


def _reduced_monomials(ctx: AlgebraCtx) -> list[Exponents]:
    bounds = [relation.power for relation in sorted(ctx.endo.relations, key=lambda relation: relation.variable)]
    return sorted(product(*(range(bound) for bound in bounds)))


def _is_reducible(ctx: AlgebraCtx, exponents: Exponents) -> bool:
    return any(exponents[relation.variable] >= relation.power for relation in ctx.endo.relations)


# -- raw forms -----------------------------------------------------------------------------------------------------


def _accumulate(target: RawForm, word: Word, coefficient: PolyElement) -> None:
    if not coefficient:
        return
    total = target[word] + coefficient if word in target else coefficient
    if total:
        target[word] = total
    else:
        del target[word]


def _alpha_monomial(ctx: AlgebraCtx, exponents: Exponents, times: int) -> PolyElement:
    if times == 0:
        return monomial(ctx.ring, exponents)
    return ctx.memoized(
        "alpha",
        (exponents, times),
        lambda: ctx.endo.apply(_alpha_monomial(ctx, exponents, times - 1)),
    )


def alpha_power(ctx: AlgebraCtx, polynomial: PolyElement, times: int = 1) -> PolyElement:
    if times == 0 or not polynomial:
        return polynomial
    result = ctx.ring.zero
    for exponents, coefficient in polynomial.items():
        result += _alpha_monomial(ctx, exponents, times).mul_ground(coefficient)
    return result


def _monomial_differential(ctx: AlgebraCtx, exponents: Exponents) -> RawForm:
    def compute() -> RawForm:
        position = next((index for index, exponent in enumerate(exponents) if exponent), None)
        if position is None:
            return {}
        rest = list(exponents)
        rest[position] -= 1
        rest_exponents = tuple(rest)
        # d(x_i p) = alpha(p) dx_i + x_i dp
        result: RawForm = {}
        _accumulate(result, (position,), _alpha_monomial(ctx, rest_exponents, 1))
        variable = ctx.ring.gens[position]
        for word, coefficient in _monomial_differential(ctx, rest_exponents).items():
            _accumulate(result, word, variable * coefficient)
        return {word: reduced for word, c in result.items() if (reduced := reduce(c, ctx.endo.relations))}

    return ctx.memoized("differential", exponents, compute)


def polynomial_differential(ctx: AlgebraCtx, polynomial: PolyElement) -> RawForm:
    result: RawForm = {}
    for exponents, coefficient in polynomial.items():
        for word, part in _monomial_differential(ctx, exponents).items():
            _accumulate(result, word, part.mul_ground(coefficient))
    return result


def _check_word(ctx: AlgebraCtx, word: Word) -> None:
    if len(word) > ctx.max_form_degree:
        msg = f"form-degree {len(word)} exceeds the cap N={ctx.max_form_degree}"
        raise CapExceededError(msg)


def raw_product(ctx: AlgebraCtx, left: RawForm, right: RawForm) -> RawForm:
    result: RawForm = {}
    for left_word, left_coefficient in left.items():
        for right_word, right_coefficient in right.items():
            word = left_word + right_word
            _check_word(ctx, word)
            twisted = alpha_power(ctx, right_coefficient, len(left_word))
            _accumulate(result, word, reduce(left_coefficient * twisted, ctx.endo.relations))
    return result


def raw_differential(ctx: AlgebraCtx, form: RawForm) -> RawForm:
    result: RawForm = {}
    for word, coefficient in form.items():
        for letter, part in polynomial_differential(ctx, coefficient).items():
            extended = letter + word
            _check_word(ctx, extended)
            _accumulate(result, extended, part)
    return result


def _alpha_letter(ctx: AlgebraCtx, letter: int, times: int) -> RawForm:
    return ctx.memoized(
        "alpha_letter",
        (letter, times),
        lambda: polynomial_differential(ctx, _alpha_monomial(ctx, _unit_exponents(ctx, letter), times)),
    )


def _unit_exponents(ctx: AlgebraCtx, variable: int) -> Exponents:
    return tuple(1 if index == variable else 0 for index in range(len(ctx.variables)))


def raw_alpha(ctx: AlgebraCtx, form: RawForm, times: int = 1) -> RawForm:
    if times == 0:
        return dict(form)
    result: RawForm = {}
    for word, coefficient in form.items():
        term: RawForm = {(): alpha_power(ctx, coefficient, times)}
        for letter in word:
            term = raw_product(ctx, term, _alpha_letter(ctx, letter, times))
        for term_word, term_coefficient in term.items():
            _accumulate(result, term_word, term_coefficient)
    return result


def _word_homotopy(ctx: AlgebraCtx, word: Word) -> RawForm:
    def compute() -> RawForm:
        if not word:
            return {}
        prefix, letter = word[:-1], word[-1]
        variable = ctx.ring.gens[letter]
        shifted = alpha_power(ctx, variable, 1)
        # I(w dv) = I(w) d(alpha v) + (-1)^|w| w (v - alpha v)
        result = raw_product(ctx, _word_homotopy(ctx, prefix), _alpha_letter(ctx, letter, 1))
        sign = -1 if len(prefix) % 2 else 1
        tail = raw_product(ctx, {prefix: ctx.ring.one}, {(): variable - shifted})
        for tail_word, coefficient in tail.items():
            _accumulate(result, tail_word, coefficient * sign)
        return result

    return ctx.memoized("homotopy", word, compute)


def raw_homotopy(ctx: AlgebraCtx, form: RawForm) -> RawForm:
    result: RawForm = {}
    for word, coefficient in form.items():
        for term_word, term_coefficient in raw_product(ctx, {(): coefficient}, _word_homotopy(ctx, word)).items():
            _accumulate(result, term_word, term_coefficient)
    return result


# -- block bases -----------------------------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WordBlockBasis:
    form_degree: int
    var_degree: int
    labels: tuple[Label, ...]
    raw_labels: tuple[Label, ...]
    rewrites: Mapping[Label, Mapping[Label, Scalar]]
    field_spec: FieldSpec

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @cached_property
    def label_set(self) -> frozenset[Label]:
        return frozenset(self.labels)

    def reduce(self, vector: Mapping[Label, Scalar]) -> dict[Label, Scalar]:
        result: dict[Label, Scalar] = {}
        for label, coefficient in vector.items():
            rewrite = self.rewrites.get(label)
            if rewrite is None:
                if label not in self.label_set:
                    msg = f"label {label} does not belong to block (n={self.form_degree}, d={self.var_degree})"
                    raise KeyError(msg)
                result[label] = result.get(label, self.field_spec.zero) + coefficient
                continue
            for target, factor in rewrite.items():
                result[target] = result.get(target, self.field_spec.zero) + coefficient * factor
        return {label: coefficient for label, coefficient in result.items() if coefficient}

    def reduction_matrix(self) -> DomainMatrix:
        """Rows are basis coordinates, columns are raw labels."""
        zero = self.field_spec.zero
        rows = [[zero] * len(self.raw_labels) for _ in self.labels]
        position = {label: index for index, label in enumerate(self.labels)}
        for column, label in enumerate(self.raw_labels):
            for target, coefficient in self.reduce({label: self.field_spec.one}).items():
                rows[position[target]][column] = coefficient
        return DomainMatrix(rows, (len(self.labels), len(self.raw_labels)), self.field_spec.domain)


def _raw_labels(ctx: AlgebraCtx, form_degree: int, var_degree: int) -> tuple[Label, ...]:
    variable_count = len(ctx.variables)
    if ctx.collapsed:
        if var_degree != 0:
            return ()
        coefficients = _reduced_monomials(ctx)
    else:
        coefficient_degree = var_degree - form_degree
        if coefficient_degree < 0:
            return ()
        coefficients = [e for e in monomials(variable_count, coefficient_degree) if not _is_reducible(ctx, e)]
    words = list(product(range(variable_count), repeat=form_degree))
    return tuple(sorted((exponents, word) for exponents in coefficients for word in words))


def _relation_generators(ctx: AlgebraCtx) -> list[RawForm]:
    def compute() -> list[RawForm]:
        ring = ctx.ring
        relations = ctx.endo.relations
        generators: list[RawForm] = []
        variable_count = len(ctx.variables)
        # commutativity in degree 1: d(x_i x_j) = d(x_j x_i)
        for i in range(variable_count):
            for j in range(i + 1, variable_count):
                generator: RawForm = {}
                _accumulate(generator, (i,), reduce(alpha_power(ctx, ring.gens[j]) - ring.gens[j], relations))
                _accumulate(generator, (j,), reduce(ring.gens[i] - alpha_power(ctx, ring.gens[i]), relations))
                if generator:
                    generators.append(generator)
        for relation in relations:
            generator = {}
            for word, coefficient in polynomial_differential(ctx, relation.polynomial()).items():
                _accumulate(generator, word, reduce(coefficient, relations))
            if generator:
                generators.append(generator)
        # dx_i dx_j + d(alpha x_j) dx_i
        for i in range(variable_count):
            for j in range(variable_count):
                generator = {(i, j): ring.one}
                for (letter,), coefficient in _alpha_letter(ctx, j, 1).items():
                    _accumulate(generator, (letter, i), coefficient)
                if generator:
                    generators.append(generator)
        return generators

    return ctx.memoized("relation_generators", None, compute)


def _relation_vectors(ctx: AlgebraCtx, form_degree: int, var_degree: int) -> Iterator[dict[Label, Scalar]]:
    variable_count = len(ctx.variables)
    relations = ctx.endo.relations
    for generator in _relation_generators(ctx):
        degree = len(next(iter(generator)))
        if degree > form_degree:
            continue
        if ctx.collapsed:
            lefts = _reduced_monomials(ctx)
        else:
            coefficient_degree = sum(next(iter(next(iter(generator.values())).keys())))
            left_degree = var_degree - form_degree - coefficient_degree
            if left_degree < 0:
                continue
            lefts = monomials(variable_count, left_degree)
        for prefix_length in range(form_degree - degree + 1):
            shifted = {word: alpha_power(ctx, coefficient, prefix_length) for word, coefficient in generator.items()}
            for prefix in product(range(variable_count), repeat=prefix_length):
                for suffix in product(range(variable_count), repeat=form_degree - degree - prefix_length):
                    for exponents in lefts:
                        left = monomial(ctx.ring, exponents)
                        vector: dict[Label, Scalar] = {}
                        for word, coefficient in shifted.items():
                            full_word = prefix + word + suffix
                            for term_exponents, term in reduce(left * coefficient, relations).items():
                                label = (term_exponents, full_word)
                                vector[label] = vector.get(label, ctx.field_spec.zero) + term
                        vector = {label: value for label, value in vector.items() if value}
                        if vector:
                            yield vector


def build_block_basis(ctx: AlgebraCtx, n: int, d: int) -> WordBlockBasis:
    ctx.check_caps(n, d)
    if n >= 2 and not (ctx.endo.is_graded or ctx.endo.is_finite):  # noqa: PLR2004
        msg = "word relations of a non-graded endomorphism on an infinite-dimensional algebra are not supported"
        raise UnsupportedContextError(msg)
    return ctx.memoized("blocks", (n, d), lambda: _build_block_basis(ctx, n, d))


def _build_block_basis(ctx: AlgebraCtx, n: int, d: int) -> WordBlockBasis:
    raw_labels = _raw_labels(ctx, n, d)
    rows = list(_relation_vectors(ctx, n, d)) if raw_labels else []
    if not rows:
        logger.debug("block n=%d d=%d is free of dimension %d", n, d, len(raw_labels))
        return WordBlockBasis(n, d, raw_labels, raw_labels, {}, ctx.field_spec)

    # columns run in reverse label order so that pivots eliminate the latest labels
    size = len(raw_labels)
    column = {label: size - 1 - index for index, label in enumerate(raw_labels)}
    zero = ctx.field_spec.zero
    dense = []
    for vector in rows:
        row = [zero] * size
        for label, value in vector.items():
            row[column[label]] = value
        dense.append(row)
    echelon, pivots = DomainMatrix(dense, (len(dense), size), ctx.field_spec.domain).rref()
    echelon_rows = echelon.to_list()
    pivot_columns = set(pivots)
    rewrites: dict[Label, dict[Label, Scalar]] = {}
    for row_index, pivot in enumerate(pivots):
        row = echelon_rows[row_index]
        rewrites[raw_labels[size - 1 - pivot]] = {
            raw_labels[size - 1 - index]: -value
            for index, value in enumerate(row)
            if index not in pivot_columns and value
        }
    labels = tuple(label for label in raw_labels if column[label] not in pivot_columns)
    logger.debug("block n=%d d=%d: %d raw labels, rank %d, dimension %d", n, d, size, len(pivots), len(labels))
    return WordBlockBasis(n, d, labels, raw_labels, rewrites, ctx.field_spec)


def iter_basis_labels(ctx: AlgebraCtx, max_var_degree: int, max_form_degree: int) -> Iterator[Label]:
    for n in range(max_form_degree + 1):
        degrees = [0] if ctx.collapsed else range(n, max_var_degree + 1)
        for d in degrees:
            yield from build_block_basis(ctx, n, d).labels


# -- forms -----------------------------------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DiffForm:
    ctx: AlgebraCtx
    terms: Mapping[Label, Scalar]

    @classmethod
    def zero(cls, ctx: AlgebraCtx) -> "DiffForm":
        return cls(ctx, {})

    @classmethod
    def scalar(cls, ctx: AlgebraCtx, value: Scalar) -> "DiffForm":
        value = ctx.field_spec.convert(value)
        if not value:
            return cls.zero(ctx)
        return cls(ctx, {((0,) * len(ctx.variables), ()): value})

    @classmethod
    def one(cls, ctx: AlgebraCtx) -> "DiffForm":
        return cls.scalar(ctx, 1)

    @classmethod
    def from_polynomial(cls, ctx: AlgebraCtx, polynomial: PolyElement) -> "DiffForm":
        return normalize({(): polynomial}, ctx)

    @classmethod
    def variable(cls, ctx: AlgebraCtx, index: int) -> "DiffForm":
        return cls.from_polynomial(ctx, ctx.ring.gens[index])

    @classmethod
    def letter(cls, ctx: AlgebraCtx, index: int) -> "DiffForm":
        return normalize({(index,): ctx.ring.one}, ctx)

    @classmethod
    def basis(cls, ctx: AlgebraCtx, label: Label) -> "DiffForm":
        block = build_block_basis(ctx, *ctx.block_key(label))
        if label not in block.label_set:
            msg = f"{format_label(ctx, label)} is not a basis label"
            raise ValueError(msg)
        return cls(ctx, {label: ctx.field_spec.one})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.ctx is other.ctx and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "DiffForm") -> "DiffForm":
        terms = dict(self.terms)
        for label, coefficient in other.terms.items():
            terms[label] = terms.get(label, self.ctx.field_spec.zero) + coefficient
        return DiffForm(self.ctx, {label: coefficient for label, coefficient in terms.items() if coefficient})

    def __neg__(self) -> "DiffForm":
        return DiffForm(self.ctx, {label: -coefficient for label, coefficient in self.terms.items()})

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + (-other)

    def __mul__(self, other: "DiffForm | Scalar") -> "DiffForm":
        if isinstance(other, DiffForm):
            return mul(self, other)
        return self.scaled(other)

    def __rmul__(self, other: Scalar) -> "DiffForm":
        return self.scaled(other)

    def __pow__(self, exponent: int) -> "DiffForm":
        if exponent < 0:
            msg = f"forms cannot be raised to the negative power {exponent}"
            raise ValueError(msg)
        result = DiffForm.one(self.ctx)
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def __str__(self) -> str:
        return format_form(self)

    def scaled(self, value: Scalar) -> "DiffForm":
        value = self.ctx.field_spec.convert(value)
        if not value:
            return DiffForm.zero(self.ctx)
        return DiffForm(self.ctx, {label: coefficient * value for label, coefficient in self.terms.items()})

    @property
    def form_degrees(self) -> set[int]:
        return {len(word) for _, word in self.terms}

    def degree(self) -> int:
        """Form-degree of a homogeneous form; the zero form has degree 0."""
        degrees = self.form_degrees
        if len(degrees) > 1:
            msg = f"{self} is not homogeneous"
            raise ValueError(msg)
        return next(iter(degrees), 0)

    def homogeneous_parts(self) -> dict[int, "DiffForm"]:
        parts: dict[int, dict[Label, Scalar]] = {}
        for label, coefficient in self.terms.items():
            parts.setdefault(len(label[1]), {})[label] = coefficient
        return {degree: DiffForm(self.ctx, terms) for degree, terms in sorted(parts.items())}

    def constant_value(self) -> Scalar | None:
        if not self.terms:
            return self.ctx.field_spec.zero
        if len(self.terms) == 1:
            ((exponents, word), coefficient) = next(iter(self.terms.items()))
            if not word and not any(exponents):
                return coefficient
        return None

    def raw(self) -> RawForm:
        result: RawForm = {}
        ring = self.ctx.ring
        for (exponents, word), coefficient in self.terms.items():
            _accumulate(result, word, ring.term_new(exponents, coefficient))
        return result


def normalize(raw: Mapping[Word, PolyElement], ctx: AlgebraCtx) -> DiffForm:
    blocks: dict[tuple[int, int], dict[Label, Scalar]] = {}
    zero = ctx.field_spec.zero
    for word, coefficient in raw.items():
        _check_word(ctx, tuple(word))
        for exponents, value in reduce(coefficient, ctx.endo.relations).items():
            label = (exponents, tuple(word))
            key = ctx.block_key(label)
            ctx.check_caps(*key)
            vector = blocks.setdefault(key, {})
            vector[label] = vector.get(label, zero) + value
    terms: dict[Label, Scalar] = {}
    for key, vector in blocks.items():
        terms.update(build_block_basis(ctx, *key).reduce(vector))
    return DiffForm(ctx, terms)


def differential(form: DiffForm) -> DiffForm:
    return normalize(raw_differential(form.ctx, form.raw()), form.ctx)


def mul(left: DiffForm, right: DiffForm) -> DiffForm:
    if left.ctx is not right.ctx:
        msg = "cannot multiply forms from different contexts"
        raise ValueError(msg)
    return normalize(raw_product(left.ctx, left.raw(), right.raw()), left.ctx)


def alpha_form(form: DiffForm, times: int = 1) -> DiffForm:
    return normalize(raw_alpha(form.ctx, form.raw(), times), form.ctx)


def homotopy_I(form: DiffForm) -> DiffForm:  # noqa: N802
    return normalize(raw_homotopy(form.ctx, form.raw()), form.ctx)


def sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


# -- morphisms -------------------------------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FormMorphism:
    """The dga endomorphism of the forms induced by an algebra endomorphism commuting with alpha."""

    ctx: AlgebraCtx
    images: tuple[PolyElement, ...]

    def __post_init__(self) -> None:
        ring = self.ctx.ring
        if len(self.images) != ring.ngens:
            msg = f"expected {ring.ngens} variable images, got {len(self.images)}"
            raise EndomorphismError(msg)
        for variable, image in enumerate(self.images):
            if self.apply_polynomial(alpha_power(self.ctx, ring.gens[variable])) != alpha_power(self.ctx, image):
                msg = f"morphism does not commute with alpha on {self.ctx.variables[variable]}"
                raise EndomorphismError(msg)
        for relation in self.ctx.endo.relations:
            if self.apply_polynomial(relation.polynomial()):
                msg = f"morphism does not preserve the relation for {self.ctx.variables[relation.variable]}"
                raise EndomorphismError(msg)

    @classmethod
    def scaling(cls, ctx: AlgebraCtx, factors: Sequence[Scalar]) -> "FormMorphism":
        domain = ctx.field_spec.domain
        return cls(ctx, tuple(gen.mul_ground(domain.convert(c)) for gen, c in zip(ctx.ring.gens, factors, strict=True)))

    def apply_polynomial(self, polynomial: PolyElement) -> PolyElement:
        replacements = list(zip(self.ctx.ring.gens, self.images, strict=True))
        return reduce(polynomial.compose(replacements), self.ctx.endo.relations)

    def __call__(self, form: DiffForm) -> DiffForm:
        return apply_morphism(form, self)


def apply_morphism(form: DiffForm, morphism: FormMorphism) -> DiffForm:
    ctx = form.ctx
    result: RawForm = {}
    for word, coefficient in form.raw().items():
        term: RawForm = {(): morphism.apply_polynomial(coefficient)}
        for letter in word:
            term = raw_product(ctx, term, polynomial_differential(ctx, morphism.images[letter]))
        for term_word, term_coefficient in term.items():
            _accumulate(result, term_word, term_coefficient)
    return normalize(result, ctx)


# -- printing --------------------------------------------------------------------------------------------------------


def format_label(ctx: AlgebraCtx, label: Label) -> str:
    exponents, word = label
    parts = [
        name if exponent == 1 else f"{name}^{exponent}"
        for name, exponent in zip(ctx.variables, exponents, strict=True)
        if exponent
    ]
    parts.extend(f"d{ctx.variables[letter]}" for letter in word)
    return "*".join(parts) or "1"


def format_term(ctx: AlgebraCtx, coefficient: Scalar, text: str) -> str:
    scalar = ctx.field_spec.format(coefficient)
    if text == "1":
        return scalar if " " not in scalar else f"({scalar})"
    if scalar == "1":
        return text
    if scalar == "-1":
        return f"-{text}"
    if " " in scalar:
        return f"({scalar})*{text}"
    return f"{scalar}*{text}"


def join_terms(pieces: Sequence[str]) -> str:
    if not pieces:
        return "0"
    text = pieces[0]
    for piece in pieces[1:]:
        text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
    return text


def format_form(form: DiffForm) -> str:
    ctx = form.ctx
    return join_terms([format_term(ctx, form.terms[label], format_label(ctx, label)) for label in sorted(form.terms)])


# -- identities ------------------------------------------------------------------------------------------------------


def check_identities(ctx: AlgebraCtx, max_var_degree: int, max_form_degree: int) -> VerificationReport:
    """Check the calculus identities of d, alpha, the product and I on every basis form within the caps."""
    recorder = CheckRecorder("omega")
    labels = list(iter_basis_labels(ctx, max_var_degree, max_form_degree))
    one = DiffForm.one(ctx)
    for label in labels:
        omega = DiffForm.basis(ctx, label)
        block = describe_block(ctx, label)
        degree = omega.degree()
        # d of a form needs one more letter than the form, d of d two more
        if degree + 1 <= ctx.max_form_degree:
            d_omega = differential(omega)
            if degree + 2 <= ctx.max_form_degree:
                recorder.compare("d_squared", block, omega, DiffForm.zero(ctx), differential(d_omega))
            homotopy = differential(homotopy_I(omega)) + homotopy_I(d_omega)
            recorder.compare("homotopy", block, omega, omega - alpha_form(omega), homotopy)
            shifted = differential(alpha_form(omega))
            recorder.compare("alpha_commutes_with_d", block, omega, shifted, alpha_form(d_omega))
        recorder.compare("homotopy_squared", block, omega, DiffForm.zero(ctx), homotopy_I(homotopy_I(omega)))
        recorder.compare("unit", block, omega, omega, one * omega)
        recorder.compare("unit", block, omega, omega, omega * one)

    for left_label in labels:
        for right_label in labels:
            if not fits_caps(ctx, (left_label, right_label), max_var_degree, max_form_degree):
                continue
            omega = DiffForm.basis(ctx, left_label)
            psi = DiffForm.basis(ctx, right_label)
            block = describe_block(ctx, left_label, right_label)
            witness = f"{omega} ; {psi}"
            parity = sign(omega.degree())
            i_omega = homotopy_I(omega)
            expected = i_omega * alpha_form(psi) + (omega * homotopy_I(psi)).scaled(parity)
            recorder.compare("homotopy_of_product", block, witness, expected, homotopy_I(omega * psi))
            if psi.degree() != 0:
                continue
            d_psi = differential(psi)
            expected = (i_omega * d_psi).scaled(parity)
            recorder.compare("commutator", block, witness, expected, omega * psi - psi * omega)
            if omega.degree() < max_form_degree:
                shifted = alpha_form(psi)
                expected = i_omega * differential(shifted) + (omega * (psi - shifted)).scaled(parity)
                recorder.compare("homotopy_of_differential", block, witness, expected, homotopy_I(omega * d_psi))
    report = recorder.report()
    logger.info("omega identities: %d checks, %d failures", report.checked, report.failed)
    return report


def fits_caps(ctx: AlgebraCtx, labels: Sequence[Label], max_var_degree: int, max_form_degree: int) -> bool:
    if sum(len(word) for _, word in labels) > max_form_degree:
        return False
    return ctx.collapsed or sum(ctx.weight(label) for label in labels) <= max_var_degree


def describe_block(ctx: AlgebraCtx, *labels: Label) -> str:
    keys = [ctx.block_key(label) for label in labels]
    return " (x) ".join(f"(n={n}, d={d})" for n, d in keys)
