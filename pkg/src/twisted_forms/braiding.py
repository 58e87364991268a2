"""Tensor forms, the braiding R in closed form, a recursive oracle for R, block matrices and the braiding axioms."""

import logging
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import sympy
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError
from sympy.polys.rings import PolyElement

from twisted_forms.errors import (
    CapExceededError,
    EndomorphismError,
    MalformedGeneratorError,
    SingularBlockError,
)
from twisted_forms.kernel import FieldKind, Scalar, monomial, reduce
from twisted_forms.omega import (
    AlgebraCtx,
    DiffForm,
    FormMorphism,
    Label,
    alpha_form,
    alpha_power,
    build_block_basis,
    describe_block,
    differential,
    fits_caps,
    format_label,
    format_term,
    homotopy_I,
    iter_basis_labels,
    join_terms,
    mul,
    normalize,
    polynomial_differential,
    raw_product,
    sign,
)
from twisted_forms.reports import CheckRecorder, VerificationReport

logger = logging.getLogger(__name__)

LabelTuple = tuple[Label, ...]
PairMap = Callable[[AlgebraCtx, Label, Label], "TensorForm"]


@dataclass(frozen=True, eq=False)
class TensorForm:
    ctx: AlgebraCtx
    arity: int
    terms: Mapping[LabelTuple, Scalar]

    @classmethod
    def zero(cls, ctx: AlgebraCtx, arity: int = 2) -> "TensorForm":
        return cls(ctx, arity, {})

    @classmethod
    def basis(cls, ctx: AlgebraCtx, labels: LabelTuple) -> "TensorForm":
        return cls(ctx, len(labels), {tuple(labels): ctx.field_spec.one})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorForm):
            return NotImplemented
        return self.ctx is other.ctx and self.arity == other.arity and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "TensorForm") -> "TensorForm":
        if self.arity != other.arity:
            msg = f"cannot add tensors of arity {self.arity} and {other.arity}"
            raise ValueError(msg)
        terms = dict(self.terms)
        for labels, coefficient in other.terms.items():
            terms[labels] = terms.get(labels, self.ctx.field_spec.zero) + coefficient
        return TensorForm(self.ctx, self.arity, {labels: value for labels, value in terms.items() if value})

    def __neg__(self) -> "TensorForm":
        return TensorForm(self.ctx, self.arity, {labels: -value for labels, value in self.terms.items()})

    def __sub__(self, other: "TensorForm") -> "TensorForm":
        return self + (-other)

    def __mul__(self, other: Scalar) -> "TensorForm":
        return self.scaled(other)

    def __rmul__(self, other: Scalar) -> "TensorForm":
        return self.scaled(other)

    def __str__(self) -> str:
        return format_tensor(self)

    def scaled(self, value: Scalar) -> "TensorForm":
        value = self.ctx.field_spec.convert(value)
        if not value:
            return TensorForm.zero(self.ctx, self.arity)
        return TensorForm(self.ctx, self.arity, {labels: c * value for labels, c in self.terms.items()})

    def bidegrees(self) -> set[tuple[int, ...]]:
        return {tuple(len(word) for _, word in labels) for labels in self.terms}


class _Accumulator:
    def __init__(self, ctx: AlgebraCtx, arity: int) -> None:
        self.ctx = ctx
        self.arity = arity
        self.terms: dict[LabelTuple, Scalar] = {}

    def add(self, labels: LabelTuple, value: Scalar) -> None:
        if value:
            self.terms[labels] = self.terms.get(labels, self.ctx.field_spec.zero) + value

    def result(self) -> TensorForm:
        return TensorForm(self.ctx, self.arity, {labels: value for labels, value in self.terms.items() if value})


def tensor(*forms: DiffForm) -> TensorForm:
    if not forms:
        msg = "a tensor needs at least one factor"
        raise ValueError(msg)
    ctx = forms[0].ctx
    if any(form.ctx is not ctx for form in forms):
        msg = "cannot tensor forms from different contexts"
        raise ValueError(msg)
    accumulator = _Accumulator(ctx, len(forms))
    for choice in product(*(form.terms.items() for form in forms)):
        value = ctx.field_spec.one
        for _, coefficient in choice:
            value *= coefficient
        accumulator.add(tuple(label for label, _ in choice), value)
    return accumulator.result()


def factor(ctx: AlgebraCtx, label: Label) -> DiffForm:
    return ctx.memoized("basis_form", label, lambda: DiffForm.basis(ctx, label))


def _basis_differential(ctx: AlgebraCtx, label: Label) -> DiffForm:
    return ctx.memoized("basis_differential", label, lambda: differential(factor(ctx, label)))


def _basis_product(ctx: AlgebraCtx, left: Label, right: Label) -> DiffForm:
    return ctx.memoized("basis_product", (left, right), lambda: mul(factor(ctx, left), factor(ctx, right)))


def tensor_differential(t: TensorForm) -> TensorForm:
    ctx = t.ctx
    accumulator = _Accumulator(ctx, t.arity)
    for labels, value in t.terms.items():
        parity = 1
        for position, label in enumerate(labels):
            for image, coefficient in _basis_differential(ctx, label).terms.items():
                accumulator.add((*labels[:position], image, *labels[position + 1 :]), value * coefficient * parity)
            parity *= sign(len(label[1]))
    return accumulator.result()


def contract(t: TensorForm, position: int = 0) -> TensorForm:
    """Multiply the factors at ``position`` and ``position + 1``."""
    ctx = t.ctx
    _check_position(t, position)
    accumulator = _Accumulator(ctx, t.arity - 1)
    for labels, value in t.terms.items():
        for image, coefficient in _basis_product(ctx, labels[position], labels[position + 1]).terms.items():
            accumulator.add((*labels[:position], image, *labels[position + 2 :]), value * coefficient)
    return accumulator.result()


def apply_pair(t: TensorForm, position: int, pair_map: PairMap) -> TensorForm:
    ctx = t.ctx
    _check_position(t, position)
    accumulator = _Accumulator(ctx, t.arity)
    for labels, value in t.terms.items():
        image = pair_map(ctx, labels[position], labels[position + 1])
        for (left, right), coefficient in image.terms.items():
            accumulator.add((*labels[:position], left, right, *labels[position + 2 :]), value * coefficient)
    return accumulator.result()


def apply_factors(t: TensorForm, form_map: Callable[[DiffForm], DiffForm]) -> TensorForm:
    ctx = t.ctx
    result = TensorForm.zero(ctx, t.arity)
    for labels, value in t.terms.items():
        result = result + tensor(*(form_map(factor(ctx, label)) for label in labels)).scaled(value)
    return result


def _check_position(t: TensorForm, position: int) -> None:
    if not 0 <= position < t.arity - 1:
        msg = f"position {position} does not address adjacent factors of an arity-{t.arity} tensor"
        raise ValueError(msg)


def flip(t: TensorForm) -> TensorForm:
    return TensorForm(t.ctx, t.arity, {tuple(reversed(labels)): value for labels, value in t.terms.items()})


# -- closed form -------------------------------------------------------------------------------------------------------


def closed_pair(ctx: AlgebraCtx, left: Label, right: Label) -> TensorForm:
    """R(omega (x) phi) = (-1)^{pq} a^p(phi) (x) omega - (-1)^{(p+1)q} I(a^p(phi)) (x) d(omega)."""

    def compute() -> TensorForm:
        omega = factor(ctx, left)
        phi = factor(ctx, right)
        p, q = len(left[1]), len(right[1])
        shifted = alpha_form(phi, p)
        swapped = tensor(shifted, omega).scaled(sign(p * q))
        if q == 0:
            return swapped
        correction = tensor(homotopy_I(shifted), _basis_differential(ctx, left)).scaled(sign((p + 1) * q))
        return swapped - correction

    return ctx.memoized("closed_pair", (left, right), compute)


def _closed(ctx: AlgebraCtx, left: Label, right: Label) -> TensorForm:
    return closed_pair(ctx, left, right)


def braid_closed(t: TensorForm) -> TensorForm:
    _check_arity(t)
    return apply_pair(t, 0, _closed)


def _check_arity(t: TensorForm) -> None:
    if t.arity != 2:  # noqa: PLR2004
        msg = f"the braiding acts on pairs, got a tensor of arity {t.arity}"
        raise ValueError(msg)


# -- oracle ------------------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorForm:
    """The form ``head * d(letters[0]) * ... * d(letters[-1])``."""

    head: PolyElement
    letters: tuple[PolyElement, ...] = ()

    @classmethod
    def from_label(cls, ctx: AlgebraCtx, label: Label) -> "GeneratorForm":
        exponents, word = label
        return cls(monomial(ctx.ring, exponents), tuple(ctx.ring.gens[letter] for letter in word))

    @property
    def degree(self) -> int:
        return len(self.letters)

    @property
    def vanishes(self) -> bool:
        return not self.head or any(_is_constant(letter) for letter in self.letters)

    def without_last(self) -> "GeneratorForm":
        return GeneratorForm(self.head, self.letters[:-1])

    def evaluate(self, ctx: AlgebraCtx) -> DiffForm:
        raw = {(): self.head}
        for letter in self.letters:
            raw = raw_product(ctx, raw, polynomial_differential(ctx, letter))
        return normalize(raw, ctx)


def _is_constant(polynomial: PolyElement) -> bool:
    return all(not any(exponents) for exponents in polynomial.keys())


def _depth_limit(ctx: AlgebraCtx) -> int:
    return 8 * (ctx.max_form_degree + 2)


def oracle_pair(ctx: AlgebraCtx, left: Label, right: Label) -> TensorForm:
    return ctx.memoized(
        "oracle_pair",
        (left, right),
        lambda: braid_generators(ctx, GeneratorForm.from_label(ctx, left), GeneratorForm.from_label(ctx, right)),
    )


def braid_generators(ctx: AlgebraCtx, left: GeneratorForm, right: GeneratorForm) -> TensorForm:
    """R(left (x) right) computed from the unit, product and differential axioms alone."""
    try:
        return _oracle(ctx, left, right, 0)
    except RecursionError as error:
        msg = f"oracle recursion overflowed on generators of degrees {left.degree} and {right.degree}"
        raise MalformedGeneratorError(msg) from error


def _oracle(ctx: AlgebraCtx, left: GeneratorForm, right: GeneratorForm, depth: int) -> TensorForm:
    if depth > _depth_limit(ctx):
        msg = f"oracle recursion exceeded depth {_depth_limit(ctx)}"
        raise MalformedGeneratorError(msg)
    if left.vanishes or right.vanishes:
        return TensorForm.zero(ctx)
    return ctx.memoized("oracle", (left, right), lambda: _oracle_step(ctx, left, right, depth))


def _oracle_step(ctx: AlgebraCtx, left: GeneratorForm, right: GeneratorForm, depth: int) -> TensorForm:
    i, j = left.degree, right.degree
    if j == 0:
        if i == 0:
            return tensor(right.evaluate(ctx), left.evaluate(ctx))
        # R(u du' (x) b) = (1 (x) mu)(R(u (x) alpha b) (x) du') since R(du' (x) b) = alpha b (x) du'
        inner = _oracle(ctx, left.without_last(), GeneratorForm(alpha_power(ctx, right.head)), depth + 1)
        return _right_multiply(inner, normalize(polynomial_differential(ctx, left.letters[-1]), ctx))

    last = right.letters[-1]
    head = reduce(right.head * alpha_power(ctx, last, j - 1), ctx.endo.relations)
    # v0 dv1..dvj = (-1)^(j-1) (d(shorter) - d(prefix) vj)
    shorter = GeneratorForm(head, right.letters[:-1])
    prefix = right.without_last()
    d_left = GeneratorForm(ctx.ring.one, (left.head, *left.letters))
    parity = sign(i + j - 1)
    result = (
        tensor_differential(_oracle(ctx, left, shorter, depth + 1)) - _oracle(ctx, d_left, shorter, depth + 1)
    ).scaled(parity)
    through_prefix = (
        tensor_differential(_oracle(ctx, left, prefix, depth + 1)) - _oracle(ctx, d_left, prefix, depth + 1)
    ).scaled(sign(i))
    return result + _move_past(ctx, through_prefix, last, depth + 1).scaled(sign(j))


def _right_multiply(t: TensorForm, form: DiffForm) -> TensorForm:
    ctx = t.ctx
    accumulator = _Accumulator(ctx, 2)
    for (left, right), value in t.terms.items():
        for image, coefficient in mul(factor(ctx, right), form).terms.items():
            accumulator.add((left, image), value * coefficient)
    return accumulator.result()


def _move_past(ctx: AlgebraCtx, t: TensorForm, letter: PolyElement, depth: int) -> TensorForm:
    """(mu (x) 1)(1 (x) R)(t (x) letter) for a 0-form ``letter``."""
    accumulator = _Accumulator(ctx, 2)
    moved = GeneratorForm(letter)
    for (left, right), value in t.terms.items():
        swapped = _oracle(ctx, GeneratorForm.from_label(ctx, right), moved, depth)
        for (first, second), coefficient in swapped.terms.items():
            for image, factor_value in _basis_product(ctx, left, first).terms.items():
                accumulator.add((image, second), value * coefficient * factor_value)
    return accumulator.result()


def _oracle_on_labels(ctx: AlgebraCtx, left: Label, right: Label) -> TensorForm:
    return oracle_pair(ctx, left, right)


def braid_oracle(t: TensorForm) -> TensorForm:
    _check_arity(t)
    return apply_pair(t, 0, _oracle_on_labels)


# -- printing ----------------------------------------------------------------------------------------------------------


def format_tensor(t: TensorForm) -> str:
    ctx = t.ctx
    pieces = []
    for labels in sorted(t.terms):
        first = format_term(ctx, t.terms[labels], format_label(ctx, labels[0]))
        pieces.append(" (x) ".join([first, *(format_label(ctx, label) for label in labels[1:])]))
    if len(pieces) <= 1:
        return join_terms(pieces)
    return join_terms([f"-[{piece[1:]}]" if piece.startswith("-") else f"[{piece}]" for piece in pieces])


# -- blocks and matrices -----------------------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TensorBlock:
    ctx: AlgebraCtx
    arity: int
    var_degree: int
    form_degree: int
    basis: tuple[LabelTuple, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def index(self) -> dict[LabelTuple, int]:
        return {labels: position for position, labels in enumerate(self.basis)}

    def describe(self) -> str:
        return f"(n={self.arity}, d={self.var_degree}, f={self.form_degree})"

    def format_labels(self, labels: LabelTuple) -> str:
        return " (x) ".join(format_label(self.ctx, label) for label in labels)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def enumerate_label_tuples(
    ctx: AlgebraCtx,
    arity: int,
    var_degree: int,
    form_degree: int,
    accept: Callable[[Label], bool] | None = None,
) -> tuple[LabelTuple, ...]:
    if arity < 1:
        msg = f"tensor arity must be positive, got {arity}"
        raise ValueError(msg)
    ctx.check_caps(form_degree, var_degree)
    if ctx.collapsed and var_degree != 0:
        return ()
    tuples: list[LabelTuple] = []
    for degrees in _compositions(form_degree, arity):
        weight_choices = [(0,) * arity] if ctx.collapsed else _compositions(var_degree, arity)
        for weights in weight_choices:
            if not ctx.collapsed and any(w < n for w, n in zip(weights, degrees, strict=True)):
                continue
            factors = []
            for n, w in zip(degrees, weights, strict=True):
                labels = build_block_basis(ctx, n, w).labels
                factors.append([label for label in labels if accept is None or accept(label)])
            tuples.extend(product(*factors))
    return tuple(sorted(tuples))


def tensor_block(ctx: AlgebraCtx, var_degree: int, form_degree: int, arity: int = 2) -> TensorBlock:
    basis = enumerate_label_tuples(ctx, arity, var_degree, form_degree)
    return TensorBlock(ctx, arity, var_degree, form_degree, basis)


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """Columns are the images of the source basis in target coordinates."""

    source: TensorBlock
    target: TensorBlock
    matrix: DomainMatrix

    @classmethod
    def from_images(cls, source: TensorBlock, target: TensorBlock, images: list[TensorForm]) -> "BlockMatrix":
        field_spec = source.ctx.field_spec
        rows = [[field_spec.zero] * source.dimension for _ in range(target.dimension)]
        for column, image in enumerate(images):
            for labels, value in image.terms.items():
                row = target.index.get(labels)
                if row is None:
                    msg = (
                        f"image of {source.format_labels(source.basis[column])} leaves block {target.describe()}"
                        f" through {target.format_labels(labels)}"
                    )
                    raise ValueError(msg)
                rows[row][column] = value
        return cls(source, target, DomainMatrix(rows, (target.dimension, source.dimension), field_spec.domain))

    @property
    def dimension(self) -> int:
        return self.source.dimension

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        if other.target.basis != self.source.basis:
            msg = f"cannot compose maps on {other.target.describe()} and {self.source.describe()}"
            raise ValueError(msg)
        if self.dimension == 0:
            return BlockMatrix(other.source, self.target, self.matrix)
        return BlockMatrix(other.source, self.target, self.matrix.matmul(other.matrix))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        if self.source.basis != other.source.basis or self.target.basis != other.target.basis:
            return False
        return self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash((self.source.basis, self.target.basis))

    def __str__(self) -> str:
        field_spec = self.source.ctx.field_spec
        return str([[field_spec.format(value) for value in row] for row in self.entries()])

    def entries(self) -> list[list[Scalar]]:
        if self.matrix.shape[0] == 0 or self.matrix.shape[1] == 0:
            return []
        return [list(row) for row in self.matrix.to_list()]

    def entry(self, row: LabelTuple, column: LabelTuple) -> Scalar:
        return self.entries()[self.target.index[row]][self.source.index[column]]

    def column(self, labels: LabelTuple) -> TensorForm:
        position = self.source.index[labels]
        terms = {self.target.basis[row]: values[position] for row, values in enumerate(self.entries())}
        return TensorForm(self.source.ctx, self.target.arity, {key: value for key, value in terms.items() if value})

    def is_identity(self) -> bool:
        if self.dimension == 0:
            return True
        if self.source.basis != self.target.basis:
            return False
        one, zero = self.matrix.domain.one, self.matrix.domain.zero
        return all(
            value == (one if row == column else zero)
            for row, values in enumerate(self.entries())
            for column, value in enumerate(values)
        )

    def inverse(self) -> "BlockMatrix":
        if self.source.dimension != self.target.dimension:
            msg = f"block map {self.source.describe()} -> {self.target.describe()} is not square"
            raise SingularBlockError(msg)
        if self.dimension == 0:
            return BlockMatrix(self.target, self.source, self.matrix)
        try:
            inverse = self.matrix.inv()
        except (DMNonInvertibleMatrixError, ZeroDivisionError) as error:
            msg = f"block {self.source.describe()} map is singular"
            raise SingularBlockError(msg) from error
        return BlockMatrix(self.target, self.source, inverse)

    def specialize(self, value: sympy.Rational | int | str) -> DomainMatrix:
        """Evaluate a matrix over QQ(q) at a rational value of q."""
        field_spec = self.source.ctx.field_spec
        if field_spec.kind is not FieldKind.RATIONAL_FUNCTIONS:
            return self.matrix
        target = field_spec.specialize(value)
        rows = [[field_spec.evaluate_at_q(entry, value) for entry in row] for row in self.entries()]
        return DomainMatrix(rows, self.matrix.shape, target.domain)


def braid_matrix(block: TensorBlock, which: str = "closed") -> BlockMatrix:
    if block.arity != 2:  # noqa: PLR2004
        msg = f"braid matrices act on pairs, got a block of arity {block.arity}"
        raise ValueError(msg)
    braid = _braid_function(which)
    images = [braid(TensorForm.basis(block.ctx, labels)) for labels in block.basis]
    logger.debug("braid matrix (%s) on block %s of dimension %d", which, block.describe(), block.dimension)
    return BlockMatrix.from_images(block, block, images)


def braid_inverse(block: TensorBlock) -> BlockMatrix:
    return braid_matrix(block).inverse()


def _braid_function(which: str) -> Callable[[TensorForm], TensorForm]:
    if which == "closed":
        return braid_closed
    if which == "oracle":
        return braid_oracle
    msg = f"unknown braiding {which!r}, expected 'closed' or 'oracle'"
    raise ValueError(msg)


def pair_map(which: str) -> PairMap:
    if which == "closed":
        return _closed
    if which == "oracle":
        return _oracle_on_labels
    msg = f"unknown braiding {which!r}, expected 'closed' or 'oracle'"
    raise ValueError(msg)


# -- axioms ------------------------------------------------------------------------------------------------------------


def scaling_morphism(ctx: AlgebraCtx) -> FormMorphism | None:
    """A non-trivial scaling x_i -> c_i x_i commuting with alpha, if one of the standard candidates does."""
    variable_count = len(ctx.variables)
    for factors in ([index + 2 for index in range(variable_count)], [2] * variable_count):
        try:
            return FormMorphism.scaling(ctx, factors)
        except EndomorphismError:
            continue
    return None


def _pairs(ctx: AlgebraCtx, max_var_degree: int, max_form_degree: int, arity: int) -> Iterator[LabelTuple]:
    labels = list(iter_basis_labels(ctx, max_var_degree, max_form_degree))
    for labels_tuple in product(labels, repeat=arity):
        if fits_caps(ctx, labels_tuple, max_var_degree, max_form_degree):
            yield labels_tuple


def check_axioms(ctx: AlgebraCtx, max_var_degree: int, max_form_degree: int) -> VerificationReport:
    """Check the braiding axioms of the closed-form R on every basis pair and triple within the caps.

    The context needs form-degree headroom above ``max_form_degree`` for the intermediates of d and R.
    """
    recorder = CheckRecorder("braiding")
    unit = ((0,) * len(ctx.variables), ())
    for (label,) in _pairs(ctx, max_var_degree, max_form_degree, 1):
        block = describe_block(ctx, label)
        recorder.compare(
            "unit_left", block, factor(ctx, label), TensorForm.basis(ctx, (label, unit)),
            braid_closed(TensorForm.basis(ctx, (unit, label))),
        )  # fmt: skip
        recorder.compare(
            "unit_right", block, factor(ctx, label), TensorForm.basis(ctx, (unit, label)),
            braid_closed(TensorForm.basis(ctx, (label, unit))),
        )  # fmt: skip

    morphism = scaling_morphism(ctx)
    for labels in _pairs(ctx, max_var_degree, max_form_degree, 2):
        t = TensorForm.basis(ctx, labels)
        block = describe_block(ctx, *labels)
        braided = braid_closed(t)
        if not any(word for _, word in labels):
            recorder.compare("degree_zero_flip", block, t, flip(t), braided)
        recorder.compare("commutativity", block, t, contract(t), contract(braided))
        recorder.compare("dg_map", block, t, braid_closed(tensor_differential(t)), tensor_differential(braided))
        if morphism is not None:
            recorder.compare(
                "naturality", block, t, braid_closed(apply_factors(t, morphism)), apply_factors(braided, morphism)
            )

    for labels in _pairs(ctx, max_var_degree, max_form_degree, 3):
        t = TensorForm.basis(ctx, labels)
        block = describe_block(ctx, *labels)
        left_first = apply_pair(apply_pair(apply_pair(t, 0, _closed), 1, _closed), 0, _closed)
        right_first = apply_pair(apply_pair(apply_pair(t, 1, _closed), 0, _closed), 1, _closed)
        recorder.compare("yang_baxter", block, t, left_first, right_first)
        recorder.compare(
            "product_right_factor",
            block,
            t,
            braid_closed(contract(t, 1)),
            contract(apply_pair(apply_pair(t, 0, _closed), 1, _closed), 0),
        )
        recorder.compare(
            "product_left_factor",
            block,
            t,
            braid_closed(contract(t, 0)),
            contract(apply_pair(apply_pair(t, 1, _closed), 0, _closed), 1),
        )
    report = recorder.report()
    logger.info("braiding axioms: %d checks, %d failures", report.checked, report.failed)
    return report


def check_oracle(ctx: AlgebraCtx, max_var_degree: int, max_form_degree: int) -> VerificationReport:
    """Compare the closed-form R with the recursive oracle on every basis pair within the caps."""
    recorder = CheckRecorder("oracle")
    for labels in _pairs(ctx, max_var_degree, max_form_degree, 2):
        t = TensorForm.basis(ctx, labels)
        try:
            oracle = braid_oracle(t)
        except (CapExceededError, MalformedGeneratorError) as error:
            recorder.fail("oracle_equivalence", describe_block(ctx, *labels), t, braid_closed(t), error)
            continue
        recorder.compare("oracle_equivalence", describe_block(ctx, *labels), t, braid_closed(t), oracle)
    report = recorder.report()
    logger.info("oracle equivalence: %d checks, %d failures", report.checked, report.failed)
    return report
