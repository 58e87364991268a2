import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from twisted_forms.errors import EndomorphismError, FieldError, ScalarDivisionError
from twisted_forms.kernel import EndoSpec, FieldSpec, Relation, apply_endo, polynomial_ring, q_integer, reduce

rational_functions = FieldSpec.rational_functions()
q = rational_functions.q()

exponents_2 = st.tuples(st.integers(0, 3), st.integers(0, 3))
small_polynomials = st.dictionaries(exponents_2, st.integers(-5, 5), max_size=5)
univariate = st.dictionaries(st.tuples(st.integers(0, 6)), st.integers(-5, 5), max_size=5)


def test_q_integer() -> None:
    assert q_integer(3, rational_functions) == 1 + q + q**2
    assert q_integer(0, rational_functions) == rational_functions.zero
    assert q_integer(4, FieldSpec.rationals(2)) == FieldSpec.rationals(2).convert(15)
    assert rational_functions.format(q_integer(3, rational_functions)) == "1 + q + q^2"


def test_q_integer_at_one() -> None:
    field_spec = FieldSpec.rationals(1)
    assert q_integer(5, field_spec) == field_spec.convert(5)


def test_q_integer_requires_q() -> None:
    with pytest.raises(FieldError):
        q_integer(2, FieldSpec.rationals())
    with pytest.raises(ValueError):
        q_integer(-1, rational_functions)


def test_q_integer_telescopes() -> None:
    for n in range(33):
        assert q_integer(n, rational_functions) * (1 - q) == 1 - q**n


def test_scalar_arithmetic() -> None:
    assert (1 - q) * (1 + q) == 1 - q**2
    assert rational_functions.format((1 - q) * (1 + q)) == "1 - q^2"
    assert rational_functions.format(rational_functions.invert(1 + q)) == "1/(1 + q)"
    assert rational_functions.format((1 + q) / (2 - 2 * q)) == "(-1/2 - 1/2*q)/(-1 + q)"
    assert rational_functions.format(-q) == "-q"
    assert rational_functions.format(rational_functions.zero) == "0"


def test_invert_zero() -> None:
    with pytest.raises(ScalarDivisionError):
        rational_functions.invert(rational_functions.zero)
    with pytest.raises(ZeroDivisionError):
        FieldSpec.rationals().divide(1, 0)


def test_field_validation() -> None:
    with pytest.raises(FieldError):
        FieldSpec.prime_field(4)
    with pytest.raises(FieldError):
        FieldSpec.prime_field(5, "1/5")
    with pytest.raises(FieldError):
        FieldSpec.rationals("x")
    assert FieldSpec.prime_field(5).describe() == "GF(5)"
    assert FieldSpec.rationals(-1).describe() == "QQ with q = -1"
    assert rational_functions.describe() == "QQ(q)"


def test_prime_field_residues() -> None:
    field_spec = FieldSpec.prime_field(5)
    assert field_spec.format(field_spec.convert(-1)) == "4"
    assert field_spec.format(field_spec.rational(1, 2)) == "3"


@settings(deadline=None)
@given(st.integers(-20, 20), st.integers(1, 20), st.integers(-20, 20), st.integers(1, 20))
def test_prime_field_matches_rationals(a: int, b: int, c: int, d: int) -> None:
    p = 7
    if b % p == 0 or d % p == 0:
        return
    gf = FieldSpec.prime_field(p)
    value = (gf.rational(a, b) + gf.rational(c, d)) * gf.rational(a, b)
    exact = (sympy.Rational(a, b) + sympy.Rational(c, d)) * sympy.Rational(a, b)
    assert int(gf.format(value)) == exact.p * pow(int(exact.q), -1, p) % p


def test_evaluate_at_q() -> None:
    value = rational_functions.invert(1 + q)
    assert rational_functions.evaluate_at_q(value, 1) == sympy.QQ(1, 2)
    assert rational_functions.evaluate_at_q(q**2 - 1, 2) == sympy.QQ(3)
    with pytest.raises(ScalarDivisionError):
        rational_functions.evaluate_at_q(value, -1)
    assert rational_functions.is_constant(rational_functions.convert(3))
    assert not rational_functions.is_constant(value)


def test_apply_endo() -> None:
    ring = polynomial_ring(rational_functions, ["x", "y"])
    x, y = ring.gens
    endo = EndoSpec.diagonal(ring, [q, q])
    assert apply_endo(x**2 * y, endo) == (x**2 * y).mul_ground(q**3)
    identity = EndoSpec.identity(ring)
    assert apply_endo(x**3 + 2 * x * y, identity) == x**3 + 2 * x * y


def test_apply_endo_with_relation() -> None:
    field_spec = FieldSpec.rationals()
    ring = polynomial_ring(field_spec, ["x"])
    (x,) = ring.gens
    endo = EndoSpec.general(ring, [1 - x], [Relation(0, 2, x)])
    assert apply_endo(x, endo) == 1 - x
    assert apply_endo(x**2, endo) == 1 - x
    assert endo.is_involution
    assert endo.is_finite
    assert not endo.is_graded


def test_reduce() -> None:
    ring = polynomial_ring(FieldSpec.rationals(), ["x"])
    (x,) = ring.gens
    relations = [Relation(0, 2, x)]
    assert reduce(x**3, relations) == x
    assert reduce(x, relations) == x
    assert reduce(x**4 + x**2, relations) == 2 * x


@settings(deadline=None)
@given(univariate)
def test_reduce_is_idempotent(coefficients: dict[tuple[int], int]) -> None:
    ring = polynomial_ring(FieldSpec.rationals(), ["x"])
    (x,) = ring.gens
    relations = [Relation(0, 3, 2 * x**2 - x + 1)]
    p = ring.from_dict({k: v for k, v in coefficients.items() if v})
    once = reduce(p, relations)
    assert reduce(once, relations) == once
    assert all(exponents[0] < 3 for exponents in once.keys())


@settings(deadline=None)
@given(small_polynomials, small_polynomials)
def test_apply_endo_is_homomorphism(first: dict[tuple[int, int], int], second: dict[tuple[int, int], int]) -> None:
    ring = polynomial_ring(FieldSpec.rationals(), ["x", "y"])
    x, y = ring.gens
    endo = EndoSpec.general(ring, [x + y**2, 3 * x * y])
    p = ring.from_dict({k: v for k, v in first.items() if v})
    r = ring.from_dict({k: v for k, v in second.items() if v})
    assert apply_endo(p * r, endo) == apply_endo(p, endo) * apply_endo(r, endo)
    assert apply_endo(p + r, endo) == apply_endo(p, endo) + apply_endo(r, endo)


def test_endomorphism_validation() -> None:
    ring = polynomial_ring(FieldSpec.rationals(), ["x", "y"])
    x, y = ring.gens
    with pytest.raises(EndomorphismError):
        EndoSpec.general(ring, [2 * x, y], [Relation(0, 2, x)])
    with pytest.raises(EndomorphismError):
        EndoSpec.identity(ring, [Relation(0, 2, x**2)])
    with pytest.raises(EndomorphismError):
        EndoSpec.identity(ring, [Relation(0, 2, x), Relation(0, 3, x)])
    with pytest.raises(EndomorphismError):
        EndoSpec.identity(ring, [Relation(0, 2, y)])
    with pytest.raises(EndomorphismError):
        EndoSpec.diagonal(ring, [1])
    with pytest.raises(EndomorphismError):
        EndoSpec.linear(ring, [[0, 1]])


def test_endomorphism_kinds() -> None:
    ring = polynomial_ring(FieldSpec.rationals(), ["x", "y"])
    x, y = ring.gens
    swap = EndoSpec.linear(ring, [[0, 1], [1, 0]])
    assert swap.images == (y, x)
    assert swap.is_graded
    assert swap.is_involution
    assert not swap.is_identity
    assert EndoSpec.identity(ring).is_identity
    assert not EndoSpec.general(ring, [x + 1, y]).is_graded
