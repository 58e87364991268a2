import pytest

from twisted_forms.kernel import EndoSpec, FieldSpec, Relation, polynomial_ring
from twisted_forms.omega import AlgebraCtx


def q_plane_context(max_var_degree: int = 6, max_form_degree: int = 4) -> AlgebraCtx:
    field_spec = FieldSpec.rational_functions()
    ring = polynomial_ring(field_spec, ["x"])
    return AlgebraCtx(field_spec, ("x",), EndoSpec.diagonal(ring, [field_spec.q()]), max_var_degree, max_form_degree)


def specialized_context(q_value: int, max_var_degree: int = 6, max_form_degree: int = 4) -> AlgebraCtx:
    field_spec = FieldSpec.rationals(q_value)
    ring = polynomial_ring(field_spec, ["x"])
    return AlgebraCtx(field_spec, ("x",), EndoSpec.diagonal(ring, [q_value]), max_var_degree, max_form_degree)


def swap_context(max_var_degree: int = 5, max_form_degree: int = 4) -> AlgebraCtx:
    field_spec = FieldSpec.rationals()
    ring = polynomial_ring(field_spec, ["x", "y"])
    endo = EndoSpec.linear(ring, [[0, 1], [1, 0]])
    return AlgebraCtx(field_spec, ("x", "y"), endo, max_var_degree, max_form_degree)


def idempotent_context(max_form_degree: int = 4) -> AlgebraCtx:
    field_spec = FieldSpec.rationals()
    ring = polynomial_ring(field_spec, ["x"])
    x = ring.gens[0]
    endo = EndoSpec.general(ring, [1 - x], [Relation(0, 2, x)])
    return AlgebraCtx(field_spec, ("x",), endo, 0, max_form_degree)


def identity_context(max_var_degree: int = 5, max_form_degree: int = 4) -> AlgebraCtx:
    field_spec = FieldSpec.rationals()
    ring = polynomial_ring(field_spec, ["x"])
    return AlgebraCtx(field_spec, ("x",), EndoSpec.identity(ring), max_var_degree, max_form_degree)


@pytest.fixture()
def q_plane() -> AlgebraCtx:
    return q_plane_context()


@pytest.fixture()
def swap() -> AlgebraCtx:
    return swap_context()


@pytest.fixture()
def idempotent() -> AlgebraCtx:
    return idempotent_context()


@pytest.fixture()
def identity() -> AlgebraCtx:
    return identity_context()
