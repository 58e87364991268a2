import json
from pathlib import Path

import pandas as pd
import pytest
from conftest import identity_context, idempotent_context, q_plane_context, specialized_context, swap_context

from twisted_forms.braidrep import (
    SubquotientSpec,
    check_window_stability,
    enumerate_block,
    export_matrices,
    representation,
    sigma_inverse,
    sigma_matrix,
    verify_braid_relations,
    verify_involution,
    verify_oracle_matrices,
)
from twisted_forms.errors import ExportError, PreconditionError, SingularBlockError, UnstableWindowError
from twisted_forms.omega import AlgebraCtx

EVERYTHING = SubquotientSpec()


def basis_names(ctx: AlgebraCtx, window: SubquotientSpec, arity: int, d: int, f: int) -> list[str]:
    block = enumerate_block(ctx, window, arity, d, f)
    return [block.format_labels(labels) for labels in block.basis]


def test_enumerate_block(q_plane: AlgebraCtx) -> None:
    assert basis_names(q_plane, EVERYTHING, 2, 1, 1) == ["1 (x) dx", "dx (x) 1"]
    assert sorted(basis_names(q_plane, EVERYTHING, 2, 2, 1)) == ["1 (x) x*dx", "dx (x) x", "x (x) dx", "x*dx (x) 1"]
    assert basis_names(q_plane, EVERYTHING, 1, 3, 1) == ["x^2*dx"]
    assert enumerate_block(q_plane, EVERYTHING, 2, 0, 1).dimension == 0
    assert enumerate_block(q_plane, EVERYTHING, 3, 2, 1).describe() == "(n=3, d=2, f=1)"


def test_sigma_matrices(q_plane: AlgebraCtx) -> None:
    block = enumerate_block(q_plane, EVERYTHING, 2, 1, 1)
    assert str(sigma_matrix(block, 1)) == "[['0', '1'], ['1', '0']]"
    block = enumerate_block(q_plane, EVERYTHING, 2, 2, 1)
    sigma = sigma_matrix(block, 1)
    names = [block.format_labels(labels) for labels in block.basis]
    column = names.index("dx (x) x")
    q = q_plane.field_spec.q()
    assert sigma.entries()[names.index("x (x) dx")][column] == q
    assert sum(1 for row in sigma.entries() if row[column]) == 1
    assert (sigma_inverse(block, 1) @ sigma).is_identity()
    assert not (sigma @ sigma).is_identity()
    with pytest.raises(ValueError):
        sigma_matrix(block, 0)
    with pytest.raises(ValueError):
        sigma_matrix(block, 2)


def test_three_strands(q_plane: AlgebraCtx) -> None:
    block = enumerate_block(q_plane, EVERYTHING, 3, 2, 1)
    rep = representation(block)
    assert len(rep.generators) == 2
    first, second = rep.generator(1), rep.generator(2)
    assert first @ second @ first == second @ first @ second
    for generator, inverse in zip(rep.generators, rep.inverses(), strict=True):
        assert (generator @ inverse).is_identity()


def test_braid_relations_q_plane() -> None:
    report = verify_braid_relations(q_plane_context(3, 6), EVERYTHING, 3, 3, 2)
    assert report.passed
    assert set(report.summary["Check"]) == {"invertible", "braid"}


def test_braid_relations_swap() -> None:
    assert verify_braid_relations(swap_context(3, 4), EVERYTHING, 3, 3, 1).passed


def test_far_commuting_generators() -> None:
    report = verify_braid_relations(q_plane_context(2, 4), EVERYTHING, 4, 2, 1)
    assert report.passed
    assert "far_commute" in set(report.summary["Check"])


def test_two_strands_have_no_braid_relation() -> None:
    report = verify_braid_relations(q_plane_context(3, 4), EVERYTHING, 2, 3, 1)
    assert report.passed
    assert set(report.summary["Check"]) == {"invertible"}


def test_singular_generator_at_zero() -> None:
    ctx = specialized_context(0, 3, 4)
    block = enumerate_block(ctx, EVERYTHING, 2, 2, 1)
    with pytest.raises(SingularBlockError):
        sigma_inverse(block, 1)
    report = verify_braid_relations(ctx, EVERYTHING, 2, 2, 1)
    assert not report.passed
    assert "(n=2, d=2, f=1)" in set(report.failures["Block"])


def test_oracle_matrices_agree() -> None:
    assert verify_oracle_matrices(q_plane_context(3, 6), EVERYTHING, 3, 3, 1).passed
    assert verify_oracle_matrices(swap_context(2, 4), EVERYTHING, 2, 2, 1).passed


def test_involution_on_degree_zero_blocks() -> None:
    ctx = idempotent_context()
    for arity in (2, 3):
        report = verify_involution(ctx, EVERYTHING, arity, 0, 0)
        assert report.passed
        assert report.checked == arity - 1
    assert verify_involution(identity_context(3, 4), EVERYTHING, 3, 3, 0).passed


def test_involution_fails_on_one_forms() -> None:
    ctx = idempotent_context()
    report = verify_involution(ctx, EVERYTHING, 2, 0, 1)
    assert not report.passed
    assert set(report.failures["Block"]) == {"(n=2, d=0, f=1)"}
    block = enumerate_block(ctx, EVERYTHING, 2, 0, 1)
    sigma = sigma_matrix(block, 1)
    assert not (sigma @ sigma).is_identity()


def test_involution_requires_an_involution(q_plane: AlgebraCtx) -> None:
    with pytest.raises(PreconditionError):
        verify_involution(q_plane, EVERYTHING, 2, 2, 1)


def test_window_parsing() -> None:
    assert SubquotientSpec.parse(None).is_trivial
    assert SubquotientSpec.parse("1:2") == SubquotientSpec(var_window=(1, 2))
    assert SubquotientSpec.parse("1:2").describe() == "variable-degree 1:2"
    assert EVERYTHING.describe() == "all forms"
    with pytest.raises(ValueError):
        SubquotientSpec.parse("3")
    with pytest.raises(ValueError):
        SubquotientSpec.parse("2:1")
    with pytest.raises(ValueError):
        SubquotientSpec.parse("a:b")


def test_stable_window(q_plane: AlgebraCtx) -> None:
    window = SubquotientSpec.parse("1:2")
    assert check_window_stability(q_plane, window, 3, 1) == []
    assert sorted(basis_names(q_plane, window, 2, 3, 1)) == [
        "dx (x) x^2",
        "x (x) x*dx",
        "x*dx (x) x",
        "x^2 (x) dx",
    ]
    assert enumerate_block(q_plane, EVERYTHING, 2, 3, 1).dimension == 6
    block = enumerate_block(q_plane, window, 2, 3, 1)
    assert block.describe() == "(n=2, d=3, f=1) in variable-degree 1:2"
    sigma = sigma_matrix(block, 1)
    assert (sigma_inverse(block, 1) @ sigma).is_identity()


def test_unstable_window_is_refused() -> None:
    ctx = specialized_context(-1, 3, 6)
    window = SubquotientSpec(form_window=(0, 1))
    with pytest.raises(UnstableWindowError) as excinfo:
        enumerate_block(ctx, window, 2, 3, 2)
    assert any("leaves the window" in witness for witness in excinfo.value.witnesses)


def test_export_json(q_plane: AlgebraCtx, tmp_path: Path) -> None:
    rep = representation(enumerate_block(q_plane, EVERYTHING, 2, 1, 1))
    path = export_matrices(rep, tmp_path / "swap.json")
    document = json.loads(path.read_text(encoding="utf-8"))
    assert document["block"] == {"arity": 2, "var_degree": 1, "form_degree": 1}
    assert document["dimension"] == 2
    assert document["basis"] == ["1 (x) dx", "dx (x) 1"]
    assert document["field"] == "QQ(q)"
    assert document["generators"] == {"sigma_1": [["0", "1"], ["1", "0"]]}
    assert document["coefficients"]["sigma_1"][0][1] == {"numerator": ["1"], "denominator": ["1"]}


def test_export_rational_function_entries(q_plane: AlgebraCtx, tmp_path: Path) -> None:
    rep = representation(enumerate_block(q_plane, EVERYTHING, 2, 2, 1))
    document = json.loads(export_matrices(rep, tmp_path / "block.json").read_text(encoding="utf-8"))
    position = document["basis"].index("x (x) dx")
    assert document["generators"]["sigma_1"][position][position] == "1 - q"
    assert document["coefficients"]["sigma_1"][position][position] == {"numerator": ["1", "-1"], "denominator": ["1"]}
    with pytest.raises(ExportError):
        export_matrices(rep, tmp_path / "block.csv", "csv")


def test_export_csv(swap: AlgebraCtx, tmp_path: Path) -> None:
    rep = representation(enumerate_block(swap, EVERYTHING, 2, 2, 1))
    path = export_matrices(rep, tmp_path / "swap.csv", "csv")
    table = pd.read_csv(path, dtype=str)
    assert list(table.columns) == ["Generator", "Row", "Column", "Entry"]
    assert len(table) == rep.block.dimension**2
    assert set(table["Generator"]) == {"sigma_1"}
    document = json.loads(export_matrices(rep, tmp_path / "swap.json").read_text(encoding="utf-8"))
    assert "coefficients" not in document
    assert document["field"] == "QQ"


def test_export_empty_block(q_plane: AlgebraCtx, tmp_path: Path) -> None:
    rep = representation(enumerate_block(q_plane, EVERYTHING, 2, 0, 1))
    document = json.loads(export_matrices(rep, tmp_path / "empty.json").read_text(encoding="utf-8"))
    assert document["dimension"] == 0
    assert document["basis"] == []
    assert document["generators"] == {"sigma_1": []}


def test_export_unknown_format(q_plane: AlgebraCtx, tmp_path: Path) -> None:
    rep = representation(enumerate_block(q_plane, EVERYTHING, 2, 1, 1))
    with pytest.raises(ExportError):
        export_matrices(rep, tmp_path / "matrices.xml", "xml")
