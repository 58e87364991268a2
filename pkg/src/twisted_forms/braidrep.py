"""Braid group generators on graded blocks of tensor powers of a window of the twisted forms."""

import json
import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import pandas as pd

from twisted_forms.braiding import (
    BlockMatrix,
    TensorBlock,
    TensorForm,
    apply_pair,
    enumerate_label_tuples,
    pair_map,
)
from twisted_forms.errors import ExportError, PreconditionError, SingularBlockError, UnstableWindowError
from twisted_forms.kernel import FieldKind
from twisted_forms.omega import AlgebraCtx, Label, fits_caps, format_label, iter_basis_labels
from twisted_forms.reports import CheckRecorder, VerificationReport

logger = logging.getLogger(__name__)

Window = tuple[int, int]


@dataclass(frozen=True)
class SubquotientSpec:
    """Forms with variable-degree and form-degree inside the windows, modulo the ones below them.

    ``None`` leaves that grading unrestricted.
    """

    var_window: Window | None = None
    form_window: Window | None = None

    def __post_init__(self) -> None:
        for name, window in (("variable-degree", self.var_window), ("form-degree", self.form_window)):
            if window is None:
                continue
            low, high = window
            if low < 0 or high < low:
                msg = f"invalid {name} window {low}:{high}"
                raise ValueError(msg)

    @classmethod
    def parse(cls, text: str | None) -> "SubquotientSpec":
        """Read a variable-degree window written ``lo:hi``."""
        if text is None:
            return cls()
        low, separator, high = text.partition(":")
        if not separator or not low.strip().isdigit() or not high.strip().isdigit():
            msg = f"window must read lo:hi with nonnegative integers, got {text!r}"
            raise ValueError(msg)
        return cls(var_window=(int(low), int(high)))

    @property
    def is_trivial(self) -> bool:
        return self.var_window is None and self.form_window is None

    def accepts(self, ctx: AlgebraCtx, label: Label) -> bool:
        return not self.is_below(ctx, label) and not self.is_above(ctx, label)

    def is_below(self, ctx: AlgebraCtx, label: Label) -> bool:
        form_degree, var_degree = ctx.block_key(label)
        if self.var_window is not None and var_degree < self.var_window[0]:
            return True
        return self.form_window is not None and form_degree < self.form_window[0]

    def is_above(self, ctx: AlgebraCtx, label: Label) -> bool:
        form_degree, var_degree = ctx.block_key(label)
        if self.var_window is not None and var_degree > self.var_window[1]:
            return True
        return self.form_window is not None and form_degree > self.form_window[1]

    def describe(self) -> str:
        if self.is_trivial:
            return "all forms"
        parts = []
        if self.var_window is not None:
            parts.append(f"variable-degree {self.var_window[0]}:{self.var_window[1]}")
        if self.form_window is not None:
            parts.append(f"form-degree {self.form_window[0]}:{self.form_window[1]}")
        return ", ".join(parts)


@dataclass(frozen=True, eq=False)
class PowerBlock(TensorBlock):
    window: SubquotientSpec = field(default_factory=SubquotientSpec)

    def describe(self) -> str:
        text = super().describe()
        return text if self.window.is_trivial else f"{text} in {self.window.describe()}"


def check_window_stability(
    ctx: AlgebraCtx, window: SubquotientSpec, max_var_degree: int, max_form_degree: int, which: str = "closed"
) -> list[str]:
    """Basis pairs within the caps on which R does not descend to the window; empty when it is stable."""
    if window.is_trivial:
        return []
    return ctx.memoized(
        "window_stability",
        (window, max_var_degree, max_form_degree, which),
        lambda: _unstable_pairs(ctx, window, max_var_degree, max_form_degree, which),
    )


def _unstable_pairs(
    ctx: AlgebraCtx, window: SubquotientSpec, max_var_degree: int, max_form_degree: int, which: str
) -> list[str]:
    braid = pair_map(which)
    labels = [
        label
        for label in iter_basis_labels(ctx, max_var_degree, max_form_degree)
        if not window.is_above(ctx, label)
    ]
    witnesses = []
    for left, right in product(labels, repeat=2):
        if not fits_caps(ctx, (left, right), max_var_degree, max_form_degree):
            continue
        killed = window.is_below(ctx, left) or window.is_below(ctx, right)
        for first, second in braid(ctx, left, right).terms:
            source = f"{format_label(ctx, left)} (x) {format_label(ctx, right)}"
            target = f"{format_label(ctx, first)} (x) {format_label(ctx, second)}"
            if window.is_above(ctx, first) or window.is_above(ctx, second):
                witnesses.append(f"R({source}) leaves the window through {target}")
            elif killed and not (window.is_below(ctx, first) or window.is_below(ctx, second)):
                witnesses.append(f"R({source}) lifts a quotient pair to {target}")
    logger.debug("window %s: %d unstable images", window.describe(), len(witnesses))
    return witnesses


def enumerate_block(
    ctx: AlgebraCtx, window: SubquotientSpec, arity: int, var_degree: int, form_degree: int
) -> PowerBlock:
    if not window.is_trivial:
        witnesses = check_window_stability(ctx, window, var_degree, form_degree)
        if witnesses:
            msg = f"the braiding does not descend to {window.describe()}: {witnesses[0]}"
            raise UnstableWindowError(msg, witnesses)
    basis = enumerate_label_tuples(
        ctx, arity, var_degree, form_degree, accept=lambda label: window.accepts(ctx, label)
    )
    logger.debug("power block n=%d d=%d f=%d has dimension %d", arity, var_degree, form_degree, len(basis))
    return PowerBlock(ctx, arity, var_degree, form_degree, basis, window)


def sigma_matrix(block: PowerBlock, i: int, which: str = "closed") -> BlockMatrix:
    """The matrix of R acting on factors i and i + 1 (counting from 1)."""
    if not 1 <= i < block.arity:
        msg = f"sigma_{i} is not a generator of the braid group on {block.arity} strands"
        raise ValueError(msg)
    key = (block.arity, block.basis, block.window, i, which)
    return block.ctx.memoized("sigma", key, lambda: _sigma_matrix(block, i, which))


def _sigma_matrix(block: PowerBlock, i: int, which: str) -> BlockMatrix:
    ctx = block.ctx
    images = []
    for labels in block.basis:
        image = apply_pair(TensorForm.basis(ctx, labels), i - 1, pair_map(which))
        kept = {
            image_labels: value
            for image_labels, value in image.terms.items()
            if not any(block.window.is_below(ctx, label) for label in image_labels)
        }
        images.append(TensorForm(ctx, block.arity, kept))
    return BlockMatrix.from_images(block, block, images)


def sigma_inverse(block: PowerBlock, i: int, which: str = "closed") -> BlockMatrix:
    return sigma_matrix(block, i, which).inverse()


@dataclass(frozen=True, eq=False)
class BlockRepresentation:
    block: PowerBlock
    which: str
    generators: tuple[BlockMatrix, ...]

    def generator(self, i: int) -> BlockMatrix:
        return self.generators[i - 1]

    def inverses(self) -> tuple[BlockMatrix, ...]:
        return tuple(generator.inverse() for generator in self.generators)


def representation(block: PowerBlock, which: str = "closed") -> BlockRepresentation:
    generators = tuple(sigma_matrix(block, i, which) for i in range(1, block.arity))
    return BlockRepresentation(block, which, generators)


def _blocks(
    ctx: AlgebraCtx, window: SubquotientSpec, arity: int, max_var_degree: int, max_form_degree: int
) -> Iterator[PowerBlock]:
    var_degrees = [0] if ctx.collapsed else range(max_var_degree + 1)
    for var_degree in var_degrees:
        for form_degree in range(max_form_degree + 1):
            block = enumerate_block(ctx, window, arity, var_degree, form_degree)
            if block.dimension:
                yield block


def verify_braid_relations(
    ctx: AlgebraCtx, window: SubquotientSpec, arity: int, max_var_degree: int, max_form_degree: int
) -> VerificationReport:
    recorder = CheckRecorder("braidrep")
    for block in _blocks(ctx, window, arity, max_var_degree, max_form_degree):
        sigmas = representation(block).generators
        for index, sigma in enumerate(sigmas, start=1):
            try:
                inverse = sigma.inverse()
            except SingularBlockError as error:
                recorder.fail("invertible", block.describe(), f"sigma_{index}", "invertible", error)
            else:
                identity = (sigma @ inverse).is_identity()
                recorder.compare("invertible", block.describe(), f"sigma_{index}", True, identity)
        for index in range(len(sigmas) - 1):
            left = sigmas[index] @ sigmas[index + 1] @ sigmas[index]
            right = sigmas[index + 1] @ sigmas[index] @ sigmas[index + 1]
            witness = f"sigma_{index + 1} sigma_{index + 2} sigma_{index + 1}"
            recorder.compare("braid", block.describe(), witness, left, right)
        for first in range(len(sigmas)):
            for second in range(first + 2, len(sigmas)):
                witness = f"sigma_{first + 1} sigma_{second + 1}"
                recorder.compare(
                    "far_commute",
                    block.describe(),
                    witness,
                    sigmas[first] @ sigmas[second],
                    sigmas[second] @ sigmas[first],
                )
    report = recorder.report()
    logger.info("braid relations on %d strands: %d checks, %d failures", arity, report.checked, report.failed)
    return report


def verify_involution(
    ctx: AlgebraCtx, window: SubquotientSpec, arity: int, max_var_degree: int, max_form_degree: int
) -> VerificationReport:
    """Check that every generator squares to the identity, as it must when alpha is an involution."""
    if not ctx.endo.is_involution:
        msg = f"alpha = {ctx.endo.describe()} does not square to the identity"
        raise PreconditionError(msg)
    recorder = CheckRecorder("involution")
    for block in _blocks(ctx, window, arity, max_var_degree, max_form_degree):
        for index, sigma in enumerate(representation(block).generators, start=1):
            recorder.compare("involution", block.describe(), f"sigma_{index}^2", True, (sigma @ sigma).is_identity())
    return recorder.report()


def verify_oracle_matrices(
    ctx: AlgebraCtx, window: SubquotientSpec, arity: int, max_var_degree: int, max_form_degree: int
) -> VerificationReport:
    recorder = CheckRecorder("oracle_matrices")
    for block in _blocks(ctx, window, arity, max_var_degree, max_form_degree):
        for i in range(1, arity):
            recorder.compare(
                "oracle_matrices",
                block.describe(),
                f"sigma_{i}",
                sigma_matrix(block, i, "closed"),
                sigma_matrix(block, i, "oracle"),
            )
    return recorder.report()


# -- export ------------------------------------------------------------------------------------------------------------


def export_matrices(rep: BlockRepresentation, path: Path | str, fmt: str = "json") -> Path:
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(_json_document(rep), indent=2) + "\n", encoding="utf-8")
    elif fmt == "csv":
        _csv_table(rep).to_csv(path, index=False)
    else:
        msg = f"unknown export format {fmt!r}, expected 'json' or 'csv'"
        raise ExportError(msg)
    logger.info("wrote %d generator(s) of block %s to %s", len(rep.generators), rep.block.describe(), path)
    return path


def _basis_names(block: PowerBlock) -> list[str]:
    return [block.format_labels(labels) for labels in block.basis]


def _json_document(rep: BlockRepresentation) -> dict[str, object]:
    block = rep.block
    field_spec = block.ctx.field_spec
    document: dict[str, object] = {
        "block": {"arity": block.arity, "var_degree": block.var_degree, "form_degree": block.form_degree},
        "window": block.window.describe(),
        "field": field_spec.describe(),
        "variables": list(block.ctx.variables),
        "braiding": rep.which,
        "dimension": block.dimension,
        "basis": _basis_names(block),
        "generators": {
            f"sigma_{i}": [[field_spec.format(value) for value in row] for row in generator.entries()]
            for i, generator in enumerate(rep.generators, start=1)
        },
    }
    if field_spec.kind is FieldKind.RATIONAL_FUNCTIONS:
        coefficients = {}
        for i, generator in enumerate(rep.generators, start=1):
            rows = []
            for row in generator.entries():
                cells = []
                for value in row:
                    numerator, denominator = field_spec.fraction_parts(value)
                    cells.append(
                        {"numerator": [str(c) for c in numerator], "denominator": [str(c) for c in denominator]}
                    )
                rows.append(cells)
            coefficients[f"sigma_{i}"] = rows
        document["coefficients"] = coefficients
    return document


def _csv_table(rep: BlockRepresentation) -> pd.DataFrame:
    field_spec = rep.block.ctx.field_spec
    names = _basis_names(rep.block)
    records = []
    for i, generator in enumerate(rep.generators, start=1):
        for row, values in enumerate(generator.entries()):
            for column, value in enumerate(values):
                if not field_spec.is_constant(value):
                    msg = f"sigma_{i} has the non-constant entry {field_spec.format(value)}; export it as json"
                    raise ExportError(msg)
                records.append((f"sigma_{i}", names[row], names[column], field_spec.format(value)))
    return pd.DataFrame(records, columns=["Generator", "Row", "Column", "Entry"])
