"""Orthoplex models built from the lattice cell rule.

Qubits sit on odd-dimensional cells.  Even-dimensional cells carry
stabilizers: X-type if the cell extends along the last axis, Z-type
otherwise.  Each stabilizer acts on the qubits at ``cell +- x_mu / 2``,
which are the 2p vertices of an orthoplex around the stabilizer cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chaincx import LabeledBasis, repetition_complex
from .f2core import BitMatrix
from .hgpgen import CssCode, InvalidDimension, Partition, build_css, orthoplex_partition
from .lattice import Cell, LatticeShape, all_cells, cell_of_label, dimension, neighbors, shift


@dataclass(frozen=True, eq=False)
class OrthoplexModel:
    shape: LatticeShape
    code: CssCode
    qubit_cells: tuple[Cell, ...]
    x_cells: tuple[Cell, ...]
    z_cells: tuple[Cell, ...]
    _qidx: dict = field(repr=False, default_factory=dict)
    _xidx: dict = field(repr=False, default_factory=dict)
    _zidx: dict = field(repr=False, default_factory=dict)

    @property
    def p(self) -> int:
        return self.shape.p

    @property
    def n(self) -> int:
        return len(self.qubit_cells)

    def qubit_index(self, cell: Cell) -> int:
        return self._qidx[self._canon(cell)]

    def x_index(self, cell: Cell) -> int:
        return self._xidx[self._canon(cell)]

    def z_index(self, cell: Cell) -> int:
        return self._zidx[self._canon(cell)]

    def is_qubit(self, cell: Cell) -> bool:
        c = self.shape.canonical(cell)
        return c is not None and c in self._qidx

    def is_x_cell(self, cell: Cell) -> bool:
        c = self.shape.canonical(cell)
        return c is not None and c in self._xidx

    def is_z_cell(self, cell: Cell) -> bool:
        c = self.shape.canonical(cell)
        return c is not None and c in self._zidx

    def canonical(self, cell: Cell) -> Cell:
        return self._canon(cell)

    def _canon(self, cell: Cell) -> Cell:
        c = self.shape.canonical(cell)
        if c is None:
            raise KeyError(f"cell {cell} outside the lattice")
        return c

    def stabilizer_support(self, cell: Cell) -> list[Cell]:
        """Qubit cells acted on by the stabilizer at ``cell``."""
        return [nb for nb in neighbors(self._canon(cell), self.shape) if nb in self._qidx]


def build_model(shape: LatticeShape) -> OrthoplexModel:
    """Instantiate the orthoplex model on ``shape`` directly from cell rules."""
    if shape.p < 2:
        raise InvalidDimension(f"p={shape.p} < 2")
    last = shape.p - 1
    qubits, xs, zs = [], [], []
    for cell in all_cells(shape):
        if dimension(cell) % 2:
            qubits.append(cell)
        elif cell[last] & 1:
            xs.append(cell)
        else:
            zs.append(cell)
    qidx = {c: i for i, c in enumerate(qubits)}

    def checks(cells):
        return BitMatrix.from_supports(
            len(qubits), [[qidx[nb] for nb in neighbors(c, shape)] for c in cells]
        )

    code = CssCode(
        hx=checks(xs),
        hz=checks(zs),
        qubit_labels=LabeledBasis(qubits),
        x_labels=LabeledBasis(xs),
        z_labels=LabeledBasis(zs),
        meta={"model": f"orthoplex-{shape.p}d", "sizes": shape.sizes, "periodic": shape.periodic},
    )
    return OrthoplexModel(
        shape=shape,
        code=code,
        qubit_cells=tuple(qubits),
        x_cells=tuple(xs),
        z_cells=tuple(zs),
        _qidx=qidx,
        _xidx={c: i for i, c in enumerate(xs)},
        _zidx={c: i for i, c in enumerate(zs)},
    )


def build_hgp_orthoplex(shape: LatticeShape, partition: Partition | None = None) -> CssCode:
    """Same model via the generalized product construction (periodic inputs)."""
    if not shape.fully_periodic:
        raise ValueError("product construction uses periodic repetition complexes")
    part = partition or orthoplex_partition(shape.p)
    return build_css([repetition_complex(L, True) for L in shape.sizes], part, check=False)


@dataclass(frozen=True)
class CrossValidation:
    ok: bool
    labels_match: bool
    hx_equal: bool
    hz_equal: bool
    mismatched_x: tuple[Cell, ...] = ()
    mismatched_z: tuple[Cell, ...] = ()


def _rows_as_cell_sets(h: BitMatrix, qubit_labels) -> list[frozenset]:
    return [frozenset(qubit_labels[j] for j in sup) for sup in h.row_supports()]


def cross_validate(model: OrthoplexModel, partition: Partition | None = None) -> CrossValidation:
    """Compare the lattice-rule code with the product-rule code cell by cell.

    The product code's labels are mapped to cells and its matrices permuted
    into the model's order; equality is then bitwise.  Mismatched stabilizer
    cells are listed (rows present in one code but not the other count too).
    """
    other = build_hgp_orthoplex(model.shape, partition)
    shape = model.shape
    q_cells = [cell_of_label(l, shape) for l in other.qubit_labels]
    x_cells = [cell_of_label(l, shape) for l in other.x_labels]
    z_cells = [cell_of_label(l, shape) for l in other.z_labels]
    labels_match = (
        set(q_cells) == set(model.qubit_cells)
        and set(x_cells) == set(model.x_cells)
        and set(z_cells) == set(model.z_cells)
    )

    def compare(h_model, cells_model, h_other, cells_other):
        mine = dict(zip(cells_model, _rows_as_cell_sets(h_model, model.qubit_cells)))
        theirs = dict(zip(cells_other, _rows_as_cell_sets(h_other, q_cells)))
        bad = sorted(c for c in set(mine) | set(theirs) if mine.get(c) != theirs.get(c))
        equal = False
        if labels_match:
            pos = {c: i for i, c in enumerate(q_cells)}
            qperm = np.array([pos[c] for c in model.qubit_cells], dtype=np.int64)
            rpos = {c: i for i, c in enumerate(cells_other)}
            rperm = np.array([rpos[c] for c in cells_model], dtype=np.int64)
            permuted = h_other.select_rows(rperm).select_cols(qperm)
            equal = permuted == h_model
        return equal, tuple(bad)

    hx_eq, bad_x = compare(model.code.hx, model.x_cells, other.hx, x_cells)
    hz_eq, bad_z = compare(model.code.hz, model.z_cells, other.hz, z_cells)
    return CrossValidation(
        ok=labels_match and hx_eq and hz_eq and not bad_x and not bad_z,
        labels_match=labels_match,
        hx_equal=hx_eq,
        hz_equal=hz_eq,
        mismatched_x=bad_x,
        mismatched_z=bad_z,
    )


def duality_shift(p: int) -> Cell:
    """Half-translation along the first and last axes (doubled units).

    It flips the parity of the last coordinate while preserving cell-dimension
    parity, so it exchanges X- and Z-stabilizer cells and maps qubits to
    qubits.
    """
    s = [0] * p
    s[0] += 1
    s[-1] += 1
    return tuple(s)


def self_duality_holds(model: OrthoplexModel, offset: Cell | None = None) -> bool:
    """Check that translating by ``offset`` and swapping X<->Z fixes the stabilizer set."""
    if not model.shape.fully_periodic:
        raise ValueError("duality check needs a fully periodic lattice")
    off = offset or duality_shift(model.p)

    def moved(cell):
        return model.canonical(tuple(c + o for c, o in zip(cell, off)))

    x_sets = {frozenset(moved(q) for q in model.stabilizer_support(c)) for c in model.x_cells}
    z_sets = {frozenset(model.stabilizer_support(c)) for c in model.z_cells}
    if x_sets != z_sets:
        return False
    z_moved = {frozenset(moved(q) for q in model.stabilizer_support(c)) for c in model.z_cells}
    x_sets_plain = {frozenset(model.stabilizer_support(c)) for c in model.x_cells}
    return z_moved == x_sets_plain


def translate(cell: Cell, offset: Cell) -> Cell:
    out = cell
    for axis, step in enumerate(offset):
        if step:
            out = shift(out, axis, step)
    return out


__all__ = [
    "CrossValidation",
    "OrthoplexModel",
    "build_hgp_orthoplex",
    "build_model",
    "cross_validate",
    "duality_shift",
    "self_duality_holds",
    "translate",
]
