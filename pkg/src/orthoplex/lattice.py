"""Hypercubic lattice cells in doubled integer coordinates.

A cell is a tuple of ints: an even entry ``2x`` is the integer coordinate
``x``, an odd entry ``2x + 1`` is the half-integer ``x + 1/2``.  The cell's
dimension is the number of odd entries, and the odd axes are the directions
it extends along.  On a periodic axis of extent ``L`` coordinates live in
``[0, 2L)``; on an open axis in ``[0, 2L - 2]`` (``L`` vertices, ``L - 1``
links), matching the open repetition complex.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

Cell = tuple[int, ...]

AXIS_NAMES = "xyzwuv"


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class LatticeShape:
    sizes: tuple[int, ...]
    periodic: tuple[bool, ...]

    def __init__(self, sizes: Sequence[int], periodic: bool | Sequence[bool] = True):
        sizes = tuple(int(s) for s in sizes)
        if isinstance(periodic, bool):
            periodic = (periodic,) * len(sizes)
        periodic = tuple(bool(f) for f in periodic)
        if len(periodic) != len(sizes):
            raise ValueError("sizes and periodic flags differ in length")
        for L, per in zip(sizes, periodic):
            if L < 1 or (per and L < 2):
                raise ValueError(f"extent {L} too small ({'periodic' if per else 'open'})")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "periodic", periodic)

    @property
    def p(self) -> int:
        return len(self.sizes)

    @property
    def fully_periodic(self) -> bool:
        return all(self.periodic)

    def extent(self, axis: int) -> int:
        """Number of doubled coordinate values along ``axis``."""
        L = self.sizes[axis]
        return 2 * L if self.periodic[axis] else 2 * L - 1

    def canonical(self, cell: Iterable[int]) -> Cell | None:
        """Wrap periodic axes; ``None`` if the cell falls off an open axis."""
        out = []
        for c, L, per in zip(cell, self.sizes, self.periodic):
            if per:
                out.append(c % (2 * L))
            elif 0 <= c <= 2 * L - 2:
                out.append(c)
            else:
                return None
        return tuple(out)

    def contains(self, cell: Cell) -> bool:
        return len(cell) == self.p and self.canonical(cell) == tuple(cell)


def dimension(cell: Cell) -> int:
    return sum(c & 1 for c in cell)


def axes(cell: Cell) -> tuple[int, ...]:
    """Axes along which the cell extends."""
    return tuple(i for i, c in enumerate(cell) if c & 1)


def to_real(cell: Cell) -> tuple[Fraction, ...]:
    return tuple(Fraction(c, 2) for c in cell)


def from_real(coords: Iterable) -> Cell:
    out = []
    for v in coords:
        d = Fraction(v) * 2
        if d.denominator != 1:
            raise ValueError(f"{v} is not a multiple of 1/2")
        out.append(int(d))
    return tuple(out)


def shift(cell: Cell, axis: int, step: int) -> Cell:
    """Move ``step`` doubled units along ``axis`` (``step=1`` is half a lattice constant)."""
    return cell[:axis] + (cell[axis] + step,) + cell[axis + 1 :]


def neighbors(cell: Cell, shape: LatticeShape) -> list[Cell]:
    """The cells ``cell +- x_mu / 2`` for every axis, in axis order (minus first)."""
    out = []
    for mu in range(shape.p):
        for step in (-1, 1):
            nb = shape.canonical(shift(cell, mu, step))
            if nb is not None:
                out.append(nb)
    return out


def enumerate_cells(
    shape: LatticeShape,
    dim: int,
    orientation: Callable[[tuple[int, ...]], bool] | None = None,
) -> list[Cell]:
    """All ``dim``-cells whose extension axes pass ``orientation``, lexicographic."""
    if dim < 0 or dim > shape.p:
        return []
    ranges = [range(shape.extent(mu)) for mu in range(shape.p)]
    out = []
    for cell in itertools.product(*ranges):
        if dimension(cell) != dim:
            continue
        if orientation is not None and not orientation(axes(cell)):
            continue
        out.append(cell)
    return out


def all_cells(shape: LatticeShape) -> list[Cell]:
    return list(itertools.product(*(range(shape.extent(mu)) for mu in range(shape.p))))


def extends_along(*axis_set: int) -> Callable[[tuple[int, ...]], bool]:
    """Orientation filter matching cells extending along exactly ``axis_set``."""
    target = tuple(sorted(axis_set))
    return lambda ax: tuple(ax) == target


def cell_of_label(label: Sequence[int], shape: LatticeShape) -> Cell:
    """Cell for a basis label of a product of repetition complexes on ``shape``."""
    cell = tuple(int(v) for v in label)
    if len(cell) != shape.p or not shape.contains(cell):
        raise ShapeMismatch(f"label {label} does not fit shape {shape.sizes}")
    return cell


def label_of_cell(cell: Cell, shape: LatticeShape) -> tuple[int, ...]:
    if not shape.contains(tuple(cell)):
        raise ShapeMismatch(f"cell {cell} not in shape {shape.sizes}")
    return tuple(cell)


def signature_of(cell: Cell) -> tuple[int, ...]:
    """Summand signature (per-axis degree) of the basis element for ``cell``."""
    return tuple(c & 1 for c in cell)


def format_cell(cell: Cell) -> str:
    """Human-readable real coordinates, e.g. ``(1/2, 0, 0)``."""
    return "(" + ", ".join(str(Fraction(c, 2)) for c in cell) + ")"


__all__ = [
    "AXIS_NAMES",
    "Cell",
    "LatticeShape",
    "ShapeMismatch",
    "all_cells",
    "axes",
    "cell_of_label",
    "dimension",
    "enumerate_cells",
    "extends_along",
    "format_cell",
    "from_real",
    "label_of_cell",
    "neighbors",
    "shift",
    "signature_of",
    "to_real",
]
