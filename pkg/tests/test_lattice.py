import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthoplex.lattice import (
    LatticeShape,
    ShapeMismatch,
    all_cells,
    cell_of_label,
    dimension,
    enumerate_cells,
    extends_along,
    format_cell,
    from_real,
    label_of_cell,
    neighbors,
    signature_of,
    to_real,
)


def test_link_neighbors():
    shape = LatticeShape((3, 3, 3))
    got = set(neighbors((1, 0, 0), shape))
    want = {(0, 0, 0), (2, 0, 0), (1, 5, 0), (1, 1, 0), (1, 0, 5), (1, 0, 1)}
    assert got == want
    assert sorted(dimension(c) for c in got) == [0, 0, 2, 2, 2, 2]


def test_open_vertex_neighbors():
    assert neighbors((0, 0, 0), LatticeShape((3, 3, 3), False)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


@given(st.lists(st.integers(2, 4), min_size=1, max_size=4), st.data())
def test_periodic_neighbor_laws(sizes, data):
    shape = LatticeShape(sizes)
    cell = tuple(data.draw(st.integers(0, 2 * L - 1)) for L in sizes)
    nbs = neighbors(cell, shape)
    assert len(nbs) == 2 * shape.p
    for nb in nbs:
        assert abs(dimension(nb) - dimension(cell)) == 1
        assert cell in neighbors(nb, shape)


def test_enumeration_counts():
    assert len(enumerate_cells(LatticeShape((2, 2, 2)), 2, extends_along(0, 1))) == 8
    assert len(enumerate_cells(LatticeShape((2,) * 4), 1)) == 64
    assert enumerate_cells(LatticeShape((2, 2)), 3) == []


def test_open_extent():
    shape = LatticeShape((3, 2), (False, True))
    assert shape.extent(0) == 5 and shape.extent(1) == 4
    assert shape.canonical((5, 0)) is None
    assert shape.canonical((4, -1)) == (4, 3)


def test_bad_shapes():
    with pytest.raises(ValueError):
        LatticeShape((1, 3))
    with pytest.raises(ValueError):
        LatticeShape((3, 3), (True,))


def test_label_bijection():
    shape = LatticeShape((2, 2, 2))
    for cell in all_cells(shape):
        assert cell_of_label(label_of_cell(cell, shape), shape) == cell
    assert cell_of_label((3, 0, 2), shape) == (3, 0, 2)
    assert signature_of((3, 0, 2)) == (1, 0, 0)
    assert signature_of((0, 0, 0)) == (0, 0, 0)
    with pytest.raises(ShapeMismatch):
        cell_of_label((4, 0, 0), shape)


def test_real_coordinates():
    assert to_real((1, 2)) == (0.5, 1)
    assert from_real(("1/2", 3)) == (1, 6)
    assert format_cell((1, 0, 3)) == "(1/2, 0, 3/2)"
    with pytest.raises(ValueError):
        from_real(["1/3"])


def test_cell_order_is_lexicographic():
    cells = all_cells(LatticeShape((2, 2)))
    assert cells == sorted(cells) == list(itertools.product(range(4), range(4)))
