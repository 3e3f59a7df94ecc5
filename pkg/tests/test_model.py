import numpy as np
import pytest

from orthoplex.hgpgen import InvalidDimension, code_params, orthoplex_partition
from orthoplex.lattice import LatticeShape, dimension
from orthoplex.model import (
    build_hgp_orthoplex,
    build_model,
    cross_validate,
    duality_shift,
    self_duality_holds,
    translate,
)


def test_3d_counts_per_vertex():
    m = build_model(LatticeShape((3, 3, 3)))
    V = 27
    assert (m.n, len(m.x_cells), len(m.z_cells)) == (4 * V, 2 * V, 2 * V)
    assert sorted({tuple(c & 1 for c in x) for x in m.x_cells}) == [(0, 1, 1), (1, 0, 1)]
    assert sorted({tuple(c & 1 for c in z) for z in m.z_cells}) == [(0, 0, 0), (1, 1, 0)]


@pytest.mark.parametrize("sizes", [(2, 2, 2), (3, 2, 4), (2, 2, 2, 2), (3, 3), (2, 2, 2, 2, 2)])
def test_rules_and_weights(sizes):
    m = build_model(LatticeShape(sizes))
    p = len(sizes)
    assert all(dimension(q) % 2 for q in m.qubit_cells)
    assert all(x[-1] & 1 and dimension(x) % 2 == 0 for x in m.x_cells)
    assert all(not z[-1] & 1 and dimension(z) % 2 == 0 for z in m.z_cells)
    assert set(m.code.hx.row_weights()) == {2 * p}
    assert set(m.code.hz.row_weights()) == {2 * p}
    assert m.code.is_css()


def test_4d_stabilizers_touch_eight():
    m = build_model(LatticeShape((2, 2, 2, 2)))
    assert m.n == 128
    assert len(m.stabilizer_support(m.x_cells[0])) == 8


def test_open_boundaries_truncate():
    m = build_model(LatticeShape((3, 3, 3), False))
    w = np.concatenate([m.code.hx.row_weights(), m.code.hz.row_weights()])
    assert w.min() < 6 and w.max() == 6
    assert m.code.is_css()
    assert m.z_index((0, 0, 0)) == 0 and len(m.stabilizer_support((0, 0, 0))) == 3


def test_dimension_one_rejected():
    with pytest.raises(InvalidDimension):
        build_model(LatticeShape((4,)))


@pytest.mark.parametrize("sizes", [(2, 2, 2), (2, 2, 2, 2), (3, 2, 4), (3, 3)])
def test_cross_validation(sizes):
    m = build_model(LatticeShape(sizes))
    report = cross_validate(m)
    assert report.ok and report.hx_equal and report.hz_equal


def test_cross_validation_negative_control():
    m = build_model(LatticeShape((2, 2, 2)))
    report = cross_validate(m, orthoplex_partition(3).swapped())
    assert not report.ok
    assert report.mismatched_x or not report.labels_match


def test_product_build_matches_params():
    for sizes in [(2, 3, 4), (4, 4, 4)]:
        shape = LatticeShape(sizes)
        assert code_params(build_hgp_orthoplex(shape)) == code_params(build_model(shape).code)


@pytest.mark.parametrize("sizes", [(2, 2, 2), (4, 2, 4), (2, 2, 2, 2)])
def test_self_duality(sizes):
    m = build_model(LatticeShape(sizes))
    assert self_duality_holds(m)


def test_body_diagonal_half_shift_is_not_a_duality():
    m = build_model(LatticeShape((2, 2, 2)))
    assert duality_shift(3) == (1, 0, 1)
    assert not self_duality_holds(m, (1, 1, 1))


def test_translate_and_canonical():
    m = build_model(LatticeShape((2, 2, 2)))
    assert translate((0, 0, 0), (1, 0, 1)) == (1, 0, 1)
    assert m.canonical((5, -1, 4)) == (1, 3, 0)
    assert m.is_qubit((1, 0, 0)) and m.is_x_cell((1, 0, 1)) and m.is_z_cell((1, 1, 0))
    with pytest.raises(KeyError):
        build_model(LatticeShape((2, 2, 2), False)).qubit_index((5, 0, 0))
