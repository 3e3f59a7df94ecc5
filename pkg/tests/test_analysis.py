from math import gcd

import pytest

from orthoplex.analysis import (
    NonClosingPath,
    check_string_logical,
    gsd_csv,
    gsd_record,
    gsd_scan,
    in_logical_span,
    logical_basis,
    predicted_k,
    string_cells,
)
from orthoplex.chaincx import LabeledBasis, repetition_complex
from orthoplex.f2core import BitMatrix
from orthoplex.hgpgen import CssCode, build_css, standard_hgp_partition
from orthoplex.lattice import LatticeShape
from orthoplex.model import build_model
from orthoplex.pauli import PauliOp


def model(*sizes):
    return build_model(LatticeShape(sizes))


def test_toric_logicals():
    code = build_css([repetition_complex(3)] * 2, standard_hgp_partition(2, 1))
    ls = logical_basis(code)
    assert ls.k == len(ls.z_logicals) == 2
    assert ls.pairing_full_rank()


def test_orthoplex_333_logicals():
    ls = logical_basis(model(3, 3, 3).code)
    assert ls.k == 12 and ls.pairing_full_rank()


def test_empty_code_logicals():
    z = BitMatrix.zeros(0, 4)
    code = CssCode(z, z, LabeledBasis(range(4)), LabeledBasis([]), LabeledBasis([]))
    ls = logical_basis(code)
    assert ls.k == 4
    assert sorted(tuple(op.x.support()) for op in ls.x_logicals) == [(0,), (1,), (2,), (3,)]


@pytest.mark.parametrize("sizes", [(2, 2, 2), (4, 6, 3), (4, 4, 4), (2, 3, 2, 2)])
def test_logicals_are_certified(sizes):
    code = model(*sizes).code
    ls = logical_basis(code)
    for op in ls.x_logicals:
        assert not code.hz.mul_vec(op.x).any()
    for op in ls.z_logicals:
        assert not code.hx.mul_vec(op.z).any()
    assert ls.pairing_full_rank()


@pytest.mark.parametrize(
    "sizes,k", [((4, 4, 4), 16), ((3, 4, 4), 4), ((5, 4, 4), 4), ((6, 4, 2), 8)]
)
def test_gsd_examples(sizes, k):
    r = gsd_record(LatticeShape(sizes))
    assert r.k == k and r.predicted == k and r.match


def test_law_independent_of_lz():
    for lx, ly in [(2, 4), (3, 6), (4, 6)]:
        ks = {gsd_record(LatticeShape((lx, ly, lz))).k for lz in (2, 3, 5)}
        assert ks == {4 * gcd(lx, ly)}


def test_scan_sorted_and_threaded():
    shapes = [LatticeShape(s) for s in [(3, 2, 2), (2, 2, 3), (2, 3, 2)]]
    serial = gsd_scan(shapes)
    assert [r.sizes for r in serial] == sorted(r.sizes for r in serial)
    assert gsd_scan(reversed(shapes), workers=3) == serial


def test_csv_export():
    text = gsd_csv(gsd_scan([LatticeShape((2, 2, 2))]))
    assert text.splitlines() == ["lx,ly,lz,n,k,predicted,match", "2,2,2,32,8,8,true"]


def test_4d_has_no_prediction():
    r = gsd_record(LatticeShape((2, 2, 2, 2)))
    assert predicted_k((2, 2, 2, 2)) is None and r.match is None and r.k > 0


def test_scan_rejects_open_shapes():
    with pytest.raises(ValueError):
        gsd_record(LatticeShape((2, 2, 2), False))


@pytest.mark.parametrize(
    "sizes,kind",
    [((3, 3, 3), "vertical-z"), ((4, 4, 4), "diagonal-plus"), ((4, 4, 4), "diagonal-minus"),
     ((2, 3, 2), "diagonal-plus"), ((4, 6, 3), "vertical-z")],
)
def test_string_logicals(sizes, kind):
    m = model(*sizes)
    v = check_string_logical(m, kind, (0, 0, 0))
    assert v.commutes and v.outside_rowspace and v.is_logical
    twice = check_string_logical(m, kind, (0, 0, 0), repeat=2)
    assert twice.commutes and not twice.outside_rowspace
    op = PauliOp.from_cells(m, x=v.cells)
    assert in_logical_span(m.code, op.x, logical_basis(m.code))


def test_diagonal_wraps_lcm():
    cells, wraps = string_cells(model(2, 3, 2), "diagonal-plus", (0, 0, 0))
    assert len(cells) == 12 and wraps == (3, 2, 0)


def test_string_errors():
    with pytest.raises(NonClosingPath):
        check_string_logical(build_model(LatticeShape((3, 3, 3), (True, True, False))), "vertical-z", (0, 0, 0))
    with pytest.raises(ValueError):
        check_string_logical(model(3, 3, 3), "vertical-z", (1, 0, 0))
    with pytest.raises(ValueError):
        check_string_logical(model(3, 3, 3), "helix", (0, 0, 0))
