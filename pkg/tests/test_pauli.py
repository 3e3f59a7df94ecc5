import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthoplex.lattice import LatticeShape
from orthoplex.model import build_model
from orthoplex.pauli import LengthMismatch, PauliOp

N = 9
supports = st.sets(st.integers(0, N - 1))


@given(supports, supports, supports, supports)
def test_commutation_is_symplectic(ax, az, bx, bz):
    a, b = PauliOp.from_indices(N, ax, az), PauliOp.from_indices(N, bx, bz)
    overlap = len(ax & bz) + len(az & bx)
    assert a.commutes_with(b) == (overlap % 2 == 0)
    assert a.commutes_with(b) == b.commutes_with(a)
    assert (a * b) * b == a


def test_weight_counts_y_once():
    op = PauliOp.from_indices(4, x=[0, 1], z=[1, 2])
    assert op.weight() == 3
    assert PauliOp.identity(4).is_identity()


def test_repeated_cells_cancel():
    m = build_model(LatticeShape((2, 2, 2)))
    op = PauliOp.from_cells(m, x=[(1, 0, 0), (1, 0, 0), (0, 1, 0)])
    assert op.x_cells(m) == [(0, 1, 0)]


def test_length_checks():
    with pytest.raises(LengthMismatch):
        PauliOp.identity(3) * PauliOp.identity(4)
    with pytest.raises(LengthMismatch):
        PauliOp(PauliOp.identity(3).x, PauliOp.identity(2).z)
