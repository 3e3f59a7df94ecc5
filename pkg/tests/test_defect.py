import pytest

from orthoplex.defect import (
    E_TYPE,
    M_TYPE,
    PathDoesNotEncircle,
    ShapeTooSmall,
    braid_planon,
    build_dislocation,
    dipole_cells,
    loop_path,
    planon_state,
    winding_number,
)
from orthoplex.lattice import LatticeShape

OPEN6 = LatticeShape((6, 6, 6), False)


@pytest.fixture(scope="module")
def dm():
    return build_dislocation(OPEN6)


def test_cut_geometry(dm):
    for q in dm.removed:
        u = dm.local(q)
        assert u[0] + u[1] - u[2] == 1 and u[2] <= -1
    assert all(dm.local(q)[2] == -1 for q in dm.line)
    assert not set(dm.qubits) & dm.removed


def test_generators_commute(dm):
    assert dm.all_commute()


def test_no_support_on_removed(dm):
    for g in dm.generators:
        assert not (set(g.x_cells) | set(g.z_cells)) & dm.removed


def test_mixed_generators_are_stretched_orthoplexes(dm):
    mixed = [g for g in dm.generators if g.mixed]
    assert mixed
    far = [
        g for g in mixed
        if all(0 < v < 10 for c in g.origin for v in c) and dm.local(g.origin[0])[2] <= -3
    ]
    assert far
    for g in far:
        assert len(g.x_cells) == 3 and len(g.z_cells) == 3
    # a far pair is glued across the cut: its two halves sit on opposite sides
    for g in mixed:
        a, b = (dm.local(c) for c in g.origin)
        sa, sb = a[0] + a[1] - a[2], b[0] + b[1] - b[2]
        assert {sa, sb} == {0, 2}


def test_untouched_terms_have_full_weight(dm):
    touched = {c for g in dm.generators if g.mixed for c in g.origin} | dm.dropped
    interior = [
        g for g in dm.generators
        if not g.mixed and all(1 <= v <= 9 for v in g.origin[0]) and g.origin[0] not in touched
    ]
    assert interior and all(len(g.x_cells) + len(g.z_cells) == 6 for g in interior)


def test_zero_modes(dm):
    rep = dm.report()
    assert rep["zero_mode_count"] == dm.zero_modes > 0
    assert rep["generator_count"] == len(dm.generators)
    assert rep["all_commute"]
    assert dm.symplectic_rank() <= len(dm.generators)


@pytest.mark.parametrize(
    "shape", [LatticeShape((5, 6, 6), False), LatticeShape((6, 6, 6)), LatticeShape((6, 6), False)]
)
def test_shape_too_small(shape):
    with pytest.raises(ShapeTooSmall):
        build_dislocation(shape)


def test_larger_lattice_commutes():
    assert build_dislocation(LatticeShape((7, 6, 8), False)).all_commute()


def test_dipole_states(dm):
    e = planon_state(dm, E_TYPE, (1, 1, 2))
    m = planon_state(dm, M_TYPE, (1, 1, 2))
    assert {dm.generators[g].kind for g in e} == {"B"}
    assert {dm.generators[g].kind for g in m} == {"A"}
    assert dipole_cells(M_TYPE, (0, 0, 0)) == ((1, 0, 1), (2, -1, 1))


def test_winding_numbers():
    assert winding_number(loop_path(-4, 2, -2, 1, 1)) == 1
    assert winding_number(loop_path(-4, 2, -2, 1, 2)) == 2
    assert winding_number(loop_path(-4, 2, -2, 1, -1)) == -1
    assert winding_number(loop_path(0, 2, 1, 2, 1)) == 0


def test_winding_one_swaps(dm):
    v = braid_planon(dm, loop_path(-4, 2, -2, 1, 1))
    assert v.winding == 1 and v.crossings == 1
    assert (v.type_before, v.type_after) == (E_TYPE, M_TYPE)
    assert v.pure_x_leaves_residual and v.transport_clean


def test_winding_two_restores(dm):
    v = braid_planon(dm, loop_path(-4, 2, -2, 1, 2))
    assert v.crossings == 2 and not v.swapped and v.transport_clean


def test_swap_is_an_involution(dm):
    # two consecutive single circuits act like one double circuit
    once = braid_planon(dm, loop_path(-4, 2, -2, 1, 1))
    back = braid_planon(dm, loop_path(-4, 2, -2, 1, 1), kind=once.type_after)
    assert back.type_after == once.type_before


def test_winding_zero_is_trivial(dm):
    v = braid_planon(dm, loop_path(0, 2, 1, 2, 1))
    assert v.winding == 0 and not v.swapped and v.crossings == 0
    assert v.transport_clean and v.closed_syndrome_free
    assert not v.pure_x_leaves_residual


def test_bad_paths(dm):
    with pytest.raises(PathDoesNotEncircle):
        braid_planon(dm, [(0, 0, 0), (1, 1, 0)])
    with pytest.raises(PathDoesNotEncircle):
        braid_planon(dm, [(1, 1, 2), (3, 3, 2), (1, 1, 2)])
    with pytest.raises(PathDoesNotEncircle):
        loop_path(1, 2, 0, 1)
