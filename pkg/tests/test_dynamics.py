from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthoplex.analysis import logical_basis
from orthoplex.dynamics import (
    InvalidCell,
    MembraneSpec,
    OffsetOutOfRange,
    SpecOutOfRange,
    Syndrome,
    alignment_cancellation,
    chairon_residual,
    fragment_loop,
    free_axis,
    lineon_pair,
    membrane_cells,
    membrane_operator,
    mobility_survey,
    move_lineon,
    move_planon,
    octahedron_operator,
    planon_dipole,
    planon_orbit,
    planon_period,
    project_and_classify,
    segment_profile,
    single_x_syndrome,
    space_diagonal_check,
    stacking_reduction,
    syndrome,
    try_move,
    x_on,
)
from orthoplex.f2core import BitVector
from orthoplex.lattice import LatticeShape
from orthoplex.model import build_model
from orthoplex.pauli import LengthMismatch, PauliOp

M3 = build_model(LatticeShape((4, 4, 4)))
M4 = build_model(LatticeShape((4, 4, 4, 4)))
BIG = build_model(LatticeShape((6, 6, 6, 2)))


def random_op(model, rng):
    return PauliOp(
        BitVector.from_bits(rng.integers(0, 2, model.n).tolist()),
        BitVector.from_bits(rng.integers(0, 2, model.n).tolist()),
    )


# -- syndromes ---------------------------------------------------------


def test_identity_is_silent():
    assert not syndrome(M3, PauliOp.identity(M3.n))


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        syndrome(M3, PauliOp.identity(M3.n + 1))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_syndrome_is_linear(seed):
    rng = np.random.default_rng(seed)
    a, b = random_op(M3, rng), random_op(M3, rng)
    assert syndrome(M3, a * b) == syndrome(M3, a) ^ syndrome(M3, b)


def test_logicals_have_no_syndrome():
    ls = logical_basis(M3.code)
    for op in ls.x_logicals + ls.z_logicals:
        assert not syndrome(M3, op)


def test_single_x_in_4d_flips_six():
    syn = single_x_syndrome(M4, (1, 0, 0, 0))
    want = {(0, 0, 0, 0), (2, 0, 0, 0), (1, 1, 0, 0), (1, 7, 0, 0), (1, 0, 1, 0), (1, 0, 7, 0)}
    assert syn.violated_z == want and not syn.violated_x


def test_z_link_in_3d():
    syn = single_x_syndrome(M3, (0, 0, 1))
    assert syn.violated_z == {(0, 0, 0), (0, 0, 2)}


# -- membranes ---------------------------------------------------------


def test_membrane_stays_in_plane():
    spec = MembraneSpec.rectangle("x+y", 2, 3)
    for c in membrane_cells(BIG, spec):
        assert c[3] == 0 and (c[0] + c[1]) % 12 == 1


def test_degenerate_membrane_is_single_x():
    spec = MembraneSpec.single("x+z", (1, 0, 0, 0))
    assert syndrome(M4, membrane_operator(M4, spec)) == single_x_syndrome(M4, (1, 0, 0, 0))
    prof = segment_profile(M4, single_x_syndrome(M4, (1, 0, 0, 0)))
    assert prof.degenerate and not prof.segments


def test_spontaneous_orientation():
    a = MembraneSpec.single("x+z", (1, 0, 0, 0))
    b = MembraneSpec.single("x+y", (1, 0, 0, 0))
    assert syndrome(M4, membrane_operator(M4, a)) == syndrome(M4, membrane_operator(M4, b))
    a2 = MembraneSpec("x+z", 1, (0, 2), (0, 0))
    b2 = MembraneSpec("x+y", 1, (0, 2), (0, 0))
    assert syndrome(BIG, membrane_operator(BIG, a2)) != syndrome(BIG, membrane_operator(BIG, b2))


def test_membrane_errors():
    with pytest.raises(SpecOutOfRange):
        membrane_cells(M3, MembraneSpec.rectangle("x+y", 1, 1))
    with pytest.raises(SpecOutOfRange):
        membrane_cells(M4, MembraneSpec.rectangle("x+y", 5, 5))
    with pytest.raises(SpecOutOfRange):
        MembraneSpec.rectangle("x*y", 1, 1).frame


def test_octahedron():
    op = octahedron_operator(M4, (4, 4, 4, 0), 1)
    syn = syndrome(M4, op)
    assert op.weight() == 6 and syn.size == 6
    assert syn.violated_z == {
        tuple(4 + 2 * s * (i == mu) if i < 3 else 0 for i in range(4))
        for mu in range(3)
        for s in (-1, 1)
    }


@pytest.mark.parametrize("plane", ["x+y", "x+z"])
def test_rectangle_profile(plane):
    syn = syndrome(BIG, membrane_operator(BIG, MembraneSpec.rectangle(plane, 2, 3)))
    prof = segment_profile(BIG, syn)
    assert prof.counts == {"diagonal": 2, "vertical": 2}
    assert prof.vertical_per_unit() == 2
    assert prof.diagonal_per_step() == 1
    assert prof.density_ratio_sq() == 2


def test_two_by_two_rectangle_has_four_segments():
    syn = syndrome(BIG, membrane_operator(BIG, MembraneSpec.rectangle("x+y", 2, 2)))
    assert len(segment_profile(BIG, syn).segments) == 4


# -- chairons and space diagonals --------------------------------------


def test_chairon_residual():
    a = MembraneSpec.rectangle("x+y", 2, 2)
    b = MembraneSpec.rectangle("x-y", 2, 2)
    rep = chairon_residual(BIG, a, b)
    assert rep.nonempty and rep.displacements_differ
    assert rep.displacement_a == (F(-1, 2), F(-1, 2), 0)
    assert rep.displacement_b == (F(1, 2), F(-1, 2), 0)


def test_chairon_without_partner_keeps_boundary():
    a = MembraneSpec.rectangle("x+y", 2, 2)
    rep = chairon_residual(BIG, a, None)
    full = syndrome(BIG, membrane_operator(BIG, a))
    assert set(rep.residual) <= full.violated_z and rep.composite_size == full.size


@pytest.mark.parametrize(
    "pa,pb", [("x+y", "x+z"), ("x+y", "y+z"), ("x+z", "y+z")]
)
def test_space_diagonals_never_overlap(pa, pb):
    v = space_diagonal_check(BIG, MembraneSpec.right_triangle(pa, 1), MembraneSpec.right_triangle(pb, 1))
    assert v.no_finite_overlap


def test_space_diagonal_directions():
    v = space_diagonal_check(BIG, MembraneSpec.right_triangle("x+y", 1), MembraneSpec.right_triangle("x+z", 1))
    assert {v.direction_a, tuple(-d for d in v.direction_a)} & {(F(-1, 2), F(1, 2), 1)}
    assert {v.direction_b, tuple(-d for d in v.direction_b)} & {(F(-1, 2), 1, F(1, 2))}


def test_same_orientation_overlaps():
    t = MembraneSpec.right_triangle("x+y", 1)
    v = space_diagonal_check(BIG, t, t)
    assert v.parallel and v.shared_cells > 0


# -- lineons and planons -----------------------------------------------


def test_free_axes():
    assert free_axis(M3) == 2 and free_axis(M4) == 3


@pytest.mark.parametrize("model", [M3, M4])
def test_lineon_moves_only_along_free_axis(model):
    ax = free_axis(model)
    for out in mobility_survey(model, (0,) * model.p):
        if out.axis == ax:
            assert out.clean
        else:
            assert not out.clean and out.size_after >= out.size_before + 2


def test_move_lineon_errors():
    with pytest.raises(InvalidCell):
        move_lineon(M3, (1, 0, 0), 2)
    with pytest.raises(ValueError):
        move_lineon(M3, (0, 0, 0), 2, 2)
    _, syn = lineon_pair(M3, (0, 0, 0))
    with pytest.raises(InvalidCell):
        try_move(M3, syn, (2, 2, 2), 2, 1)


def test_planon_hop_and_orbit():
    anchor = (0, 0, 0)
    dip = planon_dipole(M3, anchor)
    syn = Syndrome(frozenset(), frozenset(dip)) ^ syndrome(M3, move_planon(M3, anchor))
    assert syn.size == 2
    assert len(planon_orbit(M3, anchor)) == planon_period(M3) == 8
    m = build_model(LatticeShape((2, 3, 2)))
    assert len(planon_orbit(m, anchor)) == planon_period(m) == 12


def test_planon_wrong_link():
    dip = planon_dipole(M3, (0, 0, 0))
    start = Syndrome(frozenset(), frozenset(dip))
    # X on the y-link next to the anchor does not move the dipole
    bad = start ^ syndrome(M3, x_on(M3, [(0, 7, 0)]))
    assert bad.size != 2


# -- fragmentation and alignment ---------------------------------------


def test_fragment_identity_and_single_shift():
    spec = MembraneSpec.rectangle("x+y", 1, 1)
    base = fragment_loop(M4, spec, {})
    assert base.syndrome == base.original
    cell = sorted(base.original.violated_z)[0]
    one = fragment_loop(M4, spec, {cell: 1})
    moved = cell[:3] + ((cell[3] + 2) % 8,)
    assert one.syndrome.violated_z == (base.original.violated_z - {cell}) | {moved}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_fragment_conserves_projection(seed):
    rng = np.random.default_rng(seed)
    spec = MembraneSpec.rectangle("x+y", 1, 1)
    original = fragment_loop(M4, spec, {}).original
    offsets = {c: int(rng.integers(0, 4)) for c in original.violated_z}
    res = fragment_loop(M4, spec, offsets)
    assert res.syndrome.size == original.size
    proj = lambda s: sorted(c[:3] for c in s.violated_z)
    assert proj(res.syndrome) == proj(original)
    rep = project_and_classify(res.syndrome, 3, M4.shape.sizes)
    assert rep.components == 1 and rep.all_degree_two


def test_fragment_offset_bounds():
    spec = MembraneSpec.rectangle("x+y", 1, 1)
    cell = sorted(fragment_loop(M4, spec, {}).original.violated_z)[0]
    with pytest.raises(OffsetOutOfRange):
        fragment_loop(M4, spec, {cell: 4})
    with pytest.raises(InvalidCell):
        fragment_loop(M4, spec, {(0, 0, 0, 0): 1})


def test_two_loops_two_components():
    m = build_model(LatticeShape((8, 6, 6, 2)))
    a = membrane_operator(m, MembraneSpec.rectangle("x+y", 1, 1))
    b = membrane_operator(m, MembraneSpec.rectangle("x+y", 1, 1, offset=9))
    rep = project_and_classify(syndrome(m, a * b), 3, m.shape.sizes)
    assert rep.components == 2 and rep.all_degree_two


def test_single_lineon_projection():
    syn = Syndrome(frozenset(), frozenset({(0, 0, 0, 0)}))
    rep = project_and_classify(syn, 3)
    assert (rep.components, rep.degrees) == (1, (0,))
    assert not rep.all_degree_two


def test_alignment_lowers_energy():
    spec = MembraneSpec.rectangle("x+y", 2, 2)
    near = alignment_cancellation(BIG, spec)
    assert near.lowered
    far = alignment_cancellation(BIG, spec, (0, 0, 0, 2))
    assert far.composite_size == sum(far.single_sizes)


def test_stacking_reaches_lineons():
    stages = stacking_reduction(BIG, (4, 4, 4, 0), rounds=2)
    assert stages[0].syndrome.size == 6 and not stages[0].isolated
    for s in stages[1:]:
        assert s.syndrome.size == 6 and s.isolated and s.mobile_along_free_axis


def test_stacking_that_wraps_cancels():
    # on L=4 the radius-4 octahedron meets itself across the torus
    last = stacking_reduction(M4, (4, 4, 4, 0), rounds=2)[-1]
    assert not last.syndrome and not last.isolated
