import pytest

from orthoplex.chaincx import LabeledBasis, repetition_complex, tensor_power
from orthoplex.f2core import BitMatrix
from orthoplex.hgpgen import (
    CssCode,
    DegreeOutOfRange,
    InvalidDimension,
    InvalidPartition,
    Partition,
    build_css,
    code_params,
    orthoplex_partition,
    signatures,
    standard_hgp_partition,
)


def reps(*sizes):
    return [repetition_complex(L) for L in sizes]


def test_standard_partition_3d():
    p = standard_hgp_partition(3, 1)
    assert p.members("Q") == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert p.members("X") == [(0, 0, 0)]
    assert len(p.members("Z")) == 3


def test_standard_partition_degree_zero():
    with pytest.raises(DegreeOutOfRange):
        standard_hgp_partition(2, 0)


def test_orthoplex_partition_3d():
    p = orthoplex_partition(3)
    assert set(p.members("Q")) == {(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)}
    assert set(p.members("X")) == {(1, 0, 1), (0, 1, 1)}
    assert set(p.members("Z")) == {(0, 0, 0), (1, 1, 0)}


def test_orthoplex_partition_4d():
    p = orthoplex_partition(4)
    assert len(p.members("Q")) == 8
    assert (1, 1, 1, 1) in p.members("X") and len(p.members("X")) == 4
    assert (0, 0, 0, 0) in p.members("Z") and len(p.members("Z")) == 4


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_partitions_total(p):
    for part in [orthoplex_partition(p)] + [standard_hgp_partition(p, q) for q in range(1, p)]:
        assert sorted(part.assignment) == signatures(p)


def test_bad_partitions():
    with pytest.raises(InvalidDimension):
        orthoplex_partition(1)
    with pytest.raises(InvalidPartition):
        Partition({(0, 0): "Q"})
    with pytest.raises(InvalidPartition):
        Partition({s: "W" for s in signatures(2)})


def test_2d_orthoplex_equals_toric_code():
    a = build_css(reps(3, 3), orthoplex_partition(2))
    b = build_css(reps(3, 3), standard_hgp_partition(2, 1))
    assert code_params(a) == code_params(b) == (18, 2)
    # same supports up to relabelling of the checks
    rows = lambda h, labels: {frozenset(labels[j] for j in r) for r in h.row_supports()}
    qa, qb = list(a.qubit_labels), list(b.qubit_labels)
    assert rows(a.hx, qa) | rows(a.hz, qa) == rows(b.hx, qb) | rows(b.hz, qb)


@pytest.mark.parametrize("L", [2, 3, 4])
def test_toric_codes(L):
    assert code_params(build_css(reps(L, L), standard_hgp_partition(2, 1)))[1] == 2
    n, k = code_params(build_css(reps(L, L, L), standard_hgp_partition(3, 1)))
    assert (n, k) == (3 * L**3, 3)


def test_orthoplex_product_234():
    assert code_params(build_css(reps(2, 3, 4), orthoplex_partition(3)))[1] == 4


def test_standard_hgp_is_tensor_segment():
    cs = reps(2, 3, 2)
    code = build_css(cs, standard_hgp_partition(3, 1))
    K = tensor_power(cs)
    assert code.hz == K.boundary(2).T
    assert code.hx == K.boundary(1)


def test_noncommuting_partition_rejected():
    # moving the xy plaquettes from Z to X leaves them overlapping the other plaquettes oddly
    bad = Partition({**dict(standard_hgp_partition(3, 1).assignment), (1, 1, 0): "X"})
    with pytest.raises(InvalidPartition):
        build_css(reps(2, 2, 2), bad)


def test_trivial_code_params():
    z = BitMatrix.zeros(0, 5)
    code = CssCode(z, z, LabeledBasis(range(5)), LabeledBasis([]), LabeledBasis([]))
    assert code_params(code) == (5, 5)


def test_params_permutation_invariant():
    code = build_css(reps(3, 3, 2), orthoplex_partition(3))
    perm = list(range(code.n))[::-1]
    shuffled = CssCode(
        code.hx.permute_cols(perm).select_rows(list(range(code.hx.rows))[::-1]),
        code.hz.permute_cols(perm),
        LabeledBasis([code.qubit_labels[i] for i in perm]),
        LabeledBasis(list(code.x_labels)[::-1]),
        code.z_labels,
    )
    assert code_params(shuffled) == code_params(code)
