"""CSS codes from tensor products of length-2 complexes.

Every direct summand ``C_{i_1} (x) ... (x) C_{i_p}`` of the product complex is
identified by its signature ``(i_1, ..., i_p)``.  A partition assigns each
signature one role: qubits (Q), X-stabilizers (X), Z-stabilizers (Z) or unused
(U).  Stabilizer supports come from the symmetric operator that applies
``delta`` or ``delta^T`` to a single factor; contributions landing in a summand
with the wrong role are discarded.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .chaincx import ChainComplex, LabeledBasis, tensor_power
from .f2core import BitMatrix, matmul, rank

ROLES = ("Q", "X", "Z", "U")


class DegreeOutOfRange(ValueError):
    pass


class InvalidDimension(ValueError):
    pass


class InvalidPartition(ValueError):
    pass


def signatures(p: int) -> list[tuple[int, ...]]:
    return list(itertools.product((0, 1), repeat=p))


@dataclass(frozen=True)
class Partition:
    assignment: Mapping[tuple[int, ...], str]
    name: str = ""

    def __post_init__(self):
        sigs = list(self.assignment)
        if not sigs:
            raise InvalidPartition("empty partition")
        p = len(sigs[0])
        if set(sigs) != set(signatures(p)):
            raise InvalidPartition("partition must assign every signature exactly once")
        bad = {r for r in self.assignment.values() if r not in ROLES}
        if bad:
            raise InvalidPartition(f"unknown roles {sorted(bad)}")
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))

    @property
    def p(self) -> int:
        return len(next(iter(self.assignment)))

    def members(self, role: str) -> list[tuple[int, ...]]:
        return sorted(s for s, r in self.assignment.items() if r == role)

    def swapped(self) -> Partition:
        """Same partition with the X and Z roles exchanged."""
        flip = {"X": "Z", "Z": "X"}
        return Partition({s: flip.get(r, r) for s, r in self.assignment.items()}, self.name + "~")


def standard_hgp_partition(p: int, q: int) -> Partition:
    """Segment rule: weight q -> qubits, q-1 -> X, q+1 -> Z."""
    if not 1 <= q <= p - 1:
        raise DegreeOutOfRange(f"q={q} outside 1..{p - 1}")
    role = {q: "Q", q - 1: "X", q + 1: "Z"}
    return Partition({s: role.get(sum(s), "U") for s in signatures(p)}, f"hgp({p},{q})")


def orthoplex_partition(p: int) -> Partition:
    """Odd weight -> qubits; even weight split by the last index (1 -> X, 0 -> Z)."""
    if p < 2:
        raise InvalidDimension(f"p={p} < 2")

    def role(s):
        if sum(s) % 2:
            return "Q"
        return "X" if s[-1] == 1 else "Z"

    return Partition({s: role(s) for s in signatures(p)}, f"orthoplex({p})")


@dataclass(frozen=True)
class CssCode:
    """Pair of parity-check matrices sharing a qubit basis."""

    hx: BitMatrix
    hz: BitMatrix
    qubit_labels: LabeledBasis
    x_labels: LabeledBasis
    z_labels: LabeledBasis
    meta: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.hx.cols != self.hz.cols or self.hx.cols != len(self.qubit_labels):
            raise ValueError("hx, hz and qubit labels disagree on n")
        if self.hx.rows != len(self.x_labels) or self.hz.rows != len(self.z_labels):
            raise ValueError("stabilizer labels do not match matrix rows")

    @property
    def n(self) -> int:
        return self.hx.cols

    def is_css(self) -> bool:
        return matmul(self.hx, self.hz.T).is_zero()


def code_params(code: CssCode) -> tuple[int, int]:
    """``(n, k)`` with ``k = n - rank(hx) - rank(hz)``."""
    n = code.n
    return n, n - rank(code.hx) - rank(code.hz)


def _restricted_block(
    K: ChainComplex, rows_idx: dict[int, list[int]], cols_idx: dict[int, list[int]]
) -> BitMatrix:
    """Block of the symmetric neighbour operator between selected basis elements.

    ``rows_idx`` / ``cols_idx`` map a degree to the chosen positions in that
    degree's basis; the block is assembled in the concatenated orders.
    """
    row_off, col_off = {}, {}
    off = 0
    for q in sorted(rows_idx):
        row_off[q] = off
        off += len(rows_idx[q])
    nrows = off
    off = 0
    for q in sorted(cols_idx):
        col_off[q] = off
        off += len(cols_idx[q])
    ncols = off

    def remap(q, idx):
        m = np.full(K.dim(q), -1, dtype=np.int64)
        m[np.asarray(idx, dtype=np.int64)] = np.arange(len(idx))
        return m

    rmaps = {q: remap(q, idx) for q, idx in rows_idx.items()}
    cmaps = {q: remap(q, idx) for q, idx in cols_idx.items()}
    rs, cs = [], []
    for qc in cols_idx:
        for qr in (qc - 1, qc + 1):
            if qr not in rows_idx:
                continue
            # rows at degree qc-1 use d_qc directly; rows at qc+1 use d_{qc+1}^T
            if qr == qc - 1:
                r, c = K.boundary(qc).nonzero()
            else:
                c, r = K.boundary(qr).nonzero()
            rr, cc = rmaps[qr][r], cmaps[qc][c]
            keep = (rr >= 0) & (cc >= 0)
            rs.append(rr[keep] + row_off[qr])
            cs.append(cc[keep] + col_off[qc])
    if rs:
        r_all, c_all = np.concatenate(rs), np.concatenate(cs)
    else:
        r_all = c_all = np.zeros(0, dtype=np.int64)
    return BitMatrix.from_coo(nrows, ncols, r_all, c_all)


def _role_indices(K: ChainComplex, partition: Partition, role: str) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for q in range(K.length):
        idx = [i for i, s in enumerate(K.signatures[q]) if partition.assignment[s] == role]
        if idx:
            out[q] = idx
    return out


def _labels(K: ChainComplex, idx: dict[int, list[int]]) -> LabeledBasis:
    labs = []
    for q in sorted(idx):
        labs.extend(K.groups[q][i] for i in idx[q])
    return LabeledBasis(labs)


def build_css(
    complexes: Sequence[ChainComplex], partition: Partition, *, check: bool = True
) -> CssCode:
    """Assemble the CSS code selected by ``partition`` from the product complex.

    Within each role, basis elements are ordered by degree, then signature,
    then label.  Raises :class:`InvalidPartition` if ``hx hz^T != 0``.
    """
    if any(c.length != 2 for c in complexes):
        raise ValueError("inputs must be length-2 complexes")
    if partition.p != len(complexes):
        raise InvalidPartition(f"partition has p={partition.p} but {len(complexes)} complexes given")
    K = tensor_power(list(complexes))
    q_idx = _role_indices(K, partition, "Q")
    x_idx = _role_indices(K, partition, "X")
    z_idx = _role_indices(K, partition, "Z")
    hx = _restricted_block(K, x_idx, q_idx)
    hz = _restricted_block(K, z_idx, q_idx)
    code = CssCode(
        hx=hx,
        hz=hz,
        qubit_labels=_labels(K, q_idx),
        x_labels=_labels(K, x_idx),
        z_labels=_labels(K, z_idx),
        meta={"partition": partition.name, "complex": K.name},
    )
    if check and not code.is_css():
        raise InvalidPartition(f"partition {partition.name!r} violates hx hz^T = 0")
    return code


__all__ = [
    "CssCode",
    "DegreeOutOfRange",
    "InvalidDimension",
    "InvalidPartition",
    "Partition",
    "build_css",
    "code_params",
    "orthoplex_partition",
    "signatures",
    "standard_hgp_partition",
]
