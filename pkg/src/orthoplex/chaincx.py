"""Chain complexes over GF(2) with labeled bases.

Repetition-code complexes use doubled integer coordinates as labels: vertex
``j`` is ``2j`` and link ``j + 1/2`` is ``2j + 1``.  Tensor products flatten
labels into tuples in factor order, so an n-fold product of repetition
complexes labels each basis element by the doubled coordinates of a cell.
"""

from __future__ import annotations

from collections.abc import Hashable, Sequence
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .f2core import BitMatrix, ShapeMismatch, matmul, rank


class InvalidSize(ValueError):
    pass


class LabeledBasis:
    """Ordered, duplicate-free list of basis labels."""

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Sequence[Hashable]):
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("basis labels must be unique")

    def index(self, label: Hashable) -> int:
        return self._index[label]

    def __contains__(self, label: Hashable) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i: int):
        return self.labels[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledBasis):
            return NotImplemented
        return self.labels == other.labels

    def __repr__(self) -> str:
        return f"LabeledBasis({len(self.labels)} labels)"


@dataclass(frozen=True)
class ChainComplex:
    """Graded GF(2) spaces ``groups[q]`` with ``boundaries[q]: C_q -> C_{q-1}``.

    ``boundaries[0]`` is the zero map out of degree 0 and is stored as a
    ``0 x dim C_0`` matrix.  ``signatures[q][i]`` records, for product
    complexes, the per-factor degrees of basis element ``i``.
    """

    groups: tuple[LabeledBasis, ...]
    boundaries: tuple[BitMatrix, ...]
    signatures: tuple[tuple[tuple[int, ...], ...], ...]
    nfactors: int = 1
    name: str = field(default="", compare=False)

    @property
    def length(self) -> int:
        return len(self.groups)

    @property
    def top(self) -> int:
        return len(self.groups) - 1

    def dim(self, q: int) -> int:
        if 0 <= q < len(self.groups):
            return len(self.groups[q])
        return 0

    def dims(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    def boundary(self, q: int) -> BitMatrix:
        if q <= 0 or q > self.top:
            return BitMatrix(self.dim(q - 1), self.dim(q))
        return self.boundaries[q]

    def factor_labels(self, q: int, i: int) -> tuple:
        lab = self.groups[q][i]
        return lab if self.nfactors > 1 else (lab,)

    def homology_rank(self, q: int) -> int:
        """dim ker(d_q) - rank(d_{q+1})."""
        return self.dim(q) - rank(self.boundary(q)) - rank(self.boundary(q + 1))


def repetition_complex(L: int, periodic: bool = True) -> ChainComplex:
    """Length-2 complex of the classical repetition code on a chain of L bits."""
    if L < 1 or (periodic and L < 2):
        raise InvalidSize(f"L={L} is too small for a {'periodic' if periodic else 'open'} chain")
    nlinks = L if periodic else L - 1
    vertices = LabeledBasis([2 * j for j in range(L)])
    links = LabeledBasis([2 * j + 1 for j in range(nlinks)])
    cols = np.repeat(np.arange(nlinks), 2)
    rows = np.stack([np.arange(nlinks), (np.arange(nlinks) + 1) % L], axis=1).ravel()
    delta = BitMatrix.from_coo(L, nlinks, rows, cols)
    return ChainComplex(
        groups=(vertices, links),
        boundaries=(BitMatrix(0, L), delta),
        signatures=(((0,),) * L, ((1,),) * nlinks),
        name=f"rep({L},{'periodic' if periodic else 'open'})",
    )


def tensor_product(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Product complex with boundary ``d(x (x) y) = dx (x) y + x (x) dy``.

    Basis of each degree is sorted by (signature, flattened label).
    """
    top = a.top + b.top
    keys: list[list[tuple]] = [[] for _ in range(top + 1)]
    for i in range(a.length):
        for j in range(b.length):
            for ia in range(a.dim(i)):
                for jb in range(b.dim(j)):
                    sig = a.signatures[i][ia] + b.signatures[j][jb]
                    lab = a.factor_labels(i, ia) + b.factor_labels(j, jb)
                    keys[i + j].append((sig, lab, i, ia, jb))
    for k in keys:
        k.sort(key=lambda t: (t[0], t[1]))
    groups = tuple(LabeledBasis([t[1] for t in k]) for k in keys)
    sigs = tuple(tuple(t[0] for t in k) for k in keys)
    pos = [{(t[2], t[3], t[4]): n for n, t in enumerate(k)} for k in keys]

    a_cols = [a.boundary(i).T.row_supports() for i in range(a.length)]
    b_cols = [b.boundary(j).T.row_supports() for j in range(b.length)]

    boundaries = [BitMatrix(0, len(groups[0]))]
    for q in range(1, top + 1):
        rows, cols = [], []
        for col, (_, _, i, ia, jb) in enumerate(keys[q]):
            j = q - i
            if i > 0:
                for ra in a_cols[i][ia]:
                    rows.append(pos[q - 1][(i - 1, ra, jb)])
                    cols.append(col)
            if j > 0:
                for rb in b_cols[j][jb]:
                    rows.append(pos[q - 1][(i, ia, rb)])
                    cols.append(col)
        boundaries.append(BitMatrix.from_coo(len(groups[q - 1]), len(groups[q]), rows, cols))
    return ChainComplex(
        groups=groups,
        boundaries=tuple(boundaries),
        signatures=sigs,
        nfactors=a.nfactors + b.nfactors,
        name=f"{a.name} x {b.name}",
    )


def tensor_power(factors: Sequence[ChainComplex]) -> ChainComplex:
    """Left-folded n-fold product with flat n-tuple labels."""
    if not factors:
        raise ValueError("need at least one factor")
    return reduce(tensor_product, factors)


@dataclass(frozen=True)
class DegreeCheck:
    degree: int
    shape_ok: bool
    chain_ok: bool

    @property
    def ok(self) -> bool:
        return self.shape_ok and self.chain_ok


@dataclass(frozen=True)
class ComplexReport:
    checks: tuple[DegreeCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[int]:
        return [c.degree for c in self.checks if not c.ok]


def validate_complex(c: ChainComplex) -> ComplexReport:
    """Check shapes and ``d_{q-1} d_q = 0`` at every degree ``q``.

    Never raises; failures are returned in the report.
    """
    checks = []
    for q in range(1, c.length):
        d = c.boundaries[q]
        shape_ok = d.shape == (c.dim(q - 1), c.dim(q))
        chain_ok = True
        if q >= 2 and shape_ok:
            prev = c.boundaries[q - 1]
            try:
                chain_ok = matmul(prev, d).is_zero()
            except ShapeMismatch:
                chain_ok = False
        checks.append(DegreeCheck(q, shape_ok, chain_ok))
    return ComplexReport(tuple(checks))


__all__ = [
    "ChainComplex",
    "ComplexReport",
    "InvalidSize",
    "LabeledBasis",
    "repetition_complex",
    "tensor_power",
    "tensor_product",
    "validate_complex",
]
