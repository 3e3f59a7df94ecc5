"""Code parameters, logical operators and the 3D degeneracy law.

For the 3D orthoplex model on a periodic ``Lx x Ly x Lz`` lattice the number
of logical qubits is ``4 gcd(Lx, Ly)``, independent of ``Lz``.  Degeneracy is
always reported as ``k = log2 GSD``.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd, lcm

from .f2core import BitMatrix, BitVector, in_rowspace, nullspace_basis, quotient_basis, rank
from .hgpgen import CssCode, code_params
from .lattice import Cell, LatticeShape
from .model import OrthoplexModel, build_model
from .pauli import PauliOp

STRING_KINDS = ("vertical-z", "diagonal-plus", "diagonal-minus")


class NonClosingPath(ValueError):
    pass


@dataclass(frozen=True)
class LogicalSet:
    x_logicals: tuple[PauliOp, ...]
    z_logicals: tuple[PauliOp, ...]

    @property
    def k(self) -> int:
        return len(self.x_logicals)

    def pairing_matrix(self) -> BitMatrix:
        """``P[i, j] = <x_i, z_j>`` mod 2."""
        X = BitMatrix.from_rows([op.x for op in self.x_logicals], cols=self._n())
        Z = BitMatrix.from_rows([op.z for op in self.z_logicals], cols=self._n())
        return X @ Z.T

    def pairing_full_rank(self) -> bool:
        if self.k != len(self.z_logicals):
            return False
        return self.k == 0 or rank(self.pairing_matrix()) == self.k

    def _n(self) -> int:
        ops = self.x_logicals or self.z_logicals
        return ops[0].n if ops else 0


def logical_basis(code: CssCode) -> LogicalSet:
    """X logicals span ker(hz) / rowspace(hx); Z logicals the dual quotient."""
    n = code.n
    xs = quotient_basis(nullspace_basis(code.hz), code.hx)
    zs = quotient_basis(nullspace_basis(code.hx), code.hz)
    zero = BitVector.zeros(n)
    return LogicalSet(
        tuple(PauliOp(v, zero) for v in xs),
        tuple(PauliOp(zero, v) for v in zs),
    )


def predicted_k(sizes: Sequence[int]) -> int | None:
    """Closed-form ``log2 GSD`` where one is known (3D only)."""
    if len(sizes) == 3:
        return 4 * gcd(sizes[0], sizes[1])
    return None


@dataclass(frozen=True)
class GsdRecord:
    sizes: tuple[int, ...]
    n: int
    k: int
    predicted: int | None

    @property
    def match(self) -> bool | None:
        return None if self.predicted is None else self.k == self.predicted


def gsd_record(shape: LatticeShape) -> GsdRecord:
    if not shape.fully_periodic:
        raise ValueError("degeneracy scan needs fully periodic shapes")
    n, k = code_params(build_model(shape).code)
    return GsdRecord(shape.sizes, n, k, predicted_k(shape.sizes))


def gsd_scan(shapes: Iterable[LatticeShape], workers: int | None = None) -> list[GsdRecord]:
    """One record per shape, sorted by sizes regardless of evaluation order."""
    shapes = list(shapes)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(gsd_record, shapes))
    else:
        records = [gsd_record(s) for s in shapes]
    return sorted(records, key=lambda r: r.sizes)


def gsd_csv(records: Sequence[GsdRecord]) -> str:
    p = max((len(r.sizes) for r in records), default=3)
    names = ["lx", "ly", "lz", "lw", "lu", "lv"][:p]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names + ["n", "k", "predicted", "match"])
    for r in records:
        pred = "" if r.predicted is None else r.predicted
        match = "" if r.match is None else str(r.match).lower()
        w.writerow(list(r.sizes) + [r.n, r.k, pred, match])
    return buf.getvalue()


# ----------------------------------------------------------------------
# explicit string operators in 3D


@dataclass(frozen=True)
class StringVerdict:
    kind: str
    cells: tuple[Cell, ...]
    length: int
    wraps: tuple[int, ...]
    commutes: bool
    outside_rowspace: bool

    @property
    def is_logical(self) -> bool:
        return self.commutes and self.outside_rowspace


def x_logical_flags(code: CssCode, support: BitVector) -> tuple[bool, bool]:
    """(commutes with every Z check, not a product of X checks)."""
    commutes = not code.hz.mul_vec(support).any()
    return commutes, not in_rowspace(support, code.hx)


def string_cells(model: OrthoplexModel, kind: str, anchor: Cell) -> tuple[list[Cell], tuple[int, ...]]:
    """Qubit cells of a closed X string starting next to Z-check cell ``anchor``.

    ``vertical-z`` runs along z; ``diagonal-plus`` runs inside a plane
    ``x + y = const`` (step ``(1/2, -1/2, 0)``); ``diagonal-minus`` inside
    ``x - y = const``.  Returns the cells and how many times the loop winds
    around each axis.
    """
    shape = model.shape
    if shape.p != 3:
        raise ValueError("string logicals are defined for the 3D model")
    if not model.is_z_cell(anchor):
        raise ValueError(f"anchor {anchor} is not a Z-check cell")
    Lx, Ly, Lz = shape.sizes
    if kind == "vertical-z":
        if not shape.periodic[2]:
            raise NonClosingPath("z axis is open")
        first, step, steps = (0, 0, 1), (0, 0, 2), Lz
        wraps = (0, 0, 1)
    elif kind in ("diagonal-plus", "diagonal-minus"):
        if not (shape.periodic[0] and shape.periodic[1]):
            raise NonClosingPath("diagonal strings need periodic x and y")
        sy = -1 if kind == "diagonal-plus" else 1
        first, step = (1, 0, 0), (1, sy, 0)
        period = lcm(Lx, Ly)
        steps = 2 * period
        wraps = (period // Lx, period // Ly, 0)
    else:
        raise ValueError(f"unknown string kind {kind!r}; expected one of {STRING_KINDS}")
    start = tuple(a + f for a, f in zip(anchor, first))
    cells = [model.canonical(tuple(s + t * d for s, d in zip(start, step))) for t in range(steps)]
    if model.canonical(tuple(s + steps * d for s, d in zip(start, step))) != cells[0]:
        raise NonClosingPath(f"{kind} string from {anchor} does not close")
    if len(set(cells)) != len(cells) or not all(model.is_qubit(c) for c in cells):
        raise NonClosingPath(f"{kind} string from {anchor} is not a simple qubit loop")
    return cells, wraps


def check_string_logical(
    model: OrthoplexModel, kind: str, anchor: Cell, repeat: int = 1
) -> StringVerdict:
    """Build the closed X string and test whether it is a nontrivial logical.

    ``repeat`` applies the string that many times; an even repeat gives the
    identity.
    """
    cells, wraps = string_cells(model, kind, anchor)
    op = PauliOp.from_cells(model, x=cells * repeat)
    commutes, outside = x_logical_flags(model.code, op.x)
    return StringVerdict(kind, tuple(cells), len(cells), wraps, commutes, outside)


def in_logical_span(code: CssCode, support: BitVector, logicals: LogicalSet) -> bool:
    """Whether ``support`` lies in rowspace(hx) + span of the X logicals."""
    rows = list(code.hx) + [op.x for op in logicals.x_logicals]
    return in_rowspace(support, BitMatrix.from_rows(rows, cols=code.n))


__all__ = [
    "GsdRecord",
    "LogicalSet",
    "NonClosingPath",
    "STRING_KINDS",
    "StringVerdict",
    "check_string_logical",
    "gsd_csv",
    "gsd_record",
    "gsd_scan",
    "in_logical_span",
    "logical_basis",
    "predicted_k",
    "string_cells",
    "x_logical_flags",
]
