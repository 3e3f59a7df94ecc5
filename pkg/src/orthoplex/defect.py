"""Dislocation in the open-boundary 3D model and planon transport around it.

Coordinates relative to a central vertex ``c0`` are written ``u = cell - c0``
(doubled).  The cut ``D`` removes every qubit with ``ux + uy - uz = 1`` and
``uz <= -1``; its edge, the dislocation line, is ``ux + uy = 0, uz = -1``.

Stabilizers touching ``D`` lose three qubits each.  Truncated terms on the
two sides of the cut (``u.n = 2`` and ``u.n = 0`` for ``n = (1, 1, -1)``)
never anticommute with each other, while on one side they anticommute like
nearest neighbours on a square lattice.  The commuting choice therefore glues
the sides: for every removed qubit ``g`` with half-integer z the products

    A(g + y/2) B(g + z/2)    and    A(g - y/2) B(g - z/2)

become generators.  Every truncated term is claimed by exactly one such
pair.  Along the line, qubits alternate between two sublattices; on the
second one ``A(g + y/2)`` and ``B(g + z/2)`` are dropped instead of paired.
Truncated terms with no partner (open boundary) are dropped as well.

Planon transport uses dipoles in an ``x - y = const`` plane: e dipoles on
pairs of B terms moved by X strings, m dipoles on pairs of A terms moved by
Z strings.  Next to the cut a pair of glued generators is both an e dipole
on one side and an m dipole on the other, so a planon that reaches the cut
continues as the other type, shifted by ``(0, -1/2, 1/2)``.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property
from math import atan2, pi

import numpy as np

from .f2core import BitMatrix, BitVector, rank
from .hgpgen import code_params
from .lattice import Cell, LatticeShape, neighbors
from .model import OrthoplexModel, build_model

NORMAL = (1, 1, -1)
MIN_EXTENT = 6


class ShapeTooSmall(ValueError):
    pass


class PathDoesNotEncircle(ValueError):
    pass


class TransportFailed(RuntimeError):
    pass


def _add(a: Sequence[int], b: Sequence[int]) -> Cell:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Sequence[int], b: Sequence[int]) -> Cell:
    return tuple(x - y for x, y in zip(a, b))


def _ndot(u: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, NORMAL))


@dataclass(frozen=True)
class Generator:
    """Mixed stabilizer: X on ``x_cells``, Z on ``z_cells``."""

    kind: str  # "A", "B" or "AB"
    origin: tuple[Cell, ...]
    x_cells: tuple[Cell, ...]
    z_cells: tuple[Cell, ...]

    @property
    def mixed(self) -> bool:
        return bool(self.x_cells) and bool(self.z_cells)


@dataclass(frozen=True, eq=False)
class DefectModel:
    base: OrthoplexModel
    center: Cell
    removed: frozenset
    line: tuple[Cell, ...]
    qubits: tuple[Cell, ...]
    generators: tuple[Generator, ...]
    gx: BitMatrix
    gz: BitMatrix
    owner: dict
    dropped: frozenset
    zero_modes: int

    @property
    def n(self) -> int:
        return len(self.qubits)

    @cached_property
    def qubit_lookup(self) -> dict:
        return {q: i for i, q in enumerate(self.qubits)}

    def local(self, cell: Cell) -> Cell:
        return _sub(cell, self.center)

    def cell(self, u: Sequence[int]) -> Cell:
        return _add(self.center, u)

    def commutation_matrix(self) -> BitMatrix:
        """``S[i, j] = x_i . z_j + z_i . x_j`` over all generator pairs."""
        return (self.gx @ self.gz.T) + (self.gz @ self.gx.T)

    def all_commute(self) -> bool:
        return self.commutation_matrix().is_zero()

    def syndrome(self, x: BitVector, z: BitVector) -> frozenset:
        """Indices of generators anticommuting with the Pauli ``(x, z)``."""
        flips = self.gx.mul_vec(z) ^ self.gz.mul_vec(x)
        return frozenset(int(i) for i in flips.support())

    def symplectic_rank(self) -> int:
        return rank(_hstack(self.gx, self.gz))

    def report(self) -> dict:
        return {
            "removed_qubits": [list(c) for c in sorted(self.removed)],
            "line_qubits": [list(c) for c in self.line],
            "remaining_qubits": self.n,
            "generator_count": len(self.generators),
            "mixed_generators": sum(g.mixed for g in self.generators),
            "dropped_stabilizers": len(self.dropped),
            "zero_mode_count": self.zero_modes,
            "all_commute": self.all_commute(),
        }


def _hstack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return BitMatrix.from_dense(np.hstack([a.to_dense(), b.to_dense()]))


def removed_half_plane(model: OrthoplexModel, center: Cell) -> set:
    out = set()
    for q in model.qubit_cells:
        u = _sub(q, center)
        if _ndot(u) == 1 and u[2] <= -1:
            out.add(q)
    return out


def build_dislocation(shape: LatticeShape, center: Cell | None = None) -> DefectModel:
    """Cut the half plane, glue truncated terms across it and check commutation."""
    if shape.p != 3 or any(shape.periodic):
        raise ShapeTooSmall("the dislocation needs a 3D lattice with open boundaries")
    if min(shape.sizes) < MIN_EXTENT:
        raise ShapeTooSmall(f"every extent must be at least {MIN_EXTENT}, got {shape.sizes}")
    model = build_model(shape)
    c0 = center if center is not None else tuple(2 * (L // 2) for L in shape.sizes)
    if not model.is_z_cell(c0) or any(v % 2 for v in c0):
        raise ValueError(f"center {c0} must be a lattice vertex")
    removed = removed_half_plane(model, c0)
    line = tuple(sorted(q for q in removed if q[2] - c0[2] == -1))
    line_pos = {q: i for i, q in enumerate(line)}

    def restricted(cell):
        return tuple(q for q in neighbors(cell, shape) if q not in removed)

    x_set, z_set = set(model.x_cells), set(model.z_cells)
    truncated = {
        c for c in itertools.chain(model.x_cells, model.z_cells)
        if any(q in removed for q in neighbors(c, shape))
    }
    pairs: list[tuple[Cell, Cell]] = []
    veto: set = set()
    for g in sorted(removed):
        if (g[2] - c0[2]) % 2 == 0:
            continue
        for s in (1, -1):
            a, b = _add(g, (0, s, 0)), _add(g, (0, 0, s))
            if g in line_pos and line_pos[g] % 2 == 1 and s == 1:
                veto |= {a, b}
                continue
            pairs.append((a, b))

    gens: list[Generator] = []
    owner: dict = {}
    for a, b in pairs:
        if a in veto or b in veto or a not in truncated or b not in truncated:
            continue
        if a not in x_set or b not in z_set:
            raise AssertionError(f"pair {a}, {b} has unexpected types")
        if a in owner or b in owner:
            raise AssertionError(f"stabilizer claimed twice near {a}, {b}")
        owner[a] = owner[b] = len(gens)
        gens.append(Generator("AB", (a, b), restricted(a), restricted(b)))
    for c in model.x_cells:
        if c not in truncated:
            owner[c] = len(gens)
            gens.append(Generator("A", (c,), restricted(c), ()))
    for c in model.z_cells:
        if c not in truncated:
            owner[c] = len(gens)
            gens.append(Generator("B", (c,), (), restricted(c)))
    dropped = frozenset(truncated - set(owner))

    qubits = tuple(q for q in model.qubit_cells if q not in removed)
    qidx = {q: i for i, q in enumerate(qubits)}
    gx = BitMatrix.from_supports(len(qubits), [[qidx[q] for q in g.x_cells] for g in gens])
    gz = BitMatrix.from_supports(len(qubits), [[qidx[q] for q in g.z_cells] for g in gens])
    k_defect = len(qubits) - rank(_hstack(gx, gz))
    _, k_base = code_params(model.code)
    return DefectModel(
        base=model,
        center=c0,
        removed=frozenset(removed),
        line=line,
        qubits=qubits,
        generators=tuple(gens),
        gx=gx,
        gz=gz,
        owner=owner,
        dropped=dropped,
        zero_modes=k_defect - k_base,
    )


# ----------------------------------------------------------------------
# planon transport


E_TYPE, M_TYPE = "e", "m"
DIPOLE = (1, -1, 0)
M_OFFSET = (1, 0, 1)


def dipole_cells(kind: str, anchor: Cell) -> tuple[Cell, Cell]:
    """Checks violated by a planon in the ``x - y = const`` plane.

    ``anchor`` is a local B cell; the m dipole sits at the dual position
    ``anchor + (1/2, 0, 1/2)``.
    """
    base = anchor if kind == E_TYPE else _add(anchor, M_OFFSET)
    return base, _add(base, DIPOLE)


def planon_state(dm: DefectModel, kind: str, anchor: Cell) -> frozenset | None:
    """Generator indices violated by the dipole, or ``None`` if not representable."""
    idx = []
    for u in dipole_cells(kind, anchor):
        g = dm.owner.get(dm.cell(u))
        if g is None:
            return None
        idx.append(g)
    if idx[0] == idx[1]:
        return None
    return frozenset(idx)


def loop_path(z_lo: int, z_hi: int, t_lo: int, t_hi: int, winding: int = 1) -> list[Cell]:
    """Closed rectangle of local anchors ``(t, t, z)`` traversed ``winding`` times.

    ``t`` steps by one (a move along ``(1/2, 1/2, 0)``) and ``z`` by two.
    Positive windings run counter-clockwise in the ``(z, t)`` plane, so the
    bottom edge (``z = z_lo``) is walked towards decreasing ``t``.
    """
    if z_lo % 2 or z_hi % 2 or z_lo >= z_hi or t_lo >= t_hi:
        raise PathDoesNotEncircle("rectangle bounds must be ordered and z even")
    ring = [(t, z_lo) for t in range(t_lo, t_hi)]
    ring += [(t_hi, z) for z in range(z_lo, z_hi, 2)]
    ring += [(t, z_hi) for t in range(t_hi, t_lo, -1)]
    ring += [(t_lo, z) for z in range(z_hi, z_lo, -2)]
    if winding > 0:
        ring = ring[:1] + ring[1:][::-1]
    path = [(t, t, z) for t, z in ring] * abs(winding)
    return path + [path[0]] if path else [(t_lo, t_lo, z_lo)]


def winding_number(path: Sequence[Cell]) -> int:
    """Signed turns of the closed path around the line's piercing point ``(0, -1)``."""
    total = 0.0
    pts = [(2 * p[0] + 1, p[2]) for p in path]  # s = ux + uy of the dipole centre
    for (s0, z0), (s1, z1) in zip(pts, pts[1:]):
        a0 = atan2(s0, z0 + 1)
        a1 = atan2(s1, z1 + 1)
        d = a1 - a0
        while d > pi:
            d -= 2 * pi
        while d < -pi:
            d += 2 * pi
        total += d
    return round(total / (2 * pi))


@dataclass(frozen=True)
class BraidStep:
    anchor: Cell
    kind: str
    swapped: bool
    pure_x_residual: int


@dataclass(frozen=True)
class BraidVerdict:
    winding: int
    crossings: int
    type_before: str
    type_after: str
    steps: tuple[BraidStep, ...]
    transport_clean: bool
    closed_syndrome_free: bool

    @property
    def swapped(self) -> bool:
        return self.type_before != self.type_after

    @property
    def pure_x_leaves_residual(self) -> bool:
        """Whether every type change came with a residual for the bulk X move."""
        swaps = [s for s in self.steps if s.swapped]
        return bool(swaps) and all(s.pure_x_residual > 0 for s in swaps)

    def to_json(self) -> dict:
        return {
            "winding": self.winding,
            "crossings": self.crossings,
            "type_before": self.type_before,
            "type_after": self.type_after,
            "swapped": self.swapped,
            "pure_x_leaves_residual": self.pure_x_leaves_residual,
            "transport_clean": self.transport_clean,
            "closed_syndrome_free": self.closed_syndrome_free,
        }


def _move_qubits(kind: str, a: Cell, b: Cell) -> list[Cell]:
    """Local qubits flipped by the defect-free single-type move ``a -> b``."""
    d = _sub(b, a)
    if d[2]:
        step = 1 if d[2] > 0 else -1
        return [_add(c, (0, 0, step)) for c in dipole_cells(kind, a)]
    lo = a if d[0] > 0 else b
    return [_add(dipole_cells(kind, lo)[0], (1, 0, 0))]


def _string_syndrome(dm: DefectModel, kind: str, cells: Sequence[Cell]) -> frozenset:
    qidx = dm.qubit_lookup
    v = BitVector.from_support(dm.n, sorted({qidx[q] for q in map(dm.cell, cells) if q in qidx}))
    zero = BitVector.zeros(dm.n)
    return dm.syndrome(v, zero) if kind == E_TYPE else dm.syndrome(zero, v)


def _other(kind: str) -> str:
    return M_TYPE if kind == E_TYPE else E_TYPE


def _reidentify(dm: DefectModel, kind: str, state: frozenset, near: Cell, reach: int) -> Cell | None:
    """Anchor of the other type whose dipole violates exactly ``state``."""
    best = None
    for dx in range(-reach, reach + 1):
        for dy in range(-reach, reach + 1):
            for dz in range(-reach, reach + 1, 2):
                b = _add(near, (dx, dy, dz))
                if planon_state(dm, kind, b) == state:
                    key = (abs(dx) + abs(dy) + abs(dz), (dx, dy, dz))
                    if best is None or key < best[0]:
                        best = (key, b)
    return None if best is None else best[1]


def braid_planon(dm: DefectModel, path: Sequence[Cell], kind: str = E_TYPE) -> BraidVerdict:
    """Carry a planon along the closed anchor ``path`` and report its type.

    Away from the cut the dipole moves by the bulk string of its own type
    (X for e, Z for m).  When that continuation fails to reproduce the
    expected syndrome, the hop crosses the cut: the violated mixed generators
    are then read as a dipole of the other type, found near the target
    anchor, and transport continues with that type from there.  Each such
    re-identification can translate the planon off the original plane; later
    anchors follow the accumulated translation.
    """
    path = [tuple(p) for p in path]
    if len(path) < 2 or path[0] != path[-1]:
        raise PathDoesNotEncircle("path must be closed (first anchor repeated at the end)")
    for a, b in zip(path, path[1:]):
        if _sub(b, a) not in {(1, 1, 0), (-1, -1, 0), (0, 0, 2), (0, 0, -2)}:
            raise PathDoesNotEncircle(f"hop {a} -> {b} is not a planon step")
    state = start = planon_state(dm, kind, path[0])
    if state is None:
        raise PathDoesNotEncircle(f"start {path[0]} touches the cut")
    shift = (0, 0, 0)
    xs: set = set()
    zs: set = set()
    cur = kind
    clean = True
    steps = []
    for a, b in zip(path, path[1:]):
        a, b = _add(a, shift), _add(b, shift)
        cells = _move_qubits(cur, a, b)
        target = planon_state(dm, cur, b)
        got = state ^ _string_syndrome(dm, cur, cells)
        if target is not None and got == target:
            (xs if cur == E_TYPE else zs).symmetric_difference_update(
                q for q in map(dm.cell, cells) if q in dm.qubit_lookup
            )
            state = target
            steps.append(BraidStep(b, cur, False, 0))
        else:
            residual = len(got ^ target) if target is not None else len(got)
            landing = _reidentify(dm, _other(cur), state, b, 2)
            if landing is None:
                raise TransportFailed(f"no continuation from {a} to {b} as {cur} or {_other(cur)}")
            shift = _add(shift, _sub(landing, b))
            cur = _other(cur)
            steps.append(BraidStep(landing, cur, True, residual))
        tx = BitVector.from_support(dm.n, sorted(dm.qubit_lookup[q] for q in xs))
        tz = BitVector.from_support(dm.n, sorted(dm.qubit_lookup[q] for q in zs))
        if dm.syndrome(tx, tz) != start ^ state:
            clean = False
    closed = state == start
    return BraidVerdict(
        winding=winding_number(path),
        crossings=sum(s.swapped for s in steps),
        type_before=kind,
        type_after=cur,
        steps=tuple(steps),
        transport_clean=clean,
        closed_syndrome_free=closed and not dm.syndrome(tx, tz),
    )


__all__ = [
    "BraidStep",
    "BraidVerdict",
    "DefectModel",
    "E_TYPE",
    "Generator",
    "M_TYPE",
    "PathDoesNotEncircle",
    "ShapeTooSmall",
    "TransportFailed",
    "braid_planon",
    "build_dislocation",
    "dipole_cells",
    "loop_path",
    "planon_state",
    "removed_half_plane",
    "winding_number",
]
