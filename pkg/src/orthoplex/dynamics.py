"""Excitations of the orthoplex models: syndromes, membranes, movers.

Energy is counted as the number of violated stabilizers.  All geometry is in
doubled integer coordinates (see :mod:`orthoplex.lattice`), so "one step"
along an axis is half a lattice constant.

Membranes live in the 4D model inside a ``w = const`` hyperplane.  A plane
such as ``x+y`` is described in a local frame ``(a, b, c)``: ``a`` and ``b``
are the two named axes, ``c`` the remaining spatial axis.  Qubits of the
membrane satisfy ``a = C - b`` (or ``a = C + b`` for a minus plane) with ``b``
and ``c`` inside the given ranges.  Triangular membranes keep only cells with
``c - c0 <= 2 (b - b0)``, so their hypotenuse climbs one unit in ``c`` per
half unit in ``b``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .f2core import BitVector, solve
from .lattice import AXIS_NAMES, Cell
from .model import OrthoplexModel
from .pauli import LengthMismatch, PauliOp

PLANES = ("x+y", "x-y", "x+z", "x-z", "y+z", "y-z")


class SpecOutOfRange(ValueError):
    pass


class UnrecognizedPattern(ValueError):
    pass


class SpecsDoNotShareEdge(ValueError):
    pass


class InvalidCell(ValueError):
    pass


class OffsetOutOfRange(ValueError):
    pass


# ----------------------------------------------------------------------
# syndromes


@dataclass(frozen=True)
class Syndrome:
    """Violated X-checks (flipped by Z support) and Z-checks (flipped by X support)."""

    violated_x: frozenset = frozenset()
    violated_z: frozenset = frozenset()

    @property
    def size(self) -> int:
        return len(self.violated_x) + len(self.violated_z)

    def __xor__(self, other: Syndrome) -> Syndrome:
        return Syndrome(self.violated_x ^ other.violated_x, self.violated_z ^ other.violated_z)

    def __bool__(self) -> bool:
        return bool(self.violated_x or self.violated_z)

    def to_json(self) -> dict:
        return {
            "violatedX": [list(c) for c in sorted(self.violated_x)],
            "violatedZ": [list(c) for c in sorted(self.violated_z)],
        }


def syndrome(model: OrthoplexModel, op: PauliOp) -> Syndrome:
    if op.n != model.n:
        raise LengthMismatch(f"operator on {op.n} qubits, model has {model.n}")
    vz = model.code.hz.mul_vec(op.x).support()
    vx = model.code.hx.mul_vec(op.z).support()
    return Syndrome(
        frozenset(model.x_cells[i] for i in vx),
        frozenset(model.z_cells[i] for i in vz),
    )


def x_on(model: OrthoplexModel, cells: Iterable[Cell]) -> PauliOp:
    return PauliOp.from_cells(model, x=cells)


def _add(cell: Cell, delta: Sequence[int]) -> Cell:
    return tuple(c + d for c, d in zip(cell, delta))


def _unit(p: int, axis: int, step: int = 1) -> Cell:
    v = [0] * p
    v[axis] = step
    return tuple(v)


def _axis(name: str) -> int:
    if name not in AXIS_NAMES:
        raise ValueError(f"unknown axis {name!r}")
    return AXIS_NAMES.index(name)


# ----------------------------------------------------------------------
# membranes


@dataclass(frozen=True)
class PlaneFrame:
    """Axes ``(a, b, c)`` and sign of a plane ``a +- b = C`` in the w=const slice."""

    a: int
    b: int
    c: int
    sign: int

    @classmethod
    def of(cls, plane: str) -> PlaneFrame:
        if plane not in PLANES:
            raise SpecOutOfRange(f"plane {plane!r} not one of {PLANES}")
        a, b = _axis(plane[0]), _axis(plane[2])
        (c,) = {0, 1, 2} - {a, b}
        return cls(a, b, c, 1 if plane[1] == "+" else -1)

    def to_frame(self, cell: Cell) -> tuple[int, int, int]:
        return cell[self.a], cell[self.b], cell[self.c]

    def from_frame(self, a: int, b: int, c: int, rest: Cell) -> Cell:
        out = list(rest)
        out[self.a], out[self.b], out[self.c] = a, b, c
        return tuple(out)

    def invariant(self, cell: Cell) -> int:
        """The constant ``C`` of the plane through ``cell``."""
        return cell[self.a] + self.sign * cell[self.b]

    @property
    def diagonal_step(self) -> tuple[int, int]:
        """In-plane ``(da, db)`` step perpendicular to ``c`` (db = +1)."""
        return -self.sign, 1


@dataclass(frozen=True)
class MembraneSpec:
    """Planar region of qubits in a ``w = const`` hyperplane of the 4D model.

    ``offset`` is the plane constant ``C`` and ``b_range``/``c_range`` are
    inclusive bounds, all in doubled units; ``w`` is the doubled w coordinate.
    """

    plane: str
    offset: int = 1
    b_range: tuple[int, int] = (0, 0)
    c_range: tuple[int, int] = (0, 0)
    w: int = 0
    triangle: bool = False

    @classmethod
    def rectangle(cls, plane: str, lb: int, lc: int, offset: int = 1, w: int = 0) -> MembraneSpec:
        """Sides ``lb`` and ``lc`` in lattice units, corner on the ``b = c = 0`` line."""
        return cls(plane, offset, (0, 2 * lb), (0, 2 * lc), w)

    @classmethod
    def right_triangle(cls, plane: str, leg: int, offset: int = 1, w: int = 0) -> MembraneSpec:
        """Triangle with legs ``leg`` along b and ``2 leg`` along c."""
        return cls(plane, offset, (0, 2 * leg), (0, 4 * leg), w, triangle=True)

    @classmethod
    def single(cls, plane: str, cell: Cell) -> MembraneSpec:
        """Degenerate membrane holding only ``cell``."""
        f = PlaneFrame.of(plane)
        b, c = cell[f.b], cell[f.c]
        return cls(plane, f.invariant(cell), (b, b), (c, c), cell[3])

    @property
    def frame(self) -> PlaneFrame:
        return PlaneFrame.of(self.plane)

    def raw_cells(self) -> list[Cell]:
        f = self.frame
        b0, b1 = self.b_range
        c0, c1 = self.c_range
        out = []
        for b in range(b0, b1 + 1):
            for c in range(c0, c1 + 1):
                if self.triangle and c - c0 > 2 * (b - b0):
                    continue
                a = self.offset - f.sign * b
                out.append(f.from_frame(a, b, c, (0, 0, 0, self.w)))
        return out


def membrane_cells(model: OrthoplexModel, spec: MembraneSpec) -> list[Cell]:
    """Canonical qubit cells selected by ``spec``."""
    if model.p != 4:
        raise SpecOutOfRange("membranes are defined in the 4D model")
    if spec.b_range[0] > spec.b_range[1] or spec.c_range[0] > spec.c_range[1]:
        raise SpecOutOfRange("empty range")
    if spec.w % 2:
        raise SpecOutOfRange("membrane hyperplane must sit at integer w")
    cells = []
    for raw in spec.raw_cells():
        if model.shape.canonical(raw) is None:
            raise SpecOutOfRange(f"cell {raw} falls off the lattice")
        if model.is_qubit(raw):
            cells.append(model.canonical(raw))
    if not cells:
        raise SpecOutOfRange("spec selects no qubits")
    if len(set(cells)) != len(cells):
        raise SpecOutOfRange("region wraps onto itself; enlarge the lattice")
    return cells


def membrane_operator(model: OrthoplexModel, spec: MembraneSpec) -> PauliOp:
    return x_on(model, membrane_cells(model, spec))


def single_x_syndrome(model: OrthoplexModel, cell: Cell) -> Syndrome:
    return syndrome(model, x_on(model, [cell]))


def octahedron_operator(model: OrthoplexModel, center: Cell, radius: int = 1) -> PauliOp:
    """X pattern whose syndrome is the 6 Z-checks ``center +- radius x_mu`` (mu = x, y, z).

    ``radius = 1`` places single X's on the six qubits ``center +- x_mu/2``;
    each doubling applies the previous pattern at every excitation of the
    previous one, so ``radius`` must be a power of two.
    """
    if radius < 1 or radius & (radius - 1):
        raise ValueError("radius must be a power of two")
    if not model.is_z_cell(center):
        raise InvalidCell(f"{center} is not a Z-check cell")
    p = model.p
    if radius == 1:
        return x_on(model, [_add(center, _unit(p, mu, s)) for mu in range(3) for s in (-1, 1)])
    half = radius // 2
    op = PauliOp.identity(model.n)
    for mu in range(3):
        for s in (-1, 1):
            op = op * octahedron_operator(model, _add(center, _unit(p, mu, 2 * half * s)), half)
    return op


# ----------------------------------------------------------------------
# segment decomposition


@dataclass(frozen=True)
class Segment:
    kind: str  # "diagonal" or "vertical" (double line)
    cells: tuple[Cell, ...]
    spacing: Cell
    pair_displacement: Cell | None = None

    @property
    def count(self) -> int:
        return len(self.cells)

    @property
    def density(self) -> Fraction:
        """Cells per unit length, squared (exact)."""
        length_sq = Fraction(sum(d * d for d in self.spacing), 4)
        per_line = Fraction(1) / length_sq
        lines = 2 if self.kind == "vertical" else 1
        return lines * lines * per_line


@dataclass(frozen=True)
class SegmentProfile:
    plane: str | None
    segments: tuple[Segment, ...]
    degenerate: bool = False

    def of_kind(self, kind: str) -> list[Segment]:
        return [s for s in self.segments if s.kind == kind]

    @property
    def counts(self) -> dict[str, int]:
        return {k: len(self.of_kind(k)) for k in ("diagonal", "vertical")}

    def vertical_per_unit(self) -> Fraction:
        """Cells per unit length along a vertical double line."""
        (d,) = {s.density for s in self.of_kind("vertical")}
        return _exact_sqrt(d)

    def diagonal_per_step(self) -> Fraction:
        """Cells per in-plane diagonal step ``(1/2, -+1/2, 0)``."""
        return Fraction(1)

    def density_ratio_sq(self) -> Fraction:
        """(vertical density / diagonal density)^2 in cells per Euclidean length."""
        (dv,) = {s.density for s in self.of_kind("vertical")}
        (dd,) = {s.density for s in self.of_kind("diagonal")}
        return dv / dd


def _exact_sqrt(q: Fraction) -> Fraction:
    n, d = q.numerator, q.denominator
    rn, rd = int(n**0.5 + 0.5), int(d**0.5 + 0.5)
    if rn * rn != n or rd * rd != d:
        raise ValueError(f"{q} is not a rational square")
    return Fraction(rn, rd)


def _c_runs(values: list[int]) -> list[list[int]]:
    runs: list[list[int]] = []
    for v in sorted(values):
        if runs and v == runs[-1][-1] + 2:
            runs[-1].append(v)
        else:
            runs.append([v])
    return runs


def _vertical_lines(cells: Iterable[Cell], f: PlaneFrame) -> tuple[list[list[Cell]], list[Cell]]:
    """Split cells into runs along ``c`` (length >= 2) and the leftovers."""
    cols = defaultdict(list)
    for cell in cells:
        key = tuple(v for i, v in enumerate(cell) if i != f.c)
        cols[key].append(cell)
    lines, rest = [], []
    for members in cols.values():
        by_c = {m[f.c]: m for m in members}
        for run in _c_runs(list(by_c)):
            if len(run) >= 2:
                lines.append([by_c[c] for c in run])
            else:
                rest.append(by_c[run[0]])
    return lines, rest


def _is_single_qubit_pattern(model: OrthoplexModel, cells: set) -> Cell | None:
    for cell in cells:
        for mu in range(model.p):
            q = model.shape.canonical(_add(cell, _unit(model.p, mu)))
            if q is not None and model.is_qubit(q) and single_x_syndrome(model, q).violated_z == cells:
                return q
    return None


def _profile_in_plane(model: OrthoplexModel, cells: set, plane: str) -> SegmentProfile:
    f = PlaneFrame.of(plane)
    lines, rest = _vertical_lines(cells, f)
    pairs, used = [], set()
    for i, j in itertools.combinations(range(len(lines)), 2):
        if i in used or j in used:
            continue
        li, lj = lines[i], lines[j]
        if [c[f.c] for c in li] != [c[f.c] for c in lj]:
            continue
        d = [y - x for x, y in zip(li[0], lj[0])]
        if abs(d[f.a]) == 1 and abs(d[f.b]) == 1 and sum(map(abs, d)) == 2:
            pairs.append((li, lj, tuple(d)))
            used |= {i, j}
    if len(used) != len(lines):
        raise UnrecognizedPattern(f"unpaired vertical line in plane {plane}")
    segments = []
    for li, lj, d in pairs:
        segments.append(
            Segment("vertical", tuple(li + lj), _unit(model.p, f.c, 2), d)
        )
    groups = defaultdict(list)
    for cell in rest:
        groups[(cell[f.c], f.invariant(cell)) + tuple(cell[3:])].append(cell)
    da, db = f.diagonal_step
    for members in groups.values():
        members.sort(key=lambda c: c[f.b])
        for x, y in zip(members, members[1:]):
            if y[f.b] - x[f.b] != 1:
                raise UnrecognizedPattern(f"gap in diagonal run in plane {plane}")
        if len(members) < 2:
            raise UnrecognizedPattern(f"isolated cell {members[0]} in plane {plane}")
        step = [0] * model.p
        step[f.a], step[f.b] = da, db
        segments.append(Segment("diagonal", tuple(members), tuple(step)))
    segments.sort(key=lambda s: (s.kind, s.cells))
    return SegmentProfile(plane, tuple(segments))


def segment_profile(
    model: OrthoplexModel, syn: Syndrome, plane: str | None = None
) -> SegmentProfile:
    """Decompose a membrane boundary into diagonal lines and vertical double lines.

    With ``plane=None`` every plane is tried and the first clean
    decomposition is returned.  Coordinates are taken as given, so the
    syndrome should not wrap around a periodic axis.
    """
    cells = set(syn.violated_z)
    if not cells:
        return SegmentProfile(plane, ())
    if _is_single_qubit_pattern(model, cells) is not None:
        return SegmentProfile(plane, (), degenerate=True)
    errors = []
    for pl in [plane] if plane else PLANES:
        try:
            return _profile_in_plane(model, _unwrap(model, cells), pl)
        except UnrecognizedPattern as exc:
            errors.append(str(exc))
    raise UnrecognizedPattern("; ".join(errors))


def _unwrap(model: OrthoplexModel, cells: Iterable[Cell]) -> set:
    """Lift canonical cells to the window centred on the origin of each periodic axis."""
    out = set()
    for cell in cells:
        lifted = []
        for v, L, per in zip(cell, model.shape.sizes, model.shape.periodic):
            if per and v >= L + 1:
                v -= 2 * L
            lifted.append(v)
        out.add(tuple(lifted))
    return out


# ----------------------------------------------------------------------
# chairons and space diagonals


@dataclass(frozen=True)
class ChaironReport:
    residual: tuple[Cell, ...]
    composite_size: int
    separate_size: int
    displacement_a: tuple[Fraction, ...] | None
    displacement_b: tuple[Fraction, ...] | None

    @property
    def nonempty(self) -> bool:
        return bool(self.residual)

    @property
    def displacements_differ(self) -> bool:
        return self.displacement_a != self.displacement_b


def double_line_displacement(profile: SegmentProfile) -> tuple[Fraction, ...]:
    """Rung vector of the profile's double lines, oriented with negative y."""
    def oriented(d):
        if d[1] > 0 or (d[1] == 0 and d[0] > 0):
            d = tuple(-v for v in d)
        return tuple(Fraction(v, 2) for v in d[:3])

    found = {oriented(s.pair_displacement) for s in profile.of_kind("vertical")}
    if len(found) != 1:
        raise UnrecognizedPattern(f"expected one rung direction, found {sorted(found)}")
    return found.pop()


def chairon_residual(
    model: OrthoplexModel, spec_a: MembraneSpec, spec_b: MembraneSpec | None
) -> ChaironReport:
    """Syndrome left on the crease of two membranes sharing a vertical edge.

    The composite membrane is the union of both qubit sets.  The residual is
    the part of its syndrome sitting next to the shared edge, within the
    vertical extent of the membranes.
    """
    cells_a = membrane_cells(model, spec_a)
    syn_a = syndrome(model, x_on(model, cells_a))
    disp_a = double_line_displacement(segment_profile(model, syn_a, spec_a.plane))
    if spec_b is None:
        return ChaironReport(tuple(sorted(syn_a.violated_z)), syn_a.size, syn_a.size, disp_a, None)
    fa, fb = spec_a.frame, spec_b.frame
    if fa.c != fb.c or spec_a.w != spec_b.w:
        raise SpecsDoNotShareEdge("membranes are not both vertical along the same axis")
    cells_b = membrane_cells(model, spec_b)
    shared = set(cells_a) & set(cells_b)
    if not shared or len({tuple(v for i, v in enumerate(c) if i != fa.c) for c in shared}) != 1:
        raise SpecsDoNotShareEdge("membranes do not meet along a single vertical edge")
    edge = next(iter(shared))
    syn_b = syndrome(model, x_on(model, cells_b))
    disp_b = double_line_displacement(segment_profile(model, syn_b, spec_b.plane))
    composite = syndrome(model, x_on(model, sorted(set(cells_a) | set(cells_b))))
    c_lo = max(spec_a.c_range[0], spec_b.c_range[0])
    c_hi = min(spec_a.c_range[1], spec_b.c_range[1])
    lifted = _unwrap(model, composite.violated_z)
    edge_l = next(iter(_unwrap(model, [edge])))
    residual = []
    for cell in lifted:
        if not c_lo <= cell[fa.c] <= c_hi:
            continue
        dist = sum(abs(x - y) for i, (x, y) in enumerate(zip(cell, edge_l)) if i != fa.c)
        if dist <= 1:
            residual.append(model.canonical(cell))
    return ChaironReport(
        tuple(sorted(residual)), composite.size, syn_a.size + syn_b.size, disp_a, disp_b
    )


def space_diagonal_segment(model: OrthoplexModel, spec: MembraneSpec) -> list[Cell]:
    """Hypotenuse cells of a triangular membrane's syndrome.

    Drops the vertical runs and the two extreme ``c`` rows; what remains is
    the staircase along the hypotenuse.
    """
    if not spec.triangle:
        raise SpecOutOfRange("space-diagonal segments need a triangular membrane")
    f = spec.frame
    cells = _unwrap(model, syndrome(model, membrane_operator(model, spec)).violated_z)
    lines, rest = _vertical_lines(cells, f)
    c_vals = [c[f.c] for c in cells]
    lo, hi = min(c_vals), max(c_vals)
    return sorted(c for c in rest if lo < c[f.c] < hi)


def segment_direction(cells: Sequence[Cell], c_axis: int) -> Cell:
    """Primitive translation period of a staircase of cells.

    Scores every small displacement by how many cells it maps into the set;
    the best (ties to the shortest) is the period.  Returned with a positive
    ``c_axis`` component.
    """
    s = set(cells)
    p = len(cells[0])
    best, best_key = None, None
    for d in itertools.product(range(-2, 3), repeat=p):
        if d[c_axis] <= 0:
            continue
        hits = sum(1 for c in cells if _add(c, d) in s)
        key = (hits, -sum(map(abs, d)))
        if best_key is None or key > best_key:
            best, best_key = d, key
    g = 0
    for v in best:
        g = gcd(g, v)
    return tuple(v // g for v in best) if g > 1 else best


@dataclass(frozen=True)
class DiagonalVerdict:
    direction_a: tuple[Fraction, ...]
    direction_b: tuple[Fraction, ...]
    parallel: bool
    shared_cells: int

    @property
    def no_finite_overlap(self) -> bool:
        return not self.parallel


def space_diagonal_check(
    model: OrthoplexModel, orient_a: MembraneSpec, orient_b: MembraneSpec
) -> DiagonalVerdict:
    seg_a = space_diagonal_segment(model, orient_a)
    seg_b = space_diagonal_segment(model, orient_b)
    da = segment_direction(seg_a, orient_a.frame.c)
    db = segment_direction(seg_b, orient_b.frame.c)
    cross = [da[i] * db[j] - da[j] * db[i] for i, j in itertools.combinations(range(len(da)), 2)]
    return DiagonalVerdict(
        tuple(Fraction(v, 2) for v in da[:3]),
        tuple(Fraction(v, 2) for v in db[:3]),
        not any(cross),
        len(set(seg_a) & set(seg_b)),
    )


# ----------------------------------------------------------------------
# lineons and planons


def free_axis(model: OrthoplexModel) -> int:
    """Axis along which a single violated Z-check moves without creating more."""
    return model.p - 1


def move_lineon(model: OrthoplexModel, cell: Cell, axis: int, step: int = 1) -> PauliOp:
    """Single X at ``cell + step * x_axis / 2`` (``step`` is +1 or -1)."""
    if step not in (-1, 1) or not 0 <= axis < model.p:
        raise ValueError("direction must be +-1 along an existing axis")
    if not model.is_z_cell(cell):
        raise InvalidCell(f"{cell} is not a Z-check cell")
    q = model.shape.canonical(_add(cell, _unit(model.p, axis, step)))
    if q is None or not model.is_qubit(q):
        raise InvalidCell(f"no qubit next to {cell} along axis {axis}")
    return x_on(model, [q])


@dataclass(frozen=True)
class MoveOutcome:
    axis: int
    step: int
    size_before: int
    size_after: int
    relocated: bool

    @property
    def clean(self) -> bool:
        return self.relocated and self.size_after == self.size_before


def try_move(model: OrthoplexModel, syn: Syndrome, cell: Cell, axis: int, step: int) -> MoveOutcome:
    """Apply :func:`move_lineon` to a violated cell and compare syndromes."""
    if cell not in syn.violated_z:
        raise InvalidCell(f"{cell} is not violated")
    after = syn ^ syndrome(model, move_lineon(model, cell, axis, step))
    target = model.canonical(_add(cell, _unit(model.p, axis, 2 * step)))
    relocated = cell not in after.violated_z and target in after.violated_z
    return MoveOutcome(axis, step, syn.size, after.size, relocated)


def lineon_pair(model: OrthoplexModel, cell: Cell, length: int | None = None) -> tuple[PauliOp, Syndrome]:
    """Open X string along the free axis ending on ``cell``; two violated checks."""
    ax = free_axis(model)
    L = model.shape.sizes[ax]
    length = length if length is not None else max(1, L // 2)
    cells = [_add(cell, _unit(model.p, ax, 2 * j + 1)) for j in range(length)]
    op = x_on(model, [model.canonical(c) for c in cells])
    return op, syndrome(model, op)


def mobility_survey(model: OrthoplexModel, cell: Cell) -> list[MoveOutcome]:
    """All six (or 2p) single-qubit moves of a lineon created at ``cell``."""
    _, syn = lineon_pair(model, cell)
    return [try_move(model, syn, model.canonical(cell), mu, s) for mu in range(model.p) for s in (-1, 1)]


def planon_dipole(model: OrthoplexModel, anchor: Cell) -> tuple[Cell, Cell]:
    """Violated pair ``anchor`` and ``anchor + (1/2, 1/2, 0)`` of the 3D model."""
    if model.p != 3:
        raise InvalidCell("planon dipoles are defined in the 3D model")
    if not model.is_z_cell(anchor):
        raise InvalidCell(f"{anchor} is not a Z-check cell")
    return model.canonical(anchor), model.canonical(_add(anchor, (1, 1, 0)))


def solve_x_syndrome(model: OrthoplexModel, cells: Iterable[Cell]) -> PauliOp:
    """Some X operator whose Z-check syndrome is exactly ``cells``."""
    idx = [model.z_index(c) for c in cells]
    rhs = BitVector.from_support(len(model.z_cells), idx)
    sol = solve(model.code.hz, rhs)
    if sol is None:
        raise InvalidCell("requested syndrome is not reachable by X operators")
    return PauliOp(sol, BitVector.zeros(model.n))


def move_planon(model: OrthoplexModel, anchor: Cell) -> PauliOp:
    """Single X at ``anchor + (1/2, 0, 0)``, shifting the dipole by ``(1/2, -1/2, 0)``."""
    planon_dipole(model, anchor)
    return x_on(model, [model.canonical(_add(anchor, (1, 0, 0)))])


def planon_orbit(model: OrthoplexModel, anchor: Cell) -> list[tuple[Cell, Cell]]:
    """Dipoles visited by repeated :func:`move_planon` until the start recurs."""
    start = planon_dipole(model, anchor)
    syn = Syndrome(frozenset(), frozenset(start))
    orbit = [start]
    cur = anchor
    while True:
        syn = syn ^ syndrome(model, move_planon(model, cur))
        cur = model.canonical(_add(cur, (1, -1, 0)))
        dip = planon_dipole(model, cur)
        if syn.violated_z != frozenset(dip):
            raise InvalidCell("planon move did not translate the dipole")
        if dip == start:
            return orbit
        orbit.append(dip)


def planon_period(model: OrthoplexModel) -> int:
    """Expected orbit length ``2 lcm(Lx, Ly)`` in half steps."""
    Lx, Ly = model.shape.sizes[:2]
    return 2 * lcm(Lx, Ly)


# ----------------------------------------------------------------------
# fragmented loops


@dataclass(frozen=True)
class FragmentResult:
    operator: PauliOp
    syndrome: Syndrome
    original: Syndrome


def fragment_loop(
    model: OrthoplexModel, spec: MembraneSpec, offsets: Mapping[Cell, int]
) -> FragmentResult:
    """Membrane operator followed by w-translations of individual loop cells.

    ``offsets[cell] = k`` moves that violated cell ``k`` lattice units along
    w with the string ``X`` on ``cell + (2j + 1) w / 2``, ``j < k``.
    """
    ax = model.p - 1
    Lw = model.shape.sizes[ax]
    op = membrane_operator(model, spec)
    original = syndrome(model, op)
    for cell, k in offsets.items():
        if not 0 <= k < Lw:
            raise OffsetOutOfRange(f"offset {k} for {cell} outside [0, {Lw})")
        cell = model.canonical(cell)
        if cell not in original.violated_z:
            raise InvalidCell(f"{cell} is not part of the loop")
        if k:
            string = [model.canonical(_add(cell, _unit(model.p, ax, 2 * j + 1))) for j in range(k)]
            op = op * x_on(model, string)
    return FragmentResult(op, syndrome(model, op), original)


@dataclass(frozen=True)
class TopologyReport:
    nodes: int
    components: int
    degrees: tuple[int, ...]

    @property
    def all_degree_two(self) -> bool:
        return bool(self.degrees) and all(d == 2 for d in self.degrees)

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "components": self.components,
            "all_degree_two": self.all_degree_two,
        }


def _l1(u: Cell, v: Cell, ext: Sequence[int] | None = None) -> int:
    """Doubled L1 distance, minimum image on axes with a finite ``ext``."""
    if ext is None:
        return sum(abs(a - b) for a, b in zip(u, v))
    total = 0
    for a, b, e in zip(u, v, ext):
        d = abs(a - b)
        total += min(d % e, e - d % e) if e else d
    return total


def _contract_rungs(cells: list[Cell], ext: Sequence[int]) -> list[tuple[Cell, ...]]:
    """Group the two strands of every double line rung into one node."""
    s = set(cells)
    p = len(cells[0]) if cells else 0

    def wrap(c):
        return tuple(v % e if e else v for v, e in zip(c, ext))

    partner: dict[Cell, Cell] = {}
    for u, v in itertools.combinations(sorted(cells), 2):
        if _l1(u, v, ext) != 2:
            continue
        d = [min((y - x) % e, (x - y) % e) if e else abs(y - x) for x, y, e in zip(u, v, ext)]
        if sorted(d) != [0] * (p - 2) + [1, 1]:
            continue
        for mu in range(p):
            if d[mu]:
                continue
            rung = any(
                wrap(_add(u, _unit(p, mu, 2 * s_))) in s and wrap(_add(v, _unit(p, mu, 2 * s_))) in s
                for s_ in (-1, 1)
            )
            if rung and u not in partner and v not in partner:
                partner[u], partner[v] = v, u
                break
    nodes, seen = [], set()
    for c in sorted(cells):
        if c in seen:
            continue
        group = (c, partner[c]) if c in partner else (c,)
        seen.update(group)
        nodes.append(group)
    return nodes


def project_and_classify(
    syn: Syndrome, drop_axis: int, sizes: Sequence[int] | None = None
) -> TopologyReport:
    """Project violated Z-checks along ``drop_axis`` and test for a closed loop.

    Projected cells touch when their doubled L1 distance is at most 2; the two
    strands of a vertical double line are first merged into single nodes.
    Passing the lattice ``sizes`` (projected axis included) makes distances
    periodic; otherwise coordinates are used as given.
    """
    proj = sorted({c[:drop_axis] + c[drop_axis + 1 :] for c in syn.violated_z})
    if not proj:
        return TopologyReport(0, 0, ())
    if sizes is None:
        ext = [0] * len(proj[0])
    else:
        ext = [2 * L for i, L in enumerate(sizes) if i != drop_axis]
        proj = sorted({tuple(v % e for v, e in zip(c, ext)) for c in proj})
    nodes = _contract_rungs(proj, ext)
    adj = [set() for _ in nodes]
    for i, j in itertools.combinations(range(len(nodes)), 2):
        if any(_l1(u, v, ext) <= 2 for u in nodes[i] for v in nodes[j]):
            adj[i].add(j)
            adj[j].add(i)
    comp, seen = 0, set()
    for i in range(len(nodes)):
        if i in seen:
            continue
        comp += 1
        stack = [i]
        while stack:
            k = stack.pop()
            if k in seen:
                continue
            seen.add(k)
            stack.extend(adj[k] - seen)
    return TopologyReport(len(nodes), comp, tuple(len(a) for a in adj))


# ----------------------------------------------------------------------
# alignment of parallel loops


@dataclass(frozen=True)
class AlignmentReport:
    single_sizes: tuple[int, int]
    composite_size: int

    @property
    def lowered(self) -> bool:
        return self.composite_size < sum(self.single_sizes)


def alignment_cancellation(
    model: OrthoplexModel, spec: MembraneSpec, shift: Cell = (1, 1, 0, 0)
) -> AlignmentReport:
    """Loop of ``spec`` together with a copy translated by ``shift`` (doubled).

    The default shift moves an ``x+y`` membrane to the adjacent parallel plane.
    """
    cells = membrane_cells(model, spec)
    moved = [model.canonical(_add(c, shift)) for c in cells]
    if not all(model.is_qubit(c) for c in moved):
        raise SpecOutOfRange("shift does not map qubits to qubits")
    a = syndrome(model, x_on(model, cells))
    b = syndrome(model, x_on(model, moved))
    both = syndrome(model, x_on(model, cells) * x_on(model, moved))
    return AlignmentReport((a.size, b.size), both.size)


@dataclass(frozen=True)
class StackingStage:
    radius: int
    syndrome: Syndrome
    isolated: bool
    mobile_along_free_axis: bool


def stacking_reduction(model: OrthoplexModel, center: Cell, rounds: int = 2) -> list[StackingStage]:
    """Grow a small loop into ever larger octahedra of isolated lineons.

    Stage 0 is the six touching excitations of a single X next to
    ``center``; stage ``r`` stacks six copies of stage ``r - 1`` so that all
    but the outer vertices cancel.
    """
    p = model.p
    ax = free_axis(model)
    stages = []
    seed = model.canonical(_add(center, _unit(p, 0)))
    syn0 = single_x_syndrome(model, seed)
    stages.append(_stage(model, 0, syn0, ax))
    for r in range(rounds):
        syn = syndrome(model, octahedron_operator(model, center, 2**r))
        stages.append(_stage(model, 2 ** (r + 1), syn, ax))
    return stages


def _stage(model: OrthoplexModel, radius: int, syn: Syndrome, ax: int) -> StackingStage:
    cells = list(_unwrap(model, syn.violated_z))
    isolated = bool(cells) and all(_l1(u, v) > 2 for u, v in itertools.combinations(cells, 2))
    mobile = bool(cells) and all(try_move(model, syn, model.canonical(c), ax, 1).clean for c in cells)
    return StackingStage(radius, syn, isolated, mobile)


__all__ = [
    "AlignmentReport",
    "ChaironReport",
    "DiagonalVerdict",
    "FragmentResult",
    "InvalidCell",
    "MembraneSpec",
    "MoveOutcome",
    "OffsetOutOfRange",
    "PLANES",
    "PlaneFrame",
    "Segment",
    "SegmentProfile",
    "SpecOutOfRange",
    "SpecsDoNotShareEdge",
    "StackingStage",
    "Syndrome",
    "TopologyReport",
    "UnrecognizedPattern",
    "alignment_cancellation",
    "chairon_residual",
    "double_line_displacement",
    "fragment_loop",
    "free_axis",
    "lineon_pair",
    "membrane_cells",
    "membrane_operator",
    "mobility_survey",
    "move_lineon",
    "move_planon",
    "octahedron_operator",
    "planon_dipole",
    "planon_orbit",
    "planon_period",
    "project_and_classify",
    "segment_direction",
    "segment_profile",
    "single_x_syndrome",
    "solve_x_syndrome",
    "space_diagonal_check",
    "space_diagonal_segment",
    "stacking_reduction",
    "syndrome",
    "try_move",
    "x_on",
]
