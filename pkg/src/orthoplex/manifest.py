"""JSON manifests for built codes.

A manifest stores the two check matrices as per-row sorted column lists
together with the label of every qubit and check.  Everything that affects
equality lives at the top level; the writing tool's version sits under
``metadata`` and is ignored by :func:`same_payload`.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .chaincx import LabeledBasis, repetition_complex
from .f2core import BitMatrix
from .hgpgen import CssCode, build_css, standard_hgp_partition
from .lattice import LatticeShape
from .model import OrthoplexModel, build_model

FORMAT_VERSION = 1
KINDS = ("orthoplex-pd", "standard-hgp", "custom")


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class Manifest:
    kind: str
    sizes: tuple[int, ...]
    periodic: tuple[bool, ...]
    code: CssCode
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def shape(self) -> LatticeShape:
        return LatticeShape(self.sizes, self.periodic)

    def rebuild(self) -> CssCode:
        """Fresh build of the recorded model (not available for ``custom``)."""
        if self.kind == "orthoplex-pd":
            return build_model(self.shape).code
        if self.kind == "standard-hgp":
            return build_toric_hgp(self.shape)
        raise ManifestError("custom manifests cannot be rebuilt")

    def model(self) -> OrthoplexModel:
        if self.kind != "orthoplex-pd":
            raise ManifestError(f"{self.kind} manifest does not describe an orthoplex model")
        return build_model(self.shape)


def build_toric_hgp(shape: LatticeShape) -> CssCode:
    """Standard product of ``p`` repetition codes, qubits in degree 1."""
    if shape.p < 2:
        raise ManifestError("toric-hgp needs at least two factors")
    factors = [repetition_complex(L, per) for L, per in zip(shape.sizes, shape.periodic)]
    return build_css(factors, standard_hgp_partition(shape.p, 1))


def _tuplify(x):
    return tuple(_tuplify(v) for v in x) if isinstance(x, list) else x


def _labels_json(basis: LabeledBasis) -> list:
    return [list(lab) if isinstance(lab, tuple) else lab for lab in basis]


def _rows(m: BitMatrix) -> list[list[int]]:
    return [sorted(int(c) for c in row) for row in m.row_supports()]


def to_json(m: Manifest) -> dict:
    c = m.code
    return {
        "format_version": FORMAT_VERSION,
        "kind": m.kind,
        "shape": list(m.sizes),
        "periodic": list(m.periodic),
        "n": c.n,
        "hx": _rows(c.hx),
        "hz": _rows(c.hz),
        "qubit_labels": _labels_json(c.qubit_labels),
        "x_labels": _labels_json(c.x_labels),
        "z_labels": _labels_json(c.z_labels),
        "metadata": dict(m.metadata) or {"tool_version": __version__},
    }


def dumps(m: Manifest) -> str:
    return json.dumps(to_json(m), sort_keys=True, separators=(",", ":")) + "\n"


def _matrix(rows: Sequence[Sequence[int]], n: int, name: str) -> BitMatrix:
    for r in rows:
        if list(r) != sorted(set(r)) or any(not 0 <= c < n for c in r):
            raise ManifestError(f"{name}: rows must be sorted, unique column indices below n")
    return BitMatrix.from_supports(n, rows)


def from_json(d: dict) -> Manifest:
    try:
        if d["format_version"] != FORMAT_VERSION:
            raise ManifestError(f"unsupported format_version {d['format_version']}")
        if d["kind"] not in KINDS:
            raise ManifestError(f"unknown kind {d['kind']!r}")
        n = int(d["n"])
        code = CssCode(
            hx=_matrix(d["hx"], n, "hx"),
            hz=_matrix(d["hz"], n, "hz"),
            qubit_labels=LabeledBasis([_tuplify(x) for x in d["qubit_labels"]]),
            x_labels=LabeledBasis([_tuplify(x) for x in d["x_labels"]]),
            z_labels=LabeledBasis([_tuplify(x) for x in d["z_labels"]]),
        )
        return Manifest(
            d["kind"],
            tuple(int(s) for s in d["shape"]),
            tuple(bool(b) for b in d["periodic"]),
            code,
            dict(d.get("metadata", {})),
        )
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"malformed manifest: {exc!r}") from exc
    except ValueError as exc:
        if isinstance(exc, ManifestError):
            raise
        raise ManifestError(str(exc)) from exc


def loads(text: str) -> Manifest:
    try:
        return from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"not JSON: {exc}") from exc


def save(m: Manifest, path: str | Path) -> None:
    Path(path).write_text(dumps(m))


def load(path: str | Path) -> Manifest:
    return loads(Path(path).read_text())


def same_payload(a: Manifest, b: Manifest) -> bool:
    """Bitwise equality of everything except metadata."""
    ja, jb = to_json(a), to_json(b)
    ja.pop("metadata")
    jb.pop("metadata")
    return ja == jb


__all__ = [
    "FORMAT_VERSION",
    "KINDS",
    "Manifest",
    "ManifestError",
    "build_toric_hgp",
    "dumps",
    "from_json",
    "load",
    "loads",
    "same_payload",
    "save",
    "to_json",
]
