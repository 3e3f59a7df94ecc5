"""Pauli operators as pairs of GF(2) supports (phases ignored)."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .f2core import BitVector


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PauliOp:
    x: BitVector
    z: BitVector

    def __post_init__(self):
        if self.x.length != self.z.length:
            raise LengthMismatch("x and z supports differ in length")

    @classmethod
    def identity(cls, n: int) -> PauliOp:
        return cls(BitVector.zeros(n), BitVector.zeros(n))

    @classmethod
    def from_indices(cls, n: int, x: Iterable[int] = (), z: Iterable[int] = ()) -> PauliOp:
        return cls(BitVector.from_support(n, x), BitVector.from_support(n, z))

    @classmethod
    def from_cells(cls, model, x: Iterable = (), z: Iterable = ()) -> PauliOp:
        """Operator on ``model`` with X on cells ``x`` and Z on cells ``z`` (repeats cancel)."""
        return cls.from_indices(
            model.n, [model.qubit_index(c) for c in x], [model.qubit_index(c) for c in z]
        )

    @property
    def n(self) -> int:
        return self.x.length

    def __mul__(self, other: PauliOp) -> PauliOp:
        if self.n != other.n:
            raise LengthMismatch(f"{self.n} vs {other.n} qubits")
        return PauliOp(self.x ^ other.x, self.z ^ other.z)

    def commutes_with(self, other: PauliOp) -> bool:
        return (self.x.dot(other.z) ^ self.z.dot(other.x)) == 0

    def weight(self) -> int:
        """Number of qubits acted on non-trivially."""
        return int(np.bitwise_count(self.x.words | self.z.words).sum())

    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def x_cells(self, model) -> list:
        return [model.qubit_cells[i] for i in self.x.support()]

    def z_cells(self, model) -> list:
        return [model.qubit_cells[i] for i in self.z.support()]


__all__ = ["LengthMismatch", "PauliOp"]
