"""
Homology models: linking tables, classes in Z^g and intersection counts.
"""
from dataclasses import dataclass

import numpy as np


def format_class(coords) -> str:
    return '(' + ','.join(str(c) for c in coords) + ')'


@dataclass(frozen=True)
class HomologyClass:
    """Coordinate i is the total linking number with loop l_i."""
    coords: tuple[int, ...]

    @classmethod
    def zero(cls, genus: int) -> 'HomologyClass':
        return cls(coords=(0,) * genus)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: 'HomologyClass') -> 'HomologyClass':
        return HomologyClass(tuple(int(c) for c in np.add(self.coords, other.coords)))

    def __neg__(self) -> 'HomologyClass':
        return HomologyClass(tuple(-c for c in self.coords))

    def __str__(self) -> str:
        return format_class(self.coords)


@dataclass(frozen=True)
class LinkingTable:
    """Pairwise linking numbers; the diagonal is left at zero."""
    matrix: tuple[tuple[int, ...], ...]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=int).reshape(len(self.matrix), len(self.matrix))

    @property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.array, self.array.T))

    def lk(self, a: int, b: int) -> int:
        return self.matrix[a - 1][b - 1]

    def lines(self) -> list:
        n = len(self.matrix)
        return [f"lk {a} {b} = {self.lk(a, b)}" for a in range(1, n + 1) for b in range(a + 1, n + 1)]


@dataclass(frozen=True)
class IntersectionMatrix:
    """|C_i ∩ C_j''| as recorded at construction time."""
    entries: tuple[tuple[int, ...], ...]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=int).reshape(len(self.entries), len(self.entries))

    @property
    def passes(self) -> bool:
        return bool(np.array_equal(self.array, np.eye(len(self.entries), dtype=int)))

    def to_line(self) -> str:
        body = ';'.join(','.join(str(v) for v in row) for row in self.entries) or '-'
        return f"delta: {body} {'pass' if self.passes else 'fail'}"

    @classmethod
    def from_text(cls, body: str) -> 'IntersectionMatrix':
        if body == '-':
            return cls(entries=())
        return cls(entries=tuple(tuple(int(v) for v in row.split(',')) for row in body.split(';')))
