"""Two-row partitions of k spins and their coupling-path combinatorics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np


@dataclass(frozen=True)
class YoungDiagram:
    """Two-row partition [lambda1, lambda2] labelling a joint spin sector."""

    lambda1: int
    lambda2: int

    def __post_init__(self):
        if not isinstance(self.lambda1, int) or not isinstance(self.lambda2, int):
            raise ValueError("row lengths must be integers")
        if not self.lambda1 >= self.lambda2 >= 0:
            raise ValueError(f"rows must satisfy lambda1 >= lambda2 >= 0, got [{self.lambda1},{self.lambda2}]")

    @property
    def k(self) -> int:
        return self.lambda1 + self.lambda2

    @property
    def spin(self) -> float:
        """Total spin j = (lambda1 - lambda2) / 2."""
        return (self.lambda1 - self.lambda2) / 2

    @property
    def num_weights(self) -> int:
        return self.lambda1 - self.lambda2 + 1

    def weights(self) -> np.ndarray:
        """Total J_z eigenvalues carried by the sector, ascending."""
        return -self.spin + np.arange(self.num_weights, dtype=float)

    def weight_index(self, omega: float) -> int:
        i = int(round(omega + self.spin))
        if not 0 <= i < self.num_weights or abs(i - self.spin - omega) > 1e-9:
            raise ValueError(f"weight {omega} not valid for [{self.lambda1},{self.lambda2}]")
        return i

    def __str__(self):
        return f"[{self.lambda1},{self.lambda2}]"


def list_diagrams(k: int) -> list[YoungDiagram]:
    """All two-row partitions of k, first row decreasing."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return [YoungDiagram(k - r, r) for r in range(k // 2 + 1)]


def hook_dim(lam: YoungDiagram) -> int:
    """Number of standard tableaux of the diagram (hook length formula)."""
    l1, l2 = lam.lambda1, lam.lambda2
    return factorial(l1 + l2) * (l1 - l2 + 1) // (factorial(l2) * factorial(l1 + 1))


@lru_cache(maxsize=None)
def _multiplicity_table(k: int) -> dict[tuple[int, int], int]:
    # one branching step per added spin: grow either row, keep rows ordered
    if k == 1:
        return {(1, 0): 1}
    table: dict[tuple[int, int], int] = {}
    for (l1, l2), count in _multiplicity_table(k - 1).items():
        for grown in ((l1 + 1, l2), (l1, l2 + 1)):
            if grown[0] >= grown[1]:
                table[grown] = table.get(grown, 0) + count
    return table


def multiplicity(k: int, lam: YoungDiagram) -> int:
    """Number of equivalent copies of a sector, via the branching recursion."""
    if lam.k != k:
        raise ValueError(f"[{lam.lambda1},{lam.lambda2}] is not a partition of {k}")
    return _multiplicity_table(k).get((lam.lambda1, lam.lambda2), 0)


def coupling_paths(k: int) -> dict[YoungDiagram, list[tuple[float, ...]]]:
    """Intermediate-spin sequences, grouped by final sector, lexicographic order."""
    if k < 1:
        raise ValueError("k must be at least 1")
    paths: list[tuple[float, ...]] = [(0.5,)]
    for _ in range(k - 1):
        grown = []
        for p in paths:
            j = p[-1]
            if j > 0:
                grown.append(p + (j - 0.5,))
            grown.append(p + (j + 0.5,))
        paths = grown
    grouped: dict[YoungDiagram, list[tuple[float, ...]]] = {}
    for p in sorted(paths):
        j = p[-1]
        lam = YoungDiagram(int(round(k / 2 + j)), int(round(k / 2 - j)))
        grouped.setdefault(lam, []).append(p)
    return grouped
