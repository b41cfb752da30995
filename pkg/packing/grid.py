"""
Grille spatiale d'accélération
==============================

Grille uniforme de cellules cubiques semi-ouvertes sur la boîte englobante de
l'ULD. Les placements y sont enregistrés pour retrouver rapidement les
candidats des contrôles de collision et de support. ``NaiveIndex`` offre la
même interface par parcours complet (variante sans grille, oracle de test).
"""
import math
from typing import Dict, Iterable, List, Sequence, Tuple

from .domain import Item, Placement
from .exceptions import PackingException

CellRange = Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]

# epsilon des intervalles semi-ouverts en coordonnées entières
EPSILON = 1


def mean_edge(items: Iterable[Item]) -> float:
    items = list(items)
    if not items:
        raise PackingException("Taille moyenne indéfinie sans colis", error_code="EMPTY_ITEM_SET")
    return sum(sum(item.size) for item in items) / (3 * len(items))


class SpatialGrid:
    """Grille de cellules (s̄, s̄, s̄) couvrant la boîte englobante."""

    def __init__(self, bounding_box: Sequence[int], cell_size: float):
        if cell_size <= 0:
            raise PackingException("Taille de cellule non positive", error_code="INVALID_PARAMETER")
        self.cell_size = float(cell_size)
        self.dims = tuple(max(1, math.ceil(b / self.cell_size)) for b in bounding_box)
        self.cells: Dict[Tuple[int, int, int], List[int]] = {}
        self.placements: List[Placement] = []

    def __len__(self):
        return len(self.placements)

    def _index(self, value: float, axis: int) -> int:
        return min(max(math.floor(value / self.cell_size), 0), self.dims[axis] - 1)

    def cells_for_box(self, position: Sequence[int], size: Sequence[int]) -> CellRange:
        return tuple(
            (self._index(position[d], d), self._index(position[d] + size[d] - EPSILON, d))
            for d in range(3)
        )

    def _cells(self, ranges: CellRange):
        (x0, x1), (y0, y1), (z0, z1) = ranges
        for i in range(x0, x1 + 1):
            for j in range(y0, y1 + 1):
                for k in range(z0, z1 + 1):
                    yield (i, j, k)

    def register(self, placement: Placement) -> None:
        index = len(self.placements)
        self.placements.append(placement)
        for cell in self._cells(self.cells_for_box(placement.position, placement.size)):
            self.cells.setdefault(cell, []).append(index)

    def _collect(self, ranges: CellRange) -> List[Placement]:
        found = set()
        for cell in self._cells(ranges):
            found.update(self.cells.get(cell, ()))
        return [self.placements[i] for i in sorted(found)]

    def candidates_colliding(self, position: Sequence[int], size: Sequence[int]) -> List[Placement]:
        return self._collect(self.cells_for_box(position, size))

    def candidates_below(self, position: Sequence[int], size: Sequence[int], padding: int) -> List[Placement]:
        """Placements enregistrés dans la tranche [e3 - ℏ - ε, e3) sous l'empreinte."""
        if position[2] - EPSILON < 0:
            return []
        ranges = (
            (self._index(position[0], 0), self._index(position[0] + size[0] - EPSILON, 0)),
            (self._index(position[1], 1), self._index(position[1] + size[1] - EPSILON, 1)),
            (self._index(position[2] - padding - EPSILON, 2), self._index(position[2] - EPSILON, 2)),
        )
        return self._collect(ranges)


class NaiveIndex:
    """Même interface que SpatialGrid, sans filtrage."""

    def __init__(self):
        self.placements: List[Placement] = []

    def __len__(self):
        return len(self.placements)

    def register(self, placement: Placement) -> None:
        self.placements.append(placement)

    def candidates_colliding(self, position, size) -> List[Placement]:
        return list(self.placements)

    def candidates_below(self, position, size, padding) -> List[Placement]:
        return list(self.placements)
