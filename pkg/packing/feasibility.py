"""
Contrôles de faisabilité
========================

Décide si un colis peut être chargé à un point : dépassement des parois,
collisions, et contrôle combiné de non-flottement et de gerbabilité.
Chaque contrôle existe en version accélérée par la grille et en version naïve.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from .domain import AlgoParams, Item, Orientation, PackingParams, Placement, SupportMode, Uld
from .exceptions import BudgetExhausted
from .geometry import base_area_overlap, fits_bounding_box, inside_tilted_facet, triple_base_area_overlap
from .grid import NaiveIndex, SpatialGrid

logger = logging.getLogger(__name__)

AREA_TOLERANCE = 1e-9


def collides(a_position: Sequence[int], a_size: Sequence[int],
             b_position: Sequence[int], b_size: Sequence[int]) -> bool:
    """Intersection stricte de boîtes ouvertes ; le contact n'est pas une collision."""
    return all(
        b_position[d] < a_position[d] + a_size[d] and a_position[d] < b_position[d] + b_size[d]
        for d in range(3)
    )


def floor_placement(uld: Uld) -> Placement:
    """Colis artificiel modélisant le plancher : sommet à z = 0 sur toute l'empreinte."""
    b1, b2, _ = uld.bounding_box
    floor = Item(id=f"{uld.id}:floor", size=(b1, b2, 1), weight=0, rotatable=False, stackable=True, dummy=True)
    return Placement(floor, Orientation(), (0, 0, -1))


@dataclass(frozen=True)
class SupportReport:
    directly_supported: bool
    supported_area: float
    supported_corner_count: int
    verdict: bool


def _bottom_corners(candidate: Placement):
    x, y, _ = candidate.position
    s1, s2, _ = candidate.size
    return ((x, y), (x + s1, y), (x, y + s2), (x + s1, y + s2))


def _covers(support: Placement, point) -> bool:
    x, y = point
    return (support.position[0] <= x <= support.position[0] + support.size[0]
            and support.position[1] <= y <= support.position[1] + support.size[1])


def check_support(loaded: Iterable[Placement], candidate: Placement, params: PackingParams) -> SupportReport:
    """
    Contrôle de non-flottement et de gerbabilité.

    Les supports retenus recouvrent l'empreinte ouverte du candidat et ont leur
    sommet dans [z - ℏ, z]. L'aire supportée cumule les recouvrements en
    retranchant les recouvrements triples avec les supports plus hauts déjà vus.
    """
    x, y, z = candidate.position
    s1, s2, _ = candidate.size
    lowest = z - params.max_padding_height

    relevant = [
        support for support in loaded
        if lowest <= support.top <= z
        and support.position[0] < x + s1 and x < support.position[0] + support.size[0]
        and support.position[1] < y + s2 and y < support.position[1] + support.size[1]
    ]
    relevant.sort(key=lambda support: -support.top)

    corners = _bottom_corners(candidate)
    supported_corners = set()
    directly = False
    area = 0.0
    seen: List[Placement] = []
    for support in relevant:
        rests = support.top == z
        if not support.stackable:
            if rests:
                return SupportReport(directly, area, len(supported_corners), False)
            seen.append(support)
            continue
        if rests:
            directly = True
            supported_corners.update(k for k, corner in enumerate(corners) if _covers(support, corner))
        additional = base_area_overlap(support, candidate)
        for previous in seen:
            additional -= triple_base_area_overlap(support, previous, candidate)
        if additional > 0:
            area += additional
        seen.append(support)

    corner_count = len(supported_corners)
    if params.corner_support_mode is SupportMode.CORNERS_ONLY:
        verdict = directly and corner_count == 4
    else:
        needed = params.min_item_overlap * s1 * s2
        verdict = directly and (corner_count == 4 or area >= needed - AREA_TOLERANCE)
    return SupportReport(directly, area, corner_count, verdict)


# =============================================================================
# ÉTAT DE CHARGEMENT ET BUDGET
# =============================================================================

class CheckBudget:
    """
    Compteur de vérifications de points extrêmes.

    Tant que ``enforced`` est faux les vérifications sont comptées sans limite.
    """

    def __init__(self, limit: int, enforced: bool = True):
        self.limit = limit
        self.used = 0
        self.enforced = enforced

    @property
    def exhausted(self) -> bool:
        return self.used >= self.limit

    def spend(self) -> None:
        if self.enforced and self.used >= self.limit:
            raise BudgetExhausted(self.used)
        self.used += 1


class LoadingState:
    """État mutable d'un chargement en cours dans une ULD."""

    def __init__(self, uld: Uld, params: PackingParams, algo: AlgoParams, cell_size: float,
                 budget: Optional[CheckBudget] = None):
        self.uld = uld
        self.params = params
        self.algo = algo
        self.budget = budget or CheckBudget(algo.max_ep_checks, enforced=False)
        self.placements: List[Placement] = []
        self.index = SpatialGrid(uld.bounding_box, cell_size) if algo.use_grid else NaiveIndex()
        self.floor = floor_placement(uld)
        self.loaded_weight = 0
        self.loaded_volume = 0

    def place(self, placement: Placement) -> None:
        self.placements.append(placement)
        self.index.register(placement)
        if not placement.item.dummy:
            self.loaded_weight += placement.item.weight
            self.loaded_volume += placement.item.volume


def fits_uld(uld: Uld, position: Sequence[int], size: Sequence[int]) -> bool:
    """Boîte englobante puis facettes inclinées."""
    if not fits_bounding_box(position, size, uld.bounding_box):
        return False
    return all(inside_tilted_facet(position, size, plane) for plane in uld.tilted_planes)


def can_load_at(state: LoadingState, item: Item, orientation: Orientation, point: Sequence[int]) -> bool:
    """
    Vérifie si le colis peut être chargé au point avec l'orientation donnée.

    Raises:
        BudgetExhausted: le budget de vérifications est atteint
    """
    state.budget.spend()
    candidate = Placement(item, orientation, point)
    size = candidate.size
    if not fits_uld(state.uld, candidate.position, size):
        return False
    if state.loaded_weight + item.weight > state.uld.weight_capacity:
        return False
    if state.loaded_volume + item.volume > state.uld.volume_capacity:
        return False
    for other in state.index.candidates_colliding(candidate.position, size):
        if collides(candidate.position, size, other.position, other.size):
            return False
    below = state.index.candidates_below(candidate.position, size, state.params.max_padding_height)
    report = check_support([state.floor, *below], candidate, state.params)
    return report.verdict
