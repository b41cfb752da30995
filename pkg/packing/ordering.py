"""
Ordre de chargement des colis
=============================

Construit la liste ordonnée des couples (colis, orientations) :
1. Regroupement des colis identiques
2. Groupes similaires par hauteur réalisable et gerbabilité
3. Cinq critères de tri
4. Randomisation biaisée de degré ρ
5. Choix d'une inclinaison par hauteur
"""
import enum
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .domain import Item, Orientation, Tilt, natural_key
from .exceptions import PackingException


class SortingCriterion(str, enum.Enum):
    STACKABILITY_CUMULATED = 'stackability_cumulated'
    STACKABILITY_HIGHEST = 'stackability_highest'
    CUMULATED_VOLUME = 'cumulated_volume'
    HIGHEST_VOLUME = 'highest_volume'
    RANDOM = 'random'

    @property
    def by_stackability(self) -> bool:
        return self in (SortingCriterion.STACKABILITY_CUMULATED, SortingCriterion.STACKABILITY_HIGHEST)


# ordre d'appel dans la recherche gloutonne randomisée
CRITERIA = (
    SortingCriterion.STACKABILITY_CUMULATED,
    SortingCriterion.STACKABILITY_HIGHEST,
    SortingCriterion.CUMULATED_VOLUME,
    SortingCriterion.HIGHEST_VOLUME,
    SortingCriterion.RANDOM,
)


@dataclass
class IdenticalGroup:
    members: List[Item]

    @property
    def stackable(self) -> bool:
        return self.members[0].stackable

    @property
    def dimensions(self) -> Tuple[int, int, int]:
        return self.members[0].dimensions

    @property
    def cumulated_volume(self) -> int:
        return sum(item.volume for item in self.members)

    @property
    def highest_volume(self) -> int:
        return max(item.volume for item in self.members)

    @property
    def tie_key(self):
        return min(natural_key(item.id) for item in self.members)


@dataclass
class SimilarGroup:
    height: int
    stackable: bool
    groups: List[IdenticalGroup] = field(default_factory=list)

    @property
    def cumulated_volume(self) -> int:
        return sum(group.cumulated_volume for group in self.groups)

    @property
    def highest_volume(self) -> int:
        return max(group.highest_volume for group in self.groups)

    @property
    def tie_key(self):
        return min(group.tie_key for group in self.groups)


def identity_key(item: Item):
    # sans inclinaison la hauteur est figée : la taille exacte fait partie de l'identité
    shape = item.dimensions if item.tiltable else item.size
    return (item.weight, item.rotatable, item.tiltable, item.stackable, shape)


def realizable_heights(item: Item) -> List[int]:
    if item.tiltable:
        return sorted(set(item.size))
    return [item.size[2]]


def build_groups(items: Sequence[Item]) -> Tuple[List[IdenticalGroup], List[SimilarGroup]]:
    """
    Regroupe les colis identiques puis range chaque groupe dans tous les
    groupes similaires S(h, ϑ) dont il peut réaliser la hauteur.
    """
    identical: Dict[tuple, IdenticalGroup] = {}
    for item in items:
        if item.dummy:
            continue
        identical.setdefault(identity_key(item), IdenticalGroup([])).members.append(item)

    similar: Dict[Tuple[int, bool], SimilarGroup] = {}
    for group in identical.values():
        for height in realizable_heights(group.members[0]):
            key = (height, group.stackable)
            similar.setdefault(key, SimilarGroup(height, group.stackable)).groups.append(group)
    return list(identical.values()), list(similar.values())


def sort_groups(groups: Sequence, criterion: SortingCriterion, rng=None) -> list:
    """Tri non croissant selon le critère ; égalités départagées par le plus petit identifiant."""
    criterion = SortingCriterion(criterion)
    if criterion is SortingCriterion.RANDOM:
        if rng is None:
            raise PackingException("Le critère aléatoire exige un générateur", error_code="INVALID_PARAMETER")
        shuffled = sorted(groups, key=lambda g: g.tie_key)
        rng.shuffle(shuffled)
        return shuffled
    if criterion in (SortingCriterion.CUMULATED_VOLUME, SortingCriterion.STACKABILITY_CUMULATED):
        volume = lambda g: g.cumulated_volume
    else:
        volume = lambda g: g.highest_volume
    if criterion.by_stackability:
        return sorted(groups, key=lambda g: (not g.stackable, -volume(g), g.tie_key))
    return sorted(groups, key=lambda g: (-volume(g), g.tie_key))


def _draw(ordered: list, rho: float, rng) -> list:
    remaining = list(ordered)
    result = []
    m = len(remaining)
    for j in range(1, m + 1):
        y = float(rng.random())
        position = math.ceil(y ** (1.0 / rho) * (m - j + 1))
        position = min(max(position, 1), m - j + 1)
        result.append(remaining.pop(position - 1))
    return result


def randomize(ordered: Sequence, rho: float, rng, by_stackability: bool = False) -> list:
    """
    Tirage sans remise : le j-ème élément est pris à la position ⌈y^(1/ρ)(m-j+1)⌉.

    Avec ``by_stackability`` les sous-listes gerbable et non gerbable sont
    randomisées séparément. ρ <= 0 laisse l'ordre inchangé.
    """
    if rho <= 0:
        return list(ordered)
    if not by_stackability:
        return _draw(ordered, rho, rng)
    stackable = [g for g in ordered if g.stackable]
    others = [g for g in ordered if not g.stackable]
    return _draw(stackable, rho, rng) + _draw(others, rho, rng)


def orientations_for(item: Item, height: int) -> Tuple[Orientation, ...]:
    """Une seule inclinaison réalisant la hauteur, avec et sans rotation."""
    tilts = (Tilt.NONE, Tilt.ACROSS_X, Tilt.ACROSS_Y) if item.tiltable else (Tilt.NONE,)
    for tilt in tilts:
        size = Orientation(tilt).apply(item.size)
        if size[2] != height:
            continue
        orientations = [Orientation(tilt, False)]
        if item.rotatable and size[0] != size[1]:
            orientations.append(Orientation(tilt, True))
        return tuple(orientations)
    raise PackingException(
        f"Hauteur {height} irréalisable pour le colis {item.id}",
        error_code="HEIGHT_UNREALIZABLE",
        details={'item': item.id, 'height': height},
    )


def build_order(items: Sequence[Item], criterion: SortingCriterion, rho: float, rng) -> List[Tuple[Item, Tuple[Orientation, ...]]]:
    criterion = SortingCriterion(criterion)
    _, similar = build_groups(items)
    order = []
    similar = randomize(sort_groups(similar, criterion, rng), rho, rng, criterion.by_stackability)
    for group in similar:
        identical = randomize(sort_groups(group.groups, criterion, rng), rho, rng, criterion.by_stackability)
        for members in identical:
            for item in members.members:
                order.append((item, orientations_for(item, group.height)))
    return order
