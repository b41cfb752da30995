"""
Fermeture des trous
===================

Post-traitement d'un chargement : détection des espaces vides horizontaux
vers le centre de l'ULD, construction de l'ensemble des colis à déplacer
ensemble, puis glissement par recherche dichotomique vers le centre.
"""
import enum
import logging
from typing import List, NamedTuple, Sequence, Tuple

from .domain import PackingParams, Placement, UldLoad
from .feasibility import check_support, collides, fits_uld, floor_placement
from .geometry import interval_overlap

logger = logging.getLogger(__name__)


class Direction(str, enum.Enum):
    PLUS_X = '+x'
    MINUS_X = '-x'
    PLUS_Y = '+y'
    MINUS_Y = '-y'

    @property
    def axis(self) -> int:
        return 0 if self.value.endswith('x') else 1

    @property
    def sign(self) -> int:
        return 1 if self.value.startswith('+') else -1

    @classmethod
    def of(cls, axis: int, sign: int) -> 'Direction':
        return cls(f"{'+' if sign > 0 else '-'}{'xy'[axis]}")


class Hole(NamedTuple):
    index: int
    placement: Placement
    direction: Direction


def _cross_axes(axis: int) -> Tuple[int, int]:
    return (1 - axis, 2)


def _faces(a: Placement, b: Placement, axis: int) -> bool:
    """Recouvrement ouvert sur l'autre axe horizontal et sur z."""
    return all(
        interval_overlap(a.position[k], a.end[k], b.position[k], b.end[k]) > 0
        for k in _cross_axes(axis)
    )


def centerward(placement: Placement, bounding_box, axis: int) -> int:
    return 1 if placement.center[axis] < bounding_box[axis] / 2 else -1


def find_holes(load: UldLoad) -> List[Hole]:
    placements = load.placements
    bounding_box = load.uld.bounding_box
    holes = []
    for index, placement in enumerate(placements):
        if placement.item.dummy:
            continue
        for axis in (0, 1):
            sign = centerward(placement, bounding_box, axis)
            position = list(placement.position)
            size = list(placement.size)
            if sign > 0:
                position[axis] = placement.end[axis]
                if position[axis] + 1 > bounding_box[axis]:
                    continue
            else:
                position[axis] = placement.position[axis] - 1
                if position[axis] < 0:
                    continue
            size[axis] = 1
            if any(collides(position, size, other.position, other.size)
                   for k, other in enumerate(placements) if k != index):
                continue
            blocked = any(
                not other.item.dummy and _faces(placement, other, axis)
                and (other.position[axis] >= placement.end[axis] if sign > 0 else other.end[axis] <= placement.position[axis])
                for k, other in enumerate(placements) if k != index
            )
            if blocked:
                holes.append(Hole(index, placement, Direction.of(axis, sign)))
    return holes


def movable_set(load: UldLoad, index: int, padding: int = 0) -> List[int]:
    """
    Ensemble des colis à déplacer avec le colis ``index``.

    La boîte englobante de l'ensemble grossit avec tout colis qui la coupe ou
    repose dessus ; l'ensemble est vide dès qu'un tel colis est plus bas que
    le colis de départ.
    """
    placements = load.placements
    base = placements[index].position[2]
    group = [index]
    while True:
        lo = [min(placements[k].position[d] for k in group) for d in range(3)]
        hi = [max(placements[k].end[d] for k in group) for d in range(3)]
        size = [h - l for h, l in zip(hi, lo)]
        found = []
        for k, other in enumerate(placements):
            if k in group or other.item.dummy:
                continue
            intersects = collides(lo, size, other.position, other.size)
            on_top = (hi[2] <= other.position[2] <= hi[2] + padding
                      and interval_overlap(lo[0], hi[0], other.position[0], other.end[0]) > 0
                      and interval_overlap(lo[1], hi[1], other.position[1], other.end[1]) > 0)
            if intersects or on_top:
                found.append(k)
        if not found:
            return sorted(group)
        if any(placements[k].position[2] < base for k in found):
            return []
        group.extend(found)


def _collision_limit(load: UldLoad, group: Sequence[int], direction: Direction) -> int:
    axis, sign = direction.axis, direction.sign
    moving = [load.placements[k] for k in group]
    others = [p for k, p in enumerate(load.placements) if k not in group]
    if sign > 0:
        limit = load.uld.bounding_box[axis] - max(p.end[axis] for p in moving)
    else:
        limit = min(p.position[axis] for p in moving)
    for q in moving:
        for other in others:
            if not _faces(q, other, axis):
                continue
            if sign > 0 and other.position[axis] >= q.end[axis]:
                limit = min(limit, other.position[axis] - q.end[axis])
            elif sign < 0 and other.end[axis] <= q.position[axis]:
                limit = min(limit, q.position[axis] - other.end[axis])
    return max(0, limit)


def _translated(load: UldLoad, group: Sequence[int], direction: Direction, offset: int) -> List[Placement]:
    delta = [0, 0, 0]
    delta[direction.axis] = direction.sign * offset
    members = set(group)
    return [p.translated(delta) if k in members else p for k, p in enumerate(load.placements)]


def _feasible(load: UldLoad, placements: Sequence[Placement], group: Sequence[int], params: PackingParams) -> bool:
    members = set(group)
    floor = floor_placement(load.uld)
    for k in members:
        moved = placements[k]
        if not fits_uld(load.uld, moved.position, moved.size):
            return False
        for j, other in enumerate(placements):
            if j not in members and collides(moved.position, moved.size, other.position, other.size):
                return False
    for k, placement in enumerate(placements):
        if placement.item.dummy:
            continue
        others = [floor] + [p for j, p in enumerate(placements) if j != k]
        if not check_support(others, placement, params).verdict:
            return False
    return True


def slide(load: UldLoad, group: Sequence[int], direction: Direction, params: PackingParams) -> Tuple[UldLoad, int]:
    """
    Déplace l'ensemble vers le centre du plus grand décalage admissible.

    Returns:
        tuple: (chargement mis à jour, décalage appliqué)
    """
    direction = Direction(direction)
    limit = _collision_limit(load, group, direction)
    if limit == 0:
        return load, 0

    def feasible(offset: int) -> bool:
        return _feasible(load, _translated(load, group, direction, offset), group, params)

    if feasible(limit):
        best = limit
    else:
        lo, hi = 0, limit - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if feasible(mid):
                lo = mid
            else:
                hi = mid - 1
        best = lo
    if best == 0:
        return load, 0
    return load.with_placements(_translated(load, group, direction, best)), best


def close_holes(load: UldLoad, params: PackingParams, max_iters: int = 100) -> UldLoad:
    """Répète détection et glissement, un axe à la fois, jusqu'au point fixe."""
    moves = 0
    for _ in range(max_iters):
        moved = False
        for axis in (0, 1):
            for hole in find_holes(load):
                if hole.direction.axis != axis:
                    continue
                group = movable_set(load, hole.index, params.max_padding_height)
                if not group:
                    continue
                load, offset = slide(load, group, hole.direction, params)
                if offset > 0:
                    moved = True
                    moves += 1
                    break
        if not moved:
            break
    if moves:
        logger.debug(f"✅ {load.uld.id}: {moves} déplacements de fermeture de trous")
    return load
