"""
Points extrêmes
===============

Ensemble ordonné des positions candidates : initialisation à l'origine,
génération après chaque chargement par projection des coins du colis vers
l'origine (avec ensemble d'objets bloquants et extension de surface), point
au sommet du colis, et déplacement en +y contre une facette critique.
"""
import bisect
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .domain import AlgoParams, Placement, Uld, Vector
from .exceptions import PackingException
from .geometry import TOLERANCE, FacetPlane


@dataclass(frozen=True)
class ExtremePoint:
    coords: Vector
    facets: FrozenSet[int] = frozenset()

    @property
    def on_facet(self) -> Optional[int]:
        return min(self.facets) if self.facets else None


def facets_of(coords: Sequence[float], uld: Optional[Uld]) -> FrozenSet[int]:
    if uld is None:
        return frozenset()
    return frozenset(i for i, plane in enumerate(uld.planes) if plane.contains(coords))


class EpStore:
    """Ensemble sans doublon, trié selon la permutation d'axes configurée."""

    def __init__(self, sort_axes: Sequence[int] = (2, 1, 0)):
        self.sort_axes = tuple(sort_axes)
        self._points: Dict[Vector, ExtremePoint] = {}
        self._keys: List[Tuple[int, ...]] = []

    def _key(self, coords: Vector) -> Tuple[int, ...]:
        return tuple(coords[a] for a in self.sort_axes)

    def add(self, point: ExtremePoint) -> None:
        existing = self._points.get(point.coords)
        if existing is not None:
            if not point.facets <= existing.facets:
                self._points[point.coords] = ExtremePoint(point.coords, existing.facets | point.facets)
            return
        self._points[point.coords] = point
        bisect.insort(self._keys, self._key(point.coords))

    def extend(self, points: Iterable[ExtremePoint]) -> None:
        for point in points:
            self.add(point)

    def _coords_of(self, key: Tuple[int, ...]) -> Vector:
        coords = [0, 0, 0]
        for axis, value in zip(self.sort_axes, key):
            coords[axis] = value
        return tuple(coords)

    def ordered(self) -> List[ExtremePoint]:
        return [self._points[self._coords_of(key)] for key in self._keys]

    def __iter__(self) -> Iterator[ExtremePoint]:
        return iter(self.ordered())

    def __len__(self):
        return len(self._points)

    def __contains__(self, coords) -> bool:
        return tuple(coords) in self._points


def init_store(uld: Optional[Uld] = None, sort_axes: Sequence[int] = (2, 1, 0)) -> EpStore:
    store = EpStore(sort_axes)
    origin = (0, 0, 0)
    store.add(ExtremePoint(origin, facets_of(origin, uld)))
    return store


def next_point(store: EpStore, visited: Set[Vector]) -> Optional[ExtremePoint]:
    for point in store:
        if point.coords not in visited:
            return point
    return None


# =============================================================================
# DÉPLACEMENT CONTRE UNE FACETTE CRITIQUE
# =============================================================================

def move_point(coords: Sequence[float], item_size: Sequence[int], plane: FacetPlane) -> Tuple[float, float, float]:
    """
    Décale le point en +y pour que le coin haut côté origine du colis touche le plan.

    Returns:
        tuple: point déplacé (non arrondi), ou le point d'origine si ν <= 0
    """
    if not plane.critical:
        raise PackingException(
            "Le déplacement exige une facette critique",
            error_code="NOT_CRITICAL_FACET",
            details={'normal': list(plane.normal)},
        )
    _, n2, n3 = plane.normal
    e1, e2, e3 = coords
    nu = (plane.offset - n2 * e2 - n3 * (e3 + item_size[2])) / n2
    if nu > 0:
        return (e1, e2 + nu, e3)
    return tuple(coords)


def resolve_position(point: ExtremePoint, item_size: Sequence[int], uld: Uld, algo: AlgoParams) -> Vector:
    """Position effectivement essayée : le point, éventuellement déplacé puis arrondi."""
    if not algo.use_moving or algo.crainic_mimic:
        return point.coords
    if not any(uld.planes[f].allows_moving for f in point.facets):
        return point.coords
    y = point.coords[1]
    for plane in uld.critical_planes:
        y = max(y, move_point(point.coords, item_size, plane)[1])
    if y <= point.coords[1]:
        return point.coords
    x, _, z = point.coords
    return (x, math.ceil(y - TOLERANCE), z)


# =============================================================================
# PROJECTION ET GÉNÉRATION
# =============================================================================

def wall_coordinate(p: Sequence[int], d: int, uld: Optional[Uld]) -> Tuple[int, Optional[int]]:
    """Coordonnée de sortie du rayon -d : 0, ou l'intersection avec une facette inclinée."""
    t = 0.0
    facet = None
    if uld is not None:
        for index, plane in enumerate(uld.planes):
            n = plane.normal
            if not plane.tilted or n[d] <= TOLERANCE:
                continue
            rest = sum(n[k] * p[k] for k in range(3) if k != d)
            t_star = (plane.offset - rest) / n[d]
            if t_star > t:
                t, facet = t_star, index
    return math.ceil(t - TOLERANCE), facet


class _Emitter:
    def __init__(self, uld: Optional[Uld]):
        self.uld = uld
        self.points: Dict[Vector, FrozenSet[int]] = {}

    def emit(self, coords: Sequence[int], facet: Optional[int] = None) -> None:
        coords = tuple(int(c) for c in coords)
        if self.uld is not None:
            if any(c < 0 or c > b for c, b in zip(coords, self.uld.bounding_box)):
                return
            if not self.uld.contains_point(coords):
                return
        facets = facets_of(coords, self.uld)
        if facet is not None:
            facets = facets | {facet}
        self.points[coords] = self.points.get(coords, frozenset()) | facets

    def result(self) -> List[ExtremePoint]:
        return [ExtremePoint(coords, facets) for coords, facets in self.points.items()]


def _end_sort_key(d: int):
    return lambda placement: (-(placement.position[d] + placement.size[d]), placement.position, placement.size)


def _project(p: Sequence[int], d: int, loaded: Sequence[Placement], uld: Optional[Uld],
             use_blocking: bool, crainic: bool, emitter: _Emitter) -> None:
    theta, eta = (a for a in range(3) if a != d)
    e = list(p)
    blocking: List[Placement] = []
    for item in sorted(loaded, key=_end_sort_key(d)):
        c, s = item.position, item.size
        end = c[d] + s[d]
        if c[d] >= p[d] or c[theta] + s[theta] <= p[theta] or c[eta] + s[eta] <= p[eta]:
            continue
        direct = p[theta] >= c[theta] and p[eta] >= c[eta]
        emits = end <= p[d] and (d != 2 or item.stackable)
        if crainic:
            if not direct:
                continue
            if emits:
                e[d] = end
                emitter.emit(e)
            return
        if use_blocking and any(
            (c[theta] >= b.position[theta] or p[theta] >= b.position[theta])
            and (c[eta] >= b.position[eta] or p[eta] >= b.position[eta])
            for b in blocking
        ):
            continue
        if emits:
            e[d] = end
            emitter.emit(e)
        if direct:
            return
        if use_blocking:
            blocking.append(item)
    e[d], facet = wall_coordinate(p, d, uld)
    emitter.emit(e, facet)


def project(p: Sequence[int], d: int, loaded: Sequence[Placement], uld: Optional[Uld] = None,
            use_blocking: bool = True, crainic: bool = False) -> List[ExtremePoint]:
    """
    Projette le point p vers l'origine le long de l'axe d.

    Les objets sont parcourus par extrémité décroissante selon d. Un point est
    émis sur chaque objet pertinent non bloqué ; la projection s'arrête sur le
    premier objet touché directement, sinon elle atteint la paroi.
    """
    emitter = _Emitter(uld)
    _project(tuple(p), d, loaded, uld, use_blocking, crainic, emitter)
    return emitter.result()


def generate_new_points(loaded: Sequence[Placement], new: Placement, uld: Optional[Uld],
                        algo: AlgoParams) -> List[ExtremePoint]:
    emitter = _Emitter(uld)
    e, s = new.position, new.size
    for j in range(3):
        if j == 2 and not new.stackable:
            continue
        for d in range(3):
            if d == j:
                continue
            p = list(e)
            p[j] += s[j]
            if not algo.crainic_mimic:
                p[d] += s[d]
            _project(tuple(p), d, loaded, uld, algo.use_blocking, algo.crainic_mimic, emitter)
    if new.stackable and not algo.crainic_mimic:
        emitter.emit((e[0], e[1], e[2] + s[2]))
    return emitter.result()
