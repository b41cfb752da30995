"""
MODÈLE DU DOMAINE - ULDPACK

Types de valeur immuables partagés par tout le solveur :
1. Colis (Item) et orientations
2. ULD (sommets, facettes, capacités, bord et sous-structure)
3. Placements, chargements d'ULD et solutions
4. Paramètres de chargement et paramètres de l'algorithme

Coordonnées et dimensions sont entières (unités de longueur).
"""
import enum
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from .exceptions import PackingException
from .geometry import TOLERANCE, FacetPlane, plane_from_vertices

Vector = Tuple[int, int, int]
AXES = ('x', 'y', 'z')


def natural_key(identifier: str):
    """Clé de tri des identifiants : numériques d'abord, par valeur."""
    text = str(identifier)
    return tuple((0, int(tok), '') if tok.isdigit() else (1, 0, tok) for tok in re.findall(r'\d+|\D+', text))


# =============================================================================
# COLIS ET ORIENTATIONS
# =============================================================================

class Tilt(str, enum.Enum):
    NONE = 'none'
    ACROSS_X = 'across_x'
    ACROSS_Y = 'across_y'


@dataclass(frozen=True)
class Orientation:
    """
    Orientation d'un colis : l'inclinaison s'applique d'abord, puis la rotation.

    across_x : (s1, s2, s3) -> (s1, s3, s2)
    across_y : (s1, s2, s3) -> (s3, s2, s1)
    rotation : échange des deux premières composantes
    """
    tilt: Tilt = Tilt.NONE
    rotated: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'tilt', Tilt(self.tilt))

    def apply(self, size: Sequence[int]) -> Vector:
        s1, s2, s3 = size
        if self.tilt is Tilt.ACROSS_X:
            s1, s2, s3 = s1, s3, s2
        elif self.tilt is Tilt.ACROSS_Y:
            s1, s2, s3 = s3, s2, s1
        if self.rotated:
            s1, s2 = s2, s1
        return (s1, s2, s3)

    @property
    def label(self) -> str:
        return f"{self.tilt.value}{'+rot' if self.rotated else ''}"


ALL_ORIENTATIONS = tuple(Orientation(tilt, rotated) for tilt in Tilt for rotated in (False, True))
IDENTITY = Orientation()


@dataclass(frozen=True)
class Item:
    id: str
    size: Vector
    weight: int = 0
    rotatable: bool = True
    tiltable: bool = False
    stackable: bool = True
    dummy: bool = False

    def __post_init__(self):
        size = tuple(int(v) for v in self.size)
        object.__setattr__(self, 'id', str(self.id))
        object.__setattr__(self, 'size', size)
        if len(size) != 3 or min(size) < 1:
            raise PackingException(
                f"Dimensions invalides pour le colis {self.id}: {size}",
                error_code="INVALID_ITEM",
                details={'item': self.id, 'size': list(size)},
            )
        if self.weight < 0:
            raise PackingException(
                f"Poids négatif pour le colis {self.id}",
                error_code="INVALID_ITEM",
                details={'item': self.id},
            )
        if self.tiltable and not self.rotatable:
            raise PackingException(
                f"Le colis {self.id} est inclinable mais pas rotatif",
                error_code="INVALID_ITEM",
                details={'item': self.id},
            )

    @property
    def volume(self) -> int:
        return self.size[0] * self.size[1] * self.size[2]

    @property
    def dimensions(self) -> Vector:
        return tuple(sorted(self.size))


def admissible_orientations(item: Item) -> Tuple[Orientation, ...]:
    """Orientations admises par les drapeaux du colis, dans l'ordre canonique."""
    if item.dummy:
        return (IDENTITY,)
    return tuple(
        o for o in ALL_ORIENTATIONS
        if (item.tiltable or o.tilt is Tilt.NONE) and (item.rotatable or not o.rotated)
    )


def apply_orientation(item: Item, orientation: Orientation) -> Vector:
    if orientation not in admissible_orientations(item):
        raise PackingException(
            f"Orientation {orientation.label} non admise pour le colis {item.id}",
            error_code="INADMISSIBLE_ORIENTATION",
            details={'item': item.id, 'orientation': orientation.label},
        )
    return orientation.apply(item.size)


# =============================================================================
# ULD
# =============================================================================

@dataclass(frozen=True)
class Uld:
    """
    ULD convexe décrite par ses sommets et ses facettes (listes d'indices).

    Les plans sont dérivés des facettes ; la capacité volumique vaut par
    défaut le volume de l'enveloppe convexe.
    """
    id: str
    vertices: Tuple[Vector, ...]
    facets: Tuple[Tuple[int, ...], ...]
    weight_capacity: int
    volume_capacity: Optional[float] = None
    edge_width: int = 0
    edge_offset: int = 0
    substructure_allowed: bool = False
    cog_tolerance: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        object.__setattr__(self, 'id', str(self.id))
        object.__setattr__(self, 'vertices', tuple(tuple(int(c) for c in v) for v in self.vertices))
        object.__setattr__(self, 'facets', tuple(tuple(int(i) for i in f) for f in self.facets))
        if self.cog_tolerance is not None:
            object.__setattr__(self, 'cog_tolerance', tuple(float(t) for t in self.cog_tolerance))
        self._validate_shape()
        if self.volume_capacity is None:
            object.__setattr__(self, 'volume_capacity', round(float(ConvexHull(np.asarray(self.vertices, dtype=float)).volume), 6))
        else:
            object.__setattr__(self, 'volume_capacity', float(self.volume_capacity))
        self._validate_capacities()

    def _fail(self, message: str, **details):
        raise PackingException(f"ULD {self.id}: {message}", error_code="INVALID_ULD", details={'uld': self.id, **details})

    def _validate_shape(self):
        if len(self.vertices) < 4 or any(len(v) != 3 for v in self.vertices):
            self._fail("au moins quatre sommets 3D sont requis")
        mins = np.min(np.asarray(self.vertices), axis=0)
        if np.any(mins != 0):
            self._fail("la coordonnée minimale doit valoir 0 sur chaque axe", minimum=mins.tolist())
        for facet in self.facets:
            if len(facet) < 3 or any(i < 0 or i >= len(self.vertices) for i in facet):
                self._fail("facette mal définie", facet=list(facet))

        planes = self.planes
        for plane in planes:
            for i in plane.vertex_ids:
                if not plane.contains(self.vertices[i]):
                    self._fail("sommets de facette non coplanaires", facet=list(plane.vertex_ids))
            for vertex in self.vertices:
                if plane.evaluate(vertex) < -TOLERANCE:
                    self._fail("ULD non convexe ou facette mal orientée", facet=list(plane.vertex_ids))

        for axis in range(3):
            count = sum(1 for p in planes if p.axis == axis)
            if count != 2:
                self._fail(f"{count} facettes perpendiculaires à l'axe {AXES[axis]} au lieu de 2")
        tilted = self.tilted_planes
        if len(tilted) > 2:
            self._fail("plus de deux facettes inclinées")
        for plane in tilted:
            if abs(plane.normal[0]) > TOLERANCE:
                self._fail("facette inclinée non orthogonale au plan y-z", facet=list(plane.vertex_ids))
        if len(tilted) == 2 and set(tilted[0].vertex_ids) & set(tilted[1].vertex_ids):
            self._fail("deux facettes inclinées voisines")

    def _validate_capacities(self):
        if self.weight_capacity < 0 or self.volume_capacity <= 0:
            self._fail("capacités invalides")
        if self.edge_width < 0 or self.edge_offset < 0:
            self._fail("bord invalide")
        b1, b2, _ = self.bounding_box
        if self.edge_width and 2 * self.edge_width >= min(b1, b2):
            self._fail("bord plus large que le plancher", edge_width=self.edge_width)

    @cached_property
    def planes(self) -> Tuple[FacetPlane, ...]:
        centroid = np.mean(np.asarray(self.vertices, dtype=float), axis=0)
        return tuple(
            plane_from_vertices([self.vertices[i] for i in facet], centroid, facet)
            for facet in self.facets
        )

    @cached_property
    def tilted_planes(self) -> Tuple[FacetPlane, ...]:
        return tuple(p for p in self.planes if p.tilted)

    @cached_property
    def critical_planes(self) -> Tuple[FacetPlane, ...]:
        return tuple(p for p in self.tilted_planes if p.critical)

    @cached_property
    def bounding_box(self) -> Vector:
        return tuple(int(v) for v in np.max(np.asarray(self.vertices), axis=0))

    @property
    def volume(self) -> float:
        return self.volume_capacity

    def contains_point(self, point: Sequence[float], tolerance: float = TOLERANCE) -> bool:
        return all(p.evaluate(point) >= -tolerance for p in self.planes)


# =============================================================================
# PARAMÈTRES
# =============================================================================

class SupportMode(str, enum.Enum):
    FULL = 'full'
    CORNERS_ONLY = 'corners_only'


@dataclass(frozen=True)
class PackingParams:
    max_padding_height: int = 10
    min_item_overlap: float = 0.9
    max_cog_deviation: float = 0.1
    weight_balance_importance: float = 0.5
    corner_support_mode: SupportMode = SupportMode.FULL

    def __post_init__(self):
        object.__setattr__(self, 'corner_support_mode', SupportMode(self.corner_support_mode))
        if self.max_padding_height < 0:
            raise PackingException("max_padding_height doit être >= 0", error_code="INVALID_PARAMETER")
        if not 0 <= self.min_item_overlap <= 1:
            raise PackingException("min_item_overlap doit être dans [0, 1]", error_code="INVALID_PARAMETER")
        if not 0 <= self.max_cog_deviation <= 1:
            raise PackingException("max_cog_deviation doit être dans [0, 1]", error_code="INVALID_PARAMETER")
        if self.weight_balance_importance < 0:
            raise PackingException("weight_balance_importance doit être >= 0", error_code="INVALID_PARAMETER")

    @property
    def volume_importance(self) -> float:
        return max(0.0, 1.0 - self.weight_balance_importance)


VARIANTS = ('default', 'no_grid', 'no_blocking', 'no_moving', 'crainic_mimic')


@dataclass(frozen=True)
class AlgoParams:
    max_ep_checks: int = 20_000_000
    min_rgs_iters: int = 10
    max_rgs_iters: int = 500
    randomization_degree: float = 0.5
    ep_sort_order: Tuple[str, str, str] = ('z', 'y', 'x')
    rng_seed: int = 0
    hole_close_max_iters: int = 100
    use_grid: bool = True
    use_blocking: bool = True
    use_moving: bool = True
    crainic_mimic: bool = False

    def __post_init__(self):
        order = self.ep_sort_order
        if isinstance(order, str):
            order = tuple(c for c in order.lower() if c in AXES)
        object.__setattr__(self, 'ep_sort_order', tuple(order))
        if sorted(self.ep_sort_order) != sorted(AXES):
            raise PackingException(
                f"ep_sort_order doit être une permutation de x,y,z: {self.ep_sort_order}",
                error_code="INVALID_PARAMETER",
            )
        if self.max_ep_checks < 1 or self.hole_close_max_iters < 0:
            raise PackingException("budgets invalides", error_code="INVALID_PARAMETER")
        if not 1 <= self.min_rgs_iters <= self.max_rgs_iters:
            raise PackingException("il faut 1 <= min_rgs_iters <= max_rgs_iters", error_code="INVALID_PARAMETER")
        if not 0 < self.randomization_degree <= 1:
            raise PackingException("randomization_degree doit être dans ]0, 1]", error_code="INVALID_PARAMETER")

    @property
    def sort_axes(self) -> Tuple[int, int, int]:
        return tuple(AXES.index(a) for a in self.ep_sort_order)

    @property
    def variant(self) -> str:
        if self.crainic_mimic:
            return 'crainic_mimic'
        for flag, name in ((self.use_grid, 'no_grid'), (self.use_blocking, 'no_blocking'), (self.use_moving, 'no_moving')):
            if not flag:
                return name
        return 'default'

    def with_variant(self, name: str) -> 'AlgoParams':
        if name not in VARIANTS:
            raise PackingException(f"Variante inconnue: {name}", error_code="INVALID_PARAMETER")
        if name == 'default':
            return self
        if name == 'crainic_mimic':
            return replace(self, crainic_mimic=True, use_blocking=False, use_moving=False)
        return replace(self, **{f"use_{name[3:]}": False})


# =============================================================================
# PLACEMENTS, CHARGEMENTS ET SOLUTIONS
# =============================================================================

@dataclass(frozen=True)
class Placement:
    item: Item
    orientation: Orientation
    position: Vector

    def __post_init__(self):
        object.__setattr__(self, 'position', tuple(int(c) for c in self.position))

    @cached_property
    def size(self) -> Vector:
        if self.item.dummy:
            return self.item.size
        return apply_orientation(self.item, self.orientation)

    @property
    def end(self) -> Vector:
        return tuple(e + s for e, s in zip(self.position, self.size))

    @property
    def top(self) -> int:
        return self.position[2] + self.size[2]

    @property
    def center(self) -> Tuple[float, float, float]:
        return tuple(e + s / 2 for e, s in zip(self.position, self.size))

    @property
    def footprint_area(self) -> int:
        return self.size[0] * self.size[1]

    @property
    def stackable(self) -> bool:
        return self.item.stackable

    def translated(self, offset: Sequence[int]) -> 'Placement':
        return Placement(self.item, self.orientation, tuple(p + o for p, o in zip(self.position, offset)))


@dataclass(frozen=True)
class Score:
    weight_balance: float
    volume: float
    penalty: float
    total: float
    cog_deviation: Tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class UldLoad:
    uld: Uld
    placements: Tuple[Placement, ...]
    substructure_used: bool = False
    criterion: Optional[str] = None
    score: Optional[Score] = None
    iterations: int = 0
    ep_checks: int = 0

    @property
    def real_placements(self) -> Tuple[Placement, ...]:
        return tuple(p for p in self.placements if not p.item.dummy)

    @property
    def dummy_placements(self) -> Tuple[Placement, ...]:
        return tuple(p for p in self.placements if p.item.dummy)

    @property
    def items(self) -> Tuple[Item, ...]:
        return tuple(p.item for p in self.real_placements)

    @property
    def loaded_weight(self) -> int:
        return sum(p.item.weight for p in self.real_placements)

    @property
    def loaded_volume(self) -> int:
        return sum(p.item.volume for p in self.real_placements)

    @property
    def utilization(self) -> float:
        return self.loaded_volume / self.uld.volume_capacity

    @property
    def is_empty(self) -> bool:
        return not self.real_placements

    @property
    def cog(self) -> Optional[np.ndarray]:
        """Centre de gravité des colis réels, None sans masse chargée."""
        weight = self.loaded_weight
        if weight <= 0:
            return None
        centers = np.array([p.center for p in self.real_placements], dtype=float)
        weights = np.array([p.item.weight for p in self.real_placements], dtype=float)
        return weights @ centers / weight

    def with_placements(self, placements: Sequence[Placement]) -> 'UldLoad':
        return replace(self, placements=tuple(placements))

    def with_score(self, score: Score) -> 'UldLoad':
        return replace(self, score=score)


@dataclass(frozen=True)
class UldGroup:
    """Groupe d'ULD identiques ; count=None signifie illimité."""
    uld: Uld
    count: Optional[int] = None

    @property
    def unlimited(self) -> bool:
        return self.count is None


@dataclass(frozen=True)
class Solution:
    loads: Tuple[UldLoad, ...] = ()
    unloaded: Tuple[Item, ...] = ()

    @property
    def loaded_items(self) -> Tuple[Item, ...]:
        return tuple(item for load in self.loads for item in load.items)

    @property
    def loaded_volume(self) -> int:
        return sum(load.loaded_volume for load in self.loads)

    @property
    def uld_volume(self) -> float:
        return sum(load.uld.volume_capacity for load in self.loads)

    @property
    def utilization(self) -> float:
        return self.loaded_volume / self.uld_volume if self.loads else 0.0

    @property
    def substructure_count(self) -> int:
        return sum(1 for load in self.loads if load.substructure_used)

    @property
    def cog_violations(self) -> int:
        return sum(1 for load in self.loads if load.score and any(d > 0 for d in load.score.cog_deviation))


@dataclass(frozen=True)
class Instance:
    name: str
    items: Tuple[Item, ...]
    groups: Tuple[UldGroup, ...]
    packing: PackingParams = field(default_factory=PackingParams)
    algo: AlgoParams = field(default_factory=AlgoParams)

    def __post_init__(self):
        object.__setattr__(self, 'items', tuple(self.items))
        object.__setattr__(self, 'groups', tuple(self.groups))
        ids = [item.id for item in self.items]
        if len(set(ids)) != len(ids):
            raise PackingException(f"Identifiants de colis dupliqués dans {self.name}", error_code="INVALID_ITEM")
        uld_ids = [group.uld.id for group in self.groups]
        if len(set(uld_ids)) != len(uld_ids):
            raise PackingException(f"Identifiants d'ULD dupliqués dans {self.name}", error_code="INVALID_ULD")

    def item(self, item_id: str) -> Item:
        for item in self.items:
            if item.id == item_id:
                return item
        raise PackingException(f"Colis inconnu: {item_id}", error_code="INVALID_ITEM")

    def uld(self, uld_id: str) -> Uld:
        for group in self.groups:
            if group.uld.id == uld_id:
                return group.uld
        raise PackingException(f"ULD inconnue: {uld_id}", error_code="INVALID_ULD")
