"""
Validateur indépendant des plans de chargement
==============================================

Recontrôle chaque contrainte d'un plan sans réutiliser les raccourcis du
solveur : contenance dans l'ULD par les huit coins, bord, collisions,
support calculé exactement par union des empreintes (shapely), gerbabilité,
capacités et écart du centre de gravité (violation douce).
"""
import enum
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from shapely.geometry import box
from shapely.ops import unary_union

from .domain import Instance, PackingParams, Placement, Solution, SupportMode, UldLoad, apply_orientation
from .exceptions import PackingException
from .feasibility import AREA_TOLERANCE, collides, floor_placement
from .geometry import box_inside_planes

logger = logging.getLogger(__name__)


class Severity(str, enum.Enum):
    HARD = 'hard'
    SOFT = 'soft'


@dataclass(frozen=True)
class Violation:
    kind: str
    severity: Severity
    message: str
    uld_id: Optional[str] = None
    item_ids: Tuple[str, ...] = ()
    coords: Optional[Tuple[int, ...]] = None

    def as_dict(self) -> dict:
        return {
            'kind': self.kind,
            'severity': self.severity.value,
            'message': self.message,
            'uld': self.uld_id,
            'items': list(self.item_ids),
            'coords': list(self.coords) if self.coords is not None else None,
        }


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def hard(self) -> List[Violation]:
        return [v for v in self.violations if v.severity is Severity.HARD]

    @property
    def soft(self) -> List[Violation]:
        return [v for v in self.violations if v.severity is Severity.SOFT]

    @property
    def ok(self) -> bool:
        return not self.hard

    def as_dict(self) -> dict:
        return {
            'ok': self.ok,
            'hard': len(self.hard),
            'soft': len(self.soft),
            'violations': [v.as_dict() for v in self.violations],
        }


@dataclass(frozen=True)
class ExactSupport:
    directly_supported: bool
    stacked_on_fragile: bool
    supported_area: float
    supported_corner_count: int
    verdict: bool


def _footprint(placement: Placement):
    x, y, _ = placement.position
    return box(x, y, x + placement.size[0], y + placement.size[1])


def exact_support(candidate: Placement, loaded: Iterable[Placement], params: PackingParams) -> ExactSupport:
    """
    Support exact : un point de l'empreinte est supporté si le plus haut
    objet sous lui, dans la tranche de rembourrage, est gerbable.
    """
    x, y, z = candidate.position
    s1, s2, _ = candidate.size
    target = _footprint(candidate)
    relevant = [
        p for p in loaded
        if p is not candidate and z - params.max_padding_height <= p.top <= z
        and _footprint(p).intersection(target).area > 0
    ]
    relevant.sort(key=lambda p: -p.top)

    corners = ((x, y), (x + s1, y), (x, y + s2), (x + s1, y + s2))
    supported_corners = set()
    directly = False
    fragile = False
    covered = None
    area = 0.0
    for support in relevant:
        shape = _footprint(support)
        if support.top == z:
            if support.stackable:
                directly = True
                for k, (cx, cy) in enumerate(corners):
                    if (support.position[0] <= cx <= support.position[0] + support.size[0]
                            and support.position[1] <= cy <= support.position[1] + support.size[1]):
                        supported_corners.add(k)
            else:
                fragile = True
        visible = shape.intersection(target)
        if covered is not None:
            visible = visible.difference(covered)
        if support.stackable:
            area += visible.area
        covered = shape if covered is None else unary_union([covered, shape])

    if params.corner_support_mode is SupportMode.CORNERS_ONLY:
        verdict = directly and len(supported_corners) == 4
    else:
        verdict = directly and (len(supported_corners) == 4
                                or area >= params.min_item_overlap * s1 * s2 - AREA_TOLERANCE)
    verdict = verdict and not fragile
    return ExactSupport(directly, fragile, area, len(supported_corners), verdict)


def _raw_deviation(load: UldLoad, axis: int) -> float:
    cog = load.cog
    if cog is None:
        return 0.0
    half = load.uld.bounding_box[axis] / 2
    return float(abs((cog[axis] - half) / half))


def validate_load(load: UldLoad, params: PackingParams) -> List[Violation]:
    uld = load.uld
    violations: List[Violation] = []

    def hard(kind, message, items=(), coords=None):
        violations.append(Violation(kind, Severity.HARD, message, uld.id, tuple(items), coords))

    placements = list(load.placements)
    for placement in load.real_placements:
        item = placement.item
        try:
            apply_orientation(item, placement.orientation)
        except PackingException as exc:
            hard('orientation', str(exc), [item.id], placement.position)
            continue
        if not box_inside_planes(placement.position, placement.size, uld.planes):
            hard('uld_fit', f"Colis {item.id} hors de l'ULD", [item.id], placement.position)
        if uld.edge_width > 0 and placement.position[2] < uld.edge_offset:
            e = uld.edge_width
            b1, b2, _ = uld.bounding_box
            x, y, _ = placement.position
            if x < e or y < e or placement.end[0] > b1 - e or placement.end[1] > b2 - e:
                hard('edge', f"Colis {item.id} sur le bord sous la hauteur {uld.edge_offset}", [item.id], placement.position)

    for i, a in enumerate(placements):
        for b in placements[i + 1:]:
            if a.item.dummy and b.item.dummy:
                continue
            if collides(a.position, a.size, b.position, b.size):
                hard('collision', f"Collision entre {a.item.id} et {b.item.id}", [a.item.id, b.item.id], a.position)

    supports = [floor_placement(uld)] + placements
    for placement in load.real_placements:
        report = exact_support(placement, supports, params)
        if report.stacked_on_fragile:
            hard('stacking', f"Colis {placement.item.id} posé sur un colis non gerbable",
                 [placement.item.id], placement.position)
        elif not report.verdict:
            hard('floating', f"Colis {placement.item.id} insuffisamment supporté "
                             f"(aire {report.supported_area:.1f}, coins {report.supported_corner_count})",
                 [placement.item.id], placement.position)

    if load.loaded_weight > uld.weight_capacity:
        hard('weight_capacity', f"Masse {load.loaded_weight} > {uld.weight_capacity}")
    if load.loaded_volume > uld.volume_capacity + AREA_TOLERANCE:
        hard('volume_capacity', f"Volume {load.loaded_volume} > {uld.volume_capacity}")

    tolerance = uld.cog_tolerance or (params.max_cog_deviation, params.max_cog_deviation)
    for axis in (0, 1):
        deviation = _raw_deviation(load, axis)
        if deviation > tolerance[axis]:
            violations.append(Violation(
                'cog', Severity.SOFT,
                f"Écart du centre de gravité {deviation:.3f} > {tolerance[axis]} sur l'axe {'xy'[axis]}",
                uld.id, (), None,
            ))
    return violations


def validate_solution(solution: Solution, instance: Instance) -> ValidationReport:
    """Contrôle chaque chargement puis la conservation des colis et la disponibilité des ULD."""
    report = ValidationReport()
    known = {item.id for item in instance.items}
    seen: List[str] = []
    for load in solution.loads:
        report.violations.extend(validate_load(load, instance.packing))
        seen.extend(item.id for item in load.items)
    seen.extend(item.id for item in solution.unloaded)

    duplicates = sorted({i for i in seen if seen.count(i) > 1})
    if duplicates:
        report.violations.append(Violation('duplicate_item', Severity.HARD, "Colis présents plusieurs fois", None, tuple(duplicates)))
    unknown = sorted(set(seen) - known)
    if unknown:
        report.violations.append(Violation('unknown_item', Severity.HARD, "Colis absents de l'instance", None, tuple(unknown)))
    missing = sorted(known - set(seen))
    if missing:
        report.violations.append(Violation('missing_item', Severity.HARD, "Colis ni chargés ni signalés", None, tuple(missing)))

    for group in instance.groups:
        used = sum(1 for load in solution.loads if load.uld.id == group.uld.id)
        if group.count is not None and used > group.count:
            report.violations.append(Violation(
                'uld_availability', Severity.HARD,
                f"{used} ULD {group.uld.id} utilisées pour {group.count} disponibles", group.uld.id,
            ))
    if report.hard:
        logger.warning(f"❌ {len(report.hard)} violations dures détectées")
    return report
