"""
Géométrie des ULD et des boîtes
===============================

Arithmétique des plans de facettes, contrôles de contenance (boîte englobante
et facettes inclinées) et aires de recouvrement des empreintes au sol.
Toutes les fonctions sont pures et acceptent n'importe quel objet exposant
``position`` et ``size`` (les placements du modèle en particulier).
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .exceptions import PackingException

TOLERANCE = 1e-6


@dataclass(frozen=True)
class FacetPlane:
    """
    Plan d'une facette : n·p >= a pour tout point intérieur.

    La normale pointe vers l'intérieur de l'ULD ; elle est entière dès que
    les sommets sont entiers (produit vectoriel réduit par le PGCD).
    """
    normal: Tuple[float, float, float]
    offset: float
    vertex_ids: Tuple[int, ...] = ()

    @property
    def tilted(self) -> bool:
        return sum(1 for n in self.normal if abs(n) > TOLERANCE) != 1

    @property
    def axis(self) -> Optional[int]:
        """Axe de la normale pour une facette non inclinée, sinon None."""
        if self.tilted:
            return None
        return next(d for d, n in enumerate(self.normal) if abs(n) > TOLERANCE)

    @property
    def allows_moving(self) -> bool:
        # points situés sur cette facette : déplacement en +y autorisé
        n1, n2, n3 = self.normal
        return abs(n1) <= TOLERANCE and n2 > TOLERANCE and n3 <= TOLERANCE

    @property
    def critical(self) -> bool:
        n1, n2, n3 = self.normal
        return self.tilted and abs(n1) <= TOLERANCE and n2 > TOLERANCE and n3 < -TOLERANCE

    def evaluate(self, point: Sequence[float]) -> float:
        """Retourne n·p - a (positif à l'intérieur)."""
        return sum(n * p for n, p in zip(self.normal, point)) - self.offset

    def contains(self, point: Sequence[float], tolerance: float = TOLERANCE) -> bool:
        return abs(self.evaluate(point)) <= tolerance


def plane_from_vertices(vertices: Sequence[Sequence[int]], interior: Sequence[float],
                        vertex_ids: Tuple[int, ...] = ()) -> FacetPlane:
    """
    Dérive le plan d'une facette à partir de ses sommets.

    Args:
        vertices: sommets de la facette (au moins trois, non alignés)
        interior: point strictement intérieur (centroïde de l'ULD)
        vertex_ids: indices des sommets, conservés pour les contrôles de voisinage

    Returns:
        FacetPlane: plan à normale entière réduite orientée vers l'intérieur
    """
    points = np.asarray(vertices, dtype=np.int64)
    origin = points[0]
    normal = None
    for j in range(1, len(points)):
        for k in range(j + 1, len(points)):
            candidate = np.cross(points[j] - origin, points[k] - origin)
            if np.any(candidate != 0):
                normal = candidate
                break
        if normal is not None:
            break
    if normal is None:
        raise PackingException(
            "Facette dégénérée : sommets alignés",
            error_code="INVALID_ULD",
            details={'vertex_ids': list(vertex_ids)},
        )

    divisor = math.gcd(*(int(abs(v)) for v in normal))
    normal = normal // divisor
    offset = int(normal @ origin)
    if float(normal @ np.asarray(interior, dtype=float)) - offset < 0:
        normal, offset = -normal, -offset
    return FacetPlane(tuple(int(v) for v in normal), offset, tuple(vertex_ids))


# =============================================================================
# CONTENANCE
# =============================================================================

def fits_bounding_box(position: Sequence[int], size: Sequence[int], bounding_box: Sequence[int]) -> bool:
    return all(0 <= e and e + s <= b for e, s, b in zip(position, size, bounding_box))


def critical_corner(position: Sequence[float], size: Sequence[float], plane: FacetPlane) -> Tuple[float, ...]:
    """Coin de la boîte minimisant n·coin (delta_d = 1 si n_d < 0)."""
    return tuple(e + (s if n < 0 else 0) for e, s, n in zip(position, size, plane.normal))


def inside_tilted_facet(position: Sequence[float], size: Sequence[float], plane: FacetPlane,
                        tolerance: float = TOLERANCE) -> bool:
    if not plane.tilted:
        raise PackingException(
            "Le contrôle de facette inclinée exige une facette inclinée",
            error_code="AXIS_PARALLEL_PLANE",
            details={'normal': list(plane.normal)},
        )
    return plane.evaluate(critical_corner(position, size, plane)) >= -tolerance


def box_corners(position: Sequence[int], size: Sequence[int]) -> np.ndarray:
    """Les huit coins d'une boîte, un par ligne."""
    lo = np.asarray(position, dtype=float)
    hi = lo + np.asarray(size, dtype=float)
    return np.array([[(hi if (k >> d) & 1 else lo)[d] for d in range(3)] for k in range(8)])


def box_inside_planes(position: Sequence[int], size: Sequence[int], planes: Sequence[FacetPlane],
                      tolerance: float = TOLERANCE) -> bool:
    """Contrôle de force brute : les huit coins dans tous les demi-espaces."""
    corners = box_corners(position, size)
    for plane in planes:
        values = corners @ np.asarray(plane.normal, dtype=float) - plane.offset
        if np.any(values < -tolerance):
            return False
    return True


# =============================================================================
# RECOUVREMENTS
# =============================================================================

def interval_overlap(lo1: float, hi1: float, lo2: float, hi2: float) -> float:
    return max(0, min(hi1, hi2) - max(lo1, lo2))


def rectangle_overlap(a_lo: Sequence[float], a_hi: Sequence[float],
                      b_lo: Sequence[float], b_hi: Sequence[float]) -> float:
    return (interval_overlap(a_lo[0], a_hi[0], b_lo[0], b_hi[0])
            * interval_overlap(a_lo[1], a_hi[1], b_lo[1], b_hi[1]))


def base_area_overlap(a, b) -> float:
    """Aire de l'intersection des empreintes x-y de deux boîtes."""
    return (interval_overlap(a.position[0], a.position[0] + a.size[0], b.position[0], b.position[0] + b.size[0])
            * interval_overlap(a.position[1], a.position[1] + a.size[1], b.position[1], b.position[1] + b.size[1]))


def triple_base_area_overlap(a, b, c) -> float:
    area = 1
    for d in (0, 1):
        lo = max(a.position[d], b.position[d], c.position[d])
        hi = min(a.position[d] + a.size[d], b.position[d] + b.size[d], c.position[d] + c.size[d])
        if hi <= lo:
            return 0
        area *= hi - lo
    return area
