"""
Catalogue des géométries d'ULD
==============================

Fabrique des ULD à partir de gabarits de profil (polygone convexe dans le
plan y-z extrudé selon x) et charge le catalogue YAML fourni avec le projet.
"""
import dataclasses
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import yaml

from packing.domain import Uld
from packing.exceptions import PackingException

logger = logging.getLogger(__name__)

TEMPLATES = ('cuboid', 'lower_tilt', 'upper_tilt', 'two_upper_tilts', 'two_lower_tilts')


def profile_for(template: str, width: int, height: int, cut_width: int = 0, cut_height: int = 0) -> List[Tuple[int, int]]:
    """Sommets (y, z) du profil, dans le sens trigonométrique."""
    w, h, c, k = width, height, cut_width, cut_height
    if template == 'cuboid':
        return [(0, 0), (w, 0), (w, h), (0, h)]
    if template == 'lower_tilt':
        return [(c, 0), (w, 0), (w, h), (0, h), (0, k)]
    if template == 'upper_tilt':
        return [(0, 0), (w, 0), (w, h), (c, h), (0, h - k)]
    if template == 'two_upper_tilts':
        return [(0, 0), (w, 0), (w, h - k), (w - c, h), (c, h), (0, h - k)]
    if template == 'two_lower_tilts':
        return [(c, 0), (w - c, 0), (w, k), (w, h), (0, h), (0, k)]
    raise PackingException(f"Gabarit d'ULD inconnu: {template}", error_code="INVALID_ULD",
                           details={'templates': list(TEMPLATES)})


def prism_uld(uld_id: str, length: int, profile: Sequence[Tuple[int, int]], weight_capacity: int,
              **options) -> Uld:
    """Extrude un profil y-z sur la longueur : 2n sommets, n + 2 facettes."""
    n = len(profile)
    vertices = [(0, y, z) for y, z in profile] + [(length, y, z) for y, z in profile]
    facets = [tuple(range(n)), tuple(range(n, 2 * n))]
    facets += [(k, (k + 1) % n, n + (k + 1) % n, n + k) for k in range(n)]
    return Uld(id=uld_id, vertices=tuple(vertices), facets=tuple(facets), weight_capacity=weight_capacity, **options)


def cuboid_uld(uld_id: str, length: int, width: int, height: int, weight_capacity: int = 0, **options) -> Uld:
    return prism_uld(uld_id, length, profile_for('cuboid', width, height), weight_capacity, **options)


def build_uld(spec: dict) -> Uld:
    spec = dict(spec)
    try:
        template = spec.pop('template', 'cuboid')
        profile = profile_for(template, spec.pop('width'), spec.pop('height'),
                              spec.pop('cut_width', 0), spec.pop('cut_height', 0))
        if spec.get('cog_tolerance') is not None:
            spec['cog_tolerance'] = tuple(spec['cog_tolerance'])
        return prism_uld(spec.pop('id'), spec.pop('length'), profile, spec.pop('weight_capacity'), **spec)
    except (KeyError, TypeError) as exc:
        raise PackingException(f"Entrée de catalogue invalide: {exc}", error_code="INVALID_ULD", details={'spec': spec})


def load_catalog(path: Optional[Path] = None) -> Dict[str, Uld]:
    """
    Charge le catalogue YAML.

    Args:
        path: fichier YAML (par défaut celui de la configuration)

    Returns:
        dict: ULD par identifiant, dans l'ordre du fichier
    """
    if path is None:
        from packing.config import get_packing_config
        path = get_packing_config().catalog_path
    with open(path, encoding='utf-8') as handle:
        raw = yaml.safe_load(handle) or {}
    ulds = {}
    for spec in raw.get('ulds', []):
        uld = build_uld(spec)
        ulds[uld.id] = uld
    logger.debug(f"✅ Catalogue chargé: {', '.join(ulds)}")
    return ulds


def with_edges(uld: Uld, edge_width: int, edge_offset: int) -> Uld:
    return dataclasses.replace(uld, edge_width=edge_width, edge_offset=edge_offset)
