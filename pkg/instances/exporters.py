"""
Export des plans de chargement
==============================

Plan JSON déterministe (aucune mesure de temps, re-validable à partir du
plan et de l'instance seuls), table CSV des placements et scène OBJ
(Wavefront ASCII) des ULD et des colis.
"""
import dataclasses
import json
import logging
from typing import Any, Dict, List, Optional

import pandas as pd

from packing.domain import Instance, Item, Orientation, PackingParams, Placement, Solution, UldLoad
from packing.exceptions import PackingException
from packing.validation import validate_load, validate_solution

logger = logging.getLogger(__name__)

PLAN_VERSION = "1.0"
SCENE_GAP = 50


def _round(value: float) -> float:
    return round(float(value), 6)


def _load_metrics(load: UldLoad, instance: Instance) -> Dict[str, Any]:
    violations = validate_load(load, instance.packing)
    cog = load.cog
    score = load.score
    return {
        'utilization': _round(load.utilization),
        'weight': load.loaded_weight,
        'volume_loaded': load.loaded_volume,
        'cog': [_round(c) for c in cog] if cog is not None else None,
        'cog_deviation': [_round(d) for d in score.cog_deviation] if score else None,
        'weight_balance': _round(score.weight_balance) if score else None,
        'volume': _round(score.volume) if score else None,
        'penalty': _round(score.penalty) if score else None,
        'score': _round(score.total) if score else None,
        'iterations': load.iterations,
        'ep_checks': load.ep_checks,
        'valid': not any(v.severity.value == 'hard' for v in violations),
        'violations': [v.as_dict() for v in violations],
    }


def _placement_dict(placement: Placement) -> Dict[str, Any]:
    return {
        'item': placement.item.id,
        'position': list(placement.position),
        'size': list(placement.size),
        'orientation': {'tilt': placement.orientation.tilt.value, 'rotated': placement.orientation.rotated},
        'dummy': placement.item.dummy,
        'stackable': placement.item.stackable,
    }


def plan_as_dict(solution: Solution, instance: Instance, seed: Optional[int] = None,
                 variant: Optional[str] = None) -> Dict[str, Any]:
    report = validate_solution(solution, instance)
    return {
        'plan_version': PLAN_VERSION,
        'instance': instance.name,
        'seed': instance.algo.rng_seed if seed is None else seed,
        'variant': variant or instance.algo.variant,
        'packing': {
            'max_padding_height': instance.packing.max_padding_height,
            'min_item_overlap': instance.packing.min_item_overlap,
            'max_cog_deviation': instance.packing.max_cog_deviation,
            'weight_balance_importance': instance.packing.weight_balance_importance,
            'corner_support_mode': instance.packing.corner_support_mode.value,
        },
        'loads': [
            {
                'uld': load.uld.id,
                'substructure': load.substructure_used,
                'criterion': load.criterion,
                'placements': [_placement_dict(p) for p in load.placements],
                'metrics': _load_metrics(load, instance),
            }
            for load in solution.loads
        ],
        'unloaded': [item.id for item in solution.unloaded],
        'summary': {
            'uld_count': len(solution.loads),
            'loaded_items': len(solution.loaded_items),
            'unloaded_items': len(solution.unloaded),
            'loaded_volume': solution.loaded_volume,
            'uld_volume': _round(solution.uld_volume),
            'utilization': _round(solution.utilization),
            'substructure_count': solution.substructure_count,
            'cog_violations': solution.cog_violations,
            'valid': report.ok,
        },
    }


def write_plan(solution: Solution, instance: Instance, seed: Optional[int] = None,
               variant: Optional[str] = None) -> str:
    """Texte JSON du plan ; deux résolutions à graine égale donnent les mêmes octets."""
    return json.dumps(plan_as_dict(solution, instance, seed, variant), indent=2, ensure_ascii=False) + "\n"


def read_plan(text: str, instance: Instance) -> Solution:
    """
    Reconstruit une solution à partir d'un plan et de son instance.

    Les colis fictifs sont recréés depuis le plan, les colis réels sont
    repris de l'instance ; les identifiants inconnus restent visibles pour
    le validateur.
    """
    try:
        data = json.loads(text)
        loads = []
        for entry in data['loads']:
            uld = instance.uld(entry['uld'])
            placements = []
            for raw in entry['placements']:
                orientation = Orientation(raw['orientation']['tilt'], bool(raw['orientation']['rotated']))
                if raw.get('dummy'):
                    item = Item(id=raw['item'], size=tuple(raw['size']), rotatable=False,
                                stackable=bool(raw.get('stackable', True)), dummy=True)
                else:
                    item = _known_item(instance, raw['item'], raw['size'])
                placements.append(Placement(item, orientation, tuple(raw['position'])))
            loads.append(UldLoad(uld, tuple(placements), bool(entry.get('substructure')), entry.get('criterion')))
        unloaded = tuple(_known_item(instance, item_id, None) for item_id in data.get('unloaded', []))
    except (KeyError, TypeError, ValueError) as exc:
        raise PackingException(f"Plan illisible: {exc}", error_code="SCHEMA_VIOLATION")
    return Solution(tuple(loads), unloaded)


def _known_item(instance: Instance, item_id: str, size) -> Item:
    try:
        return instance.item(item_id)
    except PackingException:
        logger.warning(f"⚠️ Colis {item_id} absent de l'instance")
        return Item(id=item_id, size=tuple(size) if size else (1, 1, 1))


def placements_frame(solution: Solution) -> pd.DataFrame:
    rows = [
        {
            'load': k, 'uld': load.uld.id, 'item': p.item.id,
            'x': p.position[0], 'y': p.position[1], 'z': p.position[2],
            'l': p.size[0], 'w': p.size[1], 'h': p.size[2],
            'tilt': p.orientation.tilt.value, 'rotated': p.orientation.rotated,
            'weight': p.item.weight, 'stackable': p.item.stackable,
        }
        for k, load in enumerate(solution.loads)
        for p in load.real_placements
    ]
    columns = ['load', 'uld', 'item', 'x', 'y', 'z', 'l', 'w', 'h', 'tilt', 'rotated', 'weight', 'stackable']
    return pd.DataFrame(rows, columns=columns)


def write_plan_csv(solution: Solution) -> str:
    return placements_frame(solution).to_csv(index=False)


def _box_lines(origin, size, vertex_offset: int, name: str) -> List[str]:
    x, y, z = origin
    a, b, c = size
    corners = [(x + dx * a, y + dy * b, z + dz * c) for dz in (0, 1) for dy in (0, 1) for dx in (0, 1)]
    lines = [f"o {name}"]
    lines += [f"v {vx} {vy} {vz}" for vx, vy, vz in corners]
    faces = ((1, 3, 4, 2), (5, 6, 8, 7), (1, 2, 6, 5), (3, 7, 8, 4), (1, 5, 7, 3), (2, 4, 8, 6))
    lines += ["f " + " ".join(str(vertex_offset + i) for i in face) for face in faces]
    return lines


def export_scene(solution: Solution) -> str:
    """
    Scène OBJ : une boîte englobante par ULD puis une boîte par colis réel,
    huit sommets chacune ; les ULD sont juxtaposées selon x.
    """
    lines = ["# uldpack scene"]
    count = 0
    shift = 0
    for k, load in enumerate(solution.loads):
        b1, b2, b3 = load.uld.bounding_box
        lines += _box_lines((shift, 0, 0), (b1, b2, b3), count, f"uld_{k}_{load.uld.id}")
        count += 8
        for p in load.real_placements:
            x, y, z = p.position
            lines += _box_lines((shift + x, y, z), p.size, count, f"item_{p.item.id}")
            count += 8
        shift += b1 + SCENE_GAP
    logger.debug(f"✅ Scène exportée: {count} sommets")
    return "\n".join(lines) + "\n"


def plan_instance(text: str, instance: Instance) -> Instance:
    """Instance munie des paramètres de chargement avec lesquels le plan a été produit."""
    try:
        packing = json.loads(text).get('packing')
    except (ValueError, AttributeError) as exc:
        raise PackingException(f"Plan illisible: {exc}", error_code="SCHEMA_VIOLATION")
    if not packing:
        return instance
    return dataclasses.replace(instance, packing=PackingParams(**packing))
