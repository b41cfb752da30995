"""
SERIALIZERS DJANGO REST FRAMEWORK DU SCHÉMA D'INSTANCE JSON - ULDPACK

Ce module contient:
1. Les colis (tous les drapeaux du modèle)
2. Les ULD (sommets, facettes, capacités, bord, sous-structure, disponibilité)
3. Les paramètres de chargement et d'algorithme (tous optionnels)
4. L'instance complète, versionnée par ``schema_version``

Les erreurs de validation sont aplaties en chemins JSON (``items[3].size``).
"""
import json
import logging
from typing import Any, Dict, List, Tuple

from rest_framework import serializers

from packing.config import get_packing_config
from packing.domain import AXES, Instance, Item, SupportMode, Uld, UldGroup
from packing.exceptions import PackingException

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"


# =============================================================================
# CHAMPS PERSONNALISÉS
# =============================================================================

class AvailabilityField(serializers.Field):
    """Nombre d'ULD disponibles, ou ``"unlimited"`` (None côté modèle)."""

    default_error_messages = {
        'invalid': "Entier >= 1 ou \"unlimited\" attendu.",
    }

    def to_representation(self, value):
        return "unlimited" if value is None else int(value)

    def to_internal_value(self, data):
        if data == "unlimited":
            return None
        if isinstance(data, bool) or not isinstance(data, int) or data < 1:
            self.fail('invalid')
        return data


def _triple(child):
    return serializers.ListField(child=child, min_length=3, max_length=3)


# =============================================================================
# SERIALIZERS PRINCIPAUX
# =============================================================================

class ItemSerializer(serializers.Serializer):
    """Serializer pour les colis"""
    id = serializers.CharField()
    size = _triple(serializers.IntegerField(min_value=1))
    weight = serializers.IntegerField(min_value=0, default=0)
    rotatable = serializers.BooleanField(default=True)
    tiltable = serializers.BooleanField(default=False)
    stackable = serializers.BooleanField(default=True)

    def validate(self, attrs):
        if attrs['tiltable'] and not attrs['rotatable']:
            raise serializers.ValidationError({'tiltable': "Un colis inclinable doit être rotatif."})
        return attrs


class UldSerializer(serializers.Serializer):
    """Serializer pour les ULD ; la géométrie est contrôlée par le modèle"""
    id = serializers.CharField()
    vertices = serializers.ListField(child=_triple(serializers.IntegerField()), min_length=4)
    facets = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=3), min_length=4,
    )
    weight_capacity = serializers.IntegerField(min_value=0)
    volume_capacity = serializers.FloatField(min_value=0, required=False, allow_null=True, default=None)
    edge_width = serializers.IntegerField(min_value=0, default=0)
    edge_offset = serializers.IntegerField(min_value=0, default=0)
    substructure_allowed = serializers.BooleanField(default=False)
    cog_tolerance = serializers.ListField(
        child=serializers.FloatField(min_value=0, max_value=1), min_length=2, max_length=2,
        required=False, allow_null=True, default=None,
    )
    availability = AvailabilityField(default="unlimited")

    def validate(self, attrs):
        fields = {k: v for k, v in attrs.items() if k != 'availability'}
        try:
            attrs['uld'] = Uld(**fields)
        except PackingException as exc:
            raise serializers.ValidationError({'geometry': exc.message})
        return attrs


class PackingParamsSerializer(serializers.Serializer):
    max_padding_height = serializers.IntegerField(min_value=0, required=False)
    min_item_overlap = serializers.FloatField(min_value=0, max_value=1, required=False)
    max_cog_deviation = serializers.FloatField(min_value=0, max_value=1, required=False)
    weight_balance_importance = serializers.FloatField(min_value=0, required=False)
    corner_support_mode = serializers.ChoiceField(choices=[m.value for m in SupportMode], required=False)


class AlgoParamsSerializer(serializers.Serializer):
    max_ep_checks = serializers.IntegerField(min_value=1, required=False)
    min_rgs_iters = serializers.IntegerField(min_value=1, required=False)
    max_rgs_iters = serializers.IntegerField(min_value=1, required=False)
    randomization_degree = serializers.FloatField(min_value=0, max_value=1, required=False)
    ep_sort_order = serializers.ListField(
        child=serializers.ChoiceField(choices=AXES), min_length=3, max_length=3, required=False,
    )
    rng_seed = serializers.IntegerField(min_value=0, required=False)
    hole_close_max_iters = serializers.IntegerField(min_value=0, required=False)
    use_grid = serializers.BooleanField(required=False)
    use_blocking = serializers.BooleanField(required=False)
    use_moving = serializers.BooleanField(required=False)
    crainic_mimic = serializers.BooleanField(required=False)

    def validate(self, attrs):
        if 'min_rgs_iters' in attrs and 'max_rgs_iters' in attrs and attrs['min_rgs_iters'] > attrs['max_rgs_iters']:
            raise serializers.ValidationError({'min_rgs_iters': "Doit être <= max_rgs_iters."})
        if attrs.get('randomization_degree') == 0:
            raise serializers.ValidationError({'randomization_degree': "Doit être > 0."})
        return attrs


class InstanceSerializer(serializers.Serializer):
    """Serializer de l'instance complète"""
    schema_version = serializers.ChoiceField(choices=[SCHEMA_VERSION])
    name = serializers.CharField()
    items = ItemSerializer(many=True)
    ulds = UldSerializer(many=True, allow_empty=False)
    packing = PackingParamsSerializer(required=False, default=dict)
    algo = AlgoParamsSerializer(required=False, default=dict)

    def _unique(self, entries: List[dict], label: str):
        seen = set()
        for k, entry in enumerate(entries):
            if entry['id'] in seen:
                raise serializers.ValidationError({label: {k: {'id': f"Identifiant dupliqué: {entry['id']}"}}})
            seen.add(entry['id'])

    def validate(self, attrs):
        self._unique(attrs['items'], 'items')
        self._unique(attrs['ulds'], 'ulds')
        return attrs


# =============================================================================
# ERREURS ET CONVERSIONS
# =============================================================================

def flatten_errors(errors: Any, path: str = "") -> List[Tuple[str, str]]:
    """Aplatis les erreurs DRF imbriquées en couples (chemin JSON, message)."""
    flat = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            if key == 'non_field_errors':
                flat.extend(flatten_errors(value, path))
            elif isinstance(key, int):
                flat.extend(flatten_errors(value, f"{path}[{key}]"))
            else:
                flat.extend(flatten_errors(value, f"{path}.{key}" if path else str(key)))
    elif isinstance(errors, list):
        if all(not isinstance(e, (dict, list)) for e in errors):
            flat.extend((path or "$", str(e)) for e in errors)
        else:
            for k, value in enumerate(errors):
                if value:
                    flat.extend(flatten_errors(value, f"{path}[{k}]"))
    else:
        flat.append((path or "$", str(errors)))
    return flat


def parse_instance_json(text: str) -> Instance:
    """
    Lit une instance JSON ; les paramètres absents prennent les valeurs de
    la configuration.

    Raises:
        PackingException: SCHEMA_VIOLATION, ``details['errors']`` liste les chemins fautifs
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PackingException(f"JSON invalide: {exc}", error_code="SCHEMA_VIOLATION",
                               details={'errors': [{'path': '$', 'message': str(exc)}]})
    serializer = InstanceSerializer(data=data)
    if not serializer.is_valid():
        errors = flatten_errors(serializer.errors)
        summary = "; ".join(f"{p}: {m}" for p, m in errors[:5])
        raise PackingException(f"Instance non conforme au schéma: {summary}", error_code="SCHEMA_VIOLATION",
                               details={'errors': [{'path': p, 'message': m} for p, m in errors]})

    attrs = serializer.validated_data
    config = get_packing_config()
    try:
        items = tuple(Item(**dict(entry)) for entry in attrs['items'])
        groups = tuple(UldGroup(entry['uld'], entry['availability']) for entry in attrs['ulds'])
        return Instance(
            name=attrs['name'],
            items=items,
            groups=groups,
            packing=config.packing_params(dict(attrs['packing'])),
            algo=config.algo_params(dict(attrs['algo'])),
        )
    except PackingException as exc:
        raise PackingException(f"Instance invalide: {exc.message}", error_code="SCHEMA_VIOLATION",
                               details={'errors': [{'path': '$', 'message': exc.message}]})


def instance_as_dict(instance: Instance) -> Dict[str, Any]:
    """Représentation complète : tous les paramètres sont écrits explicitement."""
    packing = instance.packing
    algo = instance.algo
    return {
        'schema_version': SCHEMA_VERSION,
        'name': instance.name,
        'items': [
            {
                'id': item.id, 'size': list(item.size), 'weight': item.weight,
                'rotatable': item.rotatable, 'tiltable': item.tiltable, 'stackable': item.stackable,
            }
            for item in instance.items
        ],
        'ulds': [
            {
                'id': group.uld.id,
                'vertices': [list(v) for v in group.uld.vertices],
                'facets': [list(f) for f in group.uld.facets],
                'weight_capacity': group.uld.weight_capacity,
                'volume_capacity': group.uld.volume_capacity,
                'edge_width': group.uld.edge_width,
                'edge_offset': group.uld.edge_offset,
                'substructure_allowed': group.uld.substructure_allowed,
                'cog_tolerance': list(group.uld.cog_tolerance) if group.uld.cog_tolerance else None,
                'availability': AvailabilityField().to_representation(group.count),
            }
            for group in instance.groups
        ],
        'packing': {
            'max_padding_height': packing.max_padding_height,
            'min_item_overlap': packing.min_item_overlap,
            'max_cog_deviation': packing.max_cog_deviation,
            'weight_balance_importance': packing.weight_balance_importance,
            'corner_support_mode': packing.corner_support_mode.value,
        },
        'algo': {
            'max_ep_checks': algo.max_ep_checks,
            'min_rgs_iters': algo.min_rgs_iters,
            'max_rgs_iters': algo.max_rgs_iters,
            'randomization_degree': algo.randomization_degree,
            'ep_sort_order': list(algo.ep_sort_order),
            'rng_seed': algo.rng_seed,
            'hole_close_max_iters': algo.hole_close_max_iters,
            'use_grid': algo.use_grid,
            'use_blocking': algo.use_blocking,
            'use_moving': algo.use_moving,
            'crainic_mimic': algo.crainic_mimic,
        },
    }


def write_instance_json(instance: Instance) -> str:
    return json.dumps(instance_as_dict(instance), indent=2, ensure_ascii=False) + "\n"
