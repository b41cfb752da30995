"""
Suites de bancs d'essai
=======================

Chaque suite fixe les paramètres de chargement et d'algorithme, la géométrie
du bord et la disponibilité des ULD appliqués aux instances lues.
"""
import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from packing.domain import Instance, UldGroup, VARIANTS
from packing.exceptions import PackingException

KEEP = 'keep'


@dataclass(frozen=True)
class Suite:
    name: str
    overrides: Dict[str, Any] = field(default_factory=dict)
    edge: Optional[Tuple[int, int]] = None
    substructure: Optional[bool] = None
    availability: Any = KEEP
    variants: Tuple[str, ...] = ('default',)

    def prepare(self, instance: Instance) -> Instance:
        """ULD adaptées à la suite ; les paramètres sont appliqués par le service."""
        groups = []
        for group in instance.groups:
            uld = group.uld
            if self.edge is not None:
                uld = dataclasses.replace(uld, edge_width=self.edge[0], edge_offset=self.edge[1])
            if self.substructure is not None:
                uld = dataclasses.replace(uld, substructure_allowed=self.substructure and uld.substructure_allowed)
            count = group.count if self.availability == KEEP else self.availability
            groups.append(UldGroup(uld, count))
        return dataclasses.replace(instance, groups=tuple(groups))


ADAPTED_EDGE = (10, 10)

SUITES = {
    'br': Suite(
        'br',
        overrides={
            'min_item_overlap': 1.0, 'max_padding_height': 0, 'weight_balance_importance': 0.0,
            'ep_sort_order': ('x', 'y', 'z'),
        },
        edge=(0, 0), substructure=False,
    ),
    'paquay': Suite(
        'paquay',
        overrides={
            'max_padding_height': 0, 'weight_balance_importance': 100.0, 'max_cog_deviation': 0.05,
            'corner_support_mode': 'corners_only',
        },
        edge=(0, 0), substructure=False,
    ),
    'adapted_unlimited': Suite('adapted_unlimited', edge=ADAPTED_EDGE, availability=None),
    'adapted_1uld': Suite('adapted_1uld', edge=ADAPTED_EDGE, availability=1),
    'ablation': Suite('ablation', edge=ADAPTED_EDGE, availability=1, variants=VARIANTS),
}


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise PackingException(f"Suite inconnue: {name}", error_code="INVALID_PARAMETER",
                               details={'suites': list(SUITES)})
