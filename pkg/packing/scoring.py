"""
Évaluation d'un chargement d'ULD
================================

Score combinant l'équilibre des masses, le taux de remplissage et une
pénalité pour les colis restants difficiles à placer ailleurs.
"""
from typing import Mapping, Optional, Sequence

from .domain import Item, PackingParams, Score, UldLoad


def cog_deviation(load: UldLoad, axis: int, cog_max: float) -> float:
    """
    Écart normalisé du centre de gravité sur l'axe horizontal donné (0 ou 1).

    Retourne 0 quand l'écart reste dans la tolérance ou sans masse chargée.
    """
    cog = load.cog
    if cog is None:
        return 0.0
    half = load.uld.bounding_box[axis] / 2
    deviation = abs((cog[axis] - half) / half)
    return float(deviation) if deviation > cog_max else 0.0


def score(load: UldLoad, remaining_items: Sequence[Item], fit_counts: Optional[Mapping[str, int]],
          group_count: int, params: PackingParams, all_items: Optional[Sequence[Item]] = None) -> Score:
    """
    Args:
        load: chargement évalué
        remaining_items: colis non chargés
        fit_counts: nombre de groupes d'ULD acceptant chaque colis (|U_i|)
        group_count: nombre total de groupes d'ULD (|U|)
        params: paramètres de chargement
        all_items: colis disponibles avant chargement (par défaut chargés + restants)
    """
    deviations = (
        cog_deviation(load, 0, params.max_cog_deviation),
        cog_deviation(load, 1, params.max_cog_deviation),
    )
    weight_balance = 1.0 - sum(deviations) / 2
    volume = load.loaded_volume / load.uld.volume_capacity

    if all_items is None:
        all_items = list(load.items) + list(remaining_items)
    fit_counts = fit_counts or {}

    def difficulty(items):
        return sum((group_count - fit_counts.get(item.id, group_count)) * item.volume for item in items)

    denominator = difficulty(all_items)
    penalty = difficulty(remaining_items) / denominator if denominator > 0 else 0.0
    total = (params.weight_balance_importance * weight_balance
             + params.volume_importance * volume
             - penalty)
    return Score(weight_balance, volume, penalty, total, deviations)
