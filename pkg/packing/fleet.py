"""
Chargement d'une flotte d'ULD
=============================

Boucle séquentielle : choix du groupe d'ULD, recherche gloutonne randomisée
sur cette ULD, retrait des colis chargés ; enfin rechargement de la dernière
ULD dans la plus petite ULD disponible qui accepte tous ses colis.
"""
import logging
from typing import Dict, List, Optional, Sequence, Set

import numpy as np

from .domain import AlgoParams, Item, PackingParams, Solution, UldGroup, UldLoad, admissible_orientations
from .exceptions import PackingException
from .feasibility import can_load_at
from .extreme_points import resolve_position
from .insertion import prepare_state
from .rgs import run_rgs, substructure_options

logger = logging.getLogger(__name__)

FitTable = Dict[str, Set[int]]


def item_fits_group(item: Item, group: UldGroup, params: PackingParams, algo: Optional[AlgoParams] = None) -> bool:
    """Le colis seul trouve-t-il une place dans l'ULD vide adaptée ?"""
    algo = algo or AlgoParams()
    uld = group.uld
    if item.weight > uld.weight_capacity:
        return False
    for use_substructure in substructure_options(uld):
        state, store = prepare_state(uld, params, algo, float(max(item.size)), use_substructure)
        for point in store.ordered():
            for orientation in admissible_orientations(item):
                size = orientation.apply(item.size)
                if can_load_at(state, item, orientation, resolve_position(point, size, uld, algo)):
                    return True
    return False


def build_fit_table(items: Sequence[Item], groups: Sequence[UldGroup], params: PackingParams,
                    algo: Optional[AlgoParams] = None) -> FitTable:
    return {
        item.id: {g for g, group in enumerate(groups) if item_fits_group(item, group, params, algo)}
        for item in items
    }


def select_next_uld(items: Sequence[Item], groups: Sequence[UldGroup], fit_table: FitTable,
                    available: Optional[Sequence[int]] = None) -> int:
    """
    Index du groupe d'ULD à charger ensuite.

    Parmi les groupes acceptant les colis les plus contraints (|U_i| minimal),
    prend celui dont le volume cumulé des colis acceptés est maximal ;
    égalité départagée par le plus grand volume d'ULD.
    """
    available = set(range(len(groups)) if available is None else available)
    fits = {item.id: fit_table.get(item.id, set()) & available for item in items}
    constrained = [item for item in items if fits[item.id]]
    if not constrained:
        raise PackingException(
            "Aucun colis ne rentre dans une ULD disponible",
            error_code="NO_FITTING_ULD",
            details={'items': [item.id for item in items]},
        )
    m = min(len(fits[item.id]) for item in constrained)
    candidates = sorted(set().union(*(fits[item.id] for item in constrained if len(fits[item.id]) == m)))

    def fit_volume(g: int) -> int:
        return sum(item.volume for item in items if g in fits[item.id])

    return max(candidates, key=lambda g: (fit_volume(g), groups[g].uld.volume_capacity, -g))


def _spawn(seed: int, count: int):
    for child in np.random.SeedSequence(seed).spawn(count):
        yield np.random.Generator(np.random.Philox(child))


def load_fleet(items: Sequence[Item], groups: Sequence[UldGroup], params: PackingParams,
               algo: AlgoParams) -> Solution:
    """
    Args:
        items: colis à charger
        groups: groupes d'ULD disponibles (count=None : illimité)
        params: paramètres de chargement
        algo: paramètres de l'algorithme (graine comprise)

    Returns:
        Solution: chargements et colis non chargés
    """
    logger.info(f"🚀 Chargement de {len(items)} colis dans {len(groups)} groupes d'ULD")
    fit_table = build_fit_table(items, groups, params, algo)
    fit_counts = {item_id: len(fits) for item_id, fits in fit_table.items()}
    counts = [group.count for group in groups]
    unloadable = [item for item in items if not fit_table[item.id]]
    remaining = [item for item in items if fit_table[item.id]]
    for item in unloadable:
        logger.warning(f"⚠️ Colis {item.id} trop grand ou trop lourd pour toutes les ULD")

    def is_available(g: int) -> bool:
        return counts[g] is None or counts[g] > 0

    streams = _spawn(algo.rng_seed, len(items) + len(groups) + 2)
    loads: List[UldLoad] = []
    load_groups: List[int] = []
    exhausted: Set[int] = set()
    while remaining:
        available = [g for g in range(len(groups)) if is_available(g) and g not in exhausted]
        if not available:
            break
        try:
            g = select_next_uld(remaining, groups, fit_table, available)
        except PackingException:
            break
        load = run_rgs(remaining, groups[g].uld, params, algo, next(streams), fit_counts, len(groups))
        if load.is_empty:
            exhausted.add(g)
            continue
        loads.append(load)
        load_groups.append(g)
        if counts[g] is not None:
            counts[g] -= 1
        loaded = {item.id for item in load.items}
        remaining = [item for item in remaining if item.id not in loaded]

    if loads:
        reload_stream = next(streams)
        last, last_group = loads[-1], load_groups[-1]
        last_items = list(last.items)
        counts_if_returned = list(counts)
        if counts_if_returned[last_group] is not None:
            counts_if_returned[last_group] += 1
        candidates = sorted(
            (g for g in range(len(groups))
             if (counts_if_returned[g] is None or counts_if_returned[g] > 0)
             and groups[g].uld.volume_capacity < last.uld.volume_capacity
             and all(g in fit_table[item.id] for item in last_items)),
            key=lambda g: (groups[g].uld.volume_capacity, g),
        )
        for g in candidates:
            attempt = run_rgs(last_items, groups[g].uld, params, algo, reload_stream, fit_counts, len(groups))
            if len(attempt.items) == len(last_items):
                logger.info(f"🔁 Dernière ULD rechargée: {last.uld.id} → {groups[g].uld.id}")
                loads[-1] = attempt
                break

    solution = Solution(tuple(loads), tuple(unloadable + remaining))
    logger.info(
        f"✅ {len(solution.loads)} ULD chargées, {len(solution.unloaded)} colis non chargés, "
        f"remplissage {solution.utilization:.3f}"
    )
    return solution
