"""
Recherche gloutonne randomisée
==============================

Répète l'heuristique d'insertion pour chaque option de sous-structure et
chaque critère de tri, la première exécution de chaque critère sans
randomisation, conserve le meilleur chargement (amélioration stricte du
score) puis referme ses trous.
"""
import logging
from dataclasses import replace
from typing import List, Mapping, Optional, Sequence, Tuple

from .domain import AlgoParams, Item, PackingParams, Uld, UldLoad
from .feasibility import CheckBudget
from .holes import close_holes
from .insertion import load_single_uld
from .ordering import CRITERIA, SortingCriterion
from .scoring import score

logger = logging.getLogger(__name__)


def substructure_options(uld: Uld) -> Tuple[bool, ...]:
    if uld.substructure_allowed and uld.edge_offset > 0:
        return (False, True)
    return (False,)


def iteration_plan(uld: Uld, algo: AlgoParams) -> List[Tuple[bool, SortingCriterion, int]]:
    """Répartit max_rgs_iters sur les cellules (sous-structure × critère), reste aux premières."""
    cells = [(option, criterion) for option in substructure_options(uld) for criterion in CRITERIA]
    base, extra = divmod(algo.max_rgs_iters, len(cells))
    return [(option, criterion, base + (1 if k < extra else 0)) for k, (option, criterion) in enumerate(cells)]


def _remaining(items: Sequence[Item], load: UldLoad) -> List[Item]:
    loaded = {item.id for item in load.items}
    return [item for item in items if item.id not in loaded]


def run_rgs(items: Sequence[Item], uld: Uld, params: PackingParams, algo: AlgoParams, rng,
            fit_counts: Optional[Mapping[str, int]] = None, group_count: int = 1) -> UldLoad:
    """
    Args:
        items: colis disponibles
        uld: ULD à charger
        params: paramètres de chargement
        algo: paramètres de l'algorithme
        rng: générateur aléatoire (consommé séquentiellement)
        fit_counts: |U_i| par identifiant de colis, pour la pénalité
        group_count: |U|

    Returns:
        UldLoad: meilleur chargement trouvé, trous refermés
    """
    items = list(items)
    budget = CheckBudget(algo.max_ep_checks, enforced=False)
    best: Optional[UldLoad] = None
    completed = 0

    for use_substructure, criterion, runs in iteration_plan(uld, algo):
        for j in range(runs):
            if completed >= algo.min_rgs_iters and budget.exhausted:
                break
            budget.enforced = completed >= algo.min_rgs_iters
            rho = 0.0 if j == 0 else algo.randomization_degree
            load = load_single_uld(items, uld, criterion, rho, use_substructure, rng, budget, params, algo)
            completed += 1
            current = score(load, _remaining(items, load), fit_counts, group_count, params, items)
            if best is None or current.total > best.score.total:
                best = load.with_score(current)
                logger.debug(f"🔁 {uld.id}: nouveau meilleur S={current.total:.4f} ({criterion.value}, sous-structure={use_substructure})")
            if not items:
                break
        if not items:
            break

    closed = close_holes(best, params, algo.hole_close_max_iters)
    final = score(closed, _remaining(items, closed), fit_counts, group_count, params, items)
    logger.info(
        f"📦 {uld.id}: {len(closed.items)}/{len(items)} colis, "
        f"remplissage {closed.utilization:.3f}, {completed} itérations, {budget.used} vérifications"
    )
    return replace(closed, score=final, iterations=completed, ep_checks=budget.used)
