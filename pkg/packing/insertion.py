"""
Heuristique d'insertion
=======================

Adapte l'ULD par des colis fictifs (bord, sous-structure), construit l'ordre
de chargement puis place chaque colis au premier point extrême admissible.
"""
import logging
from typing import List, Optional, Sequence, Tuple

from .domain import (AlgoParams, Item, Orientation, PackingParams, Placement, Uld, UldLoad)
from .exceptions import BudgetExhausted, PackingException
from .extreme_points import EpStore, generate_new_points, init_store, resolve_position
from .feasibility import CheckBudget, LoadingState, can_load_at
from .grid import mean_edge
from .ordering import SortingCriterion, build_order

logger = logging.getLogger(__name__)


def _dummy(uld: Uld, name: str, size, stackable: bool) -> Item:
    return Item(id=f"{uld.id}:{name}", size=size, weight=0, rotatable=False, stackable=stackable, dummy=True)


def adapt_uld(uld: Uld, use_substructure: bool = False) -> List[Placement]:
    """
    Colis fictifs modélisant le bord du plancher et la sous-structure.

    Le bord est bloqué jusqu'à la hauteur δ - 1 par quatre cadres non
    gerbables ; la sous-structure est un colis gerbable de hauteur δ
    couvrant le plancher hors bord.
    """
    if use_substructure and not uld.substructure_allowed:
        raise PackingException(
            f"Sous-structure interdite pour l'ULD {uld.id}",
            error_code="SUBSTRUCTURE_NOT_ALLOWED",
            details={'uld': uld.id},
        )
    b1, b2, _ = uld.bounding_box
    edge, offset = uld.edge_width, uld.edge_offset
    dummies = []
    if edge > 0 and offset > 1:
        height = offset - 1
        frames = (
            ('edge-front', (0, 0, 0), (b1, edge, height)),
            ('edge-back', (0, b2 - edge, 0), (b1, edge, height)),
            ('edge-left', (0, edge, 0), (edge, b2 - 2 * edge, height)),
            ('edge-right', (b1 - edge, edge, 0), (edge, b2 - 2 * edge, height)),
        )
        for name, position, size in frames:
            dummies.append(Placement(_dummy(uld, name, size, stackable=False), Orientation(), position))
    if use_substructure and offset > 0:
        size = (b1 - 2 * edge, b2 - 2 * edge, offset)
        dummies.append(Placement(_dummy(uld, 'substructure', size, stackable=True), Orientation(), (edge, edge, 0)))
    return dummies


def prepare_state(uld: Uld, params: PackingParams, algo: AlgoParams, cell_size: float,
                  use_substructure: bool, budget: Optional[CheckBudget] = None) -> Tuple[LoadingState, EpStore]:
    """État initial : origine, colis fictifs chargés et leurs points extrêmes."""
    state = LoadingState(uld, params, algo, cell_size, budget)
    store = init_store(uld, algo.sort_axes)
    for dummy in adapt_uld(uld, use_substructure):
        new_points = generate_new_points(state.placements, dummy, uld, algo)
        state.place(dummy)
        store.extend(new_points)
    return state, store


def try_load(state: LoadingState, store: EpStore, item: Item, orientations: Sequence[Orientation]) -> Optional[Placement]:
    """
    Premier couple (point, orientation) admissible dans l'ordre du magasin.

    Le placement est effectué et les nouveaux points ajoutés ; retourne None
    si aucun point ne convient.
    """
    for point in store.ordered():
        for orientation in orientations:
            size = orientation.apply(item.size)
            position = resolve_position(point, size, state.uld, state.algo)
            if can_load_at(state, item, orientation, position):
                placement = Placement(item, orientation, position)
                new_points = generate_new_points(state.placements, placement, state.uld, state.algo)
                state.place(placement)
                store.extend(new_points)
                return placement
    return None


def load_single_uld(items: Sequence[Item], uld: Uld, criterion: SortingCriterion, rho: float,
                    use_substructure: bool, rng, budget: CheckBudget,
                    params: Optional[PackingParams] = None, algo: Optional[AlgoParams] = None) -> UldLoad:
    """
    Charge une ULD par insertion gloutonne.

    Args:
        items: colis disponibles
        uld: ULD à charger
        criterion: critère de tri des groupes
        rho: degré de randomisation (0 pour l'ordre déterministe)
        use_substructure: charger la sous-structure
        rng: générateur aléatoire de l'itération
        budget: compteur partagé de vérifications

    Returns:
        UldLoad: chargement obtenu, partiel si le budget s'épuise
    """
    params = params or PackingParams()
    algo = algo or AlgoParams()
    criterion = SortingCriterion(criterion)
    cell_size = mean_edge(items) if items else float(max(uld.bounding_box))
    state, store = prepare_state(uld, params, algo, cell_size, use_substructure, budget)

    loaded = set()
    try:
        for item, orientations in build_order(items, criterion, rho, rng):
            if item.id in loaded:
                continue
            if try_load(state, store, item, orientations) is not None:
                loaded.add(item.id)
    except BudgetExhausted as exc:
        logger.debug(f"⚠️ Insertion interrompue dans {uld.id}: {exc}")

    return UldLoad(
        uld=uld,
        placements=tuple(state.placements),
        substructure_used=use_substructure,
        criterion=criterion.value,
        ep_checks=budget.used,
    )
