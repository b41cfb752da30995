"""
Service de chargement ULDPACK
=============================

Point d'entrée unique des commandes et du banc d'essai : résout les
paramètres (configuration, instance, surcharges, variante, graine), lance
le chargement de la flotte et le validateur indépendant.
"""
import dataclasses
import logging
import time
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from .config import PackingConfig, get_packing_config, split_overrides
from .domain import AlgoParams, Instance, PackingParams, Solution, VARIANTS
from .exceptions import PackingException
from .fleet import load_fleet
from .validation import ValidationReport, validate_solution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveResult:
    instance: Instance
    solution: Solution
    report: ValidationReport
    elapsed: float


class PackingService:
    """Orchestration d'une résolution complète"""

    def __init__(self, config: Optional[PackingConfig] = None):
        self.config = config or get_packing_config()

    def resolve_params(self, instance: Instance, overrides: Optional[Dict[str, Any]] = None,
                       variant: Optional[str] = None, seed: Optional[int] = None) -> Tuple[PackingParams, AlgoParams]:
        """
        Applique les surcharges aux paramètres portés par l'instance.

        Args:
            instance: instance dont les paramètres servent de base
            overrides: couples déjà typés (--param k=v)
            variant: variante d'ablation
            seed: graine remplaçant rng_seed

        Returns:
            tuple: (PackingParams, AlgoParams)
        """
        overrides = dict(overrides or {})
        if seed is not None:
            overrides['rng_seed'] = int(seed)
        packing, algo = split_overrides(overrides)
        packing_params = dataclasses.replace(instance.packing, **packing)
        algo_params = dataclasses.replace(instance.algo, **algo)
        if variant and variant != 'default':
            if variant not in VARIANTS:
                raise PackingException(f"Variante inconnue: {variant}", error_code="INVALID_PARAMETER")
            algo_params = algo_params.with_variant(variant)
        return packing_params, algo_params

    def solve(self, instance: Instance, overrides: Optional[Dict[str, Any]] = None,
              variant: Optional[str] = None, seed: Optional[int] = None) -> SolveResult:
        packing, algo = self.resolve_params(instance, overrides, variant, seed)
        resolved = dataclasses.replace(instance, packing=packing, algo=algo)
        logger.info(f"🚀 Résolution de {instance.name} (variante {algo.variant}, graine {algo.rng_seed})")
        started = time.perf_counter()
        try:
            solution = load_fleet(resolved.items, resolved.groups, packing, algo)
        except PackingException:
            logger.error(f"❌ Échec de la résolution de {instance.name}")
            raise
        elapsed = time.perf_counter() - started
        report = validate_solution(solution, resolved)
        if report.ok:
            logger.info(f"✅ {instance.name} résolue en {elapsed:.2f}s, plan valide")
        else:
            logger.error(f"❌ {instance.name}: {len(report.hard)} violations dures dans le plan")
        return SolveResult(resolved, solution, report, elapsed)

    def validate(self, instance: Instance, solution: Solution) -> ValidationReport:
        return validate_solution(solution, instance)


_packing_service = None


def get_packing_service() -> PackingService:
    """Retourne l'instance globale du service"""
    global _packing_service
    if _packing_service is None:
        _packing_service = PackingService()
    return _packing_service
