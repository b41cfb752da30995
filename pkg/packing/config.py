"""
Configuration centralisée du solveur ULDPACK
============================================

Lit les réglages Django (chemins, niveau de log) et le fichier YAML des
paramètres par défaut, puis fabrique les paramètres de chargement et
d'algorithme en appliquant les surcharges (--param k=v, variantes).
"""
import dataclasses
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

import yaml
from django.conf import settings

from .domain import AlgoParams, PackingParams, VARIANTS
from .exceptions import PackingException

logger = logging.getLogger(__name__)

PACKING_FIELDS = {f.name for f in dataclasses.fields(PackingParams)}
ALGO_FIELDS = {f.name for f in dataclasses.fields(AlgoParams)}


def parse_overrides(pairs: Iterable[str]) -> Dict[str, Any]:
    """
    Convertit des couples ``k=v`` en dictionnaire typé (scalaires YAML).

    Raises:
        PackingException: couple mal formé
    """
    overrides = {}
    for pair in pairs or ():
        key, sep, value = pair.partition('=')
        if not sep or not key.strip():
            raise PackingException(f"Surcharge mal formée: {pair!r}", error_code="INVALID_PARAMETER")
        overrides[key.strip()] = yaml.safe_load(value) if value.strip() else None
    return overrides


def split_overrides(overrides: Dict[str, Any]) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    unknown = set(overrides) - PACKING_FIELDS - ALGO_FIELDS
    if unknown:
        raise PackingException(
            f"Paramètres inconnus: {', '.join(sorted(unknown))}",
            error_code="INVALID_PARAMETER",
            details={'unknown': sorted(unknown)},
        )
    packing = {k: v for k, v in overrides.items() if k in PACKING_FIELDS}
    algo = {k: v for k, v in overrides.items() if k in ALGO_FIELDS}
    return packing, algo


class PackingConfig:
    """
    Configuration centralisée du solveur
    """

    def __init__(self):
        """Initialise la configuration à partir des réglages Django"""
        self.config_path = Path(getattr(settings, 'ULDPACK_CONFIG', Path(settings.BASE_DIR) / 'config' / 'uldpack.yaml'))
        self.catalog_path = Path(getattr(settings, 'ULDPACK_ULD_CATALOG',
                                         Path(settings.BASE_DIR) / 'instances' / 'data' / 'b777_ulds.yaml'))
        self.bench_workers = int(getattr(settings, 'ULDPACK_BENCH_WORKERS', 1))
        self.bench_dir = Path(getattr(settings, 'ULDPACK_BENCH_DIR', Path(settings.BASE_DIR) / 'bench_data'))
        raw = self._load_yaml()
        self.packing_defaults = PackingParams(**(raw.get('packing') or {}))
        self.algo_defaults = AlgoParams(**(raw.get('algo') or {}))

        # Validation de la configuration
        self._validate_config()

    def _load_yaml(self) -> Dict[str, Any]:
        if not self.config_path.exists():
            logger.warning(f"⚠️ Fichier de configuration absent: {self.config_path}, valeurs par défaut utilisées")
            return {}
        with open(self.config_path, encoding='utf-8') as handle:
            raw = yaml.safe_load(handle) or {}
        try:
            split_overrides({**(raw.get('packing') or {}), **(raw.get('algo') or {})})
        except PackingException as exc:
            raise PackingException(f"{self.config_path}: {exc.message}", error_code=exc.error_code, details=exc.details)
        return raw

    def _validate_config(self):
        """Signale les réglages inhabituels"""
        if self.packing_defaults.weight_balance_importance > 1:
            logger.warning("⚠️ weight_balance_importance > 1 : importance du volume ramenée à 0")
        if self.algo_defaults.max_ep_checks < 10_000:
            logger.warning(f"⚠️ Budget de vérifications très faible: {self.algo_defaults.max_ep_checks}")
        if self.bench_workers < 1:
            logger.warning("⚠️ ULDPACK_BENCH_WORKERS < 1, ramené à 1")
            self.bench_workers = 1

    def packing_params(self, overrides: Optional[Dict[str, Any]] = None,
                       base: Optional[PackingParams] = None) -> PackingParams:
        packing, _ = split_overrides(overrides or {})
        return dataclasses.replace(base or self.packing_defaults, **packing)

    def algo_params(self, overrides: Optional[Dict[str, Any]] = None, base: Optional[AlgoParams] = None,
                    variant: Optional[str] = None) -> AlgoParams:
        _, algo = split_overrides(overrides or {})
        params = dataclasses.replace(base or self.algo_defaults, **algo)
        if variant:
            if variant not in VARIANTS:
                raise PackingException(f"Variante inconnue: {variant}", error_code="INVALID_PARAMETER")
            params = params.with_variant(variant)
        return params

    def __str__(self):
        return f"ULDPACK config {self.config_path} - variante {self.algo_defaults.variant}"


_packing_config = None


def get_packing_config() -> PackingConfig:
    """Instance globale, construite au premier appel"""
    global _packing_config
    if _packing_config is None:
        _packing_config = PackingConfig()
    return _packing_config


def reset_packing_config() -> None:
    global _packing_config
    _packing_config = None
