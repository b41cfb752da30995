"""
Service de banc d'essai ULDPACK
===============================

Lit les instances d'un répertoire, applique la suite, résout chaque instance
(en parallèle sur plusieurs processus si demandé, ordre des lignes conservé),
puis agrège les mesures en tableaux pandas et enregistre l'exécution.
"""
import dataclasses
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd
from django.db import transaction

from instances.services import discover, read_instances
from packing.config import get_packing_config
from packing.domain import Instance
from packing.exceptions import PackingException
from packing.fleet import load_fleet
from packing.services import get_packing_service
from packing.validation import validate_solution

from .models import BenchmarkResult, BenchmarkRun
from .suites import Suite, get_suite

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ['group', 'instances', 'ū', 'u^min', 'u^max', 't̄', 't^max', 'n̄', '|G|', 'G^vio', '#sub.']


@dataclass(frozen=True)
class BenchTask:
    instance: Instance
    group: str
    variant: str


@dataclass
class BenchReport:
    run: Optional[BenchmarkRun]
    results: pd.DataFrame
    table: pd.DataFrame
    attribution: pd.DataFrame
    ablation: Optional[pd.DataFrame] = None

    def write_csv(self, directory: Path) -> List[Path]:
        directory.mkdir(parents=True, exist_ok=True)
        frames = {'results': self.results, 'table': self.table, 'attribution': self.attribution}
        if self.ablation is not None:
            frames['ablation'] = self.ablation
        paths = []
        for name, frame in frames.items():
            path = directory / f"{name}.csv"
            frame.to_csv(path, index=False)
            paths.append(path)
        return paths

    def as_text(self) -> str:
        parts = [self.table.to_string(index=False, float_format=lambda v: f"{v:.3f}")]
        if not self.attribution.empty:
            parts.append(self.attribution.to_string(index=False))
        if self.ablation is not None:
            parts.append(self.ablation.to_string(index=False, float_format=lambda v: f"{v:.3f}"))
        return "\n\n".join(parts)


def type_count(instance: Instance) -> int:
    return len({(item.dimensions, item.rotatable, item.tiltable, item.stackable) for item in instance.items})


def solve_task(task: BenchTask) -> Dict[str, Any]:
    """Résolution isolée, sans accès à Django (exécutable dans un processus fils)."""
    instance = task.instance
    started = time.perf_counter()
    solution = load_fleet(instance.items, instance.groups, instance.packing, instance.algo)
    elapsed = time.perf_counter() - started
    report = validate_solution(solution, instance)
    return {
        'instance': instance.name,
        'group': task.group,
        'variant': task.variant,
        'uld_count': len(solution.loads),
        'loaded_items': len(solution.loaded_items),
        'unloaded_items': len(solution.unloaded),
        'utilization': solution.utilization,
        'elapsed': elapsed,
        'cog_violations': solution.cog_violations,
        'substructure_count': solution.substructure_count,
        'criteria': [f"{load.criterion}{'+sub' if load.substructure_used else ''}" for load in solution.loads],
        'valid': report.ok,
    }


def summary_table(results: pd.DataFrame) -> pd.DataFrame:
    """Une ligne par sous-ensemble d'instances, plus une ligne de total."""
    def aggregate(frame: pd.DataFrame, label: str) -> Dict[str, Any]:
        return {
            'group': label,
            'instances': len(frame),
            'ū': frame['utilization'].mean(),
            'u^min': frame['utilization'].min(),
            'u^max': frame['utilization'].max(),
            't̄': frame['elapsed'].mean(),
            't^max': frame['elapsed'].max(),
            'n̄': frame['uld_count'].mean(),
            '|G|': int(frame['uld_count'].sum()),
            'G^vio': int(frame['cog_violations'].sum()),
            '#sub.': int(frame['substructure_count'].sum()),
        }

    if results.empty:
        return pd.DataFrame(columns=TABLE_COLUMNS)
    rows = [aggregate(frame, str(group)) for group, frame in results.groupby('group', sort=True)]
    rows.append(aggregate(results, 'total'))
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def attribution_table(results: pd.DataFrame) -> pd.DataFrame:
    """Nombre d'ULD chargées par critère de tri retenu."""
    criteria = results['criteria'].explode().dropna() if not results.empty else pd.Series(dtype=object)
    if criteria.empty:
        return pd.DataFrame(columns=['criterion', 'uld_count'])
    counts = criteria.value_counts()
    return pd.DataFrame({'criterion': counts.index, 'uld_count': counts.values}).sort_values(
        ['uld_count', 'criterion'], ascending=[False, True], ignore_index=True,
    )


def ablation_table(results: pd.DataFrame) -> pd.DataFrame:
    """
    Remplissage et durée moyens par sous-ensemble et par variante, en rapport
    de la variante par défaut du même sous-ensemble, plus une ligne de total.
    """
    def ratios(frame: pd.DataFrame, label: str) -> pd.DataFrame:
        means = frame.groupby('variant', sort=False).agg(**{'ū': ('utilization', 'mean'), 't̄': ('elapsed', 'mean')})
        base = means.loc['default'] if 'default' in means.index else None
        table = means.reset_index()
        table.insert(0, 'group', label)
        for column, ratio in (('ū', 'u_ratio'), ('t̄', 't_ratio')):
            table[ratio] = table[column] / base[column] if base is not None and base[column] else float('nan')
        return table

    frames = [ratios(frame, str(group)) for group, frame in results.groupby('group', sort=True)]
    frames.append(ratios(results, 'total'))
    return pd.concat(frames, ignore_index=True)


class BenchmarkService:
    """Orchestration d'une suite de bancs d'essai"""

    def __init__(self):
        self.config = get_packing_config()
        self.packing_service = get_packing_service()

    def build_tasks(self, suite: Suite, directory: Path, seed: int,
                    overrides: Optional[Dict[str, Any]] = None) -> List[BenchTask]:
        tasks = []
        directory = Path(directory)
        for path in discover(directory):
            relative = path.parent.relative_to(directory)
            for instance in read_instances(path):
                prepared = suite.prepare(instance)
                group = f"J={type_count(prepared)}" if suite.name == 'br' else (str(relative) if str(relative) != '.' else 'all')
                for variant in suite.variants:
                    packing, algo = self.packing_service.resolve_params(
                        prepared, {**suite.overrides, **(overrides or {})}, variant, seed,
                    )
                    tasks.append(BenchTask(dataclasses.replace(prepared, packing=packing, algo=algo), group, variant))
        return tasks

    def run(self, suite_name: str, directory: Path, seed: int = 0, workers: Optional[int] = None,
            overrides: Optional[Dict[str, Any]] = None, persist: bool = True) -> BenchReport:
        """
        Args:
            suite_name: br, paquay, adapted_unlimited, adapted_1uld ou ablation
            directory: répertoire des fichiers d'instance
            seed: graine commune à toutes les résolutions
            workers: processus parallèles (par défaut la configuration)
            overrides: surcharges --param appliquées après celles de la suite
            persist: enregistre l'exécution en base

        Returns:
            BenchReport: lignes brutes et tableaux agrégés
        """
        suite = get_suite(suite_name)
        workers = max(1, workers or self.config.bench_workers)
        tasks = self.build_tasks(suite, directory, seed, overrides)
        if not tasks:
            raise PackingException(f"Aucune instance dans {directory}", error_code="MISSING_INSTANCES",
                                   details={'directory': str(directory)})
        logger.info(f"🚀 Suite {suite.name}: {len(tasks)} résolutions, {workers} processus")

        started = time.perf_counter()
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                rows = list(executor.map(solve_task, tasks))
        else:
            rows = [solve_task(task) for task in tasks]
        elapsed = time.perf_counter() - started

        results = pd.DataFrame(rows)
        default_rows = results[results['variant'] == 'default']
        report = BenchReport(
            run=None,
            results=results,
            table=summary_table(default_rows),
            attribution=attribution_table(default_rows),
            ablation=ablation_table(results) if len(suite.variants) > 1 else None,
        )
        invalid = int((~results['valid']).sum())
        if invalid:
            logger.error(f"❌ {invalid} plans invalides dans la suite {suite.name}")
        logger.info(f"✅ Suite {suite.name} terminée en {elapsed:.1f}s, ū={default_rows['utilization'].mean():.4f}")

        if persist:
            report.run = self._persist(suite, directory, seed, workers, overrides, results, elapsed)
        return report

    @transaction.atomic
    def _persist(self, suite: Suite, directory: Path, seed: int, workers: int,
                 overrides: Optional[Dict[str, Any]], results: pd.DataFrame, elapsed: float) -> BenchmarkRun:
        params = {k: list(v) if isinstance(v, tuple) else v for k, v in {**suite.overrides, **(overrides or {})}.items()}
        default_rows = results[results['variant'] == 'default']
        run = BenchmarkRun.objects.create(
            suite=suite.name,
            directory=str(directory),
            seed=seed,
            workers=workers,
            params=params,
            instance_count=len(default_rows),
            mean_utilization=float(default_rows['utilization'].mean()) if len(default_rows) else None,
            elapsed=elapsed,
        )
        BenchmarkResult.objects.bulk_create([
            BenchmarkResult(run=run, **{k: (float(v) if isinstance(v, float) else v) for k, v in row.items()})
            for row in results.to_dict('records')
        ])
        return run


_benchmark_service = None


def get_benchmark_service() -> BenchmarkService:
    global _benchmark_service
    if _benchmark_service is None:
        _benchmark_service = BenchmarkService()
    return _benchmark_service
