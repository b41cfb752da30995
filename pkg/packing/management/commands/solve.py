"""
Résolution d'une instance.

    python manage.py solve instance.json --seed 3 --param max_rgs_iters=50 --out plan.json
"""
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from instances.exporters import export_scene, write_plan, write_plan_csv
from instances.services import read_instance
from packing.config import parse_overrides
from packing.domain import VARIANTS
from packing.exceptions import PackingException
from packing.services import get_packing_service

VARIANT_FLAGS = ('no_grid', 'no_blocking', 'no_moving', 'crainic_mimic')


class Command(BaseCommand):
    help = "Charge les colis d'une instance dans ses ULD et écrit le plan de chargement"

    def add_arguments(self, parser):
        parser.add_argument('instance', type=Path)
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--param', action='append', default=[], metavar='K=V',
                            help="Surcharge d'un paramètre de chargement ou d'algorithme")
        parser.add_argument('--variant', choices=VARIANTS, default=None)
        for flag in VARIANT_FLAGS:
            parser.add_argument(f"--{flag.replace('_', '-')}", dest=flag, action='store_true')
        parser.add_argument('--out', type=Path, default=None)
        parser.add_argument('--format', dest='output_format', choices=['json', 'csv', 'obj'], default='json')

    def handle(self, *args, **options):
        flagged = [flag for flag in VARIANT_FLAGS if options[flag]]
        if len(flagged) > 1 or (flagged and options['variant'] not in (None, flagged[0])):
            raise CommandError("Une seule variante à la fois")
        variant = flagged[0] if flagged else options['variant']

        try:
            instance = read_instance(options['instance'])
            overrides = parse_overrides(options['param'])
            result = get_packing_service().solve(instance, overrides, variant, options['seed'])
        except PackingException as exc:
            raise CommandError(str(exc))

        solution = result.solution
        if options['output_format'] == 'csv':
            text = write_plan_csv(solution)
        elif options['output_format'] == 'obj':
            text = export_scene(solution)
        else:
            text = write_plan(solution, result.instance)

        if options['out']:
            options['out'].parent.mkdir(parents=True, exist_ok=True)
            options['out'].write_text(text, encoding='utf-8')
        else:
            self.stdout.write(text, ending='')

        summary = (
            f"{result.instance.name}: {len(solution.loads)} ULD, {len(solution.loaded_items)} colis chargés, "
            f"{len(solution.unloaded)} non chargés, remplissage {solution.utilization:.4f}, "
            f"{result.elapsed:.2f}s, plan {'valide' if result.report.ok else 'INVALIDE'}"
        )
        if solution.unloaded:
            self.stderr.write(f"⚠️ {summary}")
            raise CommandError(f"{len(solution.unloaded)} colis non chargés", returncode=2)
        self.stderr.write(self.style.SUCCESS(f"✅ {summary}"))
