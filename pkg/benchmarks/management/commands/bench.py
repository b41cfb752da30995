"""
Banc d'essai d'une suite d'instances.

    python manage.py bench br data/br/ --seed 0 --workers 4 --out results/br/
"""
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from benchmarks.services import get_benchmark_service
from benchmarks.suites import SUITES
from packing.config import parse_overrides
from packing.exceptions import PackingException


class Command(BaseCommand):
    help = "Résout toutes les instances d'un répertoire selon une suite et affiche les tableaux de mesures"

    def add_arguments(self, parser):
        parser.add_argument('suite', choices=list(SUITES))
        parser.add_argument('directory', type=Path)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--workers', type=int, default=None)
        parser.add_argument('--param', action='append', default=[], metavar='K=V')
        parser.add_argument('--out', type=Path, default=None, help="Répertoire des fichiers CSV")
        parser.add_argument('--no-persist', action='store_true', help="N'enregistre pas l'exécution en base")

    def handle(self, *args, **options):
        try:
            report = get_benchmark_service().run(
                options['suite'],
                options['directory'],
                seed=options['seed'],
                workers=options['workers'],
                overrides=parse_overrides(options['param']),
                persist=not options['no_persist'],
            )
        except PackingException as exc:
            raise CommandError(str(exc))

        self.stdout.write(report.as_text())
        if options['out']:
            for path in report.write_csv(options['out']):
                self.stdout.write(f"📄 {path}")
        if report.run is not None:
            self.stdout.write(self.style.SUCCESS(f"✅ Exécution enregistrée: {report.run.id}"))
