"""
Validation indépendante d'un plan de chargement.

    python manage.py validate instance.json plan.json
"""
import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from instances.exporters import plan_instance, read_plan
from instances.services import read_instance
from packing.exceptions import PackingException
from packing.services import get_packing_service


class Command(BaseCommand):
    help = "Recontrôle toutes les contraintes d'un plan à partir du plan et de l'instance"

    def add_arguments(self, parser):
        parser.add_argument('instance', type=Path)
        parser.add_argument('plan', type=Path)
        parser.add_argument('--json', action='store_true', help="Rapport au format JSON")

    def handle(self, *args, **options):
        try:
            instance = read_instance(options['instance'])
            text = options["plan"].read_text(encoding="utf-8")
            instance = plan_instance(text, instance)
            solution = read_plan(text, instance)
        except (OSError, PackingException) as exc:
            raise CommandError(str(exc))
        report = get_packing_service().validate(instance, solution)

        if options['json']:
            self.stdout.write(json.dumps(report.as_dict(), indent=2, ensure_ascii=False))
            return
        for violation in report.violations:
            coords = f" @ {tuple(violation.coords)}" if violation.coords is not None else ""
            where = f"[{violation.uld_id}] " if violation.uld_id else ""
            self.stdout.write(f"{violation.severity.value.upper():4} {violation.kind:16} {where}{violation.message}{coords}")
        verdict = f"{len(report.hard)} violations dures, {len(report.soft)} violations douces"
        if report.ok:
            self.stdout.write(self.style.SUCCESS(f"✅ Plan valide ({verdict})"))
        else:
            self.stdout.write(self.style.ERROR(f"❌ Plan invalide ({verdict})"))
