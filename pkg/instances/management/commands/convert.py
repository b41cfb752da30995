"""
Conversion vers le schéma d'instance JSON.

    python manage.py convert fichier.txt --from br --out instances/br/
    python manage.py convert colis.csv --from items-csv --uld AKE:4 --uld PMC --out inst.json
"""
import dataclasses
import logging
from pathlib import Path

import pandas as pd
from django.core.management.base import BaseCommand, CommandError

from instances.catalog import load_catalog, with_edges
from instances.parsers import parse_br
from instances.serializers import parse_instance_json, write_instance_json
from packing.config import get_packing_config
from packing.domain import Instance, Item, UldGroup
from packing.exceptions import PackingException

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('id', 'l', 'w', 'h')
CSV_FLAGS = {'weight': 0, 'rotatable': True, 'tiltable': False, 'stackable': True}


def _uld_groups(specs, edge_width: int, edge_offset: int):
    catalog = load_catalog()
    groups = []
    for spec in specs:
        uld_id, _, count = spec.partition(':')
        if uld_id not in catalog:
            raise PackingException(f"ULD absente du catalogue: {uld_id}", error_code="INVALID_ULD",
                                   details={'catalog': list(catalog)})
        uld = catalog[uld_id]
        if edge_width or edge_offset:
            uld = with_edges(uld, edge_width, edge_offset)
        groups.append(UldGroup(uld, int(count) if count and count != 'unlimited' else None))
    return tuple(groups)


def items_from_csv(path: Path):
    frame = pd.read_csv(path)
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise PackingException(f"Colonnes manquantes dans {path}: {', '.join(missing)}",
                               error_code="SCHEMA_VIOLATION")
    for column, default in CSV_FLAGS.items():
        if column not in frame.columns:
            frame[column] = default
    return tuple(
        Item(
            id=str(row['id']), size=(int(row['l']), int(row['w']), int(row['h'])), weight=int(row['weight']),
            rotatable=bool(row['rotatable']), tiltable=bool(row['tiltable']), stackable=bool(row['stackable']),
        )
        for row in frame.to_dict('records')
    )


class Command(BaseCommand):
    help = "Convertit des instances (format texte de référence, JSON, liste CSV de colis) en JSON canonique"

    def add_arguments(self, parser):
        parser.add_argument('source', type=Path)
        parser.add_argument('--from', dest='source_format', choices=['br', 'json', 'items-csv'], default='br')
        parser.add_argument('--out', type=Path, required=True,
                            help="Fichier de sortie, ou répertoire si plusieurs instances")
        parser.add_argument('--uld', action='append', default=[],
                            help="ULD du catalogue, ID[:nombre] (items-csv)")
        parser.add_argument('--edge-width', type=int, default=0)
        parser.add_argument('--edge-offset', type=int, default=0)
        parser.add_argument('--name', default=None)

    def handle(self, *args, **options):
        source = options['source']
        if not source.exists():
            raise CommandError(f"Fichier introuvable: {source}")
        try:
            instances = self._read(source, options)
        except PackingException as exc:
            raise CommandError(str(exc))

        out = options['out']
        if len(instances) == 1 and out.suffix == '.json':
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(write_instance_json(instances[0]), encoding='utf-8')
        else:
            out.mkdir(parents=True, exist_ok=True)
            for instance in instances:
                (out / f"{instance.name}.json").write_text(write_instance_json(instance), encoding='utf-8')
        self.stdout.write(self.style.SUCCESS(f"✅ {len(instances)} instance(s) écrite(s) dans {out}"))

    def _read(self, source: Path, options):
        text_format = options['source_format']
        if text_format == 'br':
            config = get_packing_config()
            return [
                dataclasses.replace(instance, packing=config.packing_defaults, algo=config.algo_defaults)
                for instance in parse_br(source.read_text(encoding="utf-8"), name_prefix=f"{options['name'] or source.stem}-")
            ]
        if text_format == 'json':
            return [parse_instance_json(source.read_text(encoding='utf-8'))]
        if not options['uld']:
            raise CommandError("--uld est requis avec --from items-csv")
        config = get_packing_config()
        return [Instance(
            name=options['name'] or source.stem,
            items=items_from_csv(source),
            groups=_uld_groups(options['uld'], options['edge_width'], options['edge_offset']),
            packing=config.packing_defaults,
            algo=config.algo_defaults,
        )]
