"""
Lecture des fichiers d'instance selon leur format.
"""
import logging
from pathlib import Path
from typing import List

from packing.exceptions import PackingException
from packing.domain import Instance

from .parsers import parse_br
from .serializers import parse_instance_json

logger = logging.getLogger(__name__)

INSTANCE_SUFFIXES = ('.json', '.txt', '.br')


def read_instances(path: Path) -> List[Instance]:
    """Un fichier JSON contient une instance, un fichier texte de référence en contient plusieurs."""
    path = Path(path)
    if not path.is_file():
        raise PackingException(f"Fichier d'instance introuvable: {path}", error_code="MISSING_INSTANCES",
                               details={'path': str(path)})
    text = path.read_text(encoding='utf-8')
    if path.suffix == '.json':
        return [parse_instance_json(text)]
    return parse_br(text, name_prefix=f"{path.stem}-")


def read_instance(path: Path) -> Instance:
    instances = read_instances(path)
    if not instances:
        raise PackingException(f"Aucune instance dans {path}", error_code="MISSING_INSTANCES",
                               details={'path': str(path)})
    if len(instances) > 1:
        logger.warning(f"⚠️ {path} contient {len(instances)} instances, seule la première est utilisée")
    return instances[0]


def discover(directory: Path) -> List[Path]:
    """Fichiers d'instance d'un répertoire, triés par nom."""
    directory = Path(directory)
    files = sorted(p for p in directory.rglob('*') if p.is_file() and p.suffix in INSTANCE_SUFFIXES) if directory.is_dir() else []
    if not files:
        raise PackingException(f"Aucune instance dans {directory}", error_code="MISSING_INSTANCES",
                               details={'directory': str(directory)})
    return files
