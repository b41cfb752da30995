"""
Lecture et écriture du format texte des instances de référence
==============================================================

Fichier orienté lignes : nombre de problèmes, puis pour chaque problème une
ligne « numéro graine », les dimensions du conteneur, le nombre de types de
colis et une ligne par type ``id d1 f1 d2 f2 d3 f3 quantité`` où ``fk``
indique si la dimension ``dk`` peut être verticale.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from packing.domain import Instance, Item, UldGroup
from packing.exceptions import PackingException

from .catalog import cuboid_uld

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BrBoxType:
    type_id: int
    dims: Tuple[int, int, int]
    flags: Tuple[bool, bool, bool]
    count: int


@dataclass(frozen=True)
class BrProblem:
    number: int
    seed: int
    container: Tuple[int, int, int]
    types: Tuple[BrBoxType, ...]

    @property
    def item_count(self) -> int:
        return sum(t.count for t in self.types)


def _malformed(line_no: int, message: str, code: str = "MALFORMED_LINE") -> PackingException:
    return PackingException(f"ligne {line_no}: {message}", error_code=code, details={'line': line_no})


class _Lines:
    """Curseur sur les lignes non vides, numérotées à partir de 1."""

    def __init__(self, text: str):
        self._lines = [(k + 1, line.split()) for k, line in enumerate(text.splitlines()) if line.strip()]
        self._pos = 0

    def next_ints(self, expected: int, what: str) -> Tuple[int, List[int]]:
        if self._pos >= len(self._lines):
            last = self._lines[-1][0] if self._lines else 0
            raise _malformed(last + 1, f"fin de fichier inattendue, {what} attendu", "COUNT_MISMATCH")
        line_no, tokens = self._lines[self._pos]
        self._pos += 1
        try:
            values = [int(token) for token in tokens]
        except ValueError:
            raise _malformed(line_no, f"{what}: entiers attendus, lu {' '.join(tokens)!r}")
        if len(values) != expected:
            raise _malformed(line_no, f"{what}: {expected} valeurs attendues, {len(values)} lues")
        return line_no, values

    @property
    def exhausted(self) -> bool:
        return self._pos >= len(self._lines)

    @property
    def current_line(self) -> int:
        return self._lines[self._pos][0] if not self.exhausted else 0


def parse_br_problems(text: str) -> List[BrProblem]:
    """
    Analyse un fichier complet.

    Raises:
        PackingException: MALFORMED_LINE (numéro de ligne) ou COUNT_MISMATCH
    """
    lines = _Lines(text)
    _, (count,) = lines.next_ints(1, "nombre de problèmes")
    problems = []
    for _ in range(count):
        _, (number, seed) = lines.next_ints(2, "numéro et graine")
        line_no, container = lines.next_ints(3, "dimensions du conteneur")
        if min(container) < 1:
            raise _malformed(line_no, "dimensions du conteneur non positives")
        _, (type_count,) = lines.next_ints(1, "nombre de types")
        types = []
        for _ in range(type_count):
            line_no, values = lines.next_ints(8, "ligne de type")
            type_id, d1, f1, d2, f2, d3, f3, quantity = values
            if min(d1, d2, d3) < 1 or quantity < 0 or any(f not in (0, 1) for f in (f1, f2, f3)):
                raise _malformed(line_no, "dimensions, drapeaux ou quantité invalides")
            if not (f1 or f2 or f3):
                raise _malformed(line_no, "aucune dimension ne peut être verticale")
            types.append(BrBoxType(type_id, (d1, d2, d3), (bool(f1), bool(f2), bool(f3)), quantity))
        problems.append(BrProblem(number, seed, tuple(container), tuple(types)))
    if not lines.exhausted:
        raise _malformed(lines.current_line, f"contenu au-delà des {count} problèmes annoncés", "COUNT_MISMATCH")
    return problems


def write_br(problems: Sequence[BrProblem]) -> str:
    out = [f" {len(problems)}"]
    for problem in problems:
        out.append(f" {problem.number} {problem.seed}")
        out.append(" " + " ".join(str(v) for v in problem.container))
        out.append(f" {len(problem.types)}")
        for t in problem.types:
            pairs = " ".join(f"{d} {int(f)}" for d, f in zip(t.dims, t.flags))
            out.append(f" {t.type_id} {pairs} {t.count}")
    return "\n".join(out) + "\n"


def br_item_flags(box_type: BrBoxType) -> Tuple[Tuple[int, int, int], bool, bool]:
    """
    Taille orientée et drapeaux (rotatif, inclinable) d'un type.

    Inclinable seulement si les trois dimensions peuvent être verticales ;
    sinon la hauteur est d3 si autorisée, à défaut la première dimension
    autorisée, et seule la rotation reste permise.
    """
    dims, flags = box_type.dims, box_type.flags
    if all(flags):
        return dims, True, True
    vertical = 2 if flags[2] else flags.index(True)
    base = [d for k, d in enumerate(dims) if k != vertical]
    return (base[0], base[1], dims[vertical]), True, False


def _instances(problems: Sequence[BrProblem], name_prefix: str) -> Iterator[Instance]:
    for problem in problems:
        items = []
        for box_type in problem.types:
            size, rotatable, tiltable = br_item_flags(box_type)
            items.extend(
                Item(id=f"{box_type.type_id}-{k + 1}", size=size, rotatable=rotatable, tiltable=tiltable)
                for k in range(box_type.count)
            )
        uld = cuboid_uld(f"C{problem.number}", *problem.container, weight_capacity=0)
        yield Instance(name=f"{name_prefix}{problem.number}", items=tuple(items), groups=(UldGroup(uld, 1),))


def parse_br(text: str, name_prefix: str = "br-") -> List[Instance]:
    """
    Une instance par problème : un conteneur parallélépipédique (une unité,
    capacité massique nulle) et des colis de poids nul, un par exemplaire.
    """
    instances = list(_instances(parse_br_problems(text), name_prefix))
    logger.info(f"✅ {len(instances)} instances lues ({sum(len(i.items) for i in instances)} colis)")
    return instances
