"""
Coberturas estendidas: a extensão por um objeto estrela.

extend_groupoid duplica o objeto base i como estrela O_* = O_i × {0} e
acrescenta três famílias de registros etiquetados:

- star_to_star: m ∈ M(i,i), tag 0
- base_to_star: m ∈ M(i,i) com tag 1, ou m ∈ M(j,i) (j ≠ i) com tag 0
- star_to_base: m ∈ M(i,i) com tag 2, ou m ∈ M(i,j) (j ≠ i) com tag 0

Os morfismos de coberturas são funções entre carriers estrela que
entrelaçam os grupos Aut(estrela) nos dois sentidos, tomadas a menos de
pós-composição por Aut(estrela do alvo). Todo o modelo trabalha sobre a
base fixada ponto a ponto: carriers da base nunca são permutados.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional

from gpdkit._tables import (
    Table,
    compose,
    identity_table,
    images_in_order,
    invert,
    is_bijection,
    is_total,
    make_table,
    preimages_of,
    values_on,
)
from gpdkit.config import DEFAULT_BOUNDS, STAR_OBJECT, OracleBounds
from gpdkit.exceptions import (
    BoundExceededError,
    InvariantError,
    PreconditionError,
    StructuralError,
)
from gpdkit.groupoid import (
    Arrow,
    FiniteGroupoid,
    PermutationGroup,
    aut_group,
    faithful_base,
    full_subgroupoid,
    hom_set,
    is_connected,
    require_connected,
    require_object,
    validate_groupoid,
)
from gpdkit.models import ReportBuilder, ValidationReport

logger = logging.getLogger(__name__)


# =============================================================================
# TIPOS
# =============================================================================


class StarKind(str, Enum):
    """Tipo de registro estrela (quais lados tocam O_*)."""
    STAR_TO_STAR = "star_to_star"
    BASE_TO_STAR = "base_to_star"
    STAR_TO_BASE = "star_to_base"


@dataclass(frozen=True, slots=True)
class StarElement:
    """Elemento (a, 0) de O_*."""

    base_label: str
    tag: int = 0


@dataclass(frozen=True, slots=True)
class StarRecord:
    """Registro de M_*: (kind, morfismo subjacente, tag) com a tabela induzida."""

    kind: StarKind
    underlying: str
    tag: int
    src: str
    dst: str
    table: Table

    @property
    def id(self) -> str:
        return f"{self.kind.value}:{self.underlying}:{self.tag}"

    @property
    def base_side(self) -> str:
        """Objeto do lado da base (a própria estrela para star_to_star)."""
        return self.src if self.kind is StarKind.BASE_TO_STAR else self.dst

    def arrow(self) -> Arrow:
        return Arrow(self.id, self.src, self.dst, self.table)


@dataclass(frozen=True)
class ExtendedCover:
    """Grupoide conexo com um objeto estrela distinguido.

    Os rótulos da estrela são os rótulos do objeto base; como carriers são
    endereçados por (objeto, rótulo), a etiqueta 0 fica implícita.
    """

    base: FiniteGroupoid
    base_object: str
    star_object: str
    star_carrier: tuple[StarElement, ...]
    star_morphisms: tuple[StarRecord, ...]

    @property
    def star_labels(self) -> tuple[str, ...]:
        return tuple(e.base_label for e in self.star_carrier)

    @cached_property
    def total(self) -> FiniteGroupoid:
        """Estrutura total: base mais estrela e registros."""
        if self.star_object in self.base.carriers:
            raise StructuralError("objeto estrela colide com a base", [self.star_object])
        carriers = dict(self.base.carriers)
        carriers[self.star_object] = self.star_labels
        arrows = dict(self.base.arrows)
        for record in self.star_morphisms:
            arrows[record.id] = record.arrow()
        return FiniteGroupoid.build(carriers, arrows.values())

    @cached_property
    def star_aut(self) -> PermutationGroup:
        """Aut(estrela): tabelas dos registros star_to_star."""
        return PermutationGroup(
            self.star_labels,
            frozenset(r.table for r in self.star_morphisms if r.kind is StarKind.STAR_TO_STAR),
        )

    def incoming(self, obj: str) -> frozenset[Table]:
        """Hom(O_obj, estrela) na estrutura total."""
        return self.total.hom_tables(obj, self.star_object)

    def outgoing(self, obj: str) -> frozenset[Table]:
        """Hom(estrela, O_obj) na estrutura total."""
        return self.total.hom_tables(self.star_object, obj)

    def records_of(self, kind: StarKind) -> tuple[StarRecord, ...]:
        return tuple(r for r in self.star_morphisms if r.kind is kind)

    def __repr__(self) -> str:
        return (
            f"ExtendedCover(base_object={self.base_object!r}, star={len(self.star_carrier)}, "
            f"records={len(self.star_morphisms)})"
        )


@dataclass(frozen=True, eq=False)
class CoverMorphism:
    """Função entre carriers estrela, como classe módulo Aut(estrela do alvo)."""

    source: ExtendedCover
    target: ExtendedCover
    table: Table

    @cached_property
    def canonical_table(self) -> Table:
        """Representante lexicograficamente mínimo de {α∘table}."""
        order = self.source.star_labels
        return min(
            (compose(alpha, self.table) for alpha in self.target.star_aut.elements),
            key=lambda t: images_in_order(t, order),
            default=self.table,
        )

    @cached_property
    def canonical_rep(self) -> tuple[str, ...]:
        """Sequência de imagens do representante, na ordem do carrier de origem."""
        return images_in_order(self.canonical_table, self.source.star_labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoverMorphism):
            return NotImplemented
        return (
            self.canonical_rep == other.canonical_rep
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self) -> int:
        return hash(self.canonical_rep)

    def __repr__(self) -> str:
        return f"CoverMorphism({','.join(self.canonical_rep)})"


# =============================================================================
# CONSTRUÇÃO E RESTRIÇÃO
# =============================================================================


def _fresh_star_id(g: FiniteGroupoid, preferred: Optional[str]) -> str:
    if preferred is not None:
        if preferred in g.carriers:
            raise StructuralError("objeto estrela colide com a base", [preferred])
        return preferred
    candidate, k = STAR_OBJECT, 0
    while candidate in g.carriers:
        k += 1
        candidate = f"{STAR_OBJECT}_{k}"
    return candidate


def extend_groupoid(
    g: FiniteGroupoid, i: str, star_object: Optional[str] = None
) -> ExtendedCover:
    """Extensão por um objeto: duplica o objeto i como estrela.

    Args:
        g: grupoide válido e conexo
        i: objeto base da construção
        star_object: identificador da estrela (padrão: 'star', ou 'star_k' se ocupado)

    Raises:
        PreconditionError: g desconexo.
        SemanticError: g inválido.
    """
    validate_groupoid(g).raise_if_invalid("grupoide inválido")
    require_object(g, i)
    require_connected(g)
    star = _fresh_star_id(g, star_object)

    records: list[StarRecord] = []
    loops = hom_set(g, i, i)
    for m in loops:
        records.append(StarRecord(StarKind.STAR_TO_STAR, m, 0, star, star, g.tables[m]))
    for m in loops:
        records.append(StarRecord(StarKind.BASE_TO_STAR, m, 1, i, star, g.tables[m]))
    for m in loops:
        records.append(StarRecord(StarKind.STAR_TO_BASE, m, 2, star, i, g.tables[m]))
    for j in g.object_ids:
        if j == i:
            continue
        for m in hom_set(g, j, i):
            records.append(StarRecord(StarKind.BASE_TO_STAR, m, 0, j, star, g.tables[m]))
        for m in hom_set(g, i, j):
            records.append(StarRecord(StarKind.STAR_TO_BASE, m, 0, star, j, g.tables[m]))

    cover = ExtendedCover(
        g, i, star, tuple(StarElement(a) for a in g.carriers[i]), tuple(records)
    )
    report = validate_cover(cover)
    if not report.ok:
        raise InvariantError(f"extensão inválida: {sorted(report.invariants())}")
    return cover


def expected_star_count(g: FiniteGroupoid, i: str) -> int:
    """3|M(i,i)| + Σ_{j≠i} (|M(i,j)| + |M(j,i)|)."""
    count = 3 * len(g.hom_ids(i, i))
    for j in g.object_ids:
        if j != i:
            count += len(g.hom_ids(i, j)) + len(g.hom_ids(j, i))
    return count


def aut_transport_check(v: ExtendedCover) -> ValidationReport:
    """A etiquetagem a ↦ (a, 0) conjuga Aut(estrela) sobre Aut_base(objeto base)."""
    report = ReportBuilder("aut-transport")
    base_carrier = v.base.carriers.get(v.base_object)
    if base_carrier is None:
        report.add("aut-transport", "objeto base inexistente", [v.base_object])
        return report.build()
    if v.star_labels != base_carrier:
        report.add("aut-transport", "carrier estrela não é cópia do objeto base", [v.star_object])
        return report.build()
    star_aut = v.total.hom_tables(v.star_object, v.star_object)
    base_aut = aut_group(v.base, v.base_object).elements
    for table in sorted(star_aut ^ base_aut):
        side = "estrela" if table in star_aut else "base"
        report.add(
            "aut-transport",
            f"automorfismo só em {side}: {','.join(images_in_order(table, base_carrier))}",
            [v.star_object, v.base_object],
        )
    return report.build()


def validate_cover(v: ExtendedCover) -> ValidationReport:
    """Todos os invariantes de ExtendedCover.

    Raises:
        StructuralError: registros com tabelas não totais ou objetos inexistentes.
    """
    report = ReportBuilder("cover")
    total = v.total
    report.extend(validate_groupoid(total))
    if not is_connected(total):
        report.add("connected", "estrutura total desconexa", [v.star_object])
    if full_subgroupoid(total, v.base.object_ids) != v.base:
        report.add("restriction", "restrição aos objetos da base difere da base", [])
    if v.base_object in v.base.carriers:
        expected = expected_star_count(v.base, v.base_object)
        if len(v.star_morphisms) != expected:
            report.add(
                "count-law",
                f"{len(v.star_morphisms)} registros estrela, esperado {expected}",
                [v.base_object],
            )
    report.extend(aut_transport_check(v))
    return report.build()


def restrict_cover(v: ExtendedCover) -> FiniteGroupoid:
    """Functor G nos objetos: a base da cobertura."""
    if full_subgroupoid(v.total, v.base.object_ids) != v.base:
        raise InvariantError("restrição da cobertura difere da base")
    return v.base


# =============================================================================
# MORFISMOS DE COBERTURAS
# =============================================================================


def _sigma_name(table: Table, order: tuple[str, ...]) -> str:
    return "σ=" + ",".join(images_in_order(table, order))


def validate_cover_morphism(c: CoverMorphism) -> ValidationReport:
    """Entrelaçamento para frente e para trás entre Aut(S1) e Aut(S2).

    Raises:
        StructuralError: tabela não total entre os carriers estrela.
    """
    if not is_total(c.table, c.source.star_labels, c.target.star_labels):
        raise StructuralError("tabela do morfismo de coberturas não é total")
    report = ReportBuilder("cover-morphism")
    aut1, aut2 = c.source.star_aut.elements, c.target.star_aut.elements
    post = {compose(s2, c.table) for s2 in aut2}
    pre = {compose(c.table, s1) for s1 in aut1}
    for s1 in sorted(aut1):
        if compose(c.table, s1) not in post:
            report.add(
                "forward-intertwining",
                "nenhum σ2 corresponde a σ1",
                [_sigma_name(s1, c.source.star_labels)],
            )
    for s2 in sorted(aut2):
        if compose(s2, c.table) not in pre:
            report.add(
                "backward-intertwining",
                "nenhum σ1 corresponde a σ2",
                [_sigma_name(s2, c.target.star_labels)],
            )
    return report.build()


def identity_cover_morphism(v: ExtendedCover) -> CoverMorphism:
    return CoverMorphism(v, v, identity_table(v.star_labels))


def compose_cover_morphisms(g: CoverMorphism, h: CoverMorphism) -> CoverMorphism:
    """Classe de h∘g, independente dos representantes.

    Raises:
        StructuralError: o alvo de g não é a origem de h.
    """
    if g.target != h.source:
        raise StructuralError("composição de morfismos com coberturas incompatíveis")
    composite = CoverMorphism(g.source, h.target, compose(h.table, g.table))
    if not validate_cover_morphism(composite).ok:
        raise InvariantError("composição não entrelaça")
    via_reps = CoverMorphism(g.source, h.target, compose(h.canonical_table, g.canonical_table))
    if via_reps != composite:
        raise InvariantError("composição depende dos representantes")
    return composite


def is_cover_isomorphism(c: CoverMorphism) -> bool:
    """Verdadeiro sse a tabela é bijetiva (com inversa válida e conjugação de Aut)."""
    if not is_bijection(c.table, c.target.star_labels):
        return False
    inverse = invert_cover_morphism(c)
    if not validate_cover_morphism(inverse).ok:
        raise InvariantError("inversa do isomorfismo não entrelaça")
    if c.source.star_aut.conjugate(c.table) != c.target.star_aut.elements:
        raise InvariantError("conjugação não leva Aut(S1) sobre Aut(S2)")
    return True


def invert_cover_morphism(c: CoverMorphism) -> CoverMorphism:
    if not is_bijection(c.table, c.target.star_labels):
        raise PreconditionError("morfismo de coberturas não bijetivo")
    return CoverMorphism(c.target, c.source, invert(c.table))


def base_choice_transport(g: FiniteGroupoid, i: str, j: str) -> CoverMorphism:
    """Isomorfismo extend(g, i) -> extend(g, j) induzido por α ∈ Hom(i, j).

    A classe não depende do α escolhido (verificado para todos).
    """
    arrows = hom_set(g, i, j)
    if not arrows:
        raise PreconditionError(f"Hom({i}, {j}) vazio", [i, j])
    v1, v2 = extend_groupoid(g, i), extend_groupoid(g, j)
    transport = CoverMorphism(v1, v2, g.tables[arrows[0]])
    if not validate_cover_morphism(transport).ok or not is_cover_isomorphism(transport):
        raise InvariantError("transporte de base não é isomorfismo")
    if any(CoverMorphism(v1, v2, g.tables[m]) != transport for m in arrows[1:]):
        raise InvariantError("transporte depende do α escolhido")
    return transport


# =============================================================================
# DETERMINAÇÃO DE M_* POR O_*
# =============================================================================


def star_determinacy_check(v: ExtendedCover) -> ValidationReport:
    """Registros estrela são determinados pelos valores numa base fiel da estrela.

    Para cada Hom-set que toca a estrela, o mapa registro ↦ (kind, objeto
    do lado da base, valores em c) deve ser injetivo. Registros base_to_star
    são lidos pelas pré-imagens de c.
    """
    report = ReportBuilder("star-determinacy")
    base_tuple = faithful_base(v.total, v.star_object).tuple
    seen: dict[tuple, StarRecord] = {}
    for record in v.star_morphisms:
        if record.kind is StarKind.BASE_TO_STAR:
            values: tuple = preimages_of(record.table, base_tuple)
        else:
            values = values_on(record.table, base_tuple)
        key = (record.src, record.dst, record.kind, record.base_side, values)
        if key in seen:
            report.add(
                "star-determinacy",
                f"{seen[key].id} e {record.id} coincidem na base fiel {list(base_tuple)}",
                [seen[key].id, record.id],
            )
        else:
            seen[key] = record
    return report.build()


# =============================================================================
# ORÁCULO
# =============================================================================


def enumerate_cover_morphisms(
    v1: ExtendedCover,
    v2: ExtendedCover,
    bounds: OracleBounds = DEFAULT_BOUNDS,
) -> list[CoverMorphism]:
    """Todas as classes de tabelas S1 -> S2 que entrelaçam.

    Raises:
        BoundExceededError: |S2|^|S1| ou os carriers acima dos limites.
    """
    s1, s2 = v1.star_labels, v2.star_labels
    if len(s1) + len(s2) > bounds.max_carrier_total:
        raise BoundExceededError(
            "carriers estrela acima do limite", len(s1) + len(s2), bounds.max_carrier_total
        )
    size = len(s2) ** len(s1)
    if size > bounds.max_star_tables:
        raise BoundExceededError("tabelas estrela acima do limite", size, bounds.max_star_tables)

    classes: dict[tuple[str, ...], CoverMorphism] = {}
    for values in itertools.product(s2, repeat=len(s1)):
        candidate = CoverMorphism(v1, v2, make_table(zip(s1, values)))
        if candidate.canonical_rep in classes:
            continue
        if validate_cover_morphism(candidate).ok:
            classes[candidate.canonical_rep] = candidate
    logger.info(f"{len(classes)} classes de morfismos de coberturas entre {size} tabelas")
    return [classes[k] for k in sorted(classes)]
