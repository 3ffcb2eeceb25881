"""
Famílias de grupoides conexos sobre uma base finita A.

Uma família é um grupoide possivelmente desconexo cujas componentes
conexas são exatamente as fibras sobre A. As construções relativas
(C_A e G_A) aplicam fibra a fibra a maquinaria de uma base só, com uma
seção ν: A -> I escolhendo o objeto duplicado em cada fibra.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Optional, Union

from gpdkit._tables import Table, compose, identity_table, invert, make_table
from gpdkit.config import DEFAULT_BOUNDS, FIBRE_PREFIX, STAR_OBJECT, OracleBounds
from gpdkit.covers import (
    CoverMorphism,
    ExtendedCover,
    StarRecord,
    extend_groupoid,
    restrict_cover,
    validate_cover_morphism,
)
from gpdkit.equivalence import functor_C_map, functor_G_map
from gpdkit.exceptions import (
    BoundExceededError,
    FamilyError,
    InvariantError,
    StructuralError,
)
from gpdkit.groupoid import (
    FiniteGroupoid,
    aut_group,
    connected_components,
    faithful_base,
    full_subgroupoid,
    is_connected,
    validate_groupoid,
)
from gpdkit.models import CensusReport, ReportBuilder, ValidationReport
from gpdkit.morphisms import GroupoidMorphism, identity_morphism, validate_morphism

logger = logging.getLogger(__name__)


# =============================================================================
# TIPOS
# =============================================================================


@dataclass(frozen=True)
class GroupoidFamily:
    """Grupoide total fibrado sobre a base A (fibras = componentes conexas)."""

    total: FiniteGroupoid
    base: tuple[str, ...]
    obj_base: dict[str, str]
    """objeto -> identificador de base"""

    def objects_over(self, a: str) -> tuple[str, ...]:
        return tuple(o for o in self.total.object_ids if self.obj_base[o] == a)


@dataclass(frozen=True, order=True, slots=True)
class StarPoint:
    """Ponto de S = ⋃ S_a, com sua projeção na base."""

    fibre: str
    label: str


@dataclass(frozen=True)
class FamilyCover:
    """Extensão fibra a fibra de uma família, com seção ν."""

    family: GroupoidFamily
    section: dict[str, str]
    fibre_covers: dict[str, ExtendedCover]
    extra_records: tuple[StarRecord, ...] = ()
    """Estrutura adicional entre estrelas (só em fixtures adversariais)"""

    @property
    def base(self) -> tuple[str, ...]:
        return self.family.base

    @cached_property
    def star_total(self) -> tuple[StarPoint, ...]:
        return tuple(
            StarPoint(a, label)
            for a in self.base
            for label in self.fibre_covers[a].star_labels
        )

    def project(self, point: StarPoint) -> str:
        return point.fibre

    @cached_property
    def star_objects(self) -> dict[str, str]:
        """fibra -> identificador do objeto estrela na estrutura total."""
        return {a: self.fibre_covers[a].star_object for a in self.base}

    @cached_property
    def total_structure(self) -> FiniteGroupoid:
        """Família total mais todas as estrelas, registros e estrutura extra."""
        carriers = dict(self.family.total.carriers)
        arrows = list(self.family.total)
        for a in self.base:
            cover = self.fibre_covers[a]
            if cover.star_object in carriers:
                raise StructuralError("objeto estrela repetido", [cover.star_object])
            carriers[cover.star_object] = cover.star_labels
            arrows += [r.arrow() for r in cover.star_morphisms]
        arrows += [r.arrow() for r in self.extra_records]
        return FiniteGroupoid.build(carriers, arrows)


@dataclass(frozen=True)
class GroupoidFamilyMorphism:
    """Morfismos de grupoides por fibra, indexados pela base comum."""

    source: GroupoidFamily
    target: GroupoidFamily
    components: dict[str, GroupoidMorphism]


@dataclass(frozen=True)
class CoverFamilyMorphism:
    """Tabela S(origem) -> S(alvo) que deve comutar com as projeções em A."""

    source: FamilyCover
    target: FamilyCover
    table: tuple[tuple[StarPoint, StarPoint], ...]


FamilyMorphism = Union[GroupoidFamilyMorphism, CoverFamilyMorphism]


# =============================================================================
# FAMÍLIAS E FIBRAS
# =============================================================================


def validate_family(fam: GroupoidFamily) -> ValidationReport:
    """Grupoide total válido, obj_base sobrejetiva, fibras = componentes.

    Raises:
        StructuralError: obj_base não cobre os objetos ou aponta fora da base.
    """
    if set(fam.obj_base) != set(fam.total.carriers):
        raise StructuralError("obj_base deve cobrir todos os objetos")
    unknown = sorted(set(fam.obj_base.values()) - set(fam.base))
    if unknown:
        raise StructuralError("obj_base aponta para base inexistente", unknown)

    report = ReportBuilder("family")
    report.extend(validate_groupoid(fam.total))
    for a in fam.base:
        if not fam.objects_over(a):
            report.add("surjective", f"fibra {a} vazia", [a])
    for component in connected_components(fam.total):
        fibres = sorted({fam.obj_base[o] for o in component})
        if len(fibres) > 1:
            report.add("fibres-are-components", "componente conexa cruza fibras", fibres)
    for a in fam.base:
        objects = fam.objects_over(a)
        if objects and not is_connected(full_subgroupoid(fam.total, objects)):
            report.add("fibres-are-components", f"fibra {a} desconexa", [a])
    return report.build()


def family_from_components(g: FiniteGroupoid) -> GroupoidFamily:
    """Estrutura de família natural: uma fibra por componente conexa (a1, a2, ...)."""
    validate_groupoid(g).raise_if_invalid("grupoide inválido")
    components = connected_components(g)
    base = tuple(f"{FIBRE_PREFIX}{k}" for k in range(1, len(components) + 1))
    obj_base = {o: a for a, component in zip(base, components) for o in component}
    return GroupoidFamily(g, base, {o: obj_base[o] for o in g.object_ids})


def fibre(fam: GroupoidFamily, a: str) -> FiniteGroupoid:
    """Subgrupoide pleno sobre obj_base⁻¹(a).

    Raises:
        StructuralError: identificador de base desconhecido.
    """
    if a not in fam.base:
        raise StructuralError("identificador de base desconhecido", [a])
    sub = full_subgroupoid(fam.total, fam.objects_over(a))
    if not sub.carriers or not is_connected(sub) or not validate_groupoid(sub).ok:
        raise InvariantError(f"fibra {a} não é grupoide conexo", [a])
    return sub


# =============================================================================
# EXTENSÃO E RESTRIÇÃO RELATIVAS
# =============================================================================


def _star_id_for(fam: GroupoidFamily, a: str) -> str:
    candidate = f"{STAR_OBJECT}_{a}"
    if candidate in fam.total.carriers:
        raise StructuralError("identificador de estrela colide com objeto", [candidate])
    return candidate


def default_section(fam: GroupoidFamily) -> dict[str, str]:
    """Primeiro objeto de cada fibra, na ordem declarada."""
    return {a: fam.objects_over(a)[0] for a in fam.base}


def relative_extend(
    fam: GroupoidFamily,
    section: Optional[Mapping[str, str]] = None,
    bounds: OracleBounds = DEFAULT_BOUNDS,
) -> FamilyCover:
    """C_A: extensão de cada fibra em ν(a), com fibras independentes.

    Raises:
        FamilyError: seção fora da fibra ou incompleta.
        InvariantError: fibra não finitamente fiel ou fibras dependentes.
    """
    validate_family(fam).raise_if_invalid("família inválida")
    nu = dict(section) if section is not None else default_section(fam)
    if set(nu) != set(fam.base):
        raise FamilyError("seção deve cobrir toda a base", sorted(set(nu) ^ set(fam.base)))
    for a, obj in nu.items():
        if fam.obj_base.get(obj) != a:
            raise FamilyError(f"seção em {a} cai fora da fibra", [a, obj])

    covers: dict[str, ExtendedCover] = {}
    for a in fam.base:
        g = fibre(fam, a)
        base_tuple = faithful_base(g, nu[a]).tuple
        if len(aut_group(g, nu[a]).pointwise_stabiliser(base_tuple)) != 1:
            raise InvariantError(f"fibra {a} não é finitamente fiel", [a])
        covers[a] = extend_groupoid(g, nu[a], star_object=_star_id_for(fam, a))

    cover = FamilyCover(fam, {a: nu[a] for a in fam.base}, covers)
    _assert_product_assembles(cover, bounds)
    return cover


def _assert_product_assembles(fc: FamilyCover, bounds: OracleBounds) -> None:
    size = math.prod(fc.fibre_covers[a].star_aut.order for a in fc.base)
    if size > bounds.max_automorphism_candidates:
        logger.debug(f"reconstrução do produto pulada ({size} elementos)")
        return
    for sigma in _assembled(fc):
        if not _preserves_structure(fc, sigma):
            raise InvariantError("automorfismos das fibras não se montam")


def relative_restrict(fc: FamilyCover) -> GroupoidFamily:
    """G_A: a família subjacente (ida e volta exata)."""
    for a in fc.base:
        if restrict_cover(fc.fibre_covers[a]) != fibre(fc.family, a):
            raise InvariantError(f"cobertura da fibra {a} não restringe à fibra", [a])
    return fc.family


# =============================================================================
# INDEPENDÊNCIA DAS FIBRAS E CENSO
# =============================================================================


def _assembled(fc: FamilyCover) -> Iterator[dict[str, Table]]:
    """Todas as tuplas (σ_a) com σ_a ∈ Aut(estrela da fibra a)."""
    stars = [fc.star_objects[a] for a in fc.base]
    groups = [sorted(fc.fibre_covers[a].star_aut.elements) for a in fc.base]
    for choice in itertools.product(*groups):
        yield dict(zip(stars, choice))


def _preserves_structure(fc: FamilyCover, sigma: Mapping[str, Table]) -> bool:
    """σ (identidade na base) preserva todo Hom-set que toca uma estrela."""
    total = fc.total_structure
    stars = set(sigma)
    for x in total.object_ids:
        for y in total.object_ids:
            if x not in stars and y not in stars:
                continue
            tables = total.hom_tables(x, y)
            sx = sigma.get(x, identity_table(total.carriers[x]))
            sy = sigma.get(y, identity_table(total.carriers[y]))
            if {compose(sy, compose(t, invert(sx))) for t in tables} != tables:
                return False
    return True


def independence_check(
    fc: FamilyCover, bounds: OracleBounds = DEFAULT_BOUNDS
) -> ValidationReport:
    """(1) toda tupla de automorfismos das fibras se monta; (2) a montagem é bijetiva.

    A busca percorre todas as permutações de cada carrier estrela.

    Raises:
        BoundExceededError: Π |S_a|! acima do limite.
    """
    stars = [fc.star_objects[a] for a in fc.base]
    carriers = [fc.fibre_covers[a].star_labels for a in fc.base]
    candidates = math.prod(math.factorial(len(c)) for c in carriers)
    if candidates > bounds.max_automorphism_candidates:
        raise BoundExceededError(
            "busca de automorfismos acima do limite",
            candidates,
            bounds.max_automorphism_candidates,
        )

    found: set[tuple[Table, ...]] = set()
    for perms in itertools.product(*(itertools.permutations(c) for c in carriers)):
        sigma = {s: make_table(zip(c, p)) for s, c, p in zip(stars, carriers, perms)}
        if _preserves_structure(fc, sigma):
            found.add(tuple(sigma[s] for s in stars))

    assembled = {tuple(sigma[s] for s in stars) for sigma in _assembled(fc)}
    report = ReportBuilder("independence")
    if not assembled <= found:
        report.add(
            "assembly",
            f"{len(assembled - found)} tuplas de automorfismos das fibras não se montam",
            list(fc.base),
        )
    if not found <= assembled:
        report.add(
            "decomposition",
            f"{len(found)} automorfismos totais, {len(assembled)} montados das fibras",
            list(fc.base),
        )
    logger.info(f"independência: {len(found)} automorfismos em {candidates} candidatos")
    return report.build()


def internality_census(fc: FamilyCover) -> CensusReport:
    """Fibras cujo Aut(estrela) é não trivial."""
    orders = {a: fc.fibre_covers[a].star_aut.order for a in fc.base}
    return CensusReport(
        flagged=tuple(a for a in fc.base if orders[a] > 1),
        orders=orders,
        total=len(fc.base),
    )


# =============================================================================
# MORFISMOS DE FAMÍLIAS
# =============================================================================


def identity_family_morphism(fam: GroupoidFamily) -> GroupoidFamilyMorphism:
    return GroupoidFamilyMorphism(
        fam, fam, {a: identity_morphism(fibre(fam, a)) for a in fam.base}
    )


def identity_cover_family_morphism(fc: FamilyCover) -> CoverFamilyMorphism:
    return CoverFamilyMorphism(fc, fc, tuple((p, p) for p in fc.star_total))


def split_cover_family_morphism(fm: CoverFamilyMorphism) -> dict[str, CoverMorphism]:
    """Desmonta a tabela total em morfismos de coberturas por fibra.

    Raises:
        FamilyError: bases diferentes ou tabela que cruza fibras.
        StructuralError: tabela não total sobre S.
    """
    if fm.source.base != fm.target.base:
        raise FamilyError("bases diferentes", [*fm.source.base, *fm.target.base])
    sources = [p for p, _ in fm.table]
    if sorted(sources) != sorted(fm.source.star_total) or not {
        q for _, q in fm.table
    } <= set(fm.target.star_total):
        raise StructuralError("tabela não total entre os carriers estrela da família")
    crossing = [f"{p.fibre}:{p.label}" for p, q in fm.table if p.fibre != q.fibre]
    if crossing:
        raise FamilyError("fibre-crossing", crossing)

    return {
        a: CoverMorphism(
            fm.source.fibre_covers[a],
            fm.target.fibre_covers[a],
            make_table((p.label, q.label) for p, q in fm.table if p.fibre == a),
        )
        for a in fm.source.base
    }


def relative_functor_G(fm: CoverFamilyMorphism) -> GroupoidFamilyMorphism:
    """G_A: aplica functor_G_map em cada fibra."""
    parts = split_cover_family_morphism(fm)
    return GroupoidFamilyMorphism(
        fm.source.family,
        fm.target.family,
        {a: functor_G_map(c) for a, c in parts.items()},
    )


def relative_functor_C(
    fm: GroupoidFamilyMorphism, fc1: FamilyCover, fc2: FamilyCover
) -> CoverFamilyMorphism:
    """C_A: aplica functor_C_map em cada fibra e monta a tabela sobre S."""
    if fm.source != fc1.family or fm.target != fc2.family:
        raise FamilyError("coberturas não estendem as famílias do morfismo")
    if fm.source.base != fm.target.base:
        raise FamilyError("bases diferentes", [*fm.source.base, *fm.target.base])
    pairs: list[tuple[StarPoint, StarPoint]] = []
    for a in fm.source.base:
        image = functor_C_map(fm.components[a], fc1.fibre_covers[a], fc2.fibre_covers[a])
        pairs += [(StarPoint(a, x), StarPoint(a, y)) for x, y in image.table]
    return CoverFamilyMorphism(fc1, fc2, tuple(sorted(pairs)))


def validate_family_morphism(
    fm: FamilyMorphism, functor_laws: bool = False
) -> ValidationReport:
    """Valida um morfismo de famílias, de grupoides ou de coberturas.

    Args:
        fm: GroupoidFamilyMorphism ou CoverFamilyMorphism
        functor_laws: se True, verifica também G_A∘C_A e C_A∘G_A por fibra

    Raises:
        FamilyError: bases diferentes ou tabela que cruza fibras.
    """
    if isinstance(fm, CoverFamilyMorphism):
        return _validate_cover_side(fm, functor_laws)

    if fm.source.base != fm.target.base:
        raise FamilyError("bases diferentes", [*fm.source.base, *fm.target.base])
    report = ReportBuilder("family-morphism")
    missing = sorted(set(fm.source.base) ^ set(fm.components))
    if missing:
        report.add("fibre-components", "componentes não correspondem à base", missing)
    for a in fm.source.base:
        component = fm.components.get(a)
        if component is None:
            continue
        if component.source != fibre(fm.source, a) or component.target != fibre(fm.target, a):
            report.add("fibre-mismatch", f"componente {a} não liga as fibras {a}", [a])
            continue
        for v in validate_morphism(component).violations:
            report.add(v.invariant, f"fibra {a}: {v.message}", [a, *v.subjects])
        if functor_laws and report.ok:
            v1 = extend_groupoid(component.source, component.source.object_ids[0])
            v2 = extend_groupoid(component.target, component.target.object_ids[0])
            if functor_G_map(functor_C_map(component, v1, v2)) != component:
                report.add("relative-functor-laws", f"G(C(h_{a})) ≠ h_{a}", [a])
    return report.build()


def _validate_cover_side(fm: CoverFamilyMorphism, functor_laws: bool) -> ValidationReport:
    parts = split_cover_family_morphism(fm)
    report = ReportBuilder("family-morphism")
    for a, c in parts.items():
        for v in validate_cover_morphism(c).violations:
            report.add(v.invariant, f"fibra {a}: {v.message}", [a, *v.subjects])
        if functor_laws and report.ok:
            if functor_C_map(functor_G_map(c), c.source, c.target) != c:
                report.add("relative-functor-laws", f"C(G(g_{a})) ≠ g_{a}", [a])
    return report.build()
