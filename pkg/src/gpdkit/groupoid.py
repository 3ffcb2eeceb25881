"""
Grupoides finitos concretos.

Um grupoide aqui é sempre concreto: cada objeto carrega um carrier finito
de rótulos e cada morfismo é uma bijeção entre carriers, dada por tabela.
Este módulo valida a estrutura, calcula Hom-sets, grupos de automorfismos,
componentes conexas e bases fiéis (tuplas com estabilizador pontual trivial).

Exemplo:
    >>> from gpdkit.groupoid import closure_from_generators, aut_group
    >>> z2 = closure_from_generators({"o": ["a", "b"]}, [("o", "o", {"a": "b", "b": "a"})])
    >>> aut_group(z2, "o").order
    2
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from sympy.combinatorics import Permutation
from sympy.combinatorics import PermutationGroup as SympyPermutationGroup

from gpdkit._tables import (
    Table,
    compose,
    identity_table,
    invert,
    is_bijection,
    is_total,
    make_table,
)
from gpdkit.exceptions import PreconditionError, StructuralError
from gpdkit.models import ReportBuilder, ValidationReport

logger = logging.getLogger(__name__)

Triple = tuple[str, str, Table]
"""(objeto de origem, objeto de destino, tabela)"""

MorphismSpec = Union["Arrow", tuple[str, str, str, Union[Mapping[str, str], Table]]]


# =============================================================================
# TIPOS
# =============================================================================


@dataclass(frozen=True, slots=True)
class ElementRef:
    """Elemento endereçado por (objeto, rótulo); carriers são disjuntos por construção."""

    object: str
    label: str


@dataclass(frozen=True, slots=True)
class Arrow:
    """Um morfismo identificado, com sua tabela."""

    id: str
    src: str
    dst: str
    table: Table

    @property
    def triple(self) -> Triple:
        return (self.src, self.dst, self.table)


@dataclass(frozen=True)
class FiniteGroupoid:
    """Grupoide finito concreto (candidato até passar em validate_groupoid).

    Objetos e morfismos ficam ordenados por identificador (ordem bytewise);
    a ordem dos rótulos dentro de cada carrier é a declarada.
    """

    carriers: dict[str, tuple[str, ...]]
    """objeto -> carrier ordenado"""

    arrows: dict[str, Arrow]
    """identificador do morfismo -> Arrow"""

    @classmethod
    def build(
        cls,
        objects: Mapping[str, Sequence[str]],
        morphisms: Iterable[MorphismSpec] = (),
    ) -> "FiniteGroupoid":
        """Constrói um candidato, rejeitando defeitos estruturais.

        Args:
            objects: objeto -> rótulos do carrier (ordem declarada)
            morphisms: Arrow ou tuplas (id, src, dst, mapa)

        Raises:
            StructuralError: rótulo duplicado, identificador não resolvido,
                tabela não total ou id de morfismo repetido.
        """
        carriers: dict[str, tuple[str, ...]] = {}
        for obj in sorted(objects):
            labels = tuple(str(a) for a in objects[obj])
            if len(set(labels)) != len(labels):
                raise StructuralError("rótulo duplicado no carrier", [obj])
            carriers[str(obj)] = labels

        arrows: dict[str, Arrow] = {}
        for spec in morphisms:
            arrow = spec if isinstance(spec, Arrow) else _arrow_from_tuple(spec)
            if arrow.id in arrows:
                raise StructuralError("identificador de morfismo repetido", [arrow.id])
            arrows[arrow.id] = arrow

        groupoid = cls(carriers, {m: arrows[m] for m in sorted(arrows)})
        check_structure(groupoid)
        return groupoid

    # --- acesso ---

    @property
    def object_ids(self) -> tuple[str, ...]:
        return tuple(self.carriers)

    @property
    def morphism_ids(self) -> tuple[str, ...]:
        return tuple(self.arrows)

    @cached_property
    def src(self) -> dict[str, str]:
        return {m: a.src for m, a in self.arrows.items()}

    @cached_property
    def dst(self) -> dict[str, str]:
        return {m: a.dst for m, a in self.arrows.items()}

    @cached_property
    def tables(self) -> dict[str, Table]:
        return {m: a.table for m, a in self.arrows.items()}

    def carrier(self, obj: str) -> tuple[str, ...]:
        require_object(self, obj)
        return self.carriers[obj]

    @cached_property
    def _hom_index(self) -> dict[tuple[str, str], tuple[str, ...]]:
        index: dict[tuple[str, str], list[str]] = {}
        for m, arrow in self.arrows.items():
            index.setdefault((arrow.src, arrow.dst), []).append(m)
        return {pair: tuple(ids) for pair, ids in index.items()}

    def hom_ids(self, i: str, j: str) -> tuple[str, ...]:
        return self._hom_index.get((i, j), ())

    def hom_tables(self, i: str, j: str) -> frozenset[Table]:
        """Conjunto das tabelas de Hom(i, j)."""
        return frozenset(self.arrows[m].table for m in self.hom_ids(i, j))

    def triples(self) -> frozenset[Triple]:
        """Estrutura sem identificadores de morfismo."""
        return frozenset(a.triple for a in self.arrows.values())

    def same_structure(self, other: "FiniteGroupoid") -> bool:
        """Igualdade a menos de renomear morfismos."""
        return self.carriers == other.carriers and self.triples() == other.triples()

    def __iter__(self) -> Iterator[Arrow]:
        return iter(self.arrows.values())

    def __len__(self) -> int:
        return len(self.arrows)

    def __repr__(self) -> str:
        return f"FiniteGroupoid(objects={list(self.carriers)}, morphisms={len(self.arrows)})"


@dataclass(frozen=True)
class PermutationGroup:
    """Grupo de permutações de um carrier, dado por suas tabelas.

    As contas de grupo (fecho, estabilizadores, conjugação) são feitas em
    `sympy.combinatorics`, indexando o carrier pela ordem declarada.
    """

    carrier: tuple[str, ...]
    elements: frozenset[Table]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Table:
        return identity_table(self.carrier)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, table: object) -> bool:
        return table in self.elements

    def __iter__(self) -> Iterator[Table]:
        return iter(sorted(self.elements))

    def is_trivial(self) -> bool:
        return self.elements == frozenset({self.identity})

    def to_permutation(self, table: Table) -> Permutation:
        return _permutation_of(self.carrier, self.carrier, table)

    def from_permutation(self, perm: Permutation) -> Table:
        return _table_of(self.carrier, self.carrier, perm)

    @cached_property
    def sympy_group(self) -> SympyPermutationGroup:
        """Subgrupo de S_n gerado pelas tabelas."""
        generators = [self.to_permutation(s) for s in sorted(self.elements)]
        return SympyPermutationGroup(generators or [Permutation(list(range(len(self.carrier))))])

    def is_group(self) -> bool:
        """Contém a identidade e coincide com o subgrupo que gera."""
        if self.identity not in self.elements:
            return False
        if not all(is_bijection(s, self.carrier) for s in self.elements):
            return False
        if not self.carrier:
            return True
        return self.sympy_group.order() == len(self.elements)

    def pointwise_stabiliser(self, points: Sequence[str]) -> frozenset[Table]:
        if not self.carrier:
            return self.elements
        index = {label: k for k, label in enumerate(self.carrier)}
        stabiliser = self.sympy_group.pointwise_stabilizer([index[p] for p in points])
        return frozenset(self.from_permutation(p) for p in stabiliser.generate())

    def conjugate_group(self, beta: Table, onto: Sequence[str]) -> SympyPermutationGroup:
        """β Aut β⁻¹ como grupo sympy sobre `onto` (o codomínio de β, na ordem dada)."""
        b = _permutation_of(self.carrier, onto, beta)
        return SympyPermutationGroup([g ^ b for g in self.sympy_group.generators])

    def conjugate(self, beta: Table) -> frozenset[Table]:
        """{β∘σ∘β⁻¹ : σ no grupo}, sobre o codomínio de β."""
        if not self.carrier:
            return self.elements
        onto = tuple(sorted(b for _, b in beta))
        group = self.conjugate_group(beta, onto)
        return frozenset(_table_of(onto, onto, p) for p in group.generate())


def _permutation_of(carrier: Sequence[str], onto: Sequence[str], table: Table) -> Permutation:
    index = {label: k for k, label in enumerate(onto)}
    lookup = dict(table)
    return Permutation([index[lookup[label]] for label in carrier])


def _table_of(carrier: Sequence[str], onto: Sequence[str], perm: Permutation) -> Table:
    return make_table((carrier[k], onto[v]) for k, v in enumerate(perm.array_form))


@dataclass(frozen=True, slots=True)
class FaithfulBase:
    """Tupla de um objeto cujo estabilizador pontual em Aut é trivial."""

    object: str
    tuple: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tuple)


# =============================================================================
# ESTRUTURA E VALIDAÇÃO
# =============================================================================


def _arrow_from_tuple(spec: tuple) -> Arrow:
    try:
        m, src, dst, mapping = spec
    except (TypeError, ValueError):
        raise StructuralError(f"morfismo malformado: {spec!r}")
    table = mapping if isinstance(mapping, tuple) else make_table(mapping)
    return Arrow(str(m), str(src), str(dst), table)


def require_object(g: FiniteGroupoid, obj: str) -> None:
    if obj not in g.carriers:
        raise StructuralError("objeto desconhecido", [obj])


def check_structure(g: FiniteGroupoid) -> None:
    """Falha com StructuralError se algum identificador não resolve ou tabela não é total."""
    for m, arrow in g.arrows.items():
        if arrow.src not in g.carriers or arrow.dst not in g.carriers:
            raise StructuralError(
                f"morfismo {m} referencia objeto inexistente", [m, arrow.src, arrow.dst]
            )
        if not is_total(arrow.table, g.carriers[arrow.src], g.carriers[arrow.dst]):
            raise StructuralError(
                f"tabela de {m} não é total de {arrow.src} para {arrow.dst}", [m]
            )


def validate_groupoid(g: FiniteGroupoid) -> ValidationReport:
    """Verifica todos os invariantes de grupoide.

    Invariantes reportados: empty-carrier, bijection, distinct-morphisms,
    identity, closure-composition, closure-inverse.

    Raises:
        StructuralError: se a estrutura não for bem formada.
    """
    check_structure(g)
    report = ReportBuilder("groupoid")

    for obj, carrier in g.carriers.items():
        if not carrier:
            report.add("empty-carrier", f"carrier vazio em {obj}", [obj])

    bijective: list[Arrow] = []
    for arrow in g:
        if is_bijection(arrow.table, g.carriers[arrow.dst]):
            bijective.append(arrow)
        else:
            report.add("bijection", f"{arrow.id} não é bijeção", [arrow.id])

    seen: dict[Triple, str] = {}
    for arrow in g:
        if arrow.triple in seen:
            report.add(
                "distinct-morphisms",
                f"{seen[arrow.triple]} e {arrow.id} definem a mesma bijeção",
                [seen[arrow.triple], arrow.id],
            )
        else:
            seen[arrow.triple] = arrow.id

    for obj, carrier in g.carriers.items():
        if identity_table(carrier) not in g.hom_tables(obj, obj):
            report.add("identity", f"missing identity at {obj}", [obj])

    for first in g:
        for second_id in _outgoing(g, first.dst):
            second = g.arrows[second_id]
            if compose(second.table, first.table) not in g.hom_tables(first.src, second.dst):
                report.add(
                    "closure-composition",
                    f"{second.id}∘{first.id} não está em Hom({first.src}, {second.dst})",
                    [first.id, second.id],
                )

    for arrow in bijective:
        if invert(arrow.table) not in g.hom_tables(arrow.dst, arrow.src):
            report.add("closure-inverse", f"inversa de {arrow.id} ausente", [arrow.id])

    return report.build()


def _outgoing(g: FiniteGroupoid, obj: str) -> Iterator[str]:
    for target in g.carriers:
        yield from g.hom_ids(obj, target)


# =============================================================================
# FECHO
# =============================================================================


def closure_from_generators(
    carriers: Mapping[str, Sequence[str]],
    seeds: Iterable[tuple[str, str, Union[Mapping[str, str], Table]]] = (),
) -> FiniteGroupoid:
    """Menor grupoide contendo as sementes e todas as identidades.

    Os morfismos recebem nomes m0, m1, ... na ordem lexicográfica das
    triplas (src, dst, tabela), de modo que a saída é reprodutível.

    Args:
        carriers: objeto -> rótulos
        seeds: tuplas (src, dst, mapa) com mapas bijetivos

    Raises:
        PreconditionError: semente não bijetiva (nomeada como seedK).
        StructuralError: objeto desconhecido.
    """
    normalized = {str(o): tuple(str(a) for a in labels) for o, labels in carriers.items()}
    triples: set[Triple] = {(o, o, identity_table(c)) for o, c in normalized.items()}

    for k, (src, dst, mapping) in enumerate(seeds):
        if src not in normalized or dst not in normalized:
            raise StructuralError(f"seed{k} referencia objeto inexistente", [f"seed{k}"])
        table = mapping if isinstance(mapping, tuple) else make_table(mapping)
        if not is_total(table, normalized[src], normalized[dst]) or not is_bijection(
            table, normalized[dst]
        ):
            raise PreconditionError(f"seed{k} não é bijeção de {src} para {dst}", [f"seed{k}"])
        triples.add((src, dst, table))

    triples |= {(d, s, invert(t)) for s, d, t in triples}
    closed = _close_triples(triples)
    logger.debug(f"fecho com {len(closed)} morfismos a partir de {len(triples)} geradores")

    arrows = [Arrow(f"m{k}", s, d, t) for k, (s, d, t) in enumerate(sorted(closed))]
    return FiniteGroupoid.build(normalized, arrows)


def _close_triples(triples: set[Triple]) -> set[Triple]:
    closed = set(triples)
    frontier = list(triples)
    while frontier:
        fresh: list[Triple] = []
        by_src: dict[str, list[Triple]] = {}
        for t in closed:
            by_src.setdefault(t[0], []).append(t)
        by_dst: dict[str, list[Triple]] = {}
        for t in closed:
            by_dst.setdefault(t[1], []).append(t)
        for s, d, table in frontier:
            candidates = [(s, d2, compose(t2, table)) for _, d2, t2 in by_src.get(d, [])]
            candidates += [(s0, d, compose(table, t0)) for s0, _, t0 in by_dst.get(s, [])]
            for c in candidates:
                if c not in closed:
                    closed.add(c)
                    fresh.append(c)
        frontier = fresh
    return closed


# =============================================================================
# HOM-SETS, AUTOMORFISMOS, COMPONENTES
# =============================================================================


def hom_set(g: FiniteGroupoid, i: str, j: str) -> tuple[str, ...]:
    """Identificadores dos morfismos de i para j, em ordem."""
    require_object(g, i)
    require_object(g, j)
    return g.hom_ids(i, j)


def aut_group(g: FiniteGroupoid, i: str) -> PermutationGroup:
    """Aut_G(i) = Hom(i, i) como grupo de permutações do carrier de i."""
    require_object(g, i)
    return PermutationGroup(g.carriers[i], g.hom_tables(i, i))


class _UnionFind:
    """Union-find com compressão de caminho."""

    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # o menor identificador vira raiz (determinístico)
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def connected_components(g: FiniteGroupoid) -> tuple[tuple[str, ...], ...]:
    """Partição dos objetos em classes de Iso_G (Hom(i, j) não vazio).

    As classes vêm ordenadas pelo seu primeiro objeto.
    """
    uf = _UnionFind(g.carriers)
    for arrow in g:
        uf.union(arrow.src, arrow.dst)
    classes: dict[str, list[str]] = {}
    for obj in g.carriers:
        classes.setdefault(uf.find(obj), []).append(obj)
    return tuple(sorted((tuple(c) for c in classes.values()), key=lambda c: c[0]))


def is_connected(g: FiniteGroupoid) -> bool:
    return len(connected_components(g)) <= 1


def require_connected(g: FiniteGroupoid, what: str = "grupoide") -> None:
    if not is_connected(g):
        raise PreconditionError(f"{what} desconexo", [c[0] for c in connected_components(g)])


def faithful_base(g: FiniteGroupoid, i: str) -> FaithfulBase:
    """Base fiel gulosa: percorre o carrier na ordem declarada.

    Acrescenta o próximo elemento que diminui estritamente o estabilizador
    pontual e para quando ele fica trivial. A cadeia de estabilizadores é a
    de `sympy.combinatorics.PermutationGroup.stabilizer`.
    """
    group = aut_group(g, i)
    chosen: list[str] = []
    if group.order <= 1:
        return FaithfulBase(i, ())
    stabiliser = group.sympy_group
    for k, label in enumerate(g.carriers[i]):
        if stabiliser.order() <= 1:
            break
        smaller = stabiliser.stabilizer(k)
        if smaller.order() < stabiliser.order():
            chosen.append(label)
            stabiliser = smaller
    return FaithfulBase(i, tuple(chosen))


# =============================================================================
# SUBGRUPOIDES E UNIÕES
# =============================================================================


def full_subgroupoid(g: FiniteGroupoid, objects: Iterable[str]) -> FiniteGroupoid:
    """Subgrupoide pleno nos objetos dados (mantém identificadores)."""
    keep = set(objects)
    for obj in keep:
        require_object(g, obj)
    return FiniteGroupoid(
        {o: c for o, c in g.carriers.items() if o in keep},
        {m: a for m, a in g.arrows.items() if a.src in keep and a.dst in keep},
    )


def disjoint_union(*groupoids: FiniteGroupoid) -> FiniteGroupoid:
    """Coproduto de grupoides com conjuntos de objetos disjuntos.

    Se os identificadores de morfismo colidirem, todos são renomeados pelo
    esquema de closure_from_generators.
    """
    carriers: dict[str, tuple[str, ...]] = {}
    for g in groupoids:
        overlap = set(carriers) & set(g.carriers)
        if overlap:
            raise StructuralError("objetos repetidos na união disjunta", sorted(overlap))
        carriers.update(g.carriers)

    ids = [m for g in groupoids for m in g.arrows]
    if len(ids) == len(set(ids)):
        return FiniteGroupoid.build(carriers, [a for g in groupoids for a in g])
    triples = sorted(a.triple for g in groupoids for a in g)
    return FiniteGroupoid.build(
        carriers, [Arrow(f"m{k}", s, d, t) for k, (s, d, t) in enumerate(triples)]
    )
