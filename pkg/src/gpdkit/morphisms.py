"""
Álgebra de morfismos entre grupoides conexos.

Um morfismo G1 -> G2 é uma família de funções entre carriers que satisfaz
as condições (A) e (B); dois morfismos são iguais quando têm o mesmo
conjunto de funções, qualquer que seja a indexação. A composição usa o
produto fibrado dos índices sobre os objetos do grupoide do meio.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from gpdkit._tables import (
    Table,
    compose,
    compose_all,
    identity_table,
    invert,
    is_bijection,
    is_total,
    make_table,
)
from gpdkit.config import DEFAULT_BOUNDS, OracleBounds
from gpdkit.exceptions import (
    BoundExceededError,
    InvariantError,
    MorphismError,
    PreconditionError,
    StructuralError,
)
from gpdkit.groupoid import (
    FiniteGroupoid,
    aut_group,
    closure_from_generators,
    require_connected,
    require_object,
    validate_groupoid,
)
from gpdkit.models import ReportBuilder, ValidationReport

logger = logging.getLogger(__name__)

Function = tuple[str, str, Table]
"""(objeto de origem, objeto de destino, tabela): um elemento do function_set"""


# =============================================================================
# TIPOS
# =============================================================================


@dataclass(frozen=True, eq=False)
class GroupoidMorphism:
    """Família indexada de funções entre carriers de dois grupoides.

    A igualdade é a do function_set: índices são detalhe de apresentação.
    """

    source: FiniteGroupoid
    target: FiniteGroupoid
    legs: dict[str, tuple[str, str]]
    """índice -> (objeto de origem, objeto de destino)"""

    tables: dict[str, Table]
    """índice -> tabela carrier(origem) -> carrier(destino)"""

    @classmethod
    def from_functions(
        cls,
        source: FiniteGroupoid,
        target: FiniteGroupoid,
        functions: Iterable[Function],
    ) -> "GroupoidMorphism":
        """Apresentação canônica: índices n0, n1, ... na ordem das funções."""
        ordered = sorted(set(functions))
        return cls(
            source,
            target,
            {f"n{k}": (i1, i2) for k, (i1, i2, _) in enumerate(ordered)},
            {f"n{k}": t for k, (_, _, t) in enumerate(ordered)},
        )

    @property
    def index_ids(self) -> tuple[str, ...]:
        return tuple(self.legs)

    @cached_property
    def function_set(self) -> frozenset[Function]:
        return frozenset((*self.legs[n], self.tables[n]) for n in self.legs)

    @cached_property
    def canonical(self) -> tuple[Function, ...]:
        """Codificação canônica: lista ordenada de (origem, destino, tabela)."""
        return tuple(sorted(self.function_set))

    def over(self, i1: str, i2: str) -> frozenset[Table]:
        """Fibra do function_set sobre o par de objetos (i1, i2)."""
        return frozenset(t for a, b, t in self.function_set if (a, b) == (i1, i2))

    def first_over(self, i1: str, i2: str) -> Optional[Table]:
        tables = sorted(self.over(i1, i2))
        return tables[0] if tables else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupoidMorphism):
            return NotImplemented
        return self.function_set == other.function_set

    def __hash__(self) -> int:
        return hash(self.function_set)

    def __len__(self) -> int:
        return len(self.function_set)

    def __repr__(self) -> str:
        return f"GroupoidMorphism(functions={len(self.function_set)}, indices={len(self.legs)})"


@dataclass(frozen=True)
class GroupoidEmbedding:
    """Injeção de objetos ι com bijeções h_i: carrier(i) -> carrier(ι(i))."""

    source: FiniteGroupoid
    target: FiniteGroupoid
    iota: dict[str, str]
    per_object: dict[str, Table]


@dataclass(frozen=True)
class EquivalenceWitness:
    """Grupoide comum com os dois mergulhos."""

    common: FiniteGroupoid
    embed_left: GroupoidEmbedding
    embed_right: GroupoidEmbedding


@dataclass(frozen=True)
class EquivalenceDecision:
    """Resultado de decide_equivalence."""

    equivalent: bool
    witness: Optional[EquivalenceWitness] = None
    beta: Optional[Table] = None
    """Bijeção conjugadora encontrada"""

    reason: str = ""

    def __bool__(self) -> bool:
        return self.equivalent


# =============================================================================
# VALIDAÇÃO
# =============================================================================


def _check_morphism_structure(h: GroupoidMorphism) -> None:
    if set(h.legs) != set(h.tables):
        raise StructuralError("índices sem pernas ou sem tabela", sorted(set(h.legs) ^ set(h.tables)))
    for n, (i1, i2) in h.legs.items():
        if i1 not in h.source.carriers or i2 not in h.target.carriers:
            raise StructuralError(f"índice {n} referencia objeto inexistente", [n, i1, i2])
        if not is_total(h.tables[n], h.source.carriers[i1], h.target.carriers[i2]):
            raise StructuralError(f"tabela do índice {n} não é total de {i1} para {i2}", [n])


def validate_morphism(h: GroupoidMorphism) -> ValidationReport:
    """Verifica totalidade, condição (A) e condição (B).

    Raises:
        StructuralError: tabela não total ou codomínio errado.
    """
    _check_morphism_structure(h)
    report = ReportBuilder("morphism")
    g1, g2 = h.source, h.target
    label = {f: n for n, f in reversed(list(zip(h.legs, _functions_by_index(h))))}

    for i1 in g1.carriers:
        for i2 in g2.carriers:
            if not h.over(i1, i2):
                report.add("totality", f"N({i1}, {i2}) vazio", [i1, i2])

    functions = sorted(h.function_set)
    for p in functions:
        for q in functions:
            (i1, i2, tp), (j1, j2, tq) = p, q
            left = {compose(tq, gamma) for gamma in g1.hom_tables(i1, j1)}
            right = {compose(delta, tp) for delta in g2.hom_tables(i2, j2)}
            if left != right:
                report.add(
                    "condition-A",
                    f"h_q∘Hom({i1},{j1}) ≠ Hom({i2},{j2})∘h_p ({len(left)} vs {len(right)})",
                    [label[p], label[q]],
                )

    for p in functions:
        i, j, tp = p
        for arrow in g2:
            if arrow.src == j and (i, arrow.dst, compose(arrow.table, tp)) not in h.function_set:
                report.add(
                    "condition-B",
                    f"{arrow.id}∘h_p não pertence à família",
                    [label[p], arrow.id],
                )

    return report.build()


def _functions_by_index(h: GroupoidMorphism) -> list[Function]:
    return [(*h.legs[n], h.tables[n]) for n in h.legs]


def restrict_to_pair(h: GroupoidMorphism, i1: str, i2: str) -> frozenset[Table]:
    """Tabelas de h sobre (i1, i2)."""
    require_object(h.source, i1)
    require_object(h.target, i2)
    return h.over(i1, i2)


# =============================================================================
# CONSTRUÇÕES
# =============================================================================


def saturate_morphism(
    source: FiniteGroupoid,
    target: FiniteGroupoid,
    seeds: Iterable[Function],
) -> GroupoidMorphism:
    """Fecha as sementes por pós-composição (alvo) e pré-composição (origem).

    Raises:
        PreconditionError: sementes vazias ou grupoide desconexo.
        StructuralError: semente com tabela não total.
        MorphismError: o fecho viola a condição (A).
    """
    seeds = list(seeds)
    if not seeds:
        raise PreconditionError("saturação exige ao menos uma semente")
    require_connected(source, "origem")
    require_connected(target, "alvo")

    functions: set[Function] = set()
    for i1, i2, table in seeds:
        require_object(source, i1)
        require_object(target, i2)
        if not is_total(table, source.carriers[i1], target.carriers[i2]):
            raise StructuralError(f"semente não total de {i1} para {i2}", [i1, i2])
        for j1 in source.carriers:
            for gamma in source.hom_tables(j1, i1):
                for j2 in target.carriers:
                    for delta in target.hom_tables(i2, j2):
                        functions.add((j1, j2, compose_all(delta, table, gamma)))

    morphism = GroupoidMorphism.from_functions(source, target, functions)
    report = validate_morphism(morphism)
    if not report.ok:
        raise MorphismError("no morphism contains seed", report.violations[0])
    return morphism


def identity_morphism(g: FiniteGroupoid) -> GroupoidMorphism:
    """A família (f_m) do próprio g, indexada por M."""
    require_connected(g)
    return GroupoidMorphism(
        g,
        g,
        {m: (a.src, a.dst) for m, a in g.arrows.items()},
        {m: a.table for m, a in g.arrows.items()},
    )


def compose_morphism(g: GroupoidMorphism, h: GroupoidMorphism) -> GroupoidMorphism:
    """h∘g pelo produto fibrado P ×_{I2} Q.

    Raises:
        StructuralError: o alvo de g não é a origem de h.
    """
    if g.target != h.source:
        raise StructuralError("composição de morfismos com grupoides incompatíveis")
    legs: dict[str, tuple[str, str]] = {}
    tables: dict[str, Table] = {}
    for p, (i1, i2) in g.legs.items():
        for q, (j2, j3) in h.legs.items():
            if i2 == j2:
                legs[f"{p}.{q}"] = (i1, j3)
                tables[f"{p}.{q}"] = compose(h.tables[q], g.tables[p])
    composite = GroupoidMorphism(g.source, h.target, legs, tables)
    if not validate_morphism(composite).ok:
        raise InvariantError("composição não satisfaz (A)/(B)")
    return composite


def is_isomorphism(h: GroupoidMorphism) -> tuple[bool, Optional[GroupoidMorphism]]:
    """Algum (equivalentemente todo) h_n é bijetivo.

    Returns:
        (True, inversa) ou (False, None).
    """
    bijective = {
        f: is_bijection(f[2], h.target.carriers[f[1]]) for f in h.function_set
    }
    if not any(bijective.values()):
        return False, None
    if not all(bijective.values()):
        raise InvariantError("morfismo com tabelas bijetivas e não bijetivas")

    inverse = GroupoidMorphism.from_functions(
        h.target, h.source, ((i2, i1, invert(t)) for i1, i2, t in h.function_set)
    )
    if compose_morphism(h, inverse) != identity_morphism(h.source):
        raise InvariantError("h⁻¹∘h não é a identidade")
    if compose_morphism(inverse, h) != identity_morphism(h.target):
        raise InvariantError("h∘h⁻¹ não é a identidade")
    return True, inverse


# =============================================================================
# MERGULHOS E EQUIVALÊNCIA
# =============================================================================


def validate_embedding(e: GroupoidEmbedding) -> ValidationReport:
    """ι injetiva, h_i bijetivas e entrelaçamento para todo par de objetos."""
    if set(e.iota) != set(e.source.carriers) or set(e.per_object) != set(e.source.carriers):
        raise StructuralError("mergulho deve cobrir todos os objetos da origem")
    for i, j in e.iota.items():
        require_object(e.target, j)
        if not is_total(e.per_object[i], e.source.carriers[i], e.target.carriers[j]):
            raise StructuralError(f"h_{i} não é total de {i} para {j}", [i])

    report = ReportBuilder("embedding")
    if len(set(e.iota.values())) != len(e.iota):
        report.add("injective-iota", "ι não é injetiva", sorted(e.iota))
    for i, table in e.per_object.items():
        if not is_bijection(table, e.target.carriers[e.iota[i]]):
            report.add("bijection", f"h_{i} não é bijeção", [i])

    for i in e.source.carriers:
        for j in e.source.carriers:
            left = {compose(e.per_object[j], g) for g in e.source.hom_tables(i, j)}
            right = {
                compose(d, e.per_object[i])
                for d in e.target.hom_tables(e.iota[i], e.iota[j])
            }
            if left != right:
                report.add("intertwining", f"entrelaçamento falha em ({i}, {j})", [i, j])
    return report.build()


def lift_embedding(e: GroupoidEmbedding) -> GroupoidMorphism:
    """Isomorfismo induzido: índices (m, i1) com src(m) = ι(i1), tabela f_m∘h_{i1}."""
    validate_embedding(e).raise_if_invalid("mergulho inválido")
    require_connected(e.source, "origem")
    require_connected(e.target, "alvo")

    legs: dict[str, tuple[str, str]] = {}
    tables: dict[str, Table] = {}
    for i1, image in e.iota.items():
        for arrow in e.target:
            if arrow.src == image:
                legs[f"{arrow.id}.{i1}"] = (i1, arrow.dst)
                tables[f"{arrow.id}.{i1}"] = compose(arrow.table, e.per_object[i1])
    lifted = GroupoidMorphism(e.source, e.target, legs, tables)
    if not validate_morphism(lifted).ok or not is_isomorphism(lifted)[0]:
        raise InvariantError("levantamento do mergulho não é isomorfismo")
    return lifted


def decide_equivalence(g1: FiniteGroupoid, g2: FiniteGroupoid) -> EquivalenceDecision:
    """Decide equivalência pela conjugação dos grupos de automorfismos.

    Em grupoides conexos os Aut de objetos diferentes são conjugados entre
    si, então basta testar o primeiro objeto de cada lado. A bijeção β é
    procurada na ordem lexicográfica das permutações do carrier de destino;
    cada candidata é testada pela igualdade de grupos do sympy entre
    β Aut(i) β⁻¹ e Aut(j).
    """
    require_connected(g1, "primeiro grupoide")
    require_connected(g2, "segundo grupoide")
    i, j = g1.object_ids[0], g2.object_ids[0]
    a1, a2 = aut_group(g1, i), aut_group(g2, j)

    beta = None
    if len(a1.carrier) == len(a2.carrier) and a1.order == a2.order:
        for perm in itertools.permutations(a2.carrier):
            candidate = make_table(zip(a1.carrier, perm))
            if a1.conjugate_group(candidate, a2.carrier) == a2.sympy_group:
                beta = candidate
                break
    if beta is None:
        logger.info(f"sem bijeção conjugadora entre Aut({i}) e Aut({j})")
        return EquivalenceDecision(False, reason="no conjugating bijection")

    witness = _common_extension(g1, g2, i, j, beta)
    return EquivalenceDecision(True, witness, beta, reason="conjugating bijection found")


def _common_extension(
    g1: FiniteGroupoid, g2: FiniteGroupoid, i: str, j: str, beta: Table
) -> EquivalenceWitness:
    def left(o: str) -> str:
        return f"l_{o}"

    def right(o: str) -> str:
        return f"r_{o}"

    carriers = {left(o): c for o, c in g1.carriers.items()}
    carriers.update({right(o): c for o, c in g2.carriers.items()})
    seeds = [(left(a.src), left(a.dst), a.table) for a in g1]
    seeds += [(right(a.src), right(a.dst), a.table) for a in g2]
    seeds.append((left(i), right(j), beta))
    common = closure_from_generators(carriers, seeds)

    embed_left = GroupoidEmbedding(
        g1, common, {o: left(o) for o in g1.carriers},
        {o: identity_table(c) for o, c in g1.carriers.items()},
    )
    embed_right = GroupoidEmbedding(
        g2, common, {o: right(o) for o in g2.carriers},
        {o: identity_table(c) for o, c in g2.carriers.items()},
    )
    if not (
        validate_groupoid(common).ok
        and validate_embedding(embed_left).ok
        and validate_embedding(embed_right).ok
    ):
        raise InvariantError("testemunha de equivalência inválida")
    return EquivalenceWitness(common, embed_left, embed_right)


# =============================================================================
# ORÁCULO
# =============================================================================


def enumerate_morphisms(
    g1: FiniteGroupoid,
    g2: FiniteGroupoid,
    bounds: OracleBounds = DEFAULT_BOUNDS,
) -> list[GroupoidMorphism]:
    """Todos os morfismos g1 -> g2, por saturação de cada função isolada.

    Raises:
        BoundExceededError: espaço de busca acima de bounds.
    """
    require_connected(g1, "origem")
    require_connected(g2, "alvo")
    carrier_total = sum(map(len, g1.carriers.values())) + sum(map(len, g2.carriers.values()))
    if carrier_total > bounds.max_carrier_total:
        raise BoundExceededError(
            "soma dos carriers acima do limite", carrier_total, bounds.max_carrier_total
        )
    largest_hom = max(
        [len(g.hom_ids(a, b)) for g in (g1, g2) for a in g.carriers for b in g.carriers]
    )
    if largest_hom > bounds.max_hom_size:
        raise BoundExceededError("Hom-set acima do limite", largest_hom, bounds.max_hom_size)
    candidates = sum(
        len(g2.carriers[i2]) ** len(g1.carriers[i1]) for i1 in g1.carriers for i2 in g2.carriers
    )
    if candidates > bounds.max_function_candidates:
        raise BoundExceededError(
            "funções candidatas acima do limite", candidates, bounds.max_function_candidates
        )

    found: dict[frozenset[Function], GroupoidMorphism] = {}
    covered: set[Function] = set()
    for i1, c1 in g1.carriers.items():
        for i2, c2 in g2.carriers.items():
            for values in itertools.product(c2, repeat=len(c1)):
                seed = (i1, i2, make_table(zip(c1, values)))
                if seed in covered:
                    continue
                try:
                    morphism = saturate_morphism(g1, g2, [seed])
                except MorphismError:
                    continue
                found.setdefault(morphism.function_set, morphism)
                covered |= morphism.function_set
    logger.info(f"{len(found)} morfismos encontrados entre {candidates} candidatas")
    return [found[k] for k in sorted(found, key=lambda fs: sorted(fs))]
