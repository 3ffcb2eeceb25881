"""
Equivalência entre coberturas e grupoides: functores G e C, unidade η e counidade ε.

- G leva um morfismo de coberturas g: V1 -> V2 à família {β∘g∘α}, com α
  entrando na estrela de V1 e β saindo da estrela de V2.
- C leva um morfismo de grupoides h à classe de h_p × {0}, para p sobre
  o par de objetos base das duas coberturas.
- η_V = α × {0} com α saindo da estrela; ε_G é a família
  Hom(O_*, O_j) ∘ Hom(O_i, O_*), que aqui coincide com a identidade porque
  G nos objetos é restrição literal.

check_equivalence_laws roda todas essas leis exaustivamente sobre um
corpus pequeno, com contraexemplos nas falhas.
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Mapping, Optional

from gpdkit._tables import Table, compose, compose_all, images_in_order
from gpdkit.config import DEFAULT_BOUNDS, OracleBounds
from gpdkit.covers import (
    CoverMorphism,
    ExtendedCover,
    StarKind,
    compose_cover_morphisms,
    enumerate_cover_morphisms,
    extend_groupoid,
    identity_cover_morphism,
    invert_cover_morphism,
    is_cover_isomorphism,
    restrict_cover,
    validate_cover_morphism,
)
from gpdkit.exceptions import (
    BoundExceededError,
    GpdkitError,
    InvariantError,
    PreconditionError,
    StructuralError,
)
from gpdkit.groupoid import FiniteGroupoid, require_connected, require_object
from gpdkit.models import EquivalenceReport, LawCheck
from gpdkit.morphisms import (
    GroupoidMorphism,
    compose_morphism,
    enumerate_morphisms,
    identity_morphism,
    validate_morphism,
)

logger = logging.getLogger(__name__)


def cover_of(g: FiniteGroupoid) -> ExtendedCover:
    """Functor C nos objetos: extensão no primeiro objeto."""
    return extend_groupoid(g, g.object_ids[0])


# =============================================================================
# FUNCTORES
# =============================================================================


def _sweep(
    v1: ExtendedCover, v2: ExtendedCover, middle: Table
) -> set[tuple[str, str, Table]]:
    functions = set()
    for j1 in v1.base.object_ids:
        for alpha in v1.incoming(j1):
            for j2 in v2.base.object_ids:
                for beta in v2.outgoing(j2):
                    functions.add((j1, j2, compose_all(beta, middle, alpha)))
    return functions


def functor_G_map(g: CoverMorphism) -> GroupoidMorphism:
    """G(g) = {β∘ḡ∘α}, de restrict(V1) para restrict(V2).

    Raises:
        SemanticError: g não entrelaça.
        InvariantError: resultado depende do representante ou não é morfismo.
    """
    validate_cover_morphism(g).raise_if_invalid("morfismo de coberturas inválido")
    v1, v2 = g.source, g.target
    source, target = restrict_cover(v1), restrict_cover(v2)
    image = GroupoidMorphism.from_functions(source, target, _sweep(v1, v2, g.canonical_table))
    if not validate_morphism(image).ok:
        raise InvariantError("G(g) não satisfaz (A)/(B)")
    if image.function_set != frozenset(_sweep(v1, v2, g.table)):
        raise InvariantError("G(g) depende do representante da classe")
    return image


def functor_C_map(
    h: GroupoidMorphism, v1: ExtendedCover, v2: ExtendedCover
) -> CoverMorphism:
    """C(h) = h_p × {0} para o primeiro p sobre (objeto base de V1, objeto base de V2).

    Raises:
        StructuralError: h não vai de restrict(V1) para restrict(V2).
        PreconditionError: nenhuma função de h sobre o par base.
    """
    if h.source != v1.base or h.target != v2.base:
        raise StructuralError("morfismo não liga as bases das coberturas dadas")
    candidates = sorted(h.over(v1.base_object, v2.base_object))
    if not candidates:
        raise PreconditionError(
            "nenhuma função sobre o par base", [v1.base_object, v2.base_object]
        )
    image = CoverMorphism(v1, v2, candidates[0])
    if not validate_cover_morphism(image).ok:
        raise InvariantError("C(h) não entrelaça")
    if any(CoverMorphism(v1, v2, t) != image for t in candidates[1:]):
        raise InvariantError("C(h) depende do índice p escolhido")
    return image


# =============================================================================
# TRANSFORMAÇÕES NATURAIS
# =============================================================================


def unit_eta(v: ExtendedCover, target_base: Optional[str] = None) -> CoverMorphism:
    """η_V: V -> extend(restrict(V), target_base), classe de α × {0}.

    α é o primeiro registro star_to_base que pousa em target_base.
    """
    base = restrict_cover(v)
    target_base = target_base if target_base is not None else v.base_object
    require_object(base, target_base)
    w = extend_groupoid(base, target_base)

    alphas = [
        r.table
        for r in v.star_morphisms
        if r.kind is StarKind.STAR_TO_BASE and r.dst == target_base
    ]
    if not alphas:
        raise InvariantError(f"nenhum morfismo da estrela para {target_base}")
    eta = CoverMorphism(v, w, alphas[0])
    if not validate_cover_morphism(eta).ok or not is_cover_isomorphism(eta):
        raise InvariantError("η não é isomorfismo")
    if any(CoverMorphism(v, w, t) != eta for t in alphas[1:]):
        raise InvariantError("η depende do α escolhido")
    return eta


def counit_epsilon(g: FiniteGroupoid, i: str) -> GroupoidMorphism:
    """ε_G: G -> restrict(extend(G, i)), família Hom(O_*, O_j)∘Hom(O_k, O_*).

    Raises:
        InvariantError: a fórmula não colapsa na identidade.
    """
    require_connected(g)
    v = extend_groupoid(g, i)
    functions = set()
    for j1 in g.object_ids:
        for alpha in v.incoming(j1):
            for j2 in g.object_ids:
                for beta in v.outgoing(j2):
                    functions.add((j1, j2, compose(beta, alpha)))
    epsilon = GroupoidMorphism.from_functions(g, restrict_cover(v), functions)
    if epsilon != identity_morphism(g):
        raise InvariantError("ε não coincide com a identidade")
    return epsilon


# =============================================================================
# ORÁCULO DAS LEIS
# =============================================================================


def describe_morphism(h: GroupoidMorphism) -> list[str]:
    """Forma legível e JSON-serializável de um morfismo de grupoides."""
    out = []
    for i1, i2, table in h.canonical:
        images = ",".join(images_in_order(table, h.source.carriers[i1]))
        out.append(f"{i1}->{i2}:{images}")
    return out


def describe_cover_morphism(c: CoverMorphism) -> list[str]:
    return list(c.canonical_rep)


class _LawTally:
    """Acumula verificações de uma lei e guarda o primeiro contraexemplo."""

    def __init__(self, law: str):
        self.law = law
        self.checked = 0
        self.counterexample: Optional[dict[str, Any]] = None

    def record(self, passed: bool, details: Callable[[], dict[str, Any]]) -> None:
        self.checked += 1
        if not passed and self.counterexample is None:
            self.counterexample = details()

    def attempt(self, check: Callable[[], bool], details: Callable[[], dict[str, Any]]) -> None:
        try:
            passed = check()
        except GpdkitError as e:
            self.checked += 1
            if self.counterexample is None:
                self.counterexample = {**details(), "error": str(e)}
            return
        self.record(passed, details)

    def result(self) -> LawCheck:
        return LawCheck(self.law, self.counterexample is None, self.counterexample, self.checked)


def check_equivalence_laws(
    corpus: Mapping[str, FiniteGroupoid],
    bounds: OracleBounds = DEFAULT_BOUNDS,
) -> EquivalenceReport:
    """Verifica as leis da equivalência sobre todos os pares do corpus.

    Leis: G∘C e C∘G nos morfismos, identidades e composição dos dois
    functores, naturalidade de η e de ε, η isomorfismo, ε identidade,
    e igualdade das cardinalidades dos Hom-sets (com C bijetivo).

    Pares que excedem os limites são pulados e o relatório fica
    marcado como incompleto.
    """
    names = list(corpus)
    report = EquivalenceReport(subject=names)
    for name in names:
        require_connected(corpus[name], name)

    covers = {n: cover_of(g) for n, g in corpus.items()}
    twisted = {n: extend_groupoid(g, g.object_ids[-1]) for n, g in corpus.items()}
    etas = {n: unit_eta(covers[n], corpus[n].object_ids[-1]) for n in names}
    hom_g: dict[tuple[str, str], list[GroupoidMorphism]] = {}
    hom_c: dict[tuple[str, str], list[CoverMorphism]] = {}
    for a in names:
        for b in names:
            try:
                hom_g[a, b] = enumerate_morphisms(corpus[a], corpus[b], bounds)
                hom_c[a, b] = enumerate_cover_morphisms(covers[a], covers[b], bounds)
            except BoundExceededError as e:
                logger.info(f"par {a}->{b} pulado: {e}")
                report.complete = False
                report.skipped.append(f"{a}->{b}")
                hom_g.pop((a, b), None)
                hom_c.pop((a, b), None)
    pairs = [p for p in hom_g if p in hom_c]

    laws = {
        name: _LawTally(name)
        for name in (
            "G(C(h)) = h",
            "C(G(g)) = eta g eta^-1",
            "G preserves identities",
            "C preserves identities",
            "G preserves composition",
            "C preserves composition",
            "eta naturality",
            "eta is isomorphism",
            "epsilon naturality",
            "epsilon is identity",
            "Hom-set cardinality",
            "C bijective on Hom-sets",
        )
    }

    for a in names:
        g, v = corpus[a], covers[a]
        laws["G preserves identities"].attempt(
            lambda: functor_G_map(identity_cover_morphism(v)) == identity_morphism(g),
            lambda: {"groupoid": a},
        )
        laws["C preserves identities"].attempt(
            lambda: functor_C_map(identity_morphism(g), v, v) == identity_cover_morphism(v),
            lambda: {"groupoid": a},
        )
        laws["eta is isomorphism"].attempt(
            lambda: is_cover_isomorphism(etas[a]), lambda: {"cover": a}
        )
        laws["epsilon is identity"].attempt(
            lambda: all(counit_epsilon(g, i) == identity_morphism(g) for i in g.object_ids),
            lambda: {"groupoid": a},
        )

    for a, b in pairs:
        v1, v2 = covers[a], covers[b]
        for h in hom_g[a, b]:
            laws["G(C(h)) = h"].attempt(
                lambda: functor_G_map(functor_C_map(h, v1, v2)) == h,
                lambda: {"pair": f"{a}->{b}", "h": describe_morphism(h)},
            )
            laws["epsilon naturality"].attempt(
                lambda: _epsilon_square(h, corpus[a], corpus[b], v1, v2),
                lambda: {"pair": f"{a}->{b}", "h": describe_morphism(h)},
            )
        for c in hom_c[a, b]:
            laws["C(G(g)) = eta g eta^-1"].attempt(
                lambda: _conjugation_round_trip(c, etas[a], etas[b]),
                lambda: {"pair": f"{a}->{b}", "g": describe_cover_morphism(c)},
            )
            laws["eta naturality"].attempt(
                lambda: _eta_square(c, etas[a], etas[b], twisted[a], twisted[b]),
                lambda: {"pair": f"{a}->{b}", "g": describe_cover_morphism(c)},
            )
        laws["Hom-set cardinality"].record(
            len(hom_g[a, b]) == len(hom_c[a, b]),
            lambda: {
                "pair": f"{a}->{b}",
                "groupoid_side": len(hom_g[a, b]),
                "cover_side": len(hom_c[a, b]),
            },
        )
        laws["C bijective on Hom-sets"].attempt(
            lambda: _c_is_bijective(hom_g[a, b], hom_c[a, b], v1, v2),
            lambda: {"pair": f"{a}->{b}"},
        )

    for a, b in pairs:
        for b2, c in pairs:
            if b2 != b:
                continue
            for h in hom_g[a, b]:
                for k in hom_g[b, c]:
                    laws["C preserves composition"].attempt(
                        lambda: functor_C_map(compose_morphism(h, k), covers[a], covers[c])
                        == compose_cover_morphisms(
                            functor_C_map(h, covers[a], covers[b]),
                            functor_C_map(k, covers[b], covers[c]),
                        ),
                        lambda: {
                            "triple": f"{a}->{b}->{c}",
                            "h": describe_morphism(h),
                            "k": describe_morphism(k),
                        },
                    )
            for x in hom_c[a, b]:
                for y in hom_c[b, c]:
                    laws["G preserves composition"].attempt(
                        lambda: functor_G_map(compose_cover_morphisms(x, y))
                        == compose_morphism(functor_G_map(x), functor_G_map(y)),
                        lambda: {
                            "triple": f"{a}->{b}->{c}",
                            "g": describe_cover_morphism(x),
                            "h": describe_cover_morphism(y),
                        },
                    )

    report.checks = [tally.result() for tally in laws.values()]
    logger.info(
        f"leis verificadas: {sum(c.passed for c in report.checks)}/{len(report.checks)} "
        f"(completo={report.complete})"
    )
    return report


def _conjugation_round_trip(c: CoverMorphism, eta1: CoverMorphism, eta2: CoverMorphism) -> bool:
    """C(G(c)) = η₂∘c∘η₁⁻¹ entre as coberturas de destino de η₁ e η₂."""
    lhs = functor_C_map(functor_G_map(c), eta1.target, eta2.target)
    rhs = compose_cover_morphisms(compose_cover_morphisms(invert_cover_morphism(eta1), c), eta2)
    return lhs == rhs


def _eta_square(
    c: CoverMorphism,
    eta1: CoverMorphism,
    eta2: CoverMorphism,
    w1: ExtendedCover,
    w2: ExtendedCover,
) -> bool:
    cg = functor_C_map(functor_G_map(c), w1, w2)
    return compose_cover_morphisms(eta1, cg) == compose_cover_morphisms(c, eta2)


def _epsilon_square(
    h: GroupoidMorphism,
    g1: FiniteGroupoid,
    g2: FiniteGroupoid,
    v1: ExtendedCover,
    v2: ExtendedCover,
) -> bool:
    eps1 = counit_epsilon(g1, v1.base_object)
    eps2 = counit_epsilon(g2, v2.base_object)
    gc = functor_G_map(functor_C_map(h, v1, v2))
    return compose_morphism(h, eps2) == compose_morphism(eps1, gc)


def _c_is_bijective(
    hom_g: list[GroupoidMorphism],
    hom_c: list[CoverMorphism],
    v1: ExtendedCover,
    v2: ExtendedCover,
) -> bool:
    images = [functor_C_map(h, v1, v2) for h in hom_g]
    return len(set(images)) == len(images) and set(images) == set(hom_c)
