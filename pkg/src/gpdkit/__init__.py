"""
gpdkit - Grupoides concretos finitos e suas coberturas internas.

Exemplo básico:
    >>> from gpdkit import FiniteGroupoid, validate_groupoid, extend_groupoid
    >>> z2 = FiniteGroupoid.build(
    ...     {"o": ["a", "b"]},
    ...     [("m0", "o", "o", {"a": "a", "b": "b"}), ("m1", "o", "o", {"a": "b", "b": "a"})],
    ... )
    >>> validate_groupoid(z2).ok
    True
    >>> cover = extend_groupoid(z2, "o")
    >>> len(cover.star_morphisms)
    6

Morfismos e equivalência:
    >>> from gpdkit import decide_equivalence, enumerate_morphisms
    >>> decide_equivalence(z2, tors2).equivalent
    True

Famílias:
    >>> from gpdkit import family_from_components, relative_extend, internality_census
    >>> fc = relative_extend(family_from_components(disjoint_union(z2, rigid2)))
    >>> internality_census(fc).flagged
    ('a1',)

Linha de comando:
    gpdkit validate z2.json
    gpdkit laws triv1.json z2.json rigid2.json tors2.json --format json
"""

from gpdkit.config import DEFAULT_BOUNDS, FORMAT_VERSION, OracleBounds, OutputFormat
from gpdkit.covers import (
    CoverMorphism,
    ExtendedCover,
    StarKind,
    StarRecord,
    aut_transport_check,
    base_choice_transport,
    compose_cover_morphisms,
    enumerate_cover_morphisms,
    extend_groupoid,
    identity_cover_morphism,
    invert_cover_morphism,
    is_cover_isomorphism,
    restrict_cover,
    star_determinacy_check,
    validate_cover,
    validate_cover_morphism,
)
from gpdkit.equivalence import (
    check_equivalence_laws,
    counit_epsilon,
    cover_of,
    functor_C_map,
    functor_G_map,
    unit_eta,
)
from gpdkit.exceptions import (
    BoundExceededError,
    DocumentSyntaxError,
    FamilyError,
    GpdkitError,
    InvariantError,
    MorphismError,
    PreconditionError,
    SemanticError,
    StructuralError,
    UsageError,
    VersionError,
)
from gpdkit.families import (
    CoverFamilyMorphism,
    FamilyCover,
    GroupoidFamily,
    GroupoidFamilyMorphism,
    StarPoint,
    family_from_components,
    fibre,
    independence_check,
    internality_census,
    relative_extend,
    relative_functor_C,
    relative_functor_G,
    relative_restrict,
    split_cover_family_morphism,
    validate_family,
    validate_family_morphism,
)
from gpdkit.formatters import emit_report
from gpdkit.groupoid import (
    FiniteGroupoid,
    PermutationGroup,
    aut_group,
    closure_from_generators,
    connected_components,
    disjoint_union,
    faithful_base,
    full_subgroupoid,
    hom_set,
    validate_groupoid,
)
from gpdkit.models import CensusReport, EquivalenceReport, LawCheck, ValidationReport, Violation
from gpdkit.morphisms import (
    GroupoidEmbedding,
    GroupoidMorphism,
    compose_morphism,
    decide_equivalence,
    enumerate_morphisms,
    identity_morphism,
    is_isomorphism,
    lift_embedding,
    saturate_morphism,
    validate_embedding,
    validate_morphism,
)
from gpdkit.serialization import Document, DocumentKind, load_document, parse_document, serialize_document

__version__ = "0.1.0"
__all__ = [
    # Configuração
    "OracleBounds",
    "OutputFormat",
    "DEFAULT_BOUNDS",
    "FORMAT_VERSION",
    # Grupoides
    "FiniteGroupoid",
    "PermutationGroup",
    "validate_groupoid",
    "closure_from_generators",
    "hom_set",
    "aut_group",
    "connected_components",
    "faithful_base",
    "full_subgroupoid",
    "disjoint_union",
    # Morfismos
    "GroupoidMorphism",
    "GroupoidEmbedding",
    "validate_morphism",
    "saturate_morphism",
    "identity_morphism",
    "compose_morphism",
    "is_isomorphism",
    "validate_embedding",
    "lift_embedding",
    "decide_equivalence",
    "enumerate_morphisms",
    # Coberturas
    "ExtendedCover",
    "CoverMorphism",
    "StarKind",
    "StarRecord",
    "extend_groupoid",
    "restrict_cover",
    "validate_cover",
    "aut_transport_check",
    "validate_cover_morphism",
    "identity_cover_morphism",
    "compose_cover_morphisms",
    "is_cover_isomorphism",
    "invert_cover_morphism",
    "base_choice_transport",
    "star_determinacy_check",
    "enumerate_cover_morphisms",
    # Equivalência
    "cover_of",
    "functor_G_map",
    "functor_C_map",
    "unit_eta",
    "counit_epsilon",
    "check_equivalence_laws",
    # Famílias
    "GroupoidFamily",
    "FamilyCover",
    "StarPoint",
    "GroupoidFamilyMorphism",
    "CoverFamilyMorphism",
    "family_from_components",
    "validate_family",
    "fibre",
    "relative_extend",
    "relative_restrict",
    "independence_check",
    "internality_census",
    "validate_family_morphism",
    "relative_functor_G",
    "relative_functor_C",
    "split_cover_family_morphism",
    # Documentos e relatórios
    "Document",
    "DocumentKind",
    "parse_document",
    "load_document",
    "serialize_document",
    "emit_report",
    "Violation",
    "ValidationReport",
    "LawCheck",
    "EquivalenceReport",
    "CensusReport",
    # Exceções
    "GpdkitError",
    "StructuralError",
    "UsageError",
    "DocumentSyntaxError",
    "VersionError",
    "SemanticError",
    "PreconditionError",
    "FamilyError",
    "MorphismError",
    "InvariantError",
    "BoundExceededError",
]
