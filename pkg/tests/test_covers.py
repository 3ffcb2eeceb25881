"""
Testes para o modelo de coberturas (extensão por um objeto, restrição,
morfismos de coberturas, transporte de base e determinação da estrela).
"""

import pytest

from gpdkit import (
    CoverMorphism,
    FiniteGroupoid,
    PreconditionError,
    SemanticError,
    StarKind,
    aut_group,
    aut_transport_check,
    base_choice_transport,
    compose_cover_morphisms,
    disjoint_union,
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
from gpdkit.covers import expected_star_count
from tests.conftest import load_value


def _all_extensions(corpus):
    for name, g in corpus.items():
        for obj in g.object_ids:
            yield name, obj, extend_groupoid(g, obj)


class TestExtendGroupoid:
    """Extensão por um objeto estrela."""

    def test_count_law(self, corpus):
        for name, obj, v in _all_extensions(corpus):
            assert len(v.star_morphisms) == expected_star_count(corpus[name], obj), (name, obj)

    def test_counts(self, triv1, z2, rigid2, tors2):
        assert len(extend_groupoid(triv1, "o").star_morphisms) == 3
        assert len(extend_groupoid(z2, "o").star_morphisms) == 6
        assert len(extend_groupoid(rigid2, "i").star_morphisms) == 5
        assert len(extend_groupoid(tors2, "i").star_morphisms) == 10

    def test_record_ids(self, rigid2):
        ids = [r.id for r in extend_groupoid(rigid2, "i").star_morphisms]
        assert ids == [
            "star_to_star:m0:0",
            "base_to_star:m0:1",
            "star_to_base:m0:2",
            "base_to_star:m2:0",
            "star_to_base:m1:0",
        ]

    def test_star_copies_base_carrier(self, tors2):
        v = extend_groupoid(tors2, "j")
        assert v.star_object == "star"
        assert v.star_labels == ("c", "d")
        assert v.total.object_ids == ("i", "j", "star")

    def test_fresh_star_name(self):
        g = FiniteGroupoid.build({"star": ["a"]}, [("m0", "star", "star", {"a": "a"})])
        assert extend_groupoid(g, "star").star_object == "star_1"

    def test_disconnected(self, z2, rigid2):
        with pytest.raises(PreconditionError):
            extend_groupoid(disjoint_union(z2, rigid2), "o")

    def test_invalid(self):
        with pytest.raises(SemanticError) as exc:
            extend_groupoid(load_value("broken.json", validate=False), "o")
        assert exc.value.invariant == "bijection"

    def test_validate_and_transport(self, corpus):
        for _, _, v in _all_extensions(corpus):
            assert validate_cover(v).ok
            assert aut_transport_check(v).ok

    def test_liaison_group_is_base_aut(self, corpus):
        for name, obj, v in _all_extensions(corpus):
            assert v.star_aut.elements == aut_group(corpus[name], obj).elements


class TestRestrictCover:
    """restrict(extend(g, i)) = g exatamente."""

    def test_round_trip(self, corpus):
        for name, _, v in _all_extensions(corpus):
            assert restrict_cover(v) == corpus[name]


class TestCoverMorphisms:
    """Bi-entrelaçamento, classes módulo Aut(estrela do alvo) e composição."""

    def test_valid_file(self):
        c = load_value("z2_to_tors2_cover.json")
        assert validate_cover_morphism(c).ok
        assert is_cover_isomorphism(c)

    def test_forward_intertwining_failure(self, z2, rigid2):
        c = CoverMorphism(
            extend_groupoid(z2, "o"), extend_groupoid(rigid2, "i"), (("a", "x"), ("b", "y"))
        )
        assert validate_cover_morphism(c).invariants() == {"forward-intertwining"}

    def test_class_modulo_target_aut(self, z2):
        v = extend_groupoid(z2, "o")
        assert CoverMorphism(v, v, (("a", "b"), ("b", "a"))) == identity_cover_morphism(v)

    def test_equality_needs_same_covers(self, z2, tors2):
        vz, vt = extend_groupoid(z2, "o"), extend_groupoid(tors2, "i")
        left, right = identity_cover_morphism(vz), identity_cover_morphism(vt)
        assert left.canonical_rep == right.canonical_rep
        assert left != right

    def test_invert(self):
        c = load_value("z2_to_tors2_cover.json")
        inverse = invert_cover_morphism(c)
        assert compose_cover_morphisms(c, inverse) == identity_cover_morphism(c.source)

    def test_enumerate_regression_counts(self, z2, rigid2):
        vz, vr = extend_groupoid(z2, "o"), extend_groupoid(rigid2, "i")
        assert len(enumerate_cover_morphisms(vz, vr)) == 2
        assert len(enumerate_cover_morphisms(vr, vz)) == 0

    def test_identity_laws(self, corpus):
        for _, _, v in _all_extensions(corpus):
            identity = identity_cover_morphism(v)
            for c in enumerate_cover_morphisms(v, v):
                assert compose_cover_morphisms(identity, c) == c
                assert compose_cover_morphisms(c, identity) == c


class TestBaseChoiceTransport:
    """extend(g, i) ≅ extend(g, j) sem depender da escolha."""

    def test_all_pairs(self, corpus):
        for g in corpus.values():
            for i in g.object_ids:
                for j in g.object_ids:
                    there = base_choice_transport(g, i, j)
                    back = base_choice_transport(g, j, i)
                    assert is_cover_isomorphism(there)
                    assert compose_cover_morphisms(there, back) == identity_cover_morphism(
                        extend_groupoid(g, i)
                    )


class TestStarDeterminacy:
    """Registros estrela determinados pelos valores na base fiel."""

    def test_extensions_pass(self, corpus):
        for _, _, v in _all_extensions(corpus):
            assert star_determinacy_check(v).ok

    def test_adversarial_fixture_fails(self):
        v = load_value("determinacy_adversarial.json")
        report = star_determinacy_check(v)
        assert report.invariants() == {"star-determinacy"}
        assert set(report.violations[0].subjects) == {"base_to_star:m0:1", "base_to_star:x1:1"}

    def test_adversarial_records_kinds(self):
        v = load_value("determinacy_adversarial.json")
        assert len(v.records_of(StarKind.BASE_TO_STAR)) == 2
