"""
Testes para a álgebra de morfismos (condições A/B, saturação, composição,
isomorfismos, mergulhos e decisão de equivalência).
"""

import itertools

import pytest

from gpdkit import (
    BoundExceededError,
    GroupoidEmbedding,
    GroupoidMorphism,
    MorphismError,
    OracleBounds,
    PreconditionError,
    compose_morphism,
    decide_equivalence,
    disjoint_union,
    enumerate_morphisms,
    identity_morphism,
    is_isomorphism,
    lift_embedding,
    saturate_morphism,
    validate_embedding,
    validate_groupoid,
    validate_morphism,
)
from gpdkit.morphisms import restrict_to_pair
from tests.conftest import load_value

CONST_X = (("a", "x"), ("b", "x"))
CONST_U = (("a", "u"), ("b", "u"))
IDENTITY_AB = (("a", "a"), ("b", "b"))


@pytest.fixture
def hom(corpus):
    """Todos os Hom-sets do corpus (oráculo)."""
    return {
        (a, b): enumerate_morphisms(corpus[a], corpus[b])
        for a in corpus
        for b in corpus
    }


class TestValidateMorphism:
    """Totalidade, condição (A) e condição (B)."""

    def test_valid_file(self):
        h = load_value("z2_to_rigid2.json")
        assert validate_morphism(h).ok
        assert len(h) == 2

    def test_condition_a_violation(self):
        h = load_value("z2_to_rigid2_bad.json", validate=False)
        assert "condition-A" in validate_morphism(h).invariants()

    def test_totality_and_condition_b(self, z2, rigid2):
        h = GroupoidMorphism(z2, rigid2, {"n0": ("o", "i")}, {"n0": CONST_X})
        invariants = validate_morphism(h).invariants()
        assert "totality" in invariants
        assert "condition-B" in invariants

    def test_equality_ignores_indices(self, z2, rigid2):
        h = GroupoidMorphism(
            z2, rigid2, {"p": ("o", "i"), "q": ("o", "j")}, {"p": CONST_X, "q": CONST_U}
        )
        assert h == load_value("z2_to_rigid2.json")

    def test_restrict_to_pair_counts_torsor(self, tors2):
        assert len(restrict_to_pair(identity_morphism(tors2), "i", "j")) == 2


class TestSaturate:
    """Saturação a partir de sementes."""

    def test_constant_seed(self, z2, rigid2):
        h = saturate_morphism(z2, rigid2, [("o", "i", CONST_X)])
        assert h == load_value("z2_to_rigid2.json")

    def test_bijective_seed_has_no_morphism(self, z2, rigid2):
        seed = ("o", "i", (("a", "x"), ("b", "y")))
        with pytest.raises(MorphismError, match="no morphism contains seed") as exc:
            saturate_morphism(z2, rigid2, [seed])
        assert exc.value.violation.invariant == "condition-A"

    def test_empty_seeds(self, z2):
        with pytest.raises(PreconditionError):
            saturate_morphism(z2, z2, [])

    def test_identity_seed_rebuilds_identity(self, tors2):
        h = saturate_morphism(tors2, tors2, [("i", "i", IDENTITY_AB)])
        assert h == identity_morphism(tors2)


class TestCompose:
    """Composição pelo produto fibrado e leis de categoria."""

    def test_identity_laws(self, hom, corpus):
        for (a, b), morphisms in hom.items():
            for h in morphisms:
                assert compose_morphism(identity_morphism(corpus[a]), h) == h
                assert compose_morphism(h, identity_morphism(corpus[b])) == h

    def test_associativity(self, hom, corpus):
        names = list(corpus)
        for a, b, c, d in itertools.product(names, repeat=4):
            for f, g, h in itertools.product(hom[a, b], hom[b, c], hom[c, d]):
                left = compose_morphism(compose_morphism(f, g), h)
                right = compose_morphism(f, compose_morphism(g, h))
                assert left == right

    def test_composition_is_valid(self, hom):
        for (a, b), first in hom.items():
            for (b2, c), second in hom.items():
                if b2 != b:
                    continue
                for f, g in itertools.product(first, second):
                    assert validate_morphism(compose_morphism(f, g)).ok


class TestIsomorphism:
    """Isomorfismo sse bijetivo, conferido contra o oráculo."""

    def test_identity_is_iso(self, corpus):
        for g in corpus.values():
            iso, inverse = is_isomorphism(identity_morphism(g))
            assert iso
            assert inverse == identity_morphism(g)

    def test_constant_is_not_iso(self):
        assert is_isomorphism(load_value("z2_to_rigid2.json")) == (False, None)

    def test_iso_iff_bijective_against_oracle(self, hom, corpus):
        for (a, b), morphisms in hom.items():
            inverses = hom[b, a]
            identity_a = identity_morphism(corpus[a])
            identity_b = identity_morphism(corpus[b])
            for h in morphisms:
                has_inverse = any(
                    compose_morphism(h, k) == identity_a and compose_morphism(k, h) == identity_b
                    for k in inverses
                )
                assert is_isomorphism(h)[0] == has_inverse


class TestEmbeddings:
    """Mergulhos e seus levantamentos."""

    def test_z2_into_tors2(self, z2, tors2):
        e = GroupoidEmbedding(z2, tors2, {"o": "i"}, {"o": IDENTITY_AB})
        assert validate_embedding(e).ok
        assert is_isomorphism(lift_embedding(e))[0]

    def test_intertwining_failure(self, z2, rigid2):
        e = GroupoidEmbedding(z2, rigid2, {"o": "i"}, {"o": (("a", "x"), ("b", "y"))})
        assert "intertwining" in validate_embedding(e).invariants()


class TestDecideEquivalence:
    """Decisão por conjugação dos grupos de automorfismos."""

    def test_z2_tors2(self, z2, tors2):
        decision = decide_equivalence(z2, tors2)
        assert decision.equivalent
        assert decision.beta is not None
        assert validate_groupoid(decision.witness.common).ok
        assert validate_embedding(decision.witness.embed_left).ok
        assert validate_embedding(decision.witness.embed_right).ok

    def test_witness_object_names(self, z2, tors2):
        common = decide_equivalence(z2, tors2).witness.common
        assert common.object_ids == ("l_o", "r_i", "r_j")

    def test_z2_rigid2(self, z2, rigid2):
        decision = decide_equivalence(z2, rigid2)
        assert not decision.equivalent
        assert decision.reason == "no conjugating bijection"
        assert decision.witness is None

    def test_triv1_rigid2_have_different_carriers(self, triv1, rigid2):
        assert not decide_equivalence(triv1, rigid2)

    def test_disconnected(self, z2, rigid2):
        with pytest.raises(PreconditionError):
            decide_equivalence(disjoint_union(z2, rigid2), z2)


class TestEnumerate:
    """Oráculo de enumeração: contagens de regressão e limites."""

    def test_regression_counts(self, hom):
        assert len(hom["Z2", "RIGID2"]) == 2
        assert len(hom["RIGID2", "Z2"]) == 0
        assert len(hom["Z2", "Z2"]) == 1
        assert len(hom["TRIV1", "Z2"]) == 0
        assert len(hom["Z2", "TRIV1"]) == 1

    def test_all_enumerated_are_valid(self, hom):
        for morphisms in hom.values():
            assert all(validate_morphism(h).ok for h in morphisms)

    def test_bound_exceeded(self, z2, tors2):
        with pytest.raises(BoundExceededError) as exc:
            enumerate_morphisms(z2, tors2, OracleBounds(max_carrier_total=4))
        assert exc.value.size == 6
        assert exc.value.exit_code == 3
