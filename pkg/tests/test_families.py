"""
Testes para famílias relativas (fibras, C_A/G_A, independência e censo).
"""

import pytest

from gpdkit import (
    CoverFamilyMorphism,
    FamilyError,
    GroupoidFamily,
    GroupoidFamilyMorphism,
    StarPoint,
    StructuralError,
    base_choice_transport,
    extend_groupoid,
    family_from_components,
    fibre,
    identity_morphism,
    independence_check,
    internality_census,
    is_cover_isomorphism,
    relative_extend,
    relative_functor_C,
    relative_functor_G,
    relative_restrict,
    split_cover_family_morphism,
    validate_family,
    validate_family_morphism,
)
from gpdkit.families import identity_cover_family_morphism, identity_family_morphism
from tests.conftest import load_value


@pytest.fixture
def family_cover(z2_rigid2_family):
    return relative_extend(z2_rigid2_family)


class TestFamilies:
    """Famílias, fibras e a divisão em componentes."""

    def test_fixture_is_valid(self, z2_rigid2_family):
        assert validate_family(z2_rigid2_family).ok

    def test_family_from_components_is_idempotent(self, z2_rigid2_family):
        assert family_from_components(z2_rigid2_family.total) == z2_rigid2_family

    def test_fibre_ids_are_one_based(self, z2):
        fam = family_from_components(z2)
        assert fam.base == ("a1",)
        assert fibre(fam, "a1") == z2

    def test_fibre(self, z2_rigid2_family):
        assert fibre(z2_rigid2_family, "a2").object_ids == ("i", "j")

    def test_unknown_fibre(self, z2_rigid2_family):
        with pytest.raises(StructuralError):
            fibre(z2_rigid2_family, "a9")

    def test_fibre_split_across_components(self, z2_rigid2_family):
        fam = GroupoidFamily(
            z2_rigid2_family.total, ("a1",), {"e": "a1", "i": "a1", "j": "a1"}
        )
        assert validate_family(fam).invariants() == {"fibres-are-components"}

    def test_component_split_across_fibres(self, z2_rigid2_family):
        fam = GroupoidFamily(
            z2_rigid2_family.total, ("a1", "a2", "a3"), {"e": "a1", "i": "a2", "j": "a3"}
        )
        assert validate_family(fam).invariants() == {"fibres-are-components"}

    def test_empty_fibre(self, z2_rigid2_family):
        fam = GroupoidFamily(
            z2_rigid2_family.total, ("a1", "a2", "a3"), dict(z2_rigid2_family.obj_base)
        )
        assert validate_family(fam).invariants() == {"surjective"}


class TestRelativeExtend:
    """C_A fibra a fibra, com seção ν."""

    def test_default_section(self, family_cover):
        assert family_cover.section == {"a1": "e", "a2": "i"}

    def test_star_sizes_and_names(self, family_cover):
        assert family_cover.star_objects == {"a1": "star_a1", "a2": "star_a2"}
        sizes = {a: len(c.star_labels) for a, c in family_cover.fibre_covers.items()}
        assert sizes == {"a1": 2, "a2": 2}

    def test_star_total_projects_to_base(self, family_cover):
        points = family_cover.star_total
        assert points[0] == StarPoint("a1", "a")
        assert [family_cover.project(p) for p in points] == ["a1", "a1", "a2", "a2"]

    def test_section_outside_fibre(self, z2_rigid2_family):
        with pytest.raises(FamilyError):
            relative_extend(z2_rigid2_family, {"a1": "i", "a2": "i"})

    def test_singleton_base_reduces_to_extend(self, z2):
        fc = relative_extend(family_from_components(z2))
        assert fc.fibre_covers["a1"] == extend_groupoid(z2, "o", star_object="star_a1")

    def test_changing_section_is_transport(self, z2_rigid2_family):
        fc = relative_extend(z2_rigid2_family, {"a1": "e", "a2": "j"})
        g = fibre(z2_rigid2_family, "a2")
        assert fc.fibre_covers["a2"].base_object == "j"
        assert is_cover_isomorphism(base_choice_transport(g, "i", "j"))

    def test_round_trip(self, z2_rigid2_family, family_cover, three_z2_family):
        assert relative_restrict(family_cover) == z2_rigid2_family
        assert relative_restrict(relative_extend(three_z2_family)) == three_z2_family


class TestIndependence:
    """Aut da cobertura total = produto dos Aut das fibras."""

    def test_relative_extend_outputs_pass(self, family_cover, three_z2_family):
        assert independence_check(family_cover).ok
        assert independence_check(relative_extend(three_z2_family)).ok

    def test_cross_fibre_bijection_breaks_assembly(self):
        fc = load_value("independence_adversarial.json")
        report = independence_check(fc)
        assert not report.ok
        assert report.invariants() == {"assembly"}
        assert report.violations[0].message.startswith("2 tuplas")


class TestCensus:
    """Fibras com estrela não rígida."""

    def test_z2_rigid2(self, family_cover):
        census = internality_census(family_cover)
        assert census.flagged == ("a1",)
        assert census.count == 1
        assert census.total == 2
        assert census.orders == {"a1": 2, "a2": 1}

    def test_all_rigid(self, rigid2):
        assert internality_census(relative_extend(family_from_components(rigid2))).count == 0

    def test_three_z2(self, three_z2_family):
        census = internality_census(relative_extend(three_z2_family))
        assert census.to_dict()["flagged"] == ["a1", "a2", "a3"]


class TestFamilyMorphisms:
    """Morfismos de famílias nos dois lados e os functores relativos."""

    def test_identity_family_morphism(self, z2_rigid2_family):
        fm = identity_family_morphism(z2_rigid2_family)
        assert validate_family_morphism(fm, functor_laws=True).ok

    def test_identity_cover_family_morphism(self, family_cover):
        fm = identity_cover_family_morphism(family_cover)
        assert validate_family_morphism(fm, functor_laws=True).ok

    def test_fibre_mismatch(self, z2_rigid2_family):
        wrong = identity_morphism(fibre(z2_rigid2_family, "a2"))
        fm = GroupoidFamilyMorphism(
            z2_rigid2_family, z2_rigid2_family, {"a1": wrong, "a2": wrong}
        )
        assert validate_family_morphism(fm).invariants() == {"fibre-mismatch"}

    def test_base_mismatch(self, z2_rigid2_family, three_z2_family):
        fm = GroupoidFamilyMorphism(z2_rigid2_family, three_z2_family, {})
        with pytest.raises(FamilyError):
            validate_family_morphism(fm)

    def test_fibre_crossing_table(self, family_cover):
        table = tuple(
            (p, StarPoint("a2", "x") if p.fibre == "a1" else p) for p in family_cover.star_total
        )
        fm = CoverFamilyMorphism(family_cover, family_cover, table)
        with pytest.raises(FamilyError, match="fibre-crossing"):
            validate_family_morphism(fm)

    def test_fibre_crossing_file(self):
        with pytest.raises(FamilyError, match="fibre-crossing"):
            load_value("fibre_crossing.json")

    def test_relative_functors_round_trip(self, z2_rigid2_family, family_cover):
        identity = identity_family_morphism(z2_rigid2_family)
        lifted = relative_functor_C(identity, family_cover, family_cover)
        assert split_cover_family_morphism(lifted) == split_cover_family_morphism(
            identity_cover_family_morphism(family_cover)
        )
        assert relative_functor_G(lifted) == identity
