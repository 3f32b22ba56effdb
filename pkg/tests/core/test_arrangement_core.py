"""
Tests for arrangement construction and chamber enumeration
"""

from __future__ import annotations

import pytest

from stabcover.arrangement_core import (
    Arrangement,
    Hyperplane,
    build_coxeter_arrangement,
    canonical_normal,
    cartan_matrix,
    custom_arrangement,
    enumerate_chambers,
    is_simplicial,
    named_arrangement,
    positive_roots,
    propagate_frames,
    rank2_arrangement,
    restrict_to_flat,
    sign_vector_of,
)
from stabcover.chamber_graph import label_mismatches
from stabcover.errors import (
    DegenerateFlatError,
    NonEssentialArrangementError,
    StabCoverValidationError,
    UnsupportedRootSystemError,
)


class TestHyperplanes:
    """Normals, canonical forms and arrangement validation"""

    def test_canonical_normal_is_primitive_with_positive_lead(self) -> None:
        """Scaling and sign are normalized"""
        assert canonical_normal((-2, -4)) == (1, 2)
        assert canonical_normal((0, -3, 6)) == (0, 1, -2)

    def test_hyperplane_rejects_non_canonical_normal(self) -> None:
        """Only canonical normals are stored directly"""
        with pytest.raises(StabCoverValidationError):
            Hyperplane((-1, 0))
        assert Hyperplane.from_vector((0, -5)).normal == (0, 1)

    def test_arrangement_requires_base_chamber_coordinates(self) -> None:
        """Negative normals must go through custom_arrangement"""
        with pytest.raises(StabCoverValidationError) as excinfo:
            Arrangement(rank=2, hyperplanes=(Hyperplane((1, 0)), Hyperplane((1, -1))))
        assert excinfo.value.field == "normals"

    def test_custom_arrangement_rebases(self) -> None:
        """An arrangement with mixed signs is moved onto the positive orthant"""
        arrangement = custom_arrangement([[1, 0], [0, 1], [1, -1]])
        assert all(value >= 0 for normal in arrangement.normals for value in normal)
        assert {(1, 0), (0, 1)} <= set(arrangement.normals)
        assert len(enumerate_chambers(arrangement)) == 6

    def test_non_essential_arrangement_rejected(self) -> None:
        """Normals must span the space"""
        with pytest.raises(NonEssentialArrangementError):
            custom_arrangement([[1, 0, 0], [0, 1, 0]])


class TestRootSystems:
    """Cartan matrices and positive roots"""

    def test_a2_cartan(self) -> None:
        """A2 is the 2x2 Cartan matrix with -1 off the diagonal"""
        assert cartan_matrix("A", 2) == ((2, -1), (-1, 2))

    @pytest.mark.parametrize(
        ("root_type", "rank", "count"),
        [("A", 1, 1), ("A", 2, 3), ("A", 3, 6), ("A", 4, 10), ("D", 4, 12), ("E", 6, 36)],
    )
    def test_positive_root_counts(self, root_type: str, rank: int, count: int) -> None:
        """Counts match n(n+1)/2 for A and n(n-1) for D"""
        assert len(positive_roots(cartan_matrix(root_type, rank))) == count

    def test_highest_root_of_d4(self) -> None:
        """Roots are sorted by height; the last is the highest root"""
        assert positive_roots(cartan_matrix("D", 4))[-1] == (1, 2, 1, 1)

    def test_unsupported_root_systems(self) -> None:
        """D3 is not in the ADE list and rank ceilings are enforced"""
        with pytest.raises(UnsupportedRootSystemError):
            build_coxeter_arrangement("D", 3)
        with pytest.raises(UnsupportedRootSystemError):
            build_coxeter_arrangement("A", 5, max_rank=4)

    def test_coxeter_descriptor(self) -> None:
        """Coxeter arrangements carry their Cartan matrix"""
        arrangement = build_coxeter_arrangement("A", 3)
        assert arrangement.descriptor() == {"name": "A3", "kind": "coxeter-ADE", "rank": 3}
        assert arrangement.cartan == cartan_matrix("A", 3)


class TestChamberEnumeration:
    """Chamber counts by frame propagation"""

    def test_cd4_has_eight_chambers(self) -> None:
        """The two-curve example has four lines and eight chambers"""
        arrangement = named_arrangement("cd4")
        chambers = enumerate_chambers(arrangement)
        assert arrangement.normals == [(1, 0), (0, 1), (1, 1), (1, 2)]
        assert len(chambers) == 8
        assert chambers[0].signs == "++++"
        assert chambers[0].rays == ((1, 0), (0, 1))

    def test_cd4_neighbour_frames(self) -> None:
        """Crossing wall 1 adds ray (-1, 1); crossing wall 2 adds ray (2, -1)"""
        fan = propagate_frames(named_arrangement("cd4"))
        by_label = {
            crossing.label: fan.chambers[crossing.target]
            for crossing in fan.crossings
            if crossing.source == 0
        }
        assert by_label[1].rays == ((-1, 1), (0, 1))
        assert by_label[2].rays == ((1, 0), (2, -1))

    @pytest.mark.parametrize(("m", "expected"), [(2, 4), (3, 6), (5, 10), (6, 12), (8, 16)])
    def test_dihedral_counts(self, m: int, expected: int) -> None:
        """m lines give 2m chambers"""
        assert len(enumerate_chambers(rank2_arrangement(m))) == expected

    @pytest.mark.parametrize(("name", "expected"), [("A1", 2), ("A2", 6), ("A3", 24)])
    def test_coxeter_counts(self, name: str, expected: int) -> None:
        """Chamber counts equal Weyl group orders"""
        assert len(enumerate_chambers(named_arrangement(name))) == expected

    @pytest.mark.slow
    def test_d4_has_192_chambers(self) -> None:
        """D4 reaches every chamber with consistent labels"""
        arrangement = named_arrangement("D4")
        assert len(enumerate_chambers(arrangement)) == 192
        assert is_simplicial(arrangement)

    def test_sign_vectors_are_distinct(self) -> None:
        """Chambers are identified by their sign vectors"""
        chambers = enumerate_chambers(named_arrangement("A3"))
        assert len({chamber.signs for chamber in chambers}) == len(chambers)

    def test_interior_points_realize_sign_vectors(self) -> None:
        """The sum of the rays lies inside the chamber"""
        arrangement = named_arrangement("A3")
        for chamber in enumerate_chambers(arrangement):
            assert sign_vector_of(arrangement, chamber.interior_point()) == chamber.signs

    def test_sign_vector_on_hyperplane(self) -> None:
        """Points on a hyperplane have no sign vector"""
        assert sign_vector_of(named_arrangement("cd4"), (0, 1)) is None
        assert sign_vector_of(named_arrangement("cd4"), (1, 1)) == "++++"

    def test_labels_do_not_depend_on_wall_order(self) -> None:
        """Reversed wall order yields the same labels"""
        assert label_mismatches(named_arrangement("A3"), [3, 2, 1]) == []

    def test_invalid_label_order(self) -> None:
        """The wall order must permute 1..rank"""
        with pytest.raises(StabCoverValidationError):
            propagate_frames(named_arrangement("A2"), [1, 1])

    def test_non_simplicial_arrangement(self) -> None:
        """x, y, z and x+y+z have a chamber with four rays"""
        arrangement = custom_arrangement([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])
        assert not is_simplicial(arrangement)

    def test_generic_fourth_plane_through_a_non_simplicial_start(self) -> None:
        """x + y - z cuts the chamber at (1, 1, 1) into a four-ray cone; C+ moves to a simplicial one"""
        arrangement = custom_arrangement([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]])
        assert sorted(arrangement.normals) == [(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)]
        assert arrangement.basis == ((1, 0, 0), (0, 1, 0), (0, 0, -1))
        assert is_simplicial(arrangement) is False


class TestRestriction:
    """Restrictions to flats and arrangement names"""

    def test_a3_restricted_to_a_hyperplane(self) -> None:
        """A3 restricted to one root hyperplane has three lines"""
        restricted = restrict_to_flat(named_arrangement("A3"), [0])
        assert restricted.rank == 2
        assert len(restricted.hyperplanes) == 3
        assert restricted.name == "A3/0"
        assert len(enumerate_chambers(restricted)) == 6

    def test_d4_restriction_by_name(self) -> None:
        """D4/0 has seven planes and 32 simplicial chambers"""
        restricted = named_arrangement("D4/0")
        assert restricted.kind == "restriction"
        assert len(restricted.hyperplanes) == 7
        assert is_simplicial(restricted)
        assert len(enumerate_chambers(restricted)) == 32

    def test_degenerate_flat(self) -> None:
        """Two simple roots of A2 meet only in the origin"""
        with pytest.raises(DegenerateFlatError):
            restrict_to_flat(named_arrangement("A2"), [0, 1])

    def test_flat_index_out_of_range(self) -> None:
        """Hyperplane indices are validated"""
        with pytest.raises(StabCoverValidationError):
            restrict_to_flat(named_arrangement("A2"), [7])

    @pytest.mark.parametrize("name", ["X9", "I2(x)", "A3/a"])
    def test_unknown_names(self, name: str) -> None:
        """Malformed names are validation errors"""
        with pytest.raises(StabCoverValidationError):
            named_arrangement(name)
