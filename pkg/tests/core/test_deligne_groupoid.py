"""
Tests for groupoid words, the positive word problem and the presentation at C+
"""

from __future__ import annotations

import pytest

from stabcover.arrangement_core import named_arrangement
from stabcover.chamber_graph import SkeletonGraph, build_skeleton, minimal_galleries
from stabcover.deligne_groupoid import (
    GroupoidWord,
    Verdict,
    abelian_image,
    abelianization,
    compose_words,
    conjugated_relation,
    expand_relator,
    fraction_form,
    free_reduce,
    groupoid_word_equal,
    make_word,
    positive_path_equal,
    positive_relations,
    vertex_presentation,
    word_from_path,
)
from stabcover.errors import (
    BudgetExceededError,
    EndpointMismatchError,
    StabCoverValidationError,
)


def _full_turns(graph: SkeletonGraph) -> list[GroupoidWord]:
    turns = []
    for gallery in minimal_galleries(graph, 0, graph.antipode(0)):
        continuation = [graph.antipodal_arrow(arrow).id for arrow in gallery.arrows]
        turns.append(word_from_path(graph.compose(gallery, graph.path(continuation))))
    return turns


class TestWords:
    """Word construction and free reduction"""

    def test_make_word_tracks_endpoints(self, cd4_graph: SkeletonGraph) -> None:
        """Inverse letters walk arrows backwards"""
        arrow = cd4_graph.arrow_from(0, 1)
        word = make_word(cd4_graph, [(arrow.id, 1), (arrow.id, -1)])
        assert (word.source, word.target) == (0, 0)
        assert not word.is_positive

    def test_make_word_rejects_bad_letters(self, cd4_graph: SkeletonGraph) -> None:
        """Exponents are +1 or -1 and letters must compose"""
        arrow = cd4_graph.arrow_from(0, 1)
        with pytest.raises(StabCoverValidationError):
            make_word(cd4_graph, [(arrow.id, 2)])
        with pytest.raises(EndpointMismatchError):
            make_word(cd4_graph, [(arrow.id, 1), (arrow.id, 1)])
        with pytest.raises(StabCoverValidationError):
            make_word(cd4_graph, [])

    def test_free_reduce_cancels_inverse_pairs(self, cd4_graph: SkeletonGraph) -> None:
        """x x^-1 disappears"""
        arrow = cd4_graph.arrow_from(0, 2)
        word = make_word(cd4_graph, [(arrow.id, 1), (arrow.id, -1)])
        assert free_reduce(word).letters == ()

    def test_inverse_reverses_letters(self, cd4_graph: SkeletonGraph) -> None:
        """The inverse word swaps endpoints"""
        first = cd4_graph.arrow_from(0, 1)
        second = cd4_graph.arrow_from(first.target, 2)
        word = make_word(cd4_graph, [(first.id, 1), (second.id, 1)])
        inverse = word.inverse()
        assert inverse.letters == ((second.id, -1), (first.id, -1))
        assert (inverse.source, inverse.target) == (second.target, 0)

    def test_compose_requires_matching_endpoints(self, cd4_graph: SkeletonGraph) -> None:
        """Composition checks the middle chamber"""
        arrow = cd4_graph.arrow_from(0, 1)
        word = make_word(cd4_graph, [(arrow.id, 1)])
        with pytest.raises(EndpointMismatchError):
            compose_words(word, word)

    def test_abelian_image_counts_crossings(self, cd4_graph: SkeletonGraph) -> None:
        """An arrow and its opposite both cross the same hyperplane positively"""
        arrow = cd4_graph.arrow_from(0, 1)
        back = cd4_graph.reverse(arrow.id)
        image = abelian_image(cd4_graph, make_word(cd4_graph, [(arrow.id, 1), (back.id, 1)]))
        assert image[arrow.hyperplane] == 2
        assert sum(image) == 2


class TestPositiveWordProblem:
    """Closure under the rank 2 relations"""

    def test_relations_of_cd4(self, cd4_graph: SkeletonGraph) -> None:
        """One relation per chamber, both sides of length four"""
        relations = positive_relations(cd4_graph)
        assert len(relations) == 8
        for relation in relations:
            assert relation.left.length == relation.right.length == 4
            assert cd4_graph.arrow(relation.left.arrows[0]).label == 1

    @pytest.mark.parametrize("name", ["I2(3)", "cd4", "I2(5)", "I2(6)", "I2(8)"])
    def test_antipodal_galleries_are_identified(self, name: str) -> None:
        """The two minimal galleries between antipodal chambers are equal"""
        graph = build_skeleton(named_arrangement(name))
        for chamber in graph.chambers:
            first, second = minimal_galleries(graph, chamber.id, graph.antipode(chamber.id))
            assert positive_path_equal(graph, first, second)

    def test_different_lengths_are_never_equal(self, cd4_graph: SkeletonGraph) -> None:
        """Length is an invariant of positive paths"""
        arrow = cd4_graph.arrow_from(0, 1)
        back = cd4_graph.reverse(arrow.id)
        loop = cd4_graph.path([arrow.id, back.id])
        turn = cd4_graph.path([a for a, _ in _full_turns(cd4_graph)[0].letters])
        assert not positive_path_equal(cd4_graph, cd4_graph.compose(loop, turn), turn)

    def test_endpoint_mismatch(self, cd4_graph: SkeletonGraph) -> None:
        """Paths with different endpoints cannot be compared"""
        first = cd4_graph.path([cd4_graph.arrow_from(0, 1).id])
        second = cd4_graph.path([cd4_graph.arrow_from(0, 2).id])
        with pytest.raises(EndpointMismatchError):
            positive_path_equal(cd4_graph, first, second)

    def test_budget_exceeded(self) -> None:
        """A zero budget stops the search before the classes meet"""
        graph = build_skeleton(named_arrangement("A3"))
        galleries = minimal_galleries(graph, 0, graph.antipode(0))
        with pytest.raises(BudgetExceededError):
            positive_path_equal(graph, galleries[0], galleries[-1], budget=0)

    def test_a3_longest_galleries_are_one_class(self) -> None:
        """All 16 galleries C+ -> -C+ in A3 are identified"""
        graph = build_skeleton(named_arrangement("A3"))
        galleries = minimal_galleries(graph, 0, graph.antipode(0))
        assert all(positive_path_equal(graph, galleries[0], other) for other in galleries[1:])


class TestGroupoidWordProblem:
    """Semi-decision of equality in the groupoid"""

    def test_full_turns_are_equal(self, cd4_graph: SkeletonGraph) -> None:
        """Clockwise and anticlockwise loops around the origin agree"""
        clockwise, anticlockwise = _full_turns(cd4_graph)
        assert clockwise.length == anticlockwise.length == 8
        verdict = groupoid_word_equal(cd4_graph, clockwise, anticlockwise, budget=1000)
        assert verdict.verdict is Verdict.EQUAL

    def test_arrow_and_opposite_is_not_identity(self, cd4_graph: SkeletonGraph) -> None:
        """a followed by the opposite arrow is a meridian, not the identity"""
        arrow = cd4_graph.arrow_from(0, 1)
        back = cd4_graph.reverse(arrow.id)
        loop = make_word(cd4_graph, [(arrow.id, 1), (back.id, 1)])
        verdict = groupoid_word_equal(cd4_graph, loop, GroupoidWord((), 0, 0), budget=1000)
        assert verdict.verdict is Verdict.DISTINCT

    def test_free_reduction_gives_equality(self, cd4_graph: SkeletonGraph) -> None:
        """Words equal after cancelling x x^-1 are equal"""
        arrow = cd4_graph.arrow_from(0, 2)
        padded = make_word(cd4_graph, [(arrow.id, 1), (arrow.id, -1)])
        verdict = groupoid_word_equal(cd4_graph, padded, GroupoidWord((), 0, 0), budget=10)
        assert verdict.verdict is Verdict.EQUAL

    def test_mixed_word_through_fraction_form(self, cd4_graph: SkeletonGraph) -> None:
        """One antipodal gallery inverted then the other is the identity"""
        antipode = cd4_graph.antipode(0)
        first, second = (
            word_from_path(g) for g in minimal_galleries(cd4_graph, 0, antipode)
        )
        word = compose_words(first.inverse(), second)
        verdict = groupoid_word_equal(
            cd4_graph, word, GroupoidWord((), antipode, antipode), budget=5000
        )
        assert verdict.verdict is Verdict.EQUAL

    def test_a3_inserted_gallery_loop_is_trivial(self) -> None:
        """u g1 g2^-1 equals u for two longest galleries of A3 at the default budget"""
        graph = build_skeleton(named_arrangement("A3"))
        galleries = minimal_galleries(graph, 0, graph.antipode(0))
        inserted = compose_words(word_from_path(galleries[0]), word_from_path(galleries[-1]).inverse())
        for chamber in graph.chambers[1:]:
            prefix = word_from_path(minimal_galleries(graph, chamber.id, 0, limit=1)[0])
            verdict = groupoid_word_equal(
                graph, compose_words(prefix, inserted), prefix, budget=20000
            )
            assert verdict.verdict is Verdict.EQUAL, (chamber.id, verdict.reason)

    def test_exhausted_closure_separates_positive_loops(self, cd4_graph: SkeletonGraph) -> None:
        """Meridians of two walls taken in either order are different loops"""
        first, second = cd4_graph.arrow_from(0, 1), cd4_graph.arrow_from(0, 2)
        first_back, second_back = cd4_graph.reverse(first.id), cd4_graph.reverse(second.id)
        one_way = make_word(
            cd4_graph, [(first.id, 1), (first_back.id, 1), (second.id, 1), (second_back.id, 1)]
        )
        other_way = make_word(
            cd4_graph, [(second.id, 1), (second_back.id, 1), (first.id, 1), (first_back.id, 1)]
        )
        assert abelian_image(cd4_graph, one_way) == abelian_image(cd4_graph, other_way)
        verdict = groupoid_word_equal(cd4_graph, one_way, other_way, budget=1000)
        assert verdict.verdict is Verdict.DISTINCT
        assert verdict.reason == "positive paths not related by rewriting"

    def test_fraction_form_inverts_a_gallery_once(self) -> None:
        """The inverse of a longest gallery costs one longest gallery in the denominator"""
        graph = build_skeleton(named_arrangement("A3"))
        gallery = minimal_galleries(graph, 0, graph.antipode(0))[0]
        inversions, positive, top = fraction_form(graph, word_from_path(gallery).inverse())
        assert inversions == 1
        assert positive == ()
        assert top == graph.antipode(graph.antipode(0))

    def test_fraction_form_of_positive_word(self, cd4_graph: SkeletonGraph) -> None:
        """Positive words need no denominator"""
        gallery = minimal_galleries(cd4_graph, 0, cd4_graph.antipode(0))[0]
        assert fraction_form(cd4_graph, word_from_path(gallery)) == (0, gallery.arrows, 0)

    def test_fraction_form_counts_inverse_letters(self, cd4_graph: SkeletonGraph) -> None:
        """Each inverse letter adds one longest gallery to the denominator"""
        arrow = cd4_graph.arrow_from(0, 1)
        word = make_word(cd4_graph, [(arrow.id, -1)], arrow.target)
        inversions, positive, top = fraction_form(cd4_graph, word)
        assert inversions == 1
        assert top == cd4_graph.antipode(arrow.target)
        assert cd4_graph.path(positive).target == 0

    def test_endpoint_mismatch(self, cd4_graph: SkeletonGraph) -> None:
        """Words with different endpoints cannot be compared"""
        with pytest.raises(EndpointMismatchError):
            groupoid_word_equal(
                cd4_graph, GroupoidWord((), 0, 0), GroupoidWord((), 1, 1), budget=10
            )


class TestPresentation:
    """Vertex group at C+"""

    @pytest.mark.parametrize(
        ("name", "generators", "relations", "free_rank"),
        [
            ("A1", 1, 0, 1),
            ("A2", 7, 6, 3),
            ("cd4", 9, 8, 4),
            ("I2(5)", 11, 10, 5),
            ("A3", 49, 72, 6),
        ],
    )
    def test_counts_and_abelianization(
        self, name: str, generators: int, relations: int, free_rank: int
    ) -> None:
        """Generators are non-tree arrows; H1 is free on the hyperplanes"""
        graph = build_skeleton(named_arrangement(name))
        presentation = vertex_presentation(graph)
        assert len(presentation.generators) == generators
        assert len(presentation.relations) == relations
        invariants = abelianization(presentation)
        assert invariants.free_rank == free_rank
        assert invariants.torsion == ()

    def test_generator_names(self, cd4_graph: SkeletonGraph) -> None:
        """Generators are named after their arrows"""
        presentation = vertex_presentation(cd4_graph)
        assert presentation.generators == tuple(f"g{a}" for a in presentation.generator_arrows)
        assert not set(presentation.generator_arrows) & set(presentation.tree)

    def test_relators_expand_to_relation_loops(self, cd4_graph: SkeletonGraph) -> None:
        """A relator spells the tree-conjugated relation"""
        presentation = vertex_presentation(cd4_graph)
        for relation, relator in zip(positive_relations(cd4_graph), presentation.relations):
            left, right = conjugated_relation(cd4_graph, relation)
            expected = free_reduce(compose_words(left, right.inverse()))
            assert expand_relator(cd4_graph, presentation, relator).letters == expected.letters

    def test_relations_hold_in_the_groupoid(self, cd4_graph: SkeletonGraph) -> None:
        """Both sides of every conjugated relation are equal"""
        for relation in positive_relations(cd4_graph):
            left, right = conjugated_relation(cd4_graph, relation)
            assert groupoid_word_equal(cd4_graph, left, right, budget=1000).verdict is Verdict.EQUAL

    @pytest.mark.slow
    def test_d4_abelianization(self) -> None:
        """D4 has 12 hyperplanes, 1152 relations and free H1 of rank 12"""
        graph = build_skeleton(named_arrangement("D4"))
        presentation = vertex_presentation(graph)
        assert len(presentation.relations) == 1152
        assert abelianization(presentation).free_rank == 12
