"""Branch-and-bound search, enumeration, and completion endgames."""

import pytest
from hypothesis import given, settings, strategies as st

from ahj.coloring import UNASSIGNED, canonical_relabel, census, is_minimal, is_rainbow_free
from ahj.constructions import singleton_set_coloring
from ahj.hypercube import CubeShape, collinear, line_index_table, point_from_index
from ahj.search import (
    MergeState,
    SearchConfig,
    SearchError,
    Status,
    complete,
    enumerate_independent_sets,
    enumerate_minimal_rf,
    find_forced_cell,
    first_independent_set,
    lower_bound_unsatisfied,
    max_rf_colors,
    naive_max_rf_colors,
    two_layer_arrangements,
)

S31 = CubeShape(3, 1)
S32 = CubeShape(3, 2)
S33 = CubeShape(3, 3)


class TestMergeState:
    def test_fresh_state_is_discrete(self):
        s = MergeState(S32)
        assert s.class_count == 9
        assert s.merge_count == 0

    def test_merge_and_undo(self):
        s = MergeState(S32)
        mark = s.mark()
        s.merge(0, 1)
        s.merge(1, 2)
        assert s.same(0, 2)
        assert s.class_count == 7
        s.undo_to(mark)
        assert not s.same(0, 1)
        assert s.class_count == 9

    def test_forbid_blocks_pairs(self):
        s = MergeState(S32)
        s.forbid(0, 1)
        assert s.blocked(0, 1)
        assert not s.blocked(0, 2)

    def test_forbid_survives_merges(self):
        # anti edges must follow classes through unions
        s = MergeState(S32)
        s.forbid(0, 1)
        s.merge(1, 2)
        assert s.blocked(0, 2)

    def test_undo_restores_forbids(self):
        s = MergeState(S32)
        mark = s.mark()
        s.forbid(0, 1)
        s.undo_to(mark)
        assert not s.blocked(0, 1)

    @given(st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=12))
    @settings(max_examples=60, deadline=None)
    def test_undo_round_trips(self, pairs):
        """Any merge sequence fully unwinds to the discrete partition."""
        s = MergeState(S32)
        mark = s.mark()
        for a, b in pairs:
            if not s.same(a, b):
                s.merge(a, b)
        s.undo_to(mark)
        assert s.class_count == 9
        assert s.merge_count == 0


class TestLowerBound:
    def test_all_satisfied_is_zero(self):
        s = MergeState(S31)
        s.merge(0, 1)
        assert lower_bound_unsatisfied(s) == 0

    def test_fresh_square_counts_disjoint_rows(self):
        assert lower_bound_unsatisfied(MergeState(S32)) >= 3

    def test_never_exceeds_true_minimum(self):
        # minimum merges on [3]^2 is 9 - 4 = 5
        assert lower_bound_unsatisfied(MergeState(S32)) <= 5

    @given(st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=6))
    @settings(max_examples=40, deadline=None)
    def test_admissible_at_interior_states(self, pairs):
        """The bound never exceeds what any completion needs.

        Collapsing everything into one class satisfies every line, so the
        remaining minimum is at most class_count - 1; an admissible bound
        must sit under that, and under the raw unsatisfied-line count.
        """
        s = MergeState(S32)
        for a, b in pairs:
            if not s.same(a, b):
                s.merge(a, b)
        bound = lower_bound_unsatisfied(s)
        unsatisfied = [
            idxs for idxs in line_index_table(S32) if not s.line_satisfied(idxs)
        ]
        assert bound <= len(unsatisfied)
        assert bound <= s.class_count - 1 or not unsatisfied


class TestMaxRfColors:
    def test_single_axis(self):
        out = max_rf_colors(S31)
        assert out.status is Status.OPTIMAL
        assert out.best_value == 2

    def test_square(self):
        out = max_rf_colors(S32)
        assert out.status is Status.OPTIMAL
        assert out.best_value == 4

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_two_symbols(self, n):
        out = max_rf_colors(CubeShape(2, n))
        assert out.status is Status.OPTIMAL
        assert out.best_value == 1

    def test_witness_self_verifies(self):
        out = max_rf_colors(S32)
        assert is_rainbow_free(out.witness)
        assert census(out.witness).distinct_count == out.best_value

    @pytest.mark.parametrize("k,n", [(2, 2), (2, 3), (3, 1), (3, 2)])
    def test_matches_naive_oracle(self, k, n):
        shape = CubeShape(k, n)
        assert max_rf_colors(shape).best_value == naive_max_rf_colors(shape)

    def test_single_thread_node_counts_reproduce(self):
        a = max_rf_colors(S32)
        b = max_rf_colors(S32)
        assert a.nodes_explored == b.nodes_explored
        assert a.best_value == b.best_value

    @pytest.mark.parametrize("threads", [1, 2, 4])
    def test_value_invariant_under_workers(self, threads):
        out = max_rf_colors(S32, SearchConfig(worker_count=threads))
        assert out.status is Status.OPTIMAL
        assert out.best_value == 4

    def test_node_budget_degrades_to_feasible(self):
        out = max_rf_colors(S33, SearchConfig(node_limit=50))
        assert out.status is Status.FEASIBLE_ONLY
        assert is_rainbow_free(out.witness)
        assert census(out.witness).distinct_count == out.best_value

    def test_no_symmetry_reduction_same_value(self):
        out = max_rf_colors(S32, SearchConfig(symmetry_reduction=False))
        assert out.status is Status.OPTIMAL
        assert out.best_value == 4

    def test_config_validation(self):
        with pytest.raises(SearchError):
            SearchConfig(worker_count=0)
        with pytest.raises(SearchError):
            SearchConfig(time_limit=-1.0)
        with pytest.raises(SearchError):
            SearchConfig(node_limit=0)


class TestIndependentSets:
    def test_square_size_three(self):
        sets = enumerate_independent_sets(S32, 3)
        assert len(sets) == 5
        assert (0, 5, 7) in sets

    def test_cube_size_nine(self):
        assert len(enumerate_independent_sets(S33, 9)) == 2

    def test_cube_size_ten_empty(self):
        assert enumerate_independent_sets(S33, 10) == []

    def test_symmetry_quotient(self):
        assert len(enumerate_independent_sets(S32, 3, up_to_symmetry=True)) == 2
        assert len(enumerate_independent_sets(S33, 9, up_to_symmetry=True)) == 1

    def test_rejects_other_alphabets(self):
        with pytest.raises(SearchError):
            enumerate_independent_sets(CubeShape(2, 2), 2)

    def test_members_pairwise_non_collinear(self):
        for points in enumerate_independent_sets(S32, 3):
            for i, p in enumerate(points):
                for q in points[i + 1 :]:
                    assert not collinear(
                        point_from_index(p, S32), point_from_index(q, S32), S32
                    )

    def test_first_matches_enumeration(self):
        sets = enumerate_independent_sets(S33, 9)
        assert first_independent_set(S33, 9) == sets[0]

    def test_first_handles_absence(self):
        assert first_independent_set(S33, 10) is None


class TestMinimalEnumeration:
    def test_square_four_colorings(self):
        cs = enumerate_minimal_rf(S32, 4)
        assert len(cs) == 5
        for c in cs:
            assert is_rainbow_free(c)
            assert is_minimal(c)
            assert census(c).distinct_count == 4

    def test_cube_ten_colorings(self):
        cs = enumerate_minimal_rf(S33, 10)
        assert len(cs) == 2
        assert cs[0].colors != cs[1].colors
        for c in cs:
            assert canonical_relabel(c).colors == c.colors

    def test_eleven_colorings_do_not_exist(self):
        assert enumerate_minimal_rf(S33, 11) == []


class TestForcedCell:
    def test_arrangements_have_forced_diagonal_cells(self):
        for arrangement in two_layer_arrangements():
            forced = find_forced_cell(arrangement)
            assert forced is not None
            assert len(forced.witnesses) >= 2
            assert arrangement.colors[forced.point.index] == UNASSIGNED

    def test_witness_lines_constrain_the_cell(self):
        arrangement = two_layer_arrangements()[0]
        forced = find_forced_cell(arrangement)
        from ahj.hypercube import expand

        for template in forced.witnesses:
            line = expand(template, arrangement.shape)
            assert any(p.index == forced.point.index for p in line.points)

    def test_total_coloring_has_no_forced_cell(self):
        c = singleton_set_coloring(S32, [0, 5, 7])
        assert find_forced_cell(c) is None

    def test_unconstrained_blank_has_no_forced_cell(self):
        from ahj.coloring import Coloring

        blank = Coloring(S32, (0,) * 9)
        assert find_forced_cell(blank) is None


class TestComplete:
    def test_blank_square_reaches_four(self):
        from ahj.coloring import Coloring

        blank = Coloring(S32, (0,) * 9)
        out = complete(blank, 4)
        assert out.status is Status.OPTIMAL
        assert is_rainbow_free(out.witness)
        assert census(out.witness).distinct_count == 4

    def test_blank_square_refuses_five(self):
        from ahj.coloring import Coloring

        blank = Coloring(S32, (0,) * 9)
        out = complete(blank, 5)
        assert out.status is Status.INFEASIBLE

    def test_completion_extends_the_partial(self):
        partial = singleton_set_coloring(S32, [0, 5, 7]).assign(8, 0)
        out = complete(partial, 4)
        assert out.status is Status.OPTIMAL
        for i, color in enumerate(partial.colors):
            if color != UNASSIGNED:
                assert out.witness.colors[i] == color

    def test_arrangements_refuse_twenty_seven(self):
        for arrangement in two_layer_arrangements():
            out = complete(arrangement, 27, SearchConfig(time_limit=60.0))
            assert out.status is Status.INFEASIBLE
            assert out.certificate is not None

    def test_rainbow_partial_is_infeasible_with_line_certificate(self):
        from ahj.coloring import Coloring

        rainbow = Coloring(S32, tuple(range(1, 10)))
        out = complete(rainbow, 9)
        assert out.status is Status.INFEASIBLE
        assert out.certificate is not None

    def test_overfull_target_is_infeasible(self):
        c = singleton_set_coloring(S32, [0, 5, 7])
        assert complete(c, 3).status is Status.INFEASIBLE

    def test_node_budget_times_out(self):
        from ahj.coloring import Coloring

        blank = Coloring(S33, (0,) * 27)
        out = complete(blank, 10, SearchConfig(node_limit=1))
        assert out.status is Status.TIMEOUT


class TestTwoLayerArrangements:
    def test_six_arrangements(self):
        arrangements = two_layer_arrangements()
        assert len(arrangements) == 6

    def test_arrangement_shape_and_census(self):
        for arrangement in two_layer_arrangements():
            assert arrangement.shape == CubeShape(3, 4)
            cen = census(arrangement)
            # dominant + 9 + 9 singleton palettes, one free layer
            assert cen.distinct_count == 19
            assert cen.unassigned_count == 27

    def test_palettes_disjoint_except_dominant(self):
        for arrangement in two_layer_arrangements():
            sizes = sorted(census(arrangement).class_sizes.values(), reverse=True)
            assert sizes[0] == 36
            assert sizes[1:] == [1] * 18
