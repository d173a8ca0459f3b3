"""Logical-form execution: row pipelines, rank operators, and claim roots.

Expected truth values were derived by hand from the documented semantics;
randomized sweeps at the bottom cross-check against reference.py.
"""

from decimal import Decimal

import pytest

from tabsynth.errors import EmptyIntermediateError, ExecTypeError, MissingColumnError
from tabsynth.execution.logic import exec_logic
from tabsynth.programs.ast import AllRows, ColumnName, Literal, LogicNode
from tabsynth.programs.parse import parse_logic
from tabsynth.tables import Table
from tabsynth.values import Number

from reference import highlight_mutation_mismatches, run_differential


@pytest.fixture()
def scores():
    return Table.from_strings(
        "t",
        ["name", "score", "tier"],
        [
            ["ada", "10", "gold"],
            ["bo", "7", "silver"],
            ["cy", "10", "gold"],
            ["dee", "-", "bronze"],
            ["eve", "2", "gold"],
        ],
    )


def truth(text, table):
    res = exec_logic(parse_logic(text), table)
    assert res.boolean is not None
    return res.boolean


class TestRowPipelines:
    def test_filter_eq_then_hop_reads_first_row(self, scores):
        assert truth("eq { hop { filter_eq { all_rows ; name ; 'ada' } ; score } ; 10 }", scores)

    def test_hop_without_filtering_uses_table_order(self, scores):
        assert truth("eq { hop { all_rows ; name } ; 'ada' }", scores)

    def test_filter_not_eq_drops_blanks_too(self, scores):
        # score != 10 keeps bo and eve; dee's blank cell is not a match.
        assert truth("eq { count { filter_not_eq { all_rows ; score ; 10 } } ; 2 }", scores)

    def test_filter_greater_is_strict(self, scores):
        assert truth("eq { count { filter_greater { all_rows ; score ; 7 } } ; 2 }", scores)

    def test_filters_compose(self, scores):
        text = "eq { hop { filter_less { filter_eq { all_rows ; tier ; 'gold' } ; score ; 10 } ; name } ; 'eve' }"
        assert truth(text, scores)

    def test_hop_over_no_rows_is_an_error(self, scores):
        with pytest.raises(EmptyIntermediateError):
            truth("eq { hop { filter_eq { all_rows ; tier ; 'zz' } ; name } ; 'x' }", scores)

    def test_hop_may_surface_a_blank_cell(self, scores):
        # dee's score is blank; a blank never equals a number, so the claim is false.
        assert not truth("eq { hop { filter_eq { all_rows ; name ; 'dee' } ; score } ; 0 }", scores)


class TestAggregates:
    def test_count_includes_every_surviving_row(self, scores):
        assert truth("eq { count { all_rows } ; 5 }", scores)

    def test_count_of_zero_rows_is_zero(self, scores):
        assert truth("eq { count { filter_eq { all_rows ; tier ; 'zz' } } ; 0 }", scores)

    def test_sum_skips_blank_cells(self, scores):
        assert truth("eq { sum { all_rows ; score } ; 29 }", scores)

    def test_avg_divides_by_the_numeric_count(self, scores):
        assert truth("eq { avg { all_rows ; score } ; 7.25 }", scores)

    def test_max_and_min(self, scores):
        assert truth("eq { max { all_rows ; score } ; 10 }", scores)
        assert truth("eq { min { all_rows ; score } ; 2 }", scores)

    def test_text_cell_poisons_numeric_aggregate(self, scores):
        with pytest.raises(ExecTypeError):
            truth("eq { sum { all_rows ; tier } ; 1 }", scores)

    def test_aggregate_over_only_blanks_is_an_error(self):
        table = Table.from_strings("t", ["name", "v"], [["a", "-"], ["b", ""]])
        with pytest.raises(EmptyIntermediateError):
            truth("eq { max { all_rows ; v } ; 1 }", table)


class TestRankOperators:
    def test_nth_max_counts_duplicates(self, scores):
        # Sorted numeric scores are 10, 10, 7, 2.
        assert truth("eq { nth_max { all_rows ; score ; 2 } ; 10 }", scores)
        assert truth("eq { nth_max { all_rows ; score ; 3 } ; 7 }", scores)
        assert truth("eq { nth_min { all_rows ; score ; 1 } ; 2 }", scores)

    def test_rank_beyond_population_is_an_error(self, scores):
        with pytest.raises(EmptyIntermediateError):
            truth("eq { nth_max { all_rows ; score ; 5 } ; 1 }", scores)

    def test_type_error_outranks_rank_overflow(self, scores):
        # Collection scans the column before ranking, so the text cell wins.
        with pytest.raises(ExecTypeError):
            truth("eq { nth_max { all_rows ; tier ; 9 } ; 1 }", scores)

    def test_argmax_tie_keeps_first_table_row(self, scores):
        assert truth("eq { hop { argmax { all_rows ; score } ; name } ; 'ada' }", scores)

    def test_nth_argmax_walks_the_tie_in_order(self, scores):
        assert truth("eq { hop { nth_argmax { all_rows ; score ; 2 } ; name } ; 'cy' }", scores)

    def test_argmin_skips_blank_cells(self, scores):
        assert truth("eq { hop { argmin { all_rows ; score } ; name } ; 'eve' }", scores)

    def test_nth_arg_rank_overflow(self, scores):
        with pytest.raises(EmptyIntermediateError):
            truth("eq { hop { nth_argmin { all_rows ; score ; 5 } ; name } ; 'x' }", scores)


class TestClaimRoots:
    def test_eq_within_relative_tolerance(self, scores):
        assert truth("eq { 1000000000 ; 1000000001 }", scores)
        assert not truth("eq { 999999998 ; 1000000000 }", scores)

    def test_greater_treats_near_equal_as_not_greater(self, scores):
        assert not truth("greater { 1000000001 ; 1000000000 }", scores)
        assert truth("greater { 3 ; 2 }", scores)

    def test_text_order_is_lexicographic(self, scores):
        assert truth("less { 'apple' ; 'banana' }", scores)
        assert not truth("greater { 'apple' ; 'banana' }", scores)

    def test_mixed_kinds_never_compare(self, scores):
        assert not truth("eq { 'gold' ; 5 }", scores)
        assert not truth("less { 'gold' ; 5 }", scores)

    def test_not_eq_negates_eq(self, scores):
        assert truth("not_eq { 3 ; 4 }", scores)
        assert not truth("not_eq { 'gold' ; 'gold' }", scores)

    def test_and_requires_both_sides(self, scores):
        both = "and { eq { count { all_rows } ; 5 } ; greater { max { all_rows ; score } ; 9 } }"
        assert truth(both, scores)
        one = "and { eq { count { all_rows } ; 5 } ; greater { max { all_rows ; score } ; 99 } }"
        assert not truth(one, scores)


class TestMajorityClaims:
    def test_most_eq_needs_a_strict_majority(self, scores):
        assert truth("most_eq { all_rows ; tier ; 'gold' }", scores)
        assert not truth("most_eq { all_rows ; tier ; 'silver' }", scores)

    def test_exactly_half_is_not_most(self):
        table = Table.from_strings(
            "t", ["name", "tier"],
            [["a", "gold"], ["b", "gold"], ["c", "silver"], ["d", "bronze"]],
        )
        assert not truth("most_eq { all_rows ; tier ; 'gold' }", table)

    def test_all_eq_fails_on_a_single_blank(self):
        table = Table.from_strings(
            "t", ["name", "tier"], [["a", "gold"], ["b", "gold"], ["c", "-"]]
        )
        assert not truth("all_eq { all_rows ; tier ; 'gold' }", table)
        assert truth("all_eq { filter_not_eq { all_rows ; name ; 'c' } ; tier ; 'gold' }", table)

    def test_unique_means_exactly_one(self, scores):
        assert truth("unique { all_rows ; tier ; 'silver' }", scores)
        assert not truth("unique { all_rows ; tier ; 'gold' }", scores)
        assert not truth("unique { all_rows ; tier ; 'zz' }", scores)

    def test_majority_claim_over_zero_rows_is_an_error(self, scores):
        with pytest.raises(EmptyIntermediateError):
            truth("most_eq { filter_eq { all_rows ; tier ; 'zz' } ; tier ; 'gold' }", scores)

    def test_column_is_resolved_before_the_zero_row_check(self, scores):
        with pytest.raises(MissingColumnError, match="ghost"):
            truth("most_eq { filter_eq { all_rows ; tier ; 'zz' } ; ghost ; 'gold' }", scores)


class TestRootTyping:
    def test_scalar_root_is_rejected(self, scores):
        node = LogicNode("hop", (AllRows(), ColumnName("name")))
        with pytest.raises(ExecTypeError, match="claim"):
            exec_logic(node, scores)

    def test_rows_root_is_rejected(self, scores):
        node = LogicNode("filter_all", (AllRows(), ColumnName("name")))
        with pytest.raises(ExecTypeError, match="claim"):
            exec_logic(node, scores)

    def test_and_over_non_boolean_argument(self, scores):
        inner = LogicNode("eq", (Literal(Number(Decimal(1))), Literal(Number(Decimal(1)))))
        node = LogicNode("and", (inner, Literal(Number(Decimal(1)))))
        with pytest.raises(ExecTypeError):
            exec_logic(node, scores)


class TestAgainstReference:
    def test_randomized_differential(self):
        assert run_differential("logic", 2500) == []

    def test_untouched_cells_do_not_affect_outcome(self):
        assert highlight_mutation_mismatches("logic", 800) == []
