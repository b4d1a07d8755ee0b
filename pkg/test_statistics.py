"""
Tests for rank totals, Monte Carlo estimates, the convergence experiment and the verification suite
"""
from fractions import Fraction
import csv
import io

import pytest

from treespec.errors import CapExceededError
from treespec.spectral import ABS_SQUARED, CONSTANT_ONE
from treespec.statistics import (
    CSV_HEADER,
    P1,
    chain_bound,
    closed_form_total_rank,
    convergence_experiment,
    default_test_functions,
    exhaustive_convergence_row,
    leaf_domain_symmetry,
    p_estimate,
    printed_cardinality,
    printed_total_rank,
    rows_to_csv,
    total_rank_recursive,
    totals_exact,
    ultimate_rank_bound,
    ultimate_rank_breakdown,
    verify_suite,
)
from treespec.wreath import count_elements


def test_level_one_totals():
    totals = totals_exact(1)
    assert totals.element_count == 7
    assert totals.total_rank == 8
    assert totals.total_ultimate_rank == 6
    assert totals.p == P1 == Fraction(3, 7)


def test_level_two_totals():
    totals = totals_exact(2)
    assert totals.element_count == 127
    assert totals.total_rank == 256
    assert totals.total_ultimate_rank == 136
    assert totals.p == Fraction(136, 4 * 127)
    assert totals.to_dict()["p_n"] == "34/127"


def test_level_three_totals():
    totals = totals_exact(3)
    assert totals.total_rank == closed_form_total_rank(3) == 2 ** 17
    assert totals.total_ultimate_rank <= ultimate_rank_bound(totals_exact(2))
    assert totals.p <= Fraction(3, 4) * totals_exact(2).p


def test_totals_refuse_above_cap():
    with pytest.raises(CapExceededError):
        totals_exact(4)


def test_total_rank_formulas_agree():
    for n in range(1, 10):
        assert closed_form_total_rank(n) == total_rank_recursive(n)
        assert closed_form_total_rank(n) == 2 ** (2 ** (n + 1) + n - 2)


def test_printed_formulas_are_wrong_where_expected():
    assert printed_total_rank(1) == 2 != closed_form_total_rank(1)
    assert printed_cardinality(1) == 15 != count_elements(1)


def test_ultimate_rank_bound_at_level_two():
    assert ultimate_rank_bound(totals_exact(1)) == 144
    assert totals_exact(2).total_ultimate_rank <= 144


def test_chain_bound():
    assert chain_bound(1) == Fraction(3, 7)
    assert chain_bound(2) == Fraction(9, 28)
    assert totals_exact(2).p <= chain_bound(2)


def test_breakdown_by_top_map():
    breakdown = ultimate_rank_breakdown(2)
    assert breakdown["consistent"]
    assert breakdown["single_fixing"] == 12
    assert breakdown["single_moving"] == 0
    assert breakdown["identity_top"] == 84
    assert breakdown["swap_top"] == breakdown["swap_top_from_pairs"] == 40
    assert breakdown["swap_top_bound"] == 48
    with pytest.raises(ValueError):
        ultimate_rank_breakdown(1)


def test_leaf_domain_symmetry():
    assert leaf_domain_symmetry(1) == (4, 4)
    assert leaf_domain_symmetry(2) == (64,) * 4


def test_p_estimate_agrees_with_exact_value():
    mean, stderr = p_estimate(2, 4000, seed=0)
    assert stderr > 0
    assert abs(mean - 136 / 508) < 5 * stderr


def test_p_estimate_agrees_with_exhaustive_value_at_level_three():
    mean, stderr = p_estimate(3, 4000, seed=3)
    assert abs(mean - float(totals_exact(3).p)) < 5 * stderr


@pytest.mark.slow
def test_p_estimate_respects_chain_bound_at_level_eight():
    mean, stderr = p_estimate(8, 100000, seed=0)
    assert mean <= float(chain_bound(8)) + 3 * stderr


def test_p_estimate_needs_enough_samples():
    with pytest.raises(ValueError):
        p_estimate(2, 50, seed=0)


def test_exhaustive_row_at_level_one():
    row = exhaustive_convergence_row(1)
    assert row.sample_count == 7
    assert row.mean_normalized_ultimate_rank == Fraction(3, 7)
    assert row.mass_at_zero_mean == Fraction(4, 7)
    assert row.deviations["abs_z2"] == Fraction(3, 7)
    assert row.deviations["id"] == Fraction(2, 7)
    assert row.bound == Fraction(3, 7)


def test_exhaustive_deviations_respect_bounds():
    for n in (1, 2):
        row = exhaustive_convergence_row(n)
        for name, deviation in row.deviations.items():
            assert deviation <= row.function_bounds[name]


def test_convergence_experiment_is_deterministic():
    first = convergence_experiment(1, 3, 200, seed=5)
    second = convergence_experiment(1, 3, 200, seed=5)
    assert [r.to_dict() for r in first] == [r.to_dict() for r in second]
    assert [r.n for r in first] == [1, 2, 3]


def test_convergence_experiment_rejects_bad_range():
    with pytest.raises(ValueError):
        convergence_experiment(3, 2, 10, seed=0)


def test_csv_layout():
    rows = convergence_experiment(1, 2, 100, seed=0)
    lines = rows_to_csv(rows).splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 3
    assert lines[1].startswith("1,100,")


def test_csv_reads_back_with_a_plain_reader():
    rows = convergence_experiment(1, 2, 100, seed=0)
    records = list(csv.DictReader(io.StringIO(rows_to_csv(rows))))
    assert [int(r["n"]) for r in records] == [1, 2]
    assert all(r["samples"] == "100" for r in records)


def test_csv_extra_columns():
    functions = dict(default_test_functions(), one=CONSTANT_ONE)
    row = exhaustive_convergence_row(1, functions)
    assert row.deviations["one"] == 0
    lines = rows_to_csv([row], extra_functions=["one"]).splitlines()
    assert lines[0].endswith(",bound,f_one")
    assert lines[1].endswith(",0")


def test_verify_suite_small():
    report = verify_suite(2, oracle_random_samples=0)
    assert report.passed, [c.claim for c in report.failures]
    assert [t.total_ultimate_rank for t in report.totals] == [6, 136]
    claims = {c.claim for c in report.claims}
    assert "p_1" in claims
    assert any(claim.startswith("eigenvalue count equals ultimate rank, all of P_2") for claim in claims)
    report_dict = report.to_dict()
    assert report_dict["passed"] is True
    assert any(not entry["pass"] for entry in report_dict["errata"])


def test_verify_suite_refuses_above_cap():
    with pytest.raises(CapExceededError):
        verify_suite(4)


@pytest.mark.slow
def test_verify_suite_full():
    report = verify_suite(3, oracle_random_samples=1000)
    assert report.passed, [c.claim for c in report.failures]


@pytest.mark.slow
def test_ultimate_rank_decays_across_levels():
    rows = convergence_experiment(4, 12, 10000, seed=0, test_functions={ABS_SQUARED.name: ABS_SQUARED})
    for row in rows:
        assert float(row.mean_normalized_ultimate_rank) <= float(row.bound) + 3 * row.standard_error
        assert row.deviations[ABS_SQUARED.name] == row.mean_normalized_ultimate_rank
    for earlier, later in zip(rows, rows[1:]):
        spread = 3 * (earlier.standard_error ** 2 + later.standard_error ** 2) ** 0.5
        assert later.mean_normalized_ultimate_rank <= earlier.mean_normalized_ultimate_rank + spread
    assert rows[-1].mean_normalized_ultimate_rank < rows[0].mean_normalized_ultimate_rank
    assert rows[-1].mass_at_zero_mean > Fraction(95, 100)
