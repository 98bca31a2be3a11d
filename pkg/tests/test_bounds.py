from fractions import Fraction

import pytest

from monopoly_lab.domain.engine import Kind
from monopoly_lab.domain.errors import InvalidParameterError, UnsupportedRegimeError
from monopoly_lab.domain.graph import complete, cycle
from monopoly_lab.services import bounds
from monopoly_lab.services.bounds import Direction


@pytest.mark.parametrize(
    "name, params, value",
    [
        ("line_graph_majority_lb", {"n": 6, "k": 3}, Fraction(3)),
        ("dyn_product_cycle_ub", {"d": 3, "n": 5, "t": 2}, Fraction(6)),
        ("dyn_product_cycle_ub", {"d": 3, "n": 5, "t": 3}, Fraction(9)),
        ("dyn_product_cycle_ub", {"d": 4, "n": 4, "t": 4}, Fraction(12)),
        ("dyn_product_complete_ub", {"d": 4, "t": 3}, Fraction(8)),
        ("dyn_product_naive_ub", {"dg": 3, "dh": 4}, Fraction(12)),
        ("dyn_product_improved_ub", {"dg": 2, "dh": 3, "t": 3}, Fraction(9, 2)),
        ("dyn_product_star_corollary_ub", {"dg": 3, "dh": 4, "t": 3}, Fraction(8)),
        ("dyn_product_clique_corollary_ub", {"g": 5, "t": 4}, Fraction(13)),
        ("regular_bipartite_line_lb", {"n": 6, "r": 3, "t": 2}, Fraction(2)),
        ("biregular_line_lb", {"m": 3, "n": 3, "r1": 3, "r2": 3, "t": 2}, Fraction(2)),
        ("biregular_line_lb", {"m": 3, "n": 3, "r1": 3, "r2": 3, "t": 4}, Fraction(6)),
        ("small_m_exact", {"m": 2, "n": 5, "t": 5}, Fraction(8)),
    ],
)
def test_bound_values(name, params, value):
    report = bounds.BOUNDS[name].func(**params)
    assert report.value == value
    assert report.applicable


def test_certificates_round_toward_the_bounded_side():
    upper = bounds.dyn_product_improved_ub(2, 3, 3)
    assert upper.certificate == 4
    assert upper.admits(4) and not upper.admits(5)
    lower = bounds.line_graph_majority_lb(4, 2)
    assert lower.value == Fraction(1)
    assert bounds.line_graph_majority_lb(2, 1).certificate == 0
    assert bounds.line_graph_majority_lb(10, 3).certificate == 5


def test_star_corollary_never_drops_below_one():
    report = bounds.dyn_product_star_corollary_ub(1, 1, 3)
    assert report.value == 0
    assert report.certificate == 1


def test_exact_bound_admits_only_its_value():
    report = bounds.small_m_exact(2, 5, 5)
    assert report.direction is Direction.EXACT
    assert report.admits(8)
    assert not report.admits(7)


def test_biregular_bound_outside_its_range():
    with pytest.raises(UnsupportedRegimeError) as err:
        bounds.biregular_line_lb(2, 5, 5, 2, 5)
    assert err.value.nearest == "small_m_exact"


def test_invalid_parameters():
    with pytest.raises(InvalidParameterError):
        bounds.line_graph_majority_lb(5, 3)
    with pytest.raises(InvalidParameterError):
        bounds.biregular_line_lb(3, 3, 3, 2, 2)
    with pytest.raises(UnsupportedRegimeError):
        bounds.dyn_product_improved_ub(4, 3, 3)
    with pytest.raises(UnsupportedRegimeError):
        bounds.dyn_product_cycle_ub(3, 5, 1)


def test_evaluate_reports_out_of_regime_instead_of_raising():
    report = bounds.evaluate("small_m_exact", m=3, n=3, t=4)
    assert not report.applicable
    assert report.value is None
    assert "m < t/2" in report.reason
    assert report.admits(123)
    assert report.target is Kind.DYNAMO


def test_evaluate_rejects_unknown_and_missing():
    with pytest.raises(InvalidParameterError):
        bounds.evaluate("no_such_bound", n=1)
    with pytest.raises(InvalidParameterError):
        bounds.evaluate("dyn_product_naive_ub", dg=3)


def test_applicable_bounds_keeps_registry_order():
    names = [r.name for r in bounds.applicable_bounds(dg=3, dh=4, t=3)]
    assert names == ["dyn_product_naive_ub", "dyn_product_improved_ub", "dyn_product_star_corollary_ub"]


def test_product_bound_ordering():
    star = bounds.dyn_product_star_corollary_ub(3, 4, 3).value
    improved = bounds.dyn_product_improved_ub(3, 4, 3).value
    naive = bounds.dyn_product_naive_ub(3, 4).value
    assert star <= improved <= naive


def test_factor_dynamo_number():
    assert bounds.factor_dynamo_number(cycle(4), 2) == 2
    assert bounds.factor_dynamo_number(complete(4), 3) == 3
