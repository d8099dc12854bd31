import random

import pytest

from minecast.errors import NumericError
from minecast.projection import bau_trajectory, cumulative_to_neutral
from minecast.report import write_sweep_csv
from minecast.sensitivity import (
    analytic_derivatives,
    apply_parameter,
    finite_difference,
    ordering_check,
    sweep,
)

from conftest import make_linear_scenario, make_scenario


@pytest.fixture(scope="module")
def base_scenario():
    return make_linear_scenario(theta=0.03)


@pytest.fixture(scope="module")
def base_report(base_scenario):
    return analytic_derivatives(base_scenario)


class TestAnalyticDerivatives:
    def test_alpha_derivative_is_exact_reciprocal(self, base_report):
        assert base_report.dlogE_dalpha == 1.0 / 0.6

    def test_base_case_gamma(self, base_report):
        assert abs(base_report.dlogE_dgamma - 9.0) <= 0.15 * 9.0

    def test_base_case_theta(self, base_report):
        assert abs(base_report.neg_dlogE_dtheta - 29.0) <= 0.15 * 29.0

    def test_fd_agreement_at_base(self, base_report):
        assert base_report.fd_dlogE_dalpha == pytest.approx(base_report.dlogE_dalpha, rel=1e-6)
        assert base_report.fd_dlogE_dgamma == pytest.approx(base_report.dlogE_dgamma, rel=1e-3)
        assert base_report.fd_neg_dlogE_dtheta == pytest.approx(base_report.neg_dlogE_dtheta, rel=1e-3)

    def test_alpha_derivative_ignores_other_parameters(self):
        for kwargs in (dict(gamma=0.12), dict(beta=0.004), dict(target_twh=80.0)):
            report = analytic_derivatives(make_linear_scenario(theta=0.045, alpha=0.6, **kwargs))
            assert report.dlogE_dalpha == 1.0 / 0.6

    def test_requires_linear_trajectory(self):
        with pytest.raises(NumericError):
            analytic_derivatives(make_scenario(trajectory=bau_trajectory()))

    def test_zero_emissions_rejected(self):
        with pytest.raises(NumericError):
            analytic_derivatives(make_linear_scenario(theta=0.03, ef0=0.0))


class TestFiniteDifference:
    def test_alpha_linearity_makes_fd_nearly_exact(self, base_scenario):
        fd = finite_difference(base_scenario, "alpha", 1e-4)
        assert fd == pytest.approx(1.0 / 0.6, rel=1e-6)

    def test_randomized_points_agree_with_analytic(self):
        rng = random.Random(20200930)
        for _ in range(10):
            alpha = rng.uniform(0.3, 0.99)
            gamma = rng.uniform(0.01, 0.2)
            theta = rng.uniform(0.01, 0.05)
            scenario = make_linear_scenario(theta=theta, alpha=alpha, gamma=gamma)
            report = analytic_derivatives(scenario)
            assert report.fd_dlogE_dalpha == pytest.approx(report.dlogE_dalpha, rel=1e-6)
            assert report.fd_dlogE_dgamma == pytest.approx(report.dlogE_dgamma, rel=1e-3)
            assert report.fd_neg_dlogE_dtheta == pytest.approx(report.neg_dlogE_dtheta, rel=1e-3)

    def test_step_bounds_enforced(self, base_scenario):
        with pytest.raises(NumericError):
            finite_difference(base_scenario, "alpha", 1e-7)
        with pytest.raises(NumericError):
            finite_difference(base_scenario, "alpha", 0.5)

    def test_perturbation_leaving_range_rejected(self):
        at_boundary = make_linear_scenario(theta=0.03, alpha=1.0)
        with pytest.raises(NumericError):
            finite_difference(at_boundary, "alpha", 1e-4)

    def test_unknown_parameter_rejected(self, base_scenario):
        with pytest.raises(NumericError):
            finite_difference(base_scenario, "beta", 1e-4)


class TestOrderingCheck:
    def test_grid_orderings_hold_everywhere(self, base_scenario):
        alphas = [0.3, 0.475, 0.65, 0.825, 1.0]
        gammas = [0.01, 0.0575, 0.105, 0.1525, 0.2]
        thetas = [0.01, 0.02, 0.03, 0.04, 0.05]
        verdicts, counterexamples = ordering_check(base_scenario, alphas, gammas, thetas)
        assert len(verdicts) == 125
        assert counterexamples == []

    def test_base_point_values(self, base_report):
        assert base_report.neg_dlogE_dtheta > base_report.dlogE_dgamma > base_report.dlogE_dalpha

    def test_theta_to_zero_edge(self, base_scenario):
        # the theta-vs-gamma gap stays positive even for tiny theta
        verdicts, counterexamples = ordering_check(base_scenario, [0.6], [0.06], [0.002])
        assert counterexamples == []
        assert verdicts[0].neg_dtheta > verdicts[0].dgamma


class TestSweep:
    def test_alpha_sweep_monotone(self, base_scenario):
        points = sweep(base_scenario, "alpha", [0.5, 0.6, 0.7])
        totals = [p.series.cumulative_emissions for p in points]
        assert totals == sorted(totals)
        assert totals[0] < totals[2]

    def test_theta_sweep_monotone_decreasing(self, base_scenario):
        points = sweep(base_scenario, "theta", [0.01, 0.03, 0.05])
        totals = [p.series.cumulative_emissions for p in points]
        assert totals == sorted(totals, reverse=True)

    def test_empty_values(self, base_scenario):
        assert sweep(base_scenario, "alpha", []) == []

    def test_invalid_value_becomes_error_entry(self, base_scenario):
        points = sweep(base_scenario, "alpha", [0.5, 1.5, 0.7])
        assert points[0].series is not None
        assert points[1].series is None and points[1].error
        assert points[2].series is not None
        assert [p.value for p in points] == [0.5, 1.5, 0.7]

    def test_unknown_axis_rejected(self, base_scenario):
        with pytest.raises(NumericError):
            sweep(base_scenario, "horizon", [10])

    def test_sweep_output_is_reproducible_bytes(self, base_scenario, tmp_path):
        points = sweep(base_scenario, "gamma", [0.02, 0.06, 0.1])
        write_sweep_csv(tmp_path / "a.csv", points)
        write_sweep_csv(tmp_path / "b.csv", sweep(base_scenario, "gamma", [0.02, 0.06, 0.1]))
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_theta_sweep_extends_horizon_to_neutral_year(self, base_scenario):
        points = sweep(base_scenario, "theta", [0.01])
        years = [r.year for r in points[0].series.records]
        assert years[-1] >= 2020 + 100


class TestCumulativeToNeutral:
    def test_equals_projection_at_any_covering_horizon(self, base_scenario):
        from minecast.projection import project

        total = cumulative_to_neutral(base_scenario)
        assert total == project(base_scenario.with_horizon(34)).cumulative_emissions
        assert total == project(base_scenario.with_horizon(90)).cumulative_emissions

    def test_theta_perturbation_moves_neutral_year(self, base_scenario):
        lo = cumulative_to_neutral(apply_parameter(base_scenario, "theta", 0.02))
        hi = cumulative_to_neutral(apply_parameter(base_scenario, "theta", 0.04))
        assert lo > hi
