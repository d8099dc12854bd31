"""Log-derivatives of cumulative emissions and parameter sweeps.

The three headline parameters are the electricity cost share, the market-cap
growth rate, and the linear decarbonization rate. Analytic derivatives use
the same annual discretization as the projection itself, so an independent
central-difference oracle over full projection runs must agree with them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NumericError
from .projection import (
    ProjectionSeries,
    ScenarioConfig,
    cumulative_to_neutral,
    linear_trajectory,
    project,
)
from .supply import supply_series

PARAMETERS = ("alpha", "gamma", "theta")
SWEEPABLE = ("alpha", "gamma", "theta", "beta", "p_ele", "ef0")

# Open-interval bounds inside which a perturbed parameter must stay.
_RANGES = {
    "alpha": (0.0, 1.0, "(0, 1]"),
    "gamma": (-0.5, 0.5, "[-0.5, 0.5]"),
    "theta": (0.0, 1.0, "(0, 1)"),
}


@dataclass(frozen=True)
class SensitivityReport:
    """Analytic and finite-difference log-derivatives at one parameter point."""

    dlogE_dalpha: float
    dlogE_dgamma: float
    neg_dlogE_dtheta: float
    fd_dlogE_dalpha: float
    fd_dlogE_dgamma: float
    fd_neg_dlogE_dtheta: float
    base_cumulative: float  # Mt
    alpha: float
    gamma: float
    theta: float


def apply_parameter(scenario: ScenarioConfig, parameter: str, value: float) -> ScenarioConfig:
    """Scenario with one named parameter replaced; raises on invalid values."""
    try:
        if parameter == "alpha":
            return replace(scenario, cost=replace(scenario.cost, alpha=value))
        if parameter == "p_ele":
            return replace(scenario, cost=replace(scenario.cost, p_ele=value))
        if parameter == "gamma":
            return replace(scenario, market=replace(scenario.market, gamma=value))
        if parameter == "beta":
            return replace(scenario, market=replace(scenario.market, beta=value))
        if parameter == "theta":
            if scenario.trajectory.kind != "linear":
                raise NumericError("theta applies only to linear-trajectory scenarios")
            if not 0.0 < value < 1.0:
                raise ValueError("theta must lie in (0, 1)")
            return replace(scenario, trajectory=linear_trajectory(value))
        if parameter == "ef0":
            return replace(scenario, ef0=value)
    except ValueError as exc:
        raise NumericError(f"{parameter}={value} is outside the valid range: {exc}") from exc
    raise NumericError(f"unknown parameter {parameter!r}; expected one of {SWEEPABLE}")


def _parameter_value(scenario: ScenarioConfig, parameter: str) -> float:
    if parameter == "alpha":
        return scenario.cost.alpha
    if parameter == "gamma":
        return scenario.market.gamma
    if parameter == "theta":
        if scenario.trajectory.kind != "linear":
            raise NumericError("theta is defined only for linear-trajectory scenarios")
        return scenario.trajectory.rate
    raise NumericError(f"unknown parameter {parameter!r}; expected one of {PARAMETERS}")


def finite_difference(scenario: ScenarioConfig, parameter: str, step: float = 1e-4) -> float:
    """Central difference of log cumulative emissions from two full projections.

    ``step`` is the relative perturbation of the parameter value.
    """
    if not 1e-6 <= step <= 1e-2:
        raise NumericError("finite-difference step must lie in [1e-6, 1e-2]")
    x = _parameter_value(scenario, parameter)
    h = step * abs(x)
    if h == 0.0:
        raise NumericError(f"cannot perturb {parameter}={x} by a relative step")
    lo, hi, window = _RANGES[parameter]
    if x - h <= lo or x + h > hi:
        raise NumericError(f"perturbing {parameter}={x} by {h} leaves the valid range {window}")
    e_plus = cumulative_to_neutral(apply_parameter(scenario, parameter, x + h))
    e_minus = cumulative_to_neutral(apply_parameter(scenario, parameter, x - h))
    if e_plus <= 0.0 or e_minus <= 0.0:
        raise NumericError("cumulative emissions vanish under perturbation; log-derivative undefined")
    return (math.log(e_plus) - math.log(e_minus)) / (2.0 * h)


def _analytic_point(scenario: ScenarioConfig) -> tuple[float, float, float, float]:
    """(E, dlogE/dalpha, dlogE/dgamma, -dlogE/dtheta) at one linear-trajectory point.

    Differentiating the clamped intensity max(0, 1 - theta*t) with respect to
    theta contributes a factor -t wherever the intensity is positive, which is
    why the theta sum carries the extra t.
    """
    if scenario.trajectory.kind != "linear":
        raise NumericError("sensitivity derivatives need a linear-trajectory scenario")
    theta = scenario.trajectory.rate
    if theta <= 0.0:
        raise NumericError("theta must be positive for sensitivity analysis")
    gamma = scenario.market.gamma
    alpha = scenario.cost.alpha
    neutral = int(scenario.trajectory.neutral_year)

    minted, supply = supply_series(scenario.issuance, neutral)
    scale = alpha / scenario.cost.p_ele * scenario.market.v0 * scenario.ef0 / 1e9
    total = 0.0    # cumulative emissions, Mt
    d_gamma = 0.0  # dE/dgamma
    d_theta = 0.0  # -dE/dtheta
    for t in range(1, neutral + 1):
        intensity = 1.0 - theta * t
        if intensity <= 0.0:
            break
        streams = minted[t] / supply[t] + scenario.market.beta
        growth = (1.0 + gamma) ** t
        total += scale * growth * streams * intensity
        d_gamma += scale * t * growth / (1.0 + gamma) * streams * intensity
        d_theta += scale * growth * streams * t
    if total <= 0.0:
        raise NumericError("cumulative emissions are zero; log-derivative undefined")
    return total, 1.0 / alpha, d_gamma / total, d_theta / total


def analytic_derivatives(scenario: ScenarioConfig, fd_step: float = 1e-4) -> SensitivityReport:
    """Evaluate the three log-derivatives and their finite-difference oracles.

    Requires a linear trajectory so the decarbonization rate is defined. The
    sums run over the same integer years as the projection, through the
    neutral year.
    """
    total, d_alpha, d_gamma, neg_d_theta = _analytic_point(scenario)
    return SensitivityReport(
        dlogE_dalpha=d_alpha,
        dlogE_dgamma=d_gamma,
        neg_dlogE_dtheta=neg_d_theta,
        fd_dlogE_dalpha=finite_difference(scenario, "alpha", fd_step),
        fd_dlogE_dgamma=finite_difference(scenario, "gamma", fd_step),
        fd_neg_dlogE_dtheta=-finite_difference(scenario, "theta", fd_step),
        base_cumulative=total,
        alpha=scenario.cost.alpha,
        gamma=scenario.market.gamma,
        theta=scenario.trajectory.rate,
    )


@dataclass(frozen=True)
class OrderingVerdict:
    """Derivative ordering at one grid point."""

    alpha: float
    gamma: float
    theta: float
    neg_dtheta: float
    dgamma: float
    dalpha: float

    @property
    def theta_dominates_gamma(self) -> bool:
        return self.neg_dtheta > self.dgamma

    @property
    def gamma_dominates_alpha(self) -> bool:
        return self.dgamma > self.dalpha


def ordering_check(
    scenario: ScenarioConfig,
    alphas: list[float],
    gammas: list[float],
    thetas: list[float],
) -> tuple[list[OrderingVerdict], list[OrderingVerdict]]:
    """Evaluate the derivative ordering on a parameter grid.

    Returns (verdicts, counterexamples), where counterexamples lists every
    grid point at which either ordering fails. Uses the analytic values only,
    so boundary points like alpha=1 are fine.
    """
    verdicts = []
    counterexamples = []
    for a in alphas:
        for g in gammas:
            for th in thetas:
                point = apply_parameter(
                    apply_parameter(apply_parameter(scenario, "alpha", a), "gamma", g),
                    "theta", th,
                )
                _, d_alpha, d_gamma, neg_d_theta = _analytic_point(point)
                verdict = OrderingVerdict(
                    alpha=a, gamma=g, theta=th,
                    neg_dtheta=neg_d_theta, dgamma=d_gamma, dalpha=d_alpha,
                )
                verdicts.append(verdict)
                if not (verdict.theta_dominates_gamma and verdict.gamma_dominates_alpha):
                    counterexamples.append(verdict)
    return verdicts, counterexamples


@dataclass(frozen=True)
class SweepPoint:
    """One sweep evaluation: the parameter value and its projection (or error)."""

    value: float
    series: ProjectionSeries | None
    error: str | None = None


def sweep(base: ScenarioConfig, axis: str, values: list[float]) -> list[SweepPoint]:
    """One full projection per value, all other parameters held at base.

    Invalid values become error entries; the sweep continues and results keep
    the input order.
    """
    if axis not in SWEEPABLE:
        raise NumericError(f"cannot sweep {axis!r}; expected one of {SWEEPABLE}")
    points = []
    for value in values:
        try:
            scenario = apply_parameter(base, axis, value)
            neutral = scenario.trajectory.neutral_year
            if not math.isinf(neutral):
                scenario = scenario.with_horizon(max(scenario.horizon, int(neutral)))
            points.append(SweepPoint(value=value, series=project(scenario)))
        except NumericError as exc:
            points.append(SweepPoint(value=value, series=None, error=str(exc)))
    return points
