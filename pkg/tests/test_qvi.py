import numpy as np
import pytest

from jumpkit import (
    BenchmarkParams,
    estimate_cost,
    make_benchmark_problem,
    qvi_residual,
    solve_benchmark_qvi,
    synthesize_policy,
)
from jumpkit.errors import ParameterError
from jumpkit.impulse import CandidateValue, ImpulsePolicy


@pytest.fixture(scope="module")
def solution():
    return solve_benchmark_qvi(BenchmarkParams())


@pytest.fixture(scope="module")
def problem():
    return make_benchmark_problem(BenchmarkParams())


def test_params_validation():
    with pytest.raises(ParameterError):
        BenchmarkParams(drift_rate=0.6, discount=1.0)
    with pytest.raises(ParameterError):
        BenchmarkParams(jump_size=0.6117, grid_step=0.005)


def test_solution_is_symmetric(solution):
    x, psi = solution.candidate.x, solution.candidate.values
    assert np.max(np.abs(psi - psi[::-1])) < 1e-8
    lo, hi = solution.band
    assert lo == pytest.approx(-hi, abs=2 * solution.candidate.step)


def test_solution_improves_on_never_intervening(solution):
    params = solution.params
    x = solution.candidate.x
    uncontrolled = params.uncontrolled_value(x)
    psi = solution.candidate.values
    assert np.all(psi <= uncontrolled + 1e-8)
    assert psi[x.size // 2] < uncontrolled[x.size // 2]


def test_fd_residual_tiny(solution):
    assert solution.fd_residual < 1e-6


def test_official_qvi_residual(solution, problem):
    report = qvi_residual(problem, solution.candidate)
    assert report.sup_norm <= 1e-3
    # one-sided inequalities hold everywhere in the interior
    inside = report.interior
    assert np.min(report.generator_plus_running[inside]) >= -1e-3
    assert np.max(report.value_minus_intervention[inside]) <= 1e-3


def test_region_dichotomy(solution, problem):
    report = qvi_residual(problem, solution.candidate)
    inside = report.interior
    gp = np.abs(report.generator_plus_running[inside])
    vm = np.abs(report.value_minus_intervention[inside])
    assert np.all((gp <= 1e-3) | (vm <= 1e-3))


def test_perturbation_detected(solution, problem):
    cand = solution.candidate
    bumped = CandidateValue(
        x=cand.x, values=cand.values + 0.1 * np.cos(cand.x), discount=cand.discount
    )
    report = qvi_residual(problem, bumped)
    assert report.sup_norm > 1e-2


def test_band_widens_with_fixed_cost():
    bands = []
    for c in (0.5, 1.0, 2.0):
        sol = solve_benchmark_qvi(BenchmarkParams(fixed_cost=c, grid_step=0.01))
        bands.append(sol.band[1])
    assert bands[0] < bands[1] < bands[2]


def test_policy_bands_match_active_set(solution, problem):
    policy = synthesize_policy(problem, solution.candidate)
    assert len(policy.intervals) == 1
    lo, hi = policy.intervals[0]
    assert lo == pytest.approx(solution.band[0], abs=0.05)
    assert hi == pytest.approx(solution.band[1], abs=0.05)
    targets = policy.targets
    assert np.all(policy.contains(targets))


def test_quick_value_consistency(solution, problem, stream):
    # cheap smoke version of the full verification: psi(0) vs simulated cost
    policy = synthesize_policy(problem, solution.candidate)
    est = estimate_cost(problem, policy, 0.0, 2000, 2e-3, stream, horizon=12.0)
    phi0 = float(solution.candidate.psi(0.0))
    assert abs(est.value - phi0) <= 3 * est.stderr + 25 * 2e-3


def test_never_intervene_cost_matches_uncontrolled_value(problem, stream):
    params = BenchmarkParams()
    est = estimate_cost(problem, ImpulsePolicy.never_intervene(), 0.0, 2000, 2e-3,
                        stream, horizon=12.0)
    target = float(params.uncontrolled_value(0.0))
    assert abs(est.value - target) <= 3 * est.stderr + 25 * 2e-3


def test_paired_streams_rank_policies(solution, problem, stream):
    # identical substreams path for path: doing nothing costs more
    policy = synthesize_policy(problem, solution.candidate)
    lazy = estimate_cost(problem, ImpulsePolicy.never_intervene(), 0.5, 1500, 2e-3,
                         stream.substream(7), horizon=12.0)
    active = estimate_cost(problem, policy, 0.5, 1500, 2e-3,
                           stream.substream(7), horizon=12.0)
    assert lazy.value >= active.value
