import numpy as np
import pytest

from fuzzyqp import (
    AspirationInterval,
    GridOracleConfig,
    InfeasibleError,
    LevelSetEmptyError,
    Phase1Result,
    build_system,
    check_fuzzy_efficiency,
    check_pareto,
    crisp_variants,
    mu_D,
    solve_phase1,
    solve_phase2,
)
from fuzzyqp.instance import make_instance
from fuzzyqp.solver import memberships

REPORTED_X = np.array([1.331002, 5.804374])
COARSE = GridOracleConfig(resolution=201, refine_rounds=2)


@pytest.fixture(scope="module")
def phase1(example_system):
    return solve_phase1(example_system)


@pytest.fixture(scope="module")
def phase2(example_system, phase1):
    return solve_phase2(example_system, phase1)


def one_d(lo=1.0):
    # Z = x^2 + x; delta = 1 iff x <= 2
    return make_instance([[1.0]], [[[2.0]]], [[1.0]], [[0.5]], [5.0], [2.0],
                         l=[lo], r=[0.5], u=[10.0], t=[1.0])


def test_system_size(example_system):
    assert example_system.size == 8
    assert example_system.labels == ["mu_Z1", "mu_Z2", "delta1", "delta2",
                                     "theta1", "theta2", "gamma1", "gamma2"]
    inst = make_instance([[1.0]], [[[0.0]]], np.zeros((0, 1)), np.zeros((0, 1)), [], [],
                         l=[1.0], r=[0.5], u=[3.0], t=[1.0])
    s = build_system(inst, [AspirationInterval(1.0, 3.0)])
    assert (s.k, s.m, s.n, s.size) == (1, 0, 1, 3)


def test_build_system_checks_interval_count(example):
    with pytest.raises(ValueError):
        build_system(example, [AspirationInterval(0.0, 1.0)])


def test_mu_d(example_system):
    assert mu_D(example_system, REPORTED_X) == pytest.approx(0.3310024, abs=1e-3)
    assert mu_D(example_system, [0.0, 0.0]) == 0.0
    X = np.array([[0.0, 0.0], REPORTED_X])
    np.testing.assert_allclose(mu_D(example_system, X), [0.0, mu_D(example_system, REPORTED_X)])


def test_phase1_example(phase1):
    assert phase1.lambda_star == pytest.approx(0.3310024, abs=1e-3)
    np.testing.assert_allclose(phase1.x_star, REPORTED_X, atol=1e-2)
    assert abs(phase1.oracle_lambda - phase1.lambda_star) <= 1e-3
    assert phase1.certified
    assert set(phase1.binding) == {"mu_Z1", "delta2", "gamma1"}
    # both local methods land on the same level
    assert abs(phase1.bisection_lambda - phase1.direct_lambda) < 1e-5


def test_phase1_oracle_only(example_system):
    res = solve_phase1(example_system, COARSE, oracle_only=True)
    assert res.method == "oracle"
    assert res.lambda_star == pytest.approx(0.3310024, abs=1e-3)


def test_phase1_deterministic(example_system, phase1):
    again = solve_phase1(example_system)
    assert again.lambda_star == phase1.lambda_star
    np.testing.assert_array_equal(again.x_star, phase1.x_star)


def test_saturated_system():
    # constant objective, loose row: every membership is 1 on [0, 5]
    inst = make_instance([[0.0]], [[[0.0]]], [[0.0]], [[0.1]], [100.0], [1.0],
                         l=[0.0], r=[1.0], u=[5.0], t=[1.0])
    s = build_system(inst, [AspirationInterval(0.0, 0.0)])
    p1 = solve_phase1(s, COARSE)
    assert p1.lambda_star == 1.0
    p2 = solve_phase2(s, p1, COARSE)
    assert p2.sum_memberships == pytest.approx(s.k + s.m + 2 * s.n)


def test_infeasible_system():
    # row forces x <= 1 while the lower bound needs x >= 4
    inst = make_instance([[1.0]], [[[1.0]]], [[1.0]], [[1.0]], [1.0], [1.0],
                         l=[5.0], r=[1.0], u=[9.0], t=[1.0])
    s = build_system(inst, [AspirationInterval(0.0, 100.0)])
    with pytest.raises(InfeasibleError):
        solve_phase1(s, COARSE)


def test_level_set_empty(example_system):
    fake = Phase1Result(0.9, np.array([1.0, 1.0]), (), 0.9, None, True, "test")
    with pytest.raises(LevelSetEmptyError):
        solve_phase2(example_system, fake, COARSE)


def test_phase2_example(example_system, phase1, phase2):
    expected = [0.3310024, 0.3401065, 0.362496, 0.3310024, 1, 1, 0.3310024, 1]
    np.testing.assert_allclose(phase2.membership_vector, expected, atol=1e-3)
    np.testing.assert_allclose(phase2.objective_values, [82.092806, 150.569993], atol=0.5)
    assert phase2.certified and not phase2.discrepancy
    assert phase2.oracle_points > 0


def test_phase2_ordering_and_consistency(example_system, phase1, phase2):
    assert phase2.membership_vector.min() >= phase1.lambda_star - 1e-8
    assert phase2.sum_memberships >= memberships(example_system, phase1.x_star).sum() - 1e-12
    np.testing.assert_allclose(memberships(example_system, phase2.x_eff), phase2.membership_vector,
                               atol=1e-8)
    assert phase2.sum_memberships == pytest.approx(phase2.membership_vector.sum(), abs=1e-12)


def test_phase2_oracle_only(example_system, phase1):
    res = solve_phase2(example_system, phase1, COARSE, oracle_only=True)
    assert res.membership_vector.min() >= phase1.lambda_star - 1e-8
    assert res.oracle_sum == pytest.approx(res.sum_memberships)


def test_efficiency_example(example_system, phase2):
    verdict = check_fuzzy_efficiency(example_system, x_cand=phase2.x_eff, config=COARSE)
    assert verdict.efficient


def test_dominated_candidate(example_system):
    # both objectives and every membership can improve from (0.5, 0.5)
    verdict = check_fuzzy_efficiency(example_system, x_cand=[0.5, 0.5], config=COARSE)
    assert verdict.status == "dominated"
    assert np.all(verdict.gains >= -1e-9) and np.any(verdict.gains > 1e-6)


def test_negative_candidate_inconclusive(example_system):
    assert check_fuzzy_efficiency(example_system, x_cand=[-1.0, 1.0]).status == "inconclusive"


def test_efficiency_one_dimension():
    inst = one_d()
    s = build_system(inst, [AspirationInterval(2.0, 100.0)])
    assert check_fuzzy_efficiency(s, x_cand=[1.5], config=COARSE).status == "dominated"
    assert check_fuzzy_efficiency(s, x_cand=[3.0], config=COARSE).efficient


def test_pareto_on_crisp_polytope(example):
    P = crisp_variants(example, 0)[0].polyhedron()
    objs = example.objectives
    assert check_pareto(objs, P, [2.0, 7.0], COARSE).efficient
    verdict = check_pareto(objs, P, [2.0, 2.0], COARSE)
    assert verdict.status == "dominated"
    assert check_pareto(objs, P, [9.0, 9.0], COARSE).status == "inconclusive"


def test_pareto_single_objective(example):
    P = crisp_variants(example, 0)[0].polyhedron()
    objs = example.objectives[:1]
    assert check_pareto(objs, P, [2.0, 7.0], COARSE).efficient
    assert check_pareto(objs, P, [5.0, 5.0], COARSE).status == "dominated"


def test_low_objective_corner_is_fuzzy_efficient(example_system):
    # (2, 2) has poor objectives but near-full constraint memberships; any move
    # that raises Z lowers some delta, so nothing dominates it
    assert check_fuzzy_efficiency(example_system, x_cand=[2.0, 2.0], config=COARSE).efficient
