import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mubgame.errors import ContractError, ConvergenceError
from mubgame.game import (
    Strategy,
    classical_upper_bound,
    guessing_probability,
    perfect_probe,
    perfect_strategy,
)
from mubgame.linalg import projector
from mubgame.mub import dpp_set, standard_set
from mubgame.optimize import (
    SeesawConfig,
    certificate_check,
    discrimination_operators,
    optimal_measurement,
    optimal_probe,
    probe_operator,
    random_density_hs,
    restart_seed,
    seesaw,
)
from mubgame.search import classical_exhaustive


def random_povm(d, rng):
    parts = []
    for _ in range(d):
        A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        parts.append(A @ A.conj().T)
    w, V = np.linalg.eigh(sum(parts))
    S = V @ np.diag(w ** -0.5) @ V.conj().T
    return np.stack([S @ P @ S for P in parts])


def test_random_density_examples():
    assert np.allclose(random_density_hs(1, 5), [[1]])
    for seed in range(10):
        rho = random_density_hs(4, seed)
        assert abs(np.trace(rho) - 1) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-12
    assert np.array_equal(random_density_hs(3, 42), random_density_hs(3, 42))
    assert not np.array_equal(random_density_hs(3, 42), random_density_hs(3, 43))


def test_random_density_mean_is_maximally_mixed():
    rng = np.random.default_rng(0)
    mean = sum(random_density_hs(3, rng) for _ in range(4000)) / 4000
    assert np.max(np.abs(mean - np.eye(3) / 3)) < 0.02


def test_restart_seed_is_stable_and_distinct():
    assert restart_seed(0, 1) == restart_seed(0, 1)
    assert len({restart_seed(0, k) for k in range(100)}) == 100


def test_discrimination_operators_trace_for_mixed_probe():
    for d in [3, 5]:
        D = discrimination_operators(np.eye(d) / d, standard_set(d, 1))
        assert abs(sum(np.trace(Da) for Da in D) - d) < 1e-12


@pytest.mark.parametrize("coin", ["quantum", "classical"])
def test_discrimination_objective_matches_game_value(coin):
    rng = np.random.default_rng(1)
    bases = standard_set(3, 0, [tuple(rng.permutation(3)) for _ in range(3)])
    for seed in range(5):
        rho = random_density_hs(3, seed)
        M = random_povm(3, rng)
        D = discrimination_operators(rho, bases, coin)
        for Da in D:
            assert np.allclose(Da, Da.conj().T)
            assert np.linalg.eigvalsh(Da).min() > -1e-12
        val = np.einsum("aij,aji->", M, D).real / 3
        assert abs(val - guessing_probability(bases, Strategy(rho, tuple(M)), coin)) < 1e-9


def test_discrimination_operators_reject_non_density():
    bases = standard_set(3, 0)
    with pytest.raises(ContractError):
        discrimination_operators(np.eye(3), bases)
    with pytest.raises(ContractError):
        discrimination_operators(np.diag([1.5, -0.5, 0]), bases)


def test_optimal_measurement_orthogonal():
    ops = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    res = optimal_measurement(ops)
    assert abs(res.value - 2) < 1e-9
    np.testing.assert_allclose(res.povm[0], np.diag([1, 0]), atol=1e-7)
    np.testing.assert_allclose(res.povm[1], np.diag([0, 1]), atol=1e-7)
    cert = certificate_check(res.povm, ops)
    assert abs(cert.hermitian_defect) < 1e-9 and abs(cert.min_eig_gap) < 1e-9


def test_optimal_measurement_identical_ops():
    res = optimal_measurement([np.eye(2) / 2, np.eye(2) / 2])
    assert abs(res.value - 1) < 1e-12
    assert np.allclose(res.povm.sum(axis=0), np.eye(2))


def test_optimal_measurement_perfect_probe_dpp5():
    bases = dpp_set(5)
    D = discrimination_operators(projector(perfect_probe(5)), bases)
    res = optimal_measurement(D)
    assert abs(res.value - 5) < 1e-6
    assert res.certificate.optimal


def test_optimal_measurement_rejects_bad_input():
    with pytest.raises(ContractError):
        optimal_measurement([np.diag([1.0, -1.0]), np.eye(2)])
    with pytest.raises(ContractError):
        optimal_measurement([np.array([[0, 1], [0, 0]]), np.eye(2)])
    with pytest.raises(ContractError):
        optimal_measurement(np.ones((2, 2, 3)))


def test_optimal_measurement_non_convergence_carries_best():
    rng = np.random.default_rng(4)
    D = discrimination_operators(random_density_hs(5, 4), standard_set(5, 2))
    with pytest.raises(ConvergenceError) as info:
        optimal_measurement(D, tol=1e-15, max_iter=3)
    err = info.value
    assert err.povm.shape == (5, 5, 5)
    assert np.allclose(err.povm.sum(axis=0), np.eye(5), atol=1e-9)
    assert err.value > 0


def test_rank_deficient_operators_keep_completeness():
    # all operators share a kernel direction
    P = np.diag([1.0, 0.0, 0.0])
    Q = np.diag([0.0, 1.0, 0.0])
    res = optimal_measurement([P, Q, 0.5 * P])
    assert np.allclose(res.povm.sum(axis=0), np.eye(3), atol=1e-12)
    assert abs(res.value - 2) < 1e-9


def test_certificate_swapped_outcomes():
    ops = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    cert = certificate_check([np.diag([0.0, 1.0]), np.diag([1.0, 0.0])], ops)
    assert cert.min_eig_gap < -0.5
    assert not cert.optimal


@pytest.mark.parametrize("d", [3, 5, 7])
def test_certificate_accepts_perfect_povm(d):
    s = perfect_strategy(d)
    D = discrimination_operators(s.probe, dpp_set(d))
    cert = certificate_check(np.stack(s.povm), D)
    assert cert.optimal
    assert abs(cert.dual_bound - d) < 1e-8


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.sampled_from([2, 3, 5]))
def test_measurement_value_within_dual_bound(seed, d):
    rng = np.random.default_rng(seed)
    D = discrimination_operators(random_density_hs(d, rng), standard_set(d, int(rng.integers(d + 1))))
    res = optimal_measurement(D)
    assert res.certificate.optimal
    assert res.value <= res.certificate.dual_bound + 1e-6
    M = random_povm(d, rng)
    assert np.einsum("aij,aji->", M, D).real <= res.value + 1e-6


def test_optimal_probe_examples():
    s = perfect_strategy(3)
    assert abs(optimal_probe(s.povm, dpp_set(3)).value - 1) < 1e-9
    uniform = [np.eye(5) / 5] * 5
    assert abs(optimal_probe(uniform, standard_set(5, 3)).value - 0.2) < 1e-12


def test_optimal_probe_is_top_eigenvector():
    rng = np.random.default_rng(9)
    bases = standard_set(5, 0)
    M = random_povm(5, rng)
    K = probe_operator(M, bases)
    res = optimal_probe(M, bases)
    assert abs(np.trace(res.probe @ K).real - np.linalg.eigvalsh(K)[-1]) < 1e-9
    assert abs(guessing_probability(bases, Strategy(res.probe, tuple(M))) - res.value) < 1e-9


def test_config_validation():
    with pytest.raises(ContractError):
        SeesawConfig(epsilon=0)
    with pytest.raises(ContractError):
        SeesawConfig(restarts=0)


def test_seesaw_dpp_reaches_one():
    res = seesaw(dpp_set(3), "quantum", SeesawConfig(restarts=20))
    assert abs(res.best_value - 1) < 1e-6
    assert res.is_valid_povm


def test_seesaw_wf_is_between_bounds():
    res = seesaw(standard_set(3, 0), "quantum", SeesawConfig(restarts=20))
    assert classical_upper_bound(3) < res.best_value < 1 - 1e-3


def test_seesaw_classical_matches_exhaustive():
    bases = standard_set(3, 0)
    res = seesaw(bases, "classical", SeesawConfig(restarts=20))
    assert abs(res.best_value - classical_exhaustive(bases).value) < 1e-4


def test_seesaw_result_invariants_and_json():
    bases = standard_set(5, 1)
    res = seesaw(bases, "quantum", SeesawConfig(restarts=6, master_seed=3))
    d = 5
    assert res.best_value == max(r.final_value for r in res.per_restart)
    assert 1 / d - 1e-9 <= res.best_value <= 1 + 1e-9
    for r in res.per_restart:
        assert r.monotone_ok
        assert all(b >= a - 1e-9 for a, b in zip(r.trace, r.trace[1:]))
        assert r.certificate.hermitian_defect <= 1e-6 and r.certificate.min_eig_gap >= -1e-5
    s = res.best_strategy
    assert not s.violations(1e-7)
    assert abs(guessing_probability(bases, s) - res.best_value) < 1e-9
    blob = json.loads(json.dumps(res.to_dict()))
    assert blob["best_value"] == res.best_value
    assert len(blob["per_restart"]) == 6 and blob["per_restart"][0]["trace"]
    assert set(blob["certificate"]) == {"is_valid_povm", "discrimination_gap"}


def test_seesaw_is_deterministic_and_worker_independent():
    bases = standard_set(3, 2)
    cfg = SeesawConfig(restarts=4, master_seed=11)
    a = seesaw(bases, "quantum", cfg)
    b = seesaw(bases, "quantum", cfg, workers=2)
    assert a.best_value == b.best_value
    assert [r.trace for r in a.per_restart] == [r.trace for r in b.per_restart]
    assert np.array_equal(a.best_strategy.probe, b.best_strategy.probe)
