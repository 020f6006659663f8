import itertools
import json
import math

import numpy as np
import pytest

from mubgame.errors import BudgetExceeded, ContractError
from mubgame.game import classical_map_value, classical_upper_bound
from mubgame.mub import cyclic_shift, identity_permutation, standard_set, verify_mub_set
from mubgame.optimize import SeesawConfig, seesaw
from mubgame.search import (
    ConfigResult,
    ScanMode,
    ScanReport,
    classical_exhaustive,
    count_relabellings,
    enumerate_relabellings,
    perturb_set,
    perturb_unitary,
    scan,
)


def brute_force_classical(bases):
    d = bases.dim
    return max(classical_map_value(bases, n) for n in itertools.product(range(d), repeat=d))


def test_classical_exhaustive_qubit():
    opt = classical_exhaustive(standard_set(2, 0))
    assert abs(opt.value - (1 + 1 / math.sqrt(2)) / 2) < 1e-9
    assert opt.best_map == (0, 0)


@pytest.mark.parametrize("excluded", [0, 1, 3])
def test_classical_exhaustive_matches_loop_d3(excluded):
    bases = standard_set(3, excluded)
    opt = classical_exhaustive(bases)
    assert abs(opt.value - brute_force_classical(bases)) < 1e-12
    assert 1 / 3 <= opt.value <= classical_upper_bound(3) + 1e-9
    assert abs(classical_map_value(bases, opt.best_map) - opt.value) < 1e-12


def test_classical_tie_break_is_lexicographic():
    bases = standard_set(3, 0)
    opt = classical_exhaustive(bases)
    for n in itertools.product(range(3), repeat=3):
        if n == opt.best_map:
            break
        assert classical_map_value(bases, n) < opt.value - 1e-12


def test_classical_relabelling_invariance():
    rng = np.random.default_rng(2)
    ref = classical_exhaustive(standard_set(5, 2)).value
    for _ in range(3):
        rel = [tuple(rng.permutation(5)) for _ in range(5)]
        assert abs(classical_exhaustive(standard_set(5, 2, rel)).value - ref) < 1e-9


def test_classical_budget():
    with pytest.raises(BudgetExceeded, match="see-saw") as info:
        classical_exhaustive(standard_set(5, 0), budget=100)
    assert info.value.required == 3125 and info.value.budget == 100


def test_scan_mode_parse():
    assert ScanMode.parse("random:12") == ScanMode("random", 12)
    assert str(ScanMode.parse("cyclic")) == "cyclic"
    assert str(ScanMode("random", 7)) == "random:7"
    with pytest.raises(ContractError):
        ScanMode.parse("random:0")
    with pytest.raises(ContractError):
        ScanMode.parse("sorted")


def test_enumeration_counts():
    tuples = list(enumerate_relabellings(3, "exhaustive"))
    assert len(tuples) == 216 and len(set(tuples)) == 216
    assert count_relabellings(7, "cyclic") == 823543
    assert count_relabellings(5, "exhaustive") == 120**5
    cyc = list(enumerate_relabellings(3, "cyclic"))
    assert len(cyc) == 27
    assert all(p in {cyclic_shift(3, s) for s in range(3)} for t in cyc for p in t)


def test_cyclic_d7_is_lazy_and_complete_prefix():
    it = enumerate_relabellings(7, "cyclic")
    first = next(it)
    assert first == tuple(identity_permutation(7) for _ in range(7))
    assert sum(1 for _ in itertools.islice(it, 1000)) == 1000


def test_random_enumeration_is_reproducible():
    a = list(enumerate_relabellings(3, "random:10", seed=5))
    b = list(enumerate_relabellings(3, "random:10", seed=5))
    c = list(enumerate_relabellings(3, "random:10", seed=6))
    assert a == b and a != c and len(a) == 10
    for t in a:
        assert len(t) == 3 and all(sorted(p) == [0, 1, 2] for p in t)


def test_exhaustive_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_relabellings(7, "exhaustive")
    with pytest.raises(BudgetExceeded):
        enumerate_relabellings(5, "exhaustive", budget=1000)


def test_report_aggregation_and_roundtrip():
    cfgs = [
        ConfigResult(0, ((0, 1), (1, 0)), 0.7, 1, 5),
        ConfigResult(1, ((0, 1), (0, 1)), 0.9, 2, 5),
        ConfigResult(2, ((1, 0), (0, 1)), 0.7, 3, 5),
        ConfigResult(0, ((0, 1), (0, 1)), 0.9, 4, 5),
    ]
    rep = ScanReport(2, "quantum", ScanMode("random", 2), cfgs, master_seed=9)
    assert rep.min_value == 0.7 and rep.min_config is cfgs[0]
    assert rep.max_value == 0.9 and rep.max_config is cfgs[1]
    assert rep.total_configs_evaluated == 4
    assert [c.seed for c in rep.subset(0)] == [1, 4]
    back = ScanReport.from_dict(json.loads(json.dumps(rep.to_dict())))
    assert back.to_dict() == rep.to_dict()
    rows = rep.to_csv().strip().split("\n")
    assert len(rows) == 5 and rows[0].startswith("dim,coin,mode,excluded")


def test_scan_classical_is_one_per_subset():
    rep = scan(3, "classical", "exhaustive", seed=1)
    assert len(rep.per_config) == 4
    for c in rep.per_config:
        assert abs(c.value - classical_exhaustive(standard_set(3, c.excluded)).value) < 1e-12
    # every subset of the complete set is equivalent up to a Clifford rotation
    assert max(c.value for c in rep.per_config) - min(c.value for c in rep.per_config) < 1e-9


def test_small_quantum_scan_deterministic_and_worker_independent():
    cfg = SeesawConfig(restarts=3)
    kw = dict(seed=4, excluded=[0, 1], extra_tuples=[[identity_permutation(3)] * 3])
    a = scan(3, "quantum", "random:3", cfg, workers=1, **kw)
    b = scan(3, "quantum", "random:3", cfg, workers=2, **kw)
    assert [c.value for c in a.per_config] == [c.value for c in b.per_config]
    assert a.per_config[0].relabellings == tuple(identity_permutation(3) for _ in range(3))
    assert a.total_configs_evaluated <= 8
    assert a.min_value == min(c.value for c in a.per_config)


def test_perturb_zero_is_identity_map():
    U = standard_set(3, 0).unitaries[1]
    assert np.max(np.abs(perturb_unitary(U, 0.0, 1) - U)) < 1e-12
    with pytest.raises(ContractError):
        perturb_unitary(U, -0.1, 1)


@pytest.mark.parametrize("delta", [0.1, 0.03, 0.01])
def test_perturb_first_order_bound(delta):
    U = standard_set(5, 0).unitaries[2]
    for seed in range(10):
        V = perturb_unitary(U, delta, seed)
        assert np.max(np.abs(V.conj().T @ V - np.eye(5))) < 1e-9
        assert np.linalg.norm(V - U) <= delta + delta**2


def test_perturb_set_breaks_unbiasedness_slightly():
    s = perturb_set(standard_set(3, 0), 0.05, seed=3)
    assert s.family == "custom"
    rep = verify_mub_set(s)
    assert not rep.ok and rep.worst_deviation < 0.2
    assert verify_mub_set(s, tol=0.2).ok


def test_perturbed_wf_beats_unperturbed_on_average():
    base = standard_set(3, 0)
    ref = seesaw(base, "quantum", SeesawConfig(restarts=10)).best_value
    cfg = SeesawConfig(restarts=3, max_rounds=100, solver_max_iter=300)
    values = [seesaw(perturb_set(base, 0.05, s), "quantum", cfg).best_value for s in range(20)]
    assert np.mean(values) > ref
    assert sum(v >= ref - 1e-6 for v in values) >= 15
