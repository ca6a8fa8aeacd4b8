"""Acceptance criteria, one reported line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
are produced; they are also collected into an "acceptance criteria" section
at the end of the pytest summary.
"""

import time

import numpy as np
import pytest

from affinity_ca import Grid, RngStream, RuleParams, step
from affinity_ca.engine import EngineConfig, Stepper, run, trajectory_hash
from affinity_ca.experiments import ExperimentSpec, InitialSpec, run_experiment, summarize
from affinity_ca.initcfg import BlockShape, block_minority, random_density
from affinity_ca.oracle import flip_probability_map, monte_carlo_flip_check, naive_step
from affinity_ca.rules import ProbabilityFunction as PF, eval_phi, eval_psi, f_transition
from conftest import random_grid


def _affinity(K, **kw):
    return RuleParams(K=K, phi=PF("logarithmic", K), psi=PF("exponential", K), p=0.2, **kw)


def _density(K, **kw):
    return RuleParams(K=K, phi=PF("linear", K), psi=PF("linear", K), p=0.1, **kw)


def test_c1_probability_tables(acceptance):
    phi = [eval_phi(PF("logarithmic", 4), x) for x in range(1, 5)]
    psi = [eval_psi(PF("exponential", 4), x) for x in range(1, 5)]
    ok = np.allclose(phi, [0.0, 0.5, 0.79248, 1.0], atol=1e-4, rtol=0) and np.allclose(
        psi, [0.0497, 0.1353, 0.3679, 1.0], atol=1e-4, rtol=0)
    acceptance("1 probability tables (tol 1e-4)", ok,
               f"phi={np.round(phi, 5).tolist()} psi={np.round(psi, 5).tolist()}")
    assert ok


def _flips(state, x, K, mode):
    # 1-cell: more than K zero neighbors; 0-cell: 8 - x zero neighbors checked against 8 - K
    if state == 1:
        return x > K
    ones = x
    return {"at_least": ones >= 8 - K, "exact": ones == 8 - K, "more_than": ones > 8 - K}[mode]


def test_c2_rule_truth_table(acceptance):
    checked = mismatches = 0
    for mode in ("at_least", "exact", "more_than"):
        for K in range(9):
            for x in range(9):
                for state in (0, 1):
                    want = 1 - state if _flips(state, x, K, mode) else state
                    checked += 1
                    mismatches += f_transition(state, x, K, mode) != want
    # the 324 cases are the at_least/exact pair; more_than adds 162 more
    acceptance("2 rule f truth table (exact)", mismatches == 0,
               f"{checked} cases, {mismatches} mismatches")
    assert mismatches == 0


def test_c3_fixed_points(acceptance):
    changed = []
    for K in range(1, 8):
        for name, params in (("affinity", _affinity(K)), ("density", _density(K))):
            for state in (0, 1):
                src = np.full((32, 32), state, dtype=np.uint8)
                dst = np.empty_like(src)
                with Stepper(params, RngStream(K * 10 + state)) as stepper:
                    for t in range(1000):
                        stepper.advance(src, dst, t)
                        if not np.array_equal(dst, src):
                            changed.append((K, name, state, t))
                            break
    acceptance("3 homogeneous fixed points, 1000 steps", not changed,
               f"28 runs, changed={changed[:3]}")
    assert not changed


def test_c4_oracle_equivalence(acceptance):
    rng = np.random.default_rng(2024)
    grids = mismatches = 0
    for i in range(500):
        g = random_grid(rng)
        K = int(rng.integers(1, 8))
        mode = ("more_than", "at_least", "exact")[i % 3]
        beyond = ("follow_f", "hold", "identity")[(i // 3) % 3]
        params = _affinity(K, threshold_mode=mode, beyond_k=beyond) if i % 2 else _density(
            K, threshold_mode=mode, beyond_k=beyond)
        seed, t = int(rng.integers(0, 2**63)), int(rng.integers(0, 10**6))
        for rule in ("F", "G"):
            mismatches += step(g, params, RngStream(seed), t, rule=rule) != naive_step(
                g, params, RngStream(seed), t, rule=rule)
        grids += 1
    acceptance("4 engine == naive oracle (bit-exact)", mismatches == 0,
               f"{grids} grids x F/G, {mismatches} mismatches")
    assert mismatches == 0


def test_c5_determinism(acceptance):
    cfg = EngineConfig(record_trajectory=True)
    init = random_density(64, 64, 0.47, 11)
    digests = {trajectory_hash(run(init, RuleParams(), cfg, seed=5, workers=w)) for w in (1, 1, 2, 4, 7)}
    other = trajectory_hash(run(init, RuleParams(), cfg, seed=6))
    ok = len(digests) == 1 and other not in digests
    acceptance("5 determinism (repeat, 1 vs 2/4/7 workers)", ok,
               f"distinct digests={len(digests)}, seed changes hash={other not in digests}")
    assert ok


def test_c6_g_step_statistics(acceptance):
    g = random_density(8, 8, 0.5, 17)
    params = RuleParams()
    trials = 100_000
    freq = monte_carlo_flip_check(g, params, trials, seed=3)
    q = flip_probability_map(g, params)
    sigma = np.sqrt(q * (1 - q) / trials)
    z = np.where(sigma > 0, np.abs(freq - q) / np.where(sigma > 0, sigma, 1), 0.0)
    exact_where_degenerate = bool(np.all(freq[sigma == 0] == q[sigma == 0]))
    ok = bool(np.all(z <= 3.0)) and exact_where_degenerate
    acceptance("6 per-cell G flip frequency within 3 sigma", ok,
               f"{trials} G-steps, max |z|={z.max():.2f}, distinct probs={len(np.unique(q))}")
    assert ok


@pytest.mark.slow
@pytest.mark.parametrize("label,K,rho,want", [
    ("7a", 4, 0.10, "all_zero"),
    ("7b", 4, 0.90, "all_one"),
    ("7c", 1, 0.55, "all_zero"),
    ("7d", 7, 0.55, "all_one"),
])
def test_c7_outcome_spot_checks(acceptance, label, K, rho, want):
    spec = ExperimentSpec(width=100, height=100, params=_affinity(K),
                          initial=InitialSpec(rho=rho), trials=20, seed_base=1000,
                          engine=EngineConfig(max_steps=50_000))
    counts = summarize(run_experiment(spec))
    ok = counts[want] >= 19
    acceptance(f"{label} K={K} rho={rho} -> {want} >= 19/20", ok, str(counts))
    assert ok


@pytest.mark.slow
@pytest.mark.parametrize("rho,want", [(0.40, "all_zero"), (0.60, "all_one")])
def test_c8_density_classification(acceptance, rho, want):
    spec = ExperimentSpec(width=200, height=200, params=_density(4),
                          initial=InitialSpec(rho=rho), trials=40, seed_base=2000)
    counts = summarize(run_experiment(spec))
    ok = counts[want] >= 38
    acceptance(f"8 linear p=0.1 rho={rho} -> {want} >= 38/40", ok, str(counts))
    assert ok


@pytest.mark.slow
def test_c8_near_half_reported(acceptance):
    # reported only; the split near 0.5 is expected to be mixed
    spec = ExperimentSpec(width=200, height=200, params=_density(4),
                          initial=InitialSpec(rho=0.5036), trials=10, seed_base=3000)
    counts = summarize(run_experiment(spec))
    acceptance("8 (report) rho=0.5036 split, 10 trials", True, str(counts))


def test_c9_performance(acceptance):
    g = random_density(100, 100, 0.5, 0)
    src, dst = np.array(g.cells), np.empty((100, 100), dtype=np.uint8)
    with Stepper(RuleParams(), RngStream(0)) as stepper:
        stepper.advance(src, dst, 0)
        steps, start = 2000, time.perf_counter()
        for t in range(steps):
            stepper.advance(src, dst, t)
            src, dst = dst, src
        rate = steps / (time.perf_counter() - start)
    ok = rate >= 1000
    acceptance("9 100x100 >= 1000 steps/s single-threaded", ok, f"{rate:.0f} steps/s")
    assert ok


def _block_counts(side, params):
    counts = {"all_zero": 0, "all_one": 0, "timeout": 0}
    for seed in range(10):
        g = block_minority(200, 200, 0, side * side, BlockShape("square", (90, 90)))
        counts[run(g, params, EngineConfig(max_steps=50_000), seed=4000 + seed).outcome] += 1
    return counts


@pytest.mark.slow
def test_c10_block_ordering(acceptance):
    big, small = _block_counts(12, _affinity(4)), _block_counts(7, _affinity(4))
    ok = big["all_zero"] > 5 and small["all_one"] > 5 and big["all_zero"] > small["all_zero"]
    acceptance("10 12x12 zero block -> mostly all-0, 7x7 -> mostly all-1", ok,
               f"12x12 {big}, 7x7 {small}")
    assert ok


@pytest.mark.slow
def test_alternative_readings_reported(acceptance):
    # informational: how the non-default rule readings fare on the same checks
    def density_counts(**kw):
        spec = ExperimentSpec(width=200, height=200, params=_density(4, **kw),
                              initial=InitialSpec(rho=0.40), trials=10, seed_base=2000)
        return summarize(run_experiment(spec))

    k1 = ExperimentSpec(width=100, height=100, params=_affinity(1, beyond_k="hold"),
                        initial=InitialSpec(rho=0.55), trials=20, seed_base=1000)
    acceptance("info alternative readings (not asserted)", True,
               f"at_least 8 rho=0.40 {density_counts(threshold_mode='at_least')}; "
               f"identity 8 rho=0.40 {density_counts(beyond_k='identity')}; "
               f"hold 7c {summarize(run_experiment(k1))}")
