import os
import subprocess
import sys

import numpy as np
import pytest

from affinity_ca import _accel, kernels
from affinity_ca.engine import EngineConfig, run, trajectory_hash
from affinity_ca.initcfg import random_density
from affinity_ca.rng import RngStream, stream_key, ROLE_CELL
from affinity_ca.rules import ProbabilityFunction as PF, RuleParams

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("mode", [0, 1, 2])
@pytest.mark.parametrize("is_g", [False, True])
def test_numba_matches_numpy(mode, is_g):
    rng = np.random.default_rng(mode * 2 + is_g)
    for _ in range(40):
        h, w = (int(v) for v in rng.integers(3, 25, size=2))
        cells = (rng.random((h, w)) < rng.random()).astype(np.uint8)
        K = int(rng.integers(0, 9))
        phi, psi = RuleParams(K=K, phi=PF("linear", K), psi=PF("exponential", K)).flip_tables()
        key = np.uint64(stream_key(int(rng.integers(0, 2**63)), 3, ROLE_CELL))
        r0 = int(rng.integers(0, h))
        r1 = int(rng.integers(r0, h + 1))
        a = np.full_like(cells, 7)
        b = np.full_like(cells, 7)
        na = kernels.step_band_numba(cells, a, r0, r1, K, mode, is_g, key, phi, psi)
        nb = kernels.step_band_numpy(cells, b, r0, r1, K, mode, is_g, key, phi, psi)
        assert np.array_equal(a, b)
        assert na == nb == int(a[r0:r1].sum())
        assert np.all(a[:r0] == 7) and np.all(a[r1:] == 7)


_SCRIPT = """
from affinity_ca import BACKEND, run, trajectory_hash, random_density, RuleParams
from affinity_ca.engine import EngineConfig
r = run(random_density(24, 24, 0.45, 3), RuleParams(), EngineConfig(record_trajectory=True), seed=9)
print(BACKEND, r.outcome, r.iterations, trajectory_hash(r))
"""


def _run_backend(name):
    env = dict(os.environ, AFFINITY_CA_BACKEND=name)
    out = subprocess.run([sys.executable, "-c", _SCRIPT], env=env, capture_output=True,
                         text=True, check=True)
    return out.stdout.split()


@needs_numba
def test_backends_give_identical_trajectories():
    a = _run_backend("numpy")
    b = _run_backend("numba")
    assert a[0] == "numpy" and b[0] == "numba"
    assert a[1:] == b[1:]


def test_backend_flag_rejects_unknown():
    env = dict(os.environ, AFFINITY_CA_BACKEND="fortran")
    out = subprocess.run([sys.executable, "-c", "import affinity_ca"], env=env,
                         capture_output=True, text=True)
    assert out.returncode != 0
    assert "AFFINITY_CA_BACKEND" in out.stderr


def test_in_process_hash_is_stable():
    r = run(random_density(24, 24, 0.45, 3), RuleParams(), EngineConfig(record_trajectory=True), seed=9)
    assert trajectory_hash(r) == trajectory_hash(
        run(random_density(24, 24, 0.45, 3), RuleParams(), EngineConfig(record_trajectory=True), seed=9))


def test_bench_reports_rates(capsys):
    from affinity_ca.bench import main

    rates = main(size=16, steps=20)
    assert rates["numpy"] > 0
    if _accel.HAVE_NUMBA:
        assert rates["numba"] > 0
        assert "speed-up" in capsys.readouterr().out
