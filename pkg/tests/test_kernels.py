import os
import subprocess
import sys

import numpy as np
import pytest

from dchaos import kernels

IMPLS = kernels.implementations()


def _case(seed, m=40, n_max=500, step=-1):
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(np.arange(600, 900), size=m, replace=False)).astype(np.int64)
    base = 0
    vals = rng.random(2000)
    coef = rng.random(m) + 0.1
    return vals, base, idx, coef, n_max, step


def test_compiled_extension_is_built():
    assert "cython" in IMPLS
    assert kernels.BACKEND == "cython"


@pytest.mark.skipif("cython" not in IMPLS, reason="extension not built")
@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("step", [-1, 1])
def test_shifted_sums_bit_identical(seed, step):
    vals, base, idx, coef, n_max, _ = _case(seed, step=step)
    a = kernels.shifted_sums(vals, base, idx, coef, n_max, step, impl=IMPLS["python"])
    b = kernels.shifted_sums(vals, base, idx, coef, n_max, step, impl=IMPLS["cython"])
    assert np.array_equal(a, b)


@pytest.mark.skipif("cython" not in IMPLS, reason="extension not built")
@pytest.mark.parametrize("seed", range(5))
def test_log_shifted_sums_agree(seed):
    vals, base, idx, coef, n_max, step = _case(seed)
    logs = np.log(vals) * 300
    logs[::17] = -np.inf
    a = kernels.log_shifted_sums(logs, base, idx, np.log(coef), n_max, step, impl=IMPLS["python"])
    b = kernels.log_shifted_sums(logs, base, idx, np.log(coef), n_max, step, impl=IMPLS["cython"])
    np.testing.assert_allclose(a, b, rtol=1e-14)
    assert np.array_equal(np.isneginf(a), np.isneginf(b))


def test_log_shifted_sums_match_direct():
    vals, base, idx, coef, n_max, step = _case(7)
    direct = kernels.shifted_sums(vals, base, idx, coef, n_max, step)
    logs = kernels.log_shifted_sums(np.log(vals), base, idx, np.log(coef), n_max, step)
    np.testing.assert_allclose(np.exp(logs), direct, rtol=1e-13)


@pytest.mark.skipif("cython" not in IMPLS, reason="extension not built")
def test_below_prefix_counts_identical():
    vals = np.random.default_rng(3).random(10_000)
    for thr in (0.0, 0.25, 0.5, 1.0):
        a = kernels.below_prefix_counts(vals, thr, impl=IMPLS["python"])
        b = kernels.below_prefix_counts(vals, thr, impl=IMPLS["cython"])
        assert np.array_equal(a, b)
        assert a[-1] == int((vals < thr).sum())


def test_pure_python_switch():
    env = dict(os.environ, DCHAOS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from dchaos import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "python"


def test_pure_python_certificate_counts_match():
    code = (
        "from dchaos.chaos import example_certificate, verify_certificate\n"
        "from dchaos.weights import WeightSequence\n"
        "v = verify_certificate(WeightSequence.harmonic(), 'backward', example_certificate(range(2, 5)), backend='float')\n"
        "print([b.count for b in v.blocks])\n"
    )
    outs = []
    for flag in ("1", ""):
        env = dict(os.environ, DCHAOS_PURE_PYTHON=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True).stdout)
    assert outs[0] == outs[1] == "[42, 964, 26380]\n"
