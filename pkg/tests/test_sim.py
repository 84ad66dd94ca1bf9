import math

import numpy as np
import pytest

from sparse_smf.core import FilterConfig, FilterState, Sample, lcsm_nlms2_update
from sparse_smf.sim import (
    ExperimentConfig,
    SparseSystem,
    delay_line,
    generate_run,
    default_algorithms,
    preset_experiment,
    run_algorithm,
    run_experiment,
    steady_state_mse,
)


def small(system="system1", **kw):
    kw.setdefault("runs", 20)
    kw.setdefault("iterations", 400)
    kw.setdefault("seed", 3)
    return preset_experiment(system, **kw)


def test_presets_match_reference_coefficients():
    assert SparseSystem.preset("system1").coefficients.tolist() == [0.02, 0, 0, 0, 0, 0.6, 0, 0, 0.25, 0, 0, 0, 0]
    assert SparseSystem.preset("System 2").coefficients.tolist() == [0, 0, 0, 0, 0.3, 0.6, -0.5, 0.7, 0, 0, 0, 0, 0]
    assert SparseSystem.preset("system3").coefficients.tolist() == [0, 0, 0, 0, 0.3, 0.5, 0.7, 0.5, 0.3, 0, 0, 0, 0]
    for name, support in [("system1", 3), ("system2", 4), ("system3", 5)]:
        s = SparseSystem.preset(name)
        assert s.order == 12 and s.support == support
    with pytest.raises(KeyError):
        SparseSystem.preset("system4")


def test_preset_parameters():
    cfg = preset_experiment("system1")
    assert cfg.runs == 500 and cfg.iterations == 2000 and cfg.noise_variance == 0.01
    assert cfg.initial_weight == 0.1
    lc = cfg.algorithms["lcsm-nlms2"]
    assert lc.gamma_bar == pytest.approx(0.223607, abs=1e-6)
    assert lc.epsilon == 1e-4 and lc.delta == 1e-12
    assert cfg.algorithms["sm-l0-nlms"].alpha == 0.005 and cfg.algorithms["sm-l0-nlms"].beta == 5
    assert cfg.algorithms["sm-pnlms"].scale == 100


def test_delay_line():
    u = np.arange(1.0, 6.0)
    X = delay_line(u, 3)
    np.testing.assert_array_equal(X[0], [1, 0, 0])
    np.testing.assert_array_equal(X[1], [2, 1, 0])
    np.testing.assert_array_equal(X[4], [5, 4, 3])


def test_generate_run_deterministic_and_distinct():
    cfg = small()
    X1, d1 = generate_run(cfg, 4)
    X2, d2 = generate_run(cfg, 4)
    X3, _ = generate_run(cfg, 5)
    assert np.array_equal(X1, X2) and np.array_equal(d1, d2)
    assert not np.array_equal(X1, X3)
    assert not np.array_equal(X1, generate_run(cfg.with_(seed=4), 4)[0])


def test_generate_run_noise_free_zero_system():
    cfg = ExperimentConfig(
        system=SparseSystem(np.zeros(13)), algorithms=default_algorithms(), noise_variance=0.0, runs=1, iterations=50
    )
    _, d = generate_run(cfg, 0)
    assert np.all(d == 0)


def test_generate_run_desired_signal():
    cfg = small(noise_variance=0.0, algorithms=default_algorithms())
    X, d = generate_run(cfg, 1)
    np.testing.assert_allclose(d, X @ cfg.system.coefficients, rtol=1e-14, atol=1e-15)


def test_input_variance():
    cfg = small(iterations=100_000, runs=1)
    X, _ = generate_run(cfg, 0)
    assert 0.99 <= X[:, 0].var() <= 1.01
    assert abs(X[:, 0].mean()) < 0.01


def test_noise_variance():
    cfg = small(iterations=100_000, runs=1)
    X, d = generate_run(cfg, 0)
    noise = d - X @ cfg.system.coefficients
    assert 0.0099 <= noise.var() <= 0.0101


def test_trivial_run_with_huge_bound():
    algos = {"lcsm-nlms2": FilterConfig(order=12, gamma_bar=1e9, epsilon=1e-4)}
    cfg = preset_experiment("system1", algorithms=algos, runs=1, iterations=1)
    res = run_experiment(cfg)["lcsm-nlms2"]
    assert res.update_rate == 0
    np.testing.assert_array_equal(res.final_weights, 0.1)
    assert res.mse_curve.shape == (1,)


def test_update_rate_extremes():
    algos = {"sm-nlms": FilterConfig(order=12, gamma_bar=1e-300)}
    res = run_experiment(small(algorithms=algos))["sm-nlms"]
    assert res.update_rate == 1.0
    algos = {"sm-nlms": FilterConfig(order=12, gamma_bar=1e6)}
    assert run_experiment(small(algorithms=algos))["sm-nlms"].update_rate == 0.0


def test_harness_matches_single_sample_api():
    cfg = small(runs=3, iterations=150)
    res = run_experiment(cfg)["lcsm-nlms2"]
    acfg = cfg.algorithms["lcsm-nlms2"]
    for r in range(cfg.runs):
        X, d = generate_run(cfg, r)
        state = FilterState(np.full(13, 0.1))
        fired = 0
        for k in range(cfg.iterations):
            state, out = lcsm_nlms2_update(state, Sample(X[k], d[k]), acfg)
            fired += out.updated
            assert out.active_count == res.active_trace[r, k]
        assert state.weights.tobytes() == res.final_weights[r].tobytes()
        assert fired == res.fired_per_run[r]


def test_reproducible():
    a = run_experiment(small())
    b = run_experiment(small())
    for name in a:
        assert a[name].mse_curve.tobytes() == b[name].mse_curve.tobytes()
        assert a[name].update_rate == b[name].update_rate
        assert a[name].ops == b[name].ops
        assert np.array_equal(a[name].steady_state_active, b[name].steady_state_active)


def test_result_shapes_and_bounds():
    cfg = small()
    for name, res in run_experiment(cfg).items():
        assert res.mse_curve.shape == (cfg.iterations,)
        assert 0 <= res.update_rate <= 1
        assert res.steady_state_start == 320
        assert res.steady_state_active.sum() <= res.fired_per_run.sum()
        assert res.steady_state_active.shape == (cfg.runs, 14)


def test_monotone_active_set():
    cfg = small(runs=50, iterations=2000)
    cfg = cfg.with_(algorithms={**cfg.algorithms, "lcsm-nlms1": FilterConfig(order=12, gamma_bar=math.sqrt(0.05), epsilon=1e-3)})
    res = run_experiment(cfg)
    for name in ("lcsm-nlms1", "lcsm-nlms2"):
        assert np.all(np.diff(res[name].active_trace, axis=1) <= 0)
    # every tap stays active for the non-discarding baselines
    assert np.all(res["sm-pnlms"].active_trace == 13)


def test_mse_floor():
    cfg = small(runs=100, iterations=2000)
    for name, res in run_experiment(cfg).items():
        sem = res.run_steady_mse.std(ddof=1) / math.sqrt(cfg.runs)
        assert steady_state_mse(res) >= cfg.noise_variance - 3 * sem, name


def test_steady_state_mse_windows():
    res = run_experiment(small(runs=2, iterations=100))["lcsm-nlms2"]
    const = type(res)(**{**res.__dict__, "mse_curve": np.full(100, 0.25)})
    assert steady_state_mse(const, 0.2) == 0.25
    assert steady_state_mse(res, 1.0) == pytest.approx(res.mse_curve.mean(), rel=1e-15)
    assert steady_state_mse(res, 0.1) == pytest.approx(res.mse_curve[90:].mean(), rel=1e-15)
    with pytest.raises(ValueError):
        steady_state_mse(res, 0.0)
    assert steady_state_mse(res, 0.001) == res.mse_curve[-1]
    empty = type(res)(**{**res.__dict__, "mse_curve": np.empty(0)})
    with pytest.raises(ValueError):
        steady_state_mse(empty)


@pytest.mark.parametrize(
    "kw",
    [dict(runs=0), dict(iterations=0), dict(noise_variance=-1), dict(steady_state_fraction=0), dict(initial_weight=0.0)],
)
def test_invalid_experiment(kw):
    with pytest.raises(ValueError):
        preset_experiment("system1", **kw)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError, match="dimension"):
        preset_experiment("system1", algorithms={"sm-nlms": FilterConfig(order=5, gamma_bar=0.2)})
