import numpy as np
import pytest

from sparse_smf.algorithms import ALGORITHMS, update
from sparse_smf.baselines import L0NlmsConfig, PnlmsConfig
from sparse_smf.complexity import OpCount, counted_update, predicted_count
from sparse_smf.core import FilterConfig, FilterState, Sample

from oracles import lcsm_counted_reference


def fired_probe(n, rng, w=None):
    w = np.full(n, 0.1) if w is None else w
    x = rng.normal(size=n)
    return FilterState(w, 1), Sample(x, float(w @ x) + 2.0)


def test_predicted_examples():
    assert predicted_count("lcsm-nlms1", 12) == OpCount(40, 40, 1)
    assert predicted_count("sm-l0-nlms", 12) == OpCount(91, 119, 15)
    assert predicted_count("sm-pnlms", 0) == OpCount(5, 8, 4)
    assert predicted_count("LCSM-NLMS1", 0).as_tuple() == (4, 4, 1)


def test_predicted_unknown():
    with pytest.raises(KeyError):
        predicted_count("rls", 3)
    with pytest.raises(ValueError):
        predicted_count("sm-nlms", -1)


@pytest.mark.parametrize("algorithm", ["sm-nlms", "lcsm-nlms1", "lcsm-nlms2"])
def test_worst_case_matches_closed_form(algorithm, rng):
    for N in range(65):
        cfg = FilterConfig(order=N, gamma_bar=0.2, epsilon=0.0)
        state, sample = fired_probe(N + 1, rng)
        _, out, ops = counted_update(algorithm, state, sample, cfg)
        assert out.updated
        assert ops == predicted_count(algorithm, N)


@pytest.mark.parametrize("algorithm", list(ALGORITHMS))
def test_non_fired_costs_only_the_error(algorithm, rng):
    n = 9
    cfg = {
        "sm-pnlms": PnlmsConfig(order=n - 1, gamma_bar=10.0),
        "sm-l0-nlms": L0NlmsConfig(order=n - 1, gamma_bar=10.0),
    }.get(algorithm, FilterConfig(order=n - 1, gamma_bar=10.0, epsilon=0.01))
    w = rng.uniform(0.1, 1, size=n)
    x = rng.normal(size=n)
    _, out, ops = counted_update(algorithm, FilterState(w, 1), Sample(x, float(w @ x)), cfg)
    assert not out.updated
    assert ops == OpCount(n, n, 0)


@pytest.mark.parametrize("zero", [False, True])
def test_counts_track_active_set(rng, zero):
    algorithm = "lcsm-nlms2" if zero else "lcsm-nlms1"
    for _ in range(300):
        n = int(rng.integers(1, 30))
        w = rng.normal(size=n) * rng.choice([1e-4, 1.0], size=n)
        w[rng.random(n) < 0.2] = 0.0
        x = rng.normal(size=n)
        d = float(rng.normal() * 3)
        eps = 0.01
        cfg = FilterConfig(order=n - 1, gamma_bar=0.1, epsilon=eps, delta=1e-12)
        _, out, ops = counted_update(algorithm, FilterState(w, 1), Sample(x, d), cfg)
        expected = lcsm_counted_reference(list(w), list(x), d, eps, 0.1, 1e-12, zero)
        assert ops.as_tuple() == expected
        if out.updated:
            assert ops.div == 1


def test_savings_are_monotone_in_inactive_taps(rng):
    N = 20
    x = rng.normal(size=N + 1)
    worst = predicted_count("lcsm-nlms1", N)
    previous = None
    for inactive in range(N + 2):
        w = np.full(N + 1, 0.5)
        w[:inactive] = 1e-6
        cfg = FilterConfig(order=N, gamma_bar=0.1, epsilon=1e-3)
        _, out, ops = counted_update("lcsm-nlms1", FilterState(w, 1), Sample(x, float(w @ x) + 3.0), cfg)
        assert out.updated
        assert ops.add_sub <= worst.add_sub and ops.mul <= worst.mul and ops.div == 1
        if previous is not None:
            assert ops.mul < previous.mul and ops.add_sub < previous.add_sub
        previous = ops


@pytest.mark.parametrize("algorithm", list(ALGORITHMS))
def test_instrumentation_is_transparent(algorithm, rng):
    n = 13
    cfg = {
        "sm-pnlms": PnlmsConfig(order=n - 1, gamma_bar=0.2),
        "sm-l0-nlms": L0NlmsConfig(order=n - 1, gamma_bar=0.2),
    }.get(algorithm, FilterConfig(order=n - 1, gamma_bar=0.2, epsilon=0.05))
    for _ in range(100):
        state = FilterState(rng.normal(size=n) * 0.2, 1)
        sample = Sample(rng.normal(size=n), rng.normal())
        a, oa = update(algorithm, state, sample, cfg)
        b, ob, _ = counted_update(algorithm, state, sample, cfg)
        assert a.weights.tobytes() == b.weights.tobytes() and oa == ob


def test_baselines_report_their_own_cost(rng):
    # standard-form baselines need fewer operations than the closed forms
    for N in (0, 5, 12):
        state, sample = fired_probe(N + 1, rng)
        for name, cfg in [("sm-pnlms", PnlmsConfig(order=N, gamma_bar=0.2)), ("sm-l0-nlms", L0NlmsConfig(order=N, gamma_bar=0.2))]:
            _, out, ops = counted_update(name, state, sample, cfg)
            pred = predicted_count(name, N)
            assert out.updated
            assert ops.mul <= pred.mul and ops.div <= pred.div and ops.add_sub <= pred.add_sub


def test_opcount_addition():
    assert OpCount(1, 2, 3) + OpCount(4, 5, 6) == OpCount(5, 7, 9)
