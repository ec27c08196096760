import json
import math

import pytest

import kssvar


def test_sampling_is_deterministic():
    a = kssvar.sample_system(2, 3, 11)
    b = kssvar.sample_system(2, 3, 11)
    assert a.coefficients == b.coefficients
    assert len(a.coefficients) == 2 * len(a.terms)
    back = kssvar.KssSystem.from_json(a.to_json())
    assert back.coefficients == a.coefficients


def test_count_roots():
    r = kssvar.count_roots(kssvar.sample_system(2, 3, 5))
    assert r["certified"]
    assert 0 <= r["count"] <= 9
    assert r["count"] % 2 == 1  # same parity as the Bezout number
    # (t - 1)(t + 2)(t^2 + 1)
    assert kssvar.count_univariate([-2.0, 1.0, -1.0, 1.0, 1.0])["count"] == 2


def test_kernel_origin():
    k = kssvar.scaled_kernel(0.0, 10)
    assert k["c"] == pytest.approx(1.0)
    assert k["a"] == pytest.approx(0.0)


def test_variance_m1():
    r = kssvar.variance_finite_d(10, 1)
    assert r["value"] == pytest.approx(0.557112, abs=1e-5)
    v = kssvar.v_infinity(1)
    assert v["value"] == pytest.approx(0.571731, abs=1e-5)
    with pytest.raises(ValueError):
        kssvar.v_infinity(1, route="other")


def test_moments_mean():
    e = kssvar.estimate_moments(1, 10, 2000, seed=3)
    assert abs(e["normalized_mean"] - 1.0) < 4 * e["normalized_mean_se"]
    assert e["uncertified_fraction"] == 0.0


def test_hermite_helpers():
    assert kssvar.hermite_eval(3, 1.0) == -2.0
    v, se = kssvar.f_tilde(1, 50000, 2)["display"]
    assert v > 3 * se
    assert v == pytest.approx(math.sqrt(2 / math.pi), abs=5 * se)


def test_run_experiment(tmp_path):
    text = f"m = 1\nd = 6,12\nn_samples = 40\nmaster_seed = 9\nout_dir = {tmp_path}\n"
    r = kssvar.run_experiment(text)
    assert [e["d"] for e in r["estimates"]] == [6, 12]
    agg = json.loads((tmp_path / "aggregate.json").read_text())
    assert agg["schema"] == "kssvar.aggregate/1"
    assert kssvar.run_experiment(text)["resumed"] == 80
