import math
import os
import subprocess

import numpy as np
import pytest

import wald


def test_version():
    assert wald.__version__.count(".") == 2


def test_polynomial_roundtrip():
    f = wald.Polynomial([(1.0, [1, 0, 0, 1]), (-1.0, [0, 1, 1, 0])])
    assert f.dimension == 4 and f.degree == 2
    assert f == wald.tetrad_polynomial()
    assert f.eval([1, 2, 3, 4]) == pytest.approx(4 - 6)
    assert f.gradient([1, 2, 3, 4]) == pytest.approx([4, -3, -2, 1])
    with pytest.raises(ValueError):
        wald.Polynomial([(1.0, [1, 1]), (1.0, [2, 1])])


def test_monomial_law():
    sigma = np.array([[1.0, 0.5], [0.5, 1.0]])
    w = wald.sample_monomial([1.0, 1.0], sigma, 200_000, seed=3)
    assert w.shape == (200_000,)
    assert wald.ks_distance(w, "scaled-chisq:0.25:1") < 0.01


def test_sample_wald_deterministic():
    sigma = np.eye(4)
    f = wald.tetrad_polynomial()
    a = wald.sample_wald(f, sigma, 1000, seed=9, threads=1)
    b = wald.sample_wald(f, sigma, 1000, seed=9, threads=1)
    assert np.array_equal(a, b)
    assert wald.ks_distance(wald.sample_wald(f, sigma, 200_000, seed=1), "tetrad") < 0.01


def test_cdf_and_quantile():
    assert wald.cdf("tetrad", 0.0) == 0.0
    assert wald.cdf("tetrad", 1.0) == pytest.approx(wald.tetrad_singular_cdf(1.0))
    grid = wald.cdf("scaled-chisq:1:1", [0.5, 3.841458820694124])
    assert grid[1] == pytest.approx(0.95, abs=1e-12)
    assert wald.quantile("scaled-chisq:1:1", 0.95) == pytest.approx(3.841458820694124, rel=1e-10)
    # folded Beta with k1 = k2 = 1 is chi^2_1 / 4
    assert wald.cdf("beta-fold:1:1", 0.3) == pytest.approx(wald.cdf("scaled-chisq:0.25:1", 0.3), abs=1e-9)
    with pytest.raises(ValueError):
        wald.cdf("nonsense:1", 1.0)


def test_sample_law_sorted():
    s = wald.sample_law("mix2:0.25:0.1", 5000, seed=2)
    assert np.all(np.diff(s) >= 0)


def test_classify_tetrad_kronecker():
    s1 = np.array([[1.0, 0.5], [0.5, 1.0]])
    s2 = np.array([[2.0, 0.3], [0.3, 1.0]])
    a = np.zeros((4, 4))
    a[0, 3] = a[3, 0] = 0.5
    a[1, 2] = a[2, 1] = -0.5
    c = wald.classify(a, np.kron(s1, s2))
    assert c["law"] == "beta-fold:2:2"
    assert c["positive"] == 2 and c["negative"] == 2
    assert c["machine_line"].startswith("law=beta-fold:2:2 ")


def test_classify_spectrum():
    assert wald.classify_spectrum([1.0, -1.0])["law"] == "scaled-chisq:0.25:1"
    assert wald.classify_spectrum([2.0, 1.0, 0.5, 0.2])["law"] is None


def test_k_alpha():
    assert wald.k_alpha(0.05) == 7
    assert [wald.k_alpha(a, 0.05) for a in (0.05, 0.025, 0.01, 0.005, 0.001)] == [7, 11, 16, 20, 29]


def test_tetrad_test():
    rng = np.random.default_rng(4)
    z = rng.standard_normal(2000)
    data = np.outer(z, [1.0, 0.8, 0.6, 0.7]) + 0.6 * rng.standard_normal((2000, 4))
    r = wald.wald_tetrad_test(data, (0, 1, 2, 3))
    assert set(r) >= {"gamma_hat", "t_stat", "p_regular", "p_singular", "regime_hint"}
    assert 0 <= r["p_regular"] <= 1
    assert r["p_singular"] <= r["p_regular"]
    theta = wald.empirical_covariance(data)
    g, grad = wald.tetrad_stat(theta, (0, 1, 2, 3))
    assert g == pytest.approx(r["gamma_hat"])
    assert len(grad) == 4
    with pytest.raises(ValueError):
        wald.wald_tetrad_test(data, (0, 1, 2, 2))


def test_moment_table():
    t = wald.moment_table(1.0, [0.0, 0.7], [1, 2])
    assert t["moments"][0][0] == pytest.approx(2 / 4, abs=1e-9)
    assert t["moments"][1][1] == pytest.approx(6 / 16, abs=1e-9)
    assert t["max_deviation"] < 1e-8


def test_stable_density():
    x = 1.3
    assert wald.stable_density(1.0, x) == pytest.approx(
        math.exp(-1 / (2 * x)) / math.sqrt(2 * math.pi) * x ** -1.5
    )


def test_run_suite_small():
    res = wald.run_suite("conjectures", 2000, seed=5)
    assert len(res) == 9
    assert all(r["tier"] == "conjecture-evidence" for r in res)
    assert [r["name"] for r in res] == sorted(r["name"] for r in res)


@pytest.mark.skipif(not os.environ.get("WALD_CLI"), reason="CLI path not provided")
def test_cli_matches_module():
    out = subprocess.run(
        [os.environ["WALD_CLI"], "cdf", "tetrad", "--grid", "0:1:0.5"],
        check=True, capture_output=True, text=True,
    ).stdout.split("\n")
    assert out[0] == "0\t0"
    t, v = out[2].split("\t")
    assert float(v) == pytest.approx(wald.cdf("tetrad", float(t)), abs=1e-9)
