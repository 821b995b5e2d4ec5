import json
import math

import pytest

import bernaudit as ba


def test_special_functions():
    assert ba.log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)
    assert ba.log_binomial(100, 50) == pytest.approx(66.78384165201743, abs=1e-12)
    assert math.exp(ba.log_binomial_pmf(4, 2, 0.5)) == pytest.approx(6 / 16, rel=1e-14)


def test_bernstein_with_python_callable():
    assert ba.bernstein_eval(lambda x: x * x, 10, 0.5) == pytest.approx(0.275, abs=1e-15)
    assert ba.bernstein_derivative_eval(lambda x: x * x, 10, 0.5) == pytest.approx(1.0, abs=1e-14)
    assert sum(ba.bernstein_weights(30, 0.3)) == pytest.approx(1.0, abs=1e-14)


def test_upper_bound_record():
    g = ba.trial_g(0.5)
    r = ba.upper_bound(g, 100, 0.5)
    assert r.delta == pytest.approx(0.0397946186935894, abs=1e-12)
    assert r.bound == pytest.approx(0.12533141373155, abs=1e-10)
    assert r.passed and r.converged
    edge = ba.upper_bound(g, 100, 0.0)
    assert edge.ratio is None


def test_user_function_and_modulus():
    m = ba.Modulus.lipschitz(3.0)
    f = ba.Function("three_x", lambda x: 3.0 * x, m)
    assert f.label == "three_x"
    assert ba.upper_bound(f, 20, 0.4).delta < 1e-13
    with pytest.raises(ValueError):
        ba.Function("bad", lambda x: 5.0 * x, m)
    assert ba.j_functional(ba.Modulus.hoelder(0.5), 100, 0.5) == pytest.approx(0.2410258287352459, abs=1e-10)


def test_corpora():
    labels = [f.label for f in ba.corpus("standard")]
    assert len(labels) >= 8 and "sqrt" in labels
    assert len(ba.corpus("derivative")) == 3
    r = ba.derivative_bound(ba.corpus("square")[0], 10, 0.25)
    assert r.bound == pytest.approx(1.0236012545582677, abs=1e-9)
    b = ba.bivariate_bound("g_0.5(x)*1", 100, "inf", 0.5, 0.3)
    assert b.delta == pytest.approx(0.0397946186935894, abs=1e-12) and b.passed


def test_subgaussian():
    rep = ba.cosh_mgf_check(10, 0.01, [3.0])
    assert rep["cells_violating"] == 1
    assert ba.moment_check(10, 0.5, 2)["cells_violating"] == 0
    assert ba.tail_function(4, 0.5, 1.0) == pytest.approx(0.0625)
    assert ba.excess_kurtosis_root() == pytest.approx(math.sqrt(10) - 3, abs=1e-6)


def test_sharpness():
    t = ba.ratio_trace(ba.trial_g(0.5), 0.5, [2 ** k for k in range(1, 15)])
    assert all(r <= 2.0 for r in t["ratio"])
    assert t["limit"] == pytest.approx(2 / math.pi, abs=0.02)


def test_cli_roundtrip():
    code, out, err = ba.run_cli(["bound", "--corpus", "square", "--n", "4", "--x", "0.5", "--format", "json", "--output", "-"])
    assert code == 0, err
    doc = json.loads(out)
    assert doc["header"]["schema"] == ba.REPORT_SCHEMA
    assert ba.run_cli(["bound"])[0] == 2
