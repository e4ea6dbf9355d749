from fractions import Fraction

import numpy as np
import pytest

from ibc.elements import BlockFunction, IncompatibleElementError, PWLinear, StepFunction, TrigPoly


def riemann(f, power=1, n=400001):
    """Midpoint-rule oracle for int |f|^power on [0, 1]."""
    x = (np.arange(n) + 0.5) / n
    return float(np.mean(np.abs(f(x)) ** power))


def random_pw(rng, pieces=7):
    # stratified breakpoints keep every cell wider than 1/(2 pieces)
    inner = (np.arange(1, pieces) + rng.uniform(-0.25, 0.25, pieces - 1)) / pieces
    x = np.concatenate([[0.0], inner, [1.0]])
    return PWLinear(x, rng.standard_normal(x.size))


def test_pwlinear_validation():
    with pytest.raises(ValueError):
        PWLinear([0.1, 1.0], [0, 0])
    with pytest.raises(ValueError):
        PWLinear([0.0, 0.5, 0.5, 1.0], [0, 0, 0, 0])
    with pytest.raises(ValueError):
        PWLinear([0.0, 1.0], [0, np.nan])


def test_w12_of_identity():
    f = PWLinear([0.0, 1.0], [0.0, 1.0])
    assert f.norm_w12() == pytest.approx(2 / np.sqrt(3), rel=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_norms_against_riemann_oracle(seed):
    f = random_pw(np.random.default_rng(seed))
    assert f.norm_l2() == pytest.approx(riemann(f, 2) ** 0.5, rel=1e-6)
    assert f.norm_l4() == pytest.approx(riemann(f, 4) ** 0.25, rel=1e-6)
    x = (np.arange(400001) + 0.5) / 400001
    assert f.integral() == pytest.approx(float(np.mean(f(x))), abs=1e-6)
    grid = np.linspace(0.0, 1.0, 4000001)
    slopes = np.diff(f(grid)) / np.diff(grid)
    assert f.deriv_l2() == pytest.approx(np.sqrt(np.mean(slopes**2)), rel=1e-6)
    assert f.norm_w12() == pytest.approx(np.sqrt(riemann(f, 2) + np.mean(slopes**2)), rel=1e-6)


def test_exact_integrals_match_float():
    f = random_pw(np.random.default_rng(7))
    for p in (2, 4):
        assert float(f.exact_power_integral(p)) == pytest.approx(f._power_integral(p), rel=1e-13)
    assert float(f.exact_deriv_sq()) == pytest.approx(f.deriv_l2() ** 2, rel=1e-12)


def test_exact_evaluation_at_fraction():
    f = PWLinear([0.0, 0.5, 1.0], [0.0, 1.0, 0.0])
    assert f(Fraction(1, 4)) == Fraction(1, 2)
    assert isinstance(f(Fraction(3, 4)), Fraction)


def test_arithmetic_merges_breakpoints():
    f = PWLinear([0.0, 0.3, 1.0], [0.0, 1.0, 0.0])
    g = PWLinear([0.0, 0.7, 1.0], [1.0, 0.0, 1.0])
    h = f - g
    x = np.linspace(0, 1, 101)
    assert np.allclose(h(x), f(x) - g(x), atol=1e-15)
    assert set(h.x) == {0.0, 0.3, 0.7, 1.0}
    assert (f * 2)(0.3) == 2.0


def test_lip_norm():
    f = PWLinear([0.0, 0.5, 1.0], [0.0, 0.25, 0.0])
    assert f.lip() == pytest.approx(0.5)
    assert f.lip_norm() == pytest.approx(0.5)
    assert PWLinear.constant(-0.7).lip_norm() == pytest.approx(0.7)


def test_csv_roundtrip():
    f = random_pw(np.random.default_rng(3))
    g = PWLinear.from_csv(f.to_csv())
    assert np.array_equal(f.x, g.x) and np.array_equal(f.v, g.v)


def test_step_sup_distance_exact():
    f = PWLinear([0.0, 1.0], [0.0, 1.0])
    s = StepFunction([0.0, 0.5, 1.0], [0.25, 0.75])
    assert s.sup_distance(f) == pytest.approx(0.25)
    x = np.linspace(0, 1, 100001)
    assert s.sup_distance(f) >= np.max(np.abs(f(x) - s(x))) - 1e-12


def test_block_function_ops():
    b = BlockFunction([PWLinear.constant(1.0), PWLinear.zero()])
    c = b + (-b)
    assert c.M == 2 and all(blk.sup_norm() == 0 for blk in c.blocks)


def test_trigpoly_merges_and_evaluates():
    p = TrigPoly([[1, 0], [1, 0], [0, 2]], [1.0, 2.0, 1j])
    assert p.coefficient((1, 0)) == 3.0
    x = np.array([0.1, 0.3])
    val = 3 * np.exp(2j * np.pi * 0.1) + 1j * np.exp(2j * np.pi * 0.6)
    assert p(x) == pytest.approx(val, abs=1e-14)
    assert p.norm_l2() == pytest.approx(np.sqrt(10))


def test_trigpoly_csv_roundtrip_and_restrict():
    p = TrigPoly([[1, -1], [0, 0], [2, 3]], [1 + 2j, -0.5, 3j])
    q = TrigPoly.from_csv(p.to_csv())
    assert p.as_dict() == q.as_dict()
    r = p.restrict(np.array([[0, 0], [2, 3]]))
    assert r.as_dict() == {(0, 0): -0.5 + 0j, (2, 3): 3j}


def test_trigpoly_dimension_mismatch():
    with pytest.raises((IncompatibleElementError, ValueError)):
        TrigPoly([[1]], [1.0]) + TrigPoly([[1, 0]], [1.0])
