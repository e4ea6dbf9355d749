import math

import numpy as np
import pytest

from ibc.cone import (
    ConeSpec,
    CoordinateConeInstance,
    SolverFamily,
    UnsolvableAtCapError,
    cone_contains,
    fixed_cardinality_unsolvability_demo,
    required_cardinality,
    rescale_information,
    sampled_diameter_proxy,
    two_step_algorithm,
)
from ibc.core import InformationMap, InputSetSpec, LinearFunctional, NormSpec, PointEvaluation, lp
from ibc.elements import PWLinear
from ibc.experiments import sobolev_cone_member
from ibc.instances_1d import (
    kurtosis_adversarial,
    kurtosis_cone,
    sawtooth,
    sobolev_algorithm,
    sobolev_cone,
    sobolev_cone_solver,
    sobolev_family,
)

L2 = NormSpec("L2")


def test_cone_contains_examples():
    cone = sobolev_cone(2.0)
    assert cone_contains(PWLinear.zero(), cone)
    assert cone_contains(PWLinear.constant(3.0), cone)
    # sawtooth: |f'|_2 = 2 n h, |f|_2 = h / sqrt(3), ratio 2 sqrt(3) n
    f = sawtooth(3)
    assert cone.ratio(f) == pytest.approx(6 * math.sqrt(3), rel=1e-13)
    assert not cone_contains(f, cone)
    assert cone_contains(f, sobolev_cone(6 * math.sqrt(3) * (1 + 1e-12)))


def test_cone_closed_under_scaling():
    rng = np.random.default_rng(0)
    cone = sobolev_cone(4.0)
    for _ in range(20):
        f = sobolev_cone_member(rng, 4.0)
        assert cone.contains(f, rtol=1e-12)
        for lam in (0.0, 1e-6, 3.0, 1e5):
            assert cone.contains(f * lam, rtol=1e-12)


def test_cone_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        ConeSpec(lambda f: f, L2, L2, 0.0)


def test_required_cardinality_examples():
    assert required_cardinality(2.0, 1.0, 1.0, lambda k: 1.0 / k) == 1
    assert required_cardinality(0.1, 2.0, 1.0, lambda k: 1 / (np.pi * k)) == math.ceil(40 / np.pi) == 13


def test_required_cardinality_minimal_vs_linear_scan():
    rng = np.random.default_rng(1)
    for _ in range(200):
        c, a = rng.uniform(0.1, 5), rng.uniform(0.7, 2)
        e = lambda k: c / k**a  # noqa: E731
        eps, t, pn = rng.uniform(1e-3, 1), rng.uniform(0.5, 5), rng.uniform(0.1, 3)
        k = required_cardinality(eps, t, pn, e, n_max=10**8)
        thr = eps / (2 * t * pn)
        # closed-form inverse, then fix float rounding by a local scan
        guess = max(1, math.ceil((c / thr) ** (1 / a)) - 3)
        while guess > 1 and e(guess - 1) <= thr:
            guess -= 1
        while e(guess) > thr:
            guess += 1
        assert k == guess


def test_required_cardinality_cap():
    with pytest.raises(UnsolvableAtCapError):
        required_cardinality(1e-3, 1.0, 1.0, lambda k: 1.0, n_max=64)
    with pytest.raises(ValueError):
        required_cardinality(0.1, 1.0, 0.0, lambda k: 1.0 / k)


def test_two_step_zero_input():
    for t in (1.0, 4.0):
        alg = sobolev_cone_solver(0.1, t)
        out, rec = alg.run(PWLinear.zero())
        assert out.norm_l2() == 0.0 and rec.n == alg.m


def test_two_step_rejects_weak_pilot():
    cone = ConeSpec(lambda f: f, NormSpec("W12"), L2, 2.0)
    with pytest.raises(ValueError):
        two_step_algorithm(sobolev_algorithm(1), 1 / np.pi, sobolev_family(), cone, 0.1)


@pytest.mark.parametrize("t", [1.0, 4.0])
@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
def test_two_step_error_and_cost_structure(t, eps):
    rng = np.random.default_rng(int(100 * t + 1 / eps))
    alg = sobolev_cone_solver(eps, t)
    fam = alg.family
    for _ in range(5):
        f = sobolev_cone_member(rng, t) * rng.uniform(0.1, 10)
        rep = alg.report(f, lambda g: g, L2)
        assert rep["residual_norm"] <= eps
        k = rep["k"]
        assert rep["cost"] == rep["m"] + k
        thr = eps / (2 * alg.cone.t * rep["pilot_norm"])
        assert fam.error(k) <= thr
        assert k == fam.k_min or fam.error(k - 1) > thr
        assert rep["pilot_norm"] <= 1.5 * f.norm_l2() + 1e-12
        assert rep["cost"] <= rep["bound_rhs"]


def test_two_step_positive_scaling():
    rng = np.random.default_rng(3)
    alg = sobolev_cone_solver(1e-2, 2.0)
    f = sobolev_cone_member(rng, 2.0)
    base = alg.plan(alg.info.measure(f).data)
    for lam in (0.5, 2.0, 7.0):
        _, rec = alg.run(f * lam)
        k, q, _ = alg.plan(rec.data)
        assert q.norm_l2() == pytest.approx(lam * base[1].norm_l2(), rel=1e-12)
        expect = required_cardinality(alg.eps, alg.cone.t, lam * base[1].norm_l2(), alg.family.error)
        assert k == expect


def test_rescale_identity_and_nonadaptive():
    inst = CoordinateConeInstance()
    rng = np.random.default_rng(4)
    same = rescale_information(inst.info, 1.0)
    for _ in range(100):
        f = rng.uniform(-3, 3, inst.m)
        a, b = inst.info.measure(f), same.measure(f)
        assert a.measurements == b.measurements and a.data == b.data
    fixed = InformationMap.fixed([LinearFunctional([1.0, 0, 0]), LinearFunctional([0, 1.0, 0])])
    r = rescale_information(fixed, 10.0)
    f = rng.standard_normal(3)
    assert r.measure(f).measurements == fixed.measure(f).measurements


@pytest.mark.parametrize("r", [2.0, 10.0])
def test_rescale_diameter_proxy(r):
    inst = CoordinateConeInstance(m=4, t=2.0)
    rng = np.random.default_rng(5)
    pairs = inst.matched_pairs(rng, 400, a_max=1.0)
    base = sampled_diameter_proxy(inst.info, inst.S, pairs, inst.norm)
    assert base == pytest.approx(2 * inst.t)
    scaled = [(f / r, g / r) for f, g in pairs]
    proxy = sampled_diameter_proxy(rescale_information(inst.info, r), inst.S, scaled, inst.norm)
    assert proxy <= base / r + 1e-12


def test_rescale_composes():
    inst = CoordinateConeInstance(m=5, t=3.0)
    rng = np.random.default_rng(6)
    two = rescale_information(rescale_information(inst.info, 2.0), 5.0)
    ten = rescale_information(inst.info, 10.0)
    for _ in range(300):
        f = rng.uniform(-0.3, 0.3, inst.m)
        a, b = two.measure(f), ten.measure(f)
        assert a.measurements == b.measurements and a.data == b.data


def test_unsolvability_refuses_ball():
    ball = InputSetSpec.ball(lp(2))
    with pytest.raises(ValueError):
        fixed_cardinality_unsolvability_demo(ball, InformationMap.fixed([]), lambda f: f, [], [0.1], lp(2))


def test_unsolvability_kurtosis():
    nodes = np.linspace(0, 1, 11)
    f = kurtosis_adversarial(nodes, eps=0.25, delta=0.1)
    info = InformationMap.fixed([PointEvaluation(float(x)) for x in nodes])
    rep = fixed_cardinality_unsolvability_demo(kurtosis_cone(1.1), info, lambda g: g.integral(),
                                               [(PWLinear.zero(), f)], [1e-3, 1.0, 1e3], abs)
    assert not rep["inconclusive"]
    for lev in rep["levels"]:
        assert lev["in_cone"] and lev["info_equal"] and lev["gap"] >= 2 * lev["eps"]


def test_unsolvability_sobolev_sawtooth():
    n = 8
    info = sobolev_algorithm(n).info
    saw = sawtooth(n)
    cone = sobolev_cone(2 * math.sqrt(3) * n * 1.01)
    rep = fixed_cardinality_unsolvability_demo(cone, info, lambda g: g, [(PWLinear.zero(), saw)],
                                               [1e-2, 1.0, 100.0], L2)
    assert not rep["inconclusive"]
    for lev in rep["levels"]:
        assert lev["in_cone"] and lev["info_equal"] and lev["gap"] >= 2 * lev["eps"]


def test_unsolvability_inconclusive_flag():
    info = sobolev_algorithm(4).info
    rep = fixed_cardinality_unsolvability_demo(sobolev_cone(1.0), info, lambda g: g,
                                               [(PWLinear.zero(), PWLinear.zero())], [0.1], L2)
    assert rep["inconclusive"] and rep["rejected_seeds"] == 1


def test_solver_family_caches_builder():
    calls = []
    fam = SolverFamily(lambda k: calls.append(k) or sobolev_algorithm(k), lambda k: 1 / k)
    fam.algorithm(3)
    fam.algorithm(3)
    assert calls == [3]
