import math
from fractions import Fraction

import numpy as np
import pytest

from ibc.core import NormSpec
from ibc.elements import BlockFunction, PWLinear
from ibc.experiments import sobolev_cone_member
from ibc.instances_1d import (
    InfeasibleError,
    bisection_adversarial_pair,
    bisection_algorithm,
    bisection_limit,
    bisection_solution_enclosure,
    bisection_z,
    kurtosis_adversarial,
    product_adaptive,
    product_adversarial,
    product_algorithm,
    product_allocation,
    product_error,
    random_lip_function,
    sobolev_cone_solver,
    sobolev_error_bound,
    sobolev_interp,
)

LIP = NormSpec("Lip")


def random_w12_unit(rng, pieces=12):
    x = np.concatenate([[0.0], np.sort(rng.random(pieces - 1)), [1.0]])
    x = np.unique(x)
    f = PWLinear(x, rng.standard_normal(x.size) * rng.exponential())
    return f * (1.0 / f.norm_w12())


# --------------------------------------------------------------------------
# Sobolev


def test_interp_reproduces_affine():
    f = PWLinear([0.0, 1.0], [-0.3, 2.1])
    for n in (1, 3, 10):
        assert (f - sobolev_interp(f, n)).norm_l2() == pytest.approx(0.0, abs=1e-15)


def test_interp_hat_off_grid():
    f = PWLinear([0.0, 0.37, 1.0], [0.0, 1.0, 0.0])
    for n in (2, 5, 9):
        res = (f - sobolev_interp(f, n)).norm_l2()
        assert 0 < res <= f.deriv_l2() / (math.pi * n)


def test_interp_from_values_and_bound_halves():
    g = sobolev_interp([0.0, 1.0, 0.0])
    assert g(0.5) == 1.0 and g(0.25) == 0.5
    for n in (1, 4, 50):
        assert sobolev_error_bound(2 * n) == pytest.approx(sobolev_error_bound(n) / 2, rel=1e-15)


def test_interp_certified_bound_random_unit_ball():
    rng = np.random.default_rng(0)
    for i in range(1000):
        f = random_w12_unit(rng)
        n = int(rng.integers(1, 40))
        assert (f - sobolev_interp(f, n)).norm_l2() <= sobolev_error_bound(n) * f.norm_w12() * (1 + 1e-12)


def test_solver_constant_function():
    alg = sobolev_cone_solver(0.05, 2.0)
    f = PWLinear.constant(1.0)
    out, rec = alg.run(f)
    assert (f - out).norm_l2() <= 0.05
    assert rec.n < 1000


def test_solver_integrate():
    rng = np.random.default_rng(1)
    eps = 0.01
    alg = sobolev_cone_solver(eps, 3.0)
    f = sobolev_cone_member(rng, 3.0)
    val, cost = alg.integrate(f)
    out, rec = alg.run(f)
    assert cost == rec.n
    assert abs(f.integral() - val) <= (f - out).norm_l2() + 1e-15


def test_solver_argument_checks():
    with pytest.raises(ValueError):
        sobolev_cone_solver(0.0, 1.0)
    with pytest.raises(ValueError):
        sobolev_cone_solver(0.1, -1.0)


# --------------------------------------------------------------------------
# bisection


def test_bisection_identity():
    f = PWLinear([0.0, 1.0], [0.0, 1.0])
    for n in range(1, 30):
        z, cost = bisection_z(f, n)
        assert abs(z - Fraction(1, 4)) <= Fraction(1, 2**n)
        assert cost == n + 1
    assert bisection_z(f, 0) == (Fraction(1, 4), 0)


def test_bisection_constant_goes_left():
    f = PWLinear.constant(0.7)
    a, b = bisection_limit(f, 50)
    assert a == 0 and b == Fraction(1, 2**51)
    assert bisection_z(f, 5) == bisection_z(f, 5)
    assert bisection_z(f, 5)[0] == Fraction(1, 2**6)


def test_bisection_error_exponential_on_unit_ball():
    rng = np.random.default_rng(2)
    for _ in range(50):
        f = random_lip_function(rng)
        lo, hi = bisection_solution_enclosure(f)
        s = (float(lo) + float(hi)) / 2
        for n in (1, 4, 10, 20):
            alg = bisection_algorithm(n)
            out, rec = alg.run(f)
            assert rec.n == n + 2
            assert abs(float(out) - s) <= f.lip() * 2.0**-n + 1e-15


def test_bisection_pair_equispaced():
    for n in (1, 2, 5, 16, 33):
        nodes = [Fraction(j, n) for j in range(n)]
        f, g, info = bisection_adversarial_pair(nodes, n, return_info=True)
        assert not info["fallback"]
        for x in nodes:
            assert f(x) == g(x)
        sf = (sum(map(float, bisection_solution_enclosure(f))) / 2)
        sg = (sum(map(float, bisection_solution_enclosure(g))) / 2)
        assert abs(sf - sg) == pytest.approx(1 / (4 * n), abs=1e-12)
        for h in (f, g):
            assert h.sup_norm() <= 1 and h.lip() <= 1
            slopes = np.diff(h.v) / np.diff(h.x)
            assert np.all(np.isclose(slopes, 0) | np.isclose(slopes, 1))
        # any fixed algorithm answers both the same, so it errs by >= 1/(8n)
        assert max(abs(sf - (sf + sg) / 2), abs(sg - (sf + sg) / 2)) >= 1 / (8 * n) - 1e-12


def test_bisection_pair_needs_n_nodes():
    with pytest.raises(ValueError):
        bisection_adversarial_pair([0.1, 0.2], 3)


# --------------------------------------------------------------------------
# product space


def test_product_all_zero():
    M, n = 4, 20
    f = BlockFunction([PWLinear.zero() for _ in range(M)])
    approx, cost = product_adaptive(f, n, M)
    assert cost == M and product_error(f, approx) == 0.0


def test_product_single_block():
    M, n = 3, 43
    f = BlockFunction([PWLinear([0.0, 1.0], [0.0, 1.0]), PWLinear.zero(), PWLinear.zero()])
    assert LIP(f.blocks[0]) == 1.0
    approx, cost = product_adaptive(f, n, M)
    assert cost == M + math.ceil((n - M) / 2)
    assert product_error(f, approx) <= 2 / (n - M)


def test_product_budget_and_error_random():
    rng = np.random.default_rng(3)
    for _ in range(100):
        M = int(rng.integers(1, 8))
        n = M + int(rng.integers(1, 200))
        w = rng.dirichlet(np.ones(M)) * rng.uniform(0, 1)
        f = BlockFunction([random_lip_function(rng) * float(wi) for wi in w])
        norms = [LIP(b) for b in f.blocks]
        assert sum(norms) <= 1 + 1e-12
        alloc = product_allocation(norms, n, M)
        active = sum(1 for a in alloc if a)
        assert sum(alloc) <= sum(norms) * (n - M) / 2 + active <= n - M + 1e-9
        approx, cost = product_adaptive(f, n, M)
        assert cost == M + sum(alloc) <= n
        assert product_error(f, approx) <= 2 / (n - M) + 1e-15


def test_product_rejects_small_budget():
    with pytest.raises(ValueError):
        product_algorithm(3, 3)


def test_product_adversarial():
    n = 64
    M = n // 2
    counts = [n // M] * M
    f = product_adversarial(counts, M, n)
    i = next(j for j, b in enumerate(f.blocks) if b.sup_norm() > 0)
    pts = (2 * np.arange(counts[i]) + 1) / (2 * counts[i])
    assert np.all(f.blocks[i](pts) == 0)
    assert f.blocks[i].sup_norm() >= M / (2 * n) == 0.25
    assert sum(LIP(b) for b in f.blocks) <= 1
    # f and -f agree on every measurement: block norms and samples
    g = f * -1.0
    assert [LIP(b) for b in f.blocks] == [LIP(b) for b in g.blocks]
    assert np.all(g.blocks[i](pts) == 0)
    assert 4 / n < 0.25


def test_product_adversarial_from_point_sets():
    pts = [np.array([0.1, 0.9]), np.array([0.5])]
    f = product_adversarial(pts, 2, 6)
    assert f.blocks[1](0.5) == 0 and f.blocks[1].sup_norm() == pytest.approx(0.5)


# --------------------------------------------------------------------------
# kurtosis


def test_kurtosis_single_point():
    eps, delta = 0.3, 0.1
    f = kurtosis_adversarial([0.5], eps, delta)
    assert f(0.5) == 0 and f(0.0) == 0 and f(1.0) == 0
    plateau = np.diff(f.x)[(f.v[:-1] == 4 * eps) & (f.v[1:] == 4 * eps)].sum()
    assert plateau >= 1 - delta
    assert f.norm_l4() <= 4 * eps
    assert f.norm_l2() >= 4 * eps * math.sqrt(1 - delta)
    assert f.norm_l4() <= (1 - delta) ** -0.5 * f.norm_l2()


def test_kurtosis_random_points():
    rng = np.random.default_rng(4)
    for n in (1, 10, 100):
        pts = rng.random(n)
        f = kurtosis_adversarial(pts, 0.01, 0.01)
        assert np.all(f(pts) == 0)
        assert f.norm_l2() >= 0.04 * math.sqrt(0.99)
        # against {f, 0} any fixed algorithm errs by at least 2 eps (1 - delta)
        assert f.integral() / 2 >= 2 * 0.01 * (1 - 0.01)


def test_kurtosis_infeasible():
    with pytest.raises(InfeasibleError):
        kurtosis_adversarial(np.linspace(0, 1, 10**4), 0.1, 1e-9)


def test_bisection_pair_without_free_interval():
    # n nodes j/(2(n+1)) inside (0, 1/2): widest free gap is 1/(2(n+1)) < 1/(2n)
    for n in (1, 3, 10):
        nodes = [j / (2 * (n + 1)) for j in range(1, n + 1)]
        f, g, info = bisection_adversarial_pair(nodes, n, return_info=True)
        assert info["fallback"]
        assert all(f(x) == g(x) for x in nodes)
        sf = sum(map(float, bisection_solution_enclosure(f))) / 2
        sg = sum(map(float, bisection_solution_enclosure(g))) / 2
        assert abs(sf - sg) == pytest.approx(1 / (4 * (n + 1)), rel=1e-12)


def test_bisection_pair_random_nodes_lower_bound():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(1, 30))
        nodes = list(0.5 * rng.random(n))
        f, g, info = bisection_adversarial_pair(nodes, n, return_info=True)
        assert all(f(x) == g(x) for x in nodes)
        gap = info["gap"]
        assert gap >= (1 / (4 * n) if not info["fallback"] else 1 / (4 * (n + 1))) * (1 - 1e-12)
