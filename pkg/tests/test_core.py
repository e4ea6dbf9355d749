import numpy as np
import pytest

from ibc.core import (
    AdaptiveAlgorithm,
    InformationMap,
    InputSetSpec,
    LinearFunctional,
    MeasurementError,
    NormSpec,
    PointEvaluation,
    TerminationError,
    element_from_dict,
    element_to_dict,
    linear_information,
    lp,
    lp_ball_sampler,
    measurement_matrix,
    minkowski_functional,
    run_algorithm,
    worst_case_error_sampled,
)
from ibc.elements import PWLinear, TrigPoly
from ibc.recovery import kashin_linear_algorithm


def test_minkowski_examples():
    assert minkowski_functional(lp(2), np.array([3.0, 4.0])) == 5.0
    assert minkowski_functional(NormSpec("W12"), PWLinear.zero()) == 0.0
    assert minkowski_functional(NormSpec("W12"), PWLinear([0, 1], [0, 1])) == pytest.approx(2 / np.sqrt(3))
    assert minkowski_functional(lp(1), np.array([1.0, -1.0]), radius=2.0) == 1.0


def test_minkowski_absolute_homogeneity():
    rng = np.random.default_rng(0)
    for norm in (lp(1), lp(2), lp(np.inf)):
        for _ in range(300):
            f = rng.standard_normal(5) + 1j * rng.standard_normal(5)
            lam = rng.standard_normal() + 1j * rng.standard_normal()
            a = minkowski_functional(norm, lam * f)
            assert a == pytest.approx(abs(lam) * minkowski_functional(norm, f), rel=1e-12)
    for _ in range(100):
        x = np.concatenate([[0.0], np.sort(rng.random(4)), [1.0]])
        f = PWLinear(x, rng.standard_normal(6))
        lam = rng.standard_normal()
        for kind in ("L2", "L4", "W12", "Linf", "Lip"):
            n = NormSpec(kind)
            assert n(f * lam) == pytest.approx(abs(lam) * n(f), rel=1e-12)


def test_measurements_positively_homogeneous():
    rng = np.random.default_rng(1)
    f = PWLinear([0.0, 0.4, 1.0], [0.2, -1.0, 0.5])
    for _ in range(50):
        lam = rng.exponential()
        x = rng.random()
        L = PointEvaluation(x)
        assert L(f * lam) == pytest.approx(lam * L(f), rel=1e-12, abs=1e-15)
        c = rng.standard_normal(3)
        v = rng.standard_normal(3)
        assert LinearFunctional(c)(lam * v) == pytest.approx(lam * LinearFunctional(c)(v), rel=1e-12)
    p = TrigPoly([[1, 0]], [2.0])
    assert PointEvaluation((0.25, 0.0))(p) == pytest.approx(2j)


def test_stop_at_step_one_and_zero_recovery():
    info = InformationMap(lambda j, d: LinearFunctional([1.0, 0.0]), lambda d: len(d) >= 1, 5)
    out, rec = run_algorithm(AdaptiveAlgorithm(info, lambda d: 0.0), np.array([3.0, 4.0]))
    assert out == 0.0 and rec.n == 1 and rec.data == (3.0,)


def test_cap_raises_termination_error():
    info = InformationMap(lambda j, d: LinearFunctional([1.0]), lambda d: False, n_max=7)
    with pytest.raises(TerminationError):
        info.measure(np.array([1.0]))


def test_identity_problem_spline_recovery_exact_on_span():
    rng = np.random.default_rng(2)
    N = rng.standard_normal((3, 5))
    alg = AdaptiveAlgorithm(linear_information(N), lambda d: np.linalg.pinv(N) @ np.asarray(d))
    f = N.T @ rng.standard_normal(3)
    assert np.allclose(alg(f), f, atol=1e-12)


def test_nonadaptive_sequence_identical_and_deterministic():
    rng = np.random.default_rng(3)
    info = linear_information(rng.standard_normal((2, 4)))
    a, b = info.measure(rng.standard_normal(4)), info.measure(rng.standard_normal(4))
    assert a.measurements == b.measurements
    f = rng.standard_normal(4)
    assert info.measure(f).to_dict() == info.measure(f).to_dict()
    assert measurement_matrix(info).shape == (2, 4)


def test_measurement_matrix_rejects_point_evaluations():
    with pytest.raises(MeasurementError):
        measurement_matrix(InformationMap.fixed([PointEvaluation(0.5)]))


def test_worst_case_sampled_exact_algorithm_is_zero():
    S = np.eye(3)
    alg = lambda f: S @ f  # noqa: E731
    ball = InputSetSpec.ball(lp(2))
    assert worst_case_error_sampled(alg, lambda f: S @ f, ball, lp_ball_sampler(3, 2), 200, 0) == 0.0


def test_worst_case_sampled_kashin_vertices():
    alg, _ = kashin_linear_algorithm(4, 2)
    E = [s * e for e in np.eye(4) for s in (1, -1)]
    err = worst_case_error_sampled(alg, lambda f: f, InputSetSpec.ball(lp(1)), E, len(E))
    assert err == pytest.approx(np.sqrt(0.5), abs=1e-14)


def test_worst_case_sampled_below_grid_oracle():
    rng = np.random.default_rng(4)
    S, N = rng.standard_normal((3, 3)), rng.standard_normal((1, 3))
    P = np.linalg.pinv(N)
    alg = lambda f: S @ P @ (N @ f)  # noqa: E731
    sampled = worst_case_error_sampled(alg, lambda f: S @ f, InputSetSpec.ball(lp(2)), lp_ball_sampler(3, 2),
                                       500, rng)
    th, ph = np.meshgrid(np.linspace(0, np.pi, 400), np.linspace(0, 2 * np.pi, 800))
    G = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], -1).reshape(-1, 3)
    grid = np.max(np.linalg.norm(G @ (S - S @ P @ N).T, axis=1))
    assert sampled <= grid + 1e-3


def test_sampler_rejections_counted():
    pool = [np.array([2.0, 0.0]), np.array([0.5, 0.0])]
    err, rej = worst_case_error_sampled(lambda f: 0 * f, lambda f: f, InputSetSpec.ball(lp(2)), pool, 2,
                                        return_rejected=True)
    assert rej == 1 and err == 0.5


def test_lp_ball_sampler_in_ball():
    rng = np.random.default_rng(5)
    for p in (1, 2, np.inf):
        X = lp_ball_sampler(4, p)(rng, 500)
        assert np.all(np.linalg.norm(X, ord=p, axis=1) <= 1 + 1e-12)


def test_element_json_roundtrip():
    for e in (np.array([1.0, 2.0]), np.array([1 + 1j, 2.0]), PWLinear([0, 0.5, 1], [1, 2, 3]),
              TrigPoly([[1, 2]], [1 - 1j])):
        back = element_from_dict(element_to_dict(e))
        if isinstance(e, np.ndarray):
            assert np.array_equal(back, e)
        else:
            assert back == e or back.as_dict() == e.as_dict()


def test_ball_cone_spec_validation():
    with pytest.raises(ValueError):
        InputSetSpec.ball(lp(2), radius=0)
    with pytest.raises(ValueError):
        InputSetSpec("cone")
