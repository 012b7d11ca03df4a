import math

import numpy as np
import pytest

from lapdual import (
    BracketError,
    DualCertificate,
    InputError,
    MultiPoly,
    QuadratureSpec,
    SublevelProblem,
    auto_enclosing_radius,
    dual_constant,
    dual_integral,
    final_value_check,
    find_lambda_for_target,
    initial_value_check,
    lambda_y_homogeneous,
    laplace_of_v,
    laplace_transform_by_quadrature,
    monte_carlo_sublevel,
    v_dual_homogeneous,
    v_homogeneous_closed_form,
    v_polynomial,
)

SPEC = QuadratureSpec()


@pytest.fixture
def disc_problem(disc_g, one_2d):
    return SublevelProblem(2, one_2d, disc_g, nonneg_f=True)


@pytest.fixture
def interval_problem(interval_g, one_1d):
    return SublevelProblem(1, one_1d, interval_g, nonneg_f=True)


def test_lambda_y_interval():
    assert lambda_y_homogeneous(1, 0, 2, 1.0) == pytest.approx(math.pi / 4.0, rel=1e-12)


def test_lambda_y_balanced_degrees_is_reciprocal():
    for y in (0.25, 1.0, 3.0, 10.0):
        assert abs(lambda_y_homogeneous(2, 0, 2, y) * y - 1.0) <= 1e-14
        assert abs(lambda_y_homogeneous(1, 3, 4, y) * y - 1.0) <= 1e-14


def test_lambda_y_gamma_two_over_five():
    assert lambda_y_homogeneous(2, 0, 2, 5.0) == pytest.approx(0.2, rel=1e-13)


def test_lambda_y_validation():
    with pytest.raises(InputError):
        lambda_y_homogeneous(0, 0, 2, 1.0)
    with pytest.raises(InputError):
        lambda_y_homogeneous(1, -1, 2, 1.0)
    with pytest.raises(InputError):
        lambda_y_homogeneous(1, 0, 0.5, 1.0)
    with pytest.raises(InputError):
        lambda_y_homogeneous(1, 0, 2, 0.0)


def test_dual_constant_over_y_grid():
    const = dual_constant(2, 0, 4)
    for y in np.geomspace(0.05, 50.0, 20):
        lam = lambda_y_homogeneous(2, 0, 4, float(y))
        assert abs(float(y) * lam - const) <= 1e-12 * const


def test_closed_form_disc(disc_problem):
    assert v_homogeneous_closed_form(disc_problem, math.pi, 1.0) == pytest.approx(
        math.pi, rel=1e-12
    )


def test_closed_form_at_zero(disc_problem):
    assert v_homogeneous_closed_form(disc_problem, math.pi, 0.0) == 0.0


def test_closed_form_interval(interval_problem):
    value = v_homogeneous_closed_form(interval_problem, math.sqrt(math.pi), 4.0)
    assert value == pytest.approx(4.0, rel=1e-12)  # interval length 2*sqrt(y)


def test_closed_form_requires_degrees(interval_g):
    opaque = SublevelProblem(1, lambda p: np.ones(p.shape[0]), interval_g)
    with pytest.raises(InputError):
        v_homogeneous_closed_form(opaque, 1.0, 1.0)


def test_dual_integral_interval(interval_problem):
    est = dual_integral(interval_problem, math.pi / 4.0, SPEC)
    assert est.engine == "gaussian-quadratic"
    assert est.value == pytest.approx(2.0, rel=1e-12)


def test_dual_integral_disc(disc_problem):
    est = dual_integral(disc_problem, 1.0, SPEC)
    assert est.value == pytest.approx(math.pi, rel=1e-12)


def test_dual_integral_quartic_matches_monte_carlo(quartic_g, one_2d):
    problem = SublevelProblem(2, one_2d, quartic_g, nonneg_f=True)
    lam_1 = lambda_y_homogeneous(2, 0, 4, 1.0)
    est = dual_integral(problem, lam_1, QuadratureSpec(nodes_per_axis=96))
    assert est.engine == "box-gauss-legendre"
    radius = auto_enclosing_radius(quartic_g, 1.0)
    mc = monte_carlo_sublevel(
        one_2d, quartic_g, 2, 1.0, radius,
        QuadratureSpec(engine="monte-carlo", sample_count=2 * 10**6, seed=5),
    )
    assert abs(est.value - mc.value) <= 4.0 * mc.std_error


def test_dual_integral_rejects_negative_g(one_1d):
    g = MultiPoly.monomial(1, (1,))  # x, negative on half the line
    problem = SublevelProblem(1, one_1d, g)
    with pytest.raises(InputError):
        dual_integral(problem, 1.0, SPEC)


def test_dual_integral_rejects_nonpositive_lambda(disc_problem):
    with pytest.raises(InputError):
        dual_integral(disc_problem, 0.0, SPEC)


def test_v_dual_disc_scales(disc_problem):
    cert = v_dual_homogeneous(disc_problem, 3.0, SPEC)
    assert cert.lambda_y == pytest.approx(1.0 / 3.0, rel=1e-13)
    assert cert.v_value == pytest.approx(3.0 * math.pi, rel=1e-10)
    assert cert.method == "dual-gaussian"


def test_v_dual_interval(interval_problem):
    cert = v_dual_homogeneous(interval_problem, 1.0, SPEC)
    assert cert.lambda_y == pytest.approx(math.pi / 4.0, rel=1e-12)
    assert cert.v_value == pytest.approx(2.0, rel=1e-10)


def test_v_dual_quadratic_integrand(disc_g):
    f = disc_g  # f = |x|^2, homogeneous of degree 2
    problem = SublevelProblem(2, f, disc_g, nonneg_f=True)
    cert = v_dual_homogeneous(problem, 1.0, SPEC)
    assert cert.lambda_y == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert cert.v_value == pytest.approx(math.pi / 2.0, rel=1e-10)


def test_dual_identity_against_analytic_oracles(disc_g, interval_g):
    ball_g = MultiPoly(3, {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0})
    instances = [
        (SublevelProblem(2, MultiPoly.constant(2, 1.0), disc_g), lambda y: math.pi * y),
        (SublevelProblem(1, MultiPoly.constant(1, 1.0), interval_g), lambda y: 2.0 * math.sqrt(y)),
        (
            SublevelProblem(3, MultiPoly.constant(3, 1.0), ball_g),
            lambda y: 4.0 / 3.0 * math.pi * y**1.5,
        ),
    ]
    spec = QuadratureSpec(nodes_per_axis=32)
    for problem, oracle in instances:
        for y in (0.5, 1.0, 2.0, 10.0):
            cert = v_dual_homogeneous(problem, y, spec)
            assert abs(cert.v_value - oracle(y)) <= max(1e-6, cert.error_estimate)


def test_v_dual_opaque_nonpolynomial_gauge():
    # g = |x|^3 is positively homogeneous of degree 3 but no polynomial;
    # stated metadata routes the box engine to a principled radius.
    # Oracle: K_y is the ball of radius y^(1/3), so v(y) = pi * y^(2/3).
    g_cubed = lambda p: (p[:, 0] ** 2 + p[:, 1] ** 2) ** 1.5
    f_one = lambda p: np.ones(p.shape[0])
    problem = SublevelProblem(2, f_one, g_cubed, f_degree=0, g_degree=3, nonneg_f=True)
    spec = QuadratureSpec(nodes_per_axis=48)
    for y in (0.5, 1.0, 2.0):
        cert = v_dual_homogeneous(problem, y, spec)
        assert cert.method == "dual-cubature"
        assert cert.v_value == pytest.approx(math.pi * y ** (2.0 / 3.0), rel=1e-9)


def test_v_polynomial_disc_decomposition(disc_g):
    f = MultiPoly(2, {(0, 0): 1.0, (2, 0): 1.0})  # 1 + x1^2
    problem = SublevelProblem(2, f, disc_g)
    value, certs = v_polynomial(problem, 1.0, SPEC)
    assert value == pytest.approx(math.pi + math.pi / 4.0, rel=1e-12)
    assert [c.lambda_y for c in certs] == pytest.approx([1.0, math.sqrt(2.0)], rel=1e-12)
    assert certs[0].v_value == pytest.approx(math.pi, rel=1e-12)  # disc area at y=1
    assert certs[1].v_value == pytest.approx(math.pi / 4.0, rel=1e-12)  # x1^2 over the disc


def test_v_polynomial_odd_integrand_vanishes(disc_g):
    problem = SublevelProblem(2, MultiPoly.monomial(2, (1, 0)), disc_g)
    value, certs = v_polynomial(problem, 1.0, SPEC)
    assert abs(value) <= 1e-12
    assert len(certs) == 1


def test_v_polynomial_zero(disc_g):
    problem = SublevelProblem(2, MultiPoly.zero(2), disc_g)
    value, certs = v_polynomial(problem, 1.0, SPEC)
    assert value == 0.0 and certs == []


def test_v_polynomial_requires_homogeneous_g(one_2d):
    mixed = MultiPoly(2, {(0, 0): 1.0, (2, 0): 1.0})
    problem = SublevelProblem(2, one_2d, mixed)
    with pytest.raises(InputError):
        v_polynomial(problem, 1.0, SPEC)


def test_v_polynomial_requires_polynomial_f(disc_g):
    problem = SublevelProblem(2, lambda p: np.ones(p.shape[0]), disc_g)
    with pytest.raises(InputError):
        v_polynomial(problem, 1.0, SPEC)


def test_polynomial_path_matches_componentwise_duals(disc_g):
    from dataclasses import replace

    f = MultiPoly(2, {(0, 0): 2.0, (2, 0): 1.0, (0, 2): -0.5, (1, 0): 3.0})
    problem = SublevelProblem(2, f, disc_g)
    value, certs = v_polynomial(problem, 1.5, SPEC)
    total = 0.0
    for k, f_k in f.homogeneous_components():
        cert = v_dual_homogeneous(replace(problem, f=f_k, f_degree=k), 1.5, SPEC)
        total += cert.v_value
    assert total == value  # identical engine calls, identical accumulation order


def test_v_polynomial_signed_random_vs_monte_carlo(disc_g):
    # Sign-changing integrands stress the decomposition path: the direct
    # hit-or-miss estimate needs no sign assumption and pins the value.
    rng = np.random.default_rng(2718)
    radius = auto_enclosing_radius(disc_g, 1.0)
    for case in range(4):
        terms = {}
        for _ in range(5):
            exps = (int(rng.integers(0, 3)), int(rng.integers(0, 3)))
            terms[exps] = terms.get(exps, 0.0) + float(rng.normal())
        f = MultiPoly(2, terms)
        problem = SublevelProblem(2, f, disc_g)
        value, _ = v_polynomial(problem, 1.0, SPEC)
        mc = monte_carlo_sublevel(
            f, disc_g, 2, 1.0, radius,
            QuadratureSpec(engine="monte-carlo", sample_count=400_000, seed=100 + case),
        )
        assert abs(value - mc.value) <= 4.0 * mc.std_error + 1e-12


def test_laplace_of_v_interval(interval_problem):
    assert laplace_of_v(interval_problem, 1.0, SPEC) == pytest.approx(
        math.sqrt(math.pi), rel=1e-12
    )


def test_laplace_of_v_disc(disc_problem):
    assert laplace_of_v(disc_problem, 2.0, SPEC) == pytest.approx(math.pi / 4.0, rel=1e-12)


def test_laplace_transform_consistency(interval_problem):
    # y-side quadrature of the analytic v(y) = 2 sqrt(y) versus the
    # whole-space evaluation.
    for lam in (0.5, 1.0, 2.0):
        lhs = laplace_transform_by_quadrature(lambda y: 2.0 * math.sqrt(y), lam)
        rhs = laplace_of_v(interval_problem, lam, SPEC)
        assert lhs == pytest.approx(rhs, rel=1e-6)
        # Closed form: L_v(lam) = sqrt(pi) / lam^(3/2).
        assert lhs == pytest.approx(math.sqrt(math.pi) / lam**1.5, rel=1e-9)


def test_phi_is_nonincreasing(disc_problem, interval_problem):
    for problem in (disc_problem, interval_problem):
        values = [
            dual_integral(problem, float(lam), SPEC).value
            for lam in np.geomspace(1e-2, 1e3, 30)
        ]
        for a, b in zip(values, values[1:]):
            assert b <= a * (1.0 + 1e-9)


def test_phi_nonincreasing_box_engine(quartic_g, one_2d):
    problem = SublevelProblem(2, one_2d, quartic_g, nonneg_f=True)
    spec = QuadratureSpec(nodes_per_axis=48, rel_tol=1e-7)
    values = [
        dual_integral(problem, float(lam), spec).value for lam in np.geomspace(0.1, 10.0, 8)
    ]
    for a, b in zip(values, values[1:]):
        assert b <= a * (1.0 + 1e-6)


def test_find_lambda_interval(interval_problem):
    lam = find_lambda_for_target(interval_problem, 2.0, (1e-3, 1e3), SPEC)
    assert lam == pytest.approx(math.pi / 4.0, rel=1e-8)


def test_find_lambda_disc(disc_problem):
    lam = find_lambda_for_target(disc_problem, math.pi, (1e-3, 1e3), SPEC)
    assert lam == pytest.approx(1.0, rel=1e-8)


def test_find_lambda_bracket_error(disc_problem):
    # target above phi(lo): the range of phi over the bracket is exceeded.
    phi_lo = dual_integral(disc_problem, 1e-3, SPEC).value
    with pytest.raises(BracketError):
        find_lambda_for_target(disc_problem, 2.0 * phi_lo, (1e-3, 1e3), SPEC)


def test_find_lambda_invalid_bracket(disc_problem):
    with pytest.raises(InputError):
        find_lambda_for_target(disc_problem, 1.0, (1.0, 0.5), SPEC)


def test_initial_value_check_decays(interval_problem, disc_problem):
    assert initial_value_check(interval_problem, 1e4, SPEC) == pytest.approx(
        math.sqrt(math.pi / 1e4), rel=1e-10
    )
    assert initial_value_check(disc_problem, 1e6, SPEC) == pytest.approx(
        math.pi * 1e-6, rel=1e-10
    )
    assert initial_value_check(interval_problem, 1e4, SPEC) > initial_value_check(
        interval_problem, 1e6, SPEC
    )


def test_final_value_check_opaque_gaussian_density():
    # f the Gaussian density (opaque), g = x^2 (opaque): both routed
    # through the box engine; phi(lam) = sqrt(pi / (1 + lam)) -> sqrt(pi).
    problem = SublevelProblem(
        1, lambda p: np.exp(-p[:, 0] ** 2), lambda p: p[:, 0] ** 2, nonneg_f=True
    )
    value = final_value_check(problem, 0.01, SPEC)
    assert value == pytest.approx(math.sqrt(math.pi / 1.01), rel=1e-6)


def test_final_value_check_divergent_growth(interval_problem):
    # v(infinity) = +infinity here: phi grows as lambda decreases.
    phi_001 = final_value_check(interval_problem, 0.01, SPEC)
    assert phi_001 == pytest.approx(math.sqrt(100.0 * math.pi), rel=1e-10)
    assert phi_001 > final_value_check(interval_problem, 0.1, SPEC)


def test_problem_metadata_consistency(disc_g, one_2d):
    problem = SublevelProblem(2, one_2d, disc_g)
    assert problem.f_degree == 0
    assert problem.g_degree == 2
    with pytest.raises(InputError):
        SublevelProblem(2, one_2d, disc_g, g_degree=3)
    with pytest.raises(InputError):
        SublevelProblem(2, one_2d, MultiPoly.constant(3, 1.0))
    with pytest.raises(InputError):
        SublevelProblem(2, "not callable", disc_g)


def test_certificate_validation():
    with pytest.raises(InputError):
        DualCertificate(0.0, 1.0, 1.0, "dual-gaussian", 0.0)
    with pytest.raises(InputError):
        DualCertificate(1.0, 0.0, 1.0, "dual-gaussian", 0.0)
    with pytest.raises(InputError):
        DualCertificate(1.0, 1.0, 1.0, "dual-gaussian", -1.0)
