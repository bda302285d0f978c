import mpmath
import numpy as np
import pytest

from concavekit import conclass as cc
from concavekit import pseries as ps
from concavekit.pseries import TruncatedSeries as TS
from concavekit.report import PolarGrid

ALPHAS = (1.25, 1.5, 2.0)
ORDER = 128


def params(a):
    return cc.ConcaveParams(a)


def test_params_guard():
    with pytest.raises(ValueError):
        cc.ConcaveParams(1.0)
    with pytest.raises(ValueError):
        cc.ConcaveParams(2.5)
    assert cc.ConcaveParams(2.5, experimental=True).alpha == 2.5
    with pytest.raises(ValueError):
        cc.ConcaveParams(1.0, experimental=True)


# Schwarz functions: series agree with pointwise values


@pytest.mark.parametrize(
    "omega",
    [
        cc.ConstantSchwarz(0.3 - 0.2j),
        cc.MonomialSchwarz(0.7, 3),
        cc.BlaschkeSchwarz((0.5, -0.3j), 1.1, 0.8),
        cc.SeriesSchwarz((0.2, 0.5, 0.1j)),
        cc.schwarz_with_fixed_origin(0.4j, cc.BlaschkeSchwarz((0.6,), 0.2)),
    ],
    ids=lambda w: w.kind,
)
def test_schwarz_series_matches_values(omega):
    z = 0.6 * np.exp(1j * np.linspace(0, 6, 17))
    s = omega.series(ORDER)
    assert np.allclose(ps.evaluate(s, z), omega(z), atol=1e-12)
    t = 2 * np.pi * np.arange(512) / 512
    assert np.max(np.abs(omega(0.999 * np.exp(1j * t)))) <= 1 + 1e-12


def test_schwarz_guards():
    with pytest.raises(ValueError):
        cc.ConstantSchwarz(1.5)
    with pytest.raises(ValueError):
        cc.BlaschkeSchwarz((1.0,))
    with pytest.raises(ValueError):
        cc.SeriesSchwarz((0.6, 0.6))
    with pytest.raises(ValueError):
        cc.schwarz_with_fixed_origin(1.2, cc.ConstantSchwarz(0))


def test_fixed_origin_value():
    w = cc.schwarz_with_fixed_origin(-0.3 + 0.5j, cc.random_schwarz(np.random.default_rng(0)))
    assert w.origin == pytest.approx(-0.3 + 0.5j, abs=1e-15)


def test_random_schwarz_is_reproducible():
    a = cc.random_schwarz(np.random.default_rng(5))
    b = cc.random_schwarz(np.random.default_rng(5))
    assert a == b


# constructions


@pytest.mark.parametrize("alpha", ALPHAS)
def test_center_function(alpha):
    f = cc.center_function(params(alpha), ORDER)
    fp = ps.binomial_series(-(alpha + 1), ORDER, -1.0)
    assert f.fprime.max_abs_diff(fp) < 1e-12
    ref = (ps.binomial_series(-alpha, ORDER, -1.0) - 1) / alpha
    assert f.f.max_abs_diff(ref) < 1e-12
    assert f.coeff(2) == pytest.approx((alpha + 1) / 2)


def test_constant_minus_one_gives_half_plane_map():
    f = cc.from_schwarz(params(2.0), cc.ConstantSchwarz(-1.0), ORDER)
    assert f.f.max_abs_diff(TS(np.r_[0.0, np.ones(ORDER)])) < 1e-12


def test_constant_one_gives_koebe_at_alpha2():
    f = cc.from_schwarz(params(2.0), cc.ConstantSchwarz(1.0), ORDER)
    assert f.f.max_abs_diff(TS(np.arange(ORDER + 1.0))) < 1e-10
    g = cc.extremal_g_theta(params(2.0), 0.0, ORDER)
    assert f.f.max_abs_diff(g.f) < 1e-10


def test_g_pi_and_g_0():
    g = cc.extremal_g_theta(params(1.5), np.pi, ORDER)
    assert g.f.max_abs_diff(TS(np.r_[0.0, np.ones(ORDER)])) == 0
    g0 = cc.extremal_g_theta(params(2.0), 0.0, ORDER)
    assert g0.f.max_abs_diff(TS(np.arange(ORDER + 1.0))) < 1e-12


@pytest.mark.parametrize("theta", [0.0, np.pi / 2, np.pi])
def test_g_theta_second_coefficient(theta):
    alpha = 1.5
    g = cc.extremal_g_theta(params(alpha), theta, ORDER)
    assert g.coeff(2) == pytest.approx((alpha + 1 + (alpha - 1) * np.exp(1j * theta)) / 2, abs=1e-14)


@pytest.mark.parametrize("alpha,theta", [(1.25, 0.4), (1.5, 2.0), (2.0, 5.5)])
def test_g_theta_against_mpmath_taylor(alpha, theta):
    c = mpmath.expj(theta)

    def fprime(z):
        return (1 + c * z) ** (alpha - 1) / (1 - z) ** (alpha + 1)

    mpmath.mp.dps = 30
    ref = mpmath.taylor(fprime, 0, 10)
    g = cc.extremal_g_theta(params(alpha), theta, 10)
    assert np.allclose(g.fprime.coeffs, np.array([complex(v) for v in ref]), atol=1e-13)


def test_g_theta_closed_form_matches_series():
    for alpha in ALPHAS:
        for theta in (0.0, 1.0, 3.0, np.pi):
            g = cc.extremal_g_theta(params(alpha), theta)
            z = 0.8 * np.exp(1j * np.linspace(0, 6.2, 9))
            assert np.allclose(g.closed_f(z), ps.evaluate(g.f, z), atol=1e-10)
            assert np.allclose(g.closed_fprime(z), ps.evaluate(g.fprime, z), atol=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_from_schwarz_pre_schwarzian_matches_closed_form(seed):
    rng = np.random.default_rng(seed)
    alpha = ALPHAS[seed % 3]
    omega = cc.random_schwarz(rng)
    f = cc.from_schwarz(params(alpha), omega)
    z = 0.85 * np.exp(1j * np.linspace(0, 6.2, 11))
    series_T = ps.evaluate(f.fsecond, z) / ps.evaluate(f.fprime, z)
    assert np.allclose(series_T, f.closed_T(z), rtol=1e-9)
    # P_f reproduces the generating Schwarz function
    P = cc._p_values(alpha, z, series_T)
    assert np.allclose(P, (1 - z * omega(z)) / (1 + z * omega(z)), atol=1e-8)


def test_normalization_enforced():
    with pytest.raises(cc.NormalizationError):
        cc.candidate(params(2.0), TS([0, 2, 1]))
    with pytest.raises(cc.NormalizationError):
        cc.from_kaplan(params(2.0), TS([2, 1]))


def test_evaluation_beyond_series_radius():
    f = cc.from_schwarz(params(1.5), cc.BlaschkeSchwarz((0.3,), 0.5))
    with pytest.raises(ps.EvaluationRadiusError):
        f.f_at(0.95)
    assert np.isfinite(f.T_at(0.99))


# membership


def test_membership_g_pi():
    rep = cc.membership_test(cc.extremal_g_theta(params(2.0), np.pi))
    assert rep.passed
    z = PolarGrid.default().points()
    assert rep.details[0]["min_re_P"] == pytest.approx(np.min(((1 + z) / (1 - z)).real), rel=1e-9)


def test_membership_random_members():
    rng = np.random.default_rng(11)
    for i in range(100):
        f = cc.from_schwarz(params(ALPHAS[i % 3]), cc.random_schwarz(rng))
        assert cc.membership_test(f).passed


def test_membership_rejects_large_a2():
    f = cc.candidate(params(2.0), TS.from_polynomial([0, 1, 5], ps.DEFAULT_ORDER))
    rep = cc.membership_test(f)
    assert not rep.passed and rep.margin < 0


# Kaplan signature


def test_kaplan_signature_examples():
    z = TS.variable(ORDER)
    assert cc.kaplan_signature(cc.center_function(params(1.5), ORDER)).max_abs_diff(TS.one(ORDER)) < 1e-12
    assert cc.kaplan_signature(cc.extremal_g_theta(params(2.0), 0.0, ORDER)).max_abs_diff(1 + z) < 1e-12
    s = cc.kaplan_signature(cc.extremal_g_theta(params(2.0), np.pi, ORDER))
    assert s.max_abs_diff(1 - z) < 1e-12


def test_from_kaplan_examples():
    z = TS.variable(ORDER)
    p = params(2.0)
    assert cc.from_kaplan(p, TS.one(ORDER)).f.max_abs_diff(cc.center_function(p, ORDER).f) < 1e-12
    assert cc.from_kaplan(p, 1 + z).f.max_abs_diff(TS(np.arange(ORDER + 1.0))) < 1e-12
    assert cc.from_kaplan(p, 1 - z).f.max_abs_diff(cc.extremal_g_theta(p, np.pi, ORDER).f) < 1e-12


def test_kaplan_round_trip():
    rng = np.random.default_rng(2)
    for alpha in ALPHAS:
        f = cc.from_schwarz(params(alpha), cc.random_schwarz(rng), ORDER)
        back = cc.from_kaplan(f.params, cc.kaplan_signature(f))
        assert back.f.max_abs_diff(f.f) < 1e-10


# starlike fixtures and the Lambda transform


def test_fixtures_are_starlike():
    for phi in cc.starlike_fixtures(32):
        assert phi.check_starlike() > 0
        assert phi.series[2] == phi.phi2 and phi.series[3] == phi.phi3


@pytest.mark.parametrize("alpha", ALPHAS)
def test_lambda_examples(alpha):
    fx = {phi.name: phi for phi in cc.starlike_fixtures(ORDER)}
    p = params(alpha)
    assert cc.lambda_transform(p, fx["identity"]).f.max_abs_diff(cc.center_function(p, ORDER).f) < 1e-12
    assert cc.lambda_transform(p, fx["koebe"]).f.max_abs_diff(cc.extremal_g_theta(p, np.pi, ORDER).f) < 1e-12


def test_lambda_half_plane_alpha2():
    f = cc.lambda_transform(params(2.0), cc.starlike_fixtures(ORDER)[1])
    assert f.fprime.max_abs_diff(ps.binomial_series(-2.5, ORDER, -1.0)) < 1e-12
    assert cc.membership_test(f).passed
    back = cc.starlike_from_concave(f)
    assert back.max_abs_diff(cc.starlike_fixtures(ORDER)[1].series) < 1e-10


def test_g_theta_equals_constant_schwarz_member():
    worst = 0.0
    for alpha in ALPHAS:
        for theta in 2 * np.pi * np.arange(16) / 16:
            g = cc.extremal_g_theta(params(alpha), theta)
            f = cc.from_schwarz(params(alpha), cc.ConstantSchwarz.unimodular(theta))
            worst = max(worst, g.f.max_abs_diff(f.f))
    assert worst < 1e-10
