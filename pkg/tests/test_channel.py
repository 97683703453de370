"""Closed-form channel: frozen oracle values, invariants, and properties.

Frozen constants come from a 40-digit mpmath evaluation of the closed forms;
integral cross-checks use scipy's adaptive Gauss-Kronrod quadrature at
runtime as the independent oracle.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from mcvd import (
    ABSORBING,
    ChannelGeometry,
    ConfigError,
    DiffusionEnv,
    EmissionSpec,
    expected_hits,
    hitting_fraction,
    hitting_rate,
    molecule_distribution,
    peak_amplitude,
    peak_time,
    survival_fraction,
)

# mpmath, dps=40, reference parameters rr=10, r0=20, D=79.4, n_tx=5000, dt=1e-4
T_PEAK = 0.20990764063811923
N_PEAK = 0.18362877279628921
RATE_AT_PEAK = 0.36725754559257842
FRACTION_AT_04 = 0.10479129481718156
HITS_0_TO_04 = 523.95647408590782
FRACTION_AT_PEAK = 0.041632258331775201
FRACTION_AT_1E9 = 0.49998998883044895


@pytest.fixture
def geom():
    return ChannelGeometry(r0=20.0, rr=10.0)


@pytest.fixture
def env():
    return DiffusionEnv(D=79.4)


@pytest.fixture
def em():
    return EmissionSpec(n_tx=5000, dt=1e-4)


class TestTypes:
    def test_geometry_invariants(self):
        with pytest.raises(ConfigError, match="rr"):
            ChannelGeometry(r0=20.0, rr=0.0)
        with pytest.raises(ConfigError, match="r0"):
            ChannelGeometry(r0=5.0, rr=10.0)
        with pytest.raises(ConfigError, match="d"):
            ChannelGeometry.from_surface_distance(0.0, 10.0)

    def test_geometry_surface_distance(self):
        g = ChannelGeometry.from_surface_distance(10.0, 10.0)
        assert g.r0 == 20.0 and g.d == 10.0

    def test_env_invariants(self):
        with pytest.raises(ConfigError, match="D"):
            DiffusionEnv(D=0.0)
        with pytest.raises(ConfigError, match="w"):
            DiffusionEnv(D=1.0, w=0.0)
        assert DiffusionEnv(D=1.0).is_absorbing
        assert not DiffusionEnv(D=1.0, w=1e6).is_absorbing
        assert DiffusionEnv(D=1.0, w=ABSORBING).is_absorbing

    def test_emission_invariants(self):
        with pytest.raises(ConfigError, match="n_tx"):
            EmissionSpec(n_tx=0, dt=1e-4)
        with pytest.raises(ConfigError, match="dt"):
            EmissionSpec(n_tx=10, dt=0.0)


class TestMoleculeDistribution:
    def test_absorbing_boundary_is_exact_zero(self, geom, env):
        for t in (1e-6, 0.01, 0.1, 1.0, 100.0):
            assert molecule_distribution(geom.rr, t, geom, env) == 0.0

    def test_boundary_zero_with_awkward_floats(self, env):
        g = ChannelGeometry(r0=20.3, rr=10.1)
        for t in (0.05, 0.4):
            assert molecule_distribution(g.rr, t, g, env) == 0.0

    def test_domain_errors(self, geom, env):
        with pytest.raises(ValueError):
            molecule_distribution(9.0, 0.1, geom, env)
        with pytest.raises(ValueError):
            molecule_distribution(15.0, 0.0, geom, env)
        with pytest.raises(ValueError):
            molecule_distribution(15.0, -1.0, geom, env)

    def test_nonnegative_on_domain(self, geom, env):
        for r in np.linspace(geom.rr, 60.0, 101):
            for t in (0.001, 0.1, 1.0):
                assert molecule_distribution(float(r), t, geom, env) >= 0.0

    def test_finite_w_close_to_absorbing_limit(self, geom, env):
        p_abs = molecule_distribution(15.0, 0.1, geom, env)
        p_fin = molecule_distribution(15.0, 0.1, geom, DiffusionEnv(D=79.4, w=1e6))
        assert abs(p_fin - p_abs) / p_abs <= 1e-3

    def test_finite_w_converges_monotonically(self, geom, env):
        # relative gap to the absorbing limit shrinks at every doubling of w
        p_abs = molecule_distribution(15.0, 0.1, geom, env)
        w = 1e3
        gaps = []
        while w <= 1e7:
            p = molecule_distribution(15.0, 0.1, geom, DiffusionEnv(D=79.4, w=w))
            gaps.append(abs(p - p_abs) / p_abs)
            w *= 2.0
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_mass_conservation(self, geom, env):
        # total probability = molecules still diffusing + molecules absorbed
        for t in (0.01, 0.1, 1.0):
            upper = geom.r0 + 12.0 * math.sqrt(2.0 * env.D * t)
            integral, err = quad(
                lambda r: 4.0 * math.pi * r * r * molecule_distribution(r, t, geom, env),
                geom.rr,
                upper,
                limit=200,
                points=[geom.r0],
            )
            assert err < 1e-9
            total = integral + hitting_fraction(t, geom, env)
            assert total == pytest.approx(1.0, abs=1e-6)


class TestHittingRate:
    def test_zero_at_zero_and_underflow(self, geom, env):
        assert hitting_rate(0.0, geom, env) == 0.0
        assert hitting_rate(1e-12, geom, env) == 0.0

    def test_negative_time_rejected(self, geom, env):
        with pytest.raises(ValueError):
            hitting_rate(-1e-9, geom, env)

    def test_positive_past_underflow(self, geom, env):
        for t in (0.001, 0.01, 0.2099, 10.0, 1e6):
            assert hitting_rate(t, geom, env) > 0.0

    def test_value_at_peak(self, geom, env):
        assert hitting_rate(T_PEAK, geom, env) == pytest.approx(RATE_AT_PEAK, rel=1e-12)
        # spec-level figure: n_peak/(n_tx * dt)
        assert hitting_rate(0.209908, geom, env) == pytest.approx(0.36726, abs=1e-4)

    def test_argmax_matches_closed_form(self, geom, env):
        t = _golden_section_argmax(lambda t: hitting_rate(t, geom, env), 0.01, 2.0)
        assert abs(t - peak_time(geom, env)) <= 1e-6

    def test_unimodal(self, geom, env):
        t_pk = peak_time(geom, env)
        rising = np.geomspace(0.004, t_pk * 0.999, 200)
        values = [hitting_rate(float(t), geom, env) for t in rising]
        assert all(a < b for a, b in zip(values, values[1:]))
        falling = np.geomspace(t_pk * 1.001, 50.0, 200)
        values = [hitting_rate(float(t), geom, env) for t in falling]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_requires_absorbing_env(self, geom):
        with pytest.raises(ValueError):
            hitting_rate(0.1, geom, DiffusionEnv(D=79.4, w=1e5))


class TestHittingFraction:
    def test_zero_at_zero(self, geom, env):
        assert hitting_fraction(0.0, geom, env) == 0.0

    def test_negative_time_rejected(self, geom, env):
        with pytest.raises(ValueError):
            hitting_fraction(-0.1, geom, env)

    def test_long_time_saturation(self, geom, env):
        # value at 1e9 s computed exactly: still 1e-5 below the rr/r0 ceiling
        got = hitting_fraction(1e9, geom, env)
        assert got == pytest.approx(FRACTION_AT_1E9, rel=1e-12)
        assert got < geom.rr / geom.r0
        assert hitting_fraction(math.inf, geom, env) == geom.rr / geom.r0

    def test_value_at_peak_time(self, geom, env):
        got = hitting_fraction(T_PEAK, geom, env)
        assert got == pytest.approx(FRACTION_AT_PEAK, rel=1e-12)
        assert got == pytest.approx(0.041633, abs=1e-5)

    def test_strictly_increasing(self, geom, env):
        grid = np.geomspace(1e-3, 1e4, 300)
        values = [hitting_fraction(float(t), geom, env) for t in grid]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_monotone_in_distance(self, env):
        # larger gap, same radius and time: strictly smaller captured fraction
        fractions = [
            hitting_fraction(0.5, ChannelGeometry.from_surface_distance(d, 10.0), env)
            for d in np.linspace(2.0, 40.0, 39)
        ]
        assert all(a > b for a, b in zip(fractions, fractions[1:]))

    def test_integral_of_rate_matches(self, geom, env):
        rng = np.random.default_rng(1)
        for _ in range(12):
            rr = rng.uniform(1.0, 20.0)
            d = rng.uniform(1.0, 30.0)
            D = rng.uniform(10.0, 500.0)
            t = rng.uniform(0.01, 10.0)
            g = ChannelGeometry.from_surface_distance(d, rr)
            e = DiffusionEnv(D=D)
            integral, _ = quad(
                lambda u: hitting_rate(u, g, e), 0.0, t, limit=200,
                points=[min(peak_time(g, e), t)],
            )
            assert abs(integral - hitting_fraction(t, g, e)) <= 1e-6

    @given(
        d=st.floats(min_value=1.0, max_value=30.0),
        rr=st.floats(min_value=1.0, max_value=25.0),
        D=st.floats(min_value=5.0, max_value=500.0),
        t=st.floats(min_value=1e-3, max_value=1e3),
        lam=st.floats(min_value=0.1, max_value=10.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_scale_covariance(self, d, rr, D, t, lam):
        # scaling lengths by lam and D by lam^2 leaves the fraction unchanged
        base = hitting_fraction(t, ChannelGeometry.from_surface_distance(d, rr), DiffusionEnv(D=D))
        scaled = hitting_fraction(
            t,
            ChannelGeometry.from_surface_distance(d * lam, rr * lam),
            DiffusionEnv(D=D * lam * lam),
        )
        assert scaled == pytest.approx(base, rel=1e-12, abs=1e-300)


class TestExpectedHits:
    def test_empty_interval(self, geom, em, env):
        for t in (0.0, 0.1, 7.0):
            assert expected_hits(t, t, geom, em, env) == 0.0

    def test_inverted_interval_rejected(self, geom, em, env):
        with pytest.raises(ValueError):
            expected_hits(0.2, 0.1, geom, em, env)

    def test_all_time_limit(self, geom, em, env):
        assert expected_hits(0.0, math.inf, geom, em, env) == pytest.approx(2500.0, rel=1e-12)

    def test_frozen_reference_interval(self, geom, em, env):
        assert expected_hits(0.0, 0.4, geom, em, env) == pytest.approx(HITS_0_TO_04, rel=1e-12)


class TestPeakMetrics:
    def test_peak_time_reference(self, geom, env):
        assert peak_time(geom, env) == pytest.approx(T_PEAK, rel=1e-15)

    def test_peak_time_scalings(self, env):
        base = peak_time(ChannelGeometry.from_surface_distance(10.0, 10.0), env)
        doubled = peak_time(ChannelGeometry.from_surface_distance(20.0, 10.0), env)
        assert doubled == pytest.approx(4.0 * base, rel=1e-12)
        assert doubled == pytest.approx(0.8396, abs=1e-4)
        half = peak_time(ChannelGeometry.from_surface_distance(10.0, 10.0), DiffusionEnv(D=158.8))
        assert half == pytest.approx(base / 2.0, rel=1e-12)
        assert half == pytest.approx(0.1050, abs=1e-4)

    def test_peak_amplitude_reference(self, geom, em, env):
        got = peak_amplitude(geom, em, env)
        assert got == pytest.approx(N_PEAK, rel=1e-13)
        assert got == pytest.approx(0.18363, abs=1e-4)

    def test_two_route_identity(self, geom, em, env):
        route = em.n_tx * em.dt * hitting_rate(peak_time(geom, env), geom, env)
        assert peak_amplitude(geom, em, env) == pytest.approx(route, rel=1e-12)

    def test_inverse_cube_asymptotics(self, em, env):
        # fixed rr, d -> 8d: falls by (1/8)^3 modulated by r0 ratio
        rr = 10.0
        a1 = peak_amplitude(ChannelGeometry.from_surface_distance(10.0, rr), em, env)
        a8 = peak_amplitude(ChannelGeometry.from_surface_distance(80.0, rr), em, env)
        exact = (1.0 / 64.0) * (20.0 / 90.0)  # (d1/d8)^2 * (r0_1/r0_8)
        assert a8 / a1 == pytest.approx(exact, rel=1e-12)

    def test_amplitude_increases_with_receiver_radius(self, em, env):
        lo = peak_amplitude(ChannelGeometry.from_surface_distance(10.0, 10.0), em, env)
        hi = peak_amplitude(ChannelGeometry.from_surface_distance(10.0, 20.0), em, env)
        assert hi > lo


class TestSurvival:
    def test_reference_values(self):
        assert survival_fraction(ChannelGeometry(r0=20.0, rr=10.0)) == 0.5
        assert survival_fraction(ChannelGeometry(r0=100.0, rr=10.0)) == pytest.approx(0.9)

    def test_touching_receiver_absorbs_almost_surely(self):
        assert survival_fraction(ChannelGeometry(r0=10.0 + 1e-9, rr=10.0)) == pytest.approx(0.0, abs=1e-9)


def _golden_section_argmax(f, lo, hi, tol=1e-9):
    """Independent argmax oracle: golden-section search on a unimodal f."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    while b - a > tol:
        if f(c) > f(d):
            b, d = d, c
            c = b - inv_phi * (b - a)
        else:
            a, c = c, d
            d = a + inv_phi * (b - a)
    return 0.5 * (a + b)
