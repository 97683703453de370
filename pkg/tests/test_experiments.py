"""Experiment harness: report structure, analytic columns, statistics."""

import numpy as np
import pytest

from mcvd import (
    ChannelGeometry,
    ConfigError,
    DiffusionEnv,
    EmissionSpec,
    SimConfig,
    SweepSpec,
    run_histogram_experiment,
    run_peak_amplitude_sweep,
    run_peak_time_sweep,
    simulate,
)
from mcvd.experiments import default_window


def _spec(**kw):
    defaults = dict(
        variable="distance",
        values=(5.0, 10.0),
        geom=ChannelGeometry(r0=20.0, rr=10.0),
        env=DiffusionEnv(D=79.4),
        em=EmissionSpec(n_tx=5000, dt=1e-3),
        replicates=2,
        particles=4000,
        seed=11,
    )
    defaults.update(kw)
    return SweepSpec(**defaults)


class TestSweepSpec:
    def test_validation(self):
        with pytest.raises(ConfigError, match="variable"):
            _spec(variable="bogus")
        with pytest.raises(ConfigError, match="non-empty"):
            _spec(values=())
        with pytest.raises(ConfigError, match="strictly increasing"):
            _spec(values=(10.0, 5.0))
        with pytest.raises(ConfigError, match="replicates"):
            _spec(replicates=0)

    def test_point_overrides(self):
        spec = _spec()
        geom, env = spec.point(25.0)
        assert geom.d == pytest.approx(25.0) and geom.rr == 10.0
        spec = _spec(variable="diffusion")
        geom, env = spec.point(158.8)
        assert env.D == 158.8 and geom is spec.geom
        spec = _spec(variable="receiver_radius")
        geom, env = spec.point(15.0)
        assert geom.rr == 15.0 and geom.d == pytest.approx(spec.geom.d)

    def test_default_window_is_odd_and_floored(self):
        assert default_window(0.21, 1e-4) == 105
        assert default_window(1e-6, 1e-4) == 3
        assert default_window(0.2, 1e-4) % 2 == 1


class TestHistogramExperiment:
    def test_single_bin_report(self):
        cfg = SimConfig(
            geom=ChannelGeometry(r0=20.0, rr=10.0),
            env=DiffusionEnv(D=79.4),
            em=EmissionSpec(n_tx=5000, dt=1e-3),
            t_end=1e-3,
            seed=5,
            particles=1000,
        )
        report = run_histogram_experiment(cfg)
        assert len(report.rows) == 1
        assert report.columns == [
            "bin_start_s", "bin_end_s", "sim_count", "analytic_expected", "poisson_sigma",
        ]

    def test_frozen_diffusion_all_zero(self):
        cfg = SimConfig(
            geom=ChannelGeometry(r0=20.0, rr=10.0),
            env=DiffusionEnv(D=1e-12),
            em=EmissionSpec(n_tx=5000, dt=1e-3),
            t_end=0.05,
            seed=5,
            particles=1000,
        )
        report = run_histogram_experiment(cfg)
        assert all(row[2] == 0 for row in report.rows)
        assert all(row[3] == pytest.approx(0.0, abs=1e-30) for row in report.rows)
        assert report.summary["frac_bins_within_3sigma"] == 1.0

    def test_rows_align_with_expected_hits(self):
        from mcvd import expected_hits

        cfg = SimConfig(
            geom=ChannelGeometry(r0=20.0, rr=10.0),
            env=DiffusionEnv(D=79.4),
            em=EmissionSpec(n_tx=5000, dt=1e-3),
            t_end=0.1,
            seed=5,
            particles=20_000,
        )
        report = run_histogram_experiment(cfg)
        assert len(report.rows) == 100
        scale = cfg.particles / cfg.em.n_tx
        for row in report.rows[::17]:
            expect = scale * expected_hits(row[0], row[1], cfg.geom, cfg.em, cfg.env)
            assert row[3] == pytest.approx(expect, rel=1e-9, abs=1e-12)

    @pytest.mark.slow
    def test_reference_run_bin_agreement(self, big_bridge_report):
        assert big_bridge_report.summary["frac_bins_within_3sigma"] >= 0.98
        assert big_bridge_report.summary["frac_nonempty_bins_within_3sigma"] >= 0.98

    @pytest.mark.slow
    def test_reference_run_first_bins_unbiased(self, big_bridge_report):
        # early bins: counts within 4 sigma of expectation (sigma floored at
        # one count for the effectively-empty leading bins)
        for row in big_bridge_report.rows[:100]:
            _, _, count, expected, sigma = row
            assert abs(count - expected) <= 4.0 * max(sigma, 1.0)


class TestPeakTimeSweep:
    def test_structure_and_analytic_column(self):
        report = run_peak_time_sweep(_spec())
        assert [r[0] for r in report.rows] == [5.0, 10.0]
        assert len(report.rows) == 2
        # analytic column is d^2/(6 D)
        assert report.rows[0][2] == pytest.approx(25.0 / (6 * 79.4), rel=1e-12)
        assert report.rows[1][2] == pytest.approx(100.0 / (6 * 79.4), rel=1e-12)

    def test_reference_analytic_values(self):
        report = run_peak_time_sweep(_spec(values=(10.0,), replicates=1))
        assert report.rows[0][2] == pytest.approx(0.2099, abs=1e-4)
        fast = run_peak_time_sweep(_spec(values=(10.0,), replicates=1, env=DiffusionEnv(D=158.8)))
        assert fast.rows[0][2] == pytest.approx(0.1050, abs=1e-4)

    def test_requires_distance_variable(self):
        with pytest.raises(ConfigError, match="distance"):
            run_peak_time_sweep(_spec(variable="diffusion", values=(50.0, 100.0)))

    def test_analytic_slope_is_two(self):
        report = run_peak_time_sweep(_spec(values=(5.0, 10.0, 20.0)))
        assert report.summary["analytic_loglog_slope"] == pytest.approx(2.0, abs=1e-9)

    def test_report_regenerable_from_metadata(self):
        spec = _spec()
        a = run_peak_time_sweep(spec)
        b = run_peak_time_sweep(spec)
        assert a.rows == b.rows
        assert a.metadata["seeds"] == [11, 12]


class TestPeakAmplitudeSweep:
    def test_analytic_column_and_tendency(self):
        report = run_peak_amplitude_sweep(_spec(values=(10.0,), particles=20_000, replicates=2))
        analytic = report.rows[0][3]
        assert analytic == pytest.approx(0.18363 * 1e-3 / 1e-4, abs=2e-3)  # dt=1e-3 here
        assert 0.0 <= report.summary["frac_sim_above_analytic"] <= 1.0

    def test_inverse_cube_slope_far_field(self):
        # receiver much smaller than the gap: slope of the closed form -> -3
        spec = _spec(
            values=(20.0, 40.0, 80.0),
            geom=ChannelGeometry.from_surface_distance(10.0, 1.0),
            em=EmissionSpec(n_tx=5000, dt=1e-2),
            particles=1500,
            replicates=1,
        )
        report = run_peak_amplitude_sweep(spec)
        assert report.summary["analytic_loglog_slope"] == pytest.approx(-3.0, abs=0.05)

    def test_amplitude_grows_with_receiver_radius(self):
        small = run_peak_amplitude_sweep(_spec(values=(10.0,), replicates=1))
        big = run_peak_amplitude_sweep(
            _spec(values=(10.0,), replicates=1, geom=ChannelGeometry.from_surface_distance(10.0, 20.0))
        )
        assert big.rows[0][3] > small.rows[0][3]


class TestReplicateStatistics:
    @pytest.mark.slow
    def test_std_shrinks_with_replicates(self):
        # absorbed-fraction spread over R replicates scales like 1/sqrt(R)
        geom = ChannelGeometry(r0=20.0, rr=10.0)
        env = DiffusionEnv(D=79.4)
        em = EmissionSpec(n_tx=5000, dt=1e-4)

        def standard_error(n_groups, reps, seed0):
            # plug-in estimate of the replicate-mean error: std/sqrt(R),
            # averaged over groups to tame the small-sample std noise
            stds = []
            for g in range(n_groups):
                fracs = [
                    simulate(
                        SimConfig(
                            geom=geom, env=env, em=em, t_end=0.1,
                            seed=seed0 + g * 1000 + r, particles=4000,
                        )
                    ).absorbed_fraction
                    for r in range(reps)
                ]
                stds.append(np.std(fracs, ddof=1) / np.sqrt(reps))
            return float(np.mean(stds))

        se_4 = standard_error(6, 4, seed0=100)
        se_16 = standard_error(2, 16, seed0=9000)
        # quadrupling the replicates should halve the error, within slack
        ratio = se_4 / se_16
        assert 2.0 / 1.5 <= ratio <= 2.0 * 1.5
