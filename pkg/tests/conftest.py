"""Shared fixtures.

The reference parameter set (rr=10 um, d=10 um, D=79.4 um^2/s, n_tx=5000,
dt=1e-4 s) is used throughout; the expensive 1e5-particle runs are
session-scoped so the acceptance criteria and the statistical property tests
share them.
"""

import pytest

from mcvd import (
    AbsorptionMode,
    ChannelGeometry,
    DiffusionEnv,
    EmissionSpec,
    SimConfig,
    run_histogram_experiment,
    simulate,
)


@pytest.fixture(scope="session")
def paper_geom() -> ChannelGeometry:
    return ChannelGeometry(r0=20.0, rr=10.0)


@pytest.fixture(scope="session")
def paper_env() -> DiffusionEnv:
    return DiffusionEnv(D=79.4)


@pytest.fixture(scope="session")
def paper_em() -> EmissionSpec:
    return EmissionSpec(n_tx=5000, dt=1e-4)


@pytest.fixture(scope="session")
def big_bridge_report(paper_geom, paper_env, paper_em):
    """Histogram report for 1e5 bridge-corrected particles over 0.4 s."""
    cfg = SimConfig(
        geom=paper_geom,
        env=paper_env,
        em=paper_em,
        t_end=0.4,
        seed=1,
        particles=100_000,
        absorption_mode=AbsorptionMode.BRIDGE_CORRECTED,
    )
    return run_histogram_experiment(cfg)


@pytest.fixture(scope="session")
def big_endofstep_result(paper_geom, paper_env, paper_em):
    """Raw result for 1e5 end-of-step particles over 0.4 s (same seed)."""
    cfg = SimConfig(
        geom=paper_geom,
        env=paper_env,
        em=paper_em,
        t_end=0.4,
        seed=1,
        particles=100_000,
        absorption_mode=AbsorptionMode.END_OF_STEP,
    )
    return simulate(cfg)
