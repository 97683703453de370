"""FastAPI service exposing the channel model, simulator, and experiments.

Synchronous endpoints; the heavy lifting happens in the numba kernel, which
releases the work across the configured worker threads.  Invalid physical
parameters surface as HTTP 422 with the offending key in the detail string.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..channel import (
    expected_hits,
    hitting_fraction,
    peak_amplitude,
    peak_time,
    survival_fraction,
)
from ..csvio import TOOL_VERSION
from ..errors import ConfigError
from ..experiments import (
    ComparisonReport,
    SweepSpec,
    run_histogram_experiment,
    run_peak_amplitude_sweep,
    run_peak_time_sweep,
)
from ..simulation import SimConfig, simulate
from .schemas import (
    AnalyticMetrics,
    AnalyticRequest,
    HealthOut,
    ReportOut,
    SimulateRequest,
    SimulateResponse,
    SweepRequest,
)


def _report_out(report: ComparisonReport) -> ReportOut:
    return ReportOut(
        kind=report.kind,
        columns=report.columns,
        rows=[list(row) for row in report.rows],
        metadata=report.metadata,
        summary=report.summary,
    )


def _sweep_spec(req: SweepRequest) -> SweepSpec:
    geom, env, em = req.to_core()
    return SweepSpec(
        variable="distance",
        values=tuple(req.values),
        geom=geom,
        env=env,
        em=em,
        replicates=req.replicates,
        particles=req.particles,
        seed=req.seed,
        absorption_mode=req.mode,
        window=req.window,
        horizon_factor=req.horizon_factor,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="mcvd channel service", version=TOOL_VERSION)

    @app.exception_handler(ConfigError)
    async def config_error_handler(_request: Request, exc: ConfigError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthOut)
    def health() -> HealthOut:
        return HealthOut(status="ok", version=TOOL_VERSION)

    @app.post("/analytic/metrics", response_model=AnalyticMetrics)
    def analytic_metrics(req: AnalyticRequest) -> AnalyticMetrics:
        geom, env, em = req.to_core()
        return AnalyticMetrics(
            t_peak_s=peak_time(geom, env),
            n_peak=peak_amplitude(geom, em, env),
            survival_fraction=survival_fraction(geom),
            hitting_fraction_t_end=hitting_fraction(req.t_end, geom, env),
            expected_hits_0_t_end=expected_hits(0.0, req.t_end, geom, em, env),
        )

    @app.post("/simulate", response_model=SimulateResponse)
    def run_simulation(req: SimulateRequest) -> SimulateResponse:
        geom, env, em = req.to_core()
        cfg = SimConfig(
            geom=geom,
            env=env,
            em=em,
            t_end=req.t_end,
            seed=req.seed,
            particles=req.particles,
            absorption_mode=req.mode,
        )
        result = simulate(cfg)
        return SimulateResponse(
            n_bins=cfg.n_bins,
            t_end_s=cfg.t_end,
            dt_s=em.dt,
            bin_counts=[int(c) for c in result.bin_counts],
            absorbed_total=result.absorbed_total,
            survivors=result.survivors,
            wall_time_s=result.wall_time,
            params={
                "r0_um": geom.r0,
                "rr_um": geom.rr,
                "d_um": geom.d,
                "D_um2_s": env.D,
                "dt_s": em.dt,
                "n_tx": em.n_tx,
                "t_end_s": cfg.t_end,
                "seed": cfg.seed,
                "particles": cfg.particles,
                "absorption_mode": cfg.absorption_mode.value,
            },
        )

    @app.post("/experiments/histogram", response_model=ReportOut)
    def histogram(req: SimulateRequest) -> ReportOut:
        geom, env, em = req.to_core()
        cfg = SimConfig(
            geom=geom,
            env=env,
            em=em,
            t_end=req.t_end,
            seed=req.seed,
            particles=req.particles,
            absorption_mode=req.mode,
        )
        return _report_out(run_histogram_experiment(cfg))

    @app.post("/experiments/sweep-peak-time", response_model=ReportOut)
    def sweep_peak_time(req: SweepRequest) -> ReportOut:
        return _report_out(run_peak_time_sweep(_sweep_spec(req)))

    @app.post("/experiments/sweep-peak-amplitude", response_model=ReportOut)
    def sweep_peak_amplitude(req: SweepRequest) -> ReportOut:
        return _report_out(run_peak_amplitude_sweep(_sweep_spec(req)))

    return app


app = create_app()
