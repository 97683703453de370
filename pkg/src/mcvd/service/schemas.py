"""Pydantic request/response models for the channel service.

The wire format is JSON; the absorbing limit is encoded as ``w: null``
(JSON has no infinity).  Geometry accepts either the centre distance ``r0``
or the surface distance ``d`` -- exactly one of the two.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..channel import ABSORBING, ChannelGeometry, DiffusionEnv, EmissionSpec
from ..errors import ConfigError
from ..simulation import AbsorptionMode


class GeometryIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rr: float = Field(description="receiver sphere radius, um")
    r0: Optional[float] = Field(default=None, description="Tx to receiver centre, um")
    d: Optional[float] = Field(default=None, description="Tx to receiver surface, um")

    def to_core(self) -> ChannelGeometry:
        if (self.r0 is None) == (self.d is None):
            raise ConfigError("specify exactly one of r0 or d")
        if self.r0 is not None:
            return ChannelGeometry(r0=self.r0, rr=self.rr)
        return ChannelGeometry.from_surface_distance(self.d, self.rr)


class EnvironmentIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    D: float = Field(description="diffusion coefficient, um^2/s")
    w: Optional[float] = Field(
        default=None, description="surface reaction rate, um/s; null = absorbing"
    )

    def to_core(self) -> DiffusionEnv:
        return DiffusionEnv(D=self.D, w=ABSORBING if self.w is None else self.w)


class EmissionIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_tx: int = Field(description="molecules released at t=0")
    dt: float = Field(description="counting bin width, s")

    def to_core(self) -> EmissionSpec:
        return EmissionSpec(n_tx=self.n_tx, dt=self.dt)


class ChannelParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    geometry: GeometryIn
    environment: EnvironmentIn
    emission: EmissionIn

    def to_core(self) -> tuple[ChannelGeometry, DiffusionEnv, EmissionSpec]:
        return (
            self.geometry.to_core(),
            self.environment.to_core(),
            self.emission.to_core(),
        )


class AnalyticRequest(ChannelParams):
    t_end: float = Field(default=0.4, description="horizon for the cumulative metrics, s")


class AnalyticMetrics(BaseModel):
    t_peak_s: float
    n_peak: float
    survival_fraction: float
    hitting_fraction_t_end: float
    expected_hits_0_t_end: float


class SimulateRequest(ChannelParams):
    t_end: float = Field(description="simulation horizon, s")
    seed: int = 42
    particles: Optional[int] = None
    mode: AbsorptionMode = AbsorptionMode.END_OF_STEP


class SimulateResponse(BaseModel):
    n_bins: int
    t_end_s: float
    dt_s: float
    bin_counts: list[int]
    absorbed_total: int
    survivors: int
    wall_time_s: float
    params: dict[str, Any]


class SweepRequest(ChannelParams):
    values: list[float] = Field(description="swept distances d, um, strictly increasing")
    replicates: int = 10
    particles: Optional[int] = None
    seed: int = 1
    mode: AbsorptionMode = AbsorptionMode.END_OF_STEP
    window: Optional[int] = None
    horizon_factor: float = 8.0


class ReportOut(BaseModel):
    kind: str
    columns: list[str]
    rows: list[list[Any]]
    metadata: dict[str, Any]
    summary: dict[str, Any]


class HealthOut(BaseModel):
    status: str
    version: str
