"""Brownian-dynamics validation of the channel: particle walks, binned hits.

Molecules are independent, so the simulator is embarrassingly parallel; the
counter-based RNG in ``_kernels`` makes the output a pure function of the
configuration regardless of how many threads execute it.
"""

from __future__ import annotations

import enum
import math
import os
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numba
import numpy as np

from ._kernels import walk_absorbing
from .channel import ChannelGeometry, DiffusionEnv, EmissionSpec
from .errors import ConfigError

#: Hard default cap on the number of time bins a single run may allocate.
DEFAULT_MAX_BINS = 5_000_000

_SEED_LIMIT = 2**64


class AbsorptionMode(str, enum.Enum):
    """How intra-step boundary contact is handled.

    END_OF_STEP absorbs only when a step lands inside the sphere; it misses
    excursions that cross and return within one step, so it undercounts by a
    margin that shrinks with dt.  BRIDGE_CORRECTED additionally absorbs with
    the Brownian-bridge crossing probability and removes that leading-order
    bias.
    """

    END_OF_STEP = "end-of-step"
    BRIDGE_CORRECTED = "bridge-corrected"


@dataclass(frozen=True)
class SimConfig:
    """Everything a run depends on; two equal configs give identical results.

    ``particles`` may exceed ``em.n_tx`` for variance reduction (comparisons
    rescale by n_tx/particles downstream).  ``t_end`` is rounded up to a
    whole number of dt bins at construction; the stored value is the rounded
    one.  ``record_final_positions`` keeps every particle's end-of-run
    coordinates in the result (debugging aid; off by default for memory).
    """

    geom: ChannelGeometry
    env: DiffusionEnv
    em: EmissionSpec
    t_end: float
    seed: int = 42
    particles: Optional[int] = None
    absorption_mode: AbsorptionMode = AbsorptionMode.END_OF_STEP
    max_bins: int = DEFAULT_MAX_BINS
    record_final_positions: bool = False

    def __post_init__(self) -> None:
        if not self.env.is_absorbing:
            raise ConfigError(
                f"simulation supports only the absorbing receiver (got w={self.env.w})"
            )
        if not (self.t_end > 0.0):
            raise ConfigError(f"t_end must be > 0 (got t_end={self.t_end})")
        if self.particles is None:
            object.__setattr__(self, "particles", self.em.n_tx)
        if not (isinstance(self.particles, int) and self.particles >= 1):
            raise ConfigError(f"particles must be >= 1 (got particles={self.particles})")
        if not (isinstance(self.seed, int) and 0 <= self.seed < _SEED_LIMIT):
            raise ConfigError(f"seed must be a 64-bit unsigned integer (got seed={self.seed})")
        mode = self.absorption_mode
        if not isinstance(mode, AbsorptionMode):
            object.__setattr__(self, "absorption_mode", AbsorptionMode(mode))

        # round the horizon up to a whole number of bins (tolerating float
        # noise in t_end/dt) and store the adjusted value
        ratio = self.t_end / self.em.dt
        n_bins = int(round(ratio)) if abs(ratio - round(ratio)) < 1e-9 * max(1.0, ratio) else int(math.ceil(ratio))
        if n_bins > self.max_bins:
            raise ConfigError(
                f"t_end/dt = {n_bins} bins exceeds max_bins={self.max_bins}"
            )
        object.__setattr__(self, "t_end", n_bins * self.em.dt)

    @property
    def n_bins(self) -> int:
        return int(round(self.t_end / self.em.dt))


@dataclass(frozen=True)
class SimResult:
    """Binned absorption counts plus bookkeeping.

    Invariants: ``bin_counts.sum() == absorbed_total`` and
    ``absorbed_total + survivors == config.particles``.
    """

    bin_counts: np.ndarray
    absorbed_total: int
    survivors: int
    config: SimConfig
    wall_time: float
    final_positions: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def absorbed_fraction(self) -> float:
        return self.absorbed_total / self.config.particles

    def bin_midpoints(self) -> np.ndarray:
        dt = self.config.em.dt
        return dt * (np.arange(self.config.n_bins) + 0.5)


class PeakEstimate(NamedTuple):
    t_peak: float
    n_peak: int


def _resolve_workers(workers: Optional[int]) -> int:
    """Worker count: explicit arg, else MCVD_THREADS (0/unset = all cores)."""
    if workers is None:
        raw = os.environ.get("MCVD_THREADS", "0")
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigError(f"MCVD_THREADS must be an integer (got {raw!r})")
    limit = numba.config.NUMBA_NUM_THREADS
    if workers <= 0:
        return limit
    return min(workers, limit)


def simulate(cfg: SimConfig, workers: Optional[int] = None) -> SimResult:
    """Run the particle walk described by ``cfg``.

    Output is bit-identical for any ``workers`` value; parallelism only
    changes wall time.
    """
    numba.set_num_threads(_resolve_workers(workers))
    n_bins = cfg.n_bins
    particles = cfg.particles
    hit_bins = np.empty(particles, dtype=np.int64)
    save_pos = cfg.record_final_positions
    positions = np.empty((particles if save_pos else 1, 3), dtype=np.float64)

    start = time.perf_counter()
    walk_absorbing(
        particles,
        n_bins,
        cfg.geom.r0,
        cfg.geom.rr,
        math.sqrt(2.0 * cfg.env.D * cfg.em.dt),
        1.0 / (cfg.env.D * cfg.em.dt),
        cfg.absorption_mode is AbsorptionMode.BRIDGE_CORRECTED,
        np.uint64(cfg.seed & 0xFFFFFFFF),
        np.uint64(cfg.seed >> 32),
        save_pos,
        hit_bins,
        positions,
    )
    wall = time.perf_counter() - start

    absorbed_mask = hit_bins >= 0
    counts = np.bincount(hit_bins[absorbed_mask], minlength=n_bins).astype(np.int64)
    counts.flags.writeable = False
    absorbed = int(absorbed_mask.sum())
    return SimResult(
        bin_counts=counts,
        absorbed_total=absorbed,
        survivors=particles - absorbed,
        config=cfg,
        wall_time=wall,
        final_positions=positions if save_pos else None,
    )


def estimate_peak(result: SimResult, window: int) -> PeakEstimate:
    """Read the pulse peak off a binned histogram.

    A centred moving average of ``window`` bins locates the peak; the
    returned time is that bin's midpoint and the returned amplitude is the
    maximum *raw* count within the smoothed neighbourhood.  Raw maxima sit
    above the mean by construction, so this estimator is biased high for the
    amplitude; that is inherent to max-reading a noisy histogram.
    """
    counts = result.bin_counts
    if len(counts) == 0 or result.absorbed_total == 0:
        raise ValueError("cannot estimate a peak: no absorptions recorded")
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 1 (got {window})")
    if window > len(counts):
        raise ValueError(
            f"window={window} exceeds the number of bins ({len(counts)})"
        )
    smoothed = np.convolve(counts.astype(np.float64), np.full(window, 1.0 / window), mode="same")
    idx = int(np.argmax(smoothed))
    half = window // 2
    lo = max(0, idx - half)
    n_peak = int(counts[lo : idx + half + 1].max())
    t_peak = (idx + 0.5) * result.config.em.dt
    return PeakEstimate(t_peak=t_peak, n_peak=n_peak)
