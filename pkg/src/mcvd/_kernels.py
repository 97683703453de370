"""Numba kernels: counter-based RNG and the absorbing-sphere random walk.

The generator is Philox4x32-10 (Salmon et al., SC'11).  The 64-bit run seed
is the key; the 128-bit counter encodes (step, lane, particle index), so each
Gaussian increment is a pure function of (seed, particle, step).  Trajectories
therefore do not depend on thread count, scheduling, or on whether the bridge
correction consumed extra draws: the bridge uniform lives on its own lane.

Lane layout per (particle, step):
  lane 0 -> four 32-bit words -> two Box-Muller pairs -> the three Cartesian
            increments (fourth normal discarded)
  lane 1 -> first word -> the boundary-crossing uniform (drawn only when the
            crossing probability can exceed the smallest representable draw)
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange, uint64

_MASK32 = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_TWO_NEG32 = 2.0**-32
_TWO_PI = 2.0 * np.pi
# a lane-1 uniform is at least 0.5 * 2^-32, so crossing probabilities with
# exponent above ~23 can never win the comparison and need no draw at all
_BRIDGE_EXP_CUTOFF = 23.0


@njit(cache=True, inline="always")
def philox4x32(c0, c1, c2, c3, k0, k1):
    """One Philox4x32-10 block; all args are uint64 holding 32-bit values."""
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        n0 = ((p1 >> uint64(32)) ^ c1 ^ k0) & _MASK32
        n1 = p1 & _MASK32
        n2 = ((p0 >> uint64(32)) ^ c3 ^ k1) & _MASK32
        n3 = p0 & _MASK32
        c0, c1, c2, c3 = n0, n1, n2, n3
        k0 = (k0 + _W0) & _MASK32
        k1 = (k1 + _W1) & _MASK32
    return c0, c1, c2, c3


@njit(cache=True, parallel=True)
def walk_absorbing(
    particles,
    n_steps,
    r0,
    rr,
    sigma,
    inv_d_dt,
    bridge,
    seed_lo,
    seed_hi,
    save_pos,
    hit_bins,
    positions,
):
    """March independent molecules; record the absorption bin (or -1).

    Each particle starts at (r0, 0, 0) relative to the receiver centre and
    receives i.i.d. Gaussian steps of std ``sigma`` per coordinate.  A
    particle is absorbed when its end-of-step radius is <= rr; with
    ``bridge`` set it may additionally be absorbed mid-step with probability
    exp(-(g_prev * g_now) * inv_d_dt) where g = radius - rr, the flat-boundary
    crossing probability of the Brownian bridge between the two endpoints.
    Absorption during step k is credited to bin k.  Results are identical for
    any thread count because nothing is shared between particles.
    """
    rr2 = rr * rr
    for i in prange(particles):
        pid = uint64(i)
        pid_lo = pid & _MASK32
        pid_hi = (pid >> uint64(32)) & _MASK32
        x = r0
        y = 0.0
        z = 0.0
        gap_prev = r0 - rr
        hit = -1
        for k in range(n_steps):
            a0, a1, a2, a3 = philox4x32(
                uint64(k), uint64(0), pid_lo, pid_hi, seed_lo, seed_hi
            )
            u1 = (a0 + uint64(1)) * _TWO_NEG32
            u2 = (a1 + 0.5) * _TWO_NEG32
            rad = np.sqrt(-2.0 * np.log(u1))
            x += sigma * (rad * np.cos(_TWO_PI * u2))
            y += sigma * (rad * np.sin(_TWO_PI * u2))
            u3 = (a2 + uint64(1)) * _TWO_NEG32
            u4 = (a3 + 0.5) * _TWO_NEG32
            z += sigma * (np.sqrt(-2.0 * np.log(u3)) * np.cos(_TWO_PI * u4))
            rho2 = x * x + y * y + z * z
            if rho2 <= rr2:
                hit = k
                break
            if bridge:
                gap = np.sqrt(rho2) - rr
                arg = gap_prev * gap * inv_d_dt
                if arg < _BRIDGE_EXP_CUTOFF:
                    b0, b1, b2, b3 = philox4x32(
                        uint64(k), uint64(1), pid_lo, pid_hi, seed_lo, seed_hi
                    )
                    if (b0 + 0.5) * _TWO_NEG32 < np.exp(-arg):
                        hit = k
                        break
                gap_prev = gap
        hit_bins[i] = hit
        if save_pos:
            positions[i, 0] = x
            positions[i, 1] = y
            positions[i, 2] = z
