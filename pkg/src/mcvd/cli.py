"""Command-line front end.

``mcvd <command> [--key value]... [--config <file>] [--out <dir>]``

The CLI is a thin client over the HTTP service: it validates parameters,
posts a request (against an in-process app by default, or a remote server
via ``--server``), and writes the response as CSV plus a ``.manifest``
sidecar.  The manifest is itself a valid ``--config`` file, so any output
can reproduce its run.  Defaults are the reference setup: n-tx=5000, rr=10,
d=10, D=79.4, dt=1e-4.

Exit codes: 0 success, 2 configuration error, 3 output I/O error,
4 internal error.
"""

from __future__ import annotations

import argparse
import asyncio
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

import httpx

from . import csvio
from .channel import ABSORBING, ChannelGeometry, DiffusionEnv, EmissionSpec
from .errors import ConfigError, McvdError, OutputError
from .simulation import AbsorptionMode

COMMANDS = ("analytic", "simulate", "histogram", "sweep-peak-time", "sweep-peak-amplitude")

_ENDPOINTS = {
    "analytic": "/analytic/metrics",
    "simulate": "/simulate",
    "histogram": "/experiments/histogram",
    "sweep-peak-time": "/experiments/sweep-peak-time",
    "sweep-peak-amplitude": "/experiments/sweep-peak-amplitude",
}


def _parse_float(key: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}")
    if math.isnan(value):
        raise ConfigError(f"{key}: NaN is not a valid value")
    return value


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        # tolerate scientific notation for counts, e.g. --particles 1e6
        value = _parse_float(key, raw)
        if value != int(value):
            raise ConfigError(f"{key}: expected an integer, got {raw!r}")
        return int(value)


def _parse_w(key: str, raw: str) -> float:
    if raw.strip().lower() == "absorbing":
        return ABSORBING
    return _parse_float(key, raw)


def _parse_mode(key: str, raw: str) -> str:
    values = [m.value for m in AbsorptionMode]
    if raw not in values:
        raise ConfigError(f"{key}: expected one of {values}, got {raw!r}")
    return raw


def _parse_values(key: str, raw: str) -> tuple[float, ...]:
    parts = [p for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"{key}: expected a comma-separated list of numbers")
    return tuple(_parse_float(key, p.strip()) for p in parts)


_CONVERTERS: dict[str, Callable[[str, str], Any]] = {
    "r0": _parse_float,
    "d": _parse_float,
    "rr": _parse_float,
    "D": _parse_float,
    "w": _parse_w,
    "dt": _parse_float,
    "n-tx": _parse_int,
    "t-end": _parse_float,
    "seed": _parse_int,
    "particles": _parse_int,
    "mode": _parse_mode,
    "values": _parse_values,
    "replicates": _parse_int,
    "window": _parse_int,
    "horizon-factor": _parse_float,
}

_COMMON_KEYS = ("r0", "d", "rr", "D", "w", "dt", "n-tx")
_COMMAND_KEYS: dict[str, tuple[str, ...]] = {
    "analytic": _COMMON_KEYS + ("t-end",),
    "simulate": _COMMON_KEYS + ("t-end", "seed", "particles", "mode"),
    "histogram": _COMMON_KEYS + ("t-end", "seed", "particles", "mode"),
    "sweep-peak-time": _COMMON_KEYS
    + ("values", "replicates", "particles", "seed", "mode", "window", "horizon-factor"),
    "sweep-peak-amplitude": _COMMON_KEYS
    + ("values", "replicates", "particles", "seed", "mode", "window", "horizon-factor"),
}

_COMMON_DEFAULTS: dict[str, Any] = {
    "rr": 10.0,
    "D": 79.4,
    "w": ABSORBING,
    "dt": 1e-4,
    "n-tx": 5000,
}
_COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "analytic": {"t-end": 0.4},
    "simulate": {"t-end": 0.4, "seed": 42, "mode": AbsorptionMode.END_OF_STEP.value},
    "histogram": {"t-end": 0.4, "seed": 42, "mode": AbsorptionMode.END_OF_STEP.value},
    "sweep-peak-time": {
        "values": (5.0, 10.0, 15.0, 20.0, 25.0),
        "replicates": 10,
        "seed": 1,
        "mode": AbsorptionMode.END_OF_STEP.value,
        "horizon-factor": 8.0,
    },
    "sweep-peak-amplitude": {
        "values": (5.0, 10.0, 15.0, 20.0, 25.0),
        "replicates": 10,
        "seed": 1,
        "mode": AbsorptionMode.END_OF_STEP.value,
        "horizon-factor": 8.0,
    },
}


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved run: command, typed parameters, output directory."""

    command: str
    params: dict[str, Any] = field(default_factory=dict)
    output_dir: Path = Path(".")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcvd",
        description="Diffusion channel with an absorbing spherical receiver: "
        "closed-form metrics, particle simulation, and comparison sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add_param(p: argparse.ArgumentParser, key: str, help_text: str) -> None:
        p.add_argument(f"--{key}", dest=key, default=None, metavar="V", help=help_text)

    help_texts = {
        "r0": "Tx to receiver centre distance, um (alternative to --d)",
        "d": "Tx to receiver surface distance, um (alternative to --r0)",
        "rr": "receiver radius, um",
        "D": "diffusion coefficient, um^2/s",
        "w": "surface reaction rate, um/s, or 'absorbing'",
        "dt": "time bin width, s",
        "n-tx": "emitted molecules",
        "t-end": "horizon, s",
        "seed": "RNG seed (64-bit unsigned)",
        "particles": "simulated particles (default: n-tx)",
        "mode": "absorption rule: end-of-step | bridge-corrected",
        "values": "comma-separated swept distances d, um",
        "replicates": "independent seeds per sweep point",
        "window": "odd smoothing window (bins) for peak reading",
        "horizon-factor": "horizon as a multiple of each point's peak time",
    }
    for command in COMMANDS:
        p = sub.add_parser(command, help=f"run the {command} command")
        for key in _COMMAND_KEYS[command]:
            add_param(p, key, help_texts[key])
        p.add_argument("--config", default=None, metavar="FILE", help="flat key = value config file")
        p.add_argument("--out", default=".", metavar="DIR", help="output directory")
        p.add_argument("--server", default=None, metavar="URL", help="remote service URL (default: in-process)")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    """Resolve argv (+ optional config file) into a validated RunConfig.

    Precedence: flags > config file > defaults.  Unknown keys in the config
    file are hard errors, as are invalid or inconsistent physical values.
    """
    args = _build_parser().parse_args(argv)
    command = args.command
    if command == "serve":
        return RunConfig(command="serve", params={"host": args.host, "port": args.port})

    allowed = _COMMAND_KEYS[command]
    merged: dict[str, Any] = dict(_COMMON_DEFAULTS)
    merged.update(_COMMAND_DEFAULTS[command])

    if args.config is not None:
        for key, raw in csvio.read_flat_config(args.config).items():
            if key == "command":
                # manifests carry their command; it must match the invocation
                if raw != command:
                    raise ConfigError(
                        f"config file is for command {raw!r}, but {command!r} was invoked"
                    )
                continue
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in {args.config} (allowed: {', '.join(allowed)})")
            merged[key] = _CONVERTERS[key](key, raw)

    for key in allowed:
        raw = getattr(args, key)
        if raw is not None:
            merged[key] = _CONVERTERS[key](key, raw)

    if "r0" in merged and "d" in merged:
        raise ConfigError("specify either r0 or d, not both")
    if "r0" not in merged and "d" not in merged:
        merged["d"] = 10.0

    _validate(command, merged)
    return RunConfig(command=command, params=merged, output_dir=Path(args.out))


def _validate(command: str, params: dict[str, Any]) -> None:
    """Construct the core types once so every invariant is checked eagerly."""
    if "d" in params:
        geom = ChannelGeometry.from_surface_distance(params["d"], params["rr"])
    else:
        geom = ChannelGeometry(r0=params["r0"], rr=params["rr"])
    env = DiffusionEnv(D=params["D"], w=params["w"])
    EmissionSpec(n_tx=params["n-tx"], dt=params["dt"])
    if not env.is_absorbing:
        raise ConfigError(
            f"w: the {command} command requires the absorbing receiver (w = absorbing)"
        )
    if "t-end" in params and not (params["t-end"] > 0.0):
        raise ConfigError(f"t-end must be > 0 (got {params['t-end']})")
    if "particles" in params and params["particles"] < 1:
        raise ConfigError(f"particles must be >= 1 (got {params['particles']})")
    if "seed" in params and not (0 <= params["seed"] < 2**64):
        raise ConfigError(f"seed must be a 64-bit unsigned integer (got {params['seed']})")
    if "replicates" in params and params["replicates"] < 1:
        raise ConfigError(f"replicates must be >= 1 (got {params['replicates']})")
    if "window" in params and (params["window"] < 1 or params["window"] % 2 == 0):
        raise ConfigError(f"window must be odd and >= 1 (got {params['window']})")
    if "values" in params:
        values = params["values"]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError(f"values must be strictly increasing (got {list(values)})")
        for v in values:
            ChannelGeometry.from_surface_distance(v, params["rr"])


def _channel_payload(params: dict[str, Any]) -> dict[str, Any]:
    geometry: dict[str, Any] = {"rr": params["rr"]}
    if "r0" in params:
        geometry["r0"] = params["r0"]
    else:
        geometry["d"] = params["d"]
    w = params["w"]
    return {
        "geometry": geometry,
        "environment": {"D": params["D"], "w": None if math.isinf(w) else w},
        "emission": {"n_tx": params["n-tx"], "dt": params["dt"]},
    }


def _request_payload(rc: RunConfig) -> dict[str, Any]:
    p = rc.params
    payload = _channel_payload(p)
    if rc.command == "analytic":
        payload["t_end"] = p["t-end"]
    elif rc.command in ("simulate", "histogram"):
        payload.update(
            t_end=p["t-end"],
            seed=p["seed"],
            mode=p["mode"],
        )
        if "particles" in p:
            payload["particles"] = p["particles"]
    else:
        payload.update(
            values=list(p["values"]),
            replicates=p["replicates"],
            seed=p["seed"],
            mode=p["mode"],
            horizon_factor=p["horizon-factor"],
        )
        if "particles" in p:
            payload["particles"] = p["particles"]
        if "window" in p:
            payload["window"] = p["window"]
    return payload


def _post(server: Optional[str], path: str, payload: dict[str, Any]) -> dict[str, Any]:
    async def go() -> httpx.Response:
        if server is None:
            from .service.app import create_app

            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://mcvd.internal", timeout=None
            ) as client:
                return await client.post(path, json=payload)
        async with httpx.AsyncClient(base_url=server, timeout=None) as client:
            return await client.post(path, json=payload)

    try:
        response = asyncio.run(go())
    except httpx.HTTPError as exc:
        raise McvdError(f"service request failed: {exc}") from exc
    if response.status_code == 422:
        raise ConfigError(str(response.json().get("detail")))
    if response.status_code != 200:
        raise McvdError(f"service error {response.status_code}: {response.text}")
    return response.json()


def _write_outputs(rc: RunConfig, body: dict[str, Any], wall_time_s: float) -> Path:
    out_dir = rc.output_dir
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory {out_dir}: {exc}") from exc
    csv_path = out_dir / f"{rc.command}.csv"
    params = dict(rc.params)
    extra: dict[str, Any] = {}

    if rc.command == "analytic":
        columns = list(body.keys())
        rows = [tuple(body[c] for c in columns)]
    elif rc.command == "simulate":
        dt = body["dt_s"]
        rows = [
            (k * dt, (k + 1) * dt, c)
            for k, c in enumerate(body["bin_counts"])
        ]
        columns = ["bin_start_s", "bin_end_s", "sim_count"]
        params["t-end"] = body["t_end_s"]  # horizon after rounding up to bins
        extra = {
            "absorbed-total": body["absorbed_total"],
            "survivors": body["survivors"],
        }
    else:
        columns = body["columns"]
        rows = [tuple(row) for row in body["rows"]]
        extra = {f"summary-{k}": v for k, v in body.get("summary", {}).items()}

    csvio.write_csv(csv_path, columns, rows)
    csvio.write_manifest(
        csvio.manifest_path(csv_path),
        {"command": rc.command, **{k: params[k] for k in sorted(params)}},
        wall_time_s=wall_time_s,
        extra_comments=extra,
    )
    return csv_path


def run(rc: RunConfig, server: Optional[str] = None) -> Path:
    """Execute one resolved command and return the CSV path written."""
    start = time.perf_counter()
    body = _post(server, _ENDPOINTS[rc.command], _request_payload(rc))
    wall = time.perf_counter() - start
    return _write_outputs(rc, body, wall)


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        rc = parse_config(argv)
        if rc.command == "serve":
            import uvicorn

            from .service.app import app

            uvicorn.run(app, host=rc.params["host"], port=rc.params["port"])
            return 0
        args = _build_parser().parse_args(argv)
        csv_path = run(rc, server=args.server)
        print(f"wrote {csv_path} and {csvio.manifest_path(csv_path).name}")
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except McvdError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # invariant breach / unexpected failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
