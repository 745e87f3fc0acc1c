"""Field serialization.

Native format: one JSON header line {"nx":…, "ny":…, "h":…} followed by
the raw little-endian float64 values, row-major.  Round-trips are
bit-identical.

PGM (P5, 8-bit) import/export is provided for eyeballing fields in image
viewers; the affine scaling used for quantization is recorded in a
sidecar JSON so the field can be recovered up to 8-bit precision.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .grid import GridSpec, ScalarField


def write_field(path, field: ScalarField) -> None:
    header = json.dumps({"nx": field.grid.nx, "ny": field.grid.ny, "h": field.grid.h})
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii") + b"\n")
        fh.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_field(path) -> ScalarField:
    with open(path, "rb") as fh:
        header = fh.readline()
        try:
            meta = json.loads(header.decode("ascii"))
            grid = GridSpec(nx=int(meta["nx"]), ny=int(meta["ny"]), h=float(meta["h"]))
        except (ValueError, KeyError) as exc:
            raise ValueError(f"bad field header in {path}: {header!r}") from exc
        raw = fh.read()
    expected = grid.nx * grid.ny * 8
    if len(raw) != expected:
        raise ValueError(
            f"field payload in {path} has {len(raw)} bytes, expected {expected}"
        )
    values = np.frombuffer(raw, dtype="<f8").reshape(grid.shape).copy()
    return ScalarField(grid, values)


def _sidecar_path(path) -> Path:
    return Path(str(path) + ".json")


def write_pgm(path, field: ScalarField) -> None:
    """Write an 8-bit P5 PGM plus a sidecar JSON with the affine scaling."""
    vmin = float(field.values.min())
    vmax = float(field.values.max())
    scale = (vmax - vmin) / 255.0 if vmax > vmin else 1.0
    quantized = np.round((field.values - vmin) / scale).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{field.grid.nx} {field.grid.ny}\n255\n".encode("ascii"))
        fh.write(quantized.tobytes())
    sidecar = {
        "offset": vmin,
        "scale": scale,
        "nx": field.grid.nx,
        "ny": field.grid.ny,
        "h": field.grid.h,
    }
    _sidecar_path(path).write_text(json.dumps(sidecar, sort_keys=True) + "\n")


def read_pgm(path) -> ScalarField:
    """Read a P5 PGM written by write_pgm, restoring values via the sidecar."""
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"P5":
            raise ValueError(f"{path} is not a binary (P5) PGM")
        dims = fh.readline().split()
        maxval = int(fh.readline())
        if maxval != 255:
            raise ValueError(f"only 8-bit PGM supported, got maxval {maxval}")
        nx, ny = int(dims[0]), int(dims[1])
        raw = fh.read(nx * ny)
    sidecar = json.loads(_sidecar_path(path).read_text())
    grid = GridSpec(nx=nx, ny=ny, h=float(sidecar["h"]))
    values = np.frombuffer(raw, dtype=np.uint8).reshape(grid.shape).astype(np.float64)
    values = sidecar["offset"] + sidecar["scale"] * values
    return ScalarField(grid, values)
