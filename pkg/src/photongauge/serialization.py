"""Reading and writing fields.

Two containers are supported, chosen by file suffix:

``.npz``
    numpy archive with arrays ``format``, ``representation``, ``extents``
    (3x2), ``points`` (nx, ny, nz), ``gauge`` (3, NaN for vector fields),
    ``time`` and ``values`` (npoints x ncomp, complex128, x fastest).

anything else
    Text. A header of ``key value...`` lines, then one line per grid point
    (x fastest) holding ``re im`` pairs for each component. All floats are
    written with 17 significant digits, so a round trip is bit-exact::

        # photongauge-field 1
        representation spinor
        points 64 64 64
        extents kx_min kx_max ky_min ky_max kz_min kz_max
        gauge Ix Iy Iz            (or "gauge none" for vector fields)
        time t
        components 2
        layout x-fastest
        values
        re_1 im_1 re_2 im_2
        ...
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .fields import MomentumGrid, SpinorField, VectorField

FORMAT_TAG = "photongauge-field"
FORMAT_VERSION = 1


def _g(x: float) -> str:
    return format(float(x), ".17g")


def save_field(path, field) -> Path:
    path = Path(path)
    rep = "spinor" if isinstance(field, SpinorField) else "vector"
    flat = field.flat_values()
    if path.suffix == ".npz":
        gauge = np.array(field.gauge) if rep == "spinor" else np.full(3, np.nan)
        np.savez(
            path,
            format=np.array(f"{FORMAT_TAG} {FORMAT_VERSION}"),
            representation=np.array(rep),
            extents=np.array(field.grid.extents),
            points=np.array(field.grid.points),
            gauge=gauge,
            time=np.array(field.time),
            values=flat,
        )
        return path
    lines = [
        f"# {FORMAT_TAG} {FORMAT_VERSION}",
        f"representation {rep}",
        "points " + " ".join(str(n) for n in field.grid.points),
        "extents " + " ".join(_g(x) for e in field.grid.extents for x in e),
        "gauge " + (" ".join(_g(x) for x in field.gauge) if rep == "spinor" else "none"),
        f"time {_g(field.time)}",
        f"components {field.ncomp}",
        "layout x-fastest",
        "values",
    ]
    parts = np.empty((flat.shape[0], 2 * field.ncomp))
    parts[:, 0::2] = flat.real
    parts[:, 1::2] = flat.imag
    body = "\n".join(" ".join(_g(x) for x in row) for row in parts)
    path.write_text("\n".join(lines) + "\n" + body + "\n", encoding="utf-8")
    return path


def _build(rep: str, grid: MomentumGrid, gauge, time: float, flat: np.ndarray):
    ncomp = 2 if rep == "spinor" else 3
    if flat.shape != (grid.size, ncomp):
        raise ValueError(f"expected {grid.size} x {ncomp} values, found {flat.shape}")
    values = flat.reshape(grid.shape + (ncomp,))
    if rep == "spinor":
        return SpinorField(grid, values, tuple(gauge), time)
    return VectorField(grid, values, time)


def load_field(path):
    path = Path(path)
    if path.suffix == ".npz":
        with np.load(path) as data:
            tag = str(data["format"])
            if tag != f"{FORMAT_TAG} {FORMAT_VERSION}":
                raise ValueError(f"unsupported field format {tag!r}")
            rep = str(data["representation"])
            grid = MomentumGrid(tuple(map(tuple, data["extents"])), tuple(data["points"]))
            return _build(rep, grid, data["gauge"], float(data["time"]), data["values"])

    with path.open(encoding="utf-8") as fh:
        first = fh.readline().split()
        if first[1:] != [FORMAT_TAG, str(FORMAT_VERSION)]:
            raise ValueError(f"{path} is not a {FORMAT_TAG} v{FORMAT_VERSION} file")
        header = {}
        for line in fh:
            key, *rest = line.split()
            if key == "values":
                break
            header[key] = rest
        body = np.loadtxt(fh, dtype=float, ndmin=2)
    if header.get("layout") != ["x-fastest"]:
        raise ValueError("only the x-fastest layout is supported")
    rep = header["representation"][0]
    ext = [float(x) for x in header["extents"]]
    grid = MomentumGrid(((ext[0], ext[1]), (ext[2], ext[3]), (ext[4], ext[5])),
                        tuple(int(n) for n in header["points"]))
    gauge = None if header["gauge"] == ["none"] else [float(x) for x in header["gauge"]]
    flat = body[:, 0::2] + 1j * body[:, 1::2]
    return _build(rep, grid, gauge, float(header["time"][0]), flat)
