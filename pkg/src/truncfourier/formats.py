"""CSV and JSON sidecar formats.

Every real is written with 17 significant digits so that float64 values
round-trip exactly.  Files are written atomically: content goes to a
temporary file in the target directory which is then renamed.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .halfline import HalfLineFunction, LogGrid, MuGrid
from .unitary import ModelElement

__all__ = [
    "fmt",
    "atomic_write",
    "csv_text",
    "write_halfline",
    "read_halfline",
    "write_model_element",
    "read_model_element",
    "sidecar_path",
]


def fmt(value) -> str:
    return format(float(value), ".17g")


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows, comments=()) -> str:
    """Render rows of numbers as CSV; `comments` become leading '# ' lines."""
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def _read_rows(path, header):
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    found = next(reader, None)
    if found != list(header):
        raise ValueError(f"{path}: expected header {','.join(header)}, found {found}")
    rows = [[float(v) for v in row] for row in reader if row]
    return np.array(rows, dtype=float).reshape(-1, len(header))


def _read_sidecar(path):
    side = sidecar_path(path)
    if not side.exists():
        raise ValueError(f"missing grid sidecar {side}")
    with open(side) as fh:
        return json.load(fh)


HALFLINE_HEADER = ("xi", "re", "im")
MODEL_HEADER = ("mu", "re_plus", "im_plus", "re_minus", "im_minus")


def write_halfline(x: HalfLineFunction, path) -> None:
    rows = zip(x.grid.xi, x.values.real, x.values.imag)
    atomic_write(path, csv_text(HALFLINE_HEADER, rows))
    atomic_write(sidecar_path(path), json.dumps(x.grid.to_dict(), sort_keys=True) + "\n")


def read_halfline(path) -> HalfLineFunction:
    meta = _read_sidecar(path)
    grid = LogGrid(meta["eta_min"], meta["eta_max"], meta["n"])
    data = _read_rows(path, HALFLINE_HEADER)
    if len(data) != grid.n:
        raise ValueError(f"{path}: {len(data)} rows but the sidecar says n = {grid.n}")
    if not np.allclose(data[:, 0], grid.xi, rtol=1e-12, atol=0.0):
        raise ValueError(f"{path}: xi column does not match the sidecar grid")
    return HalfLineFunction(grid, data[:, 1] + 1j * data[:, 2])


def write_model_element(phi: ModelElement, path) -> None:
    rows = zip(phi.mu_grid.mu, phi.plus.real, phi.plus.imag, phi.minus.real, phi.minus.imag)
    atomic_write(path, csv_text(MODEL_HEADER, rows))
    atomic_write(sidecar_path(path), json.dumps(phi.mu_grid.to_dict(), sort_keys=True) + "\n")


def read_model_element(path) -> ModelElement:
    meta = _read_sidecar(path)
    grid = MuGrid(meta["mu_max"], meta["m"])
    data = _read_rows(path, MODEL_HEADER)
    if len(data) != grid.m:
        raise ValueError(f"{path}: {len(data)} rows but the sidecar says m = {grid.m}")
    if not np.allclose(data[:, 0], grid.mu, rtol=1e-12, atol=1e-300):
        raise ValueError(f"{path}: mu column does not match the sidecar grid")
    return ModelElement(grid, data[:, 1] + 1j * data[:, 2], data[:, 3] + 1j * data[:, 4])
