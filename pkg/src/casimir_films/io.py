"""Dielectric data files and result CSVs."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .dielectric import AbsorptionSpectrum, DielectricError, ImaginaryAxisResponse

__all__ = [
    "IMAGINARY_AXIS_HEADER",
    "ABSORPTION_HEADER",
    "SpectrumFileError",
    "load_spectrum_csv",
    "write_curve_csv",
    "format_value",
]

IMAGINARY_AXIS_HEADER = ("xi_eV", "eps_xx", "eps_yy", "eps_zz")
ABSORPTION_HEADER = ("omega_eV", "eps2_xx", "eps2_yy", "eps2_zz")


class SpectrumFileError(DielectricError):
    pass


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            yield lineno, text


def load_spectrum_csv(path):
    """Read a tensor data file.

    Returns a tuple ``(xx, yy, zz)`` of :class:`ImaginaryAxisResponse` for
    the ``xi_eV,...`` header or of :class:`AbsorptionSpectrum` for the
    ``omega_eV,...`` header. Identical columns give equal objects, so the
    tensor classification sees them as equal.
    """
    path = Path(path)
    lines = list(_data_lines(path))
    if not lines:
        raise SpectrumFileError(f"{path}: no header found")
    header = tuple(h.strip() for h in next(csv.reader([lines[0][1]])))
    if header == IMAGINARY_AXIS_HEADER:
        kind = ImaginaryAxisResponse
    elif header == ABSORPTION_HEADER:
        kind = AbsorptionSpectrum
    else:
        raise SpectrumFileError(
            f"{path}: unknown header {','.join(header)!r}; expected "
            f"{','.join(IMAGINARY_AXIS_HEADER)!r} or {','.join(ABSORPTION_HEADER)!r}"
        )
    rows = []
    for lineno, text in lines[1:]:
        fields = next(csv.reader([text]))
        if len(fields) != 4:
            raise SpectrumFileError(f"{path}:{lineno}: expected 4 columns, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise SpectrumFileError(f"{path}:{lineno}: {exc}") from None
    table = np.array(rows, dtype=float).reshape(-1, 4)
    freq = table[:, 0]
    if np.any(np.diff(freq) <= 0):
        raise SpectrumFileError(f"{path}: frequency column must be strictly increasing")
    if kind is AbsorptionSpectrum and np.any(table[:, 1:] < 0):
        raise SpectrumFileError(f"{path}: passivity violated, eps2 must be >= 0")
    try:
        return tuple(kind(tuple(freq), tuple(table[:, j])) for j in (1, 2, 3))
    except DielectricError as exc:
        raise SpectrumFileError(f"{path}: {exc}") from None


def format_value(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return f"{x:.12e}"


def write_curve_csv(path, rows, with_ratio: bool):
    """Write rows of ``(L, energy, pressure, ratio, rel_err)``; ``rel_err``
    may be a preformatted string (failed points)."""
    header = ["L_nm", "energy_Jm2", "pressure_Pa"]
    if with_ratio:
        header.append("ratio")
    header.append("rel_err")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for L, energy, pressure, ratio, rel_err in rows:
            cells = [format_value(float(L)), format_value(energy), format_value(pressure)]
            if with_ratio:
                cells.append(format_value(ratio))
            cells.append(rel_err if isinstance(rel_err, str) else f"{rel_err:.3e}")
            fh.write(",".join(cells) + "\n")
