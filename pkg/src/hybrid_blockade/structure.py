"""Feature detection on Delta/delta maps: ridges, valleys and interference minima.

Maps are arrays indexed ``[iy, ix]`` with ``x = Delta / g1`` and
``y = delta / g1``. A detected feature at grid node ``(xf, yf)`` lies "within
one grid cell" of an analytic curve point ``(xc, yc)`` when
``|xf - xc| <= dx`` and ``|yf - yc| <= dy``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytics import cavity_weight, ela_branches
from .model import SystemParams

DARK_WEIGHT = 0.01


@dataclass
class Sample:
    x: float
    y: float
    ok: bool
    note: str = ""


def _local_extrema(values: np.ndarray, kind: str) -> np.ndarray:
    v = np.asarray(values)
    inner = v[1:-1]
    if kind == "max":
        hit = (inner > v[:-2]) & (inner > v[2:])
    else:
        hit = (inner < v[:-2]) & (inner < v[2:])
    return np.nonzero(hit)[0] + 1


def _spacing(axis: np.ndarray) -> float:
    return float(axis[1] - axis[0])


def ridge_tracking(mean_photon: np.ndarray, xs, ys, params: SystemParams,
                   dark_weight: float = DARK_WEIGHT) -> tuple[list[Sample], list[Sample]]:
    """Match each one-excitation resonance ``Delta = eps1(delta)`` to a photon-number ridge.

    Ridges are local maxima along ``Delta``. Resonances whose dressed state has
    cavity weight below ``dark_weight`` are dark and returned separately.
    """
    xs, ys = np.asarray(xs), np.asarray(ys)
    dx, dy = _spacing(xs), _spacing(ys)
    peaks = [_local_extrema(row, "max") for row in mean_photon]
    checked, dark = [], []
    for iy, y in enumerate(ys):
        p = params.replace(delta=y * params.g1)
        for eps in ela_branches(p.delta, p):
            xc = eps / params.g1
            if not xs[0] + dx < xc < xs[-1] - dx:
                continue
            if cavity_weight(eps, p) < dark_weight:
                dark.append(Sample(xc, y, True, "dark"))
                continue
            ok = any(
                abs(ys[jy] - y) <= dy + 1e-12 and np.any(np.abs(xs[peaks[jy]] - xc) <= dx + 1e-12)
                for jy in range(max(0, iy - 1), min(len(ys), iy + 2))
            )
            checked.append(Sample(xc, y, ok))
    return checked, dark


def line_samples(xs, ys, ratio: float) -> list[tuple[int, int]]:
    """Grid nodes ``(iy, ix)`` lying on ``delta = ratio * Delta`` (to half a cell)."""
    xs, ys = np.asarray(xs), np.asarray(ys)
    dy = _spacing(ys)
    out = []
    for ix, x in enumerate(xs):
        iy = int(np.argmin(np.abs(ys - ratio * x)))
        if abs(ys[iy] - ratio * x) <= 0.5 * dy + 1e-12:
            out.append((iy, ix))
    return out


def valley_g2(mean_photon: np.ndarray, g2: np.ndarray, xs, ys, ratio: float = 2.0) -> list[Sample]:
    """``g2 > 1`` test on the samples where ``<a^+a>`` forms a valley across the line.

    A valley sample is a node on the line whose photon number is below both
    neighbours along ``delta``.
    """
    out = []
    for iy, ix in line_samples(xs, ys, ratio):
        if 0 < iy < len(ys) - 1:
            col = mean_photon[:, ix]
            if col[iy] < col[iy - 1] and col[iy] < col[iy + 1]:
                out.append(Sample(float(xs[ix]), float(ys[iy]), bool(g2[iy, ix] > 1.0), f"g2={g2[iy, ix]:.3g}"))
    return out


def qdi_minimum_tracking(g2: np.ndarray, xs, ys, ratio: float) -> list[Sample]:
    """Match each point of ``delta = ratio * Delta`` to a local ``g2`` minimum along ``delta``.

    The crossing point of all lines (``Delta = 0``) is skipped.
    """
    xs, ys = np.asarray(xs), np.asarray(ys)
    dx, dy = _spacing(xs), _spacing(ys)
    minima = [_local_extrema(g2[:, ix], "min") for ix in range(len(xs))]
    out = []
    for ix, x in enumerate(xs):
        yc = ratio * x
        if abs(x) < 0.5 * dx or not ys[0] + dy < yc < ys[-1] - dy:
            continue
        ok = any(
            np.any(np.abs(ys[minima[jx]] - yc) <= dy + 1e-12)
            for jx in range(max(0, ix - 1), min(len(xs), ix + 2))
            if abs(xs[jx] - x) <= dx + 1e-12
        )
        out.append(Sample(float(x), float(yc), ok))
    return out
