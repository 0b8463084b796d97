"""Parameter sweeps, single-point reports and their flat-file output."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .analytics import Branch, dressed_spectrum, hpb_params, nearest_condition
from .errors import BlockadeError, ParameterError
from .model import ModelVariant, SystemParams
from .solver import (
    radiance_from_means,
    solve_point,
    truncation_check,
)

AXIS_NAMES = ("Delta", "delta", "K", "eta")
PN_COLUMNS = 5
DEFAULT_OBSERVABLES = frozenset({"mean_photon", "g2", "pn"})
GAMMA_NOTE = "gamma = kappa unless configured otherwise; this default is an assumption"


@dataclass(frozen=True)
class SweepAxis:
    """One sweep axis. ``Delta`` and ``delta`` are in units of ``g1``, ``K`` is
    ``g2 / g1`` and ``eta`` is in units of ``kappa``."""

    name: str
    start: float
    stop: float
    num: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ParameterError(f"axis must be one of {AXIS_NAMES}, got {self.name!r}")
        if self.num < 2:
            raise ParameterError(f"axis {self.name} needs at least 2 points, got {self.num}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ParameterError(f"axis {self.name} range must be finite")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


@dataclass(frozen=True)
class SweepGrid:
    x: SweepAxis
    y: SweepAxis | None = None
    base: SystemParams = SystemParams()
    n_cav: int = 5

    def __post_init__(self):
        if self.y is not None and self.y.name == self.x.name:
            raise ParameterError("x and y axes must sweep different parameters")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.y.num if self.y else 1, self.x.num)

    def points(self) -> list[tuple[int, int, float, float, SystemParams]]:
        """``(iy, ix, x, y, params)`` in output order: y index major, x index minor."""
        xs = self.x.values()
        ys = self.y.values() if self.y else [math.nan]
        out = []
        for iy, yv in enumerate(ys):
            for ix, xv in enumerate(xs):
                p = apply_axis(self.base, self.x.name, xv)
                if self.y:
                    p = apply_axis(p, self.y.name, yv)
                out.append((iy, ix, float(xv), float(yv), p))
        return out


def apply_axis(params: SystemParams, name: str, value: float) -> SystemParams:
    value = float(value)
    if name == "Delta":
        return params.replace(Delta=value * params.g1)
    if name == "delta":
        return params.replace(delta=value * params.g1)
    if name == "K":
        return params.replace(g2=value * params.g1)
    if name == "eta":
        return params.replace(eta=value)
    raise ParameterError(f"unknown axis {name!r}")


@dataclass
class SweepRow:
    iy: int
    ix: int
    x: float
    y: float
    params: SystemParams
    mean_photon: float = math.nan
    g2_zero: float = math.nan
    radiance: float = math.nan
    pn: tuple[float, ...] = (math.nan,) * PN_COLUMNS
    converged: bool = False
    drift: float = math.nan
    residual: float = math.nan
    trace_error: float = math.nan
    hermiticity_error: float = math.nan
    min_eigenvalue: float = math.nan
    error: str = ""


@dataclass
class SweepResult:
    grid: SweepGrid | None
    rows: list[SweepRow]
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    def as_grid(self, name: str) -> np.ndarray:
        """Column reshaped to ``(len(y), len(x))``."""
        return self.column(name).reshape(self.grid.shape)


def evaluate_point(
    params: SystemParams,
    n_cav: int = 5,
    observables=DEFAULT_OBSERVABLES,
    check_truncation: bool = True,
) -> dict:
    """Observables of one parameter point as a dict of :class:`SweepRow` fields.

    Points whose Fock truncation has not converged report only the diagnostics.
    """
    out: dict = {}
    try:
        dm, obs = solve_point(params, ModelVariant.TWO_QUBIT, n_cav)
        out.update(residual=dm.residual, trace_error=dm.trace_error,
                   hermiticity_error=dm.hermiticity_error, min_eigenvalue=dm.min_eigenvalue)
        if check_truncation:
            converged, drift = truncation_check(
                params, ModelVariant.TWO_QUBIT, ModelVariant.TWO_QUBIT.config(n_cav), base=obs
            )
        else:
            converged, drift = True, math.nan
        out.update(converged=converged, drift=drift)
        if not converged:
            out["error"] = f"Fock truncation not converged at n_cav={n_cav} (drift {drift:.2e})"
            return out
        out["mean_photon"] = obs.mean_photon
        out["g2_zero"] = obs.g2_zero
        pn = list(obs.pn[:PN_COLUMNS]) + [0.0] * max(0, PN_COLUMNS - len(obs.pn))
        out["pn"] = tuple(float(v) for v in pn)
        if math.isnan(obs.g2_zero):
            out["error"] = "g2 undefined: cavity is dark"
        if "radiance" in observables:
            singles = [
                solve_point(params, v, n_cav)[1].mean_photon
                for v in (ModelVariant.SINGLE_QUBIT_1, ModelVariant.SINGLE_QUBIT_2)
            ]
            out["radiance"] = radiance_from_means(obs.mean_photon, *singles)
    except BlockadeError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def _run_points(points, n_cav, observables, threads, check_truncation):
    rows: list[SweepRow | None] = [None] * len(points)

    def work(k):
        iy, ix, xv, yv, p = points[k]
        if isinstance(p, Exception):
            rows[k] = SweepRow(iy, ix, xv, yv, params=None, error=f"{type(p).__name__}: {p}")
            return
        rows[k] = SweepRow(iy, ix, xv, yv, p, **evaluate_point(p, n_cav, observables, check_truncation))

    # one BLAS thread per solve keeps every number independent of the worker count
    with threadpool_limits(limits=1):
        if threads <= 1:
            for k in range(len(points)):
                work(k)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(work, range(len(points))))
    return rows


def _metadata(kind: str, config: dict | None, n_cav: int, started: float, threads: int) -> dict:
    return {
        "kind": kind,
        "tool": "hybrid_blockade",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "n_cav": n_cav,
        "threads": threads,
        "wall_clock_s": time.perf_counter() - started,
        "effective_config": config or {},
        "notes": [GAMMA_NOTE],
    }


def run_sweep(
    grid: SweepGrid,
    observables=DEFAULT_OBSERVABLES,
    threads: int = 1,
    check_truncation: bool = True,
    config: dict | None = None,
) -> SweepResult:
    started = time.perf_counter()
    rows = _run_points(grid.points(), grid.n_cav, set(observables), threads, check_truncation)
    meta = _metadata("sweep", config, grid.n_cav, started, threads)
    meta["grid"] = {
        "x": dataclasses.asdict(grid.x),
        "y": dataclasses.asdict(grid.y) if grid.y else None,
        "base": grid.base.as_dict(),
        "units": "Delta, delta in g1; K = g2/g1; eta and rates in kappa",
    }
    return SweepResult(grid=grid, rows=rows, metadata=meta)


def run_hpb_track(
    K_values,
    branch: Branch | str,
    base: SystemParams = SystemParams(),
    n_cav: int = 5,
    observables=DEFAULT_OBSERVABLES | {"radiance"},
    threads: int = 1,
    check_truncation: bool = True,
    config: dict | None = None,
) -> SweepResult:
    """Observables along a hybrid-blockade trajectory, one row per ``K``."""
    started = time.perf_counter()
    branch = Branch(branch)
    points = []
    for i, K in enumerate(K_values):
        try:
            p = hpb_params(float(K), branch, base)
        except BlockadeError as exc:
            p = exc
        points.append((0, i, float(K), math.nan, p))
    rows = _run_points(points, n_cav, set(observables), threads, check_truncation)
    meta = _metadata("hpb-track", config, n_cav, started, threads)
    meta["track"] = {"branch": branch.value, "K": [float(k) for k in K_values], "base": base.as_dict()}
    return SweepResult(grid=None, rows=rows, metadata=meta)


def run_point(params: SystemParams, n_cav: int = 5, radiance: bool = True) -> dict:
    """Everything known about one parameter point, as a JSON-ready dict."""
    report: dict = {"params": params.as_dict(), "n_cav": n_cav}
    dm, obs = solve_point(params, ModelVariant.TWO_QUBIT, n_cav)
    converged, drift = truncation_check(
        params, ModelVariant.TWO_QUBIT, ModelVariant.TWO_QUBIT.config(n_cav), base=obs
    )
    report["observables"] = {
        "mean_photon": obs.mean_photon,
        "g2_zero": None if math.isnan(obs.g2_zero) else obs.g2_zero,
        "g2_defined": obs.g2_defined,
        "radiance": None,
    }
    if radiance and params.eta > 0:
        singles = [solve_point(params, v, n_cav)[1].mean_photon
                   for v in (ModelVariant.SINGLE_QUBIT_1, ModelVariant.SINGLE_QUBIT_2)]
        report["observables"]["radiance"] = radiance_from_means(obs.mean_photon, *singles)
        report["reference_mean_photon"] = singles
    report["pn"] = [float(v) for v in obs.pn]
    spectrum = dressed_spectrum(params)
    report["dressed_roots"] = {
        "single_excitation": spectrum.single_excitation.tolist(),
        "two_excitation": spectrum.two_excitation.tolist(),
    }
    D, d = params.Delta, params.delta
    report["qdi_lines"] = {f"delta={k}*Delta": d - k * D for k in (2, 3, 4)}
    report["nearest_condition"] = nearest_condition(params)
    report["diagnostics"] = {
        "converged": converged,
        "drift": drift,
        "residual": dm.residual,
        "min_eigenvalue": dm.min_eigenvalue,
        "trace_error": dm.trace_error,
        "hermiticity_error": dm.hermiticity_error,
    }
    report["notes"] = [GAMMA_NOTE]
    return report


# -- output ----------------------------------------------------------------------

CSV_COLUMNS = (
    ["iy", "ix", "x", "y", "g1", "g2", "delta", "Delta", "eta", "kappa", "gamma",
     "mean_photon", "g2_zero", "radiance"]
    + [f"p{k}" for k in range(PN_COLUMNS)]
    + ["converged", "drift", "residual", "error"]
)
PARAM_FIELDS = ("g1", "g2", "delta", "Delta", "eta", "kappa", "gamma")


def fmt(value: float) -> str:
    """17 significant digits in scientific notation; ``NaN`` for undefined."""
    value = float(value)
    if math.isnan(value):
        return "NaN"
    return f"{value:.16e}"


def row_record(row: SweepRow) -> dict:
    rec = {"iy": row.iy, "ix": row.ix, "x": row.x, "y": row.y}
    for name in PARAM_FIELDS:
        rec[name] = getattr(row.params, name) if row.params else math.nan
    rec.update(mean_photon=row.mean_photon, g2_zero=row.g2_zero, radiance=row.radiance)
    for k, v in enumerate(row.pn):
        rec[f"p{k}"] = v
    rec.update(converged=row.converged, drift=row.drift, residual=row.residual,
               trace_error=row.trace_error, hermiticity_error=row.hermiticity_error,
               min_eigenvalue=row.min_eigenvalue, error=row.error)
    return rec


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.rows:
        rec = row_record(row)
        out = []
        for col in CSV_COLUMNS:
            v = rec[col]
            if col in ("iy", "ix"):
                out.append(str(v))
            elif col == "converged":
                out.append("true" if v else "false")
            elif col == "error":
                out.append(v)
            else:
                out.append(fmt(v))
        writer.writerow(out)
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (np.floating,)):
        return _json_safe(float(v))
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def to_json(result: SweepResult) -> str:
    records = [{k: _json_safe(v) for k, v in row_record(r).items()} for r in result.rows]
    return json.dumps({"metadata": result.metadata, "rows": records}, indent=1, default=_json_safe)


def write_result(result: SweepResult, path, fmt_name: str = "csv") -> None:
    text = to_csv(result) if fmt_name == "csv" else to_json(result)
    with open(path, "w", newline="") as fh:
        fh.write(text)
