"""Parameter sweeps, JSON configs, CSV/JSON output and the figure presets."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

import numpy as np

from .capacity import DEFAULT_MAX_ITER, DEFAULT_TOL, CapacityReport, detected_capacity
from .families import ChannelSpec, constant_ratio_max_gamma, get_family

log = logging.getLogger(__name__)

CONFIG_KEYS = {"family", "d", "d_list", "params", "sweep"}
AXIS_KEYS = {"from", "to", "step"}
REPORT_COLUMNS = ["i_direct", "i_fourier", "c_det", "winner", "chi_direct", "chi_fourier",
                  "delta", "prior_entropy"]


class ConfigError(ValueError):
    pass


@dataclass
class SweepSpec:
    """A channel family with fixed parameters and one or more swept axes.

    ``axes`` maps parameter names to value lists; grid points are visited
    with ``d`` outermost, then the axes in insertion order.  ``axes_by_dim``
    overrides ``axes`` for particular dimensions, for sweeps whose valid
    range depends on ``d``.
    """

    family: str
    dims: list[int]
    params: dict[str, Any] = field(default_factory=dict)
    axes: dict[str, list] = field(default_factory=dict)
    axes_by_dim: dict[int, dict[str, list]] = field(default_factory=dict)

    def axes_for(self, d: int) -> dict[str, list]:
        return self.axes_by_dim.get(d, self.axes)

    def points(self) -> Iterator[tuple[int, dict[str, Any]]]:
        for d in self.dims:
            axes = self.axes_for(d)
            names = list(axes)
            for combo in _product([axes[n] for n in names]):
                params = dict(self.params)
                params.update(zip(names, combo))
                yield d, params

    def __len__(self) -> int:
        return sum(math.prod(len(v) for v in self.axes_for(d).values()) for d in self.dims)


def _product(lists: list[list]) -> Iterator[tuple]:
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _product(lists[1:]):
            yield (head, *tail)


def grid(start, stop, step) -> list:
    """Inclusive arithmetic grid; integer-valued when all three ends are integers."""
    if all(isinstance(x, int) and not isinstance(x, bool) for x in (start, stop, step)):
        if step <= 0:
            raise ConfigError("grid step must be positive")
        return list(range(start, stop + 1, step))
    start, stop, step = float(start), float(stop), float(step)
    if not step > 0:
        raise ConfigError("grid step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ConfigError(f"empty grid from {start} to {stop}")
    return [round(start + k * step, 12) for k in range(count)]


def _check_value(family: str, key: str, value) -> None:
    fam = get_family(family)
    if key not in fam.params:
        raise ConfigError(f"unknown parameter {key!r} for family {family!r}")
    kind = fam.params[key]
    if key in fam.per_level and isinstance(value, list):
        values = value
    else:
        values = [value]
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"parameter {key!r} must be numeric, got {v!r}")
        if kind is int and not isinstance(v, int):
            raise ConfigError(f"parameter {key!r} must be an integer, got {v!r}")


def _parse_axis(family: str, key: str, spec) -> list:
    if isinstance(spec, list):
        values = spec
    elif isinstance(spec, dict):
        extra = set(spec) - AXIS_KEYS - {"values"}
        if extra:
            raise ConfigError(f"unknown key {sorted(extra)[0]!r} in sweep axis {key!r}")
        if "values" in spec:
            values = spec["values"]
        elif AXIS_KEYS <= set(spec):
            values = grid(spec["from"], spec["to"], spec["step"])
        else:
            raise ConfigError(f"sweep axis {key!r} needs from/to/step or values")
    else:
        raise ConfigError(f"sweep axis {key!r} must be a list or an object")
    if not values:
        raise ConfigError(f"sweep axis {key!r} is empty")
    for v in values:
        _check_value(family, key, v)
    return list(values)


def parse_config(text: str) -> SweepSpec:
    """Parse a JSON sweep document.

    Recognized keys are ``family``, ``d`` or ``d_list``, ``params`` (fixed
    values) and ``sweep`` (axis name to ``{"from", "to", "step"}``,
    ``{"values": [...]}`` or a bare list).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(doc) - CONFIG_KEYS
    if extra:
        raise ConfigError(f"unknown config key {sorted(extra)[0]!r}")
    if "family" not in doc:
        raise ConfigError("config is missing 'family'")
    family = doc["family"]
    try:
        fam = get_family(family)
    except ValueError:
        raise ConfigError(f"unknown channel family {family!r}") from None

    if "d" in doc and "d_list" in doc:
        raise ConfigError("give either 'd' or 'd_list', not both")
    if "d" in doc:
        dims = [doc["d"]]
    elif "d_list" in doc:
        dims = doc["d_list"]
        if not isinstance(dims, list) or not dims:
            raise ConfigError("'d_list' must be a nonempty list")
    else:
        raise ConfigError("config is missing 'd' or 'd_list'")
    for d in dims:
        if isinstance(d, bool) or not isinstance(d, int) or d < 2:
            raise ConfigError(f"dimension must be an integer >= 2, got {d!r}")

    params = doc.get("params", {})
    sweep = doc.get("sweep", {})
    if not isinstance(params, dict) or not isinstance(sweep, dict):
        raise ConfigError("'params' and 'sweep' must be objects")
    for key, value in params.items():
        _check_value(family, key, value)
    axes = {}
    for key, spec in sweep.items():
        if key in params:
            raise ConfigError(f"parameter {key!r} is both fixed and swept")
        axes[key] = _parse_axis(family, key, spec)
    missing = set(fam.params) - set(params) - set(axes)
    if missing:
        raise ConfigError(f"missing parameter {sorted(missing)[0]!r} for family {family!r}")
    return SweepSpec(family=family, dims=list(dims), params=dict(params), axes=axes)


@dataclass
class SweepRow:
    """Outcome of one grid point: a report, or the reason it has none."""

    family: str
    d: int
    params: dict[str, Any]
    report: CapacityReport | None = None
    status: str = "ok"  # ok | skipped | failed
    reason: str = ""


def _evaluate(args) -> SweepRow:
    family, d, params, tol, max_iter = args
    try:
        spec = ChannelSpec(family, d, params)
        spec.transition()
    except ValueError as exc:
        return SweepRow(family, d, params, status="skipped", reason=str(exc))
    try:
        report = detected_capacity(spec, tol=tol, max_iter=max_iter)
    except Exception as exc:  # recorded in-row; a sweep never aborts on one point
        return SweepRow(family, d, params, status="failed", reason=f"{type(exc).__name__}: {exc}")
    return SweepRow(family, d, params, report=report)


def run_sweep(sweep: SweepSpec, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
              workers: int | None = None) -> list[SweepRow]:
    """Evaluate every grid point; rows come back in grid order whatever ``workers`` is."""
    jobs = [(sweep.family, d, params, tol, max_iter) for d, params in sweep.points()]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_evaluate(job) for job in jobs]
    for row in rows:
        if row.status != "ok":
            log.warning("%s d=%d %s %s: %s", row.family, row.d, row.params, row.status, row.reason)
    return rows


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    if isinstance(x, list):
        return ";".join(_fmt(v) for v in x)
    return str(x)


def _round12(x: float) -> float:
    return float(format(float(x), ".12g"))


def _reports(rows: Iterable) -> list[CapacityReport]:
    out = []
    for r in rows:
        if isinstance(r, SweepRow):
            if r.report is not None:
                out.append(r.report)
        else:
            out.append(r)
    return out


def _param_columns(reports: list[CapacityReport]) -> list[str]:
    cols: list[str] = []
    for r in reports:
        if r.spec is None:
            continue
        for key in get_family(r.spec.family).params:
            if key not in cols:
                cols.append(key)
    return cols


def to_csv(rows) -> str:
    reports = _reports(rows)
    pcols = _param_columns(reports)
    dmax = max(r.d for r in reports)
    header = (["family", "d"] + pcols + REPORT_COLUMNS
              + [f"prior_{n}" for n in range(dmax)])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in reports:
        params = r.spec.params if r.spec is not None else {}
        family = r.spec.family if r.spec is not None else ""
        line = [family, str(r.d)] + [_fmt(params[k]) if k in params else "" for k in pcols]
        line += [_fmt(getattr(r, k)) for k in REPORT_COLUMNS]
        line += [_fmt(float(x)) for x in r.prior_direct] + [""] * (dmax - r.d)
        writer.writerow(line)
    return buf.getvalue()


def to_json(rows) -> str:
    objs = []
    for r in _reports(rows):
        obj = r.to_dict()
        for k, v in obj.items():
            if isinstance(v, float):
                obj[k] = _round12(v)
        obj["prior_direct"] = [_round12(x) for x in obj["prior_direct"]]
        objs.append(obj)
    return json.dumps(objs, indent=2) + "\n"


def emit(rows, fmt: str = "csv", destination=None) -> str:
    """Serialize reports (or sweep rows; skipped rows are left out) as CSV or JSON.

    ``destination`` may be a path, an open text file, or ``None`` to only
    return the text.
    """
    reports = _reports(rows)
    if not reports:
        raise ValueError("nothing to emit")
    if fmt == "csv":
        text = to_csv(reports)
    elif fmt == "json":
        text = to_json(reports)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text)
    return text


def load_reports(text: str) -> list[CapacityReport]:
    """Read back the JSON written by :func:`emit`."""
    out = []
    for obj in json.loads(text):
        spec = (ChannelSpec(obj["family"], obj["d"], obj["params"])
                if obj.get("family") is not None else None)
        out.append(CapacityReport(
            spec=spec,
            i_direct=obj["i_direct"], i_fourier=obj["i_fourier"], c_det=obj["c_det"],
            winner=obj["winner"], chi_direct=obj["chi_direct"],
            chi_fourier=obj["chi_fourier"], delta=obj["delta"],
            prior_direct=np.array(obj["prior_direct"], dtype=float),
            prior_entropy=obj["prior_entropy"], ba_iterations=obj["ba_iterations"],
            ba_certified=obj.get("ba_certified", True),
        ))
    return out


@dataclass(frozen=True)
class FigurePreset:
    id: str
    description: str
    sweep: SweepSpec
    columns: tuple[str, ...]


GAMMA_UNIT = grid(0.0, 1.0, 0.01)
D_SURFACE = list(range(2, 9))


def _constant_ratio_axes(dims: list[int]) -> dict[int, dict[str, list]]:
    out = {}
    for d in dims:
        gmax = constant_ratio_max_gamma(d)
        out[d] = {"gamma": [g for g in GAMMA_UNIT if g <= gmax]}
    return out


def _presets() -> dict[str, FigurePreset]:
    main = ("c_det", "i_direct", "i_fourier", "winner")
    p = [
        FigurePreset("fig1", "bosonic dissipation, C_DET vs d and gamma",
                     SweepSpec("bosonic", D_SURFACE, axes={"gamma": GAMMA_UNIT}), main),
        FigurePreset("fig2", "bosonic dissipation at d=8 with the Fourier Holevo quantity",
                     SweepSpec("bosonic", [8], axes={"gamma": GAMMA_UNIT}),
                     main + ("chi_fourier",)),
        FigurePreset("fig3", "bosonic dissipation, rescaled gap delta vs d and gamma",
                     SweepSpec("bosonic", D_SURFACE, axes={"gamma": GAMMA_UNIT}), ("delta",)),
        FigurePreset("fig4", "hypergeometric decay, d=8, L=12, vs M (fig5 is the M=5 prior)",
                     SweepSpec("hypergeometric", [8], params={"L": 12},
                               axes={"M": list(range(1, 13))}),
                     main + ("chi_fourier", "prior_direct")),
        FigurePreset("fig6", "negative-hypergeometric decay, d=8, L=32, vs M",
                     SweepSpec("negative_hypergeometric", [8], params={"L": 32},
                               axes={"M": list(range(1, 32 - 7 + 1))}),
                     main + ("chi_fourier",)),
        FigurePreset("fig7", "beta-binomial decay, d=8, vs alpha and beta",
                     SweepSpec("beta_binomial", [8],
                               axes={"alpha": grid(0.1, 5.0, 0.1), "beta": grid(0.1, 5.0, 0.1)}),
                     main),
        FigurePreset("fig8", "beta-binomial decay, d=8, small alpha and beta",
                     SweepSpec("beta_binomial", [8],
                               axes={"alpha": grid(0.01, 0.5, 0.01),
                                     "beta": grid(0.01, 0.5, 0.01)}),
                     main),
        FigurePreset("fig9", "beta-binomial decay, rescaled gap delta",
                     SweepSpec("beta_binomial", [8],
                               axes={"alpha": grid(0.1, 5.0, 0.1), "beta": grid(0.1, 5.0, 0.1)}),
                     ("delta",)),
        FigurePreset("fig10", "geometric damping, C_DET vs d and gamma",
                     SweepSpec("geometric", D_SURFACE, axes={"gamma": grid(0.0, 2.0, 0.01)}),
                     main),
        FigurePreset("fig11", "geometric damping, rescaled gap delta",
                     SweepSpec("geometric", D_SURFACE, axes={"gamma": grid(0.0, 2.0, 0.01)}),
                     ("delta",)),
        FigurePreset("fig12", "constant ratio for adjacent levels, d=2..5, admissible gamma",
                     SweepSpec("constant_ratio", [2, 3, 4, 5], axes={"gamma": GAMMA_UNIT},
                               axes_by_dim=_constant_ratio_axes([2, 3, 4, 5])),
                     main),
        FigurePreset("fig13", "two-jump limited damping, d=8, vs gamma1 and gamma2",
                     SweepSpec("two_jump", [8],
                               axes={"gamma1": grid(0.0, 5.0, 0.1), "gamma2": grid(0.0, 5.0, 0.1)}),
                     main),
        FigurePreset("fig14", "Lambda channel, d=4, vs gamma",
                     SweepSpec("lambda", [4], axes={"gamma": grid(0.0, 2.0, 0.01)}),
                     main + ("prior_entropy",)),
        FigurePreset("fig15", "V channel, d=2,3,4,8, vs gamma",
                     SweepSpec("v", [2, 3, 4, 8], axes={"gamma": GAMMA_UNIT}), main),
    ]
    return {f.id: f for f in p}


PRESETS = _presets()


def figure_preset(fig_id: str) -> SweepSpec:
    """The sweep behind one of the published figures."""
    try:
        return PRESETS[fig_id].sweep
    except KeyError:
        raise ValueError(f"unknown figure preset {fig_id!r}; known: {', '.join(PRESETS)}") from None
