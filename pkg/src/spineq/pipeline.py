"""Ingestion, the estimate pipeline, report rendering and seeded simulation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import distributions as dist
from .distributions import Family
from .errors import ConfigError, IngestError, InsufficientDataError, SpineqError
from .measures import ESTIMATORS, Measure, MeasureValue, descriptive_stats
from .selection import SelectionReport, select_tail_model
from .spcdf import SemiParamCdf
from .tailfit import Sample, TailFit, fit_tail

MIN_OBS = 20
SCHEMA = "spineq.report/1"
TAIL_CHOICES = ("gpd", "pa", "ppd", "all", "auto")


@dataclass(frozen=True)
class CleaningSummary:
    parsed: int
    kept: int
    dropped_nonpositive: int
    parse_errors: int
    parse_error_lines: tuple = ()


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def ingest(path, column: Union[str, int, None] = None, strict: bool = False) -> tuple[Sample, CleaningSummary]:
    """Read newline-delimited numbers or a CSV column; drop non-positive values.

    A first row with any non-numeric cell is treated as a header. Blank lines
    are skipped. Unparseable or non-finite cells count as parse errors, or
    raise with their line number when ``strict``.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise IngestError(f"input file not found: {path}") from None
    except UnicodeDecodeError as err:
        raise IngestError(f"{path} is not UTF-8 text: {err}") from None

    rows = [(i, row) for i, row in enumerate(csv.reader(io.StringIO(text)), start=1) if any(c.strip() for c in row)]
    header = None
    if rows and not all(_is_number(c) for c in rows[0][1]):
        header = [c.strip() for c in rows[0][1]]
        rows = rows[1:]

    if column is None:
        width = len(header) if header else max((len(r) for _, r in rows), default=1)
        if width != 1:
            raise IngestError(f"{path} has {width} columns; choose one with --column")
        col = 0
    elif isinstance(column, int) or str(column).isdigit():
        col = int(column)
    else:
        if header is None or column not in header:
            raise IngestError(f"column {column!r} not found in header {header}")
        col = header.index(column)

    values, bad_lines, nonpos = [], [], 0
    for lineno, row in rows:
        cell = row[col].strip() if col < len(row) else ""
        try:
            v = float(cell)
            if not math.isfinite(v):
                raise ValueError(cell)
        except ValueError:
            if strict:
                raise IngestError(f"{path}:{lineno}: cannot parse {cell!r} as a number") from None
            bad_lines.append(lineno)
            continue
        if v <= 0:
            nonpos += 1
        else:
            values.append(v)

    summary = CleaningSummary(
        parsed=len(rows),
        kept=len(values),
        dropped_nonpositive=nonpos,
        parse_errors=len(bad_lines),
        parse_error_lines=tuple(bad_lines),
    )
    if len(values) < MIN_OBS:
        raise InsufficientDataError(f"only {len(values)} positive observations in {path}; need {MIN_OBS}")
    return Sample.from_values(values, source=str(path)), summary


@dataclass(frozen=True)
class RunConfig:
    input_path: str
    column: Union[str, int, None] = None
    alpha: float = 0.10
    tail: str = "auto"
    measures: tuple = tuple(Measure)
    output: str = "table"
    seed: int = 0
    strict: bool = False
    mad_scale: bool = False

    def __post_init__(self):
        if not 0 < self.alpha < 0.5:
            raise ConfigError(f"alpha must lie in (0, 0.5), got {self.alpha}")
        if self.tail not in TAIL_CHOICES:
            raise ConfigError(f"tail must be one of {TAIL_CHOICES}, got {self.tail!r}")
        if self.output not in ("table", "json"):
            raise ConfigError(f"output must be table or json, got {self.output!r}")
        if not self.measures:
            raise ConfigError("at least one measure is required")
        try:
            object.__setattr__(self, "measures", tuple(Measure(m) for m in self.measures))
        except ValueError as err:
            raise ConfigError(str(err)) from None


@dataclass
class InequalityReport:
    config: RunConfig
    source: str
    cleaning: CleaningSummary
    descriptive: dict
    methods: list
    fits: dict = field(default_factory=dict)
    selection: Optional[SelectionReport] = None
    cells: dict = field(default_factory=dict)

    @property
    def failed_cells(self) -> int:
        return sum(isinstance(v, str) for row in self.cells.values() for v in row.values())


def _err(err: Exception) -> str:
    return f"{type(err).__name__}: {err}"


def run_pipeline(cfg: RunConfig) -> InequalityReport:
    """Threshold, choose the tail family, then estimate every requested measure.

    Errors in one cell (e.g. an infinite-mean tail) are recorded as strings in
    that cell only.
    """
    sample, cleaning = ingest(cfg.input_path, cfg.column, cfg.strict)

    selection = None
    fits: dict = {}
    if cfg.tail in ("auto", "all"):
        try:
            selection = select_tail_model(sample, cfg.alpha)
        except SpineqError as err:
            if cfg.tail == "auto":
                raise
            for fam in Family:
                fits[fam] = _err(err)
        if selection is not None:
            for fam in Family:
                fits[fam] = selection.fits.get(fam, selection.failures.get(fam))
        families = [selection.chosen] if cfg.tail == "auto" else list(Family)
    else:
        fam = Family.parse(cfg.tail)
        try:
            fits[fam] = fit_tail(sample, fam, alpha=cfg.alpha)
        except SpineqError as err:
            fits[fam] = _err(err)
        families = [fam]

    cdfs: dict = {"NP": SemiParamCdf(sample)}
    fit_by_method: dict = {}
    for fam in families:
        method = f"SP-{fam.value}"
        fit_by_method[method] = fits[fam]
        cdfs[method] = SemiParamCdf(sample, fits[fam]) if isinstance(fits[fam], TailFit) else fits[fam]

    cells = {}
    for measure in cfg.measures:
        row = {}
        for method, F in cdfs.items():
            if isinstance(F, str):
                row[method] = F
                continue
            try:
                row[method] = ESTIMATORS[measure](F)
            except SpineqError as err:
                row[method] = _err(err)
        cells[measure] = row

    return InequalityReport(
        config=cfg,
        source=sample.source,
        cleaning=cleaning,
        descriptive=descriptive_stats(sample, cfg.mad_scale),
        methods=list(cdfs),
        fits=fit_by_method,
        selection=selection,
        cells=cells,
    )


# --- rendering ----------------------------------------------------------------

def sig(x: float, digits: int = 10):
    """Round to ``digits`` significant digits; non-finite values become None."""
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.{digits}g}")


def _fit_dict(fit):
    if isinstance(fit, str):
        return {"error": fit}
    return {
        "family": fit.family.value,
        "params": {k: sig(v) for k, v in vars(fit.params).items()},
        "u": sig(fit.u),
        "k": fit.k,
        "loglik": sig(fit.loglik),
        "n_ties": fit.n_ties,
        "diagnostics": list(fit.diagnostics),
    }


def report_dict(report: InequalityReport) -> dict:
    cfg = report.config
    estimates = {}
    for measure, row in report.cells.items():
        estimates[measure.value] = {
            method: {"error": v} if isinstance(v, str) else {"value": sig(v.value), "diagnostics": list(v.diagnostics)}
            for method, v in row.items()
        }
    sel = None
    if report.selection is not None:
        s = report.selection
        sel = {
            "scores": {f.value: sig(v) for f, v in s.scores.items()},
            "chosen": s.chosen.value,
            "k": s.k,
            "failures": {f.value: m for f, m in s.failures.items()},
        }
    return {
        "schema": SCHEMA,
        "source": report.source,
        "config": {
            "alpha": cfg.alpha,
            "tail": cfg.tail,
            "measures": [m.value for m in cfg.measures],
            "column": cfg.column,
        },
        "cleaning": {
            "parsed": report.cleaning.parsed,
            "kept": report.cleaning.kept,
            "dropped_nonpositive": report.cleaning.dropped_nonpositive,
            "parse_errors": report.cleaning.parse_errors,
            "parse_error_lines": list(report.cleaning.parse_error_lines),
        },
        "descriptive": {k: sig(v) if isinstance(v, float) else v for k, v in report.descriptive.items()},
        "selection": sel,
        "fits": {m: _fit_dict(f) for m, f in report.fits.items()},
        "methods": list(report.methods),
        "estimates": estimates,
        "status": "partial" if report.failed_cells else "ok",
    }


def _fmt(x) -> str:
    return "nan" if x is None else f"{x:.10g}"


def render_table(report: InequalityReport) -> str:
    d = report_dict(report)
    out = []
    desc = d["descriptive"]
    out.append(f"source: {d['source']}")
    c = d["cleaning"]
    out.append(
        f"cleaning: kept {c['kept']} of {c['parsed']} "
        f"(dropped {c['dropped_nonpositive']} non-positive, {c['parse_errors']} unparseable)"
    )
    out.append(f"n={desc['n']}  median={_fmt(desc['median'])}  MAD={_fmt(desc['mad'])}  max={_fmt(desc['max'])}")
    if d["selection"]:
        s = d["selection"]
        scores = "  ".join(f"R({f})={_fmt(v)}" for f, v in s["scores"].items())
        out.append(f"representativeness (k={s['k']}): {scores}  -> {s['chosen']}")
        for f, m in s["failures"].items():
            out.append(f"  {f} fit failed: {m}")
    out.append("")

    methods = d["methods"]
    cells = [["", *methods]]
    errors = []
    for measure, row in d["estimates"].items():
        line = [measure.upper()]
        for method in methods:
            v = row[method]
            if "error" in v:
                line.append("error")
                errors.append(f"{measure.upper()} {method}: {v['error']}")
            else:
                line.append(_fmt(v["value"]))
        cells.append(line)
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    for r in cells:
        out.append("  ".join(cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(r, widths))))
    if errors:
        out.append("")
        out.extend(errors)
    return "\n".join(out) + "\n"


def emit(report: InequalityReport, fmt: str = "table") -> str:
    if fmt == "json":
        return json.dumps(report_dict(report), sort_keys=True, indent=2) + "\n"
    if fmt == "table":
        return render_table(report)
    raise ConfigError(f"unknown output format {fmt!r}")


# --- simulation ---------------------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator seeded through numpy's SeedSequence."""
    return np.random.Generator(np.random.PCG64(seed))


def parse_params(family, text: str):
    """``"sigma=1,gamma=0.5"`` into the family's parameter dataclass."""
    family = Family(family)
    kv = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, val = part.partition("=")
        if not sep:
            raise ConfigError(f"expected key=value, got {part!r}")
        kv[key.strip()] = float(val)
    try:
        return dist.PARAM_TYPES[family](**kv)
    except TypeError as err:
        raise ConfigError(f"bad parameters for {family.value}: {err}") from None


def simulate(family, params, n: int, seed: int) -> np.ndarray:
    """``n`` inverse-transform draws: uniforms from :func:`make_rng`, mapped by the quantile."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    u = make_rng(seed).random(n)
    return np.asarray(dist.quantile(family, params, u), dtype=float)


def write_values(values, path) -> None:
    # 17 significant digits round-trip every double exactly
    Path(path).write_text("".join(f"{v:.17g}\n" for v in values), encoding="utf-8")
