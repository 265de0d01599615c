"""Semi-parametric estimation of inequality measures for heavy-tailed data.

The body of the distribution is estimated empirically and the upper tail by a
fitted GPD, strict Pareto or perturbed Pareto law; the Bertino
representativeness index picks among the three.
"""
from .distributions import Family, GpdParams, ParetoParams, PpdParams
from .errors import (
    ConfigError,
    DegenerateDataError,
    DomainError,
    FitConvergenceError,
    InconsistentFitError,
    InfiniteMeanError,
    IngestError,
    InsufficientDataError,
    ParameterError,
    SpineqError,
)
from .measures import (
    Measure,
    MeasureValue,
    a1,
    a1_np,
    descriptive_stats,
    ge0,
    ge0_np,
    gini,
    gini_np,
    qsr,
    qsr_np,
)
from .pipeline import RunConfig, emit, ingest, run_pipeline, simulate
from .selection import SelectionReport, bertino_index, select_tail_model
from .spcdf import SemiParamCdf, build_sp_cdf
from .tailfit import Sample, TailFit, fit_tail, select_threshold

__version__ = "0.1.0"
