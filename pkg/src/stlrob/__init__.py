"""Signal temporal logic robustness: parsing, pastification, discrete and dense monitors."""
from .core import (INF, Interval, RobustnessSeries, Sample, Specification, StlError, Trace,
                   ext_max, ext_min, ext_neg)
from .dense import DenseMonitor, StepSignal, evaluate_dense, update_dense, window_extremum
from .discrete import DiscreteMonitor, evaluate_discrete, make_online_monitor
from .iastl import input_vacuity, output_robustness, relative_robustness
from .parser import format_formula, parse_formula, parse_specification
from .rewrite import desugar, normalize, pastify, temporal_depth

__all__ = [
    "INF", "Interval", "RobustnessSeries", "Sample", "Specification", "StlError", "Trace",
    "ext_max", "ext_min", "ext_neg", "DenseMonitor", "StepSignal", "evaluate_dense",
    "update_dense", "window_extremum", "DiscreteMonitor", "evaluate_discrete",
    "make_online_monitor", "input_vacuity", "output_robustness", "relative_robustness",
    "format_formula", "parse_formula", "parse_specification", "desugar", "normalize",
    "pastify", "temporal_depth",
]
