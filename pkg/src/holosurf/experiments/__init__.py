"""Reproducible sweeps that emit CSV tables."""

from .config import Experiment, SweepConfig, emit_config, parse_config
from .runners import (
    run,
    run_coupling_sweep,
    run_csi_error_mc,
    run_gain_vs_aperture,
    run_gain_vs_direction,
    run_gain_vs_spacing,
    run_pattern_cut,
)
from .table import ResultTable, read_csv, read_matrix_csv, write_matrix_csv
