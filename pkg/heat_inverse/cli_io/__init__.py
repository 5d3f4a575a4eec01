from .csv_io import (
    load_experiment_csv,
    load_profile_csv,
    load_params_csv,
    load_table_csv,
    load_trace_csv,
    write_experiment_csv,
    write_field_csv,
    write_lambda_csv,
    write_params_csv,
    write_series_csv,
    write_trace_csv,
)
from .run_config import RunConfig, parse_config, load_config, dump_config, save_config
from .workflows import ExitCode, run_simulate, run_forward, run_fit
from .cli import main

__all__ = [
    "load_experiment_csv",
    "load_profile_csv",
    "load_params_csv",
    "load_table_csv",
    "load_trace_csv",
    "write_experiment_csv",
    "write_field_csv",
    "write_lambda_csv",
    "write_params_csv",
    "write_series_csv",
    "write_trace_csv",
    "RunConfig",
    "parse_config",
    "load_config",
    "dump_config",
    "save_config",
    "ExitCode",
    "run_simulate",
    "run_forward",
    "run_fit",
    "main",
]
