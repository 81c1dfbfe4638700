from .config import ConfigError, config_hash, load_config, validate_config
from .runner import ResultRecord, emit_plot_data, run, run_config_file, run_suite
from .suites import SUITES, manifest_dict, suite_configs

__all__ = [
    "ConfigError",
    "ResultRecord",
    "SUITES",
    "config_hash",
    "emit_plot_data",
    "load_config",
    "manifest_dict",
    "run",
    "run_config_file",
    "run_suite",
    "suite_configs",
    "validate_config",
]
