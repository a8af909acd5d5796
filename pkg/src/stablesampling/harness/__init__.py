"""Configuration, experiments and the command-line interface."""
from .config import ConfigError, DistSpec, ExperimentConfig, SystemSpec, dump_config, load_config
from .experiments import (
    run_batch_means_comparison,
    run_bias_benchmark,
    run_sample_queue,
    run_sample_region,
    run_sensitivity_table,
    run_validation_battery,
)

__all__ = [
    "ConfigError",
    "DistSpec",
    "ExperimentConfig",
    "SystemSpec",
    "dump_config",
    "load_config",
    "run_batch_means_comparison",
    "run_bias_benchmark",
    "run_sample_queue",
    "run_sample_region",
    "run_sensitivity_table",
    "run_validation_battery",
]
