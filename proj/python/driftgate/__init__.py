from ._core import (
    ConfigError,
    DataError,
    Panel,
    build_weights,
    config_hash,
    generate_synthetic,
    load_panel,
    perf_stats,
    randomize,
    run_cli,
    scale_factor,
    signals,
    walk_forward,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Panel",
    "build_weights",
    "config_hash",
    "generate_synthetic",
    "load_panel",
    "perf_stats",
    "randomize",
    "run_cli",
    "scale_factor",
    "signals",
    "walk_forward",
]
