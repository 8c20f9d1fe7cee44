"""Directionally selective small target motion detection."""

from ._core import (
    ConfigError,
    DimensionError,
    DstmdModel,
    Error,
    EstmdModel,
    EvalConfig,
    IoError,
    ParameterError,
    PipelineConfig,
    RunConfig,
    UndefinedDirectionError,
    angular_difference_deg,
    clutter,
    detect,
    format_config,
    gamma_kernel,
    parse_config,
    population_vector,
    render_default_clip,
    render_linear_clip,
    w3_kernel,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "DstmdModel",
    "Error",
    "EstmdModel",
    "EvalConfig",
    "IoError",
    "ParameterError",
    "PipelineConfig",
    "RunConfig",
    "UndefinedDirectionError",
    "angular_difference_deg",
    "clutter",
    "detect",
    "format_config",
    "gamma_kernel",
    "parse_config",
    "population_vector",
    "render_default_clip",
    "render_linear_clip",
    "w3_kernel",
]
