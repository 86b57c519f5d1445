from .config import AblateConfig, RunConfig, load_run_config, resolve_run_config, write_resolved_config
from .app import EXIT_CODES, PiNetCLI, build_parser, dispatch, main

__all__ = [
    "AblateConfig",
    "RunConfig",
    "load_run_config",
    "resolve_run_config",
    "write_resolved_config",
    "EXIT_CODES",
    "PiNetCLI",
    "build_parser",
    "dispatch",
    "main",
]
