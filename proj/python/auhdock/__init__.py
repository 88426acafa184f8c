"""Deterministic simulator of an autonomous underwater helicopter docking
onto a subsea docking station."""

from ._core import (
    ConfigError,
    ContractViolation,
    DomainError,
    Scenario,
    ScenarioLoadError,
    docking_criterion,
    dump_defaults,
    effective_radius,
    locate_vehicle,
    project_spot,
    run,
    run_batch,
    scenario_keys,
    speed_decision,
    wrap_angle,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "DomainError",
    "Scenario",
    "ScenarioLoadError",
    "docking_criterion",
    "dump_defaults",
    "effective_radius",
    "locate_vehicle",
    "project_spot",
    "run",
    "run_batch",
    "scenario_keys",
    "speed_decision",
    "wrap_angle",
]
