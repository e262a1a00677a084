"""Appliance registry: kinds, activity thresholds, and synthetic signatures."""

from dataclasses import dataclass

from camal.errors import InvalidConfig


@dataclass(frozen=True)
class ApplianceKind:
    """One appliance category with its activity rule.

    on_power_threshold separates standby draw from active operation;
    min_on_duration (in timesteps at the 1-min grid) drops spurious blips.
    """

    name: str
    on_power_threshold: float
    min_on_duration: int

    def __post_init__(self):
        if self.on_power_threshold <= 0:
            raise InvalidConfig(f"on_power_threshold must be > 0, got {self.on_power_threshold}")
        if self.min_on_duration < 1:
            raise InvalidConfig(f"min_on_duration must be >= 1, got {self.min_on_duration}")


KETTLE = ApplianceKind("kettle", on_power_threshold=500.0, min_on_duration=1)
MICROWAVE = ApplianceKind("microwave", on_power_threshold=200.0, min_on_duration=1)
DISHWASHER = ApplianceKind("dishwasher", on_power_threshold=20.0, min_on_duration=5)
WASHING_MACHINE = ApplianceKind("washing_machine", on_power_threshold=20.0, min_on_duration=5)
SHOWER = ApplianceKind("shower", on_power_threshold=1000.0, min_on_duration=1)

REGISTRY = {k.name: k for k in (KETTLE, MICROWAVE, DISHWASHER, WASHING_MACHINE, SHOWER)}


def get_kind(name):
    """Look up an ApplianceKind by name (case-insensitive)."""
    key = name.strip().lower()
    if key not in REGISTRY:
        raise InvalidConfig(f"unknown appliance {name!r}, expected one of {sorted(REGISTRY)}")
    return REGISTRY[key]
