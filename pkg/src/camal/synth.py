"""Seeded synthetic households with known per-timestep appliance activity.

The aggregate is base load + a cyclic fridge-like component + injected
appliance signatures + non-negative noise. Appliance channels record the
exact injected power, so localization can be scored against ground truth.

Signature shapes follow the common desk descriptions of each device:
kettle/microwave/shower are single rectangles, dishwasher/washing machine
are multi-phase cycles with two heating plateaus separated by low-power
drum phases. Events follow a daily routine in 6-hour blocks (long cycles
overnight, short bursts during the day) and never straddle a block
boundary. The background (base + fridge + noise) is kept gentle relative
to event power so the benchmark measures the pipeline rather than the
generator's noise floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from camal.errors import InvalidConfig
from camal.series import PowerSeries

DEFAULT_START_EPOCH = 1704067200  # 2024-01-01T00:00:00Z
STEPS_PER_DAY = 1440

# Daily usage schedule, in 6-hour blocks from midnight: long cycles run
# overnight (block 0), short bursts during the day. Events are placed
# fully inside one block, never straddling a block boundary.
SLOT_MINUTES = 360
USAGE_SLOTS = {
    "kettle": (1, 2, 3),
    "microwave": (1, 2, 3),
    "shower": (1, 2, 3),
    "dishwasher": (0,),
    "washing_machine": (0,),
}


@dataclass(frozen=True)
class SynthConfig:
    houses: int
    days: int
    appliance_rates: dict[str, float] = field(
        default_factory=lambda: {"kettle": 3.0, "dishwasher": 1.2}
    )
    base_load_range: tuple[float, float] = (200.0, 400.0)
    noise_level: float = 6.0
    fridge_amplitude: float = 8.0
    fridge_period_minutes: int = 90
    fridge_duty: float = 0.5
    sample_period: int = 60
    start_epoch: int = DEFAULT_START_EPOCH

    def __post_init__(self):
        if self.houses <= 0 or self.days <= 0:
            raise InvalidConfig("houses and days must be positive")
        if not self.appliance_rates:
            raise InvalidConfig("appliance mix must not be empty")
        for name, rate in self.appliance_rates.items():
            if name not in USAGE_SLOTS:
                raise InvalidConfig(f"no synthetic signature for appliance {name!r}")
            if rate < 0:
                raise InvalidConfig(f"negative rate for {name!r}: {rate}")
        if self.base_load_range[0] < 0 or self.base_load_range[1] < self.base_load_range[0]:
            raise InvalidConfig(f"bad base_load_range {self.base_load_range}")
        if self.noise_level < 0:
            raise InvalidConfig(f"negative noise_level {self.noise_level}")
        if self.fridge_amplitude < 0:
            raise InvalidConfig(f"negative fridge_amplitude {self.fridge_amplitude}")
        if not 0 < self.fridge_duty < 1:
            raise InvalidConfig(f"fridge_duty must be in (0,1), got {self.fridge_duty}")
        if self.sample_period != 60:
            raise InvalidConfig("the generator works on the 1-minute grid (sample_period=60)")


def _rect_signature(rng, level_range, duration_range):
    duration = int(rng.integers(duration_range[0], duration_range[1] + 1))
    level = float(rng.uniform(*level_range))
    return np.full(duration, level)


def _two_plateau_signature(rng, plateau_range, drum_range, duration_range):
    total = int(rng.integers(duration_range[0], duration_range[1] + 1))
    heat1 = max(5, int(round(total * 0.30)))
    heat2 = max(5, int(round(total * 0.25)))
    drum1 = max(1, int(round(total * 0.28)))
    drum2 = max(1, total - heat1 - heat2 - drum1)
    p1 = float(rng.uniform(*plateau_range))
    p2 = float(rng.uniform(*plateau_range))
    d1 = float(rng.uniform(*drum_range))
    d2 = float(rng.uniform(*drum_range))
    return np.concatenate([
        np.full(heat1, p1),
        np.full(drum1, d1),
        np.full(heat2, p2),
        np.full(drum2, d2),
    ])


def make_signature(name, rng):
    """Draw one event signature (watts per minute) for an appliance kind."""
    if name == "kettle":
        return _rect_signature(rng, (1800.0, 2500.0), (2, 5))
    if name == "microwave":
        return _rect_signature(rng, (800.0, 1200.0), (1, 5))
    if name == "shower":
        return _rect_signature(rng, (7000.0, 9000.0), (4, 10))
    if name == "dishwasher":
        return _two_plateau_signature(rng, (1800.0, 2400.0), (60.0, 100.0), (60, 120))
    if name == "washing_machine":
        return _two_plateau_signature(rng, (1500.0, 2200.0), (100.0, 250.0), (60, 120))
    raise InvalidConfig(f"no synthetic signature for appliance {name!r}")


def _fridge_component(n, config, rng):
    # Compressor square wave with a random phase per house.
    period = config.fridge_period_minutes
    on_len = max(1, int(round(period * config.fridge_duty)))
    phase = int(rng.integers(0, period))
    idx = (np.arange(n) + phase) % period
    return np.where(idx < on_len, config.fridge_amplitude, 0.0)


def _inject_events(channel, rng, name, rate_per_day, days):
    count = int(rng.poisson(rate_per_day * days))
    slots = USAGE_SLOTS[name]
    occupied = np.zeros(len(channel), dtype=bool)
    for _ in range(count):
        signature = make_signature(name, rng)
        d = len(signature)
        if d > SLOT_MINUTES:
            continue
        day = int(rng.integers(0, days))
        slot = slots[int(rng.integers(0, len(slots)))]
        slot_start = day * STEPS_PER_DAY + slot * SLOT_MINUTES
        start = slot_start + int(rng.integers(0, SLOT_MINUTES - d + 1))
        if occupied[start : start + d].any():
            continue  # same appliance cannot run twice at once
        channel[start : start + d] += signature
        occupied[start : start + d] = True


def synth_generate(config, seed):
    """Generate `config.houses` PowerSeries, deterministic for a given seed."""
    n = config.days * STEPS_PER_DAY
    root = np.random.SeedSequence(seed)
    house_seeds = root.spawn(config.houses)
    series = []
    for h, child in enumerate(house_seeds, start=1):
        rng = np.random.Generator(np.random.PCG64(child))
        base = float(rng.uniform(*config.base_load_range))
        background = base + _fridge_component(n, config, rng)
        noise = rng.uniform(0.0, config.noise_level, size=n) if config.noise_level > 0 else np.zeros(n)
        channels = {}
        for name in sorted(config.appliance_rates):
            channel = np.zeros(n)
            _inject_events(channel, rng, name, config.appliance_rates[name], config.days)
            # Quantize like a meter report; keeps CSV and JSON forms exact.
            channels[name] = np.round(channel, 3)
        aggregate = np.round(np.round(background + noise, 3) + sum(channels.values()), 3)
        timestamps = config.start_epoch + config.sample_period * np.arange(n, dtype=np.int64)
        series.append(PowerSeries(
            house_id=f"synth_{h:02d}",
            sample_period=config.sample_period,
            timestamps=timestamps,
            aggregate=aggregate,
            appliances=channels,
        ))
    return series
