"""Rate-dependent battery capacity, state of charge, and the battery bank.

Capacity follows the Peukert relation: the deliverable amp-hours at a
discharge current I are rated_ah * (rated_current / I)**(k - 1). Measured
capacities are defined over a 100-to-20 percent state-of-charge window, so
the full-range capacity used for soc accounting is that value divided by
(1 - min_soc). Terminal voltage is held at nominal; energy bookkeeping uses
nominal voltage throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .errors import CalibrationError, ConfigurationError, InputDomainError

SECONDS_PER_HOUR = 3600.0


class Chemistry(enum.Enum):
    LEAD_ACID = "lead_acid"
    SILICONE = "silicone"


@dataclass(frozen=True)
class BatterySpec:
    """Ratings of one battery (or of a bank reduced to an equivalent unit)."""

    chemistry: Chemistry
    v_nominal: float       # volts
    rated_ah: float        # amp-hours at rated_current
    rated_current: float   # amps at which rated_ah is defined
    peukert_k: float       # dimensionless, in [1, 2]
    mass: float | None = None  # kg, metadata for energy density
    min_soc: float = 0.2   # lower bound of the capacity-defining window

    def __post_init__(self):
        if self.rated_ah <= 0.0 or self.rated_current <= 0.0:
            raise InputDomainError("rated_ah and rated_current must be positive")
        if self.v_nominal <= 0.0:
            raise InputDomainError("v_nominal must be positive")
        if not 1.0 <= self.peukert_k <= 2.0:
            raise InputDomainError(f"peukert_k {self.peukert_k} outside [1, 2]")
        if not 0.0 <= self.min_soc < 1.0:
            raise InputDomainError(f"min_soc {self.min_soc} outside [0, 1)")
        if self.mass is not None and self.mass <= 0.0:
            raise InputDomainError("mass must be positive when given")


@dataclass(frozen=True)
class BatteryState:
    """State of charge plus cumulative delivered charge and energy."""

    soc: float
    delivered_ah: float = 0.0
    delivered_wh: float = 0.0
    terminal_voltage: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.soc <= 1.0:
            raise InputDomainError(f"soc {self.soc} outside [0, 1]")


@dataclass(frozen=True)
class BankConfig:
    """Series/parallel arrangement of identical batteries."""

    battery: BatterySpec
    series_count: int
    parallel_count: int
    total_count: int | None = None  # optional cross-check of the arrangement

    def __post_init__(self):
        if self.series_count < 1 or self.parallel_count < 1:
            raise InputDomainError("bank counts must be >= 1")


def initial_state(spec: BatterySpec, soc: float = 1.0) -> BatteryState:
    """A fresh BatteryState at the given state of charge."""
    return BatteryState(soc=soc, terminal_voltage=spec.v_nominal)


def calibrate_peukert(rated_ah: float, rated_current: float,
                      measured_ah: float, measured_current: float) -> float:
    """Solve the Peukert exponent from one off-rate capacity measurement.

    k = 1 + ln(measured_ah / rated_ah) / ln(rated_current / measured_current).
    The returned exponent reproduces measured_ah at measured_current exactly.
    """
    for name, value in (("rated_ah", rated_ah), ("rated_current", rated_current),
                        ("measured_ah", measured_ah),
                        ("measured_current", measured_current)):
        if value <= 0.0:
            raise InputDomainError(f"{name} must be positive")
    if measured_current == rated_current:
        if measured_ah != rated_ah:
            raise CalibrationError(
                "capacity measured at the rated current must equal rated_ah")
        return 1.0
    k = 1.0 + math.log(measured_ah / rated_ah) / math.log(rated_current / measured_current)
    if k < 1.0:
        raise CalibrationError(
            f"calibration yields k = {k:.4f} < 1 (capacity rising with current)")
    if k > 2.0:
        raise CalibrationError(f"calibration yields k = {k:.4f} > 2")
    return k


def effective_ah(spec: BatterySpec, current: float) -> float:
    """Deliverable amp-hours over the capacity-defining window at a current."""
    if current <= 0.0:
        raise InputDomainError(f"current {current} must be positive")
    return spec.rated_ah * (spec.rated_current / current) ** (spec.peukert_k - 1.0)


def full_range_capacity(spec: BatterySpec, current: float) -> float:
    """Amp-hours spanning soc 1.0 down to 0.0 at a discharge current."""
    return effective_ah(spec, current) / (1.0 - spec.min_soc)


def discharge_step(state: BatteryState, spec: BatterySpec,
                   current: float, dt: float) -> BatteryState:
    """Advance a constant-current discharge by dt seconds.

    soc decreases by current * dt / full_range_capacity(current); delivered
    charge and energy accumulate. soc saturates at 0 and the final partial
    step delivers exactly the charge that empties it.
    """
    if current < 0.0:
        raise InputDomainError(f"current {current} must be nonnegative")
    if dt <= 0.0:
        raise InputDomainError(f"dt {dt} must be positive")
    if current == 0.0 or state.soc <= 0.0:
        return state
    dt_h = dt / SECONDS_PER_HOUR
    capacity = full_range_capacity(spec, current)
    delta_soc = current * dt_h / capacity
    if delta_soc >= state.soc:
        ah = state.soc * capacity
        new_soc = 0.0
    else:
        ah = current * dt_h
        new_soc = state.soc - delta_soc
    return replace(state, soc=new_soc,
                   delivered_ah=state.delivered_ah + ah,
                   delivered_wh=state.delivered_wh + ah * spec.v_nominal,
                   terminal_voltage=spec.v_nominal)


def charge_step(state: BatteryState, spec: BatterySpec, power: float,
                dt: float, efficiency: float = 1.0) -> BatteryState:
    """Advance a constant-power charge by dt seconds.

    soc increases by power * efficiency / (v_nominal * C) * dt-in-hours,
    where C is the full-range capacity at the rated current; capped at 1.0.
    """
    if power < 0.0:
        raise InputDomainError(f"power {power} must be nonnegative")
    if dt <= 0.0:
        raise InputDomainError(f"dt {dt} must be positive")
    if not 0.0 < efficiency <= 1.0:
        raise InputDomainError(f"efficiency {efficiency} outside (0, 1]")
    if power == 0.0 or state.soc >= 1.0:
        return state
    capacity = full_range_capacity(spec, spec.rated_current)
    delta_soc = power * efficiency * (dt / SECONDS_PER_HOUR) / (spec.v_nominal * capacity)
    return replace(state, soc=min(1.0, state.soc + delta_soc),
                   terminal_voltage=spec.v_nominal)


def max_discharge_current(spec: BatterySpec, soc: float, dt: float) -> float:
    """Largest constant current a step of dt seconds can sustain.

    Solves current * dt / full_range_capacity(current) = soc in closed form;
    at that current the step ends exactly at soc 0.
    """
    if dt <= 0.0:
        raise InputDomainError(f"dt {dt} must be positive")
    if soc <= 0.0:
        return 0.0
    dt_h = dt / SECONDS_PER_HOUR
    base = (soc * spec.rated_ah * spec.rated_current ** (spec.peukert_k - 1.0)
            / (dt_h * (1.0 - spec.min_soc)))
    return base ** (1.0 / spec.peukert_k)


def max_charge_power(spec: BatterySpec, soc: float, dt: float,
                     efficiency: float = 1.0) -> float:
    """Largest charging power a step of dt seconds can absorb without
    overshooting soc 1.0."""
    if dt <= 0.0:
        raise InputDomainError(f"dt {dt} must be positive")
    if soc >= 1.0:
        return 0.0
    capacity = full_range_capacity(spec, spec.rated_current)
    return (1.0 - soc) * spec.v_nominal * capacity / (efficiency * dt / SECONDS_PER_HOUR)


def energy_density(delivered_wh: float, mass: float) -> float:
    """Delivered energy per unit mass, Wh/kg."""
    if mass <= 0.0:
        raise InputDomainError(f"mass {mass} must be positive")
    return delivered_wh / mass


def bank_aggregate(config: BankConfig) -> tuple[float, float, float]:
    """Aggregate ratings of a bank: (voltage V, capacity Ah, energy Wh)."""
    count = config.series_count * config.parallel_count
    if config.total_count is not None and config.total_count != count:
        raise ConfigurationError(
            f"bank arrangement {config.series_count}s x {config.parallel_count}p "
            f"uses {count} batteries, not the stated {config.total_count}")
    voltage = config.series_count * config.battery.v_nominal
    capacity = config.parallel_count * config.battery.rated_ah
    return voltage, capacity, voltage * capacity


def bank_equivalent_spec(config: BankConfig) -> BatterySpec:
    """Reduce a bank to one equivalent battery at the bank voltage.

    Parallel strings multiply both the rated capacity and the rated current,
    which leaves the Peukert exponent unchanged: the equivalent unit at
    current I matches parallel_count cells each carrying I / parallel_count.
    """
    battery = config.battery
    mass = None
    if battery.mass is not None:
        mass = battery.mass * config.series_count * config.parallel_count
    return BatterySpec(chemistry=battery.chemistry,
                       v_nominal=battery.v_nominal * config.series_count,
                       rated_ah=battery.rated_ah * config.parallel_count,
                       rated_current=battery.rated_current * config.parallel_count,
                       peukert_k=battery.peukert_k,
                       mass=mass,
                       min_soc=battery.min_soc)
