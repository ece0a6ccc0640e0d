"""Photovoltaic panels, array composition, derating, and the charge controller.

The array's electrical operating point is not simulated with an I-V curve:
power is irradiance times aperture area times conversion efficiency, reduced
by a scalar surface-polarization derate and clamped to the array's rated
standard-test-condition power. The charge controller routes PV power to the
load first, then to the battery up to its current rating, and curtails the
rest.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputDomainError

STC_IRRADIANCE = 1000.0  # W/m2, standard test condition


def panel_area_from_stc(p_max: float, efficiency: float) -> float:
    """Aperture area implied by a panel's rated power and efficiency.

    area = p_max / (efficiency * 1000 W/m2), from the definition of the
    standard test condition.
    """
    if not 0.0 < efficiency < 1.0:
        raise InputDomainError(f"efficiency {efficiency} outside (0, 1)")
    if p_max < 0.0:
        raise InputDomainError(f"p_max {p_max} must be nonnegative")
    return p_max / (efficiency * STC_IRRADIANCE)


@dataclass(frozen=True)
class PanelSpec:
    """Ratings of one PV module. area defaults to the STC-implied value."""

    v_mp: float          # volts at maximum power
    i_mp: float          # amps at maximum power
    p_max: float         # watts at STC
    efficiency: float    # fraction in (0, 0.30]
    area: float | None = None  # m2; None derives p_max/(efficiency*1000)

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 0.30:
            raise InputDomainError(f"efficiency {self.efficiency} outside (0, 0.30]")
        if self.v_mp <= 0.0 or self.i_mp <= 0.0 or self.p_max <= 0.0:
            raise InputDomainError("panel ratings must be positive")
        rating = self.v_mp * self.i_mp
        if abs(self.p_max - rating) > 0.02 * rating:
            raise InputDomainError(
                f"p_max {self.p_max} differs from v_mp*i_mp {rating} by more than 2%")
        if self.area is None:
            object.__setattr__(self, "area",
                               panel_area_from_stc(self.p_max, self.efficiency))
        elif self.area <= 0.0:
            raise InputDomainError(f"area {self.area} must be positive")


@dataclass(frozen=True)
class ArraySpec:
    """A series/parallel composition of identical panels."""

    panel: PanelSpec
    series_count: int
    parallel_count: int
    v_nominal: float
    i_nominal: float
    p_stc: float
    total_area: float


def wire_array(panel: PanelSpec, series: int, parallel: int) -> ArraySpec:
    """Compose an array from identical panels.

    Voltage scales with the series count, current with the parallel count,
    power and area with their product.
    """
    if series < 1 or parallel < 1:
        raise InputDomainError("series and parallel counts must be >= 1")
    count = series * parallel
    return ArraySpec(panel=panel, series_count=series, parallel_count=parallel,
                     v_nominal=series * panel.v_mp,
                     i_nominal=parallel * panel.i_mp,
                     p_stc=count * panel.p_max,
                     total_area=count * panel.area)


@dataclass(frozen=True)
class SpeDerate:
    """Scalar output derate for surface polarization, as a fraction in [0, 1)."""

    fraction: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.fraction < 1.0:
            raise InputDomainError(f"derate fraction {self.fraction} outside [0, 1)")


@dataclass(frozen=True)
class ChargeControllerSpec:
    """Charging limit of the solar charge controller at the DC bus."""

    max_charge_current: float = 45.0  # amps
    bus_voltage: float = 48.0         # volts

    def __post_init__(self):
        if self.max_charge_current <= 0.0 or self.bus_voltage <= 0.0:
            raise InputDomainError("controller ratings must be positive")


@dataclass(frozen=True)
class PvPowerSplit:
    """How one step's PV power was routed. to_load + to_battery + curtailed
    equals the PV input power."""

    to_load: float
    to_battery: float
    curtailed: float


def array_power(ghi: float, array: ArraySpec, derate: SpeDerate) -> float:
    """Array electrical output (W) for a global horizontal irradiance.

    power = ghi * total_area * efficiency * (1 - derate), clamped to the
    array's rated STC power.
    """
    if ghi < 0.0:
        raise InputDomainError(f"ghi {ghi} must be nonnegative")
    raw = ghi * array.total_area * array.panel.efficiency * (1.0 - derate.fraction)
    return min(raw, array.p_stc)


def charge_controller_split(pv_power: float, load_power: float,
                            controller: ChargeControllerSpec,
                            battery_accepting: bool) -> PvPowerSplit:
    """Route PV power: load first, then battery charging up to the
    controller's current rating, remainder curtailed.

    Args:
        pv_power: available PV power, W.
        load_power: electrical load on the bus, W.
        controller: charging limit.
        battery_accepting: False when the battery cannot take charge.

    Returns:
        PvPowerSplit balancing pv_power exactly. When load exceeds PV, the
        deficit is the battery-discharge demand reported by the caller.
    """
    if pv_power < 0.0 or load_power < 0.0:
        raise InputDomainError("pv_power and load_power must be nonnegative")
    to_load = min(pv_power, load_power)
    remainder = pv_power - to_load
    cap = controller.max_charge_current * controller.bus_voltage
    to_battery = min(remainder, cap) if battery_accepting else 0.0
    curtailed = remainder - to_battery
    return PvPowerSplit(to_load=to_load, to_battery=to_battery, curtailed=curtailed)
