"""Vehicle body: supervisory motor gate, road loads, and longitudinal motion.

Motion integrates explicit-Euler speed updates with trapezoidal work terms so
that mechanical energy balances to float precision each step: the net work of
traction, braking, and resistance equals the kinetic-energy change exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConfigurationError, InputDomainError

MPH_TO_MPS = 0.44704


class Direction(enum.Enum):
    """Commanded direction of travel."""

    FORWARD = "forward"
    REVERSE = "reverse"


@dataclass(frozen=True)
class VehicleParams:
    """Mass and road-load coefficients."""

    mass: float = 400.0                 # kg, vehicle plus rider
    rolling_resistance: float = 0.012   # dimensionless
    drag_area: float = 1.2              # m^2, Cd * frontal area
    air_density: float = 1.2            # kg/m^3
    gravity: float = 9.81               # m/s^2

    def __post_init__(self):
        if self.mass <= 0.0:
            raise InputDomainError("mass must be positive")
        if self.rolling_resistance < 0.0 or self.drag_area < 0.0:
            raise InputDomainError("road-load coefficients must be nonnegative")
        if self.air_density <= 0.0 or self.gravity <= 0.0:
            raise InputDomainError("air_density and gravity must be positive")


@dataclass(frozen=True)
class VehicleState:
    """Speed along the direction of travel and signed track position."""

    speed: float         # m/s, >= 0 (direction carried separately)
    position: float      # m, signed; reverse travel decreases it

    def __post_init__(self):
        if self.speed < 0.0:
            raise InputDomainError("speed must be nonnegative")


@dataclass(frozen=True)
class SupervisorConfig:
    """Policy gating the electric motor."""

    speed_threshold: float = 5.0 * MPH_TO_MPS  # m/s
    override: bool = False

    def __post_init__(self):
        if self.speed_threshold < 0.0:
            raise InputDomainError("speed_threshold must be nonnegative")


def supervisor_gate(speed: float, direction: Direction,
                    config: SupervisorConfig) -> bool:
    """True when the motor is allowed to drive.

    The motor is enabled in reverse, under the override, or when the forward
    speed strictly exceeds the threshold: at or below it the rider pedals
    unassisted.
    """
    if config.override:
        return True
    if direction is Direction.REVERSE:
        return True
    return speed > config.speed_threshold


@dataclass(frozen=True)
class AuxLoads:
    """House loads fed through the DC-DC converter."""

    draw: float = 90.0           # watts at the low-voltage side
    converter_rating: float = 450.0  # watts
    efficiency: float = 0.9

    def __post_init__(self):
        if self.draw < 0.0:
            raise InputDomainError("draw must be nonnegative")
        if self.converter_rating <= 0.0:
            raise InputDomainError("converter_rating must be positive")
        if not 0.0 < self.efficiency <= 1.0:
            raise InputDomainError("efficiency must be in (0, 1]")
        if self.draw > self.converter_rating:
            raise ConfigurationError(
                f"auxiliary draw {self.draw} W exceeds converter rating "
                f"{self.converter_rating} W")


def aux_power_draw(loads: AuxLoads) -> float:
    """Power pulled from the traction bus to feed the house loads."""
    return loads.draw / loads.efficiency


def resistive_forces(speed: float, grade: float,
                     params: VehicleParams) -> float:
    """Total retarding road load at a given speed on a given grade.

    Rolling resistance and aerodynamic drag always oppose motion; the grade
    term is the along-slope weight component (positive uphill). The returned
    value is the net force opposing forward travel.
    """
    if speed < 0.0:
        raise InputDomainError("speed must be nonnegative")
    normal = params.mass * params.gravity * math.cos(grade)
    rolling = params.rolling_resistance * normal
    aero = 0.5 * params.air_density * params.drag_area * speed ** 2
    slope = params.mass * params.gravity * math.sin(grade)
    return rolling + aero + slope


def advance_with_work(speed: float, traction_force: float, brake_force: float,
                      resistive_force: float, mass: float,
                      dt: float) -> tuple[float, float, float, float, float]:
    """Advance speed one explicit-Euler step and account the work done.

    Braking and resistance oppose motion and cannot drive the vehicle
    backward: if they would, the step ends at rest at the zero-crossing
    time and the work integrals stop there. Works are trapezoidal
    (force times mean speed times time) so their sum equals the
    kinetic-energy change exactly.

    Args:
        speed: current speed, m/s, >= 0.
        traction_force: driving force along travel, N, >= 0.
        brake_force: commanded brake force, N, >= 0 (opposes motion).
        resistive_force: road load opposing motion, N (may be negative
            downhill, where it drives).
        mass: vehicle mass, kg.
        dt: step length, s.

    Returns:
        (new_speed, distance, traction_work, brake_work, resistive_work),
        distance in meters along travel, works in joules; brake_work and
        resistive_work are the energies those forces remove (brake_work
        >= 0; resistive_work may be negative downhill).
    """
    if speed < 0.0 or traction_force < 0.0 or brake_force < 0.0:
        raise InputDomainError("speed, traction, and brake must be nonnegative")
    if mass <= 0.0 or dt <= 0.0:
        raise InputDomainError("mass and dt must be positive")
    net = traction_force - brake_force - resistive_force
    if speed == 0.0 and net <= 0.0:
        # Holding still: brakes and road load cannot start motion.
        return 0.0, 0.0, 0.0, 0.0, 0.0
    new_speed = speed + net / mass * dt
    if new_speed < 0.0:
        # Decelerating forces would reverse the motion; stop at the crossing.
        t_stop = mass * speed / -net
        mean = speed / 2.0
        distance = mean * t_stop
        return (0.0, distance, traction_force * distance,
                brake_force * distance, resistive_force * distance)
    mean = (speed + new_speed) / 2.0
    distance = mean * dt
    return (new_speed, distance, traction_force * distance,
            brake_force * distance, resistive_force * distance)
