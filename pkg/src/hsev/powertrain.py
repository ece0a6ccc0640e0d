"""PWM motor controller, series DC motor, freewheel clutch, and sprockets.

The motor is an averaged-PWM series machine: duty sets the average armature
voltage, current follows from armature resistance plus a speed-proportional
back EMF, and torque is the series-field constant times current squared.
Current and mechanical power are clamped to the controller and motor ratings.
The pedal side couples through a one-way clutch that freewheels whenever the
axle outruns the pedal-equivalent speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputDomainError

POT_MAX_OHMS = 5000.0


@dataclass(frozen=True)
class MotorSpec:
    """Electrical and rating constants of the drive motor."""

    supply_voltage: float          # volts
    max_power: float               # watts, mechanical output cap
    current_limit: float           # amps
    armature_resistance: float     # ohms
    series_field_constant: float   # N*m/A^2, torque = constant * I^2
    speed_constant: float          # V*s/(A*rad), back EMF = constant * I * omega

    def __post_init__(self):
        for name in ("supply_voltage", "max_power", "current_limit",
                     "armature_resistance", "series_field_constant",
                     "speed_constant"):
            if getattr(self, name) <= 0.0:
                raise InputDomainError(f"{name} must be positive")


@dataclass(frozen=True)
class ControllerInput:
    """Throttle potentiometer position, ohms in [0, 5000]."""

    potentiometer: float

    def __post_init__(self):
        if not 0.0 <= self.potentiometer <= POT_MAX_OHMS:
            raise InputDomainError(
                f"potentiometer {self.potentiometer} outside [0, {POT_MAX_OHMS:.0f}]")


@dataclass(frozen=True)
class SprocketSet:
    """Speed ratios of the dual-input axle and the driven wheel radius.

    pedal_ratio is pedal-crank revolutions per axle revolution; motor_ratio
    is motor revolutions per axle revolution. Torque at the axle multiplies
    by the same ratios.
    """

    pedal_ratio: float
    motor_ratio: float
    wheel_radius: float  # meters

    def __post_init__(self):
        if self.pedal_ratio <= 0.0 or self.motor_ratio <= 0.0 or self.wheel_radius <= 0.0:
            raise InputDomainError("sprocket ratios and wheel radius must be positive")


@dataclass(frozen=True)
class ClutchState:
    """Resolved pedal-side clutch: engagement and the axle torque it carries."""

    engaged: bool
    transmitted_torque: float  # N*m at the axle, >= 0


def pot_to_duty(controller_input: ControllerInput) -> float:
    """Linear map from potentiometer position to PWM duty in [0, 1]."""
    return controller_input.potentiometer / POT_MAX_OHMS


def motor_step(duty: float, shaft_speed: float, spec: MotorSpec) -> tuple[float, float, float]:
    """Evaluate the motor at one operating point.

    Args:
        duty: PWM duty cycle in [0, 1].
        shaft_speed: motor shaft speed, rad/s, >= 0.

    Returns:
        (torque N*m, current A, electrical power W). Current respects the
        controller limit; torque is reduced so that mechanical power never
        exceeds the rated cap nor the electrical input power.
    """
    if not 0.0 <= duty <= 1.0:
        raise InputDomainError(f"duty {duty} outside [0, 1]")
    if shaft_speed < 0.0:
        raise InputDomainError(f"shaft_speed {shaft_speed} must be nonnegative")
    v_avg = duty * spec.supply_voltage
    if v_avg == 0.0:
        return 0.0, 0.0, 0.0
    current = v_avg / (spec.armature_resistance + spec.speed_constant * shaft_speed)
    current = min(current, spec.current_limit)
    electrical_power = v_avg * current
    torque = spec.series_field_constant * current ** 2
    if shaft_speed > 0.0:
        torque = min(torque, spec.max_power / shaft_speed,
                     electrical_power / shaft_speed)
    return torque, current, electrical_power


def duty_for_electrical_power(power: float, shaft_speed: float,
                              spec: MotorSpec) -> float:
    """Duty at which the motor draws a given electrical power.

    Inverts the unclamped relation P = duty^2 * V^2 / (R + c_e * omega) and
    falls back to the current-limited branch P = duty * V * I_limit when the
    unclamped solution would exceed the current limit.
    """
    if power < 0.0:
        raise InputDomainError(f"power {power} must be nonnegative")
    if power == 0.0:
        return 0.0
    impedance = spec.armature_resistance + spec.speed_constant * shaft_speed
    duty = math.sqrt(power * impedance) / spec.supply_voltage
    if duty * spec.supply_voltage / impedance > spec.current_limit:
        duty = power / (spec.supply_voltage * spec.current_limit)
    return min(duty, 1.0)


def clutch_resolve(pedal_cadence: float, rider_torque: float,
                   axle_speed: float, sprockets: SprocketSet) -> ClutchState:
    """Resolve the one-way pedal clutch.

    Engaged when the pedals keep up with the axle, i.e. the cadence is at
    least the axle speed referred to the crank (axle_speed * pedal_ratio);
    the transmitted axle torque is the rider's crank torque multiplied by
    the pedal ratio. Disengaged transmits zero. The comparison is made on
    the crank side so a rider pedaling at exactly the matched cadence
    engages without floating-point ties breaking the wrong way.
    """
    if pedal_cadence < 0.0 or axle_speed < 0.0:
        raise InputDomainError("speeds must be nonnegative")
    if rider_torque < 0.0:
        raise InputDomainError("rider_torque must be nonnegative")
    engaged = pedal_cadence >= axle_speed * sprockets.pedal_ratio
    torque = rider_torque * sprockets.pedal_ratio if engaged else 0.0
    return ClutchState(engaged=engaged, transmitted_torque=torque)


def wheel_force(axle_torque_total: float, sprockets: SprocketSet) -> float:
    """Tractive force at the wheel from the total axle torque."""
    return axle_torque_total / sprockets.wheel_radius


@dataclass(frozen=True)
class RiderParams:
    """Limits of the pedaling rider used to turn a power command into
    crank torque and cadence."""

    max_torque: float = 150.0   # N*m at the crank
    max_cadence: float = 40.0   # rad/s at the crank

    def __post_init__(self):
        if self.max_torque <= 0.0 or self.max_cadence <= 0.0:
            raise InputDomainError("rider limits must be positive")


def rider_command(pedal_power: float, axle_speed: float,
                  sprockets: SprocketSet, rider: RiderParams) -> tuple[float, float]:
    """Convert a commanded pedal power into (cadence, crank torque).

    The rider matches cadence to the axle so the clutch just engages, up to
    a cadence limit; beyond it the pedals freewheel. Crank torque delivers
    the commanded power at the matched cadence, clamped by the rider's
    torque limit (which governs the launch from standstill).
    """
    if pedal_power < 0.0:
        raise InputDomainError(f"pedal_power {pedal_power} must be nonnegative")
    if pedal_power == 0.0:
        return 0.0, 0.0
    matched = axle_speed * sprockets.pedal_ratio
    if matched > rider.max_cadence:
        # The axle outruns the rider; pedals spin below axle speed and freewheel.
        return rider.max_cadence, 0.0
    cadence = matched
    if cadence <= 0.0:
        return 0.0, rider.max_torque
    return cadence, min(pedal_power / cadence, rider.max_torque)
