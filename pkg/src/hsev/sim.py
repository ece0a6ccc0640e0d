"""Fixed-step scenario engine with exact energy bookkeeping.

Wires the sun, PV array, battery bank, motor, rider, and vehicle body into a
deterministic simulation loop, and provides the experiment replays and the
prediction-vs-measurement comparison arithmetic used by the command line.

Per step the causal order is fixed: irradiance, PV power, supervisor gate,
motor (including the battery-budget duty clamp), pedal clutch, longitudinal
dynamics, bus power balance, battery update. Works on the mechanical side are
trapezoidal so the audit closes to float precision.
"""

from __future__ import annotations

import datetime
import enum
import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN

from . import battery as bat
from . import powertrain as pt
from . import pv as pvmod
from . import solar
from . import vehicle as veh
from .errors import ConfigurationError, InputDomainError

SECONDS_PER_HOUR = 3600.0

TRACE_HEADER = ("time_s,speed_mps,direction,motor_enabled,duty,motor_current_a,"
                "motor_torque_nm,clutch_engaged,pedal_power_w,pv_power_w,"
                "pv_to_load_w,pv_to_battery_w,battery_power_w,soc,aux_power_w,"
                "position_m")

MEASUREMENT_HEADER = "time_local,power_w"


class SunMode(enum.Enum):
    """Sun exposure during a segment: shaded or on the modeled clear-sky day."""

    NONE = "none"
    DAY = "day"


@dataclass(frozen=True)
class Segment:
    """One piece of a drive cycle with constant commands."""

    duration: float                    # s
    grade: float = 0.0                 # rad, positive uphill
    direction: veh.Direction = veh.Direction.FORWARD
    potentiometer: float = 0.0         # ohms, 0..5000
    target_speed: float | None = None  # m/s; excludes a potentiometer command
    pedal_power: float = 0.0           # W commanded by the rider
    brake_force: float = 0.0           # N
    sun: SunMode = SunMode.NONE

    def __post_init__(self):
        if self.duration <= 0.0:
            raise InputDomainError("segment duration must be positive")
        if not 0.0 <= self.potentiometer <= pt.POT_MAX_OHMS:
            raise InputDomainError(
                f"potentiometer {self.potentiometer} outside [0, {pt.POT_MAX_OHMS:.0f}]")
        if self.target_speed is not None:
            if self.target_speed < 0.0:
                raise InputDomainError("target_speed must be nonnegative")
            if self.potentiometer != 0.0:
                raise InputDomainError(
                    "a segment takes either a potentiometer or a target speed, not both")
        if self.pedal_power < 0.0 or self.brake_force < 0.0:
            raise InputDomainError("pedal_power and brake_force must be nonnegative")


@dataclass(frozen=True)
class SolarSite:
    """Where and when the simulated day takes place.

    Simulation time zero maps to window_start local civil time on the given
    date; segments with sun exposure sample the clear-sky model from there.
    """

    location: solar.GeoLocation
    date: datetime.date
    atmosphere: solar.AtmosphereParams
    window_start: datetime.time
    window_end: datetime.time
    step: float = 60.0  # s, sampling step for day-profile replays


@dataclass(frozen=True)
class Scenario:
    """A drive cycle plus every model parameter needed to run it."""

    segments: tuple[Segment, ...]
    vehicle: veh.VehicleParams
    bank: bat.BankConfig
    array: pvmod.ArraySpec
    charge_controller: pvmod.ChargeControllerSpec
    motor: pt.MotorSpec
    sprockets: pt.SprocketSet
    supervisor: veh.SupervisorConfig
    aux: veh.AuxLoads
    rider: pt.RiderParams
    derate: pvmod.SpeDerate
    site: SolarSite
    timestep: float = 0.1          # s
    initial_speed: float = 0.0     # m/s
    initial_soc: float = 1.0
    charge_efficiency: float = 1.0
    speed_controller_gain: float = 1.0  # duty per m/s of speed error

    def __post_init__(self):
        if not self.segments:
            raise InputDomainError("scenario needs at least one segment")
        if not 0.0 < self.timestep <= 1.0:
            raise InputDomainError("timestep must be in (0, 1] s")


@dataclass(frozen=True)
class TraceRow:
    """State at the start of a step plus the power flows during it."""

    time: float
    speed: float
    direction: veh.Direction
    motor_enabled: bool
    duty: float
    motor_current: float
    motor_torque: float
    clutch_engaged: bool
    pedal_power: float
    pv_power: float
    pv_to_load: float
    pv_to_battery: float
    battery_power: float  # +discharge / -charge, W
    soc: float
    aux_power: float
    position: float


@dataclass(frozen=True)
class Trace:
    """All rows of a run plus the state reached after the last step."""

    rows: tuple[TraceRow, ...]
    final_speed: float
    final_position: float
    final_soc: float


@dataclass(frozen=True)
class EnergyAudit:
    """Whole-run energy ledger, watt-hours.

    Sources are battery discharge, PV, and delivered pedal work. Sinks are
    auxiliary loads, curtailed PV, battery charging, motor losses (electrical
    input minus mechanical output), kinetic-energy gain, and road/brake
    dissipation. The residual is sources minus sinks and closes to float
    precision by construction.
    """

    battery_discharge_wh: float
    pv_wh: float
    pedal_wh: float
    motor_electrical_wh: float
    motor_mechanical_wh: float
    aux_wh: float
    curtailed_wh: float
    battery_charge_wh: float
    kinetic_gain_wh: float
    dissipation_wh: float
    energy_in_wh: float
    energy_out_wh: float
    residual_wh: float


def validate_scenario(scenario: Scenario) -> list[str]:
    """Cross-check the scenario's parts against each other.

    Returns a list of human-readable violations, empty when consistent.
    """
    problems = []
    bank_voltage = scenario.bank.battery.v_nominal * scenario.bank.series_count
    if bank_voltage != scenario.motor.supply_voltage:
        problems.append(
            f"battery bank bus voltage {bank_voltage:g} V does not match the "
            f"motor supply voltage {scenario.motor.supply_voltage:g} V")
    if bank_voltage != scenario.charge_controller.bus_voltage:
        problems.append(
            f"battery bank bus voltage {bank_voltage:g} V does not match the "
            f"charge controller bus voltage {scenario.charge_controller.bus_voltage:g} V")
    if scenario.initial_speed < 0.0:
        problems.append("initial_speed must be nonnegative")
    if not 0.0 <= scenario.initial_soc <= 1.0:
        problems.append("initial_soc must be in [0, 1]")
    if not 0.0 < scenario.charge_efficiency <= 1.0:
        problems.append("charge_efficiency must be in (0, 1]")
    if scenario.speed_controller_gain <= 0.0:
        problems.append("speed_controller_gain must be positive")
    dt = scenario.timestep
    for index, segment in enumerate(scenario.segments, start=1):
        steps = round(segment.duration / dt)
        if steps <= 0 or abs(steps * dt - segment.duration) > 1e-9 * max(1.0, segment.duration):
            problems.append(
                f"segment {index} duration {segment.duration:g} s is not a "
                f"positive multiple of the timestep {dt:g} s")
    return problems


def _segment_duty(segment: Segment, speed: float, gain: float) -> float:
    """Commanded duty for a segment: throttle map or speed-target controller."""
    if segment.target_speed is None:
        return pt.pot_to_duty(pt.ControllerInput(segment.potentiometer))
    return min(max(gain * (segment.target_speed - speed), 0.0), 1.0)


def run(scenario: Scenario) -> tuple[Trace, EnergyAudit]:
    """Run a scenario to completion.

    Returns the per-step trace and the whole-run energy audit. Raises a
    configuration error listing every violation if the scenario's parts are
    inconsistent, and an input-domain error if a segment boundary commands a
    direction change while the vehicle is moving.
    """
    problems = validate_scenario(scenario)
    if problems:
        raise ConfigurationError(problems)

    dt = scenario.timestep
    bank_spec = bat.bank_equivalent_spec(scenario.bank)
    bus_voltage = bank_spec.v_nominal
    aux_bus = veh.aux_power_draw(scenario.aux)
    state = bat.initial_state(bank_spec, scenario.initial_soc)
    speed = scenario.initial_speed
    position = 0.0
    sun_anchor = datetime.datetime.combine(scenario.site.date,
                                           scenario.site.window_start)

    rows = []
    e_battery_discharge = 0.0  # joules, and likewise below
    e_pv = 0.0
    e_pedal = 0.0
    e_motor_electrical = 0.0
    e_motor_mechanical = 0.0
    e_aux = 0.0
    e_curtailed = 0.0
    e_battery_charge = 0.0
    e_kinetic = 0.0
    e_dissipation = 0.0

    step_index = 0
    previous_direction = None
    for segment in scenario.segments:
        if (previous_direction is not None
                and segment.direction is not previous_direction
                and speed > 1e-9):
            raise InputDomainError(
                "direction change requires the vehicle to be stopped")
        previous_direction = segment.direction
        for _ in range(round(segment.duration / dt)):
            t = step_index * dt

            if segment.sun is SunMode.DAY:
                when = sun_anchor + datetime.timedelta(seconds=t)
                instant = solar.solar_position(scenario.site.location, when)
                ghi = solar.bird_clear_sky(instant,
                                           scenario.site.atmosphere).global_horizontal
            else:
                ghi = 0.0
            pv_raw = pvmod.array_power(ghi, scenario.array, scenario.derate)

            gate = veh.supervisor_gate(speed, segment.direction,
                                       scenario.supervisor)

            # Power available this step bounds the loads: auxiliaries first,
            # the motor gets the remainder.
            battery_limit = bus_voltage * bat.max_discharge_current(
                bank_spec, state.soc, dt)
            available = pv_raw + battery_limit
            aux_actual = min(aux_bus, available)

            omega_axle = speed / scenario.sprockets.wheel_radius
            omega_motor = omega_axle * scenario.sprockets.motor_ratio
            duty = (_segment_duty(segment, speed, scenario.speed_controller_gain)
                    if gate else 0.0)
            torque_motor, current_motor, p_electrical = pt.motor_step(
                duty, omega_motor, scenario.motor)
            budget = available - aux_actual
            if p_electrical > budget:
                duty = pt.duty_for_electrical_power(budget, omega_motor,
                                                    scenario.motor)
                torque_motor, current_motor, p_electrical = pt.motor_step(
                    duty, omega_motor, scenario.motor)

            cadence, crank_torque = pt.rider_command(
                segment.pedal_power, omega_axle, scenario.sprockets,
                scenario.rider)
            clutch = pt.clutch_resolve(cadence, crank_torque, omega_axle,
                                       scenario.sprockets)
            axle_torque = (clutch.transmitted_torque
                           + torque_motor * scenario.sprockets.motor_ratio)
            traction = pt.wheel_force(axle_torque, scenario.sprockets)
            pedal_force = pt.wheel_force(clutch.transmitted_torque,
                                         scenario.sprockets)

            resistive = veh.resistive_forces(speed, segment.grade,
                                             scenario.vehicle)
            new_speed, distance, w_traction, w_brake, w_resistive = (
                veh.advance_with_work(speed, traction, segment.brake_force,
                                      resistive, scenario.vehicle.mass, dt))
            w_pedal = pedal_force * distance
            w_motor = w_traction - w_pedal

            load_bus = aux_actual + p_electrical
            split = pvmod.charge_controller_split(
                pv_raw, load_bus, scenario.charge_controller,
                battery_accepting=state.soc < 1.0)
            charge_cap = bat.max_charge_power(bank_spec, state.soc, dt,
                                              scenario.charge_efficiency)
            to_battery = min(split.to_battery, charge_cap)
            curtailed = split.curtailed + (split.to_battery - to_battery)
            deficit = max(load_bus - split.to_load, 0.0)

            new_state = state
            if deficit > 0.0:
                new_state = bat.discharge_step(new_state, bank_spec,
                                               deficit / bus_voltage, dt)
            if to_battery > 0.0:
                new_state = bat.charge_step(new_state, bank_spec, to_battery,
                                            dt, scenario.charge_efficiency)

            e_battery_discharge += deficit * dt
            e_pv += pv_raw * dt
            e_pedal += w_pedal
            e_motor_electrical += p_electrical * dt
            e_motor_mechanical += w_motor
            e_aux += aux_actual * dt
            e_curtailed += curtailed * dt
            e_battery_charge += to_battery * dt
            e_kinetic += 0.5 * scenario.vehicle.mass * (new_speed * new_speed
                                                        - speed * speed)
            e_dissipation += w_brake + w_resistive

            rows.append(TraceRow(
                time=t, speed=speed, direction=segment.direction,
                motor_enabled=gate and duty > 0.0, duty=duty,
                motor_current=current_motor, motor_torque=torque_motor,
                clutch_engaged=clutch.engaged, pedal_power=w_pedal / dt,
                pv_power=pv_raw, pv_to_load=split.to_load,
                pv_to_battery=to_battery, battery_power=deficit - to_battery,
                soc=state.soc, aux_power=aux_actual, position=position))

            if segment.direction is veh.Direction.FORWARD:
                position += distance
            else:
                position -= distance
            speed = new_speed
            state = new_state
            step_index += 1

    wh = 1.0 / SECONDS_PER_HOUR
    energy_in = (e_battery_discharge + e_pv + e_pedal) * wh
    energy_out = (e_aux + e_curtailed + e_battery_charge
                  + (e_motor_electrical - e_motor_mechanical)
                  + e_kinetic + e_dissipation) * wh
    audit = EnergyAudit(
        battery_discharge_wh=e_battery_discharge * wh,
        pv_wh=e_pv * wh,
        pedal_wh=e_pedal * wh,
        motor_electrical_wh=e_motor_electrical * wh,
        motor_mechanical_wh=e_motor_mechanical * wh,
        aux_wh=e_aux * wh,
        curtailed_wh=e_curtailed * wh,
        battery_charge_wh=e_battery_charge * wh,
        kinetic_gain_wh=e_kinetic * wh,
        dissipation_wh=e_dissipation * wh,
        energy_in_wh=energy_in,
        energy_out_wh=energy_out,
        residual_wh=energy_in - energy_out)
    trace = Trace(rows=tuple(rows), final_speed=speed,
                  final_position=position, final_soc=state.soc)
    return trace, audit


def fmt6(value: float) -> str:
    """Format a float with six significant digits in fixed decimal notation."""
    if value == 0.0:
        return "0.000000"
    quantized = Decimal(repr(float(value)))
    shift = quantized.adjusted()
    quantized = quantized.scaleb(-shift).quantize(Decimal("1.00000"),
                                                  rounding=ROUND_HALF_EVEN)
    return format(quantized.scaleb(shift), "f")


def trace_to_csv(trace: Trace) -> str:
    """Render a trace in the fixed CSV schema."""
    lines = [TRACE_HEADER]
    for row in trace.rows:
        lines.append(",".join((
            fmt6(row.time), fmt6(row.speed), row.direction.value,
            "true" if row.motor_enabled else "false", fmt6(row.duty),
            fmt6(row.motor_current), fmt6(row.motor_torque),
            "true" if row.clutch_engaged else "false", fmt6(row.pedal_power),
            fmt6(row.pv_power), fmt6(row.pv_to_load), fmt6(row.pv_to_battery),
            fmt6(row.battery_power), fmt6(row.soc), fmt6(row.aux_power),
            fmt6(row.position))))
    return "\n".join(lines) + "\n"


def round_half_away(value: float) -> int:
    """Round to the nearest integer with halves away from zero."""
    if value >= 0.0:
        return int(math.floor(value + 0.5))
    return int(math.ceil(value - 0.5))


def percent_difference(predicted: float, measured: float) -> int:
    """Percent gap between a prediction and a measurement.

    Defined as |predicted - measured| / predicted * 100, rounded to the
    nearest integer with halves away from zero.
    """
    if predicted <= 0.0:
        raise InputDomainError("predicted power must be positive")
    return round_half_away(abs(predicted - measured) / predicted * 100.0)


@dataclass(frozen=True)
class MeasuredSummary:
    """Summary statistics of a measured array-output series."""

    average_power: float
    max_power: float
    time_of_max: str | None = None
    window: str | None = None

    def __post_init__(self):
        if self.average_power <= 0.0 or self.max_power <= 0.0:
            raise InputDomainError("measured powers must be positive")
        if self.max_power < self.average_power:
            raise InputDomainError("measured max must be at least the average")


def parse_measurement_csv(text: str) -> list[tuple[str, float]]:
    """Parse a measured power series.

    Expects a header line `time_local,power_w` followed by rows of a local
    time label and a power in watts. Errors name the offending 1-based line.
    """
    lines = text.splitlines()
    if not lines:
        raise InputDomainError("measurement CSV is empty")
    if lines[0].strip() != MEASUREMENT_HEADER:
        raise InputDomainError(
            f"measurement CSV line 1: expected header '{MEASUREMENT_HEADER}'")
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise InputDomainError(
                f"measurement CSV line {number}: expected 2 fields, got {len(parts)}")
        label = parts[0].strip()
        try:
            power = float(parts[1])
        except ValueError:
            raise InputDomainError(
                f"measurement CSV line {number}: power '{parts[1].strip()}' "
                f"is not a number") from None
        if power < 0.0:
            raise InputDomainError(
                f"measurement CSV line {number}: power must be nonnegative")
        rows.append((label, power))
    if not rows:
        raise InputDomainError("measurement CSV has no data rows")
    return rows


def summarize_measurements(rows: list[tuple[str, float]]) -> MeasuredSummary:
    """Reduce a measured series to the summary used by comparison reports."""
    if not rows:
        raise InputDomainError("measurement series is empty")
    powers = [power for _, power in rows]
    peak = max(range(len(powers)), key=lambda i: (powers[i], -i))
    return MeasuredSummary(
        average_power=sum(powers) / len(powers),
        max_power=powers[peak],
        time_of_max=rows[peak][0],
        window=f"{rows[0][0]}-{rows[-1][0]}")


@dataclass(frozen=True)
class ReportRow:
    """One line of a comparison report; None cells render blank."""

    label: str
    predicted: float | str | None
    measured: float | str | None
    percent: int | None


@dataclass(frozen=True)
class ComparisonReport:
    """Prediction-vs-measurement table for the rooftop array experiment."""

    rows: tuple[ReportRow, ...]


def _power_block(base_label: str, ghi: float, array: pvmod.ArraySpec,
                 measured_power: float | None,
                 derates: tuple[float, ...]) -> list[ReportRow]:
    rows = []
    for fraction in derates:
        predicted = pvmod.array_power(ghi, array, pvmod.SpeDerate(fraction))
        if fraction == 0.0:
            label = base_label
        else:
            label = f"Including {round_half_away(fraction * 100.0)}% decrease due to SPE (W)"
        if measured_power is None:
            rows.append(ReportRow(label, predicted, None, None))
        else:
            rows.append(ReportRow(
                label, predicted, measured_power * (1.0 - fraction),
                percent_difference(predicted, measured_power)))
    return rows


def build_comparison_report(average_ghi: float, max_ghi: float,
                            predicted_time_of_max: str | None,
                            array: pvmod.ArraySpec,
                            measured: MeasuredSummary | None,
                            predicted_window: str | None = None,
                            derates: tuple[float, ...] = (0.0, 0.05, 0.30),
                            ) -> ComparisonReport:
    """Assemble the array-output comparison table.

    Power rows appear once per derate fraction: the prediction and the
    displayed measurement are both scaled by (1 - derate), while the percent
    column always compares the derated prediction against the raw
    measurement.
    """
    if average_ghi <= 0.0 or max_ghi < average_ghi:
        raise InputDomainError("day statistics must satisfy 0 < average <= max")
    rows = [
        ReportRow("Time period", predicted_window,
                  measured.window if measured else None, None),
        ReportRow("Average global irradiance (W/m2)", average_ghi, None, None),
        ReportRow("Maximum global irradiance (W/m2)", max_ghi, None, None),
        ReportRow("Time of maximum irradiance", predicted_time_of_max,
                  measured.time_of_max if measured else None, None),
    ]
    rows.extend(_power_block(
        "Continuous PV array output (W)", average_ghi, array,
        measured.average_power if measured else None, derates))
    rows.extend(_power_block(
        "Maximum PV array output (W)", max_ghi, array,
        measured.max_power if measured else None, derates))
    return ComparisonReport(rows=tuple(rows))


def _render_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return str(round_half_away(value))


def render_comparison_text(report: ComparisonReport) -> str:
    """Render a comparison report as an aligned plain-text table."""
    header = ("", "Predicted", "Measured", "% Difference")
    table = [header]
    for row in report.rows:
        table.append((row.label, _render_cell(row.predicted),
                      _render_cell(row.measured), _render_cell(row.percent)))
    widths = [max(len(line[col]) for line in table) for col in range(4)]
    lines = []
    for line in table:
        cells = [line[0].ljust(widths[0])]
        cells.extend(line[col].rjust(widths[col]) for col in range(1, 4))
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def report_to_dict(report: ComparisonReport) -> dict:
    """Comparison report as a JSON-ready structure with raw (unrounded) cells."""
    return {"rows": [
        {"label": row.label, "predicted": row.predicted,
         "measured": row.measured, "percent_difference": row.percent}
        for row in report.rows]}


def replay_solar_experiment(location: solar.GeoLocation, date: datetime.date,
                            atmosphere: solar.AtmosphereParams,
                            array: pvmod.ArraySpec,
                            measured: MeasuredSummary | None,
                            window: tuple[datetime.time, datetime.time],
                            step: float = 60.0,
                            ) -> tuple[solar.DayStats, ComparisonReport]:
    """Predict a day of array output and compare it against measurements."""
    _, stats = solar.day_profile(location, date, atmosphere, window, step)
    window_label = (f"{window[0].strftime('%H:%M')}-"
                    f"{window[1].strftime('%H:%M')}")
    report = build_comparison_report(
        stats.average_ghi, stats.max_ghi,
        stats.time_of_max.strftime("%H:%M"), array, measured,
        predicted_window=window_label)
    return stats, report


@dataclass(frozen=True)
class BatteryReplay:
    """Outcome of a constant-current discharge from full to the soc cutoff."""

    delivered_ah: float
    duration_h: float
    energy_density_wh_per_kg: float | None
    rows: tuple[tuple[float, bat.BatteryState], ...]  # (time s, state)


def replay_battery_experiment(spec: bat.BatterySpec, current: float,
                              step: float = 60.0) -> BatteryReplay:
    """Discharge a battery at constant current from soc 1.0 to its cutoff.

    The run length follows from the rate-adjusted capacity, so the final
    partial step lands exactly on the cutoff.
    """
    if current <= 0.0:
        raise InputDomainError("discharge current must be positive")
    if step <= 0.0:
        raise InputDomainError("step must be positive")
    duration_s = bat.effective_ah(spec, current) / current * SECONDS_PER_HOUR
    state = bat.initial_state(spec)
    rows = [(0.0, state)]
    elapsed = 0.0
    while elapsed < duration_s - 1e-9:
        dt = min(step, duration_s - elapsed)
        state = bat.discharge_step(state, spec, current, dt)
        elapsed += dt
        rows.append((elapsed, state))
    density = (bat.energy_density(state.delivered_wh, spec.mass)
               if spec.mass is not None else None)
    return BatteryReplay(delivered_ah=state.delivered_ah,
                         duration_h=elapsed / SECONDS_PER_HOUR,
                         energy_density_wh_per_kg=density,
                         rows=tuple(rows))
