"""Configuration files: schema, loading, validation, dumping.

Config files are TOML with unit-suffixed keys grouped into sections that
mirror the model modules ([vehicle], [battery], [array], [motor],
[supervisor], [atmosphere]) plus [[segment]] blocks for the drive cycle.
Every key has a default drawn from the reference vehicle, unknown keys are
rejected, and all violations in a file are reported together. Internally
everything is SI; unit conversion happens only at the schema boundary.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import battery as bat
from . import powertrain as pt
from . import pv as pvmod
from . import sim
from . import solar
from . import vehicle as veh
from .errors import ConfigurationError, SimulatorError

_SEGMENT_DEFAULTS = {
    "duration_s": 600.0,
    "grade_rad": 0.0,
    "direction": "forward",
    "potentiometer_ohm": 0.0,
    "target_speed_mps": None,
    "pedal_power_w": 0.0,
    "brake_force_n": 0.0,
    "sun": "none",
}

_NULLABLE_FLOAT_KEYS = {"target_speed_mps", "ghi_avg_override_w_m2",
                        "ghi_max_override_w_m2"}
_NULLABLE_STR_KEYS = {"time_of_max_override"}
_DATE_KEYS = {"date"}
_TIME_KEYS = {"window_start", "window_end"}


def default_config_dict() -> dict:
    """The full effective configuration of the reference vehicle."""
    return {
        "timestep_s": 0.1,
        "initial_speed_mps": 0.0,
        "initial_soc": 1.0,
        "speed_controller_gain_duty_per_mps": 1.0,
        "vehicle": {
            "mass_kg": 400.0,
            "rolling_resistance": 0.012,
            "drag_area_m2": 1.2,
            "air_density_kg_m3": 1.2,
            "gravity_m_s2": 9.81,
            "wheel_radius_m": 0.25,
            "pedal_ratio": 2.5,
            "motor_ratio": 4.0,
            "rider_max_torque_nm": 150.0,
            "rider_max_cadence_rad_s": 40.0,
            "aux_draw_w": 90.0,
            "dcdc_rating_w": 450.0,
            "dcdc_efficiency": 0.9,
        },
        "battery": {
            "chemistry": "silicone",
            "v_nominal_v": 12.0,
            "rated_ah": 70.0,
            "rated_current_a": 3.5,
            "peukert_k": bat.calibrate_peukert(70.0, 3.5, 43.8, 12.0),
            "mass_kg": 14.68,
            "min_soc": 0.2,
            "series_count": 4,
            "parallel_count": 2,
            "charge_efficiency": 1.0,
        },
        "array": {
            "v_mp_v": 40.0,
            "i_mp_a": 5.1,
            "p_max_w": 205.0,
            "efficiency": 0.165,
            "area_m2": 1.2441,
            "series_count": 2,
            "parallel_count": 2,
            "derate": 0.0,
            "max_charge_current_a": 45.0,
            "bus_voltage_v": 48.0,
        },
        "motor": {
            "supply_voltage_v": 48.0,
            "max_power_w": 7457.0,
            "current_limit_a": 500.0,
            "armature_resistance_ohm": 0.096,
            "speed_constant_v_s_per_a_rad": 0.0008,
            "series_field_constant_nm_per_a2":
                7457.0 * 4.0 * 0.096 * 0.0008 / 48.0 ** 2,
        },
        "supervisor": {
            "threshold_mph": 5.0,
            "override": False,
        },
        "atmosphere": {
            "latitude_deg": 37.34,
            "longitude_deg": -121.88,
            "utc_offset_h": -7.0,
            "date": "2008-03-15",
            "window_start": "08:44",
            "window_end": "16:24",
            "step_s": 60.0,
            "pressure_mb": 1013.0,
            "ozone_atm_cm": 0.4,
            "water_cm": 5.0,
            "aod_500nm": 0.9,
            "aod_380nm": 1.125,
            "forward_scatter": 0.35,
            "albedo": 0.2,
            "ghi_avg_override_w_m2": None,
            "ghi_max_override_w_m2": None,
            "time_of_max_override": None,
        },
        "segment": [dict(_SEGMENT_DEFAULTS, pedal_power_w=120.0, sun="day")],
    }


@dataclass(frozen=True)
class RunConfig:
    """A validated configuration: the scenario plus report-level overrides.

    raw holds the effective key/value tree in canonical form; dumping it and
    re-parsing yields an identical RunConfig.
    """

    raw: dict
    scenario: sim.Scenario
    ghi_average_override: float | None
    ghi_max_override: float | None
    time_of_max_override: str | None


def _normalize_leaf(path: str, key: str, default, value, problems: list[str]):
    """Coerce one user value to the default's type; None means rejected."""
    where = f"{path}{key}"
    if key in _DATE_KEYS:
        if isinstance(value, datetime.date) and not isinstance(value, datetime.datetime):
            return value.isoformat()
        if isinstance(value, str):
            return value
        problems.append(f"{where}: expected a date")
        return None
    if key in _TIME_KEYS:
        if isinstance(value, datetime.time):
            return value.strftime("%H:%M")
        if isinstance(value, str):
            return value
        problems.append(f"{where}: expected a time of day")
        return None
    if key in _NULLABLE_FLOAT_KEYS:
        if value is None or (isinstance(value, (int, float))
                             and not isinstance(value, bool)):
            return None if value is None else float(value)
        problems.append(f"{where}: expected a number")
        return None
    if key in _NULLABLE_STR_KEYS:
        if value is None or isinstance(value, str):
            return value
        problems.append(f"{where}: expected a string")
        return None
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        problems.append(f"{where}: expected a boolean")
        return None
    if isinstance(default, float):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        problems.append(f"{where}: expected a number")
        return None
    if isinstance(default, int):
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        problems.append(f"{where}: expected an integer")
        return None
    if isinstance(value, str):
        return value
    problems.append(f"{where}: expected a string")
    return None


def _merge_table(defaults: dict, user: dict, path: str,
                 problems: list[str]) -> None:
    for key, value in user.items():
        if key not in defaults:
            # Dotted paths read as part of the key; labeled paths such as
            # "segment 1: " read as a prefix to the complaint.
            if path.endswith(": "):
                problems.append(f"{path}unknown key '{key}'")
            else:
                problems.append(f"unknown key '{path}{key}'")
            continue
        default = defaults[key]
        if isinstance(default, dict):
            if isinstance(value, dict):
                _merge_table(default, value, f"{path}{key}.", problems)
            else:
                problems.append(f"{path}{key}: expected a table")
        else:
            normalized = _normalize_leaf(path, key, default, value, problems)
            if normalized is not None or key in _NULLABLE_FLOAT_KEYS | _NULLABLE_STR_KEYS:
                defaults[key] = normalized


def _merge_segments(user_segments, problems: list[str]) -> list[dict]:
    if not isinstance(user_segments, list):
        problems.append("segment: expected an array of tables")
        return [dict(_SEGMENT_DEFAULTS)]
    merged = []
    for index, entry in enumerate(user_segments, start=1):
        segment = dict(_SEGMENT_DEFAULTS)
        if not isinstance(entry, dict):
            problems.append(f"segment {index}: expected a table")
        else:
            _merge_table(segment, entry, f"segment {index}: ", problems)
        merged.append(segment)
    if not merged:
        problems.append("segment: at least one segment is required")
        merged.append(dict(_SEGMENT_DEFAULTS))
    return merged


def _build(problems: list[str], label: str, factory):
    try:
        return factory()
    except SimulatorError as exc:
        problems.append(f"{label}: {exc}")
        return None


def _parse_date(text: str, label: str, problems: list[str]):
    try:
        value = datetime.date.fromisoformat(text)
    except ValueError:
        problems.append(f"{label}: '{text}' is not a valid date")
        return None
    if not solar.YEAR_MIN <= value.year <= solar.YEAR_MAX:
        problems.append(f"{label}: year must be in "
                        f"[{solar.YEAR_MIN}, {solar.YEAR_MAX}]")
        return None
    return value


def _parse_time(text: str, label: str, problems: list[str]):
    try:
        return datetime.time.fromisoformat(text)
    except ValueError:
        problems.append(f"{label}: '{text}' is not a valid time of day")
        return None


def _config_from_dict(tree: dict) -> RunConfig:
    problems: list[str] = []

    v = tree["vehicle"]
    vehicle_params = _build(problems, "vehicle", lambda: veh.VehicleParams(
        mass=v["mass_kg"], rolling_resistance=v["rolling_resistance"],
        drag_area=v["drag_area_m2"], air_density=v["air_density_kg_m3"],
        gravity=v["gravity_m_s2"]))
    sprockets = _build(problems, "vehicle", lambda: pt.SprocketSet(
        pedal_ratio=v["pedal_ratio"], motor_ratio=v["motor_ratio"],
        wheel_radius=v["wheel_radius_m"]))
    rider = _build(problems, "vehicle", lambda: pt.RiderParams(
        max_torque=v["rider_max_torque_nm"],
        max_cadence=v["rider_max_cadence_rad_s"]))
    aux = _build(problems, "vehicle", lambda: veh.AuxLoads(
        draw=v["aux_draw_w"], converter_rating=v["dcdc_rating_w"],
        efficiency=v["dcdc_efficiency"]))

    b = tree["battery"]
    chemistry = _build(problems, "battery.chemistry",
                       lambda: bat.Chemistry(b["chemistry"]))
    battery_spec = None
    if chemistry is not None:
        battery_spec = _build(problems, "battery", lambda: bat.BatterySpec(
            chemistry=chemistry, v_nominal=b["v_nominal_v"],
            rated_ah=b["rated_ah"], rated_current=b["rated_current_a"],
            peukert_k=b["peukert_k"], mass=b["mass_kg"],
            min_soc=b["min_soc"]))
    bank = None
    if battery_spec is not None:
        bank = _build(problems, "battery", lambda: bat.BankConfig(
            battery_spec, series_count=b["series_count"],
            parallel_count=b["parallel_count"]))

    a = tree["array"]
    panel = _build(problems, "array", lambda: pvmod.PanelSpec(
        v_mp=a["v_mp_v"], i_mp=a["i_mp_a"], p_max=a["p_max_w"],
        efficiency=a["efficiency"], area=a["area_m2"]))
    array = None
    if panel is not None:
        array = _build(problems, "array", lambda: pvmod.wire_array(
            panel, series=a["series_count"], parallel=a["parallel_count"]))
    controller = _build(problems, "array", lambda: pvmod.ChargeControllerSpec(
        max_charge_current=a["max_charge_current_a"],
        bus_voltage=a["bus_voltage_v"]))
    derate = _build(problems, "array",
                    lambda: pvmod.SpeDerate(a["derate"]))

    m = tree["motor"]
    motor = _build(problems, "motor", lambda: pt.MotorSpec(
        supply_voltage=m["supply_voltage_v"], max_power=m["max_power_w"],
        current_limit=m["current_limit_a"],
        armature_resistance=m["armature_resistance_ohm"],
        series_field_constant=m["series_field_constant_nm_per_a2"],
        speed_constant=m["speed_constant_v_s_per_a_rad"]))

    s = tree["supervisor"]
    supervisor = _build(problems, "supervisor", lambda: veh.SupervisorConfig(
        speed_threshold=s["threshold_mph"] * veh.MPH_TO_MPS,
        override=s["override"]))

    at = tree["atmosphere"]
    location = _build(problems, "atmosphere", lambda: solar.GeoLocation(
        latitude=at["latitude_deg"], longitude=at["longitude_deg"],
        utc_offset=at["utc_offset_h"]))
    atmosphere = _build(problems, "atmosphere", lambda: solar.AtmosphereParams(
        surface_pressure=at["pressure_mb"], ozone=at["ozone_atm_cm"],
        precipitable_water=at["water_cm"],
        aerosol_optical_depth_500nm=at["aod_500nm"],
        aerosol_optical_depth_380nm=at["aod_380nm"],
        forward_scatter_fraction=at["forward_scatter"],
        ground_albedo=at["albedo"]))
    date = _parse_date(at["date"], "atmosphere.date", problems)
    window_start = _parse_time(at["window_start"], "atmosphere.window_start",
                               problems)
    window_end = _parse_time(at["window_end"], "atmosphere.window_end",
                             problems)
    if not at["step_s"] > 0.0:
        problems.append("atmosphere.step_s must be positive")

    segments = []
    for index, entry in enumerate(tree["segment"], start=1):
        direction = _build(problems, f"segment {index}",
                           lambda e=entry: veh.Direction(e["direction"]))
        sun = _build(problems, f"segment {index}",
                     lambda e=entry: sim.SunMode(e["sun"]))
        if direction is None or sun is None:
            continue
        segment = _build(problems, f"segment {index}",
                         lambda e=entry: sim.Segment(
                             duration=e["duration_s"], grade=e["grade_rad"],
                             direction=direction,
                             potentiometer=e["potentiometer_ohm"],
                             target_speed=e["target_speed_mps"],
                             pedal_power=e["pedal_power_w"],
                             brake_force=e["brake_force_n"], sun=sun))
        if segment is not None:
            segments.append(segment)

    parts = (vehicle_params, sprockets, rider, aux, bank, array, controller,
             derate, motor, supervisor, location, atmosphere, date,
             window_start, window_end)
    scenario = None
    if all(part is not None for part in parts) and len(segments) == len(tree["segment"]):
        site = sim.SolarSite(location=location, date=date,
                             atmosphere=atmosphere,
                             window_start=window_start,
                             window_end=window_end, step=at["step_s"])
        scenario = _build(problems, "scenario", lambda: sim.Scenario(
            segments=tuple(segments), vehicle=vehicle_params, bank=bank,
            array=array, charge_controller=controller, motor=motor,
            sprockets=sprockets, supervisor=supervisor, aux=aux, rider=rider,
            derate=derate, site=site, timestep=tree["timestep_s"],
            initial_speed=tree["initial_speed_mps"],
            initial_soc=tree["initial_soc"],
            charge_efficiency=b["charge_efficiency"],
            speed_controller_gain=tree["speed_controller_gain_duty_per_mps"]))
    if scenario is not None:
        problems.extend(sim.validate_scenario(scenario))

    if problems:
        raise ConfigurationError(problems)
    return RunConfig(raw=tree, scenario=scenario,
                     ghi_average_override=at["ghi_avg_override_w_m2"],
                     ghi_max_override=at["ghi_max_override_w_m2"],
                     time_of_max_override=at["time_of_max_override"])


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text over the defaults."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"TOML parse: {exc}") from None
    problems: list[str] = []
    tree = default_config_dict()
    user_segments = data.pop("segment", None)
    _merge_table(tree, data, "", problems)
    if user_segments is not None:
        tree["segment"] = _merge_segments(user_segments, problems)
    if problems:
        raise ConfigurationError(problems)
    return _config_from_dict(tree)


def load_config(path: str | None) -> RunConfig:
    """Load a config file, or the pure defaults when no path is given."""
    if path is None:
        return parse_config("")
    with open(path, "r", encoding="utf-8") as handle:
        try:
            text = handle.read()
        except UnicodeDecodeError as exc:
            raise ConfigurationError(f"config file is not UTF-8 text: {exc}") from None
    return parse_config(text)


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def dump_effective_config(config: RunConfig) -> str:
    """Render the effective configuration as TOML.

    The output re-parses to a RunConfig equal to the input.
    """
    tree = config.raw
    lines = []
    for key, value in tree.items():
        if isinstance(value, (dict, list)):
            continue
        lines.append(f"{key} = {_toml_value(value)}")
    for section in ("vehicle", "battery", "array", "motor", "supervisor",
                    "atmosphere"):
        lines.append("")
        lines.append(f"[{section}]")
        for key, value in tree[section].items():
            if value is None:
                continue
            lines.append(f"{key} = {_toml_value(value)}")
    for segment in tree["segment"]:
        lines.append("")
        lines.append("[[segment]]")
        for key, value in segment.items():
            if value is None:
                continue
            lines.append(f"{key} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"
