"""Reference configuration shared by the command line and the test suite.

The defaults describe a three-wheeled hybrid human/solar/electric vehicle:
a 48 V bank of eight silicone batteries, four 205 W panels wired two-series
two-parallel behind a 45 A charge controller, a 10 hp series DC motor geared
to the same axle as the pedals, and a supervisor that keeps the motor off at
low forward speeds.

Two sky presets exist. AtmosphereParams() alone carries textbook clear-sky
inputs. REPLAY_ATMOSPHERE is a hazier sky calibrated so the modeled mid-March
day at the default rooftop site reproduces the benchmark window statistics
(439 W/m2 average, 582 W/m2 maximum, peak near 13:19); configuration files
resolve to it unless overridden.
"""

from __future__ import annotations

import datetime

from . import battery
from . import powertrain
from . import pv
from . import sim
from . import solar
from . import vehicle

SITE = solar.GeoLocation(latitude=37.34, longitude=-121.88, utc_offset=-7.0)
DEFAULT_DATE = datetime.date(2008, 3, 15)
WINDOW_START = datetime.time(8, 44)
WINDOW_END = datetime.time(16, 24)
PROFILE_STEP = 60.0  # s

STANDARD_ATMOSPHERE = solar.AtmosphereParams()
REPLAY_ATMOSPHERE = solar.AtmosphereParams(
    surface_pressure=1013.0,
    ozone=0.4,
    precipitable_water=5.0,
    aerosol_optical_depth_500nm=0.9,
    aerosol_optical_depth_380nm=1.125,
    forward_scatter_fraction=0.35,
    ground_albedo=0.2)

PANEL = pv.PanelSpec(v_mp=40.0, i_mp=5.1, p_max=205.0, efficiency=0.165,
                     area=1.2441)  # m^2, physical module footprint
ARRAY = pv.wire_array(PANEL, series=2, parallel=2)
CHARGE_CONTROLLER = pv.ChargeControllerSpec(max_charge_current=45.0,
                                            bus_voltage=48.0)

LEAD_ACID = battery.BatterySpec(
    chemistry=battery.Chemistry.LEAD_ACID, v_nominal=12.0, rated_ah=35.0,
    rated_current=1.75,
    peukert_k=battery.calibrate_peukert(35.0, 1.75, 21.0, 12.0),
    mass=10.77)
SILICONE = battery.BatterySpec(
    chemistry=battery.Chemistry.SILICONE, v_nominal=12.0, rated_ah=70.0,
    rated_current=3.5,  # 20-hour rate
    peukert_k=battery.calibrate_peukert(70.0, 3.5, 43.8, 12.0),
    mass=14.68)
BANK = battery.BankConfig(SILICONE, series_count=4, parallel_count=2)

# Armature resistance puts the stall current exactly at the controller limit;
# the field constant puts the peak of the torque-speed product exactly at the
# rated mechanical power.
MOTOR = powertrain.MotorSpec(
    supply_voltage=48.0,
    max_power=7457.0,  # W, 10 hp
    current_limit=500.0,
    armature_resistance=0.096,
    series_field_constant=7457.0 * 4.0 * 0.096 * 0.0008 / 48.0 ** 2,
    speed_constant=0.0008)

SPROCKETS = powertrain.SprocketSet(pedal_ratio=2.5, motor_ratio=4.0,
                                   wheel_radius=0.25)
RIDER = powertrain.RiderParams(max_torque=150.0, max_cadence=40.0)
VEHICLE = vehicle.VehicleParams(mass=400.0, rolling_resistance=0.012,
                                drag_area=1.2, air_density=1.2, gravity=9.81)
SUPERVISOR = vehicle.SupervisorConfig(speed_threshold=5.0 * vehicle.MPH_TO_MPS,
                                      override=False)
AUX = vehicle.AuxLoads(draw=90.0, converter_rating=450.0, efficiency=0.9)
DERATE = pv.SpeDerate(0.0)
TIMESTEP = 0.1  # s


def default_site(date: datetime.date = DEFAULT_DATE,
                 atmosphere: solar.AtmosphereParams = REPLAY_ATMOSPHERE,
                 ) -> sim.SolarSite:
    """The rooftop site on the default date under the calibrated sky."""
    return sim.SolarSite(location=SITE, date=date, atmosphere=atmosphere,
                         window_start=WINDOW_START, window_end=WINDOW_END,
                         step=PROFILE_STEP)


def default_scenario(segments: tuple[sim.Segment, ...] | None = None,
                     ) -> sim.Scenario:
    """The reference vehicle running the given segments.

    Without segments, a ten-minute pedal-only ride in the sun.
    """
    if segments is None:
        segments = (sim.Segment(duration=600.0, pedal_power=120.0,
                                sun=sim.SunMode.DAY),)
    return sim.Scenario(
        segments=tuple(segments), vehicle=VEHICLE, bank=BANK, array=ARRAY,
        charge_controller=CHARGE_CONTROLLER, motor=MOTOR, sprockets=SPROCKETS,
        supervisor=SUPERVISOR, aux=AUX, rider=RIDER, derate=DERATE,
        site=default_site(), timestep=TIMESTEP)
