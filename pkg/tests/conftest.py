"""Shared scenario suite for the simulation and acceptance tests.

The suite spans the simulator's regimes: idle house loads only, pedal-only
cruise, motor-only acceleration, a mixed cycle with sun, grade, braking and
a reversal, battery exhaustion with a solar limp-home phase, a full
duty/speed ratings sweep, and a reverse-only run.
"""

import dataclasses
import datetime

import pytest

from hsev import battery, sim
from hsev.defaults import default_scenario, default_site
from hsev.vehicle import Direction, SupervisorConfig

SIX_MPH = 2.68224  # m/s, above the forward assist threshold


def noon_site() -> sim.SolarSite:
    """The default site with simulation time zero moved to midday sun."""
    return dataclasses.replace(default_site(),
                               window_start=datetime.time(12, 30))


def tiny_ideal_bank() -> battery.BankConfig:
    """A small rate-insensitive bank that empties within a short scenario."""
    cell = battery.BatterySpec(chemistry=battery.Chemistry.LEAD_ACID,
                               v_nominal=12.0, rated_ah=2.0,
                               rated_current=1.0, peukert_k=1.0, mass=10.77)
    return battery.BankConfig(battery=cell, series_count=4, parallel_count=1)


def build_suite() -> dict[str, sim.Scenario]:
    """The standard scenario suite keyed by name."""
    suite = {}
    suite["null"] = default_scenario((sim.Segment(duration=60.0),))
    suite["pedal_only"] = default_scenario()
    suite["motor_only"] = dataclasses.replace(
        default_scenario((sim.Segment(duration=60.0, potentiometer=5000.0),)),
        initial_speed=SIX_MPH)
    suite["mixed"] = dataclasses.replace(
        default_scenario((
            sim.Segment(duration=120.0, pedal_power=120.0, sun=sim.SunMode.DAY),
            sim.Segment(duration=60.0, potentiometer=1500.0, pedal_power=120.0,
                        grade=0.02, sun=sim.SunMode.DAY),
            sim.Segment(duration=40.0, brake_force=400.0),
            sim.Segment(duration=30.0, potentiometer=800.0,
                        direction=Direction.REVERSE),
            sim.Segment(duration=20.0, brake_force=300.0,
                        direction=Direction.REVERSE),
        )),
        supervisor=SupervisorConfig(override=True))
    suite["soc_exhaustion"] = dataclasses.replace(
        default_scenario((sim.Segment(duration=120.0, potentiometer=2500.0,
                                      sun=sim.SunMode.DAY),)),
        bank=tiny_ideal_bank(), initial_soc=0.5,
        supervisor=SupervisorConfig(override=True), site=noon_site())
    suite["sweep"] = dataclasses.replace(
        default_scenario((
            sim.Segment(duration=90.0, potentiometer=5000.0, sun=sim.SunMode.DAY),
            sim.Segment(duration=15.0, potentiometer=4000.0, sun=sim.SunMode.DAY),
            sim.Segment(duration=15.0, potentiometer=3000.0, sun=sim.SunMode.DAY),
            sim.Segment(duration=15.0, potentiometer=2000.0, sun=sim.SunMode.DAY),
            sim.Segment(duration=15.0, potentiometer=1000.0, sun=sim.SunMode.DAY),
            sim.Segment(duration=30.0, brake_force=600.0, sun=sim.SunMode.DAY),
        )),
        supervisor=SupervisorConfig(override=True), site=noon_site())
    suite["reverse"] = default_scenario((
        sim.Segment(duration=30.0, potentiometer=1200.0,
                    direction=Direction.REVERSE),
        sim.Segment(duration=20.0, brake_force=300.0,
                    direction=Direction.REVERSE),
    ))
    return suite


@pytest.fixture(scope="session")
def suite() -> dict[str, sim.Scenario]:
    return build_suite()


@pytest.fixture(scope="session")
def suite_results(suite) -> dict[str, tuple[sim.Trace, sim.EnergyAudit]]:
    return {name: sim.run(scenario) for name, scenario in suite.items()}
