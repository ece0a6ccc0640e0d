"""Road-load, supervisor, auxiliary-load, and longitudinal-dynamics tests.

The integrator is checked for exact work/kinetic-energy bookkeeping and
against the analytic coast-down solution of m dv/dt = -(a + b v^2); the
cruise band is checked with an independent root find on the road-load
power balance.
"""

import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from hsev import vehicle
from hsev.defaults import VEHICLE
from hsev.errors import ConfigurationError, InputDomainError
from hsev.vehicle import Direction, MPH_TO_MPS


class TestSupervisorGate:
    @pytest.mark.parametrize("mph,expected", [
        (0.0, False), (4.9, False), (5.0, False), (5.1, True), (20.0, True),
    ])
    def test_forward_threshold_is_strict(self, mph, expected):
        config = vehicle.SupervisorConfig()
        gate = vehicle.supervisor_gate(mph * MPH_TO_MPS, Direction.FORWARD,
                                       config)
        assert gate is expected

    @pytest.mark.parametrize("mph", [0.0, 4.9, 5.0, 5.1, 20.0])
    def test_override_always_enables(self, mph):
        config = vehicle.SupervisorConfig(override=True)
        assert vehicle.supervisor_gate(mph * MPH_TO_MPS, Direction.FORWARD,
                                       config)

    @pytest.mark.parametrize("mph", [0.0, 4.9, 5.0, 5.1, 20.0])
    @pytest.mark.parametrize("override", [False, True])
    def test_reverse_always_enables(self, mph, override):
        config = vehicle.SupervisorConfig(override=override)
        assert vehicle.supervisor_gate(mph * MPH_TO_MPS, Direction.REVERSE,
                                       config)

    def test_threshold_domain(self):
        with pytest.raises(InputDomainError):
            vehicle.SupervisorConfig(speed_threshold=-0.1)


class TestResistiveForces:
    def test_standstill_is_rolling_resistance_only(self):
        force = vehicle.resistive_forces(0.0, 0.0, VEHICLE)
        assert force == pytest.approx(0.012 * 400.0 * 9.81, rel=1e-15)

    def test_aero_term_quadruples_with_doubled_speed(self):
        base = vehicle.resistive_forces(0.0, 0.0, VEHICLE)
        at_5 = vehicle.resistive_forces(5.0, 0.0, VEHICLE) - base
        at_10 = vehicle.resistive_forces(10.0, 0.0, VEHICLE) - base
        assert at_10 == pytest.approx(4.0 * at_5, rel=1e-12)

    def test_grade_decomposition(self):
        grade = 0.05
        force = vehicle.resistive_forces(3.0, grade, VEHICLE)
        weight = 400.0 * 9.81
        expected = (0.012 * weight * math.cos(grade)
                    + 0.5 * 1.2 * 1.2 * 9.0 + weight * math.sin(grade))
        assert force == pytest.approx(expected, rel=1e-12)

    def test_downhill_can_be_net_negative(self):
        force = vehicle.resistive_forces(0.0, -0.1, VEHICLE)
        assert force < 0.0

    def test_speed_domain(self):
        with pytest.raises(InputDomainError):
            vehicle.resistive_forces(-0.1, 0.0, VEHICLE)

    def test_params_domain(self):
        with pytest.raises(InputDomainError):
            vehicle.VehicleParams(mass=0.0)
        with pytest.raises(InputDomainError):
            vehicle.VehicleParams(rolling_resistance=-0.01)


class TestCruiseBand:
    def test_pedal_power_balance_lands_in_band(self):
        def surplus(speed):
            return 120.0 - vehicle.resistive_forces(speed, 0.0, VEHICLE) * speed

        cruise = brentq(surplus, 0.1, 10.0, xtol=1e-12)
        mph = cruise / MPH_TO_MPS
        assert 5.0 <= mph <= 7.0
        assert surplus(cruise) == pytest.approx(0.0, abs=1e-6)


class TestAuxLoads:
    def test_bus_draw_includes_converter_loss(self):
        assert vehicle.aux_power_draw(vehicle.AuxLoads()) == pytest.approx(
            90.0 / 0.9, rel=1e-15)

    def test_draw_above_rating_rejected(self):
        with pytest.raises(ConfigurationError):
            vehicle.AuxLoads(draw=500.0)

    def test_domain_errors(self):
        with pytest.raises(InputDomainError):
            vehicle.AuxLoads(draw=-1.0)
        with pytest.raises(InputDomainError):
            vehicle.AuxLoads(efficiency=0.0)
        with pytest.raises(InputDomainError):
            vehicle.AuxLoads(converter_rating=0.0)


class TestAdvanceWithWork:
    def test_holds_still_under_brakes(self):
        result = vehicle.advance_with_work(0.0, 10.0, 100.0, 47.0, 400.0, 0.1)
        assert result == (0.0, 0.0, 0.0, 0.0, 0.0)

    def test_launches_when_traction_wins(self):
        new_speed, distance, w_t, w_b, w_r = vehicle.advance_with_work(
            0.0, 500.0, 0.0, 47.088, 400.0, 0.1)
        assert new_speed == pytest.approx((500.0 - 47.088) / 400.0 * 0.1)
        assert distance == pytest.approx(new_speed / 2.0 * 0.1)
        assert w_t == pytest.approx(500.0 * distance)

    def test_stops_at_zero_crossing(self):
        new_speed, distance, w_t, w_b, w_r = vehicle.advance_with_work(
            1.0, 0.0, 800.0, 50.0, 400.0, 1.0)
        assert new_speed == 0.0
        t_stop = 400.0 * 1.0 / 850.0
        assert distance == pytest.approx(0.5 * t_stop)
        assert w_b == pytest.approx(800.0 * distance)

    def test_domain_errors(self):
        with pytest.raises(InputDomainError):
            vehicle.advance_with_work(-1.0, 0.0, 0.0, 0.0, 400.0, 0.1)
        with pytest.raises(InputDomainError):
            vehicle.advance_with_work(1.0, -1.0, 0.0, 0.0, 400.0, 0.1)
        with pytest.raises(InputDomainError):
            vehicle.advance_with_work(1.0, 0.0, 0.0, 0.0, 400.0, 0.0)

    @settings(max_examples=400, deadline=None)
    @given(speed=st.floats(0.0, 30.0), traction=st.floats(0.0, 3000.0),
           brake=st.floats(0.0, 3000.0), resistive=st.floats(-500.0, 1500.0),
           dt=st.floats(0.01, 1.0))
    def test_work_sum_equals_kinetic_energy_change(self, speed, traction,
                                                   brake, resistive, dt):
        mass = 400.0
        new_speed, distance, w_t, w_b, w_r = vehicle.advance_with_work(
            speed, traction, brake, resistive, mass, dt)
        delta_ke = 0.5 * mass * (new_speed ** 2 - speed ** 2)
        scale = max(abs(w_t), abs(w_b), abs(w_r), 1.0)
        assert w_t - w_b - w_r == pytest.approx(delta_ke, abs=1e-9 * scale)
        assert new_speed >= 0.0
        assert distance >= 0.0

    def test_coast_down_matches_analytic_solution(self):
        mass = VEHICLE.mass
        a = VEHICLE.rolling_resistance * mass * VEHICLE.gravity
        b = 0.5 * VEHICLE.air_density * VEHICLE.drag_area
        v0, horizon, dt = 10.0, 5.0, 0.01

        speed = v0
        steps = round(horizon / dt)
        for _ in range(steps):
            resistive = vehicle.resistive_forces(speed, 0.0, VEHICLE)
            speed = vehicle.advance_with_work(speed, 0.0, 0.0, resistive,
                                              mass, dt)[0]

        ratio = math.sqrt(b / a)
        analytic = math.tan(math.atan(v0 * ratio)
                            - horizon * math.sqrt(a * b) / mass) / ratio
        assert speed == pytest.approx(analytic, rel=1e-3)
