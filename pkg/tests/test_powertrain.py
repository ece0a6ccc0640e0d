"""Throttle, series motor, clutch, and rider model tests.

Motor operating points are checked against the averaged-PWM relations
I = dV / (R + c_e * w) with a hard current clamp, torque = c_t * I^2, and
the two torque caps (rated power, electrical input power). The duty
inversion, clutch engagement rule, and rider limits are exercised across
their branch points.
"""

import pytest
from hypothesis import given, settings, strategies as st

from hsev import powertrain
from hsev.defaults import MOTOR, RIDER, SPROCKETS
from hsev.errors import InputDomainError


def mech_power(duty, speed):
    torque, _, _ = powertrain.motor_step(duty, speed, MOTOR)
    return torque * speed


class TestThrottle:
    def test_midpoint(self):
        half = powertrain.pot_to_duty(powertrain.ControllerInput(2500.0))
        assert half == 0.5

    def test_endpoints(self):
        assert powertrain.pot_to_duty(powertrain.ControllerInput(0.0)) == 0.0
        assert powertrain.pot_to_duty(powertrain.ControllerInput(5000.0)) == 1.0

    def test_monotone(self):
        duties = [powertrain.pot_to_duty(powertrain.ControllerInput(r))
                  for r in range(0, 5001, 250)]
        assert all(a < b for a, b in zip(duties, duties[1:]))

    def test_range_enforced(self):
        with pytest.raises(InputDomainError):
            powertrain.ControllerInput(-1.0)
        with pytest.raises(InputDomainError):
            powertrain.ControllerInput(5000.1)


class TestMotorStep:
    def test_stall_current_hits_limit_exactly(self):
        torque, current, power = powertrain.motor_step(1.0, 0.0, MOTOR)
        assert current == 500.0
        assert power == 48.0 * 500.0
        assert torque == pytest.approx(
            MOTOR.series_field_constant * 500.0 ** 2, rel=1e-15)

    def test_zero_duty_is_idle(self):
        assert powertrain.motor_step(0.0, 50.0, MOTOR) == (0.0, 0.0, 0.0)

    def test_unclamped_operating_point(self):
        speed = 200.0
        torque, current, power = powertrain.motor_step(0.8, speed, MOTOR)
        v_avg = 0.8 * 48.0
        expected_i = v_avg / (MOTOR.armature_resistance
                              + MOTOR.speed_constant * speed)
        assert current == pytest.approx(expected_i, rel=1e-15)
        assert power == pytest.approx(v_avg * expected_i, rel=1e-15)
        assert torque * speed <= MOTOR.max_power + 1e-9

    def test_full_duty_peak_power_reaches_rating(self):
        speeds = [1.0 + 0.5 * k for k in range(800)]
        peak = max(mech_power(1.0, w) for w in speeds)
        assert peak == pytest.approx(MOTOR.max_power, rel=0.005)
        assert peak <= MOTOR.max_power + 1e-9

    def test_power_caps_hold_everywhere(self):
        for duty in (0.2, 0.5, 0.8, 1.0):
            for speed in (0.5, 5.0, 40.0, 120.0, 300.0, 900.0):
                torque, _, electrical = powertrain.motor_step(duty, speed, MOTOR)
                assert torque * speed <= MOTOR.max_power + 1e-9
                assert torque * speed <= electrical + 1e-9

    def test_domain_errors(self):
        with pytest.raises(InputDomainError):
            powertrain.motor_step(1.1, 10.0, MOTOR)
        with pytest.raises(InputDomainError):
            powertrain.motor_step(0.5, -1.0, MOTOR)

    def test_spec_must_be_positive(self):
        with pytest.raises(InputDomainError):
            powertrain.MotorSpec(supply_voltage=48.0, max_power=7457.0,
                                 current_limit=0.0, armature_resistance=0.096,
                                 series_field_constant=1e-3,
                                 speed_constant=8e-4)

    @settings(max_examples=300, deadline=None)
    @given(duty=st.floats(0.0, 1.0), speed=st.floats(0.0, 1000.0))
    def test_operating_point_invariants(self, duty, speed):
        torque, current, electrical = powertrain.motor_step(duty, speed, MOTOR)
        assert 0.0 <= current <= MOTOR.current_limit
        assert torque >= 0.0
        assert electrical == pytest.approx(duty * 48.0 * current, rel=1e-12)
        assert torque * speed <= MOTOR.max_power * (1.0 + 1e-12) + 1e-9
        assert torque * speed <= electrical * (1.0 + 1e-12) + 1e-9


class TestDutyInversion:
    @settings(max_examples=300, deadline=None)
    @given(power=st.floats(0.0, 24000.0), speed=st.floats(0.0, 1000.0))
    def test_never_overshoots_target(self, power, speed):
        duty = powertrain.duty_for_electrical_power(power, speed, MOTOR)
        assert 0.0 <= duty <= 1.0
        _, _, electrical = powertrain.motor_step(duty, speed, MOTOR)
        assert electrical <= power * (1.0 + 1e-9) + 1e-9

    @settings(max_examples=200, deadline=None)
    @given(power=st.floats(1.0, 20000.0), speed=st.floats(0.0, 1000.0))
    def test_exact_when_within_duty_range(self, power, speed):
        duty = powertrain.duty_for_electrical_power(power, speed, MOTOR)
        if duty < 1.0:
            _, _, electrical = powertrain.motor_step(duty, speed, MOTOR)
            assert electrical == pytest.approx(power, rel=1e-9)

    def test_zero_power_means_zero_duty(self):
        assert powertrain.duty_for_electrical_power(0.0, 100.0, MOTOR) == 0.0

    def test_negative_power_rejected(self):
        with pytest.raises(InputDomainError):
            powertrain.duty_for_electrical_power(-1.0, 100.0, MOTOR)


class TestClutch:
    def test_tie_engages(self):
        state = powertrain.clutch_resolve(25.0, 20.0, 10.0, SPROCKETS)
        assert state.engaged
        assert state.transmitted_torque == pytest.approx(20.0 * 2.5)

    def test_pedaling_faster_engages(self):
        state = powertrain.clutch_resolve(30.0, 20.0, 10.0, SPROCKETS)
        assert state.engaged

    def test_axle_outrunning_pedals_slips(self):
        state = powertrain.clutch_resolve(20.0, 20.0, 10.0, SPROCKETS)
        assert not state.engaged
        assert state.transmitted_torque == 0.0

    def test_domain_errors(self):
        with pytest.raises(InputDomainError):
            powertrain.clutch_resolve(-1.0, 20.0, 10.0, SPROCKETS)
        with pytest.raises(InputDomainError):
            powertrain.clutch_resolve(1.0, -20.0, 10.0, SPROCKETS)


class TestWheelForce:
    def test_torque_over_radius(self):
        assert powertrain.wheel_force(50.0, SPROCKETS) == pytest.approx(
            50.0 / 0.25)


class TestRiderCommand:
    def test_standstill_launch_uses_torque_limit(self):
        cadence, torque = powertrain.rider_command(120.0, 0.0, SPROCKETS,
                                                   RIDER)
        assert cadence == 0.0
        assert torque == RIDER.max_torque

    def test_cruise_delivers_commanded_power(self):
        axle_speed = 9.4  # rad/s; matched cadence 23.5 below the limit
        cadence, torque = powertrain.rider_command(120.0, axle_speed,
                                                   SPROCKETS, RIDER)
        assert cadence == pytest.approx(axle_speed * 2.5)
        assert cadence * torque == pytest.approx(120.0, rel=1e-12)

    def test_torque_clamp_near_standstill(self):
        cadence, torque = powertrain.rider_command(500.0, 0.4, SPROCKETS,
                                                   RIDER)
        assert cadence == pytest.approx(1.0)
        assert torque == RIDER.max_torque

    def test_freewheel_beyond_cadence_limit(self):
        axle_speed = RIDER.max_cadence / SPROCKETS.pedal_ratio + 0.1
        cadence, torque = powertrain.rider_command(120.0, axle_speed,
                                                   SPROCKETS, RIDER)
        assert cadence == RIDER.max_cadence
        assert torque == 0.0

    def test_zero_power_is_idle(self):
        assert powertrain.rider_command(0.0, 5.0, SPROCKETS, RIDER) == (0.0, 0.0)

    def test_negative_power_rejected(self):
        with pytest.raises(InputDomainError):
            powertrain.rider_command(-1.0, 5.0, SPROCKETS, RIDER)

    def test_limit_domain(self):
        with pytest.raises(InputDomainError):
            powertrain.RiderParams(max_torque=0.0, max_cadence=40.0)

    @settings(max_examples=200, deadline=None)
    @given(power=st.floats(0.0, 500.0), axle_speed=st.floats(0.0, 30.0))
    def test_command_respects_limits(self, power, axle_speed):
        cadence, torque = powertrain.rider_command(power, axle_speed,
                                                   SPROCKETS, RIDER)
        assert 0.0 <= cadence <= RIDER.max_cadence
        assert 0.0 <= torque <= RIDER.max_torque
        assert cadence * torque <= max(power, 0.0) + 1e-9 or cadence == 0.0
