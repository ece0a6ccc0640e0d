"""PV panel, array wiring, output model, and charge-routing tests.

Array output values are checked against a direct recompute of
ghi * area * efficiency * (1 - derate) from the panel ratings, and the
charge-controller split against its conservation and capacity rules.
"""

import pytest
from hypothesis import given, settings, strategies as st

from hsev import pv
from hsev.defaults import ARRAY, CHARGE_CONTROLLER, PANEL
from hsev.errors import InputDomainError


class TestPanelSpec:
    def test_area_from_stc(self):
        assert pv.panel_area_from_stc(205.0, 0.165) == pytest.approx(
            205.0 / 165.0, rel=1e-15)

    def test_area_from_stc_domain(self):
        with pytest.raises(InputDomainError):
            pv.panel_area_from_stc(205.0, 0.0)
        with pytest.raises(InputDomainError):
            pv.panel_area_from_stc(205.0, 1.5)
        with pytest.raises(InputDomainError):
            pv.panel_area_from_stc(-1.0, 0.165)

    def test_default_area_is_stc_implied(self):
        panel = pv.PanelSpec(v_mp=40.0, i_mp=5.1, p_max=205.0, efficiency=0.165)
        assert panel.area == pytest.approx(205.0 / 165.0, rel=1e-15)

    def test_explicit_area_kept(self):
        assert PANEL.area == 1.2441

    def test_power_rating_consistency(self):
        with pytest.raises(InputDomainError):
            pv.PanelSpec(v_mp=40.0, i_mp=5.1, p_max=215.0, efficiency=0.165)

    def test_rating_domain(self):
        with pytest.raises(InputDomainError):
            pv.PanelSpec(v_mp=40.0, i_mp=5.1, p_max=205.0, efficiency=0.31)
        with pytest.raises(InputDomainError):
            pv.PanelSpec(v_mp=-40.0, i_mp=5.1, p_max=205.0, efficiency=0.165)
        with pytest.raises(InputDomainError):
            pv.PanelSpec(v_mp=40.0, i_mp=5.1, p_max=205.0, efficiency=0.165,
                         area=0.0)


class TestWireArray:
    def test_two_series_two_parallel(self):
        array = pv.wire_array(PANEL, 2, 2)
        assert array.v_nominal == pytest.approx(80.0)
        assert array.i_nominal == pytest.approx(10.2)
        assert array.p_stc == pytest.approx(820.0)
        assert array.total_area == pytest.approx(4 * 1.2441, rel=1e-15)
        assert array.series_count == 2 and array.parallel_count == 2

    def test_counts_must_be_positive(self):
        with pytest.raises(InputDomainError):
            pv.wire_array(PANEL, 0, 2)
        with pytest.raises(InputDomainError):
            pv.wire_array(PANEL, 2, -1)

    def test_default_array_is_2s2p(self):
        assert ARRAY.v_nominal == pytest.approx(80.0)
        assert ARRAY.p_stc == pytest.approx(820.0)


class TestArrayPower:
    def test_benchmark_average_irradiance(self):
        out = pv.array_power(439.0, ARRAY, pv.SpeDerate(0.0))
        assert out == pytest.approx(439.0 * 4 * 1.2441 * 0.165, rel=1e-12)
        assert round(out) == 360

    def test_benchmark_maximum_irradiance(self):
        out = pv.array_power(582.0, ARRAY, pv.SpeDerate(0.0))
        assert out == pytest.approx(582.0 * 4 * 1.2441 * 0.165, rel=1e-12)
        assert round(out) == 478

    @pytest.mark.parametrize("ghi,fraction,expected_cell", [
        (439.0, 0.05, 342), (439.0, 0.30, 252),
        (582.0, 0.05, 454), (582.0, 0.30, 335),
    ])
    def test_derated_cells(self, ghi, fraction, expected_cell):
        out = pv.array_power(ghi, ARRAY, pv.SpeDerate(fraction))
        assert round(out) == expected_cell

    def test_derate_scales_linearly(self):
        base = pv.array_power(439.0, ARRAY, pv.SpeDerate(0.0))
        assert pv.array_power(439.0, ARRAY, pv.SpeDerate(0.05)) == 0.95 * base
        assert pv.array_power(439.0, ARRAY, pv.SpeDerate(0.30)) == 0.70 * base

    def test_clamped_at_stc_rating(self):
        assert pv.array_power(1500.0, ARRAY, pv.SpeDerate(0.0)) == ARRAY.p_stc

    def test_zero_irradiance(self):
        assert pv.array_power(0.0, ARRAY, pv.SpeDerate(0.0)) == 0.0

    def test_negative_irradiance_rejected(self):
        with pytest.raises(InputDomainError):
            pv.array_power(-1.0, ARRAY, pv.SpeDerate(0.0))

    def test_derate_fraction_domain(self):
        with pytest.raises(InputDomainError):
            pv.SpeDerate(1.0)
        with pytest.raises(InputDomainError):
            pv.SpeDerate(-0.01)

    @settings(max_examples=200, deadline=None)
    @given(ghi=st.floats(0.0, 1500.0), fraction=st.floats(0.0, 0.99))
    def test_matches_direct_recompute(self, ghi, fraction):
        out = pv.array_power(ghi, ARRAY, pv.SpeDerate(fraction))
        expected = min(ghi * ARRAY.total_area * PANEL.efficiency
                       * (1.0 - fraction), ARRAY.p_stc)
        assert out == expected
        assert 0.0 <= out <= ARRAY.p_stc


class TestChargeControllerSplit:
    def test_load_first_then_battery(self):
        split = pv.charge_controller_split(350.0, 200.0, CHARGE_CONTROLLER, True)
        assert split == pv.PvPowerSplit(200.0, 150.0, 0.0)

    def test_no_load_all_to_battery(self):
        split = pv.charge_controller_split(300.0, 0.0, CHARGE_CONTROLLER, True)
        assert split == pv.PvPowerSplit(0.0, 300.0, 0.0)

    def test_charge_current_cap_curtails(self):
        split = pv.charge_controller_split(3000.0, 0.0, CHARGE_CONTROLLER, True)
        assert split.to_battery == pytest.approx(45.0 * 48.0)
        assert split.curtailed == pytest.approx(3000.0 - 45.0 * 48.0)

    def test_load_exceeds_pv(self):
        split = pv.charge_controller_split(100.0, 500.0, CHARGE_CONTROLLER, True)
        assert split == pv.PvPowerSplit(100.0, 0.0, 0.0)

    def test_battery_not_accepting_curtails_remainder(self):
        split = pv.charge_controller_split(3000.0, 100.0, CHARGE_CONTROLLER,
                                           False)
        assert split == pv.PvPowerSplit(100.0, 0.0, 2900.0)

    def test_negative_inputs_rejected(self):
        with pytest.raises(InputDomainError):
            pv.charge_controller_split(-1.0, 0.0, CHARGE_CONTROLLER, True)
        with pytest.raises(InputDomainError):
            pv.charge_controller_split(0.0, -1.0, CHARGE_CONTROLLER, True)

    def test_controller_rating_domain(self):
        with pytest.raises(InputDomainError):
            pv.ChargeControllerSpec(max_charge_current=0.0, bus_voltage=48.0)
        with pytest.raises(InputDomainError):
            pv.ChargeControllerSpec(max_charge_current=45.0, bus_voltage=-48.0)

    @settings(max_examples=300, deadline=None)
    @given(pv_power=st.floats(0.0, 5000.0), load=st.floats(0.0, 5000.0),
           accepting=st.booleans())
    def test_split_conservation_and_caps(self, pv_power, load, accepting):
        split = pv.charge_controller_split(pv_power, load, CHARGE_CONTROLLER,
                                           accepting)
        total = split.to_load + split.to_battery + split.curtailed
        assert total == pytest.approx(pv_power, abs=1e-9 * max(pv_power, 1.0))
        assert split.to_load >= 0.0
        assert split.to_battery >= 0.0
        assert split.curtailed >= 0.0
        assert split.to_load <= load + 1e-12
        assert split.to_battery / CHARGE_CONTROLLER.bus_voltage <= 45.0 + 1e-12
        if not accepting:
            assert split.to_battery == 0.0
