"""Command-line entry point.

Subcommands: simulate (run a drive cycle to a trace CSV), solar-day (predict
a day of array output and compare against measurements), battery (replay a
constant-current discharge), compare (prediction-vs-measurement arithmetic
from configured irradiance statistics). Exit codes: 0 success, 1 validation
or input failure, 2 I/O failure; every error is a single line prefixed
`error: <category>:`.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import battery as bat
from . import config as cfg
from . import defaults
from . import pv as pvmod
from . import sim
from . import solar
from .errors import ConfigurationError, InputDomainError, SimulatorError


def _load(args) -> cfg.RunConfig:
    return cfg.load_config(getattr(args, "config", None))


def _apply_derate(run_config: cfg.RunConfig, derate: float | None) -> cfg.RunConfig:
    if derate is None:
        return run_config
    raw = dict(run_config.raw)
    raw["array"] = dict(raw["array"], derate=float(derate))
    scenario = dataclasses.replace(run_config.scenario,
                                   derate=pvmod.SpeDerate(derate))
    return dataclasses.replace(run_config, raw=raw, scenario=scenario)


def _dump_requested(args, run_config: cfg.RunConfig) -> bool:
    if getattr(args, "dump_effective_config", False):
        sys.stdout.write(cfg.dump_effective_config(run_config))
        return True
    return False


def _site_of(run_config: cfg.RunConfig) -> sim.SolarSite:
    return run_config.scenario.site


def _measured_summary(value: str | None) -> sim.MeasuredSummary | None:
    """Resolve --measured: inline `avg,max[,HH:MM]` summary or a CSV path."""
    if value is None:
        return None
    parts = value.split(",")
    if len(parts) in (2, 3):
        try:
            average = float(parts[0])
            maximum = float(parts[1])
        except ValueError:
            pass
        else:
            time_of_max = parts[2].strip() if len(parts) == 3 else None
            return sim.MeasuredSummary(average_power=average,
                                       max_power=maximum,
                                       time_of_max=time_of_max)
    with open(value, "r", encoding="utf-8") as handle:
        rows = sim.parse_measurement_csv(handle.read())
    return sim.summarize_measurements(rows)


def _report_from_overrides(run_config: cfg.RunConfig,
                           measured: sim.MeasuredSummary | None,
                           ) -> sim.ComparisonReport:
    return sim.build_comparison_report(
        run_config.ghi_average_override, run_config.ghi_max_override,
        run_config.time_of_max_override, run_config.scenario.array, measured)


def _audit_summary(audit: sim.EnergyAudit, trace: sim.Trace) -> str:
    lines = [
        f"energy in (Wh): {audit.energy_in_wh:.3f} = "
        f"battery {audit.battery_discharge_wh:.3f} + pv {audit.pv_wh:.3f} "
        f"+ pedal {audit.pedal_wh:.3f}",
        f"energy out (Wh): {audit.energy_out_wh:.3f} = "
        f"aux {audit.aux_wh:.3f} + curtailed {audit.curtailed_wh:.3f} "
        f"+ charge {audit.battery_charge_wh:.3f} + motor loss "
        f"{audit.motor_electrical_wh - audit.motor_mechanical_wh:.3f} "
        f"+ kinetic {audit.kinetic_gain_wh:.3f} "
        f"+ dissipation {audit.dissipation_wh:.3f}",
        f"residual (Wh): {audit.residual_wh:.3e}",
        f"final: speed {trace.final_speed:.3f} m/s, position "
        f"{trace.final_position:.3f} m, soc {trace.final_soc:.4f}",
    ]
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    run_config = _apply_derate(_load(args), args.derate)
    if _dump_requested(args, run_config):
        return 0
    trace, audit = sim.run(run_config.scenario)
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        handle.write(sim.trace_to_csv(trace))
    sys.stdout.write(f"trace: {args.out} ({len(trace.rows)} rows)\n")
    sys.stdout.write(_audit_summary(audit, trace))
    return 0


def cmd_solar_day(args) -> int:
    run_config = _apply_derate(_load(args), args.derate)
    if _dump_requested(args, run_config):
        return 0
    measured = _measured_summary(args.measured)
    site = _site_of(run_config)
    array = run_config.scenario.array
    if (run_config.ghi_average_override is not None
            and run_config.ghi_max_override is not None):
        average_ghi = run_config.ghi_average_override
        max_ghi = run_config.ghi_max_override
        time_of_max = run_config.time_of_max_override
    else:
        _, stats = solar.day_profile(site.location, site.date,
                                     site.atmosphere,
                                     (site.window_start, site.window_end),
                                     site.step)
        average_ghi = stats.average_ghi
        max_ghi = stats.max_ghi
        time_of_max = stats.time_of_max.strftime("%H:%M")
    window = (f"{site.window_start.strftime('%H:%M')}-"
              f"{site.window_end.strftime('%H:%M')}")
    sys.stdout.write(f"site: {site.location.latitude:.2f} deg, "
                     f"{site.location.longitude:.2f} deg, "
                     f"UTC{site.location.utc_offset:+.0f}, {site.date.isoformat()}\n")
    sys.stdout.write(f"window: {window}\n")
    sys.stdout.write(f"average global irradiance: {average_ghi:.1f} W/m2\n")
    sys.stdout.write(f"maximum global irradiance: {max_ghi:.1f} W/m2\n")
    sys.stdout.write(f"time of maximum: {time_of_max or '-'}\n")
    report = sim.build_comparison_report(average_ghi, max_ghi, time_of_max,
                                         array, measured,
                                         predicted_window=window)
    if measured is not None:
        sys.stdout.write("\n" + sim.render_comparison_text(report))
    if args.out is not None:
        payload = sim.report_to_dict(report)
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
    return 0


def _battery_spec_for(run_config: cfg.RunConfig | None,
                      chemistry: bat.Chemistry) -> bat.BatterySpec:
    """The configured battery when its chemistry matches, else the preset."""
    if (run_config is not None
            and run_config.scenario.bank.battery.chemistry is chemistry):
        return run_config.scenario.bank.battery
    if chemistry is bat.Chemistry.LEAD_ACID:
        return defaults.LEAD_ACID
    return defaults.SILICONE


def _battery_lines(replay: sim.BatteryReplay) -> list[str]:
    lines = [f"delivered: {replay.delivered_ah:.1f} Ah",
             f"duration: {replay.duration_h:.2f} h"]
    if replay.energy_density_wh_per_kg is not None:
        lines.append(f"energy density: {replay.energy_density_wh_per_kg:.1f} Wh/kg")
    return lines


def cmd_battery(args) -> int:
    if args.current <= 0.0:
        raise InputDomainError("discharge current must be positive")
    run_config = cfg.load_config(args.config) if args.config else None
    if args.chemistry == "both":
        if args.out is not None:
            raise InputDomainError(
                "--out needs a single chemistry, not 'both'")
        replays = {
            name: sim.replay_battery_experiment(
                _battery_spec_for(run_config, chem), args.current)
            for name, chem in (("lead_acid", bat.Chemistry.LEAD_ACID),
                               ("silicone", bat.Chemistry.SILICONE))}
        labels = ("delivered (Ah)", "duration (h)", "energy density (Wh/kg)")
        cells = {name: [f"{r.delivered_ah:.1f}", f"{r.duration_h:.2f}",
                        "-" if r.energy_density_wh_per_kg is None
                        else f"{r.energy_density_wh_per_kg:.1f}"]
                 for name, r in replays.items()}
        width = max(len(label) for label in labels)
        sys.stdout.write(f"{'':<{width}}  {'lead_acid':>10}  {'silicone':>10}\n")
        for row_index, label in enumerate(labels):
            sys.stdout.write(
                f"{label:<{width}}  {cells['lead_acid'][row_index]:>10}  "
                f"{cells['silicone'][row_index]:>10}\n")
        return 0
    chemistry = bat.Chemistry(args.chemistry)
    spec = _battery_spec_for(run_config, chemistry)
    replay = sim.replay_battery_experiment(spec, args.current)
    sys.stdout.write(f"{chemistry.value} at {args.current:g} A\n")
    for line in _battery_lines(replay):
        sys.stdout.write(line + "\n")
    if args.out is not None:
        lines = ["time_s,current_a,soc,delivered_ah,delivered_wh"]
        for time_s, state in replay.rows:
            lines.append(",".join((
                sim.fmt6(time_s), sim.fmt6(args.current), sim.fmt6(state.soc),
                sim.fmt6(state.delivered_ah), sim.fmt6(state.delivered_wh))))
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write("\n".join(lines) + "\n")
    return 0


def cmd_compare(args) -> int:
    run_config = _apply_derate(_load(args), args.derate)
    if _dump_requested(args, run_config):
        return 0
    if (run_config.ghi_average_override is None
            or run_config.ghi_max_override is None):
        raise ConfigurationError(
            "compare requires atmosphere.ghi_avg_override_w_m2 and "
            "atmosphere.ghi_max_override_w_m2 in the config")
    measured = _measured_summary(args.measured)
    report = _report_from_overrides(run_config, measured)
    sys.stdout.write(sim.render_comparison_text(report))
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(sim.report_to_dict(report), handle, indent=2)
            handle.write("\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsev",
        description="Hybrid human/solar/electric vehicle simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="run a drive cycle")
    simulate.add_argument("--config", help="TOML configuration file")
    simulate.add_argument("--out", required=True, help="trace CSV path")
    simulate.add_argument("--derate", type=float,
                          help="override the array derate fraction")
    simulate.add_argument("--dump-effective-config", action="store_true",
                          help="print the effective config and exit")
    simulate.set_defaults(func=cmd_simulate)

    solar_day = sub.add_parser("solar-day",
                               help="predict a day of array output")
    solar_day.add_argument("--config", help="TOML configuration file")
    solar_day.add_argument("--measured",
                           help="measured series CSV, or inline avg,max[,HH:MM]")
    solar_day.add_argument("--out", help="JSON report path")
    solar_day.add_argument("--derate", type=float,
                           help="override the array derate fraction")
    solar_day.add_argument("--dump-effective-config", action="store_true",
                           help="print the effective config and exit")
    solar_day.set_defaults(func=cmd_solar_day)

    battery = sub.add_parser("battery",
                             help="replay a constant-current discharge")
    battery.add_argument("chemistry",
                         choices=("lead_acid", "silicone", "both"))
    battery.add_argument("current", type=float, help="discharge current, A")
    battery.add_argument("--config", help="TOML configuration file")
    battery.add_argument("--out", help="discharge CSV path")
    battery.set_defaults(func=cmd_battery)

    compare = sub.add_parser("compare",
                             help="compare configured predictions to measurements")
    compare.add_argument("--measured", required=True,
                         help="measured series CSV, or inline avg,max[,HH:MM]")
    compare.add_argument("--config", help="TOML configuration file")
    compare.add_argument("--out", help="JSON report path")
    compare.add_argument("--derate", type=float,
                         help="override the array derate fraction")
    compare.add_argument("--dump-effective-config", action="store_true",
                         help="print the effective config and exit")
    compare.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        for violation in exc.violations:
            print(f"error: config: {violation}", file=sys.stderr)
        return 1
    except SimulatorError as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
