"""`stageseat-bench` load/stress CLI."""

from __future__ import annotations

import json
import sys

import click

from .bench import (
    ScenarioConfig,
    report_csv_rows,
    run_load,
    stress_sweep,
    write_report,
)
from .errors import ConfigError, TargetUnreachable
from .figures import render_bench_figures, render_sweep_figure


def _parse_mix(raw: str) -> dict[str, float]:
    mix = {}
    for part in raw.split(","):
        if not part.strip():
            continue
        try:
            action, weight = part.split("=")
            mix[action.strip()] = float(weight)
        except ValueError:
            raise ConfigError(f"bad mix entry {part!r}") from None
    return mix


@click.command()
@click.option("--base-url", required=True)
@click.option("--users", type=int, default=10)
@click.option("--duration-s", type=float, default=10.0)
@click.option("--ramp-s", type=float, default=0.0)
@click.option("--mix", default="browse=0.5,search=0.2,book=0.2,review=0.1",
              help="action=weight pairs, comma separated")
@click.option("--seed", type=int, default=42)
@click.option("--out", "out_json", default=None, help="report JSON path")
@click.option("--csv", "out_csv", default=None, help="report CSV path")
@click.option("--figures", "figures_dir", default=None,
              help="directory for rendered charts")
@click.option("--steps", default=None,
              help="comma-separated user counts for a stress sweep")
@click.option("--think-ms", type=int, default=0)
@click.option("--monitor-pid", type=int, default=None,
              help="sample CPU/RSS of a local server PID")
def main(base_url, users, duration_s, ramp_s, mix, seed, out_json, out_csv,
         figures_dir, steps, think_ms, monitor_pid):
    """Fire a closed-loop load scenario at a running stageseat instance
    and report KPIs: latency percentiles, throughput, error rate."""
    try:
        cfg = ScenarioConfig(base_url=base_url, users=users,
                             duration_s=duration_s, ramp_s=ramp_s,
                             mix=_parse_mix(mix), rng_seed=seed,
                             think_ms=think_ms, monitor_pid=monitor_pid)
        if steps:
            sweep = stress_sweep(cfg, [int(s) for s in steps.split(",")])
            _print_sweep(sweep)
            if out_json:
                with open(out_json, "w", encoding="utf-8") as fh:
                    json.dump(sweep, fh, indent=2)
            if figures_dir:
                render_sweep_figure(sweep, figures_dir)
            return
        report = run_load(cfg)
    except (ConfigError, TargetUnreachable) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    _print_report(report)
    write_report(report, out_json, out_csv)
    if figures_dir:
        for path in render_bench_figures(report, figures_dir):
            click.echo(f"figure: {path}")


def _print_report(report: dict):
    overall = report["overall"]
    lat = overall["latency_ms"] or {}
    click.echo(f"requests: {overall['request_count']}  "
               f"errors: {overall['error_count']} "
               f"({overall['error_rate_pct']:.2f}%)  "
               f"contended: {overall['contended_count']}  "
               f"throughput: {overall['throughput_rps']:.1f} rps")
    if lat:
        click.echo(f"latency ms  p50={lat['p50']:.1f}  p95={lat['p95']:.1f}  "
                   f"p99={lat['p99']:.1f}  mean={lat['mean']:.1f}  "
                   f"max={lat['max']:.1f}")
    for row in report_csv_rows(report):
        click.echo("  ".join(f"{k}={row[k]}" for k in row))


def _print_sweep(sweep: dict):
    for step in sweep["steps"]:
        if "unreachable" in step:
            click.echo(f"users={step['users']}  UNREACHABLE")
            continue
        overall = step["report"]["overall"]
        lat = overall["latency_ms"] or {}
        click.echo(f"users={step['users']}  "
                   f"requests={overall['request_count']}  "
                   f"err={overall['error_rate_pct']:.2f}%  "
                   f"p95={lat.get('p95', float('nan')):.1f}ms")
    if sweep["knee_users"]:
        click.echo(f"knee at {sweep['knee_users']} users")


if __name__ == "__main__":
    main()
