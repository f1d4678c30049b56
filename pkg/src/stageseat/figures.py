"""Render bench/report figures to image files alongside the delimited
output."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_bench_figures(report: dict, out_dir: str) -> list[str]:
    """Latency percentile and throughput charts for one bench report.
    Returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    endpoints = {name: st for name, st in report["endpoints"].items()
                 if st["latency_ms"]}
    if endpoints:
        names = list(endpoints)
        fig, ax = plt.subplots(figsize=(8, 4.5))
        x = range(len(names))
        width = 0.25
        for off, key in ((-width, "p50"), (0.0, "p95"), (width, "p99")):
            ax.bar([i + off for i in x],
                   [endpoints[n]["latency_ms"][key] for n in names],
                   width=width, label=key)
        ax.set_xticks(list(x))
        ax.set_xticklabels(names, rotation=30, ha="right")
        ax.set_ylabel("latency (ms)")
        ax.set_title("Latency percentiles per endpoint")
        ax.legend()
        fig.tight_layout()
        path = os.path.join(out_dir, "latency_percentiles.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

        fig, ax = plt.subplots(figsize=(8, 4.5))
        ax.bar(names, [endpoints[n]["throughput_rps"] for n in names])
        ax.tick_params(axis="x", rotation=30)
        ax.set_ylabel("requests / s")
        ax.set_title("Throughput per endpoint")
        fig.tight_layout()
        path = os.path.join(out_dir, "throughput.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    return written


def render_sweep_figure(sweep: dict, out_dir: str) -> str | None:
    """p95 latency and error rate versus concurrent users."""
    points = [(s["users"], s["report"]["overall"])
              for s in sweep["steps"] if "report" in s]
    if not points:
        return None
    os.makedirs(out_dir, exist_ok=True)
    users = [u for u, _ in points]
    p95 = [(st["latency_ms"] or {}).get("p95") for _, st in points]
    err = [st["error_rate_pct"] for _, st in points]

    fig, ax1 = plt.subplots(figsize=(8, 4.5))
    ax1.plot(users, p95, marker="o", label="p95 latency")
    ax1.set_xlabel("concurrent users")
    ax1.set_ylabel("p95 latency (ms)")
    ax2 = ax1.twinx()
    ax2.plot(users, err, marker="s", color="tab:red", label="error rate")
    ax2.set_ylabel("error rate (%)")
    if sweep.get("knee_users"):
        ax1.axvline(sweep["knee_users"], linestyle="--", color="grey")
    ax1.set_title("Stress sweep")
    fig.tight_layout()
    path = os.path.join(out_dir, "stress_sweep.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
