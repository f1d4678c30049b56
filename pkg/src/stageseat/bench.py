"""Closed-loop HTTP load generator and KPI reporter.

Each virtual user is one thread with its own seeded RNG and disposable
account; it draws actions from the configured mix and records wall-clock
latency per request. Expected 4xx outcomes under contention (seat taken,
houseful, duplicate review, late cancel) are tallied as "contended", not
errors; 5xx and transport failures are errors.

With a fixed seed the per-user action sequence is deterministic; only
the timings vary run to run.
"""

from __future__ import annotations

import json
import math
import platform
import random
import threading
import time
from dataclasses import dataclass, field

import requests

from .errors import ConfigError, EmptySample, TargetUnreachable

ACTIONS = ("browse", "search", "book", "review", "cancel")
CONTENDED_CODES = {409, 422}

KNEE_ERROR_RATE_PCT = 1.0
KNEE_P95_FACTOR = 2.0


@dataclass
class ScenarioConfig:
    base_url: str
    users: int = 10
    duration_s: float = 10.0
    ramp_s: float = 0.0
    mix: dict[str, float] = field(default_factory=lambda: {
        "browse": 0.5, "search": 0.2, "book": 0.2, "review": 0.1})
    rng_seed: int = 42
    think_ms: int = 0
    monitor_pid: int | None = None
    timeout_s: float = 30.0

    def normalized_mix(self) -> list[tuple[str, float]]:
        for action in self.mix:
            if action not in ACTIONS:
                raise ConfigError(f"unknown action {action!r}")
        if any(w < 0 for w in self.mix.values()):
            raise ConfigError("mix weights must be >= 0")
        total = sum(self.mix.values())
        if total <= 0:
            raise ConfigError("mix weights must sum to a positive value")
        return [(a, w / total) for a, w in self.mix.items() if w > 0]


def percentile(sorted_latencies: list[float], p: float) -> float:
    """Nearest-rank: the value at 1-based index ceil(p/100 * n)."""
    if not sorted_latencies:
        raise EmptySample("percentile of empty sample")
    if not 0 < p <= 100:
        raise ValueError("p must be in (0, 100]")
    rank = math.ceil(p / 100 * len(sorted_latencies))
    return sorted_latencies[rank - 1]


@dataclass
class Sample:
    endpoint: str
    latency_ms: float
    outcome: str  # ok | contended | error


def action_sequence(cfg: ScenarioConfig, vuser: int, n: int) -> list[str]:
    """The first n actions virtual user `vuser` will draw. Deterministic
    in (seed, config): this is exactly the stream run_load consumes."""
    rng = random.Random(f"{cfg.rng_seed}:{vuser}")
    weighted = cfg.normalized_mix()
    actions = [a for a, _ in weighted]
    weights = [w for _, w in weighted]
    return rng.choices(actions, weights=weights, k=n)


class _VirtualUser(threading.Thread):
    def __init__(self, cfg: ScenarioConfig, index: int, deadline: float,
                 collector: list, collector_lock: threading.Lock):
        super().__init__(daemon=True)
        self.cfg = cfg
        self.index = index
        self.deadline = deadline
        self.collector = collector
        self.collector_lock = collector_lock
        # Action stream and in-action data draws use separate RNGs so the
        # drawn action sequence never depends on server responses.
        self.action_rng = random.Random(f"{cfg.rng_seed}:{index}")
        self.rng = random.Random(f"{cfg.rng_seed}:{index}:data")
        weighted = cfg.normalized_mix()
        self.actions = [a for a, _ in weighted]
        self.weights = [w for _, w in weighted]
        self.session = requests.Session()
        self.token: str | None = None
        self.movie_ids: list[int] = []
        self.show_ids: list[int] = []
        self.booking_ids: list[int] = []
        self.reviewed: set[int] = set()

    def run(self):
        try:
            self._register()
        except requests.RequestException:
            self._record("register", 0.0, "error")
            return
        while time.monotonic() < self.deadline:
            action = self.action_rng.choices(self.actions, weights=self.weights, k=1)[0]
            handler = getattr(self, f"_do_{action}")
            try:
                handler()
            except requests.RequestException:
                self._record(action, 0.0, "error")
            if self.cfg.think_ms:
                time.sleep(self.cfg.think_ms / 1000)

    # -- plumbing ---------------------------------------------------------

    def _record(self, endpoint: str, latency_ms: float, outcome: str):
        with self.collector_lock:
            self.collector.append(Sample(endpoint, latency_ms, outcome))

    def _request(self, method: str, path: str, endpoint: str, *,
                 json_body=None, ok_codes=(200, 201, 204)):
        headers = {}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        t0 = time.monotonic()
        resp = self.session.request(method, self.cfg.base_url + path,
                                    json=json_body, headers=headers,
                                    timeout=self.cfg.timeout_s)
        latency = (time.monotonic() - t0) * 1000
        if resp.status_code in ok_codes:
            outcome = "ok"
        elif resp.status_code in CONTENDED_CODES:
            outcome = "contended"
        elif 400 <= resp.status_code < 500:
            outcome = "ok"  # scenario-level 4xx (e.g. 404 on emptied list)
        else:
            outcome = "error"
        self._record(endpoint, latency, outcome)
        return resp

    def _register(self):
        name = f"vu-{self.cfg.rng_seed}-{self.index}-{int(time.time() * 1000)}"
        resp = self._request("POST", "/api/register", "register", json_body={
            "username": name, "email": f"{name}@bench.local",
            "password": "bench-password-1"})
        resp = self._request("POST", "/api/login", "login", json_body={
            "username": name, "password": "bench-password-1"})
        if resp.status_code == 200:
            self.token = resp.json()["token"]

    # -- actions ----------------------------------------------------------

    def _do_browse(self):
        resp = self._request("GET", "/api/movies", "browse")
        if resp.status_code == 200:
            movies = resp.json()
            self.movie_ids = [m["movie_id"] for m in movies]
            if movies and not self.show_ids:
                mid = self.rng.choice(self.movie_ids)
                shows = self._request("GET", f"/api/movies/{mid}/shows", "browse")
                if shows.status_code == 200:
                    self.show_ids = [s["show_id"] for s in shows.json()]

    def _do_search(self):
        q = self.rng.choice(["silent", "river", "golden", "a", "winter"])
        self._request("GET", f"/api/movies?q={q}&sort=rating", "search")

    def _do_book(self):
        if not self.show_ids:
            self._do_browse()
            if not self.show_ids:
                return
        sid = self.rng.choice(self.show_ids)
        resp = self._request("GET", f"/api/shows/{sid}/seats", "seats")
        if resp.status_code != 200:
            return
        grid = resp.json()["grid"]
        free = [f"{chr(65 + r)}{c + 1}"
                for r, row in enumerate(grid)
                for c, cell in enumerate(row) if cell == "free"]
        if not free:
            return
        picked = self.rng.sample(free, min(len(free), self.rng.randint(1, 2)))
        resp = self._request("POST", "/api/bookings", "book", json_body={
            "show_id": sid, "seats": picked, "coins_redeemed": 0})
        if resp.status_code == 201:
            self.booking_ids.append(resp.json()["booking_id"])

    def _do_review(self):
        if not self.movie_ids:
            self._do_browse()
            if not self.movie_ids:
                return
        candidates = [m for m in self.movie_ids if m not in self.reviewed]
        if not candidates:
            return
        mid = self.rng.choice(candidates)
        text = self.rng.choice(["great movie", "not good", "very good stuff",
                                "boring and mediocre", "a masterpiece"])
        resp = self._request("POST", f"/api/movies/{mid}/reviews", "review",
                             json_body={"rating": self.rng.randint(1, 5),
                                        "text": text})
        if resp.status_code in (201, 409):
            self.reviewed.add(mid)

    def _do_cancel(self):
        if not self.booking_ids:
            return
        bid = self.booking_ids.pop()
        self._request("DELETE", f"/api/bookings/{bid}", "cancel")


def run_load(cfg: ScenarioConfig) -> dict:
    cfg.normalized_mix()  # validate before any network traffic
    try:
        resp = requests.get(cfg.base_url + "/api/policy", timeout=5)
        resp.raise_for_status()
    except requests.RequestException as e:
        raise TargetUnreachable(f"{cfg.base_url}: {e}") from e

    samples: list[Sample] = []
    lock = threading.Lock()
    start = time.monotonic()
    deadline = start + cfg.duration_s
    monitor = _ResourceMonitor(cfg.monitor_pid) if cfg.monitor_pid else None
    if monitor:
        monitor.start()

    vusers = [_VirtualUser(cfg, i, deadline, samples, lock)
              for i in range(cfg.users)]
    for i, vu in enumerate(vusers):
        if cfg.ramp_s and cfg.users > 1:
            target = start + cfg.ramp_s * i / cfg.users
            pause = target - time.monotonic()
            if pause > 0:
                time.sleep(pause)
        vu.start()
    for vu in vusers:
        vu.join()
    wall = time.monotonic() - start
    if monitor:
        monitor.stop()

    report = build_report(samples, wall, cfg)
    if monitor:
        report["resources"] = monitor.summary()
    return report


def build_report(samples: list[Sample], wall_time_s: float,
                 cfg: ScenarioConfig) -> dict:
    def stats(group: list[Sample]) -> dict:
        lat = sorted(s.latency_ms for s in group if s.outcome != "error")
        errors = sum(1 for s in group if s.outcome == "error")
        contended = sum(1 for s in group if s.outcome == "contended")
        n = len(group)
        d = {
            "request_count": n,
            "error_count": errors,
            "contended_count": contended,
            "error_rate_pct": 100.0 * errors / n if n else 0.0,
            "throughput_rps": n / wall_time_s if wall_time_s > 0 else 0.0,
        }
        if lat:
            d["latency_ms"] = {
                "p50": percentile(lat, 50), "p95": percentile(lat, 95),
                "p99": percentile(lat, 99),
                "mean": sum(lat) / len(lat), "max": lat[-1],
            }
        else:
            d["latency_ms"] = None
        return d

    by_endpoint: dict[str, list[Sample]] = {}
    for s in samples:
        by_endpoint.setdefault(s.endpoint, []).append(s)

    return {
        "config": {
            "base_url": cfg.base_url, "users": cfg.users,
            "duration_s": cfg.duration_s, "ramp_s": cfg.ramp_s,
            "mix": cfg.mix, "rng_seed": cfg.rng_seed,
            "think_ms": cfg.think_ms,
        },
        "wall_time_s": wall_time_s,
        "hardware": {
            "platform": platform.platform(),
            "machine": platform.machine(),
            "python": platform.python_version(),
        },
        "overall": stats(samples),
        "endpoints": {name: stats(group)
                      for name, group in sorted(by_endpoint.items())},
    }


def stress_sweep(cfg: ScenarioConfig, user_steps: list[int]) -> dict:
    if user_steps != sorted(user_steps):
        raise ConfigError("user steps must be ascending")
    steps = []
    baseline_p95 = None
    knee = None
    for users in user_steps:
        step_cfg = ScenarioConfig(**{**cfg.__dict__, "users": users})
        try:
            report = run_load(step_cfg)
        except TargetUnreachable as e:
            steps.append({"users": users, "unreachable": str(e)})
            continue
        steps.append({"users": users, "report": report})
        overall = report["overall"]
        p95 = (overall["latency_ms"] or {}).get("p95")
        if baseline_p95 is None and p95 is not None:
            baseline_p95 = p95
        if knee is None and (
                overall["error_rate_pct"] > KNEE_ERROR_RATE_PCT
                or (baseline_p95 and p95 and p95 > KNEE_P95_FACTOR * baseline_p95
                    and users != user_steps[0])):
            knee = users
    return {"steps": steps, "knee_users": knee}


def report_csv_rows(report: dict) -> list[dict]:
    rows = []
    groups = {"overall": report["overall"], **report["endpoints"]}
    for name, st in groups.items():
        lat = st["latency_ms"] or {}
        rows.append({
            "endpoint": name,
            "count": st["request_count"],
            "errors": st["error_count"],
            "error_rate_pct": round(st["error_rate_pct"], 4),
            "rps": round(st["throughput_rps"], 4),
            "p50": lat.get("p50", ""),
            "p95": lat.get("p95", ""),
            "p99": lat.get("p99", ""),
            "mean": round(lat["mean"], 4) if lat else "",
            "max": lat.get("max", ""),
        })
    return rows


def write_report(report: dict, json_path: str | None,
                 csv_path: str | None = None):
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    if csv_path:
        import csv as csv_mod
        rows = report_csv_rows(report)
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv_mod.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)


class _ResourceMonitor(threading.Thread):
    """Samples CPU% and RSS of a local PID once a second."""

    def __init__(self, pid: int, interval_s: float = 1.0):
        super().__init__(daemon=True)
        self.pid = pid
        self.interval_s = interval_s
        self.samples: list[dict] = []
        self._stop = threading.Event()

    def run(self):
        import psutil
        try:
            proc = psutil.Process(self.pid)
        except psutil.NoSuchProcess:
            return
        while not self._stop.is_set():
            try:
                self.samples.append({
                    "cpu_pct": proc.cpu_percent(interval=None),
                    "rss_bytes": proc.memory_info().rss,
                })
            except psutil.NoSuchProcess:
                break
            self._stop.wait(self.interval_s)

    def stop(self):
        self._stop.set()
        self.join(timeout=5)

    def summary(self) -> dict:
        if not self.samples:
            return {"samples": 0}
        cpu = [s["cpu_pct"] for s in self.samples]
        rss = [s["rss_bytes"] for s in self.samples]
        return {"samples": len(self.samples),
                "cpu_pct_mean": sum(cpu) / len(cpu),
                "cpu_pct_max": max(cpu),
                "rss_bytes_max": max(rss)}
