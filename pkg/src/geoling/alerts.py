"""Geofence alert controller: rule base, telemetry evaluation, model comparison.

The controller takes three inputs (battery level, distance to the arrival
point, time tolerance) and one output, ``AlertTrigger`` in ``[0, 1]``.  An
alert fires when the crisp output reaches the threshold (0.5 by default).
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .fcl import (
    CompiledController,
    Condition,
    FclProgram,
    Mode,
    Pairs,
    Rule,
    compile_program,
    infer,
    parse_fcl,
)

BATTERY = "Battery"
DISTANCE = "Distance"
TOLERANCE = "TimeTolerance"
TRIGGER = "AlertTrigger"
ALERT = "Alert"
NO_ALERT = "NoAlert"

EARTH_RADIUS_M = 6_371_000.0
DEFAULT_THRESHOLD = 0.5


class AlertError(ValueError):
    pass


@dataclass(frozen=True)
class RulePolicy:
    """Which labels the alert policy treats as low battery, far, and so on.

    The defaults encode: near the arrival, never alert; out of route, always
    alert; far away, alert unless the battery is low *and* the time tolerance
    is high (to save battery).
    """

    low_battery_terms: frozenset[str] = frozenset({"Minimum", "VeryLow", "Low"})
    high_tolerance_terms: frozenset[str] = frozenset({"Maximum"})
    far_terms: frozenset[str] = frozenset({"Far"})
    always_alert_terms: frozenset[str] = frozenset({"OutOfRoute"})
    near_terms: frozenset[str] = frozenset({"InTheCenter", "VeryCloseTo", "Near"})

    def check(self, battery_labels, distance_labels, tolerance_labels) -> None:
        groups = (self.far_terms, self.always_alert_terms, self.near_terms)
        for a, b in itertools.combinations(groups, 2):
            if a & b:
                raise AlertError(f"policy distance groups overlap on {sorted(a & b)}")
        covered = set().union(*groups)
        if covered != set(distance_labels):
            raise AlertError(
                f"policy distance terms {sorted(covered)} do not match "
                f"partition labels {sorted(distance_labels)}")
        for name, terms, labels in (("battery", self.low_battery_terms, battery_labels),
                                    ("tolerance", self.high_tolerance_terms, tolerance_labels)):
            if not terms <= set(labels):
                raise AlertError(f"{name} policy terms {sorted(terms - set(labels))} "
                                 f"are not partition labels")


def generate_rulebase(
    policy: RulePolicy,
    battery_labels: Sequence[str],
    distance_labels: Sequence[str],
    tolerance_labels: Sequence[str],
) -> list[Rule]:
    """One rule per (battery, distance, tolerance) combination.

    Rules are numbered from 1 with battery varying fastest, then distance,
    then tolerance; with the 7/5/3-label Alert1 variables this puts
    (Maximum, Far, Minimum) at rule 28 and (Maximum, Far, Medium) at rule 63.
    """
    policy.check(battery_labels, distance_labels, tolerance_labels)
    rules = []
    rule_id = 1
    for tol, dist, bat in itertools.product(tolerance_labels, distance_labels, battery_labels):
        if dist in policy.always_alert_terms:
            term = ALERT
        elif dist in policy.near_terms:
            term = NO_ALERT
        elif bat in policy.low_battery_terms and tol in policy.high_tolerance_terms:
            term = NO_ALERT
        else:
            term = ALERT
        ants = (Condition(BATTERY, bat), Condition(DISTANCE, dist), Condition(TOLERANCE, tol))
        rules.append(Rule(rule_id, ants, Condition(TRIGGER, term)))
        rule_id += 1
    return rules


def load_alert1() -> FclProgram:
    """The shipped Alert1 controller with its full 105-rule base."""
    text = resources.files("geoling.data").joinpath("alert1.fcl").read_text(encoding="utf-8")
    return parse_fcl(text)


def haversine(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in meters on a sphere of radius 6 371 km."""
    for lat, lon in ((lat1, lon1), (lat2, lon2)):
        if not -90 <= lat <= 90:
            raise AlertError(f"latitude {lat!r} outside [-90, 90]")
        if not -180 <= lon <= 180:
            raise AlertError(f"longitude {lon!r} outside [-180, 180]")
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = phi2 - phi1
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


@dataclass(frozen=True)
class TelemetrySample:
    timestamp: float
    battery_pct: float
    distance_m: float | None = None
    lat: float | None = None
    lon: float | None = None

    def __post_init__(self):
        has_coords = self.lat is not None and self.lon is not None
        if (self.distance_m is None) == (not has_coords):
            raise AlertError("a sample carries either distance_m or (lat, lon), not both")
        if self.distance_m is not None and self.distance_m < 0:
            raise AlertError(f"negative distance {self.distance_m!r}")
        if has_coords and not (-90 <= self.lat <= 90 and -180 <= self.lon <= 180):
            raise AlertError(f"invalid coordinates ({self.lat!r}, {self.lon!r})")
        if not 0 <= self.battery_pct <= 100:
            raise AlertError(f"battery {self.battery_pct!r} outside [0, 100]")


def read_telemetry(source: str | Path | TextIO) -> list[TelemetrySample]:
    """Read a telemetry CSV with either ``timestamp,lat,lon,battery`` or
    ``timestamp,distance_m,battery`` columns.  Timestamps must not decrease."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8", newline="") as fh:
            return read_telemetry(fh)
    reader = csv.DictReader(source)
    fields = [f.strip() for f in reader.fieldnames or []]
    if fields == ["timestamp", "lat", "lon", "battery"]:
        coords = True
    elif fields == ["timestamp", "distance_m", "battery"]:
        coords = False
    elif not fields:
        return []
    else:
        raise AlertError(f"unrecognised telemetry header {fields}")
    samples = []
    for lineno, row in enumerate(reader, 2):
        row = {k.strip(): v.strip() for k, v in row.items()}
        try:
            if coords:
                s = TelemetrySample(float(row["timestamp"]), float(row["battery"]),
                                    lat=float(row["lat"]), lon=float(row["lon"]))
            else:
                s = TelemetrySample(float(row["timestamp"]), float(row["battery"]),
                                    distance_m=float(row["distance_m"]))
        except (TypeError, ValueError) as exc:
            raise AlertError(f"line {lineno}: {exc}") from None
        if samples and s.timestamp < samples[-1].timestamp:
            raise AlertError(f"line {lineno}: timestamp {s.timestamp!r} goes backwards")
        samples.append(s)
    return samples


@dataclass(frozen=True)
class AlertEvent:
    timestamp: float
    trigger_value: float
    fired: bool
    rule_trace: tuple[tuple[int, float], ...]


def evaluate_alert(
    c: CompiledController,
    sample: TelemetrySample,
    tolerance_value: float,
    destination: tuple[float, float] | None = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> AlertEvent:
    if sample.distance_m is not None:
        distance = sample.distance_m
    else:
        if destination is None:
            raise AlertError("coordinate samples need a destination (lat, lon)")
        distance = haversine(sample.lat, sample.lon, *destination)
    lo, hi = c.inputs[DISTANCE].domain
    distance = min(max(distance, lo), hi)
    result = infer(c, {BATTERY: sample.battery_pct, DISTANCE: distance,
                       TOLERANCE: tolerance_value})
    value = result.outputs[TRIGGER]
    trace = sorted(result.rule_activations.items(), key=lambda kv: (-kv[1], kv[0]))[:3]
    return AlertEvent(sample.timestamp, value, value >= threshold, tuple(trace))


def trigger_value(c: CompiledController, battery: float, distance: float, tolerance: float) -> float:
    return infer(c, {BATTERY: battery, DISTANCE: distance, TOLERANCE: tolerance}).outputs[TRIGGER]


@dataclass(frozen=True)
class GridSpec:
    distance_step: float = 50.0
    battery_step: float = 10.0
    tolerance_step: float = 60.0

    def __post_init__(self):
        for name in ("distance_step", "battery_step", "tolerance_step"):
            if not getattr(self, name) > 0:
                raise AlertError(f"{name} must be > 0, got {getattr(self, name)!r}")


def grid_values(lo: float, hi: float, step: float) -> list[float]:
    """``lo, lo + step, ...`` up to ``hi`` (inclusive when it lands on the grid)."""
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [lo + k * step for k in range(n + 1)]


@dataclass(frozen=True)
class ComparisonPoint:
    battery: float
    distance: float
    tolerance: float
    uniform_trigger: float
    twofold_trigger: float
    threshold: float = DEFAULT_THRESHOLD

    @property
    def uniform_fired(self) -> bool:
        return self.uniform_trigger >= self.threshold

    @property
    def twofold_fired(self) -> bool:
        return self.twofold_trigger >= self.threshold

    @property
    def diverges(self) -> bool:
        return self.uniform_fired != self.twofold_fired


@dataclass(frozen=True)
class ComparisonReport:
    grid: GridSpec
    points: tuple[ComparisonPoint, ...]
    divergences: tuple[ComparisonPoint, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "divergences", tuple(p for p in self.points if p.diverges))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["battery", "distance", "tolerance", "uniform_trigger",
                    "twofold_trigger", "diverges"])
        for p in self.points:
            w.writerow([_fmt(p.battery), _fmt(p.distance), _fmt(p.tolerance),
                        f"{p.uniform_trigger:.6f}", f"{p.twofold_trigger:.6f}",
                        str(p.diverges).lower()])
        return buf.getvalue()

    def summary(self) -> str:
        g = self.grid
        lines = [
            f"grid: distance step {_fmt(g.distance_step)}, battery step "
            f"{_fmt(g.battery_step)}, tolerance step {_fmt(g.tolerance_step)}",
            f"points: {len(self.points)}",
            f"divergences: {len(self.divergences)}",
        ]
        for p in self.divergences:
            u = "Alert" if p.uniform_fired else "NoAlert"
            t = "Alert" if p.twofold_fired else "NoAlert"
            lines.append(
                f"  battery={_fmt(p.battery)} distance={_fmt(p.distance)} "
                f"tolerance={_fmt(p.tolerance)}: uniform {u} ({p.uniform_trigger:.3f}), "
                f"twofold {t} ({p.twofold_trigger:.3f})")
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:g}"


def compare_models(
    program: FclProgram,
    grid: GridSpec = GridSpec(),
    threshold: float = DEFAULT_THRESHOLD,
    cog_samples: int | None = None,
    workers: int | None = None,
) -> ComparisonReport:
    """Run the uniform-baseline and twofold controllers over a full grid.

    Points are ordered battery-major, then distance, then tolerance.  With
    ``workers`` set, points are evaluated in a thread pool; results are
    merged in grid order, so the report does not depend on scheduling.
    """
    for var in (BATTERY, DISTANCE, TOLERANCE):
        if not isinstance(program.fuzzify_blocks.get(var), Pairs):
            raise AlertError(f"input {var!r} must be declared with a pairs term set")
    kw = {} if cog_samples is None else {"cog_samples": cog_samples}
    uniform = compile_program(program, Mode.UNIFORM_BASELINE, **kw)
    twofold = compile_program(program, Mode.TWOFOLD, **kw)
    axes = [grid_values(*twofold.inputs[var].domain, step) for var, step in
            ((BATTERY, grid.battery_step), (DISTANCE, grid.distance_step),
             (TOLERANCE, grid.tolerance_step))]
    cells = list(itertools.product(*axes))

    def run(cell):
        b, d, t = cell
        return ComparisonPoint(b, d, t, trigger_value(uniform, b, d, t),
                               trigger_value(twofold, b, d, t), threshold)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(run, cells))
    else:
        points = [run(cell) for cell in cells]
    return ComparisonReport(grid, tuple(points))


def simulate(
    c: CompiledController,
    samples: Iterable[TelemetrySample],
    tolerance_value: float,
    destination: tuple[float, float] | None = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> list[AlertEvent]:
    return [evaluate_alert(c, s, tolerance_value, destination, threshold) for s in samples]
