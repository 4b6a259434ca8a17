"""Simulation study: scenario models, method sweeps over L, result files."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .baselines import METHODS, run_method
from .clustering import KMeansConfig, ari, misclustering_rate
from .model import (
    EDGE_MODES,
    CommunityAssignment,
    MultilayerModel,
    make_rng,
    rescale_to_average_degree,
    sample_layer,
)

B_MODES = ("same", "different")
THETA_MODES = ("same", "different", "alternating")
CSV_COLUMNS = ("scenario", "method", "L", "rep", "ari", "misclustering", "wall_time_ms")


@dataclass(frozen=True)
class Scenario:
    name: str = "scenario"
    B_mode: str = "same"
    theta_mode: str = "same"
    n: int = 150
    K: int = 3
    target_degree: float = 10.0
    L_grid: tuple[int, ...] = (2, 4, 8, 16, 32, 64)
    reps: int = 20
    seed: int = 0
    edge_mode: str = "clipped"
    restarts: int = 50

    def __post_init__(self):
        if self.B_mode not in B_MODES:
            raise ValueError(f"B_mode must be one of {B_MODES}, got {self.B_mode!r}")
        if self.theta_mode not in THETA_MODES:
            raise ValueError(f"theta_mode must be one of {THETA_MODES}, got {self.theta_mode!r}")
        if self.edge_mode not in EDGE_MODES:
            raise ValueError(f"edge_mode must be one of {EDGE_MODES}, got {self.edge_mode!r}")
        if self.n < self.K or self.K < 1:
            raise ValueError("need 1 <= K <= n")
        if self.reps < 1 or not self.L_grid or min(self.L_grid) < 1:
            raise ValueError("reps and every L must be positive")
        object.__setattr__(self, "L_grid", tuple(int(L) for L in self.L_grid))


@dataclass(frozen=True)
class RunRecord:
    scenario: str
    method: str
    L: int
    rep: int
    ari: float
    misclustering: float
    wall_time: float  # milliseconds
    error: str | None = None


def block_matrices(s: Scenario, L: int, rng: np.random.Generator) -> np.ndarray:
    if s.B_mode == "same":
        B = np.full((s.K, s.K), 0.4)
        np.fill_diagonal(B, 1.0)
        return np.repeat(B[None], L, axis=0)
    out = np.empty((L, s.K, s.K))
    for l in range(L):
        p, q = rng.uniform(size=2)
        out[l] = q
        np.fill_diagonal(out[l], p)
    return out


def degree_corrections(s: Scenario, L: int, rng: np.random.Generator) -> np.ndarray:
    if s.theta_mode == "same":
        return np.repeat((rng.exponential(1.0, s.n) + 0.2)[None], L, axis=0)
    if s.theta_mode == "different":
        return rng.exponential(1.0, (L, s.n)) + 0.2
    # 0-based indices: "both odd or both even" is the same parity test
    i = np.arange(s.n)[None, :]
    l = np.arange(L)[:, None]
    return np.where(i % 2 == l % 2, 0.8, 0.15)


def generate_scenario_model(s: Scenario, L: int, rep: int) -> MultilayerModel:
    """Scenario model for one (L, rep) cell, rescaled to the target degree."""
    rng = make_rng(s.seed, L, rep, 0)
    theta = degree_corrections(s, L, rng)
    B = block_matrices(s, L, rng)
    model = MultilayerModel(CommunityAssignment.balanced(s.n, s.K), theta, B, s.edge_mode)
    return rescale_to_average_degree(model, s.target_degree)


def _cell_seed(s: Scenario, L: int, rep: int) -> int:
    return int(np.random.SeedSequence([s.seed, L, rep, 1]).generate_state(1)[0])


def run_cell(s: Scenario, L: int, rep: int, methods: Sequence[str], noiseless: bool = False,
             timing: bool = True) -> list[RunRecord]:
    try:
        model = generate_scenario_model(s, L, rep)
    except ValueError as exc:
        return [RunRecord(s.name, m, L, rep, math.nan, math.nan, 0.0, str(exc)) for m in methods]
    Ps = model.expected_matrices()
    if noiseless:
        layers = Ps
    else:
        layers = [sample_layer(P, model.edge_mode, make_rng(s.seed, L, rep, 2, l))
                  for l, P in enumerate(Ps)]
    cfg = KMeansConfig(restarts=s.restarts, seed=_cell_seed(s, L, rep))
    out = []
    for m in methods:
        start = time.perf_counter()
        try:
            labels = run_method(m, layers, s.K, cfg).labels
        except (ValueError, np.linalg.LinAlgError) as exc:
            out.append(RunRecord(s.name, m, L, rep, math.nan, math.nan, 0.0, str(exc)))
            continue
        elapsed = (time.perf_counter() - start) * 1e3 if timing else 0.0
        out.append(RunRecord(s.name, m, L, rep, ari(labels, model.labels),
                             misclustering_rate(labels, model.labels), elapsed))
    return out


def thread_count() -> int:
    env = os.environ.get("DCMASE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(s: Scenario, methods: Sequence[str] = ("dcmase",), noiseless: bool = False,
              timing: bool = True, threads: int | None = None) -> list[RunRecord]:
    """Every (L, rep, method) cell of a scenario.

    Cells are independent and run on a thread pool; each cell's randomness is
    keyed by ``(seed, L, rep)`` so the records never depend on scheduling.
    Records come back ordered by L, rep, then method.
    """
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise KeyError(f"unknown methods {unknown}; choose from {sorted(METHODS)}")
    cells = [(L, r) for L in s.L_grid for r in range(s.reps)]
    threads = threads or thread_count()
    if threads == 1:
        results = [run_cell(s, L, r, methods, noiseless, timing) for L, r in cells]
    else:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda c: run_cell(s, *c, methods, noiseless, timing), cells))
    return [rec for cell in results for rec in cell]


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else repr(float(x))


def records_to_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([r.scenario, r.method, r.L, r.rep, _fmt(r.ari), _fmt(r.misclustering),
                    f"{r.wall_time:.3f}"])
    return buf.getvalue()


def summarize(records: Sequence[RunRecord], scenario: Scenario | None = None) -> dict:
    """Per-(method, L) means and standard errors of ARI and misclustering."""
    groups: dict[tuple[str, int], list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.method, r.L), []).append(r)
    rows = []
    for (method, L), recs in groups.items():
        entry = {"method": method, "L": L, "reps": len(recs),
                 "failed": sum(1 for r in recs if r.error is not None)}
        for key in ("ari", "misclustering"):
            vals = np.array([getattr(r, key) for r in recs if r.error is None])
            if vals.size:
                entry[f"{key}_mean"] = float(vals.mean())
                entry[f"{key}_se"] = float(vals.std(ddof=1) / np.sqrt(vals.size)) if vals.size > 1 else 0.0
            else:
                entry[f"{key}_mean"] = entry[f"{key}_se"] = None
        rows.append(entry)
    summary = {"results": rows}
    if scenario is not None:
        summary["scenario"] = asdict(scenario)
        summary["note"] = (f"{scenario.reps} replications per cell (desk-scale default); "
                           "raise reps to 100 for smoother curves.")
    return summary


def svg_chart(summary: dict, width: int = 480, height: int = 320) -> str:
    """Minimal SVG line chart of mean ARI against L, one polyline per method."""
    rows = [r for r in summary["results"] if r["ari_mean"] is not None]
    Ls = sorted({r["L"] for r in rows})
    methods = list(dict.fromkeys(r["method"] for r in rows))
    pad = 40
    lx = [math.log2(L) for L in Ls] or [0.0]
    x0, x1 = min(lx), max(lx) if max(lx) > min(lx) else min(lx) + 1

    def px(L):
        return pad + (math.log2(L) - x0) / (x1 - x0) * (width - 2 * pad)

    def py(v):
        return height - pad - (v + 0.1) / 1.1 * (height - 2 * pad)

    colors = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
             f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
             f'<text x="{width / 2}" y="{height - 8}" text-anchor="middle">L</text>',
             f'<text x="12" y="{height / 2}" transform="rotate(-90 12 {height / 2})" '
             f'text-anchor="middle">mean ARI</text>']
    for L in Ls:
        parts.append(f'<text x="{px(L):.1f}" y="{height - pad + 14}" text-anchor="middle" '
                     f'font-size="10">{L}</text>')
    for k, m in enumerate(methods):
        pts = sorted((r["L"], r["ari_mean"]) for r in rows if r["method"] == m)
        coords = " ".join(f"{px(L):.1f},{py(v):.1f}" for L, v in pts)
        c = colors[k % len(colors)]
        parts.append(f'<polyline fill="none" stroke="{c}" stroke-width="2" points="{coords}"/>')
        parts.append(f'<text x="{width - pad + 2}" y="{pad + 14 * k}" fill="{c}" '
                     f'font-size="10">{m}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_outputs(records: Sequence[RunRecord], out_dir, scenario: Scenario | None = None,
                  svg: bool = True) -> dict:
    """Write ``runs.csv``, ``summary.json`` and optionally ``ari.svg``."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {"csv": os.path.join(out_dir, "runs.csv"),
             "json": os.path.join(out_dir, "summary.json")}
    summary = summarize(records, scenario)
    with open(paths["csv"], "w", newline="") as fh:
        fh.write(records_to_csv(records))
    with open(paths["json"], "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if svg:
        paths["svg"] = os.path.join(out_dir, "ari.svg")
        with open(paths["svg"], "w") as fh:
            fh.write(svg_chart(summary))
    return paths


SCENARIO_KEYS = {f for f in Scenario.__dataclass_fields__}
CONFIG_KEYS = SCENARIO_KEYS | {"methods", "noiseless", "timing", "svg"}


@dataclass
class SimulationConfig:
    scenario: Scenario
    methods: tuple[str, ...] = ("dcmase", "mean_adj", "sos", "mase")
    noiseless: bool = False
    timing: bool = True
    svg: bool = True


def parse_config(data: dict) -> SimulationConfig:
    """Validate a JSON simulation config; errors name the offending key."""
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    for key in data:
        if key not in CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r}")
    kwargs = {k: data[k] for k in SCENARIO_KEYS if k in data}
    types = {"n": int, "K": int, "reps": int, "seed": int, "restarts": int,
             "target_degree": (int, float), "name": str, "B_mode": str,
             "theta_mode": str, "edge_mode": str}
    for k, t in types.items():
        if k in kwargs and (not isinstance(kwargs[k], t) or isinstance(kwargs[k], bool)):
            raise ValueError(f"config key {k!r} has invalid value {kwargs[k]!r}")
    if "L_grid" in kwargs:
        grid = kwargs["L_grid"]
        if not isinstance(grid, list) or not all(isinstance(v, int) and v > 0 for v in grid):
            raise ValueError("config key 'L_grid' must be a list of positive integers")
    try:
        scenario = Scenario(**kwargs)
    except ValueError as exc:
        raise ValueError(f"invalid scenario: {exc}") from None
    methods = data.get("methods", list(SimulationConfig.methods))
    if isinstance(methods, str):
        methods = [methods]
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"config key 'methods' has unknown method {m!r}")
    return SimulationConfig(scenario, tuple(methods), bool(data.get("noiseless", False)),
                            bool(data.get("timing", True)), bool(data.get("svg", True)))
