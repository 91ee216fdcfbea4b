"""Time sweeps: CSV rows of mixedness and entropies, plus a gnuplot script."""

from __future__ import annotations

import io
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from .config import ScenarioConfig
from .pipeline import Pipeline, Sample, alpha_label, sample_times

NUMBER_FORMAT = "%.12g"


def columns(alphas) -> list[str]:
    cols = ["t", "b1", "bplus", "bminus", "purity_C", "purity_BC", "xi_C", "xi1", "xi2", "S_von_C", "S_von_BC"]
    cols += [f"S_alpha_C_{alpha_label(a)}" for a in alphas]
    cols += [f"S_alpha_BC_{alpha_label(a)}" for a in alphas]
    cols.append("agree_BC_A")
    return cols


def row_values(s: Sample, alphas) -> list[float]:
    vals = [s.t, *s.b, s.purity_c, s.purity_bc, s.spec_c.xi, s.spec_bc.xi1, s.spec_bc.xi2]
    vals += [s.report_c.s_von, s.report_bc.s_von]
    vals += [s.report_c.s_renyi[float(a)] for a in alphas]
    vals += [s.report_bc.s_renyi[float(a)] for a in alphas]
    vals.append(s.agreement)
    return vals


@dataclass
class SweepResult:
    header: list[str]
    rows: list[list[float]] = field(default_factory=list)
    skipped: list[tuple[float, str]] = field(default_factory=list)

    def column(self, name: str) -> list[float]:
        j = self.header.index(name)
        return [r[j] for r in self.rows]

    def write_csv(self, out: TextIO) -> None:
        out.write(",".join(self.header) + "\n")
        for r in self.rows:
            out.write(",".join(NUMBER_FORMAT % v for v in r) + "\n")

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def worker_count() -> int:
    env = os.environ.get("OSC3_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_sweep(config: ScenarioConfig, threads: int | None = None) -> SweepResult:
    """Evaluate every sample time; rows stay in time order whatever the thread count.

    A sample whose reduced state is invalid is dropped with a diagnostic on
    stderr and the sweep carries on.
    """
    pipe = Pipeline(config.schedule, config.t_end)
    alphas = config.alphas
    times = sample_times(config.t_start, config.t_end, config.samples)

    def one(t):
        try:
            return row_values(pipe.sample(t, alphas), alphas), None
        except (ArithmeticError, ValueError) as exc:
            return None, f"{type(exc).__name__}: {exc}"

    n = threads or worker_count()
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(one, times))
    else:
        results = [one(t) for t in times]
    out = SweepResult(columns(alphas))
    for t, (row, err) in zip(times, results):
        if row is None:
            print(f"osc3: skipped t = {t:.12g}: {err}", file=sys.stderr)
            out.skipped.append((float(t), err))
        else:
            out.rows.append(row)
    return out


def plot_script(csv_path: str | Path, title: str = "") -> str:
    """Gnuplot script: purities, S_von of both reductions, then each S_von alone."""
    csv_path = str(csv_path).replace('"', '\\"')
    title = title.replace('"', "'")
    return f"""# gnuplot script; run with: gnuplot -p <this file>
set datafile separator ","
set key autotitle columnhead
set xlabel "t"
set multiplot layout 2,2 title "{title}"
set title "(a) mixedness tr rho^2"
plot "{csv_path}" using "t":"purity_C" with lines lc rgb "red" title "C", \\
     "" using "t":"purity_BC" with lines lc rgb "blue" title "BC"
set title "(b) von Neumann entropy"
plot "{csv_path}" using "t":"S_von_C" with lines lc rgb "red" title "C", \\
     "" using "t":"S_von_BC" with lines lc rgb "blue" title "BC"
set title "(c) S_von, C"
plot "{csv_path}" using "t":"S_von_C" with lines lc rgb "red" notitle
set title "(d) S_von, BC"
plot "{csv_path}" using "t":"S_von_BC" with lines lc rgb "blue" notitle
unset multiplot
"""
