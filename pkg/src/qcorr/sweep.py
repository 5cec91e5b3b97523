"""Parameter sweeps over the worked state families and CSV output."""

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .classical import (
    POVMSettings,
    ProjectiveSettings,
    classical_correlation_povm,
    classical_correlation_projective,
)
from .entropy import mutual_information
from .errors import QCorrError
from .separable import SeparableSettings, classical_correlation_relent, relative_entropy_of_entanglement
from .states import FAMILIES, BipartiteState, load_state_json

MEASURES = ("I", "ERE", "Cp", "C", "CRE")
COLUMNS = {"I": "I", "ERE": "E_RE", "Cp": "C_p", "C": "C", "CRE": "C_RE"}
OPTIMIZED = ("ERE", "Cp", "C", "CRE")
FAMILY_NAMES = tuple(FAMILIES) + ("custom",)

CSV_HEADER = ["family", "p"] + [COLUMNS[m] for m in MEASURES] + [
    f"{COLUMNS[m]}_converged" for m in OPTIMIZED
]


def parse_measures(text) -> tuple:
    if isinstance(text, str):
        items = [t.strip() for t in text.split(",") if t.strip()]
    else:
        items = list(text)
    aliases = {k.lower(): k for k in MEASURES}
    aliases.update({v.lower(): k for k, v in COLUMNS.items()})
    out = []
    for item in items:
        key = aliases.get(item.lower())
        if key is None:
            raise QCorrError(f"unknown measure {item!r}; choose from {', '.join(MEASURES)}")
        if key not in out:
            out.append(key)
    if not out:
        raise QCorrError("at least one measure is required")
    return tuple(m for m in MEASURES if m in out)


@dataclass
class SweepConfig:
    family: str = "bell-mixture"
    p_min: float = 0.5
    p_max: float = 1.0
    steps: int = 11
    measures: Sequence[str] = ("I", "ERE", "Cp")
    seed: int = 0
    out_path: Optional[str] = None
    plot_path: Optional[str] = None
    state_path: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if self.family not in FAMILY_NAMES:
            raise QCorrError(f"unknown family {self.family!r}; choose from {', '.join(FAMILY_NAMES)}")
        if not (0.0 <= self.p_min <= self.p_max <= 1.0):
            raise QCorrError(f"need 0 <= p-min <= p-max <= 1, got {self.p_min}, {self.p_max}")
        if self.steps < 1:
            raise QCorrError("steps must be at least 1")
        self.measures = parse_measures(self.measures)
        if self.family == "custom" and not self.state_path:
            raise QCorrError("the custom family needs --state pointing at a JSON state")

    def grid(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.p_min])
        return np.linspace(self.p_min, self.p_max, self.steps)


@dataclass
class CorrelationReport:
    family: str
    p: Optional[float]
    values: Dict[str, float] = field(default_factory=dict)
    converged: Dict[str, bool] = field(default_factory=dict)
    seconds: Dict[str, float] = field(default_factory=dict)
    extras: Dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "values": {COLUMNS[k]: v for k, v in self.values.items()},
            "converged": {COLUMNS[k]: v for k, v in self.converged.items()},
            "seconds": {COLUMNS[k]: v for k, v in self.seconds.items()},
            "extras": dict(self.extras),
        }


def custom_family_state(base: BipartiteState, p: float) -> BipartiteState:
    """p * base + (1 - p) * I/d: the supplied state diluted with white noise."""
    d = base.matrix.shape[0]
    return BipartiteState(p * base.matrix + (1 - p) * np.eye(d) / d, base.dim_a, base.dim_b)


def family_state(family: str, p: float, base: BipartiteState = None) -> BipartiteState:
    if family == "custom":
        return custom_family_state(base, p)
    return FAMILIES[family](p)


def compute_report(
    state: BipartiteState,
    measures: Sequence[str] = MEASURES,
    seed: int = 0,
    family: str = "custom",
    p: Optional[float] = None,
    both_sides: bool = False,
) -> CorrelationReport:
    """Evaluate the requested measures; C and C_p measure subsystem B.

    ``both_sides`` adds the values measured on A to ``extras`` as C_p_A / C_A.
    """
    measures = parse_measures(measures)
    rep = CorrelationReport(family, p)
    sep_opts = SeparableSettings(seed=seed)
    povm_opts = POVMSettings(seed=seed)

    def timed(key, fn):
        t0 = time.perf_counter()
        out = fn()
        rep.seconds[key] = time.perf_counter() - t0
        return out

    if "I" in measures:
        rep.values["I"] = timed("I", lambda: mutual_information(state))
    if "ERE" in measures or "CRE" in measures:
        approx = timed("ERE", lambda: relative_entropy_of_entanglement(state, sep_opts))
        if "ERE" in measures:
            rep.values["ERE"] = approx.rel_entropy
            rep.converged["ERE"] = approx.converged
        else:
            rep.seconds.pop("ERE")
        if "CRE" in measures:
            c_re, _ = timed("CRE", lambda: classical_correlation_relent(state, approximation=approx))
            rep.values["CRE"] = c_re
            rep.converged["CRE"] = approx.converged
    if "Cp" in measures:
        est = timed("Cp", lambda: classical_correlation_projective(state, "B", ProjectiveSettings()))
        rep.values["Cp"] = est.value
        rep.converged["Cp"] = est.converged
        if both_sides:
            rep.extras["C_p_A"] = classical_correlation_projective(state, "A").value
    if "C" in measures:
        est = timed("C", lambda: classical_correlation_povm(state, "B", opts=povm_opts))
        rep.values["C"] = est.value
        rep.converged["C"] = est.converged
        if both_sides:
            rep.extras["C_A"] = classical_correlation_povm(state, "A", opts=povm_opts).value
    return rep


def _sweep_point(args):
    family, p, measures, seed, base = args
    return compute_report(family_state(family, p, base), measures, seed, family, float(p))


def run_sweep(config: SweepConfig) -> List[CorrelationReport]:
    """Compute every grid point, write the CSV (and figure) if paths are set.

    Rows come back in p order whatever the worker count.
    """
    base = load_state_json(config.state_path) if config.family == "custom" else None
    jobs = [(config.family, p, config.measures, config.seed, base) for p in config.grid()]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            reports = list(pool.map(_sweep_point, jobs))
    else:
        reports = [_sweep_point(j) for j in jobs]

    if config.out_path:
        write_csv(reports, config.out_path)
    if config.plot_path:
        from .plotting import plot_sweep

        plot_sweep(reports, config.plot_path, title=config.family)
    return reports


def format_number(x: float) -> str:
    """Nine significant digits, trailing zeros kept; negative round-off clipped to 0."""
    if x is None:
        return ""
    if math.isinf(x):
        return "inf"
    x = max(0.0, float(x)) if x > -1e-9 else float(x)
    return f"{x:#.9g}"


def csv_rows(reports: Sequence[CorrelationReport]) -> List[List[str]]:
    rows = []
    for r in reports:
        row = [r.family, format_number(r.p) if r.p is not None else ""]
        row += [format_number(r.values[m]) if m in r.values else "" for m in MEASURES]
        row += [("1" if r.converged[m] else "0") if m in r.converged else "" for m in OPTIMIZED]
        rows.append(row)
    return rows


def csv_text(reports: Sequence[CorrelationReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(csv_rows(reports))
    return buf.getvalue()


def write_csv(reports: Sequence[CorrelationReport], path) -> None:
    path = Path(path)
    try:
        path.write_text(csv_text(reports), newline="")
    except OSError as exc:
        raise QCorrError(f"cannot write {path}: {exc}") from exc
