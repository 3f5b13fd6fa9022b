"""Run reports: per-check records, JSON-lines and CSV output, and a text summary.

Report format ``photongauge.report/1`` (one JSON object per line):

* first line ``{"record": "header", "schema", "experiment", "version", "seed",
  "tier", "config"}``;
* one ``{"record": "check", ...}`` line per check with the keys of
  :class:`CheckRecord`;
* last line ``{"record": "summary", "n_checks", "n_failed", "passed",
  "duration_s"}``.

``duration_s`` is the only field that varies between identical runs.

A check passes iff ``abs_err <= tolerance`` (``tolerance_kind == "abs"``) or
``rel_err <= tolerance`` (``"rel"``), so every verdict can be recomputed from
the recorded numbers.
"""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

SCHEMA = "photongauge.report/1"

# Check families and their default tolerances (overridable per config).
DEFAULT_TOLERANCES = {
    "monopole_flux": 1e-10,
    "curl": 1e-6,
    "curl_gauge_independence": 2e-6,
    "convergence_order": 1.0,
    "canonical_commutators": 1e-8,
    "exact_commutators": 1e-12,
    "lab_position_commutator": 1e-5,
    "helicity_sign": 1e-5,
    "oam_algebra": 1e-6,
    "total_oam_anomaly": 1e-5,
    "constants_of_motion": 1e-6,
    "representation_identity": 1e-8,
    "spin_matrix": 1e-12,
    "spin_expectation": 1e-3,
    "quadrature_identity": 1e-10,
    "helicity_purity": 1e-12,
    "canonical_oam_eigenvalue": 1e-6,
    "intrinsic_oam_perpendicular": 0.02,
    "intrinsic_oam_parallel": 1e-4,
    "total_oam_paraxial": 0.02,
    "canonical_position": 1e-10,
    "barycenter": 0.01,
    "gauge_representation": 1e-10,
    "gauge_potential_shift": 1e-6,
    "gauge_shift_barycenter": 0.01,
    "gauge_covariance": 1e-8,
    "refusal": 0.5,
}


def _plain(x):
    """JSON-friendly copy of numbers and arrays (complex values with zero imaginary part become real)."""
    if x is None:
        return None
    a = np.asarray(x)
    if np.iscomplexobj(a):
        if np.any(a.imag != 0):
            return {"re": _plain(a.real), "im": _plain(a.imag)}
        a = a.real
    if a.ndim == 0:
        return float(a)
    return [float(v) for v in a.ravel()]


@dataclass
class CheckRecord:
    experiment: str
    check: str
    relation: str
    family: str
    computed: object
    reference: object
    abs_err: float
    rel_err: float | None
    tolerance: float
    tolerance_kind: str
    passed: bool
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        # computed/reference are stored in plain form by make_check
        return asdict(self)


def make_check(experiment: str, check: str, relation: str, family: str, computed, reference,
               tolerance: float, kind: str = "abs", **params) -> CheckRecord:
    """Compare ``computed`` with ``reference`` (Euclidean norm for vectors)."""
    if kind not in ("abs", "rel"):
        raise ValueError("tolerance kind must be 'abs' or 'rel'")
    comp = np.asarray(computed)
    ref = np.asarray(reference)
    abs_err = float(np.linalg.norm(np.real_if_close(comp) - ref))
    ref_mag = float(np.linalg.norm(ref))
    rel_err = abs_err / ref_mag if ref_mag > 0 else None
    err = abs_err if kind == "abs" else rel_err
    passed = err is not None and err <= tolerance
    return CheckRecord(experiment, check, relation, family, _plain(comp), _plain(ref), abs_err, rel_err,
                       float(tolerance), kind, bool(passed), params)


@dataclass
class RunReport:
    experiment: str
    records: list[CheckRecord]
    config: dict
    seed: int
    tier: str
    duration_s: float = 0.0
    version: str = __version__
    parts: list["RunReport"] = field(default_factory=list, repr=False)

    @property
    def n_failed(self) -> int:
        return sum(not r.passed for r in self.records)

    @property
    def passed(self) -> bool:
        return self.n_failed == 0

    def lines(self) -> list[dict]:
        header = {"record": "header", "schema": SCHEMA, "experiment": self.experiment,
                  "version": self.version, "seed": self.seed, "tier": self.tier, "config": self.config}
        checks = [{"record": "check", **r.to_dict()} for r in self.records]
        summary = {"record": "summary", "n_checks": len(self.records), "n_failed": self.n_failed,
                   "passed": self.passed, "duration_s": self.duration_s}
        return [header, *checks, summary]

    def write_jsonl(self, path) -> Path:
        path = Path(path)
        with path.open("w", encoding="utf-8") as fh:
            for line in self.lines():
                fh.write(json.dumps(line, sort_keys=True) + "\n")
        return path

    def write_csv(self, path) -> Path:
        path = Path(path)
        columns = ["experiment", "check", "relation", "family", "computed", "reference",
                   "abs_err", "rel_err", "tolerance", "tolerance_kind", "passed"]

        def cell(v):
            if isinstance(v, list):
                return " ".join(repr(x) for x in v)
            if isinstance(v, dict):
                return json.dumps(v, sort_keys=True)
            return "" if v is None else v

        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for r in self.records:
                d = r.to_dict()
                writer.writerow([cell(d[c]) for c in columns])
        return path

    def write(self, out_dir) -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        return (self.write_jsonl(out_dir / f"{self.experiment}.report.jsonl"),
                self.write_csv(out_dir / f"{self.experiment}.csv"))

    def summary_table(self) -> str:
        width = max([len(r.check) for r in self.records] + [5])
        rows = [f"{'check':<{width}}  {'error':>10}  {'tol':>8}  result"]
        for r in self.records:
            err = r.abs_err if r.tolerance_kind == "abs" else r.rel_err
            err_s = "n/a" if err is None else f"{err:.3e}"
            rows.append(f"{r.check:<{width}}  {err_s:>10}  {r.tolerance:>8.1e}  {'PASS' if r.passed else 'FAIL'}")
        verdict = "PASS" if self.passed else f"FAIL ({self.n_failed} of {len(self.records)})"
        rows.append(f"{self.experiment}: {len(self.records)} checks, {verdict}, {self.duration_s:.1f} s")
        return "\n".join(rows)
