"""Seeded experiments: sample, build, measure, and compare with the limits."""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence

import numpy as np

from . import clustering, graphgen, rng, theory
from .errors import InsufficientTail, InvalidParameters, OutOfDomain, QuadratureFailure
from .graph import write_edges_csv, write_metadata
from .hypgeom import ModelParams
from .sampler import default_omega, max_type_bound, sample_vertex_set, write_vertices_csv

REL_BAND = 0.15
TRIAL_COLUMNS = ("seed", "N", "T", "Lambda", "C2", "C1", "T_hat", "Lambda_hat", "T_tilde", "Lambda_tilde")


@dataclass
class ExperimentConfig:
    zeta: float
    alpha: float
    beta: float
    nu: float
    n: int
    model: str = "binomial"
    seeds: list = field(default_factory=lambda: [1])
    type_caps: list = field(default_factory=list)
    omega_override: Optional[float] = None
    output_dir: Optional[str] = None
    emit_edges: bool = False
    force_quadratic: bool = False
    delta: float = 0.0
    convention: str = "exclude"
    theory: bool = True
    tail_fraction: float = 0.05

    def __post_init__(self):
        self.seeds = [int(s) for s in self.seeds]
        self.type_caps = [float(t) for t in self.type_caps]
        self.n = int(self.n)

    def validate(self) -> "ExperimentConfig":
        if not self.seeds:
            raise InvalidParameters("seeds must be non-empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise InvalidParameters("seeds must be distinct")
        if any(t < 0 for t in self.type_caps):
            raise InvalidParameters("type caps must be non-negative")
        if self.model not in ("disc", "binomial"):
            raise InvalidParameters(f"model must be disc or binomial, got {self.model!r}")
        if self.convention not in clustering.CONVENTIONS:
            raise InvalidParameters(f"convention must be one of {clustering.CONVENTIONS}")
        if self.omega_override is not None and not self.omega_override > 0:
            raise InvalidParameters("omega_override must be positive")
        if not 0 < self.tail_fraction < 1:
            raise InvalidParameters("tail_fraction must lie in (0, 1)")
        self.params  # checks the model parameters
        return self

    @property
    def params(self) -> ModelParams:
        return ModelParams(zeta=self.zeta, alpha=self.alpha, beta=self.beta, nu=self.nu, n=self.n)

    @property
    def omega(self) -> float:
        return default_omega(self.n) if self.omega_override is None else self.omega_override

    def with_n(self, n: int) -> "ExperimentConfig":
        d = self.to_dict()
        d["n"] = int(n)
        return ExperimentConfig(**d)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise InvalidParameters(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**d).validate()
        except TypeError as exc:
            raise InvalidParameters(str(exc)) from exc

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidParameters(f"cannot read config {path}: {exc}") from exc
        if not isinstance(d, dict):
            raise InvalidParameters("config must be a JSON object")
        return cls.from_dict(d)


def mean_stderr(values) -> dict:
    """Mean and standard error over the defined (non-None) values."""
    v = np.array([x for x in values if x is not None], dtype=float)
    out = {"count": int(v.size), "mean": None, "stderr": None}
    if v.size:
        out["mean"] = float(v.mean())
    if v.size > 1:
        out["stderr"] = float(v.std(ddof=1) / math.sqrt(v.size))
    return out


def compare(mean: float, stderr: Optional[float], target: float, rel_band: float = REL_BAND) -> dict:
    """|mean - target| <= max(3 stderr, rel_band |target|)."""
    tol = max(3.0 * (stderr or 0.0), rel_band * abs(target))
    dev = abs(mean - target)
    return {"mc_mean": mean, "mc_stderr": stderr, "theory": target, "deviation": dev,
            "tolerance": tol, "pass": bool(dev <= tol)}


@dataclass(frozen=True)
class TailFit:
    exponent: float
    stderr: float
    k: int
    threshold: float

    def as_dict(self) -> dict:
        return asdict(self)


def _hill(sorted_desc: np.ndarray, k: int) -> float:
    logs = np.log(sorted_desc[:k]) - math.log(sorted_desc[k])
    return float(logs.mean())


def fit_tail_exponent(degrees, tail_fraction: float = 0.05, n_boot: int = 200,
                      seed: int = 0, min_tail: int = 100) -> TailFit:
    """Hill estimate of the density exponent tau in P(D = d) ~ d^-tau.

    The k = tail_fraction * n largest values enter; the (k+1)-th largest is
    the threshold.  The standard error comes from a bootstrap over the
    whole sample.
    """
    x = np.sort(np.asarray(degrees, dtype=float))[::-1]
    k = int(tail_fraction * len(x))
    if k < 1 or k >= len(x) or x[k] <= 0:
        raise InsufficientTail("not enough positive values for the requested tail fraction")
    if int(np.sum(x > x[k])) < min_tail:
        raise InsufficientTail(f"fewer than {min_tail} values above the tail threshold")
    gamma = _hill(x, k)
    if gamma <= 0:
        raise InsufficientTail("tail is degenerate")
    gen = np.random.default_rng([int(seed) % (1 << 63), rng.TAG_BOOTSTRAP])
    boots = []
    for _ in range(n_boot):
        b = np.sort(gen.choice(x, size=len(x), replace=True))[::-1]
        if b[k] > 0:
            g = _hill(b, k)
            if g > 0:
                boots.append(1.0 + 1.0 / g)
    se = float(np.std(boots, ddof=1)) if len(boots) > 1 else float("nan")
    return TailFit(1.0 + 1.0 / gamma, se, k, float(x[k]))


@dataclass
class TrialReport:
    config: ExperimentConfig
    seeds: list
    stats: list            # ClusterStats per seed
    max_types: list
    aggregates: dict
    theory: dict
    comparisons: dict
    tail_fit: Optional[dict]
    max_type: dict

    def rows(self) -> list[list]:
        out = []
        for s, st in zip(self.seeds, self.stats):
            row = [s, st.n, st.triangles, st.paths2, st.global_clustering, st.local_clustering_mean,
                   st.t_hat, st.lambda_hat, st.t_tilde, st.lambda_tilde]
            row += [st.restricted[t] for t in self.config.type_caps]
            out.append(row)
        return out

    def header(self) -> list[str]:
        return list(TRIAL_COLUMNS) + [f"C2hat_{t:g}" for t in self.config.type_caps]

    def summary(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "radius": self.config.params.radius,
            "omega": self.config.omega,
            "aggregates": self.aggregates,
            "theory": self.theory,
            "comparisons": self.comparisons,
            "tail_fit": self.tail_fit,
            "max_type": self.max_type,
        }


def _theory_entry(fn, *args) -> dict:
    try:
        lv = fn(*args)
    except OutOfDomain as exc:
        return {"status": "out-of-domain", "reason": str(exc)}
    except QuadratureFailure as exc:
        return {"status": "failed", "reason": str(exc)}
    return {"status": "ok", "value": lv.value, "err_estimate": lv.err_estimate}


def theory_predictions(cfg: ExperimentConfig) -> dict:
    p = cfg.params
    out = {"L_infinity": None, "L_restricted": {}}
    if not p.beta > 1:
        out["L_infinity"] = {"status": "out-of-domain", "reason": "beta <= 1: clustering vanishes"}
        for t in cfg.type_caps:
            out["L_restricted"][f"{t:g}"] = dict(out["L_infinity"])
        return out
    out["L_infinity"] = _theory_entry(theory.limit_L_infinity, p.beta, p.zeta, p.alpha)
    for t in cfg.type_caps:
        if t <= 0:
            out["L_restricted"][f"{t:g}"] = {"status": "out-of-domain", "reason": "t must be positive"}
        else:
            out["L_restricted"][f"{t:g}"] = _theory_entry(theory.limit_L_restricted, t, p.beta, p.zeta, p.alpha)
    return out


def build_graph(cfg: ExperimentConfig, seed: int, backend: str | None = None):
    vs = sample_vertex_set(cfg.params, seed)
    if cfg.model == "disc":
        g = graphgen.build_disc_pruned(vs, delta=cfg.delta, backend=backend)
    else:
        g = graphgen.build_binomial(vs, seed, force_quadratic=cfg.force_quadratic, backend=backend)
    return vs, g


def run_trial(cfg: ExperimentConfig, backend: str | None = None, with_tail: bool = True) -> TrialReport:
    cfg.validate()
    p = cfg.params
    bound = max_type_bound(p, cfg.omega)
    stats, max_types, degrees = [], [], []
    for seed in cfg.seeds:
        vs, g = build_graph(cfg, seed, backend)
        stats.append(clustering.cluster_stats(g, omega=cfg.omega, type_caps=cfg.type_caps,
                                              convention=cfg.convention, backend=backend))
        max_types.append(float(vs.types.max()))
        degrees.append(g.degrees)
        if cfg.emit_edges and cfg.output_dir:
            os.makedirs(cfg.output_dir, exist_ok=True)
            write_edges_csv(g, os.path.join(cfg.output_dir, f"edges_seed{seed}.csv"))
            write_vertices_csv(vs, os.path.join(cfg.output_dir, f"vertices_seed{seed}.csv"))

    agg = {
        "C2": mean_stderr(s.global_clustering for s in stats),
        "C1": mean_stderr(s.local_clustering_mean for s in stats),
        "restricted": {f"{t:g}": mean_stderr(s.restricted[t] for s in stats) for t in cfg.type_caps},
    }
    th = theory_predictions(cfg) if cfg.theory else {"L_infinity": None, "L_restricted": {}}
    comps = {}
    li = th.get("L_infinity")
    if li and li.get("status") == "ok" and agg["C2"]["mean"] is not None:
        comps["C2_vs_L_infinity"] = compare(agg["C2"]["mean"], agg["C2"]["stderr"], li["value"])
    for key, entry in th.get("L_restricted", {}).items():
        a = agg["restricted"][key]
        if entry.get("status") == "ok" and a["mean"] is not None:
            comps[f"C2hat_{key}_vs_L"] = compare(a["mean"], a["stderr"], entry["value"])

    tail = None
    if with_tail:
        try:
            tail = fit_tail_exponent(np.concatenate(degrees), cfg.tail_fraction, seed=cfg.seeds[0]).as_dict()
        except InsufficientTail as exc:
            tail = {"status": "insufficient-tail", "reason": str(exc)}
        tail["target"] = theory.degree_tail_exponent(p.zeta, p.alpha)

    exceed = sum(m > bound for m in max_types)
    max_type = {"bound": bound, "exceed_count": int(exceed), "exceed_fraction": exceed / len(max_types)}
    return TrialReport(cfg, list(cfg.seeds), stats, max_types, agg, th, comps, tail, max_type)


def _fmt(v):
    return "" if v is None else v


def emit_report(report: TrialReport, output_dir) -> dict:
    """Write trials.csv and summary.json; returns the file paths."""
    try:
        os.makedirs(output_dir, exist_ok=True)
        trials = os.path.join(output_dir, "trials.csv")
        with open(trials, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(report.header())
            for row in report.rows():
                w.writerow([_fmt(v) for v in row])
        summary = os.path.join(output_dir, "summary.json")
        with open(summary, "w") as fh:
            json.dump(report.summary(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {output_dir}: {exc}") from exc
    return {"trials": trials, "summary": summary}


def read_trials_csv(path) -> tuple[list[str], list[dict]]:
    """Rows of a trials.csv with numbers parsed back (empty cells become None)."""
    with open(path, newline="") as fh:
        r = csv.DictReader(fh)
        rows = []
        for row in r:
            rows.append({k: (None if v == "" else float(v)) for k, v in row.items()})
        return list(r.fieldnames), rows


def log_log_slope(x, y) -> Optional[float]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = (x > 0) & (y > 0)
    if ok.sum() < 2:
        return None
    return float(np.polyfit(np.log(x[ok]), np.log(y[ok]), 1)[0])


@dataclass
class SweepReport:
    base: ExperimentConfig
    n_values: list
    per_n: list          # dict per N
    slopes: dict
    predicted: dict

    def as_dict(self) -> dict:
        return {"config": self.base.to_dict(), "n_values": self.n_values, "per_n": self.per_n,
                "slopes": self.slopes, "predicted": self.predicted}


SWEEP_COLUMNS = ("N", "R", "C2_mean", "C2_stderr", "Lambda_hat_mean", "T_hat_mean",
                 "Lambda_hat_over_N", "T_hat_over_N", "C2_times_R")


def run_sweep(base: ExperimentConfig, n_values: Sequence[int], backend: str | None = None) -> SweepReport:
    n_values = sorted(int(n) for n in n_values)
    if len(set(n_values)) < 3:
        raise InvalidParameters("a sweep needs at least three distinct N values")
    base.validate()
    per_n = []
    for n in n_values:
        cfg = base.with_n(n)
        cfg.theory = False
        rep = run_trial(cfg, backend=backend, with_tail=False)
        p = cfg.params
        lam = float(np.mean([s.lambda_hat for s in rep.stats]))
        tri = float(np.mean([s.t_hat for s in rep.stats]))
        c2 = rep.aggregates["C2"]
        per_n.append({
            "N": n, "R": p.radius,
            "C2_mean": c2["mean"], "C2_stderr": c2["stderr"],
            "Lambda_hat_mean": lam, "T_hat_mean": tri,
            "Lambda_hat_over_N": lam / n, "T_hat_over_N": tri / n,
            "C2_times_R": None if c2["mean"] is None else c2["mean"] * p.radius,
            "C2_per_seed": [s.global_clustering for s in rep.stats],
        })
    ns = [r["N"] for r in per_n]
    slopes = {
        "Lambda_hat": log_log_slope(ns, [r["Lambda_hat_mean"] for r in per_n]),
        "T_hat": log_log_slope(ns, [r["T_hat_mean"] for r in per_n]),
    }
    try:
        order = theory.lambda_T_order(base.beta, base.zeta, base.alpha).as_dict()
    except OutOfDomain as exc:
        order = {"status": "out-of-domain", "reason": str(exc)}
    return SweepReport(base, n_values, per_n, slopes, {"lambda_hat_order": order})


def emit_sweep(report: SweepReport, output_dir) -> dict:
    os.makedirs(output_dir, exist_ok=True)
    table = os.path.join(output_dir, "sweep.csv")
    with open(table, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_COLUMNS)
        for r in report.per_n:
            w.writerow([_fmt(r[c]) for c in SWEEP_COLUMNS])
    summary = os.path.join(output_dir, "sweep.json")
    with open(summary, "w") as fh:
        json.dump(report.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"sweep": table, "summary": summary}


def write_graph_bundle(vs, g, out_dir, extra: dict | None = None) -> dict:
    """vertices.csv, edges.csv and graph.json for one generated graph."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {k: os.path.join(out_dir, f) for k, f in
             (("vertices", "vertices.csv"), ("edges", "edges.csv"), ("metadata", "graph.json"))}
    write_vertices_csv(vs, paths["vertices"])
    write_edges_csv(g, paths["edges"])
    write_metadata(g, paths["metadata"], extra)
    return paths
