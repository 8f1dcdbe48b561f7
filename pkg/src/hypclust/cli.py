"""Command line entry point: generate, analyze, theory, sweep, trial."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import clustering, graphgen, harness, theory
from .errors import (BuilderCapExceeded, InvalidParameters, OutOfDomain,
                     QuadratureFailure)
from .graph import Graph, read_edges_csv
from .hypgeom import ModelParams
from .sampler import default_omega, read_vertices_csv, sample_vertex_set

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DOMAIN = 3
EXIT_QUADRATURE = 4


def _print(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _model_args(p: argparse.ArgumentParser, need_n: bool = True) -> None:
    if need_n:
        p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--zeta", type=float, default=1.0)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--nu", type=float, default=1.0)


def cmd_generate(a) -> int:
    params = ModelParams(zeta=a.zeta, alpha=a.alpha, beta=a.beta, nu=a.nu, n=a.n)
    vs = sample_vertex_set(params, a.seed)
    if a.model == "disc":
        g = graphgen.build_disc_pruned(vs, delta=a.delta)
    else:
        edge_seed = a.seed if a.edge_seed is None else a.edge_seed
        g = graphgen.build_binomial(vs, edge_seed, force_quadratic=a.force_quadratic)
    paths = harness.write_graph_bundle(vs, g, a.out, {"delta": a.delta} if a.model == "disc" else None)
    _print({"n": g.n, "edges": g.edge_count, "radius": params.radius, "files": paths})
    return EXIT_OK


def cmd_analyze(a) -> int:
    r, theta, t = read_vertices_csv(a.vertices)
    n = len(r)
    radius = float(np.max(r + t)) if n else 0.0
    u, v = read_edges_csv(a.edges)
    g = Graph.from_pairs(n, u, v, types=t, radius=radius)
    omega = default_omega(n) if a.omega is None else a.omega
    st = clustering.cluster_stats(g, omega=omega, type_caps=a.type_cap or (), convention=a.convention)
    out = st.to_dict()
    out["omega"] = omega
    out["radius"] = radius
    _print(out)
    return EXIT_OK


def cmd_theory(a) -> int:
    cfg = theory.QuadConfig(rel_tol=a.rel_tol, outer_rel_tol=a.outer_rel_tol)
    out = {"inputs": {"zeta": a.zeta, "alpha": a.alpha, "beta": a.beta, "t": a.t}, "c_beta": theory.c_beta(a.beta)}
    if a.t:
        out["L_restricted"] = {
            f"{t:g}": theory.limit_L_restricted(t, a.beta, a.zeta, a.alpha, cfg).as_dict() for t in a.t
        }
    else:
        out["L_infinity"] = theory.limit_L_infinity(a.beta, a.zeta, a.alpha, cfg).as_dict()
    try:
        out["lambda_hat_order"] = theory.lambda_T_order(a.beta, a.zeta, a.alpha).as_dict()
    except OutOfDomain:
        out["lambda_hat_order"] = None
    _print(out)
    return EXIT_OK


def _load_config(path, overrides: dict) -> harness.ExperimentConfig:
    cfg = harness.ExperimentConfig.from_json(path)
    for k, v in overrides.items():
        if v is not None:
            setattr(cfg, k, v)
    return cfg.validate()


def cmd_sweep(a) -> int:
    cfg = _load_config(a.config, {"output_dir": a.out})
    n_values = [int(x) for chunk in a.n for x in str(chunk).split(",") if x]
    rep = harness.run_sweep(cfg, n_values)
    out = rep.as_dict()
    if cfg.output_dir:
        out["files"] = harness.emit_sweep(rep, cfg.output_dir)
    _print(out)
    return EXIT_OK


def cmd_trial(a) -> int:
    cfg = _load_config(a.config, {"output_dir": a.out})
    rep = harness.run_trial(cfg)
    out = rep.summary()
    if cfg.output_dir:
        out["files"] = harness.emit_report(rep, cfg.output_dir)
    _print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypclust", description="Clustering in hyperbolic random graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a graph and write vertices, edges and metadata")
    _model_args(g)
    g.add_argument("--model", choices=("disc", "binomial"), default="binomial")
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--edge-seed", type=int, default=None, help="binomial coins (default: --seed)")
    g.add_argument("--delta", type=float, default=0.0, help="disc threshold (1 + delta) R")
    g.add_argument("--force-quadratic", action="store_true", help="allow binomial builds above the size cap")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    an = sub.add_parser("analyze", help="clustering statistics of a stored graph")
    an.add_argument("--edges", required=True)
    an.add_argument("--vertices", required=True)
    an.add_argument("--type-cap", type=float, action="append", help="repeatable")
    an.add_argument("--omega", type=float, default=None)
    an.add_argument("--convention", choices=clustering.CONVENTIONS, default="exclude")
    an.set_defaults(func=cmd_analyze)

    th = sub.add_parser("theory", help="limit of the global or type-restricted clustering")
    _model_args(th, need_n=False)
    th.add_argument("--t", type=float, action="append", help="type cap; repeatable")
    th.add_argument("--rel-tol", type=float, default=1e-6)
    th.add_argument("--outer-rel-tol", type=float, default=1e-4)
    th.set_defaults(func=cmd_theory)

    sw = sub.add_parser("sweep", help="run a config over several N and fit scaling slopes")
    sw.add_argument("--config", required=True)
    sw.add_argument("--n", nargs="+", required=True, help="N values, space or comma separated")
    sw.add_argument("--out", default=None)
    sw.set_defaults(func=cmd_sweep)

    tr = sub.add_parser("trial", help="run a config over its seeds and compare with theory")
    tr.add_argument("--config", required=True)
    tr.add_argument("--out", default=None)
    tr.set_defaults(func=cmd_trial)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OutOfDomain as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except QuadratureFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except (InvalidParameters, BuilderCapExceeded, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
