"""Acceptance suite: Monte Carlo against the limit formulas and oracle equivalences.

Each test prints one verdict line; the full list is repeated in the pytest
terminal summary.  The Monte Carlo criteria take several minutes in total.
"""

import itertools
import math
import warnings

import networkx as nx
import numpy as np
import pytest

from acceptance_log import record
from hypclust import clustering, graphgen, harness, theory
from hypclust.graph import Graph
from hypclust.hypgeom import ModelParams
from hypclust.sampler import sample_vertex_set

pytestmark = pytest.mark.slow

REL = 0.15
QUAD = theory.QuadConfig(rel_tol=1e-6, outer_rel_tol=1e-4)
SPLIT_CHECKS = []


def _trial(**kw):
    cfg = harness.ExperimentConfig(**kw)
    rep = harness.run_trial(cfg, with_tail=False)
    for st in rep.stats:
        SPLIT_CHECKS.append((cfg.zeta / cfg.alpha, st))
    return rep


@pytest.fixture(scope="module")
def thm_sub_one():
    return _trial(zeta=1.0, alpha=1.5, beta=2.0, nu=1.0, n=30_000, seeds=list(range(1, 21)), type_caps=[2.0])


@pytest.fixture(scope="module")
def thm_super_one():
    return _trial(zeta=1.5, alpha=1.0, beta=2.0, nu=1.0, n=30_000, seeds=list(range(1, 21)), type_caps=[2.0])


def test_1_global_clustering_limit(thm_sub_one):
    target = theory.limit_L_infinity(2.0, 1.0, 1.5, theory.QuadConfig(rel_tol=1e-4))
    agg = thm_sub_one.aggregates["C2"]
    c = harness.compare(agg["mean"], agg["stderr"], target.value, REL)
    record(1, c["pass"], f"mean C2 {agg['mean']:.4f} +- {agg['stderr']:.4f} vs L_inf {target.value:.4f} "
                         f"(tol {c['tolerance']:.4f}, 20 seeds, N=30000)")
    assert c["pass"]


def test_2_restricted_clustering_limit(thm_sub_one, thm_super_one):
    parts, ok = [], True
    for (zeta, alpha), rep in (((1.0, 1.5), thm_sub_one), ((1.5, 1.0), thm_super_one)):
        target = theory.limit_L_restricted(2.0, 2.0, zeta, alpha, QUAD).value
        agg = rep.aggregates["restricted"]["2"]
        c = harness.compare(agg["mean"], agg["stderr"], target, REL)
        ok &= c["pass"]
        parts.append(f"(zeta,alpha)=({zeta:g},{alpha:g}): {agg['mean']:.4f} +- {agg['stderr']:.4f} vs {target:.4f}")
    record(2, ok, "C2hat(2) " + "; ".join(parts))
    assert ok


def test_3_clustering_collapse_at_ratio_one():
    n_values = [5000, 20_000, 80_000]
    seeds = [1, 2, 3, 4, 5]
    c2 = np.zeros((len(seeds), len(n_values)))
    radius = []
    for k, n in enumerate(n_values):
        rep = _trial(zeta=1.0, alpha=1.0, beta=1.5, nu=20.0, n=n, seeds=seeds, force_quadratic=True, theory=False)
        c2[:, k] = [s.global_clustering for s in rep.stats]
        radius.append(rep.config.params.radius)
    decreasing = int(np.sum(np.all(np.diff(c2, axis=1) < 0, axis=1)))
    scaled = c2.mean(axis=0) * np.array(radius)
    band = float(scaled.max() / scaled.min())
    ok = decreasing >= 4 and band <= 1.67
    record(3, ok, f"C2*R = {np.round(scaled, 3).tolist()} (band {band:.3f} <= 1.67); "
                  f"strictly decreasing in {decreasing}/5 seeds")
    assert ok


REGIMES = [
    # (label, beta, zeta, alpha, nu, N values, seeds)
    ("beta=2, zeta/alpha=2/3", 2.0, 1.0, 1.5, 1.0, [2000, 4000, 8000, 16_000, 32_000], [1, 2, 3]),
    ("beta=2, zeta/alpha=1.5", 2.0, 1.5, 1.0, 0.1, [3000, 6000, 12_000, 24_000, 48_000], list(range(1, 9))),
    ("beta=0.5, zeta/alpha=1", 0.5, 1.0, 1.0, 1.0, [2000, 4000, 8000, 16_000], [1, 2, 3]),
]


def test_4_lambda_hat_growth():
    parts, ok = [], True
    for label, beta, zeta, alpha, nu, ns, seeds in REGIMES:
        cfg = harness.ExperimentConfig(zeta=zeta, alpha=alpha, beta=beta, nu=nu, n=ns[0], seeds=seeds)
        rep = harness.run_sweep(cfg, ns)
        order = theory.lambda_T_order(beta, zeta, alpha)
        slope = rep.slopes["Lambda_hat"]
        good = abs(slope - float(order.n_power)) <= 0.15
        ok &= good
        parts.append(f"{label}: slope {slope:.3f} vs {order.n_power}")
    record(4, ok, "; ".join(parts))
    assert ok


def test_5_edge_probability():
    # nu chosen so that R = 24 exactly at N = 1000
    p = ModelParams(zeta=0.5, alpha=1.0, beta=2.0, nu=1000 / math.exp(6.0), n=1000)
    assert p.radius == pytest.approx(24.0, rel=1e-14)
    adj = graphgen.sample_pair_adjacency(1.0, 1.0, p, 100_000, seed=1)
    freq = float(adj.mean())
    se = math.sqrt(freq * (1 - freq) / adj.size)
    target = theory.c_beta(2.0) / graphgen.pair_scale(1.0, 1.0, p)
    ok = abs(freq - target) <= 3 * se
    record(5, ok, f"frequency {freq:.5f} +- {se:.5f} vs C_beta/A {target:.5f} ({abs(freq - target) / se:.2f} se)")
    assert ok


def test_6_oracle_equivalence():
    mismatches = 0
    for seed in range(10):
        vs = sample_vertex_set(ModelParams(zeta=1.0, alpha=1.0, beta=2.0, nu=1.0, n=2000), seed)
        mismatches += not graphgen.build_disc_pruned(vs).same_edges(graphgen.build_disc_naive(vs))

    count_bad = 0
    for seed in range(20):
        rs = np.random.default_rng(seed)
        n = int(rs.integers(10, 61))
        h = nx.gnp_random_graph(n, float(rs.uniform(0.1, 0.5)), seed=seed)
        g = Graph.from_edges(n, list(h.edges()))
        adj = nx.to_numpy_array(h, dtype=bool)
        tri = sum(adj[a, b] and adj[b, c] and adj[a, c] for a, b, c in itertools.combinations(range(n), 3))
        paths = sum(adj[a, m] and adj[m, b] for m in range(n) for a, b in itertools.combinations(range(n), 2))
        count_bad += (clustering.count_triangles(g) != tri) + (clustering.count_paths2(g) != paths)

    lam_bad = 0
    for seed in range(3):
        h = nx.gnp_random_graph(500, 0.02, seed=100 + seed)
        g = Graph.from_edges(500, list(h.edges()))
        enum = sum(1 for m in h for _ in itertools.combinations(h[m], 2))
        lam_bad += clustering.count_paths2(g) != enum

    ok = mismatches == 0 and count_bad == 0 and lam_bad == 0
    record(6, ok, f"pruned != naive in {mismatches}/10 graphs; count mismatches {count_bad}/40; "
                  f"path-formula mismatches {lam_bad}/3")
    assert ok


def test_7_quadrature_identities():
    worst = 0.0
    for beta in (1.2, 1.5, 2.0, 3.0, 5.0):
        v = theory.one_over_one_plus_pow_integral(beta).value
        worst = max(worst, abs(v / (math.pi / (beta * math.sin(math.pi / beta))) - 1))
    tight = theory.QuadConfig(rel_tol=1e-10)
    sym = max(abs(theory.g_integral(a, b, 2.0, tight).value - theory.g_integral(b, a, 2.0, tight).value)
              for a, b in [(0.5, 2.0), (2.0, 3.0), (0.1, 10.0)])
    l_inf = theory.limit_L_infinity(2.0, 1.0, 1.5, QUAD).value
    l_30 = theory.limit_L_restricted(30.0, 2.0, 1.0, 1.5, QUAD).value
    rel30 = abs(l_30 / l_inf - 1)
    cb = abs(theory.c_beta(2.0) - 1.0)
    ok = worst <= 1e-6 and sym <= 1e-9 and rel30 <= 1e-3 and cb <= 1e-12
    record(7, ok, f"1/(1+z^b) rel err {worst:.1e}; G asymmetry {sym:.1e}; "
                  f"L(30)/L_inf - 1 = {rel30:.1e}; |c_beta(2) - 1| = {cb:.1e}")
    assert ok


def test_8_degree_tail():
    vs = sample_vertex_set(ModelParams(zeta=1.0, alpha=1.0, beta=2.0, nu=1.0, n=100_000), 1)
    g = graphgen.build_binomial(vs, 1, force_quadratic=True)
    fit = harness.fit_tail_exponent(g.degrees, tail_fraction=0.05, n_boot=100, seed=1)
    target = theory.degree_tail_exponent(1.0, 1.0)
    ok = abs(fit.exponent - target) <= 0.3
    record(8, ok, f"Hill exponent {fit.exponent:.3f} +- {fit.stderr:.3f} (k={fit.k}) vs {target:.1f} +- 0.3")
    assert ok


def test_9_split_exactness():
    # runs last: every graph generated by the criteria above is checked
    assert SPLIT_CHECKS, "no graphs were generated"
    exact = all(st.t_hat + st.t_tilde == st.triangles and st.lambda_hat + st.lambda_tilde == st.paths2
                for _, st in SPLIT_CHECKS)
    sub = [st for ratio, st in SPLIT_CHECKS if ratio < 1]
    zero = sum(st.lambda_tilde == 0 for st in sub)
    frac = zero / len(sub) if sub else float("nan")
    if not frac >= 0.5:
        warnings.warn(f"Lambda-tilde vanished in only {frac:.0%} of seeds with zeta/alpha < 1")
    record(9, exact, f"split identities hold on {len(SPLIT_CHECKS)} graphs: {exact}; "
                     f"Lambda-tilde = 0 in {zero}/{len(sub)} seeds with zeta/alpha < 1 (soft, expect >= 50%)")
    assert exact
