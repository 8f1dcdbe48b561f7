"""Pure numpy versions of the compiled kernels in ``_core.pyx``.

The graph builders here perform the same floating-point operations in the
same order as the compiled code, so both backends produce identical graphs.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .rng import GAMMA, mix64, to_unit

BACKEND = "python"
TWO_PI = 2.0 * np.pi


def _row_scaled_cosh(P, Q, S, hs, hc, i, j):
    cd = 0.5 * (P[i] * Q[j] + Q[i] * P[j])
    s = hs[i] * hc[j] - hc[i] * hs[j]
    return cd + 2.0 * S[i] * S[j] * (s * s)


def _concat(parts_i, parts_j):
    if not parts_i:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(parts_i).astype(np.int64), np.concatenate(parts_j).astype(np.int64)


def disc_pairs_naive(P, Q, S, hs, hc, thresh):
    n = len(P)
    out_i, out_j = [], []
    for i in range(n - 1):
        j = np.arange(i + 1, n)
        hit = j[_row_scaled_cosh(P, Q, S, hs, hc, i, j) <= thresh]
        if hit.size:
            out_i.append(np.full(hit.size, i, dtype=np.int64))
            out_j.append(hit)
    return _concat(out_i, out_j)


def binomial_pairs(P, Q, S, hs, hc, e2, half_beta, rowkeys, ucut, zcap):
    n = len(P)
    out_i, out_j = [], []
    for i in range(n - 1):
        j = np.arange(i + 1, n)
        X = _row_scaled_cosh(P, Q, S, hs, hc, i, j)
        with np.errstate(over="ignore"):
            u = to_unit(mix64(rowkeys[i] + (j.astype(np.uint64) + np.uint64(1)) * GAMMA))
        keep = (u < ucut) | (X < zcap)
        if not keep.any():
            continue
        X, u, j = X[keep], u[keep], j[keep]
        Z = X * X - e2
        Z = X + np.sqrt(np.maximum(Z, 0.0))
        with np.errstate(over="ignore"):  # inf gives p = 0, as intended
            p = 1.0 / (np.power(Z, half_beta) + 1.0)
        hit = j[u < p]
        if hit.size:
            out_i.append(np.full(hit.size, i, dtype=np.int64))
            out_j.append(hit)
    return _concat(out_i, out_j)


def _angle_at(Pu, Qu, Su, rv, zeta, radius, thresh):
    Pv = np.exp(zeta * (rv - 0.5 * radius))
    Qv = np.exp(-zeta * (rv + 0.5 * radius))
    Sv = 0.5 * (Pv - Qv)
    num = thresh - 0.5 * (Pu * Qv + Qu * Pv)
    den = 2.0 * Su * Sv
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den
        out = 2.0 * np.arcsin(np.sqrt(np.clip(ratio, 0.0, 1.0)))
    out = np.where(ratio >= 1.0, np.pi, out)
    out = np.where(ratio < 0.0, -1.0, out)
    out = np.where(den <= 0.0, np.where(num >= 0.0, np.pi, -1.0), out)
    return out


def _expand(starts, stops, us):
    """All (u, k) with starts <= k < stops, one row per u."""
    counts = np.maximum(stops - starts, 0)
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    owner = np.repeat(us, counts)
    offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    return owner, np.repeat(starts, counts) + offs


def disc_pairs_pruned(P, Q, S, hs, hc, r, theta, types, zeta, radius, delta, thresh, eps, c0,
                      band_ptr, members, band_theta, band_rmin, band_rmax, band_tmax):
    n = len(P)
    limit = (1.0 - abs(delta)) * radius - c0
    uu = np.arange(n)
    cosh_a = 0.5 * (np.exp(zeta * r) + np.exp(-zeta * r))
    kappa = 0.5 * (np.exp(zeta * (1.0 + delta) * radius) + np.exp(-zeta * (1.0 + delta) * radius))
    out_i, out_j = [], []
    for b in range(len(band_ptr) - 1):
        a0, a1 = int(band_ptr[b]), int(band_ptr[b + 1])
        if a0 == a1:
            continue
        bt = band_theta[a0:a1]
        w = np.maximum(_angle_at(P, Q, S, band_rmin[b], zeta, radius, thresh),
                       _angle_at(P, Q, S, band_rmax[b], zeta, radius, thresh))
        with np.errstate(invalid="ignore"):
            peak = cosh_a / kappa
            rho = peak + np.sqrt(peak * peak - 1.0)
            rho = np.where(rho <= 1.0, 0.0, np.log(np.where(rho > 1.0, rho, 2.0)) / zeta)
        inner = (kappa < cosh_a) & (rho > band_rmin[b]) & (rho < band_rmax[b])
        if inner.any():
            w = np.where(inner, np.maximum(w, _angle_at(P, Q, S, rho, zeta, radius, thresh)), w)
        asym = 2.0 * (1.0 + eps) * np.exp(0.5 * zeta * (types + band_tmax[b] - (1.0 - delta) * radius))
        w = np.where((w >= 0.0) & (asym > w), asym, w)
        w = w * (1.0 + 1e-9) + 1e-12
        full = (types + band_tmax[b] >= limit) | (w >= np.pi)
        skip = ~full & (w < 0.0)

        starts, stops, owners = [], [], []
        fu = uu[full]
        starts.append(np.full(fu.size, 0)); stops.append(np.full(fu.size, a1 - a0)); owners.append(fu)
        part = ~full & ~skip
        pu = uu[part]
        lo = theta[pu] - w[part]
        hi = theta[pu] + w[part]
        wrap_lo = lo < 0.0
        wrap_hi = (hi > TWO_PI) & ~wrap_lo
        plain = ~wrap_lo & ~wrap_hi
        # plain window
        starts.append(np.searchsorted(bt, lo[plain], "left"))
        stops.append(np.searchsorted(bt, hi[plain], "right"))
        owners.append(pu[plain])
        # window crossing 0
        starts.append(np.searchsorted(bt, lo[wrap_lo] + TWO_PI, "left"))
        stops.append(np.full(int(wrap_lo.sum()), a1 - a0))
        owners.append(pu[wrap_lo])
        starts.append(np.zeros(int(wrap_lo.sum()), dtype=np.int64))
        stops.append(np.searchsorted(bt, hi[wrap_lo], "right"))
        owners.append(pu[wrap_lo])
        # window crossing 2pi
        starts.append(np.searchsorted(bt, lo[wrap_hi], "left"))
        stops.append(np.full(int(wrap_hi.sum()), a1 - a0))
        owners.append(pu[wrap_hi])
        starts.append(np.zeros(int(wrap_hi.sum()), dtype=np.int64))
        stops.append(np.searchsorted(bt, hi[wrap_hi] - TWO_PI, "right"))
        owners.append(pu[wrap_hi])

        ci, ck = _expand(np.concatenate(starts).astype(np.int64),
                         np.concatenate(stops).astype(np.int64),
                         np.concatenate(owners).astype(np.int64))
        cj = members[a0 + ck]
        sel = cj > ci
        ci, cj = ci[sel], cj[sel]
        hit = _row_scaled_cosh(P, Q, S, hs, hc, ci, cj) <= thresh
        out_i.append(ci[hit])
        out_j.append(cj[hit])
    return _concat(out_i, out_j)


def triangles_per_vertex(indptr, indices, mask):
    n = len(indptr) - 1
    A = sp.csr_matrix((np.ones(len(indices), dtype=np.int64), indices, indptr), shape=(n, n))
    m = sp.diags(np.asarray(mask, dtype=np.int64))
    A = m @ A @ m
    A.eliminate_zeros()
    return np.asarray((A @ A).multiply(A).sum(axis=1)).ravel().astype(np.int64) // 2


def g_table(logc, beta, s_lo, h, n_nodes):
    logc = np.asarray(logc, dtype=float)
    m = len(logc)
    z = np.exp(s_lo + h * np.arange(n_nodes, dtype=np.float64))
    w = h * z / (z ** beta + 1.0)
    fine = np.zeros((m, m))
    coarse = np.zeros((m, m))
    for a in range(m):
        cu = np.exp(logc[a]) * z
        for b in range(a, m):
            cv = np.exp(logc[b]) * z
            term = 1.0 / ((cu[:, None] + cv[None, :]) ** beta + 1.0)
            f = w @ term @ w
            c = 4.0 * (w[::2] @ term[::2, ::2] @ w[::2])
            fine[a, b] = fine[b, a] = f
            coarse[a, b] = coarse[b, a] = c
    return fine, coarse
