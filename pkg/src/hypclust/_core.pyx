# Compiled kernels.  Every function here has a numpy twin in _pycore.py with
# the same signature and (for the graph builders) bit-identical output.

from libc.math cimport sqrt, pow, exp, asin, fabs, M_PI
from libc.math cimport log as _log
from libc.stdint cimport uint64_t, int64_t, uint8_t
from libcpp.vector cimport vector

import numpy as np

cdef uint64_t GAMMA = <uint64_t>0x9E3779B97F4A7C15ULL
cdef uint64_t M1 = <uint64_t>0xBF58476D1CE4E5B9ULL
cdef uint64_t M2 = <uint64_t>0x94D049BB133111EBULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0
cdef double TWO_PI = 2.0 * M_PI

BACKEND = "cython"


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * M1
    z = (z ^ (z >> 27)) * M2
    return z ^ (z >> 31)


cdef inline double scaled_cosh(const double[::1] P, const double[::1] Q, const double[::1] S,
                               const double[::1] hs, const double[::1] hc,
                               Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    # cosh(zeta d(i, j)) * exp(-zeta R)
    cdef double cd = 0.5 * (P[i] * Q[j] + Q[i] * P[j])
    cdef double s = hs[i] * hc[j] - hc[i] * hs[j]
    return cd + 2.0 * S[i] * S[j] * (s * s)


def _pairs_to_arrays(vector[int64_t]& I, vector[int64_t]& J):
    cdef Py_ssize_t m = I.size()
    out_i = np.empty(m, dtype=np.int64)
    out_j = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] oi = out_i
    cdef int64_t[::1] oj = out_j
    cdef Py_ssize_t k
    for k in range(m):
        oi[k] = I[k]
        oj[k] = J[k]
    return out_i, out_j


def disc_pairs_naive(const double[::1] P, const double[::1] Q, const double[::1] S,
                     const double[::1] hs, const double[::1] hc, double thresh):
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t i, j
    cdef vector[int64_t] I, J
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                if scaled_cosh(P, Q, S, hs, hc, i, j) <= thresh:
                    I.push_back(i)
                    J.push_back(j)
    return _pairs_to_arrays(I, J)


def binomial_pairs(const double[::1] P, const double[::1] Q, const double[::1] S,
                   const double[::1] hs, const double[::1] hc, double e2, double half_beta,
                   const uint64_t[::1] rowkeys, double ucut, double zcap):
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t i, j
    cdef uint64_t key
    cdef double X, Z, u, p
    cdef vector[int64_t] I, J
    with nogil:
        for i in range(n):
            key = rowkeys[i]
            for j in range(i + 1, n):
                X = scaled_cosh(P, Q, S, hs, hc, i, j)
                u = <double>(mix64(key + (<uint64_t>(j + 1)) * GAMMA) >> 11) * TWO_M53
                if u >= ucut and X >= zcap:
                    continue
                Z = X * X - e2
                if Z < 0.0:
                    Z = 0.0
                Z = X + sqrt(Z)
                p = 1.0 / (pow(Z, half_beta) + 1.0)
                if u < p:
                    I.push_back(i)
                    J.push_back(j)
    return _pairs_to_arrays(I, J)


cdef inline double angle_at(double Pu, double Qu, double Su, double rv, double zeta,
                            double radius, double thresh) noexcept nogil:
    # largest relative angle at which a point of radius rv is within threshold of u;
    # -1 when no angle works, pi when every angle works
    cdef double Pv = exp(zeta * (rv - 0.5 * radius))
    cdef double Qv = exp(-zeta * (rv + 0.5 * radius))
    cdef double Sv = 0.5 * (Pv - Qv)
    cdef double num = thresh - 0.5 * (Pu * Qv + Qu * Pv)
    cdef double den = 2.0 * Su * Sv
    cdef double ratio
    if den <= 0.0:
        return M_PI if num >= 0.0 else -1.0
    ratio = num / den
    if ratio >= 1.0:
        return M_PI
    if ratio < 0.0:
        return -1.0
    return 2.0 * asin(sqrt(ratio))


cdef inline Py_ssize_t lower_bound(const double[::1] a, Py_ssize_t lo, Py_ssize_t hi, double x) noexcept nogil:
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t upper_bound(const double[::1] a, Py_ssize_t lo, Py_ssize_t hi, double x) noexcept nogil:
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline void scan(const double[::1] P, const double[::1] Q, const double[::1] S,
                      const double[::1] hs, const double[::1] hc, double thresh,
                      const int64_t[::1] members, Py_ssize_t a, Py_ssize_t b, Py_ssize_t u,
                      vector[int64_t]& I, vector[int64_t]& J) noexcept nogil:
    cdef Py_ssize_t k
    cdef int64_t v
    for k in range(a, b):
        v = members[k]
        if v > u and scaled_cosh(P, Q, S, hs, hc, u, v) <= thresh:
            I.push_back(u)
            J.push_back(v)


def disc_pairs_pruned(const double[::1] P, const double[::1] Q, const double[::1] S,
                      const double[::1] hs, const double[::1] hc,
                      const double[::1] r, const double[::1] theta, const double[::1] types,
                      double zeta, double radius, double delta, double thresh,
                      double eps, double c0,
                      const int64_t[::1] band_ptr, const int64_t[::1] members,
                      const double[::1] band_theta, const double[::1] band_rmin,
                      const double[::1] band_rmax, const double[::1] band_tmax):
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t nb = band_ptr.shape[0] - 1
    cdef Py_ssize_t u, b, a0, a1, k0, k1
    cdef double w, w2, lo, hi, rho, peak, kappa, cosh_a
    cdef double limit = (1.0 - fabs(delta)) * radius - c0
    cdef vector[int64_t] I, J
    with nogil:
        for u in range(n):
            cosh_a = 0.5 * (exp(zeta * r[u]) + exp(-zeta * r[u]))
            kappa = 0.5 * (exp(zeta * (1.0 + delta) * radius) + exp(-zeta * (1.0 + delta) * radius))
            for b in range(nb):
                a0 = band_ptr[b]
                a1 = band_ptr[b + 1]
                if a0 == a1:
                    continue
                if types[u] + band_tmax[b] >= limit:
                    scan(P, Q, S, hs, hc, thresh, members, a0, a1, u, I, J)
                    continue
                w = angle_at(P[u], Q[u], S[u], band_rmin[b], zeta, radius, thresh)
                w2 = angle_at(P[u], Q[u], S[u], band_rmax[b], zeta, radius, thresh)
                if w2 > w:
                    w = w2
                if kappa < cosh_a:
                    # the reachable angle is unimodal in the radius, peaking where
                    # cosh(zeta rho) = cosh(zeta r_u) / cosh(zeta (1 + delta) R)
                    peak = cosh_a / kappa
                    rho = (peak + sqrt(peak * peak - 1.0))
                    rho = (0.0 if rho <= 1.0 else (1.0 / zeta) * _log(rho))
                    if rho > band_rmin[b] and rho < band_rmax[b]:
                        w2 = angle_at(P[u], Q[u], S[u], rho, zeta, radius, thresh)
                        if w2 > w:
                            w = w2
                w2 = 2.0 * (1.0 + eps) * exp(0.5 * zeta * (types[u] + band_tmax[b] - (1.0 - delta) * radius))
                if w >= 0.0 and w2 > w:
                    w = w2
                if w < 0.0:
                    continue
                w = w * (1.0 + 1e-9) + 1e-12
                if w >= M_PI:
                    scan(P, Q, S, hs, hc, thresh, members, a0, a1, u, I, J)
                    continue
                lo = theta[u] - w
                hi = theta[u] + w
                if lo < 0.0:
                    k0 = lower_bound(band_theta, a0, a1, lo + TWO_PI)
                    scan(P, Q, S, hs, hc, thresh, members, k0, a1, u, I, J)
                    k1 = upper_bound(band_theta, a0, a1, hi)
                    scan(P, Q, S, hs, hc, thresh, members, a0, k1, u, I, J)
                elif hi > TWO_PI:
                    k0 = lower_bound(band_theta, a0, a1, lo)
                    scan(P, Q, S, hs, hc, thresh, members, k0, a1, u, I, J)
                    k1 = upper_bound(band_theta, a0, a1, hi - TWO_PI)
                    scan(P, Q, S, hs, hc, thresh, members, a0, k1, u, I, J)
                else:
                    k0 = lower_bound(band_theta, a0, a1, lo)
                    k1 = upper_bound(band_theta, a0, a1, hi)
                    scan(P, Q, S, hs, hc, thresh, members, k0, k1, u, I, J)
    return _pairs_to_arrays(I, J)


def triangles_per_vertex(const int64_t[::1] indptr, const int64_t[::1] indices, const uint8_t[::1] mask):
    """Triangle count at every vertex of the subgraph induced by ``mask``."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t u, v, w, k, k2
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] tri = out
    deg_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] deg = deg_arr
    for u in range(n):
        if mask[u]:
            for k in range(indptr[u], indptr[u + 1]):
                if mask[indices[k]]:
                    deg[u] += 1
    # orient u -> v when (deg, index) of u is smaller
    optr_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] optr = optr_arr
    for u in range(n):
        optr[u + 1] = optr[u]
        if mask[u]:
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if mask[v] and (deg[u] < deg[v] or (deg[u] == deg[v] and u < v)):
                    optr[u + 1] += 1
    oadj_arr = np.empty(optr[n], dtype=np.int64)
    cdef int64_t[::1] oadj = oadj_arr
    cdef Py_ssize_t pos
    for u in range(n):
        pos = optr[u]
        if mask[u]:
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if mask[v] and (deg[u] < deg[v] or (deg[u] == deg[v] and u < v)):
                    oadj[pos] = v
                    pos += 1
    flag_arr = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] flag = flag_arr
    with nogil:
        for u in range(n):
            if optr[u + 1] - optr[u] < 2:
                continue
            for k in range(optr[u], optr[u + 1]):
                flag[oadj[k]] = 1
            for k in range(optr[u], optr[u + 1]):
                v = oadj[k]
                for k2 in range(optr[v], optr[v + 1]):
                    w = oadj[k2]
                    if flag[w]:
                        tri[u] += 1
                        tri[v] += 1
                        tri[w] += 1
            for k in range(optr[u], optr[u + 1]):
                flag[oadj[k]] = 0
    return out


cdef inline double ipow(double x, int m) noexcept nogil:
    cdef double out = 1.0
    while m > 0:
        if m & 1:
            out *= x
        x *= x
        m >>= 1
    return out


def g_table(const double[::1] logc, double beta, double s_lo, double h, Py_ssize_t n_nodes):
    """G(exp(x_a), exp(x_b)) on a symmetric grid, by the trapezoid rule in s = ln z.

    Returns (fine, coarse) where ``coarse`` uses every second node, for an error estimate.
    """
    cdef Py_ssize_t m = logc.shape[0]
    cdef Py_ssize_t a, b, i, j
    cdef int ib = <int>beta
    cdef bint integer_beta = (<double>ib == beta) and ib <= 16
    fine_arr = np.zeros((m, m), dtype=np.float64)
    coarse_arr = np.zeros((m, m), dtype=np.float64)
    cdef double[:, ::1] fine = fine_arr
    cdef double[:, ::1] coarse = coarse_arr
    z_arr = np.exp(s_lo + h * np.arange(n_nodes, dtype=np.float64))
    w_arr = h * z_arr / (z_arr ** beta + 1.0)
    cdef double[::1] z = z_arr
    cdef double[::1] w = w_arr
    cu_arr = np.empty(n_nodes, dtype=np.float64)
    cv_arr = np.empty(n_nodes, dtype=np.float64)
    cdef double[::1] cu = cu_arr
    cdef double[::1] cv = cv_arr
    cdef double c1, c2, acc, acc2, row, row2, q, term
    with nogil:
        for a in range(m):
            c1 = exp(logc[a])
            for i in range(n_nodes):
                cu[i] = c1 * z[i]
            for b in range(a, m):
                c2 = exp(logc[b])
                for j in range(n_nodes):
                    cv[j] = c2 * z[j]
                acc = 0.0
                acc2 = 0.0
                for i in range(n_nodes):
                    row = 0.0
                    row2 = 0.0
                    for j in range(n_nodes):
                        q = cu[i] + cv[j]
                        if integer_beta:
                            term = w[j] / (ipow(q, ib) + 1.0)
                        else:
                            term = w[j] / (pow(q, beta) + 1.0)
                        row += term
                        if (j & 1) == 0:
                            row2 += term
                    acc += w[i] * row
                    if (i & 1) == 0:
                        acc2 += w[i] * row2
                fine[a, b] = acc
                fine[b, a] = acc
                coarse[a, b] = 4.0 * acc2
                coarse[b, a] = 4.0 * acc2
    return fine_arr, coarse_arr
