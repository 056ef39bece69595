# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batch kernels for 3x3 trace maximization.

Straight C ports of the per-matrix routines in ``spectral``, ``svd``,
``characterization``, ``spatial`` and ``cayley``.  Matrices are 9 contiguous
doubles, row-major.  Keep the control flow in step with the Python modules;
``tests/test_backends.py`` checks the two agree.
"""
import numpy as np

from libc.math cimport sqrt, cos, acos, fabs, M_PI, hypot
from libc.string cimport memcpy
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

cdef double CLUSTER_RTOL = 1e-7
cdef double CROSS_RTOL = 1e-12
cdef double ZERO_RTOL = 1e-12
cdef double ZERO_SIGMA_RTOL = 1e-13
cdef double JACOBI_RTOL = 1e-15
cdef int JACOBI_SWEEPS = 10
cdef double SYM_JACOBI_RTOL = 1e-17

# Newton status codes, mirrored in rotalign.backend
cdef int ST_CONVERGED = 0
cdef int ST_SINGULAR = 1
cdef int ST_LIMIT = 2
cdef int ST_DIVERGED = 3
cdef int ST_SKIPPED = -1


cdef inline double det3(const double* m) noexcept nogil:
    return (m[0] * (m[4] * m[8] - m[5] * m[7])
            - m[1] * (m[3] * m[8] - m[5] * m[6])
            + m[2] * (m[3] * m[7] - m[4] * m[6]))


cdef inline void cross3(const double* a, const double* b, double* out) noexcept nogil:
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]


cdef inline double dot3(const double* a, const double* b) noexcept nogil:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


cdef inline double norm3(const double* a) noexcept nogil:
    return sqrt(dot3(a, a))


cdef inline void scale3(double* a, double k) noexcept nogil:
    a[0] *= k
    a[1] *= k
    a[2] *= k


cdef inline double maxabs(const double* m, int n) noexcept nogil:
    cdef double r = 0.0, v
    cdef int i
    for i in range(n):
        v = fabs(m[i])
        if v > r:
            r = v
    return r


cdef inline void matmul3(const double* a, const double* b, double* out) noexcept nogil:
    cdef int i, j
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j]


cdef inline void symmetrize(const double* a, double* out) noexcept nogil:
    cdef int i, j
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = 0.5 * (a[3 * i + j] + a[3 * j + i])


cdef inline double sym_defect(const double* a) noexcept nogil:
    return max3(fabs(a[1] - a[3]), fabs(a[2] - a[6]), fabs(a[5] - a[7]))


cdef inline double max3(double a, double b, double c) noexcept nogil:
    if b > a:
        a = b
    if c > a:
        a = c
    return a


cdef inline void col(const double* m, int k, double* out) noexcept nogil:
    out[0] = m[k]
    out[1] = m[3 + k]
    out[2] = m[6 + k]


cdef inline void set_col(double* m, int k, const double* v) noexcept nogil:
    m[k] = v[0]
    m[3 + k] = v[1]
    m[6 + k] = v[2]


cdef inline void eye3(double* m) noexcept nogil:
    cdef int i
    for i in range(9):
        m[i] = 0.0
    m[0] = 1.0
    m[4] = 1.0
    m[8] = 1.0


# ---------------------------------------------------------------- spectral

cdef void eigenvalues3(const double* a_in, double tol, double* al, double* q_out, double* p_out) noexcept nogil:
    # a symmetric; worked at unit scale so squares neither overflow nor underflow
    cdef double sc = maxabs(a_in, 9)
    cdef double a[9]
    cdef double b[9]
    cdef double q, p2, p, half, t3
    cdef int i
    if sc == 0.0:
        q_out[0] = 0.0
        p_out[0] = 0.0
        al[0] = 0.0
        al[1] = 0.0
        al[2] = 0.0
        return
    for i in range(9):
        a[i] = a_in[i] / sc
    q = (a[0] + a[4] + a[8]) / 3.0
    p2 = ((a[0] - q) * (a[0] - q) + (a[4] - q) * (a[4] - q) + (a[8] - q) * (a[8] - q)
          + 2.0 * (a[1] * a[1] + a[2] * a[2] + a[5] * a[5]))
    p = sqrt(p2 / 6.0)
    q_out[0] = q * sc
    p_out[0] = p * sc
    if p <= tol:
        al[0] = q * sc
        al[1] = q * sc
        al[2] = q * sc
        return
    for i in range(9):
        b[i] = a[i] / p
    b[0] -= q / p
    b[4] -= q / p
    b[8] -= q / p
    half = det3(b) / 2.0
    if half > 1.0:
        half = 1.0
    elif half < -1.0:
        half = -1.0
    t3 = acos(half) / 3.0
    al[0] = sc * (2.0 * p * cos(2.0 * M_PI / 3.0 + t3) + q)
    al[1] = sc * (2.0 * p * cos(2.0 * M_PI / 3.0 - t3) + q)
    al[2] = sc * (2.0 * p * cos(t3) + q)


cdef int eigenspace(const double* a, double alpha, double* vecs) noexcept nogil:
    """Writes 1-3 unit vectors into vecs[0:3], vecs[3:6], vecs[6:9]; returns the count."""
    cdef double c[9]
    cdef double cols[9]
    cdef double cand[9]
    cdef double norms[3]
    cdef double w[3]
    cdef double *u
    cdef double cmax, nb, nu, v
    cdef int i, best, k
    memcpy(c, a, 9 * sizeof(double))
    c[0] -= alpha
    c[4] -= alpha
    c[8] -= alpha
    cmax = maxabs(c, 9)
    if cmax <= ZERO_RTOL * (maxabs(a, 9) if maxabs(a, 9) > fabs(alpha) else fabs(alpha)):
        eye3(vecs)
        return 3
    for i in range(9):
        c[i] /= cmax
    for i in range(3):
        col(c, i, &cols[3 * i])
    cross3(&cols[0], &cols[3], &cand[0])
    cross3(&cols[3], &cols[6], &cand[3])
    cross3(&cols[6], &cols[0], &cand[6])
    best = 0
    for i in range(3):
        norms[i] = norm3(&cand[3 * i])
        if norms[i] > norms[best]:
            best = i
    if norms[best] > CROSS_RTOL:
        for i in range(3):
            vecs[i] = cand[3 * best + i] / norms[best]
        return 1
    best = 0
    nb = norm3(&cols[0])
    for i in range(1, 3):
        if norm3(&cols[3 * i]) > nb:
            nb = norm3(&cols[3 * i])
            best = i
    u = &cols[3 * best]
    k = 0
    for i in range(1, 3):
        if fabs(u[i]) > fabs(u[k]):
            k = i
    w[0] = 1.0
    w[1] = 1.0
    w[2] = 1.0
    w[k] = 0.0
    cross3(u, w, &vecs[0])
    cross3(&vecs[0], u, &vecs[3])
    scale3(&vecs[0], 1.0 / norm3(&vecs[0]))
    scale3(&vecs[3], 1.0 / norm3(&vecs[3]))
    return 2


cdef void orthogonalize(double* v, const double* against) noexcept nogil:
    cdef double d = dot3(v, against)
    cdef int i
    for i in range(3):
        v[i] -= d * against[i]
    scale3(v, 1.0 / norm3(v))


cdef void complete(const double* e1, const double* hint, double* out) noexcept nogil:
    cdef double d = dot3(hint, e1)
    cdef double n
    cdef int i, k
    for i in range(3):
        out[i] = hint[i] - d * e1[i]
    n = norm3(out)
    if n > 1e-6:
        scale3(out, 1.0 / n)
        return
    k = 0
    for i in range(1, 3):
        if fabs(e1[i]) < fabs(e1[k]):
            k = i
    for i in range(3):
        out[i] = -e1[k] * e1[i]
    out[k] += 1.0
    scale3(out, 1.0 / norm3(out))


cdef void third(const double* e1, const double* e2, const double* hint, double* out) noexcept nogil:
    cross3(e1, e2, out)
    if dot3(out, hint) < 0.0:
        scale3(out, -1.0)


cdef void sym_jacobi_polish(const double* a, double* basis, double* vals) noexcept nogil:
    # refine an approximate eigenbasis (columns) with cyclic Jacobi; vals ascending on return
    cdef double sc = maxabs(a, 9)
    cdef double as_[9]
    cdef double tmp[9]
    cdef double d[9]
    cdef double theta, tn, c, s, x, y
    cdef int sweep, pair, i, j, k, l
    cdef bint rotated
    cdef int is_[3]
    cdef int js[3]
    is_[0], js[0] = 0, 1
    is_[1], js[1] = 0, 2
    is_[2], js[2] = 1, 2
    for k in range(9):
        as_[k] = a[k] / sc
    # d = basis^T as basis
    matmul3(as_, basis, tmp)
    for i in range(3):
        for j in range(3):
            d[3 * i + j] = basis[i] * tmp[j] + basis[3 + i] * tmp[3 + j] + basis[6 + i] * tmp[6 + j]
    for i in range(3):
        for j in range(i + 1, 3):
            x = 0.5 * (d[3 * i + j] + d[3 * j + i])
            d[3 * i + j] = x
            d[3 * j + i] = x
    for sweep in range(JACOBI_SWEEPS):
        rotated = False
        for pair in range(3):
            i = is_[pair]
            j = js[pair]
            if fabs(d[3 * i + j]) <= SYM_JACOBI_RTOL:
                continue
            theta = (d[4 * j] - d[4 * i]) / (2.0 * d[3 * i + j])
            tn = (1.0 if theta >= 0.0 else -1.0) / (fabs(theta) + hypot(1.0, theta))
            c = 1.0 / hypot(1.0, tn)
            s = c * tn
            # d <- J^T d J with J = I except J_ii = J_jj = c, J_ij = s, J_ji = -s
            for l in range(3):
                x = d[3 * l + i]
                y = d[3 * l + j]
                d[3 * l + i] = c * x - s * y
                d[3 * l + j] = s * x + c * y
            for l in range(3):
                x = d[3 * i + l]
                y = d[3 * j + l]
                d[3 * i + l] = c * x - s * y
                d[3 * j + l] = s * x + c * y
            for l in range(3):
                x = basis[3 * l + i]
                y = basis[3 * l + j]
                basis[3 * l + i] = c * x - s * y
                basis[3 * l + j] = s * x + c * y
            rotated = True
        if not rotated:
            break
    for k in range(3):
        vals[k] = d[4 * k] * sc
    # stable insertion sort, ascending
    for k in range(1, 3):
        j = k
        while j > 0 and vals[j] < vals[j - 1]:
            vals[j], vals[j - 1] = vals[j - 1], vals[j]
            for l in range(3):
                basis[3 * l + j], basis[3 * l + j - 1] = basis[3 * l + j - 1], basis[3 * l + j]
            j -= 1


cdef int spectral(const double* a_in, double tol, double* vals, double* basis) noexcept nogil:
    """Eigenvalues ascending into vals, eigenvectors as columns of basis. Returns 0/1/2 for distinct/double/triple."""
    cdef double a[9]
    cdef double al[3]
    cdef double q, p, cl, mean
    cdef double u[3]
    cdef double vecs[9]
    cdef double raw[9]
    cdef double e1[3]
    cdef double e2[3]
    cdef double hint[3]
    cdef int n, iso, b0, b1, i, k, kk, case
    symmetrize(a_in, a)
    eigenvalues3(a, tol, al, &q, &p)
    if p <= tol * maxabs(a, 9):
        vals[0] = q
        vals[1] = q
        vals[2] = q
        eye3(basis)
        return 2
    cl = CLUSTER_RTOL * maxabs(a, 9)
    if al[2] - al[0] <= cl:
        eye3(basis)
        case = 2
    elif al[1] - al[0] <= cl or al[2] - al[1] <= cl:
        if al[1] - al[0] <= cl:
            mean = 0.5 * (al[0] + al[1])
            iso, b0, b1 = 2, 0, 1
        else:
            mean = 0.5 * (al[1] + al[2])
            iso, b0, b1 = 0, 1, 2
        eigenspace(a, al[iso], vecs)
        memcpy(u, vecs, 3 * sizeof(double))
        n = eigenspace(a, mean, vecs)
        complete(u, &vecs[0], e1)
        if n > 1:
            memcpy(hint, &vecs[3], 3 * sizeof(double))
        else:
            cross3(u, e1, hint)
        third(u, e1, hint, e2)
        set_col(basis, iso, u)
        set_col(basis, b0, e1)
        set_col(basis, b1, e2)
        case = 1
    else:
        for k in range(3):
            eigenspace(a, al[k], vecs)
            memcpy(&raw[3 * k], vecs, 3 * sizeof(double))
        if al[1] - al[0] >= al[2] - al[1]:
            i, kk = 0, 2
        else:
            i, kk = 2, 0
        orthogonalize(&raw[3 * kk], &raw[3 * i])
        third(&raw[3 * i], &raw[3 * kk], &raw[3], e2)
        set_col(basis, i, &raw[3 * i])
        set_col(basis, kk, &raw[3 * kk])
        set_col(basis, 1, e2)
        case = 0
    sym_jacobi_polish(a, basis, vals)
    return case


cdef void top_eigvec(const double* a, double tol, double* v) noexcept nogil:
    # a symmetric
    cdef double vals[3]
    cdef double basis[9]
    spectral(a, tol, vals, basis)
    col(basis, 2, v)


# ---------------------------------------------------------- characterization

cdef bint is_max3(const double* a, double tol) noexcept nogil:
    cdef double s[9]
    cdef double tr, fl1, fl2, fl3, sc
    cdef int i, j
    if sym_defect(a) > tol * maxabs(a, 9):
        return False
    symmetrize(a, s)
    tr = s[0] + s[4] + s[8]
    for i in range(9):
        s[i] = -s[i]
    s[0] += tr
    s[4] += tr
    s[8] += tr
    if s[0] > 0.0 and s[0] * s[4] - s[1] * s[3] > 0.0 and det3(s) > 0.0:
        return True
    sc = maxabs(s, 9)
    fl1 = -tol * sc
    fl2 = -tol * sc * sc
    fl3 = -tol * sc * sc * sc
    if s[0] < fl1 or s[4] < fl1 or s[8] < fl1:
        return False
    for i in range(3):
        for j in range(i + 1, 3):
            if s[4 * i] * s[4 * j] - s[3 * i + j] * s[3 * j + i] < fl2:
                return False
    return det3(s) >= fl3


# ----------------------------------------------------------------- solvers

cdef void maximize_sym(const double* a, double tol, double* r) noexcept nogil:
    cdef double v[3]
    cdef int i, j
    if is_max3(a, tol):
        eye3(r)
        return
    top_eigvec(a, tol, v)
    for i in range(3):
        for j in range(3):
            r[3 * i + j] = 2.0 * v[i] * v[j]
        r[4 * i] -= 1.0


cdef void jacobi_polish(double* b, double* r) noexcept nogil:
    # rotate column pairs of b (and r alike) until b's columns are orthogonal
    cdef double al, be, ga, zeta, tn, c, s, x, y
    cdef int sweep, pair, j, k, i
    cdef bint rotated
    cdef int js[3]
    cdef int ks[3]
    js[0], ks[0] = 0, 1
    js[1], ks[1] = 0, 2
    js[2], ks[2] = 1, 2
    for sweep in range(JACOBI_SWEEPS):
        rotated = False
        for pair in range(3):
            j = js[pair]
            k = ks[pair]
            al = b[j] * b[j] + b[3 + j] * b[3 + j] + b[6 + j] * b[6 + j]
            be = b[k] * b[k] + b[3 + k] * b[3 + k] + b[6 + k] * b[6 + k]
            ga = b[j] * b[k] + b[3 + j] * b[3 + k] + b[6 + j] * b[6 + k]
            if al == 0.0 or be == 0.0 or fabs(ga) <= JACOBI_RTOL * sqrt(al) * sqrt(be):
                continue
            zeta = (be - al) / (2.0 * ga)
            tn = (1.0 if zeta >= 0.0 else -1.0) / (fabs(zeta) + hypot(1.0, zeta))
            c = 1.0 / hypot(1.0, tn)
            s = c * tn
            for i in range(3):
                x = b[3 * i + j]
                y = b[3 * i + k]
                b[3 * i + j] = c * x - s * y
                b[3 * i + k] = s * x + c * y
                x = r[3 * i + j]
                y = r[3 * i + k]
                r[3 * i + j] = c * x - s * y
                r[3 * i + k] = s * x + c * y
            rotated = True
        if not rotated:
            break


cdef void svd3(const double* m, double* v, double* s, double* r) noexcept nogil:
    cdef double ms[9]
    cdef double ata[9]
    cdef double vals[3]
    cdef double basis[9]
    cdef double b[9]
    cdef double c[3]
    cdef double e0[3]
    cdef double e1[3]
    cdef double e2[3]
    cdef double sc, thresh, d
    cdef int i, j, k
    sc = maxabs(m, 9)
    if sc == 0.0:
        eye3(v)
        eye3(r)
        s[0] = 0.0
        s[1] = 0.0
        s[2] = 0.0
        return
    for i in range(9):
        ms[i] = m[i] / sc
    for i in range(3):
        for j in range(3):
            ata[3 * i + j] = ms[i] * ms[j] + ms[3 + i] * ms[3 + j] + ms[6 + i] * ms[6 + j]
    spectral(ata, 1e-9, vals, basis)
    for k in range(3):
        for i in range(3):
            r[3 * i + k] = basis[3 * i + 2 - k]
    matmul3(ms, r, b)
    jacobi_polish(b, r)
    for k in range(3):
        s[k] = sqrt(b[k] * b[k] + b[3 + k] * b[3 + k] + b[6 + k] * b[6 + k])
    # tiny singular values can come out of order
    for k in range(1, 3):
        j = k
        while j > 0 and s[j] > s[j - 1]:
            s[j], s[j - 1] = s[j - 1], s[j]
            for i in range(3):
                r[3 * i + j], r[3 * i + j - 1] = r[3 * i + j - 1], r[3 * i + j]
                b[3 * i + j], b[3 * i + j - 1] = b[3 * i + j - 1], b[3 * i + j]
            j -= 1
    thresh = ZERO_SIGMA_RTOL * s[0]
    col(b, 0, e0)
    scale3(e0, 1.0 / s[0])
    if s[1] > thresh:
        col(b, 1, e1)
        d = dot3(e1, e0)
        for i in range(3):
            e1[i] -= d * e0[i]
        scale3(e1, 1.0 / norm3(e1))
    else:
        k = 0
        for i in range(1, 3):
            if fabs(e0[i]) < fabs(e0[k]):
                k = i
        for i in range(3):
            e1[i] = -e0[k] * e0[i]
        e1[k] += 1.0
        scale3(e1, 1.0 / norm3(e1))
    cross3(e0, e1, e2)
    if s[2] > thresh:
        col(b, 2, c)
        if dot3(c, e2) < 0.0:
            scale3(e2, -1.0)
    set_col(v, 0, e0)
    set_col(v, 1, e1)
    set_col(v, 2, e2)
    for k in range(3):
        s[k] *= sc


cdef void kabsch(const double* m, double* u) noexcept nogil:
    cdef double v[9]
    cdef double r[9]
    cdef double s[3]
    cdef double d
    cdef int i, j
    svd3(m, v, s, r)
    d = 1.0 if det3(v) * det3(r) > 0.0 else -1.0
    # u = r diag(1, 1, d) v^T
    for i in range(3):
        for j in range(3):
            u[3 * i + j] = r[3 * i] * v[3 * j] + r[3 * i + 1] * v[3 * j + 1] + d * r[3 * i + 2] * v[3 * j + 2]


cdef inline void scaled_cayley(double r, double s, double t, double* f) noexcept nogil:
    cdef double half = 0.5 * (1.0 + r * r + s * s + t * t)
    f[0] = half - r * r - s * s
    f[1] = -r + s * t
    f[2] = s + r * t
    f[3] = r + s * t
    f[4] = half - r * r - t * t
    f[5] = -t + r * s
    f[6] = -s + r * t
    f[7] = t + r * s
    f[8] = half - s * s - t * t


cdef inline void skew_entries_of_product(const double* f, const double* m, double* out) noexcept nogil:
    # entries (0,1), (2,0), (1,2) of f m - (f m)^T
    cdef double pm[9]
    matmul3(f, m, pm)
    out[0] = pm[1] - pm[3]
    out[1] = pm[6] - pm[2]
    out[2] = pm[5] - pm[7]


cdef int newton(const double* m, int max_iters, double g_tol, double j_guard, double div_bound,
                double* u, int* iters) noexcept nogil:
    cdef double sc = 1.0 + maxabs(m, 9)
    cdef double gt = g_tol * sc * sc
    cdef double jt = j_guard * sc * sc * sc
    cdef double x[3]
    cdef double gx[3]
    cdef double f[9]
    cdef double fp[9]
    cdef double jac[9]
    cdef double jk[9]
    cdef double colv[3]
    cdef double step[3]
    cdef double r, s, t, dj, k2
    cdef int k, p, i
    x[0] = 0.0
    x[1] = 0.0
    x[2] = 0.0
    for k in range(max_iters + 1):
        r = x[0]
        s = x[1]
        t = x[2]
        scaled_cayley(r, s, t, f)
        skew_entries_of_product(f, m, gx)
        if maxabs(gx, 3) <= gt:
            k2 = 2.0 / (1.0 + r * r + s * s + t * t)
            for i in range(9):
                u[i] = k2 * f[i]
            iters[0] = k
            return ST_CONVERGED
        if k == max_iters:
            break
        for p in range(3):
            if p == 0:
                fp[0] = r - 2 * r; fp[1] = -1.0;   fp[2] = t
                fp[3] = 1.0;       fp[4] = r - 2 * r; fp[5] = s
                fp[6] = t;         fp[7] = s;     fp[8] = r
            elif p == 1:
                fp[0] = s - 2 * s; fp[1] = t;     fp[2] = 1.0
                fp[3] = t;         fp[4] = s;     fp[5] = r
                fp[6] = -1.0;      fp[7] = r;     fp[8] = s - 2 * s
            else:
                fp[0] = t;         fp[1] = s;     fp[2] = r
                fp[3] = s;         fp[4] = t - 2 * t; fp[5] = -1.0
                fp[6] = r;         fp[7] = 1.0;   fp[8] = t - 2 * t
            skew_entries_of_product(fp, m, colv)
            set_col(jac, p, colv)
        dj = det3(jac)
        if not fabs(dj) >= jt:
            iters[0] = k
            return ST_SINGULAR
        for p in range(3):
            memcpy(jk, jac, 9 * sizeof(double))
            set_col(jk, p, gx)
            step[p] = det3(jk) / dj
        x[0] -= step[0]
        x[1] -= step[1]
        x[2] -= step[2]
        if not dot3(x, x) <= div_bound * div_bound:
            iters[0] = k + 1
            return ST_DIVERGED
    iters[0] = max_iters
    return ST_LIMIT


cdef void solve_one(const double* m, bint svd_only, int max_iters, double g_tol, double j_guard,
                    double div_bound, double tol, double* u, int* iters, int* status, bint* fell_back) noexcept nogil:
    cdef double u0[9]
    cdef double um[9]
    cdef double sym[9]
    cdef double rr[9]
    cdef double fin[9]
    iters[0] = 0
    fell_back[0] = False
    if svd_only:
        status[0] = ST_SKIPPED
        kabsch(m, u)
        return
    status[0] = newton(m, max_iters, g_tol, j_guard, div_bound, u0, iters)
    if status[0] != ST_CONVERGED:
        fell_back[0] = True
        kabsch(m, u)
        return
    matmul3(u0, m, um)
    symmetrize(um, sym)
    maximize_sym(sym, tol, rr)
    matmul3(rr, u0, u)
    matmul3(u, m, fin)
    if not is_max3(fin, tol):
        fell_back[0] = True
        kabsch(m, u)


cdef inline long long now_ns() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return <long long>ts.tv_sec * 1000000000 + ts.tv_nsec


def solve_batch(ms, bint svd_only=False, int max_iters=50, double g_tolerance=1e-12,
                double jacobian_guard=1e-14, double divergence_bound=1e8,
                double tol=1e-9, bint cross_check=False):
    """Solve every 3x3 matrix in ``ms`` (shape ``(n, 3, 3)``); see ``rotalign.backend``."""
    cdef double[:, :, ::1] mv = np.ascontiguousarray(ms, dtype=np.float64).reshape(-1, 3, 3)
    cdef Py_ssize_t n = mv.shape[0]
    rot_a = np.empty((n, 3, 3))
    tr_a = np.empty(n)
    svd_a = np.full(n, np.nan)
    defect_a = np.empty(n)
    it_a = np.empty(n, dtype=np.int32)
    st_a = np.empty(n, dtype=np.int8)
    fb_a = np.empty(n, dtype=np.bool_)
    max_a = np.empty(n, dtype=np.bool_)
    ns_a = np.empty(n, dtype=np.int64)
    cdef double[:, :, ::1] rot = rot_a
    cdef double[::1] tr = tr_a
    cdef double[::1] svd_tr = svd_a
    cdef double[::1] defect = defect_a
    cdef int[::1] its = it_a
    cdef signed char[::1] sts = st_a
    cdef unsigned char[::1] fbs = fb_a.view(np.uint8)
    cdef unsigned char[::1] mxs = max_a.view(np.uint8)
    cdef long long[::1] nss = ns_a
    cdef double u[9]
    cdef double us[9]
    cdef double fin[9]
    cdef int iters, status
    cdef bint fb
    cdef long long t0
    cdef Py_ssize_t i
    cdef int k
    with nogil:
        for i in range(n):
            t0 = now_ns()
            solve_one(&mv[i, 0, 0], svd_only, max_iters, g_tolerance, jacobian_guard,
                      divergence_bound, tol, u, &iters, &status, &fb)
            matmul3(u, &mv[i, 0, 0], fin)
            nss[i] = now_ns() - t0
            for k in range(9):
                rot[i, k // 3, k % 3] = u[k]
            tr[i] = fin[0] + fin[4] + fin[8]
            defect[i] = sym_defect(fin)
            mxs[i] = is_max3(fin, tol)
            its[i] = iters
            sts[i] = status
            fbs[i] = fb
            if cross_check:
                kabsch(&mv[i, 0, 0], us)
                matmul3(us, &mv[i, 0, 0], fin)
                svd_tr[i] = fin[0] + fin[4] + fin[8]
    return {
        "rotation": rot_a, "trace": tr_a, "trace_svd": svd_a, "symmetry_defect": defect_a,
        "iterations": it_a, "status": st_a, "fell_back": fb_a, "maximal": max_a,
        "wall_time_ns": ns_a,
    }


def spectral_batch(a_arr, double tol=1e-9):
    """Eigenvalues ``(n, 3)``, eigenvector bases ``(n, 3, 3)`` and root case codes ``(n,)``."""
    cdef double[:, :, ::1] av = np.ascontiguousarray(a_arr, dtype=np.float64).reshape(-1, 3, 3)
    cdef Py_ssize_t n = av.shape[0]
    vals_a = np.empty((n, 3))
    basis_a = np.empty((n, 3, 3))
    case_a = np.empty(n, dtype=np.int8)
    cdef double[:, ::1] vals = vals_a
    cdef double[:, :, ::1] basis = basis_a
    cdef signed char[::1] cases = case_a
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            cases[i] = spectral(&av[i, 0, 0], tol, &vals[i, 0], &basis[i, 0, 0])
    return vals_a, basis_a, case_a


def newton_batch(ms, int max_iters=50, double g_tolerance=1e-12, double jacobian_guard=1e-14,
                 double divergence_bound=1e8):
    """Newton symmetrization only: status codes, iteration counts and rotations (NaN on failure)."""
    cdef double[:, :, ::1] mv = np.ascontiguousarray(ms, dtype=np.float64).reshape(-1, 3, 3)
    cdef Py_ssize_t n = mv.shape[0]
    rot_a = np.full((n, 3, 3), np.nan)
    it_a = np.empty(n, dtype=np.int32)
    st_a = np.empty(n, dtype=np.int8)
    cdef double[:, :, ::1] rot = rot_a
    cdef int[::1] its = it_a
    cdef signed char[::1] sts = st_a
    cdef double u[9]
    cdef int iters
    cdef Py_ssize_t i
    cdef int k
    with nogil:
        for i in range(n):
            sts[i] = newton(&mv[i, 0, 0], max_iters, g_tolerance, jacobian_guard, divergence_bound, u, &iters)
            its[i] = iters
            if sts[i] == ST_CONVERGED:
                for k in range(9):
                    rot[i, k // 3, k % 3] = u[k]
    return st_a, it_a, rot_a


def is_maximal_batch(a_arr, double tol=1e-9):
    cdef double[:, :, ::1] av = np.ascontiguousarray(a_arr, dtype=np.float64).reshape(-1, 3, 3)
    cdef Py_ssize_t n = av.shape[0]
    out_a = np.empty(n, dtype=np.bool_)
    cdef unsigned char[::1] out = out_a.view(np.uint8)
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = is_max3(&av[i, 0, 0], tol)
    return out_a
