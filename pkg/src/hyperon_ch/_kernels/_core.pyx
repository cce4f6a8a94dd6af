# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled event kernels: a single fused pass from uniforms to cone counts.

Mirrors numpy_impl expression for expression; the two backends must map a
given uniform block to identical events.
"""

from libc.math cimport cos, fabs, log1p, sin, sqrt

cdef double TWO_PI = 6.283185307179586


cdef inline void _pair(const double *row, double alpha, double a2,
                       double *p, double *q) noexcept nogil:
    cdef double z1 = 2.0 * row[0] - 1.0
    cdef double t = 1.0 - z1 * z1
    cdef double r1 = sqrt(t if t > 0.0 else 0.0)
    cdef double phi1 = TWO_PI * row[1]
    cdef double n1x = r1 * cos(phi1)
    cdef double n1y = r1 * sin(phi1)
    cdef double n1z = z1
    cdef double c, disc, s, phi2, inv
    cdef double e1x, e1y, e1z, e2x, e2y, e2z, sc, ss

    if a2 < 1e-6:
        c = 2.0 * row[2] - 1.0
    else:
        disc = 1.0 - a2 * (2.0 - a2 - 4.0 * row[2])
        c = (-1.0 + sqrt(disc)) / a2
        if c < -1.0:
            c = -1.0
        elif c > 1.0:
            c = 1.0
    t = 1.0 - c * c
    s = sqrt(t if t > 0.0 else 0.0)
    phi2 = TWO_PI * row[3]

    if fabs(n1z) <= 0.9:
        inv = 1.0 / sqrt(n1x * n1x + n1y * n1y)
        e1x = -n1y * inv
        e1y = n1x * inv
        e1z = 0.0
    else:
        inv = 1.0 / sqrt(n1y * n1y + n1z * n1z)
        e1x = 0.0
        e1y = -n1z * inv
        e1z = n1y * inv
    e2x = n1y * e1z - n1z * e1y
    e2y = n1z * e1x - n1x * e1z
    e2z = n1x * e1y - n1y * e1x

    sc = s * cos(phi2)
    ss = s * sin(phi2)
    p[0] = n1x
    p[1] = n1y
    p[2] = n1z
    q[0] = sc * e1x + ss * e2x + c * n1x
    q[1] = sc * e1y + ss * e2y + c * n1y
    q[2] = sc * e1z + ss * e2z + c * n1z


def accumulate_counts_into(const double[:, ::1] u, double alpha, double beta,
                           double efficiency, bint spacelike_only,
                           const double[:, ::1] axes, double cos_delta,
                           long long[::1] out):
    """Add [kept, 4 joint, 4 marginal] cone counts for one block into ``out``."""
    cdef Py_ssize_t m = u.shape[0]
    cdef Py_ssize_t i
    cdef double a2 = alpha * alpha
    cdef bint degenerate = beta >= 1.0
    cdef double k = 0.0
    if not degenerate:
        k = (1.0 + beta) / (1.0 - beta)
    cdef double p[3]
    cdef double q[3]
    cdef double x1, x2
    cdef bint in1, in1p, in2, in2p
    cdef long long kept = 0, c12 = 0, c12p = 0, c1p2 = 0, c1p2p = 0
    cdef long long m1 = 0, m1p = 0, m2 = 0, m2p = 0

    with nogil:
        for i in range(m):
            if not (u[i, 6] < efficiency):
                continue
            if spacelike_only and not degenerate:
                x1 = -log1p(-u[i, 4])
                x2 = -log1p(-u[i, 5])
                if not (x1 <= k * x2 and x2 <= k * x1):
                    continue
            _pair(&u[i, 0], alpha, a2, p, q)
            kept += 1
            in1 = p[0] * axes[0, 0] + p[1] * axes[0, 1] + p[2] * axes[0, 2] >= cos_delta
            in1p = p[0] * axes[1, 0] + p[1] * axes[1, 1] + p[2] * axes[1, 2] >= cos_delta
            in2 = q[0] * axes[2, 0] + q[1] * axes[2, 1] + q[2] * axes[2, 2] >= cos_delta
            in2p = q[0] * axes[3, 0] + q[1] * axes[3, 1] + q[2] * axes[3, 2] >= cos_delta
            if in1 and in2:
                c12 += 1
            if in1 and in2p:
                c12p += 1
            if in1p and in2:
                c1p2 += 1
            if in1p and in2p:
                c1p2p += 1
            if in1:
                m1 += 1
            if in1p:
                m1p += 1
            if in2:
                m2 += 1
            if in2p:
                m2p += 1

    out[0] += kept
    out[1] += c12
    out[2] += c12p
    out[3] += c1p2
    out[4] += c1p2p
    out[5] += m1
    out[6] += m1p
    out[7] += m2
    out[8] += m2p


def directions_into(const double[:, ::1] u, double alpha,
                    double[:, ::1] out_p, double[:, ::1] out_pbar):
    """Fill (m, 3) direction arrays from block columns 0..3."""
    cdef Py_ssize_t m = u.shape[0]
    cdef Py_ssize_t i
    cdef double a2 = alpha * alpha
    with nogil:
        for i in range(m):
            _pair(&u[i, 0], alpha, a2, &out_p[i, 0], &out_pbar[i, 0])
