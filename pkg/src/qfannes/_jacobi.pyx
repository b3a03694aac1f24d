# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi eigensolver for complex Hermitian matrices."""

import numpy as np

from libc.math cimport sqrt, fabs, hypot


cdef inline double cabs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double complex cconj(double complex z) noexcept nogil:
    return z.real - 1j * z.imag


def jacobi_eigh(a, int max_sweeps, double rel_tol):
    """Diagonalize the Hermitian matrix ``a``.

    Returns ``(w, v, sweeps, converged, residual, orth_defect)``; see
    ``_jacobi_py.jacobi_eigh`` for the reference semantics.
    """
    a0 = np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t n = a0.shape[0]
    work = a0.copy()
    vecs = np.eye(n, dtype=np.complex128)
    cdef const double complex[:, ::1] orig = a0
    cdef double complex[:, ::1] A = work
    cdef double complex[:, ::1] V = vecs
    cdef Py_ssize_t p, q, k, i, j
    cdef double fro = 0.0, off, tol, skip, mag, app, aqq, theta, t, c, s, sq
    cdef double residual = 0.0, orth = 0.0
    cdef double complex b, e, se, sec, akp, akq, nkp, nkq, vkp, vkq, acc
    cdef int sweeps = 0
    cdef bint converged = False

    with nogil:
        for i in range(n):
            for j in range(n):
                fro += cabs2(A[i, j])
        fro = sqrt(fro)
        tol = rel_tol * fro
        # entries below skip are zeroed instead of rotated; this avoids subnormal arithmetic
        skip = 1e-3 * tol / n
        while True:
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    off += cabs2(A[p, q])
            if sqrt(2.0 * off) <= tol:
                converged = True
                break
            if sweeps == max_sweeps:
                break
            sweeps += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    b = A[p, q]
                    mag = hypot(b.real, b.imag)
                    app = A[p, p].real
                    aqq = A[q, q].real
                    if mag <= skip or (fabs(app) + 100.0 * mag == fabs(app)
                                       and fabs(aqq) + 100.0 * mag == fabs(aqq)):
                        A[p, q] = 0
                        A[q, p] = 0
                        continue
                    e = b / mag
                    theta = (aqq - app) / (2.0 * mag)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    se = s * e
                    sec = cconj(se)
                    for k in range(n):
                        if k == p or k == q:
                            continue
                        akp = A[k, p]
                        akq = A[k, q]
                        nkp = c * akp - sec * akq
                        nkq = se * akp + c * akq
                        A[k, p] = nkp
                        A[p, k] = cconj(nkp)
                        A[k, q] = nkq
                        A[q, k] = cconj(nkq)
                    A[p, p] = app - t * mag
                    A[q, q] = aqq + t * mag
                    A[p, q] = 0
                    A[q, p] = 0
                    for k in range(n):
                        vkp = V[k, p]
                        vkq = V[k, q]
                        V[k, p] = c * vkp - sec * vkq
                        V[k, q] = se * vkp + c * vkq

        for k in range(n):
            sq = 0.0
            for i in range(n):
                acc = -A[k, k].real * V[i, k]
                for j in range(n):
                    acc = acc + orig[i, j] * V[j, k]
                sq += cabs2(acc)
            sq = sqrt(sq)
            if sq > residual:
                residual = sq

        for i in range(n):
            for j in range(i, n):
                acc = 0
                for k in range(n):
                    acc = acc + cconj(V[k, i]) * V[k, j]
                if i == j:
                    acc = acc - 1.0
                sq = sqrt(cabs2(acc))
                if sq > orth:
                    orth = sq

    w = np.empty(n, dtype=np.float64)
    for i in range(n):
        w[i] = A[i, i].real
    return w, vecs, sweeps, bool(converged), residual, orth
