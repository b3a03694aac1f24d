"""Pure-Python cyclic Jacobi eigensolver for complex Hermitian matrices.

Mirrors ``_jacobi.pyx`` operation for operation; used when the compiled
extension is unavailable or ``QFANNES_PURE_PYTHON`` is set.
"""

import math

import numpy as np


def jacobi_eigh(a, max_sweeps, rel_tol):
    """Diagonalize the Hermitian matrix ``a``.

    Returns ``(w, v, sweeps, converged, residual, orth_defect)`` with ``w`` in
    Jacobi output order (unsorted) and eigenvectors in the columns of ``v``.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    A = [[complex(a[i, j]) for j in range(n)] for i in range(n)]
    V = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]

    fro = math.sqrt(sum(abs(x) ** 2 for row in A for x in row))
    tol = rel_tol * fro
    # entries below skip are zeroed instead of rotated; this avoids subnormal arithmetic
    skip = 1e-3 * tol / n
    sweeps = 0
    converged = False
    while True:
        off = 0.0
        for p in range(n - 1):
            row = A[p]
            for q in range(p + 1, n):
                x = row[q]
                off += x.real * x.real + x.imag * x.imag
        if math.sqrt(2.0 * off) <= tol:
            converged = True
            break
        if sweeps == max_sweeps:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p][q]
                mag = abs(b)
                app = A[p][p].real
                aqq = A[q][q].real
                if mag <= skip or (abs(app) + 100.0 * mag == abs(app)
                                   and abs(aqq) + 100.0 * mag == abs(aqq)):
                    A[p][q] = 0j
                    A[q][p] = 0j
                    continue
                e = b / mag
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                se = s * e
                sec = se.conjugate()
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = A[k][p]
                    akq = A[k][q]
                    nkp = c * akp - sec * akq
                    nkq = se * akp + c * akq
                    A[k][p] = nkp
                    A[p][k] = nkp.conjugate()
                    A[k][q] = nkq
                    A[q][k] = nkq.conjugate()
                A[p][p] = complex(app - t * mag)
                A[q][q] = complex(aqq + t * mag)
                A[p][q] = 0j
                A[q][p] = 0j
                for k in range(n):
                    vkp = V[k][p]
                    vkq = V[k][q]
                    V[k][p] = c * vkp - sec * vkq
                    V[k][q] = se * vkp + c * vkq

    w = [A[i][i].real for i in range(n)]

    residual = 0.0
    for k in range(n):
        sq = 0.0
        for i in range(n):
            acc = -w[k] * V[i][k]
            for j in range(n):
                acc += a[i, j] * V[j][k]
            sq += acc.real * acc.real + acc.imag * acc.imag
        residual = max(residual, math.sqrt(sq))

    orth = 0.0
    for i in range(n):
        for j in range(i, n):
            acc = 0j
            for k in range(n):
                acc += V[k][i].conjugate() * V[k][j]
            if i == j:
                acc -= 1.0
            orth = max(orth, abs(acc))

    return (
        np.array(w, dtype=float),
        np.array(V, dtype=complex),
        sweeps,
        converged,
        residual,
        orth,
    )
