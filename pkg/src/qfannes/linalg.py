"""Hermitian matrices, density operators and their spectra.

Eigendecompositions go through a cyclic Jacobi solver (compiled when available,
see :mod:`qfannes._kernels`).  Random states are drawn from numpy's PCG64
generator so that a given integer seed reproduces the same state everywhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels

__all__ = [
    "HERMITIAN_TOL",
    "TRACE_TOL",
    "CLAMP_TOL",
    "MAX_SWEEPS",
    "OFFDIAG_TOL",
    "EigenNonConvergence",
    "InvalidDensityError",
    "HermitianMatrix",
    "Spectrum",
    "DensityOperator",
    "ProbVector",
    "hermitian_eigen",
    "trace_norm",
    "make_rng",
    "sample_density",
    "sample_simplex",
    "sample_unitary",
    "validate_density",
    "load_matrix",
    "dump_matrix",
    "parse_matrix",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
CLAMP_TOL = 1e-10
SIMPLEX_TOL = 1e-12
MAX_SWEEPS = 100
OFFDIAG_TOL = 1e-14


class EigenNonConvergence(RuntimeError):
    """Jacobi sweeps hit the iteration cap before the off-diagonal mass vanished."""


class InvalidDensityError(ValueError):
    """A matrix failed a density-operator invariant.

    ``invariant`` names the first violated check: ``"square"``, ``"finite"``,
    ``"hermitian"``, ``"trace"`` or ``"positive"``.
    """

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


def _hermitian_defect(a):
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0, scale


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """A square complex matrix that is Hermitian up to ``HERMITIAN_TOL`` (relative)."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InvalidDensityError("square", f"expected a nonempty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidDensityError("finite", "matrix has non-finite entries")
        defect, scale = _hermitian_defect(a)
        if defect > HERMITIAN_TOL * scale:
            raise InvalidDensityError("hermitian", f"max |A - A*| = {defect:.3e}")
        object.__setattr__(self, "entries", _frozen(a))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted descending (with multiplicity) plus accuracy certificates.

    ``vectors[:, k]`` is the eigenvector for ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    residual: float
    orthonormality_defect: float
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_array(a):
    if isinstance(a, (HermitianMatrix, DensityOperator)):
        return a.matrix if isinstance(a, DensityOperator) else a.entries
    return HermitianMatrix(a).entries


def hermitian_eigen(a) -> Spectrum:
    """Full eigendecomposition of a Hermitian matrix.

    Accepts a :class:`HermitianMatrix` or anything convertible to one.  Raises
    :class:`EigenNonConvergence` after ``MAX_SWEEPS`` Jacobi sweeps.
    """
    arr = _as_array(a)
    w, v, sweeps, converged, residual, orth = _kernels.jacobi_eigh(arr, MAX_SWEEPS, OFFDIAG_TOL)
    if not converged:
        raise EigenNonConvergence(f"no convergence after {MAX_SWEEPS} sweeps (d={arr.shape[0]})")
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = np.ascontiguousarray(v[:, order])
    w.setflags(write=False)
    v.setflags(write=False)
    return Spectrum(w, v, residual, orth, sweeps)


def trace_norm(a) -> float:
    """Trace norm of a Hermitian matrix, i.e. the sum of its absolute eigenvalues."""
    return float(np.sum(np.abs(hermitian_eigen(a).eigenvalues)))


class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix with its spectrum.

    Eigenvalues in ``[-clamp_tol, 0)`` are clamped to zero; if that happens the
    spectrum is renormalized and the matrix rebuilt from it.
    """

    __slots__ = ("matrix", "spectrum")

    def __init__(self, matrix, *, trace_tol=TRACE_TOL, clamp_tol=CLAMP_TOL):
        a = HermitianMatrix(matrix).entries
        tr = float(np.trace(a).real)
        if abs(tr - 1.0) > trace_tol:
            raise InvalidDensityError("trace", f"trace is {tr!r}, expected 1")
        sp = hermitian_eigen(a)
        lam = sp.eigenvalues
        if lam[-1] < -clamp_tol:
            raise InvalidDensityError("positive", f"negative eigenvalue {lam[-1]:.3e}")
        if lam[-1] < 0:
            lam = np.clip(lam, 0.0, None)
            lam = lam / lam.sum()
            lam.setflags(write=False)
            sp = Spectrum(lam, sp.vectors, sp.residual, sp.orthonormality_defect, sp.sweeps)
            a = sp.reconstruct()
            a = _frozen(0.5 * (a + a.conj().T))
        self.matrix = a
        self.spectrum = sp

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    @classmethod
    def diag(cls, values):
        return cls(np.diag(np.asarray(values, dtype=float)))

    def __repr__(self):
        return f"DensityOperator(d={self.dim}, eigenvalues={np.round(self.eigenvalues, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class ProbVector:
    """A point of the probability simplex."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(-1)
        if p.size == 0:
            raise ValueError("probability vector must be nonempty")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("probabilities must be finite and nonnegative")
        if abs(math.fsum(p) - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"probabilities sum to {math.fsum(p)!r}, expected 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.p.size

    def __len__(self):
        return self.p.size

    def __iter__(self):
        return iter(self.p.tolist())


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator from an integer seed; an existing Generator passes through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _ginibre(d, rng):
    return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)


def _sample_density_matrix(d, rng):
    g = _ginibre(d, rng)
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def sample_density(d: int, seed) -> DensityOperator:
    """Random state ``G G* / Tr(G G*)`` with ``G`` a complex Ginibre matrix."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return DensityOperator(_sample_density_matrix(d, make_rng(seed)))


def sample_simplex(n: int, seed) -> ProbVector:
    """Uniform point on the simplex (normalized exponentials)."""
    if n < 1:
        raise ValueError("length must be at least 1")
    x = make_rng(seed).standard_exponential(n)
    x = x / math.fsum(x)
    # push rounding residue into the largest entry so fsum is exactly ~1
    x[np.argmax(x)] += 1.0 - math.fsum(x)
    return ProbVector(x)


def sample_unitary(d: int, seed) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase correction."""
    q, r = np.linalg.qr(_ginibre(d, make_rng(seed)))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def validate_density(raw, tol: float = CLAMP_TOL) -> DensityOperator:
    """Gate for externally supplied matrices.

    Symmetrizes to ``(A + A*)/2`` after the Hermitian check, then enforces unit
    trace and positivity up to ``tol``.  Raises :class:`InvalidDensityError`
    naming the first violated invariant.
    """
    a = HermitianMatrix(raw).entries
    a = 0.5 * (a + a.conj().T)
    return DensityOperator(a, trace_tol=max(tol, TRACE_TOL), clamp_tol=tol)


def parse_matrix(obj) -> np.ndarray:
    """Decode the JSON matrix format ``{"d": int, "entries": [[...], ...]}``.

    Each entry is ``[re, im]`` or a bare real number.
    """
    if not isinstance(obj, dict) or "entries" not in obj:
        raise InvalidDensityError("format", "expected an object with 'd' and 'entries'")
    rows = obj["entries"]
    d = obj.get("d", len(rows))
    if not isinstance(d, int) or d < 1 or len(rows) != d:
        raise InvalidDensityError("square", f"'d'={d!r} does not match {len(rows)} rows")
    out = np.empty((d, d), dtype=complex)
    for i, row in enumerate(rows):
        if len(row) != d:
            raise InvalidDensityError("square", f"row {i} has {len(row)} entries, expected {d}")
        for j, x in enumerate(row):
            if isinstance(x, (int, float)) and not isinstance(x, bool):
                out[i, j] = float(x)
            elif isinstance(x, (list, tuple)) and len(x) == 2:
                out[i, j] = complex(float(x[0]), float(x[1]))
            else:
                raise InvalidDensityError("format", f"entry ({i}, {j}) is neither a number nor [re, im]")
    return out


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidDensityError("format", f"{path}: {exc}") from None
    return parse_matrix(obj)


def dump_matrix(a, path=None) -> str:
    """Encode a matrix in the JSON format; writes to ``path`` when given."""
    a = a.matrix if isinstance(a, DensityOperator) else np.asarray(a, dtype=complex)
    obj = {
        "d": int(a.shape[0]),
        "entries": [[[float(x.real), float(x.imag)] for x in row] for row in a],
    }
    text = json.dumps(obj)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
