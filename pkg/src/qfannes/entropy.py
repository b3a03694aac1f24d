"""Tsallis entropy of quantum and classical states and the commuting relative entropy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DensityOperator, ProbVector, validate_density
from .qfunc import QParam, as_qparam, eta, q_log

__all__ = [
    "EntropyValue",
    "tsallis_entropy",
    "tsallis_entropy_classical",
    "tsallis_relative_entropy",
    "max_entropy",
    "spectral_entropy",
]


@dataclass(frozen=True)
class EntropyValue:
    """An entropy together with its index and the dimension bound ``ln_q d``.

    The normalization constant is fixed to 1.
    """

    value: float
    q: QParam
    dim_bound: float

    def __float__(self):
        return self.value


def spectral_entropy(values, q) -> float:
    """``sum_i eta_q(values_i)`` for probabilities or eigenvalues, without validation.

    Values are clipped into ``[0, 1]`` to absorb eigensolver roundoff.
    """
    lam = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
    return math.fsum(eta(lam, q).tolist())


def max_entropy(d: int, q) -> float:
    """Largest Tsallis entropy attainable in dimension ``d``: ``ln_q d``."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return q_log(float(d), q)


def tsallis_entropy(rho, q) -> EntropyValue:
    """``S_q(rho) = Tr[eta_q(rho)]``; the von Neumann entropy at ``q = 1``.

    ``rho`` may be a :class:`DensityOperator` or a raw matrix, which is
    validated first.
    """
    qp = as_qparam(q)
    if not isinstance(rho, DensityOperator):
        rho = validate_density(rho)
    return EntropyValue(spectral_entropy(rho.eigenvalues, qp), qp, max_entropy(rho.dim, qp))


def tsallis_entropy_classical(p, q) -> EntropyValue:
    """``H_q(p) = sum_i eta_q(p_i)``; the Shannon entropy at ``q = 1``."""
    qp = as_qparam(q)
    if not isinstance(p, ProbVector):
        p = ProbVector(p)
    return EntropyValue(spectral_entropy(p.p, qp), qp, max_entropy(p.n, qp))


def tsallis_relative_entropy(p, r, q) -> float:
    """Tsallis relative entropy of two commuting states given by their spectra.

    Computed as ``-sum_i p_i ln_q(r_i / p_i)``, which is algebraically
    ``sum_i (p_i - p_i**q r_i**(1-q)) / (1 - q)`` but stays accurate near
    ``q = 1``, where it is the Kullback-Leibler divergence.  Terms with
    ``p_i = 0`` vanish.  If some ``r_i = 0`` while ``p_i > 0`` the result is
    ``math.inf``.
    """
    qp = as_qparam(q)
    p = p if isinstance(p, ProbVector) else ProbVector(p)
    r = r if isinstance(r, ProbVector) else ProbVector(r)
    if p.n != r.n:
        raise ValueError(f"length mismatch: {p.n} vs {r.n}")
    support = p.p > 0
    if np.any(r.p[support] == 0):
        return math.inf
    pp = p.p[support]
    ratio = r.p[support] / pp
    terms = -pp * q_log(ratio, qp)
    return math.fsum(np.atleast_1d(terms).tolist())
