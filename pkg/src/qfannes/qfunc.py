"""Scalar q-calculus: the q-logarithm, the q-entropy summand and the Fannes radius.

All functions accept either a plain float or a :class:`QParam` for ``q``.
Evaluation is split into three regimes so that nothing degrades as ``q -> 1``:

* ``|q - 1| < NEAR_ONE``: the exact ``q = 1`` closed forms (natural log, ``-x ln x``).
* ``NEAR_ONE <= |q - 1| < EXPM1_BAND``: an ``expm1``-based formulation.
* otherwise the direct power formula.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NEAR_ONE",
    "EXPM1_BAND",
    "Regime",
    "QParam",
    "as_qparam",
    "q_log",
    "eta",
    "fannes_radius",
]

NEAR_ONE = 1e-8
EXPM1_BAND = 1e-4


class Regime(enum.Enum):
    ZERO = "zero"
    NEAR_ONE = "near_one"
    GENERIC = "generic"


@dataclass(frozen=True)
class QParam:
    """Validated entropic index ``q >= 0`` tagged with its evaluation regime."""

    q: float
    regime: Regime = field(init=False, compare=False)

    def __post_init__(self):
        q = float(self.q)
        if not math.isfinite(q):
            raise ValueError(f"q must be finite, got {self.q!r}")
        if q < 0:
            raise ValueError(f"q must be nonnegative, got {q}")
        object.__setattr__(self, "q", q)
        if q == 0.0:
            regime = Regime.ZERO
        elif abs(q - 1.0) < NEAR_ONE:
            regime = Regime.NEAR_ONE
        else:
            regime = Regime.GENERIC
        object.__setattr__(self, "regime", regime)

    def __float__(self):
        return self.q


def as_qparam(q) -> QParam:
    return q if isinstance(q, QParam) else QParam(q)


def _scalar_or_array(values):
    arr = np.asarray(values, dtype=float)
    return arr, arr.ndim == 0


def q_log(x, q):
    """q-logarithm ``(x**(1-q) - 1) / (1 - q)``, the natural log at ``q = 1``.

    ``x`` may be a scalar or an array of positive finite reals.
    """
    qp = as_qparam(q)
    arr, scalar = _scalar_or_array(x)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError("q_log is defined for positive finite x only")
    one_minus_q = 1.0 - qp.q
    if qp.regime is Regime.NEAR_ONE:
        out = np.log(arr)
    elif abs(one_minus_q) < EXPM1_BAND:
        out = np.expm1(one_minus_q * np.log(arr)) / one_minus_q
    else:
        out = (arr**one_minus_q - 1.0) / one_minus_q
    return float(out) if scalar else out


def _eta_scalar(x, qp):
    if not 0.0 <= x <= 1.0:
        raise ValueError("eta is defined on [0, 1] only")
    if x == 0.0:
        return 0.0
    one_minus_q = 1.0 - qp.q
    if qp.regime is Regime.NEAR_ONE:
        return -x * math.log(x)
    if qp.regime is Regime.ZERO:
        return 1.0 - x
    if abs(one_minus_q) < EXPM1_BAND:
        # x**q - x = x * expm1((q - 1) ln x)
        return x * math.expm1(-one_minus_q * math.log(x)) / one_minus_q
    return (x**qp.q - x) / one_minus_q


def eta(x, q):
    """q-entropy summand ``(x**q - x) / (1 - q)`` on ``[0, 1]``.

    Equals ``-x ln x`` at ``q = 1``.  ``eta(0, q) = 0`` for every ``q``, including
    ``q = 0`` where the summand is ``1 - x`` for ``x > 0``.
    """
    qp = as_qparam(q)
    if isinstance(x, (float, int)):
        return _eta_scalar(float(x), qp)
    arr, scalar = _scalar_or_array(x)
    if scalar:
        return _eta_scalar(float(arr), qp)
    if arr.size and not (arr.min() >= 0.0 and arr.max() <= 1.0):
        raise ValueError("eta is defined on [0, 1] only")
    pos = arr > 0
    safe = np.where(pos, arr, 1.0)
    one_minus_q = 1.0 - qp.q
    if qp.regime is Regime.NEAR_ONE:
        vals = -safe * np.log(safe)
    elif qp.regime is Regime.ZERO:
        vals = 1.0 - safe
    elif abs(one_minus_q) < EXPM1_BAND:
        vals = safe * np.expm1(-one_minus_q * np.log(safe)) / one_minus_q
    else:
        vals = (safe**qp.q - safe) / one_minus_q
    return np.where(pos, vals, 0.0)


def fannes_radius(q) -> float:
    """Trace-distance radius ``q**(1/(1-q))`` under which the continuity bound holds.

    Returns ``1/e`` at ``q = 1`` and ``0`` at ``q = 0``.
    """
    qp = as_qparam(q)
    if qp.regime is Regime.ZERO:
        return 0.0
    if qp.regime is Regime.NEAR_ONE:
        return math.exp(-1.0)
    # q - 1 is exact in floating point near 1, so log1p keeps full precision
    return math.exp(math.log1p(qp.q - 1.0) / (1.0 - qp.q))
