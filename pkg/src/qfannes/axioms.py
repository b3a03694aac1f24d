"""Executable axioms for the Tsallis entropy.

Each ``check_*`` function returns the absolute residual of one defining
identity.  The classical checks accept an ``entropy`` callable
``(probabilities, q) -> float`` so that rescaled entropies can be tested
through the same code; the default is the Tsallis entropy itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import spectral_entropy, tsallis_entropy
from .linalg import DensityOperator, ProbVector, make_rng, sample_density, sample_simplex, sample_unitary
from .qfunc import as_qparam

__all__ = [
    "TOLERANCES",
    "BlockState",
    "check_symmetry",
    "check_generalized_additivity",
    "check_reducing_condition",
    "check_mixing",
    "check_unitary_invariance",
    "check_functional_equation",
    "positivity_witness",
    "normalization_constant",
    "AxiomResult",
    "run_axiom_suite",
]

TOLERANCES = {
    "symmetry": 1e-12,
    "generalized_additivity": 1e-12,
    "reducing_condition": 1e-12,
    "mixing": 1e-9,
    "unitary_invariance": 1e-9,
    "functional_equation": 1e-12,
}

_SPLIT_TOL = 1e-12


def _tsallis(p, q):
    return spectral_entropy(p, q)


def _power(x, q):
    # 0**q taken as 0, including q = 0
    return 0.0 if x == 0.0 else x**q


def check_symmetry(p, perm, q, entropy=_tsallis) -> float:
    """``|H(p) - H(p permuted)|``."""
    p = p if isinstance(p, ProbVector) else ProbVector(p)
    perm = np.asarray(perm)
    if perm.shape != (p.n,) or sorted(perm.tolist()) != list(range(p.n)):
        raise ValueError(f"not a permutation of range({p.n}): {perm.tolist()}")
    qp = as_qparam(q)
    return abs(entropy(p.p, qp) - entropy(p.p[perm], qp))


def check_generalized_additivity(p, y: float, z: float, q, entropy=_tsallis) -> float:
    """Residual of splitting the last mass ``p_n = y + z``:

    ``H(p_1..p_{n-1}, y, z) = H(p) + p_n**q H(y/p_n, z/p_n)``.
    """
    p = p if isinstance(p, ProbVector) else ProbVector(p)
    pn = float(p.p[-1])
    if y < 0 or z <= 0:
        raise ValueError(f"need y >= 0 and z > 0, got y={y}, z={z}")
    if abs(y + z - pn) > _SPLIT_TOL:
        raise ValueError(f"y + z = {y + z!r} does not match last component {pn!r}")
    qp = as_qparam(q)
    split = np.concatenate([p.p[:-1], [y, z]])
    rhs = entropy(p.p, qp) + _power(pn, qp.q) * entropy(np.array([y / pn, z / pn]), qp)
    return abs(entropy(split, qp) - rhs)


def check_reducing_condition(p, q, entropy=_tsallis) -> float:
    """``|H(p_1..p_n, 0) - H(p_1..p_n)|``."""
    p = p if isinstance(p, ProbVector) else ProbVector(p)
    qp = as_qparam(q)
    return abs(entropy(np.append(p.p, 0.0), qp) - entropy(p.p, qp))


@dataclass(frozen=True, eq=False)
class BlockState:
    """Weights ``lambda_k`` and blocks ``rho_k`` of a direct sum ``sum_k lambda_k rho_k``."""

    weights: ProbVector
    blocks: tuple

    def __post_init__(self):
        w = self.weights if isinstance(self.weights, ProbVector) else ProbVector(self.weights)
        object.__setattr__(self, "weights", w)
        blocks = tuple(b if isinstance(b, DensityOperator) else DensityOperator(b) for b in self.blocks)
        if len(blocks) != w.n:
            raise ValueError(f"{w.n} weights for {len(blocks)} blocks")
        object.__setattr__(self, "blocks", blocks)

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def assemble(self) -> DensityOperator:
        """Block-diagonal state, blocks in list order along the diagonal."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        i = 0
        for lam, b in zip(self.weights.p, self.blocks):
            out[i:i + b.dim, i:i + b.dim] = lam * b.matrix
            i += b.dim
        return DensityOperator(out)


def check_mixing(state: BlockState, q) -> float:
    """``|S(sum_k lambda_k rho_k) - sum_k lambda_k**q S(rho_k) - H(lambda)|``."""
    qp = as_qparam(q)
    total = tsallis_entropy(state.assemble(), qp).value
    parts = math.fsum(
        _power(lam, qp.q) * tsallis_entropy(b, qp).value for lam, b in zip(state.weights.p, state.blocks)
    )
    return abs(total - parts - spectral_entropy(state.weights.p, qp))


def check_unitary_invariance(rho: DensityOperator, u, q) -> float:
    """``|S(U* rho U) - S(rho)|``."""
    u = np.asarray(u, dtype=complex)
    rotated = u.conj().T @ rho.matrix @ u
    rotated = 0.5 * (rotated + rotated.conj().T)
    return abs(tsallis_entropy(DensityOperator(rotated), q).value - tsallis_entropy(rho, q).value)


def check_functional_equation(x: float, y: float, q, entropy=_tsallis) -> float:
    """Residual of ``t(x) + (1-x)**q t(y/(1-x)) = t(y) + (1-y)**q t(x/(1-y))``
    with ``t(x) = H(x, 1-x)``, for ``x, y`` in ``[0, 1)`` and ``x + y < 1``.
    """
    if not (0.0 <= x < 1.0 and 0.0 <= y < 1.0 and 0.0 < 1.0 - x - y <= 1.0):
        raise ValueError(f"need 0 <= x, y < 1 and x + y < 1; got x={x}, y={y}")
    qp = as_qparam(q)

    def t(v):
        return entropy(np.array([v, 1.0 - v]), qp)

    left = t(x) + _power(1.0 - x, qp.q) * t(y / (1.0 - x))
    right = t(y) + _power(1.0 - y, qp.q) * t(x / (1.0 - y))
    return abs(left - right)


def positivity_witness(q, entropy=_tsallis) -> float:
    """``H(1/2, 1/2)``; positive for every ``q > 0``, so the entropy is not identically 0."""
    return entropy(np.array([0.5, 0.5]), as_qparam(q))


def normalization_constant(entropy, q) -> float:
    """Scale of ``entropy`` relative to the Tsallis entropy, read off the fair coin."""
    return positivity_witness(q, entropy) / positivity_witness(q)


@dataclass(frozen=True)
class AxiomResult:
    check_name: str
    instances: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "instances": self.instances,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _random_q(rng):
    # uniform on (0, 2]
    return 2.0 * (1.0 - rng.random())


def _symmetry_instance(rng):
    n = int(rng.integers(2, 9))
    return check_symmetry(sample_simplex(n, rng), rng.permutation(n), _random_q(rng))


def _additivity_instance(rng):
    n = int(rng.integers(1, 7))
    p = sample_simplex(n, rng)
    pn = float(p.p[-1])
    y = rng.random() * pn
    return check_generalized_additivity(p, y, pn - y, _random_q(rng))


def _reducing_instance(rng):
    return check_reducing_condition(sample_simplex(int(rng.integers(1, 9)), rng), _random_q(rng))


def _mixing_instance(rng):
    n = int(rng.integers(1, 5))
    weights = sample_simplex(n, rng)
    blocks = [sample_density(int(rng.integers(1, 4)), rng) for _ in range(n)]
    return check_mixing(BlockState(weights, blocks), _random_q(rng))


def _unitary_instance(rng):
    d = int(rng.integers(1, 7))
    return check_unitary_invariance(sample_density(d, rng), sample_unitary(d, rng), _random_q(rng))


def _functional_instance(rng):
    x, y, _ = sample_simplex(3, rng).p
    return check_functional_equation(float(x), float(y), _random_q(rng))


_SUITE = (
    ("symmetry", _symmetry_instance),
    ("generalized_additivity", _additivity_instance),
    ("reducing_condition", _reducing_instance),
    ("mixing", _mixing_instance),
    ("unitary_invariance", _unitary_instance),
    ("functional_equation", _functional_instance),
)


def run_axiom_suite(instances: int = 10_000, seed: int = 42, checks=None) -> list:
    """Randomized residual checks with ``q`` uniform on ``(0, 2]``.

    Check ``i`` of the suite draws from its own stream seeded with ``(seed, i)``.
    """
    if instances < 1:
        raise ValueError("instances must be at least 1")
    results = []
    for i, (name, draw) in enumerate(_SUITE):
        if checks is not None and name not in checks:
            continue
        rng = make_rng(np.random.SeedSequence([seed, i]))
        worst = max(draw(rng) for _ in range(instances))
        results.append(AxiomResult(name, instances, worst, TOLERANCES[name]))
    return results
