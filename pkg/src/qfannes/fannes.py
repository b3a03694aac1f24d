"""Continuity bound for the Tsallis entropy in trace distance.

For ``q`` in ``[0, 2]`` and two states at trace distance
``eps <= q**(1/(1-q))`` the bound reads

    |S_q(rho1) - S_q(rho2)| <= eps**q ln_q(d) + eta_q(eps),

which at ``q = 1`` is the classical Fannes inequality with radius ``1/e``.
:func:`check_fannes` evaluates both sides together with the intermediate
quantities of the argument (sorted eigenvalue gaps and their sum), and
:func:`sweep` runs the check over random state pairs.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .entropy import spectral_entropy
from .linalg import DensityOperator, _sample_density_matrix, make_rng, trace_norm
from .qfunc import QParam, Regime, as_qparam, eta, fannes_radius, q_log

__all__ = [
    "TOL",
    "ConcavityError",
    "Mode",
    "BoundReport",
    "fannes_bound",
    "within_hypothesis",
    "check_fannes",
    "sorted_eigen_gaps",
    "lemma2_gap_check",
    "pair_seed",
    "sample_pair",
    "TightnessRow",
    "TightnessTable",
    "CSV_HEADER",
    "sweep",
]

TOL = 1e-9
CSV_HEADER = ("q", "d", "samples", "max_ratio", "min_margin", "extremal_seed", "violations")


class ConcavityError(ValueError):
    pass


class Mode(str, enum.Enum):
    WITHIN = "within_hypothesis"
    BEYOND = "beyond_hypothesis"


def _eta_any(x, qp):
    # eta_q(x) = -x**q ln_q(x) extends past x = 1, needed for trace distances up to 2
    if x <= 1.0:
        return eta(x, qp)
    return -_pow(x, qp) * q_log(x, qp)


def _pow(x, qp):
    if x == 0.0:
        return 0.0
    return x**qp.q


def fannes_bound(epsilon: float, d: int, q) -> float:
    """Right-hand side ``eps**q ln_q(d) + eta_q(eps)``.

    Any ``epsilon`` in ``[0, 2]`` is evaluated; the inequality is only
    guaranteed when ``epsilon <= fannes_radius(q)`` and ``q <= 2``.
    """
    qp = as_qparam(q)
    if not 0.0 <= epsilon <= 2.0 + 1e-12:
        raise ValueError(f"epsilon must lie in [0, 2], got {epsilon}")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return _pow(epsilon, qp) * q_log(float(d), qp) + _eta_any(epsilon, qp)


def within_hypothesis(epsilon: float, q) -> bool:
    return epsilon <= fannes_radius(q)


@dataclass(frozen=True)
class BoundReport:
    """Both sides of the continuity bound for one state pair, plus the steps between.

    ``epsilon`` is the trace distance and ``eigen_gap_sum`` the sum of gaps
    between the descending spectra; the second never exceeds the first.  The
    chain checked by :meth:`chain_holds` is

        lhs <= eigenwise_lhs <= eigenwise_rhs <= gap_rhs <= rhs.
    """

    q: QParam
    d: int
    epsilon: float
    eigen_gaps: tuple
    eigen_gap_sum: float
    radius: float
    hypothesis_met: bool
    lhs: float
    rhs: float
    eigenwise_lhs: float
    eigenwise_rhs: float
    gap_rhs: float
    margin: float
    flags: tuple = field(default=())

    @property
    def guaranteed(self) -> bool:
        """True when the bound is a theorem for this pair (not merely evaluated)."""
        return self.hypothesis_met and 0.0 <= self.q.q <= 2.0

    @property
    def ratio(self) -> float:
        if self.rhs == 0.0:
            return 0.0 if self.lhs == 0.0 else math.inf
        return self.lhs / self.rhs

    def chain_holds(self, tol: float = TOL) -> bool:
        steps = (
            self.lhs <= self.eigenwise_lhs + tol,
            self.eigenwise_lhs <= self.eigenwise_rhs + tol,
            self.eigenwise_rhs <= self.gap_rhs + tol,
            self.gap_rhs <= self.rhs + tol,
            self.eigen_gap_sum <= self.epsilon + tol,
            all(g <= self.eigen_gap_sum + tol for g in self.eigen_gaps),
        )
        return all(steps)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["q"] = self.q.q
        out["eigen_gaps"] = list(self.eigen_gaps)
        out["flags"] = list(self.flags)
        out["guaranteed"] = self.guaranteed
        out["ratio"] = self.ratio
        return out


def sorted_eigen_gaps(rho1: DensityOperator, rho2: DensityOperator):
    """Gaps ``|lambda_j(rho1) - lambda_j(rho2)|`` of the descending spectra and their sum."""
    if rho1.dim != rho2.dim:
        raise ValueError(f"dimension mismatch: {rho1.dim} vs {rho2.dim}")
    gaps = np.abs(rho1.eigenvalues - rho2.eigenvalues)
    return gaps, math.fsum(gaps.tolist())


def check_fannes(rho1: DensityOperator, rho2: DensityOperator, q) -> BoundReport:
    qp = as_qparam(q)
    gaps, gap_sum = sorted_eigen_gaps(rho1, rho2)
    d = rho1.dim
    epsilon = trace_norm(rho1.matrix - rho2.matrix)
    radius = fannes_radius(qp)

    lam1 = np.clip(rho1.eigenvalues, 0.0, 1.0)
    lam2 = np.clip(rho2.eigenvalues, 0.0, 1.0)
    eta1 = eta(lam1, qp)
    eta2 = eta(lam2, qp)
    lhs = abs(math.fsum(eta1.tolist()) - math.fsum(eta2.tolist()))
    eigenwise_lhs = math.fsum(np.abs(eta1 - eta2).tolist())
    eigenwise_rhs = spectral_entropy(gaps, qp)
    gap_rhs = fannes_bound(min(gap_sum, 2.0), d, qp)
    rhs = fannes_bound(min(epsilon, 2.0), d, qp)

    flags = []
    if qp.regime is Regime.ZERO:
        flags.append("q_zero")
    if qp.q > 2.0:
        flags.append("q_above_2")
    hypothesis_met = epsilon <= radius
    if not hypothesis_met:
        flags.append("beyond_radius")

    return BoundReport(
        q=qp,
        d=d,
        epsilon=epsilon,
        eigen_gaps=tuple(gaps.tolist()),
        eigen_gap_sum=gap_sum,
        radius=radius,
        hypothesis_met=hypothesis_met,
        lhs=lhs,
        rhs=rhs,
        eigenwise_lhs=eigenwise_lhs,
        eigenwise_rhs=eigenwise_rhs,
        gap_rhs=gap_rhs,
        margin=rhs - lhs,
        flags=tuple(flags),
    )


_GRID = np.linspace(0.0, 1.0, 33)


def _assert_concave(f, tol=1e-12):
    vals = [float(f(x)) for x in _GRID]
    if abs(vals[0]) > tol or abs(vals[-1]) > tol:
        raise ConcavityError(f"f(0)={vals[0]!r}, f(1)={vals[-1]!r}; both must be 0")
    n = len(vals)
    for k in range(1, n - 1):
        for j in range(1, min(k, n - 1 - k) + 1):
            chord = 0.5 * (vals[k - j] + vals[k + j])
            if vals[k] < chord - tol:
                raise ConcavityError(
                    f"midpoint test fails at x={_GRID[k]:.4f} (half-width {_GRID[j]:.4f}): "
                    f"f={vals[k]!r} < chord {chord!r}"
                )


def lemma2_gap_check(f, s: float, t: float):
    """Both sides of ``|f(t+s) - f(t)| <= max(f(s), f(1-s))`` for concave ``f``.

    ``f`` must be concave on ``[0, 1]`` with ``f(0) = f(1) = 0``; this is
    spot-checked by midpoint tests on a 33-point grid, raising
    :class:`ConcavityError` on failure.
    """
    if not (0.0 <= s <= 0.5 and 0.0 <= t <= 1.0 and s + t <= 1.0 + 1e-15):
        raise ValueError(f"need s in [0, 1/2], t in [0, 1], s + t <= 1; got s={s}, t={t}")
    _assert_concave(f)
    lhs = abs(float(f(min(t + s, 1.0))) - float(f(t)))
    rhs = max(float(f(s)), float(f(1.0 - s)))
    return lhs, rhs


# --- sweeps ---------------------------------------------------------------


def pair_seed(seed: int, cell: int, index: int) -> int:
    """64-bit seed for sample ``index`` of sweep cell ``cell``."""
    ss = np.random.SeedSequence([seed, cell, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_pair(d: int, seed):
    """A random state and a second random (raw) density matrix, from one stream.

    Returns ``(rho1, rho2_matrix, u)`` where ``u`` in ``(0, 1]`` sets how far a
    contraction moves the pair inside the hypothesis radius.
    """
    rng = make_rng(seed)
    rho1 = DensityOperator(_sample_density_matrix(d, rng))
    rho2 = _sample_density_matrix(d, rng)
    u = 1.0 - rng.random()
    return rho1, rho2, u


def contract_pair(rho1: DensityOperator, rho2, radius: float, u: float = 1.0):
    """Move ``rho2`` toward ``rho1`` so their trace distance is at most ``radius``.

    Pairs already inside are returned unchanged; others land at distance
    ``radius * u`` (slightly less, to stay clear of rounding at the boundary).
    """
    a2 = rho2.matrix if isinstance(rho2, DensityOperator) else np.asarray(rho2)
    delta = a2 - rho1.matrix
    eps = trace_norm(delta)
    if eps <= radius:
        return rho2 if isinstance(rho2, DensityOperator) else DensityOperator(a2)
    tau = radius * u * (1.0 - 1e-12) / eps
    return DensityOperator(rho1.matrix + tau * delta)


@dataclass
class TightnessRow:
    q: float
    d: int
    samples: int = 0
    max_ratio: float | None = None
    min_margin: float | None = None
    extremal_seed: object = None
    violations: int = 0

    def absorb(self, report: BoundReport, seed_label, mode: Mode):
        self.samples += 1
        ratio = report.ratio
        if self.max_ratio is None or ratio > self.max_ratio:
            self.max_ratio = ratio
            self.extremal_seed = seed_label
        if self.min_margin is None or report.margin < self.min_margin:
            self.min_margin = report.margin
        if mode is Mode.WITHIN:
            if report.guaranteed and not (report.lhs <= report.rhs + TOL and report.chain_holds()):
                self.violations += 1
        elif report.lhs > report.rhs:
            self.violations += 1

    def merge(self, other: "TightnessRow"):
        # other covers later sample indices; ties keep the earlier extremal pair
        self.samples += other.samples
        self.violations += other.violations
        if other.max_ratio is not None and (self.max_ratio is None or other.max_ratio > self.max_ratio):
            self.max_ratio = other.max_ratio
            self.extremal_seed = other.extremal_seed
        if other.min_margin is not None and (self.min_margin is None or other.min_margin < self.min_margin):
            self.min_margin = other.min_margin


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".15g")
    return str(x)


@dataclass
class TightnessTable:
    mode: Mode
    rows: list

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([_fmt(float(r.q)), r.d, r.samples, _fmt(r.max_ratio), _fmt(r.min_margin),
                        _fmt(r.extremal_seed), r.violations])
        return buf.getvalue()

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())

    def row(self, q, d) -> TightnessRow:
        for r in self.rows:
            if r.q == float(q) and r.d == d:
                return r
        raise KeyError((q, d))


def _run_block(args):
    q, d, cell, seed, start, stop, mode, pair_source, extra_pairs = args
    qp = as_qparam(q)
    mode = Mode(mode)
    row = TightnessRow(qp.q, d)
    radius = fannes_radius(qp)
    if mode is Mode.WITHIN and radius == 0.0:
        return row
    source = pair_source or sample_pair
    for k in range(start, stop):
        s = pair_seed(seed, cell, k)
        rho1, rho2, u = source(d, s)
        if mode is Mode.WITHIN:
            rho2 = contract_pair(rho1, rho2, radius, u)
        elif not isinstance(rho2, DensityOperator):
            rho2 = DensityOperator(rho2)
        row.absorb(check_fannes(rho1, rho2, qp), s, mode)
    for i, (rho1, rho2) in enumerate(extra_pairs):
        if rho1.dim != d:
            continue
        if mode is Mode.WITHIN:
            rho2 = contract_pair(rho1, rho2, radius)
        row.absorb(check_fannes(rho1, rho2, qp), f"extra-{i}", mode)
    return row


def sweep(q_grid, d_grid, samples: int, seed: int, mode=Mode.WITHIN, *,
          workers: int = 1, block_size: int = 2500, pair_source=None, extra_pairs=()) -> TightnessTable:
    """Evaluate the bound on random pairs for every ``(q, d)`` combination.

    Sample ``k`` of cell ``c`` (cells enumerate ``q_grid x d_grid`` in order)
    is generated from :func:`pair_seed` ``(seed, c, k)``, so results do not
    depend on ``workers`` or ``block_size``.  In ``within_hypothesis`` mode
    each pair is contracted into the hypothesis region and any failure of the
    bound or of its intermediate chain counts as a violation; in
    ``beyond_hypothesis`` mode pairs are used as drawn and pairs with
    ``lhs > rhs`` are counted.

    ``pair_source(d, seed) -> (rho1, rho2, u)`` replaces the random pair
    generator; ``extra_pairs`` are evaluated in every cell of matching
    dimension after the random samples.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    mode = Mode(mode)
    cells = list(itertools.product([as_qparam(q).q for q in q_grid], [int(d) for d in d_grid]))
    jobs = []
    for c, (q, d) in enumerate(cells):
        for start in range(0, samples, block_size):
            stop = min(start + block_size, samples)
            extra = tuple(extra_pairs) if stop == samples else ()
            jobs.append((c, (q, d, c, seed, start, stop, mode.value, pair_source, extra)))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_block, [j for _, j in jobs]))
    else:
        results = [_run_block(j) for _, j in jobs]

    rows = [TightnessRow(q, d) for q, d in cells]
    for (c, _), part in zip(jobs, results):
        rows[c].merge(part)
    return TightnessTable(mode, rows)
