"""The censored random walk on A: from x, propose a uniformly random
coordinate flip and accept iff the neighbor stays in A.

An optional laziness theta mixes a holding probability into every step
(theta = 0 is the bare walk; theta >= 1/2 forces a nonnegative chain spectrum,
which the relaxation-time mixing bound needs -- the full cube at theta = 0 is
bipartite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .cube import MembershipOracle, MonotoneSet, stationary_coordinate_mean
from .spectral import induced_laplacian, second_eigenpair

EXHAUSTIVE_CAP = 4096  # scan all starts up to this set size
MASS_TOL = 1e-12


@dataclass
class CensoredKernel:
    """Transition rule of the censored walk on A with uniform stationary law.

    Either a dense MonotoneSet (exact linear algebra) or a MembershipOracle
    (simulation only) backs the kernel.
    """

    set: Optional[MonotoneSet] = None
    oracle: Optional[MembershipOracle] = None
    theta: float = 0.0

    def __post_init__(self):
        if self.set is None and self.oracle is None:
            raise ValueError("kernel needs a set or an oracle")
        if not 0.0 <= self.theta < 1.0:
            raise ValueError("laziness theta must be in [0, 1)")

    @property
    def n(self) -> int:
        return self.set.n if self.set is not None else self.oracle.n

    def _require_dense(self) -> MonotoneSet:
        if self.set is None:
            raise ValueError("operation requires a dense MonotoneSet kernel")
        return self.set

    @cached_property
    def transition_matrix(self) -> sp.csr_matrix:
        """P = I - (1-theta) L / n; off-diagonal (1-theta)/n on induced edges."""
        A = self._require_dense()
        L = induced_laplacian(A).matrix
        return (sp.eye(A.size, format="csr") - (1.0 - self.theta) / A.n * L).tocsr()

    @cached_property
    def spectral_gap(self) -> float:
        """Chain gap (1-theta) lambda2(L) / n, cross-checked for |A| <= 2048
        against a direct dense eigensolve of P.
        """
        A = self._require_dense()
        if A.size < 2:
            raise ValueError("no spectral gap for singleton")
        lam, _, _, _ = second_eigenpair(induced_laplacian(A))
        gap = (1.0 - self.theta) * lam / A.n
        if A.size <= 2048:
            w = np.linalg.eigvalsh(self.transition_matrix.toarray())
            direct = 1.0 - w[-2]
            if abs(gap - direct) > 1e-9:
                raise AssertionError(
                    f"gap mismatch: formula {gap:.12g} vs eigensolve {direct:.12g}"
                )
        return gap


@dataclass
class MixingReport:
    epsilon: float
    t_mix: int
    start_policy: str  # "exhaustive" | "heuristic"
    gap: float
    t_rel: float
    pi_min: float
    bound_12_4: int  # relaxation-time bound ceil(log(1/(eps*pi_min)) * t_rel)
    tv_trace: list[float] = field(default_factory=list)
    tv_monotone: bool = True


@dataclass
class BoundReport:
    spectral_bound: int
    poincare_bound: int
    gap: float
    gap_lower_bound: float
    pi_min: float


@dataclass
class SimulationResult:
    """Tail occupation statistics of independent simulated chains."""

    chains: int
    steps: int
    tail_steps: int
    coordinate_means: np.ndarray  # (chains, n) tail occupation mean per chain
    finals: list[int]

    @property
    def pooled_means(self) -> np.ndarray:
        return self.coordinate_means.mean(axis=0)

    def standard_errors(self) -> np.ndarray:
        return self.coordinate_means.std(axis=0, ddof=1) / math.sqrt(self.chains)


@dataclass
class ScalingRow:
    n: int
    k: int
    size: int
    density: float
    theta: float
    epsilon: float
    tmix_exact: int
    tmix_policy: str
    gap: float
    bound_spectral: int
    bound_poincare: int


def step(kernel: CensoredKernel, dist: np.ndarray) -> np.ndarray:
    """One application of P to a distribution over the members of A."""
    A = kernel._require_dense()
    dist = np.asarray(dist, dtype=np.float64)
    if dist.shape != (A.size,):
        raise ValueError("distribution length must equal |A|")
    if abs(dist.sum() - 1.0) > MASS_TOL or dist.min() < -MASS_TOL:
        raise ValueError("not a probability distribution on A")
    return kernel.transition_matrix @ dist  # P is symmetric


def _tv_rows(M: np.ndarray, pi: float) -> float:
    """Max over rows of TV(row, uniform)."""
    return 0.5 * float(np.abs(M - pi).sum(axis=1).max())


def chain_gap(kernel: CensoredKernel) -> float:
    """Spectral gap of the chain: (1-theta) * lambda2(L) / n.

    For |A| <= 2048 the gap is cross-checked against a direct dense
    eigensolve of P.
    """
    return kernel.spectral_gap


def tmix_bound(kernel: CensoredKernel, epsilon: float) -> BoundReport:
    """Relaxation-time mixing bound, both with the computed gap and with the
    density-only lower bound gap >= (1-theta)(1-sqrt(1-a))/n.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if kernel.theta < 0.5:
        raise ValueError("laziness required for this bound (theta >= 1/2)")
    A = kernel._require_dense()
    if A.size == 1:
        return BoundReport(0, 0, float("inf"), float("inf"), 1.0)
    gap = kernel.spectral_gap
    gap_lb = (1.0 - kernel.theta) * (1.0 - math.sqrt(1.0 - A.density)) / A.n
    log_term = math.log(1.0 / (epsilon / A.size))
    return BoundReport(
        spectral_bound=math.ceil(log_term / gap),
        poincare_bound=math.ceil(log_term / gap_lb),
        gap=gap,
        gap_lower_bound=gap_lb,
        pi_min=1.0 / A.size,
    )


def exact_tmix(
    kernel: CensoredKernel,
    epsilon: float,
    start_policy: str = "auto",
    max_steps: Optional[int] = None,
) -> MixingReport:
    """Minimal t with worst-start TV distance to uniform <= epsilon.

    Exhaustive policy scans every start (|A| <= 4096) by evolving all rows of
    P^t at once; the heuristic policy evolves only the minimal elements of A
    plus all-ones and its value is a lower-bound estimate of the worst case.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    A = kernel._require_dense()
    if start_policy == "auto":
        start_policy = "exhaustive" if A.size <= EXHAUSTIVE_CAP else "heuristic"
    if start_policy == "exhaustive" and A.size > EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive policy capped at |A| <= {EXHAUSTIVE_CAP}")
    if start_policy not in ("exhaustive", "heuristic"):
        raise ValueError(f"unknown start policy {start_policy!r}")

    pi = 1.0 / A.size
    if A.size == 1:
        return MixingReport(epsilon, 0, start_policy, float("inf"), 0.0, 1.0, 0, [0.0])

    gap = kernel.spectral_gap
    if kernel.theta >= 0.5:
        bound = math.ceil(math.log(A.size / epsilon) / gap)
    else:
        bound = math.ceil(math.log(A.size / epsilon) / gap) * 4  # no TV monotonicity
    if max_steps is None:
        max_steps = bound + 16

    if start_policy == "exhaustive":
        M = np.eye(A.size)
    else:
        starts = list(A.minimal_elements()) + [(1 << A.n) - 1]
        idx = sorted({int(A.rank[s]) for s in starts})
        M = np.zeros((len(idx), A.size))
        M[np.arange(len(idx)), idx] = 1.0

    P = kernel.transition_matrix
    trace = [_tv_rows(M, pi)]
    monotone = True
    t = 0
    while trace[-1] > epsilon:
        if t >= max_steps:
            raise RuntimeError(f"no mixing within {max_steps} steps (TV={trace[-1]:.3g})")
        M = M @ P  # rows evolve as row @ P; P is symmetric
        mass_err = np.abs(M.sum(axis=1) - 1.0).max()
        if mass_err > 1e-12:
            raise AssertionError(f"mass conservation violated: {mass_err:.3e}")
        t += 1
        tv = _tv_rows(M, pi)
        if kernel.theta >= 0.5 and tv > trace[-1] + 1e-12:
            monotone = False
        trace.append(tv)
    return MixingReport(
        epsilon=epsilon,
        t_mix=t,
        start_policy=start_policy,
        gap=gap,
        t_rel=1.0 / gap,
        pi_min=pi,
        bound_12_4=math.ceil(math.log(A.size / epsilon) / gap),
        tv_trace=trace,
        tv_monotone=monotone,
    )


def simulate(
    kernel: CensoredKernel,
    start: int,
    steps: int,
    seed: int,
    chains: int = 1,
    tail_fraction: float = 0.5,
) -> SimulationResult:
    """Simulate independent chains through the membership oracle.

    Deterministic given (seed, chain index): each chain gets its own stream.
    An accepted move is re-checked against the oracle, so a trajectory can
    never leave A.
    """
    oracle = kernel.oracle
    if oracle is None and kernel.set is not None:
        from .cube import oracle_from_set

        oracle = oracle_from_set(kernel.set)
    if oracle is None:
        raise ValueError("simulation requires a membership oracle")
    if not oracle.evaluate(start):
        raise ValueError(f"start point {start} not in A")
    n = oracle.n
    tail_start = steps - max(1, int(steps * tail_fraction))
    means = np.zeros((chains, n))
    finals = []
    coords = np.arange(n, dtype=np.uint64)
    for chain in range(chains):
        rng = np.random.default_rng([seed, chain])
        hold = rng.random(steps) < kernel.theta
        flips = rng.integers(0, n, size=steps)
        x = start
        tail = np.zeros(steps - tail_start, dtype=np.uint64)
        for t in range(steps):
            if not hold[t]:
                y = x ^ (1 << int(flips[t]))
                if oracle.evaluate(y):
                    x = y
            if t >= tail_start:
                tail[t - tail_start] = x
        means[chain] = ((tail[:, None] >> coords) & 1).mean(axis=0)
        finals.append(x)
    return SimulationResult(
        chains=chains,
        steps=steps,
        tail_steps=steps - tail_start,
        coordinate_means=means,
        finals=finals,
    )


def scaling_experiment(
    n_list: list[int],
    theta: float = 0.5,
    epsilon: float = 0.25,
    family: str = "majority",
) -> list[ScalingRow]:
    """Exact mixing times and both bounds for majority sets across odd n."""
    if family != "majority":
        raise ValueError("only the majority threshold family is supported")
    from .cube import threshold_set

    rows = []
    for n in n_list:
        if n % 2 == 0:
            raise ValueError(f"majority needs odd n, got {n}")
        k = (n + 1) // 2
        A = threshold_set(n, k)
        kernel = CensoredKernel(set=A, theta=theta)
        report = exact_tmix(kernel, epsilon)
        bounds = tmix_bound(kernel, epsilon)
        if not (report.t_mix <= bounds.spectral_bound <= bounds.poincare_bound):
            raise AssertionError(f"bound ordering violated at n={n}")
        rows.append(
            ScalingRow(
                n=n,
                k=k,
                size=A.size,
                density=A.density,
                theta=theta,
                epsilon=epsilon,
                tmix_exact=report.t_mix,
                tmix_policy=report.start_policy,
                gap=report.gap,
                bound_spectral=bounds.spectral_bound,
                bound_poincare=bounds.poincare_bound,
            )
        )
    return rows


def analytic_tail_check(
    n: int, k: int, result: SimulationResult, sigmas: float = 3.0
) -> tuple[bool, float, float, float]:
    """Compare pooled coordinate-occupation means against the exact threshold
    stationary mean; (ok, pooled mean, analytic mean, standard error).
    """
    analytic = stationary_coordinate_mean(n, k)
    per_chain = result.coordinate_means.mean(axis=1)  # coordinates are exchangeable
    pooled = float(per_chain.mean())
    se = float(per_chain.std(ddof=1) / math.sqrt(result.chains))
    return abs(pooled - analytic) <= sigmas * se, pooled, analytic, se
