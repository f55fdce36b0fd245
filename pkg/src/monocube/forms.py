"""Restricted Dirichlet form, variance on A, slice restrictions, and exact
verification of the two decomposition identities driving the induction.

Both sides of each identity are computed by structurally different code paths
(global sum vs. split-and-recombine) so a shared bug cannot hide a violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cube import MonotoneSet, SplitPair, split

DEFAULT_TOL = 1e-10
ABS_FLOOR = 1e-14


@dataclass
class SetFunction:
    """A real-valued function on the members of A, in ascending index order."""

    set: MonotoneSet
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.set.size,):
            raise ValueError(
                f"values length {self.values.shape} != |A| = {self.set.size}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("function values must be finite")

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @classmethod
    def constant(cls, A: MonotoneSet, c: float) -> "SetFunction":
        return cls(A, np.full(A.size, float(c)))

    @classmethod
    def dictator(cls, A: MonotoneSet, i: int) -> "SetFunction":
        """f(x) = x_i (coordinate i, 1-based)."""
        if not 1 <= i <= A.n:
            raise ValueError(f"coordinate i={i} out of range for n={A.n}")
        return cls(A, ((A.members >> (i - 1)) & 1).astype(np.float64))

    @classmethod
    def weight(cls, A: MonotoneSet) -> "SetFunction":
        """f(x) = |x|, the Hamming weight."""
        m = A.members
        w = np.zeros(A.size, dtype=np.int64)
        for bit in range(A.n):
            w += (m >> bit) & 1
        return cls(A, w.astype(np.float64))

    @classmethod
    def indicator(cls, A: MonotoneSet, point: int) -> "SetFunction":
        if point not in A:
            raise ValueError(f"point {point} not in A")
        vals = np.zeros(A.size)
        vals[A.rank[point]] = 1.0
        return cls(A, vals)

    @classmethod
    def random(cls, A: MonotoneSet, seed: int | np.random.Generator = 0) -> "SetFunction":
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return cls(A, rng.standard_normal(A.size))


@dataclass
class DecompositionReport:
    """One verified identity: a left-hand side against named right-hand terms."""

    lhs: float
    rhs_terms: dict[str, float]
    residual: float
    relative_residual: float
    tol: float
    within_tol: bool
    extras: dict[str, float] = field(default_factory=dict)

    @property
    def rhs(self) -> float:
        return sum(self.rhs_terms.values())


def _report(lhs: float, rhs_terms: dict[str, float], tol: float, **extras) -> DecompositionReport:
    residual = abs(lhs - sum(rhs_terms.values()))
    rel = residual / max(abs(lhs), ABS_FLOOR)
    return DecompositionReport(
        lhs=lhs,
        rhs_terms=rhs_terms,
        residual=residual,
        relative_residual=rel,
        tol=tol,
        within_tol=rel <= tol,
        extras=dict(extras),
    )


def dirichlet_form(f: SetFunction) -> float:
    """Edge energy of f over hypercube edges with both endpoints in A:
    (1/4) * sum_i E_{x~A}[(f(x) - f(x^i))^2 * 1{x^i in A}].
    """
    A = f.set
    m = A.members
    vals = f.values
    total = 0.0
    for bit in range(A.n):
        nb = m ^ (1 << bit)
        inside = A.member_lookup[nb]
        d = vals[inside] - vals[A.rank[nb[inside]]]
        total += float(np.dot(d, d))
    return total / (4.0 * A.size)


def variance(f: SetFunction) -> float:
    """Variance of f under the uniform measure on A."""
    v = f.values
    d = v - np.mean(v)
    return float(np.dot(d, d)) / v.size


def restrict(f: SetFunction) -> tuple[Optional[SetFunction], SetFunction, SplitPair]:
    """Restrict f to the coordinate-n slices: f0 on A0 (None if A0 empty),
    f1 on A1.  Values stay in ascending x' index order.
    """
    A = f.set
    pair = split(A)
    half = 1 << (A.n - 1)
    low = A.members < half
    f1 = SetFunction(pair.A1, f.values[~low])
    f0 = SetFunction(pair.A0, f.values[low]) if pair.A0 is not None else None
    return f0, f1, pair


def check_dirichlet_decomposition(f: SetFunction, tol: float = DEFAULT_TOL) -> DecompositionReport:
    """E_A(f) = (a1/2a) E_{A1}(f1) + (a0/2a) E_{A0}(f0)
             + (a0/4a) E_{x'~A0}[(f0 - f1)^2].
    """
    lhs = dirichlet_form(f)
    f0, f1, pair = restrict(f)
    a0, a1 = pair.a0, pair.a1
    a = (a0 + a1) / 2.0
    terms = {
        "upper_slice": (a1 / (2 * a)) * dirichlet_form(f1),
        "lower_slice": 0.0,
        "cross": 0.0,
    }
    if f0 is not None:
        terms["lower_slice"] = (a0 / (2 * a)) * dirichlet_form(f0)
        # f1 evaluated on A0 members: A0 is a subset of A1 (monotonicity)
        f1_on_A0 = f1.values[pair.A1.rank[pair.A0.members]]
        d = f0.values - f1_on_A0
        terms["cross"] = (a0 / (4 * a)) * float(np.dot(d, d)) / pair.A0.size
    return _report(lhs, terms, tol)


def check_variance_decomposition(f: SetFunction, tol: float = DEFAULT_TOL) -> DecompositionReport:
    """Var_A[f] = (a1/2a) Var_{A1}[f1] + (a0/2a) Var_{A0}[f0]
               + (a1 a0/(a0+a1)^2) (mu1 - mu0)^2.

    Also checks the equivalent cross-coefficient form
    (a1 a0^2 + a0 a1^2)/(8 a^3); the two agree given a = (a0+a1)/2.
    """
    lhs = variance(f)
    f0, f1, pair = restrict(f)
    a0, a1 = pair.a0, pair.a1
    a = (a0 + a1) / 2.0
    mu1 = f1.mean
    terms = {
        "upper_slice": (a1 / (2 * a)) * variance(f1),
        "lower_slice": 0.0,
        "cross": 0.0,
    }
    extras = {}
    if f0 is not None:
        mu0 = f0.mean
        coef = a1 * a0 / (a0 + a1) ** 2
        coef_alt = (a1 * a0**2 + a0 * a1**2) / (8 * a**3)
        terms["lower_slice"] = (a0 / (2 * a)) * variance(f0)
        terms["cross"] = coef * (mu1 - mu0) ** 2
        extras["coefficient_residual"] = abs(coef - coef_alt)
        extras["mu0"] = mu0
    extras["mu1"] = mu1
    return _report(lhs, terms, tol, **extras)


def poincare_ratio(f: SetFunction) -> Optional[float]:
    """Var_A[f] / E_A(f); None when the Dirichlet form vanishes (constant f
    or no interior edges).
    """
    energy = dirichlet_form(f)
    if energy == 0.0:
        return None
    return variance(f) / energy


def parse_function_description(text: str, A: MonotoneSet) -> SetFunction:
    """Parse a function description for a given set.

    Formats: `dictator i`, `weight`, `indicator p` (p a binary string),
    `random seed`.
    """
    parts = text.split()
    if not parts:
        raise ValueError("empty function description")
    kind = parts[0]
    try:
        if kind == "dictator":
            return SetFunction.dictator(A, int(parts[1]))
        if kind == "weight":
            return SetFunction.weight(A)
        if kind == "indicator":
            return SetFunction.indicator(A, int(parts[1], 2))
        if kind == "random":
            return SetFunction.random(A, int(parts[1]))
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad function description {text!r}: {exc}") from exc
    raise ValueError(f"unknown function kind {kind!r}")
