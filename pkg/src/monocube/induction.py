"""Numeric certification of the scalar inequality suite behind the inductive
argument: the five-point inequality in (a0, a1, alpha, beta, gamma), positive
semidefiniteness of the 2x2 coupling matrix, the square-root identities, the
discriminant of the reduced quadratic, and a search for the best feasible
universal constant c.

All checks are plain double-precision arithmetic with explicitly scaled
tolerances; sweeps and grids are vectorized and fully seeded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .forms import SetFunction, restrict, variance

DEFAULT_C = 0.5
DEFAULT_GRID = 1001
DEFAULT_SEED = 20240901
INEQ_TOL = 1e-12  # scaled by max(|lhs|, |rhs|, 1)


@dataclass(frozen=True)
class InductionParams:
    """The scalar tuple driving the induction-step inequality suite."""

    a0: float
    a1: float
    alpha: float
    beta: float
    gamma: float
    c: float = DEFAULT_C

    def __post_init__(self):
        if not 0.0 <= self.a0 <= self.a1 <= 1.0:
            raise ValueError("need 0 <= a0 <= a1 <= 1")

    @property
    def a(self) -> float:
        return 0.5 * (self.a0 + self.a1)

    @property
    def s(self) -> float:
        return math.sqrt(1.0 - self.a0)

    @property
    def t(self) -> float:
        return math.sqrt(1.0 - self.a1)


@dataclass(frozen=True)
class GMatrix:
    """Symmetric 2x2 coupling matrix; PSD for all 0 <= a0 <= a1 <= 1."""

    g11: float
    g22: float
    g12: float

    @property
    def det(self) -> float:
        return self.g11 * self.g22 - self.g12**2

    @property
    def trace(self) -> float:
        return self.g11 + self.g22


@dataclass(frozen=True)
class QuadCoeffs:
    """Coefficients of the reduced quadratic in T (depend only on a0, a1, c)."""

    coefA: float
    coefB: float
    coefC: float

    def value(self, T: float) -> float:
        return self.coefA * T * T + self.coefB * T + self.coefC

    @property
    def discriminant(self) -> float:
        return self.coefB**2 - 4.0 * self.coefA * self.coefC


def t_parameter(params: InductionParams) -> Optional[float]:
    """T = (alpha-beta)/(alpha-gamma) * (a1-a0); None in the degenerate
    alpha = gamma case (the inequality is trivially true there).
    """
    if params.alpha == params.gamma:
        return None
    return (
        (params.alpha - params.beta)
        / (params.alpha - params.gamma)
        * (params.a1 - params.a0)
    )


def five_point_sides(
    a0, a1, alpha, beta, gamma, c=DEFAULT_C
) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the five-point inequality, vectorized over the inputs.

    lhs = c (sqrt(1-a) - sqrt(1-a1)) (a1-a0) (alpha-beta)^2
          + (a1/2) (gamma-alpha)^2
    rhs = c/(a1+a0) (1 - sqrt(1-a)) [a1 (beta-gamma) + a0 (alpha-beta)]^2
    """
    a0 = np.asarray(a0, dtype=np.float64)
    a1 = np.asarray(a1, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    gamma = np.asarray(gamma, dtype=np.float64)
    r = np.sqrt(1.0 - 0.5 * (a0 + a1))
    t = np.sqrt(1.0 - a1)
    lhs = c * (r - t) * (a1 - a0) * (alpha - beta) ** 2 + 0.5 * a1 * (gamma - alpha) ** 2
    # (1-r)/(a1+a0) = 1/(2(1+r)) exactly; the cancelled form stays finite for
    # subnormal densities (verified separately by sqrt_identities)
    rhs = (
        c
        / (2.0 * (1.0 + r))
        * (a1 * (beta - gamma) + a0 * (alpha - beta)) ** 2
    )
    return lhs, rhs


def five_point(params: InductionParams) -> tuple[float, float, bool]:
    """Evaluate the five-point inequality; holds = lhs >= rhs - scaled tol."""
    if params.a0 == 0.0 and params.a1 == 0.0:
        raise ValueError("degenerate densities: a0 = a1 = 0")
    lhs, rhs = five_point_sides(
        params.a0, params.a1, params.alpha, params.beta, params.gamma, params.c
    )
    lhs, rhs = float(lhs), float(rhs)
    tol = INEQ_TOL * max(abs(lhs), abs(rhs), 1.0)
    return lhs, rhs, lhs >= rhs - tol


def g_matrix(a0: float, a1: float) -> GMatrix:
    if not 0.0 <= a0 <= a1 <= 1.0:
        raise ValueError("need 0 <= a0 <= a1 <= 1")
    r = math.sqrt(1.0 - 0.5 * (a0 + a1))
    s = math.sqrt(1.0 - a0)
    t = math.sqrt(1.0 - a1)
    return GMatrix(
        g11=a0 * (r - s + 1.0) / 2.0,
        g22=a0 * (r - t + 1.0) / 2.0,
        g12=a0 / 2.0,
    )


def _psd_margin_arrays(a0, a1) -> tuple[np.ndarray, np.ndarray]:
    """(product-form margin, factored (s,t)-form margin), vectorized."""
    r = np.sqrt(1.0 - 0.5 * (a0 + a1))
    s = np.sqrt(1.0 - a0)
    t = np.sqrt(1.0 - a1)
    direct = (r - s + 1.0) * (r - t + 1.0) - 1.0
    factored = -0.5 * (s + t - 2.0) * (np.sqrt(2.0) * np.sqrt(s * s + t * t) - s - t)
    return direct, factored


def g_psd_margin(a0: float, a1: float) -> float:
    """det(G) / (a0^2/4): the product (r-s+1)(r-t+1) minus 1, which must be
    nonnegative.  The direct product form and the factored (s,t) form are both
    computed and must agree.
    """
    if not 0.0 <= a0 <= a1 <= 1.0:
        raise ValueError("need 0 <= a0 <= a1 <= 1")
    direct, factored = _psd_margin_arrays(np.float64(a0), np.float64(a1))
    if abs(float(direct) - float(factored)) > 1e-12:
        raise AssertionError(
            f"margin forms disagree: {float(direct)!r} vs {float(factored)!r}"
        )
    return float(direct)


def quad_coeffs(a0: float, a1: float, c: float = DEFAULT_C) -> QuadCoeffs:
    if not 0.0 <= a0 <= a1 <= 1.0:
        raise ValueError("need 0 <= a0 <= a1 <= 1")
    r = math.sqrt(1.0 - 0.5 * (a0 + a1))
    t = math.sqrt(1.0 - a1)
    return QuadCoeffs(
        coefA=c * (1.0 - t),
        coefB=2.0 * c * (r + t) * a1,
        coefC=a1 * (1.0 + r - c * a1) * (r + t),
    )


def _discriminant_arrays(a0, a1, c) -> np.ndarray:
    r = np.sqrt(1.0 - 0.5 * (a0 + a1))
    t = np.sqrt(1.0 - a1)
    A = c * (1.0 - t)
    B = 2.0 * c * (r + t) * a1
    C = a1 * (1.0 + r - c * a1) * (r + t)
    return B * B - 4.0 * A * C


def reduced_discriminant_form(a0, a1) -> np.ndarray:
    """Closed form whose sign matches the c = 0.5 discriminant:
    (sqrt(1-(a0+a1)/2) + 1) * (a1 - 2 + 2 sqrt(1-a1)).
    """
    r = np.sqrt(1.0 - 0.5 * (np.asarray(a0) + np.asarray(a1)))
    t = np.sqrt(1.0 - np.asarray(a1))
    return (r + 1.0) * (np.asarray(a1) - 2.0 + 2.0 * t)


def discriminant(a0: float, a1: float, c: float = DEFAULT_C) -> float:
    """B^2 - 4AC of the reduced quadratic.  At c = 0.5 the sign is also
    checked against the reduced closed form.
    """
    delta = float(_discriminant_arrays(np.float64(a0), np.float64(a1), c))
    if c == 0.5:
        reduced = float(reduced_discriminant_form(a0, a1))
        if (delta > 1e-12 and reduced < -1e-12) or (delta < -1e-12 and reduced > 1e-12):
            raise AssertionError(
                f"sign disagreement: discriminant {delta!r} vs reduced {reduced!r}"
            )
    return delta


def sqrt_identities(a0: float, a1: float) -> tuple[float, float]:
    """Residuals of the two square-root rewrites:
    sqrt(1-a) - sqrt(1-a1) = (a1-a0)/(2 (sqrt(1-a)+sqrt(1-a1)))
    1 - sqrt(1-a)          = (a0+a1)/(2 (1+sqrt(1-a)))

    Each residual is normalized by the stable side's denominator scale
    (r+t and 1+r): the direct differences cancel catastrophically when the
    densities nearly coincide, so a residual relative to the difference
    itself would only measure that cancellation, not the identity.
    """
    if not 0.0 <= a0 <= a1 <= 1.0:
        raise ValueError("need 0 <= a0 <= a1 <= 1")
    r = math.sqrt(1.0 - 0.5 * (a0 + a1))
    t = math.sqrt(1.0 - a1)
    if r + t == 0.0:
        res1 = 0.0  # a0 = a1 = 1: both sides identically 0
    else:
        res1 = abs((r - t) - (a1 - a0) / (2.0 * (r + t))) / (r + t)
    res2 = abs((1.0 - r) - (a0 + a1) / (2.0 * (1.0 + r))) / (1.0 + r)
    return res1, res2


def _triangular_grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    g = np.linspace(0.0, 1.0, resolution)
    a0, a1 = np.meshgrid(g, g, indexing="ij")
    keep = a0 <= a1
    return a0[keep], a1[keep]


def psd_margin_grid(resolution: int = DEFAULT_GRID) -> tuple[float, tuple[float, float]]:
    """Min of the PSD margin over the triangular (a0, a1) grid, with argmin."""
    a0, a1 = _triangular_grid(resolution)
    direct, factored = _psd_margin_arrays(a0, a1)
    if np.max(np.abs(direct - factored)) > 1e-12:
        raise AssertionError("margin forms disagree on the grid")
    i = int(np.argmin(direct))
    return float(direct[i]), (float(a0[i]), float(a1[i]))


def discriminant_grid(
    resolution: int = DEFAULT_GRID, c: float = DEFAULT_C
) -> tuple[float, tuple[float, float]]:
    """Max of B^2 - 4AC over the triangular grid, with argmax."""
    a0, a1 = _triangular_grid(resolution)
    delta = _discriminant_arrays(a0, a1, c)
    if c == 0.5:
        reduced = reduced_discriminant_form(a0, a1)
        bad = ((delta > 1e-12) & (reduced < -1e-12)) | (
            (delta < -1e-12) & (reduced > 1e-12)
        )
        if np.any(bad):
            raise AssertionError("reduced-form sign disagreement on the grid")
    i = int(np.argmax(delta))
    return float(delta[i]), (float(a0[i]), float(a1[i]))


@dataclass
class SweepResult:
    draws: int
    seed: int
    c: float
    violations: int
    worst_margin: float
    witness: Optional[dict] = None


def five_point_sweep(
    draws: int, c: float = DEFAULT_C, seed: int = DEFAULT_SEED
) -> SweepResult:
    """Seeded random sweep of the five-point inequality: a0 <= a1 uniform on
    [0,1]^2, alpha, beta, gamma uniform on [-1,1].
    """
    rng = np.random.default_rng(seed)
    u = rng.random((2, draws))
    a0 = np.minimum(u[0], u[1])
    a1 = np.maximum(u[0], u[1])
    abg = rng.uniform(-1.0, 1.0, size=(3, draws))
    lhs, rhs = five_point_sides(a0, a1, abg[0], abg[1], abg[2], c)
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    margin = (lhs - rhs) / scale
    bad = margin < -INEQ_TOL
    violations = int(np.count_nonzero(bad))
    i = int(np.argmin(margin))
    witness = None
    if violations:
        j = int(np.argmin(np.where(bad, margin, np.inf)))
        witness = {
            "a0": float(a0[j]),
            "a1": float(a1[j]),
            "alpha": float(abg[0, j]),
            "beta": float(abg[1, j]),
            "gamma": float(abg[2, j]),
            "lhs": float(lhs[j]),
            "rhs": float(rhs[j]),
        }
    return SweepResult(
        draws=draws,
        seed=seed,
        c=c,
        violations=violations,
        worst_margin=float(margin[i]),
        witness=witness,
    )


def feasible_c(
    c: float,
    grid_resolution: int = DEFAULT_GRID,
    draws: int = 100_000,
    seed: int = DEFAULT_SEED,
) -> tuple[bool, Optional[dict]]:
    """Feasibility predicate for the constant c: the discriminant stays
    nonpositive on the grid and the seeded five-point sweep has no violation.
    Returns (feasible, witness-of-infeasibility).
    """
    max_delta, argmax = discriminant_grid(grid_resolution, c)
    if max_delta > 1e-12:
        return False, {"kind": "discriminant", "a0": argmax[0], "a1": argmax[1], "delta": max_delta}
    sweep = five_point_sweep(draws, c, seed)
    if sweep.violations:
        witness = dict(sweep.witness or {})
        witness["kind"] = "five_point"
        return False, witness
    return True, None


def best_feasible_c(
    grid_resolution: int = DEFAULT_GRID,
    draws: int = 100_000,
    seed: int = DEFAULT_SEED,
    iterations: int = 40,
) -> float:
    """Largest feasible c found by bisection on [0.5, 1].

    c = 0.5 is verified feasible first; the supremum over all (a0, a1) is
    exactly 0.5 (attained in the a1 -> 0 limit), so on any finite grid the
    answer is slightly above it.
    """
    if grid_resolution < 100:
        raise ValueError("grid_resolution must be >= 100")
    lo, hi = 0.5, 1.0
    ok, witness = feasible_c(lo, grid_resolution, draws, seed)
    if not ok:
        raise AssertionError(f"c = 0.5 infeasible, implementation bug: {witness}")
    if feasible_c(hi, grid_resolution, draws, seed)[0]:
        return hi
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if feasible_c(mid, grid_resolution, draws, seed)[0]:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class JensenReport:
    lhs_full: float
    lhs_averaged: float
    rhs: float
    alpha: float
    beta: float
    gamma: float
    var_f1_closed_form_residual: float


def _restricted_lhs(var1, var0, cross, a0, a1, c) -> float:
    r = math.sqrt(1.0 - 0.5 * (a0 + a1))
    s = math.sqrt(1.0 - a0)
    t = math.sqrt(1.0 - a1)
    return c * a1 * (r - t) * var1 + c * a0 * (r - s) * var0 + 0.5 * a0 * cross


def jensen_reduction_check(f: SetFunction, c: float = DEFAULT_C) -> JensenReport:
    """Compare the left-hand side of the restricted inequality for the actual
    f against the piecewise-averaged f (f1 -> alpha on A0, beta on A1 minus A0;
    f0 -> gamma).  Averaging can only decrease the left side and leaves the
    right side unchanged.
    """
    if f.set.n < 2:
        raise ValueError("need n >= 2")
    f0, f1, pair = restrict(f)
    if f0 is None:
        raise ValueError("A0 empty: reduction vacuous")
    a0, a1 = pair.a0, pair.a1
    r = math.sqrt(1.0 - 0.5 * (a0 + a1))

    on_A0 = pair.A1.rank[pair.A0.members]
    in_A0 = np.zeros(pair.A1.size, dtype=bool)
    in_A0[on_A0] = True
    f1_on_A0 = f1.values[on_A0]
    f1_off_A0 = f1.values[~in_A0]

    alpha = float(f1_on_A0.mean())
    beta = float(f1_off_A0.mean()) if f1_off_A0.size else alpha
    gamma = f0.mean

    cross_full = float(np.mean((f0.values - f1_on_A0) ** 2))
    lhs_full = _restricted_lhs(variance(f1), variance(f0), cross_full, a0, a1, c)

    avg1 = np.where(in_A0, alpha, beta)
    var1_avg = float(np.mean((avg1 - avg1.mean()) ** 2))
    cross_avg = (gamma - alpha) ** 2
    lhs_avg = _restricted_lhs(var1_avg, 0.0, cross_avg, a0, a1, c)

    closed = (a1 * a0 - a0 * a0) / (a1 * a1) * (alpha - beta) ** 2
    closed_res = abs(var1_avg - closed)

    mu1, mu0 = f1.mean, f0.mean
    rhs = c * (a1 * a0 / (a0 + a1)) * (1.0 - r) * (mu1 - mu0) ** 2
    return JensenReport(
        lhs_full=lhs_full,
        lhs_averaged=lhs_avg,
        rhs=rhs,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        var_f1_closed_form_residual=closed_res,
    )
