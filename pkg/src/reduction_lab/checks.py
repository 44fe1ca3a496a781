"""Sweep drivers and numerical certifiers.

Each checker sweeps a family, tests the asserted inequality on the sampled
grid, and reports a worst-case margin with the witnessing parameters. Margins
are signed slacks: nonnegative (up to the stated tolerance) means the
inequality held.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NonUniformGrid,
    NoSignChange,
    NotIrreducible,
    NotMonotoneOnBracket,
    ReductionLabError,
    ZeroSpectralRadius,
)
from .gallery import KarlinFamily, KingmanFamily, LinearFamily, karlin_matrix, kingman_family_eval
from .matrixio import format_matrix
from .perron import is_irreducible, perron_vectors, spectral_bound, square_matrix

CONVEXITY_TOL = 1e-9
CHECK_TOL = 1e-9
HOMOGENEITY_TOL = 1e-10
DERIVATIVE_TOL = 1e-6
FD_STEP_SCALE = 1e-5

THRESHOLD_VALUE_TOL = 1e-10
THRESHOLD_WIDTH_TOL = 1e-12


def family_digest(kind: str, *matrices) -> str:
    """Short provenance tag for swept families (stable across runs)."""
    blob = kind + "|" + "|".join(format_matrix(M) for M in matrices)
    return f"{kind}:{hashlib.sha1(blob.encode()).hexdigest()[:12]}"


@dataclass
class SweepResult:
    """Sampled parameter-to-spb curve; grid must be strictly increasing, length >= 3."""

    parameter_name: str
    grid: np.ndarray
    values: np.ndarray
    family_digest: str
    uniform: bool = field(init=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape or len(self.grid) < 3:
            raise ValueError("grid and values must be equal-length vectors with >= 3 points")
        diffs = np.diff(self.grid)
        if (diffs <= 0.0).any():
            raise ValueError("grid must be strictly increasing")
        mean = float(diffs.mean())
        self.uniform = bool(np.max(np.abs(diffs - mean)) <= 1e-9 * mean)


@dataclass
class ConvexityReport:
    convex: bool
    worst_violation: float  # most negative second difference, 0 if none
    witness_index: int  # center index of the worst triple
    strictness_margin: float  # minimum second difference


@dataclass
class CheckOutcome:
    passed: bool
    margin: float
    witness: dict[str, float]
    detail: str = ""

    def witness_text(self) -> str:
        return ";".join(f"{k}={v:.9g}" for k, v in self.witness.items())


def _sweep_values(points, evaluate, parameter_name):
    values = []
    for p in points:
        try:
            values.append(spectral_bound(evaluate(p)).spb)
        except ReductionLabError as exc:
            raise type(exc)(f"{exc} (at {parameter_name} = {p})") from exc
    return values


def sweep_spb_in_m(F: LinearFamily, m_grid) -> SweepResult:
    """spb(m*A + V) along a positive m grid."""
    grid = np.asarray(m_grid, dtype=float)
    if (grid <= 0.0).any():
        raise ValueError("m grid must be strictly positive")
    values = _sweep_values(grid, F.matrix_at, "m")
    return SweepResult("m", grid, values, family_digest("linear", F.A, F.V))


def sweep_spb_in_beta(F: LinearFamily, beta_grid) -> SweepResult:
    """spb(A + beta*V) along a beta grid."""
    grid = np.asarray(beta_grid, dtype=float)
    values = _sweep_values(grid, lambda beta: F.matrix_at(1.0, beta), "beta")
    return SweepResult("beta", grid, values, family_digest("linear", F.A, F.V))


def check_midpoint_convexity(S: SweepResult, tol: float = CONVEXITY_TOL) -> ConvexityReport:
    """Second-difference convexity test on a uniform sweep."""
    if not S.uniform:
        raise NonUniformGrid("midpoint convexity needs a uniformly spaced grid")
    v = S.values
    d2 = v[:-2] - 2.0 * v[1:-1] + v[2:]
    scale = max(1.0, float(np.max(np.abs(v))))
    k = int(np.argmin(d2))
    worst = float(d2[k])
    return ConvexityReport(
        convex=bool(worst >= -tol * scale),
        worst_violation=min(worst, 0.0),
        witness_index=k + 1,
        strictness_margin=worst,
    )


def check_monotone_reduction(S: SweepResult, spb_A: float, tol: float = CHECK_TOL) -> CheckOutcome:
    """Certify spb((m+d)A + V) <= spb(mA + V) + d*spb(A) over all grid pairs.

    Also classifies the pairwise slacks: the family must be either strictly
    below the comparison line for every pair, or exactly on it for every pair;
    a mixture beyond tolerance fails.
    """
    if S.parameter_name != "m":
        raise ValueError("monotone reduction expects an m sweep")
    grid, v = S.grid, S.values
    span = float(grid[-1] - grid[0])
    scale = max(1.0, float(np.max(np.abs(v))), abs(spb_A) * span)
    t = tol * scale
    worst = np.inf
    witness = {"m": float(grid[0]), "d": 0.0}
    strict = equal = violations = 0
    for i in range(len(grid) - 1):
        for j in range(i + 1, len(grid)):
            d = float(grid[j] - grid[i])
            slack = float(v[i] + d * spb_A - v[j])
            if slack < worst:
                worst = slack
                witness = {"m": float(grid[i]), "d": d}
            if slack > t:
                strict += 1
            elif slack >= -t:
                equal += 1
            else:
                violations += 1
    mixed = strict > 0 and equal > 0
    if violations:
        detail = "reduction inequality violated"
    elif mixed:
        detail = "mixed strict/equal pairs violate the dichotomy"
    else:
        detail = "strict branch" if strict else "equality branch"
    return CheckOutcome(
        passed=violations == 0 and not mixed,
        margin=worst,
        witness=witness,
        detail=detail,
    )


def derivative_bound_check(F: LinearFamily, m: float, tol: float = DERIVATIVE_TOL) -> CheckOutcome:
    """Central-difference d spb/dm at m must not exceed spb(A)."""
    if m <= 0:
        raise ValueError("derivative probe needs m > 0")
    M = F.matrix_at(m)
    if not is_irreducible(M):
        raise NotIrreducible("derivative bound requires an irreducible family point")
    h = FD_STEP_SCALE * max(1.0, m)
    lo = spectral_bound(F.matrix_at(m - h)).spb
    hi = spectral_bound(F.matrix_at(m + h)).spb
    fd = (hi - lo) / (2.0 * h)
    spb_A = spectral_bound(F.A).spb
    scale = max(1.0, abs(spb_A))
    margin = spb_A - fd
    return CheckOutcome(
        passed=bool(margin >= -tol * scale),
        margin=margin,
        witness={"m": m, "fd": fd},
        detail=f"finite difference {fd:.9g} vs spb(A) {spb_A:.9g}",
    )


def perron_derivative(F: LinearFamily, m: float) -> float:
    """Analytic d spb(mA+V)/dm = u^T A v at the Perron pair of mA + V."""
    M = F.matrix_at(m)
    if not is_irreducible(M):
        raise NotIrreducible("Perron derivative requires an irreducible family point")
    u, v = perron_vectors(M)
    return float(u @ (F.A @ v))


def lindqvist_check(A, D, tol: float = CHECK_TOL) -> CheckOutcome:
    """spb(A + D) - spb(A) >= u(A)^T D v(A) for diagonal D."""
    A = square_matrix(A)
    D = square_matrix(D)
    if A.shape[0] > 1 and (D[~np.eye(D.shape[0], dtype=bool)] != 0.0).any():
        raise ValueError("D must be diagonal")
    if not is_irreducible(A):
        raise NotIrreducible("the inequality requires an irreducible matrix")
    base = spectral_bound(A)
    shifted = spectral_bound(A + D).spb
    rhs = float(base.u @ (np.diagonal(D) * base.v))
    margin = (shifted - base.spb) - rhs
    scale = max(1.0, abs(shifted), abs(base.spb), abs(rhs))
    return CheckOutcome(
        passed=bool(margin >= -tol * scale),
        margin=margin,
        witness={"lhs": shifted - base.spb, "rhs": rhs},
        detail="spb shift vs u^T D v",
    )


def kirkland_check(A, tol: float = CHECK_TOL) -> CheckOutcome:
    """e^T A (u o v) >= spb(A), with equality exactly when e^T A = spb(A) e^T."""
    A = square_matrix(A)
    if not is_irreducible(A):
        raise NotIrreducible("the inequality requires an irreducible matrix")
    data = spectral_bound(A)
    lhs = float(np.sum(A @ (data.u * data.v)))
    margin = lhs - data.spb
    scale = max(1.0, abs(lhs), abs(data.spb))
    t = tol * scale
    at_equality = abs(margin) <= t
    col_tol = tol * max(1.0, float(np.max(np.abs(A))), abs(data.spb))
    col_condition = bool(np.max(np.abs(A.sum(axis=0) - data.spb)) <= col_tol)
    passed = bool(margin >= -t) and (at_equality == col_condition)
    detail = "equality branch" if at_equality else "strict branch"
    if at_equality != col_condition:
        detail = "equality flag disagrees with the column-sum condition"
    return CheckOutcome(
        passed=passed,
        margin=margin,
        witness={"lhs": lhs, "spb": data.spb},
        detail=detail,
    )


def kingman_superconvexity_check(
    F: KingmanFamily, theta_grid, tol: float = CONVEXITY_TOL
) -> ConvexityReport:
    """Midpoint log-convexity of theta -> rho(A(theta)) for a log-affine family."""
    grid = np.asarray(theta_grid, dtype=float)
    values = []
    for theta in grid:
        rho = spectral_bound(kingman_family_eval(F, theta)).spb
        if rho <= 0.0:
            raise ZeroSpectralRadius(f"spectral radius vanished at theta = {theta}")
        values.append(np.log(rho))
    sweep = SweepResult("theta", grid, values, family_digest("kingman", F.c, F.g))
    return check_midpoint_convexity(sweep, tol)


def karlin_monotonicity_check(F: KarlinFamily, alpha_grid, tol: float = CHECK_TOL) -> CheckOutcome:
    """rho([(1-alpha)I + alpha P]D) must not increase along the alpha grid.

    Strict decrease is demanded between consecutive points when D is not an
    exact scalar multiple of I; scalar D must give a constant curve.
    """
    if not is_irreducible(F.P):
        raise NotIrreducible("the monotonicity statement requires irreducible P")
    grid = np.asarray(alpha_grid, dtype=float)
    values = np.array([spectral_bound(karlin_matrix(F, a)).spb for a in grid])
    diag = np.diagonal(F.D)
    scalar = bool((diag == diag[0]).all())
    scale = max(1.0, float(np.max(np.abs(values))))
    t = tol * scale
    if scalar:
        dev = np.abs(values - values[0])
        k = int(np.argmax(dev))
        margin = -float(dev[k])
        return CheckOutcome(
            passed=bool(-margin <= t),
            margin=margin,
            witness={"alpha": float(grid[k])},
            detail="scalar D: curve must be constant",
        )
    drops = values[:-1] - values[1:]
    k = int(np.argmin(drops))
    margin = float(drops[k])
    return CheckOutcome(
        passed=bool(margin > t),
        margin=margin,
        witness={"alpha_lo": float(grid[k]), "alpha_hi": float(grid[k + 1])},
        detail="non-scalar D: strict decrease required",
    )


def homogeneity_check(
    F: LinearFamily, m: float, beta: float, alphas, tol: float = HOMOGENEITY_TOL
) -> CheckOutcome:
    """spb(alpha*(mA + beta V)) = alpha * spb(mA + beta V) for each alpha > 0."""
    alphas = np.asarray(alphas, dtype=float)
    if (alphas <= 0.0).any():
        raise ValueError("scaling factors must be strictly positive")
    M = F.matrix_at(m, beta)
    base = spectral_bound(M).spb
    margin = np.inf
    witness = {"alpha": 0.0, "m": m, "beta": beta}
    for alpha in alphas:
        scaled = spectral_bound(alpha * M).spb
        diff = abs(scaled - alpha * base)
        slack = tol * max(1.0, abs(alpha * base)) - diff
        if slack < margin:
            margin = float(slack)
            witness = {"alpha": float(alpha), "m": m, "beta": beta}
    return CheckOutcome(
        passed=bool(margin >= 0.0),
        margin=margin,
        witness=witness,
        detail="scaling consistency of the spectral bound",
    )


def find_threshold(F: LinearFamily, m_lo: float, m_hi: float, presweep: int = 9) -> float:
    """Bisect spb(m*A + V) = 0 on [m_lo, m_hi].

    A preliminary sweep certifies monotonicity on the bracket; endpoints must
    straddle zero. Bisection stops at |spb| <= 1e-10 or bracket width
    <= 1e-12.
    """
    if not 0.0 < m_lo < m_hi:
        raise ValueError("need 0 < m_lo < m_hi")

    def f(m):
        return spectral_bound(F.matrix_at(m)).spb

    grid = np.linspace(m_lo, m_hi, presweep)
    vals = np.array([f(m) for m in grid])
    slack = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
    if not ((np.diff(vals) <= slack).all() or (np.diff(vals) >= -slack).all()):
        raise NotMonotoneOnBracket("preliminary sweep is not monotone on the bracket")
    f_lo, f_hi = float(vals[0]), float(vals[-1])
    if abs(f_lo) <= THRESHOLD_VALUE_TOL:
        return m_lo
    if abs(f_hi) <= THRESHOLD_VALUE_TOL:
        return m_hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoSignChange("spb has the same sign at both bracket endpoints")
    lo, hi = m_lo, m_hi
    while hi - lo > THRESHOLD_WIDTH_TOL:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) <= THRESHOLD_VALUE_TOL:
            return mid
        if np.sign(fm) == np.sign(f_lo):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def strict_convexity_probe(
    F: LinearFamily, beta_grid, tol: float = CHECK_TOL
) -> ConvexityReport:
    """Probe whether spb(A + beta V) looks strictly convex on the grid.

    Evidence only: strictness_margin > tol*scale suggests strict convexity for
    the instance, a near-zero margin a flat (affine) stretch. Nothing is
    asserted beyond the report.
    """
    if not is_irreducible(F.A):
        raise NotIrreducible("the probe targets irreducible mixing generators")
    sweep = sweep_spb_in_beta(F, beta_grid)
    return check_midpoint_convexity(sweep, tol)
