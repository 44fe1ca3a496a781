"""Matrix exponentials and semigroup growth estimation.

In finite dimension the growth bound omega(M) = lim (1/t) log ||e^{tM}||
coincides with the spectral bound, and the semigroup e^{tM} is entrywise
nonnegative for all t >= 0 exactly when M is essentially nonnegative. Both
facts are checked numerically here.
"""

from dataclasses import dataclass

import numpy as np

from .checks import CheckOutcome
from .errors import OverflowRisk
from .oracle import MAX_ORACLE_DIM, eigenvalues_oracle
from .perron import (
    is_essentially_nonnegative,
    is_resolvent_positive_at,
    spectral_bound,
    square_matrix,
)

TAYLOR_TERMS = 16
SCALE_TARGET = 0.5
SEMIGROUP_POSITIVITY_TOL = 1e-10


@dataclass
class GrowthEstimate:
    """Least-squares growth-rate fit for log ||e^{tM}||_inf samples."""

    omega: float
    t_samples: np.ndarray
    log_norms: np.ndarray
    fit_residual: float


def expm(M, t: float) -> np.ndarray:
    """e^{tM} by scaling and squaring with a degree-16 Taylor kernel.

    tM is halved until its inf-norm is at most 0.5, the truncated series is
    evaluated by Horner's rule, and the result squared back up.
    """
    M = square_matrix(M)
    if t < 0:
        raise ValueError("time must be nonnegative")
    n = M.shape[0]
    X = t * M
    norm = float(np.max(np.abs(X).sum(axis=1)))
    squarings = 0 if norm <= SCALE_TARGET else int(np.ceil(np.log2(norm / SCALE_TARGET)))
    X = X / (2.0**squarings)
    eye = np.eye(n)
    P = eye.copy()
    for j in range(TAYLOR_TERMS, 0, -1):
        P = eye + (X @ P) / j
    for _ in range(squarings):
        P = P @ P
    return P


def positivity_of_semigroup_check(M, t_grid) -> CheckOutcome:
    """Check: e^{tM} >= 0 on the probed times iff M is essentially nonnegative.

    For Metzler inputs the resolvent at spb + 1 is additionally required to be
    entrywise nonnegative; for non-Metzler inputs of oracle size the observed
    resolvent sign is recorded in the detail without being asserted, since a
    single probe point cannot witness resolvent positivity failing.
    """
    M = square_matrix(M)
    t_grid = np.asarray(t_grid, dtype=float)
    if (t_grid <= 0.0).any():
        raise ValueError("probe times must be strictly positive")
    metzler = is_essentially_nonnegative(M)
    min_entry = np.inf
    worst_t = float(t_grid[0])
    for t in t_grid:
        entry = float(expm(M, t).min())
        if entry < min_entry:
            min_entry = entry
            worst_t = float(t)
    semigroup_positive = min_entry >= -SEMIGROUP_POSITIVITY_TOL
    equivalence = semigroup_positive == metzler

    resolvent_ok = True
    notes = []
    if metzler:
        xi = spectral_bound(M).spb + 1.0
        resolvent_ok = is_resolvent_positive_at(M, xi)
        notes.append(f"resolvent at spb+1 positive: {resolvent_ok}")
    elif M.shape[0] <= MAX_ORACLE_DIM:
        xi = float(np.max(eigenvalues_oracle(M).real)) + 1.0
        notes.append(f"observed resolvent positivity at spb+1: {is_resolvent_positive_at(M, xi)}")

    if metzler:
        margin = min_entry + SEMIGROUP_POSITIVITY_TOL
    else:
        margin = -SEMIGROUP_POSITIVITY_TOL - min_entry
    detail = ("Metzler" if metzler else "non-Metzler") + " instance"
    if notes:
        detail += "; " + "; ".join(notes)
    return CheckOutcome(
        passed=bool(equivalence and resolvent_ok),
        margin=float(margin),
        witness={"t": worst_t, "min_entry": min_entry},
        detail=detail,
    )


def growth_bound_estimate(M, t_max: float, k: int) -> GrowthEstimate:
    """Estimate omega(M) from log ||e^{tM}||_inf sampled at t_max * j/k.

    The propagator is accumulated by repeated multiplication with the base
    step e^{(t_max/k) M}, renormalized after every product so the norms live
    in log space and never overflow. The slope is fit on the upper half of the
    window, past the initial transient.
    """
    M = square_matrix(M)
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if k < 4:
        raise ValueError("need at least 4 samples")
    base = expm(M, t_max / k)
    R = np.eye(M.shape[0])
    log_acc = 0.0
    log_norms = np.empty(k)
    for j in range(k):
        R = R @ base
        c = float(np.max(np.abs(R).sum(axis=1)))
        if not np.isfinite(c) or c <= 0.0:
            raise OverflowRisk("propagator norm left the representable range")
        log_acc += np.log(c)
        R = R / c
        log_norms[j] = log_acc
    t_samples = t_max * np.arange(1, k + 1) / k
    fit = t_samples >= 0.5 * t_max
    slope, intercept = np.polyfit(t_samples[fit], log_norms[fit], 1)
    predicted = slope * t_samples[fit] + intercept
    fit_residual = float(np.sqrt(np.mean((predicted - log_norms[fit]) ** 2)))
    return GrowthEstimate(float(slope), t_samples, log_norms, fit_residual)
