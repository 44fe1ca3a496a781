"""Operator families and 1-D discretizations.

Everything here constructs matrices for the sweep-and-certify layer: linear
mixing-growth pairs m*A + beta*V, row-stochastic dispersal families
[(1-alpha)I + alpha*P]D, entrywise log-affine families c_ij*exp(g_ij*theta),
and finite-difference / quadrature surrogates of diffusion, drift-diffusion,
and nonlocal dispersal operators. Discretizers produce exactly essentially
nonnegative matrices by construction.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidAlpha, NegativeKernel, NonPositiveDiffusion
from .perron import is_essentially_nonnegative, square_matrix
from .rng import XorShift64Star

STOCHASTIC_ROW_TOL = 1e-12


def _require_diagonal(M, name):
    off = M[~np.eye(M.shape[0], dtype=bool)]
    if M.shape[0] > 1 and (off != 0.0).any():
        raise ValueError(f"{name} must be diagonal (exact zero off-diagonal)")


@dataclass
class LinearFamily:
    """Pair (A, V) defining the family (m, beta) -> m*A + beta*V.

    A is the essentially nonnegative mixing generator, V the diagonal growth
    multiplier; the combination stays essentially nonnegative for every m >= 0.
    """

    A: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        self.A = square_matrix(self.A)
        self.V = square_matrix(self.V)
        if self.A.shape != self.V.shape:
            raise ValueError("A and V must share a common dimension")
        if not is_essentially_nonnegative(self.A):
            raise ValueError("A must be essentially nonnegative")
        _require_diagonal(self.V, "V")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def matrix_at(self, m: float, beta: float = 1.0) -> np.ndarray:
        if m < 0:
            raise ValueError("mixing weight m must be nonnegative")
        return m * self.A + beta * self.V


@dataclass
class KarlinFamily:
    """Row-stochastic dispersal pattern P with positive diagonal growth D."""

    P: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        self.P = square_matrix(self.P)
        self.D = square_matrix(self.D)
        if self.P.shape != self.D.shape:
            raise ValueError("P and D must share a common dimension")
        if (self.P < 0.0).any():
            raise ValueError("P must be entrywise nonnegative")
        rows = self.P.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > STOCHASTIC_ROW_TOL:
            raise ValueError("P must be row-stochastic (rows summing to 1)")
        _require_diagonal(self.D, "D")
        if (np.diagonal(self.D) <= 0.0).any():
            raise ValueError("D must have strictly positive diagonal")

    @property
    def n(self) -> int:
        return self.P.shape[0]


@dataclass
class KingmanFamily:
    """Entrywise log-affine family A_ij(theta) = c_ij * exp(g_ij * theta)."""

    c: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        self.c = square_matrix(self.c)
        self.g = square_matrix(self.g)
        if self.c.shape != self.g.shape:
            raise ValueError("c and g must share a common dimension")
        if (self.c < 0.0).any():
            raise ValueError("c must be entrywise nonnegative")

    @property
    def n(self) -> int:
        return self.c.shape[0]


def kingman_family_eval(F: KingmanFamily, theta: float) -> np.ndarray:
    """Evaluate the family at theta; zero coefficients stay exactly zero."""
    with np.errstate(over="raise"):
        grown = np.exp(F.g * theta)
    return np.where(F.c != 0.0, F.c * grown, 0.0)


def karlin_to_linear(F: KarlinFamily) -> LinearFamily:
    """Rewrite [(1-m)I + mP]D as m*A + V with A = (P - I)D and V = D.

    Row-stochastic P gives (P - I)D the strictly positive right null vector
    formed by the reciprocal growth rates, so spb(A) = 0: these families sit
    exactly on the lossless-mixing boundary. When P is column-stochastic as
    well, the all-ones vector annihilates A from the left too.
    """
    n = F.n
    A = (F.P - np.eye(n)) * np.diagonal(F.D)[None, :]
    return LinearFamily(A=A, V=F.D.copy())


def karlin_matrix(F: KarlinFamily, alpha: float) -> np.ndarray:
    """[(1-alpha)I + alpha*P] @ D for alpha in [0, 1].

    Evaluated as alpha*A + V with (A, V) = karlin_to_linear(F), so that the
    two parameterizations agree entrywise exactly, not merely to rounding.
    """
    if not 0.0 <= alpha <= 1.0:
        raise InvalidAlpha(f"alpha must lie in [0, 1], got {alpha}")
    fam = karlin_to_linear(F)
    return fam.matrix_at(alpha)


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D grid of n interior points on a domain of the given length.

    Spacing is length/(n+1) for dirichlet and neumann boundaries; periodic
    grids cover [0, length) with spacing length/n.
    """

    n: int
    length: float
    boundary: str = "dirichlet"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("grid needs n >= 2 points")
        if not self.length > 0:
            raise ValueError("grid length must be positive")
        if self.boundary not in ("dirichlet", "neumann", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def h(self) -> float:
        if self.boundary == "periodic":
            return self.length / self.n
        return self.length / (self.n + 1)

    @property
    def points(self) -> np.ndarray:
        if self.boundary == "periodic":
            return self.h * np.arange(self.n)
        return self.h * np.arange(1, self.n + 1)


def laplacian_1d(grid: Grid1D) -> np.ndarray:
    """Second-difference operator (1/h^2) tridiag(1, -2, 1) with boundary rows adjusted.

    dirichlet keeps the plain interior stencil (absorbing), neumann sets the
    first/last diagonal to -1/h^2 (reflecting, rows sum to zero exactly),
    periodic adds the corner couplings.
    """
    n = grid.n
    w = 1.0 / (grid.h * grid.h)
    L = np.zeros((n, n))
    idx = np.arange(n)
    L[idx, idx] = -2.0 * w
    L[idx[:-1], idx[:-1] + 1] = w
    L[idx[1:], idx[1:] - 1] = w
    if grid.boundary == "neumann":
        L[0, 0] = -w
        L[n - 1, n - 1] = -w
    elif grid.boundary == "periodic":
        L[0, n - 1] += w
        L[n - 1, 0] += w
    return L


def _sample_on_grid(f, x: np.ndarray, name: str) -> np.ndarray:
    if callable(f):
        vals = np.asarray(f(x), dtype=float)
        if vals.ndim == 0:
            vals = np.full(x.shape, float(vals))
    else:
        vals = np.asarray(f, dtype=float)
        if vals.ndim == 0:
            vals = np.full(x.shape, float(vals))
    if vals.shape != x.shape:
        raise ValueError(f"{name} must evaluate to one value per grid point")
    if not np.isfinite(vals).all():
        raise ValueError(f"{name} produced non-finite samples")
    return vals


def elliptic_1d(a, b, c, grid: Grid1D) -> np.ndarray:
    """Upwind discretization of a(x) f'' + b(x) f' + c(x) f.

    Diffusion uses central differences; drift is upwinded (forward difference
    where b > 0, backward where b < 0), which keeps every off-diagonal entry
    nonnegative regardless of the drift magnitude. Coefficients may be
    callables on the grid points, arrays, or scalars.
    """
    x = grid.points
    av = _sample_on_grid(a, x, "a")
    bv = _sample_on_grid(b, x, "b")
    cv = _sample_on_grid(c, x, "c")
    if (av <= 0.0).any():
        raise NonPositiveDiffusion("diffusion coefficient must be strictly positive on the grid")

    n = grid.n
    M = av[:, None] * laplacian_1d(grid)
    h = grid.h
    periodic = grid.boundary == "periodic"
    neumann = grid.boundary == "neumann"
    for i in range(n):
        bi = bv[i]
        if bi == 0.0:
            continue
        if bi > 0.0:
            j = i + 1
            if j >= n:
                if periodic:
                    j = 0
                elif neumann:
                    continue  # ghost value equals f_i, the difference vanishes
                else:
                    j = -1  # absorbing ghost value 0: only the diagonal remains
        else:
            j = i - 1
            if j < 0:
                if periodic:
                    j = n - 1
                elif neumann:
                    continue
                else:
                    j = -1
        M[i, i] -= abs(bi) / h
        if j >= 0:
            M[i, j] += abs(bi) / h
    M[np.arange(n), np.arange(n)] += cv
    return M


def nonlocal_operator(K, b, grid: Grid1D) -> np.ndarray:
    """Quadrature matrix for f -> integral K(x, y) f(y) dy + b(x) f(x).

    K holds kernel samples on the grid (n x n, entrywise nonnegative) and b
    the diagonal multiplier samples. Weights are the trapezoid rule on the
    interior points, which is uniform w_j = h there; nonnegative weights keep
    the result essentially nonnegative.
    """
    K = np.asarray(K, dtype=float)
    n = grid.n
    if K.shape != (n, n):
        raise ValueError(f"kernel samples must be {n} x {n}")
    if not np.isfinite(K).all():
        raise ValueError("kernel samples must be finite")
    if (K < 0.0).any():
        raise NegativeKernel("kernel samples must be entrywise nonnegative")
    bv = _sample_on_grid(b, grid.points, "b")
    weights = np.full(n, grid.h)
    return K * weights[None, :] + np.diag(bv)


def random_stochastic(n: int, seed: int) -> np.ndarray:
    """Entrywise positive row-stochastic matrix from a seeded xorshift stream."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = XorShift64Star(seed)
    M = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            M[i, j] = rng.uniform_open()
    return M / M.sum(axis=1, keepdims=True)


def random_ess_nonneg(n: int, seed: int) -> np.ndarray:
    """Seeded Metzler matrix: off-diagonal uniform in [0,1), diagonal in [-2,0)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = XorShift64Star(seed)
    M = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                M[i, j] = -2.0 + 2.0 * rng.uniform()
            else:
                M[i, j] = rng.uniform()
    return M


def random_diagonal(n: int, lo: float, hi: float, seed: int) -> np.ndarray:
    """Seeded diagonal matrix with diagonal entries uniform in [lo, hi)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if lo > hi:
        raise ValueError("need lo <= hi")
    rng = XorShift64Star(seed)
    d = np.array([lo + (hi - lo) * rng.uniform() for _ in range(n)])
    return np.diag(d)
