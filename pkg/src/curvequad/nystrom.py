"""Nystrom discretization of the second-kind boundary integral equation for
interior Neumann problems.

The continuous equation collocated here is, for boundary data g with zero
total flux and unknown Dirichlet trace u of the harmonic solution,

    (u(x) - u(z_c))/2 + int_bd (dG/dn(y) + 1)(u(y) - u(z_c)) ds(y)
        + |bd K| u(z_c) = int_bd G(x, y) g(y) ds(y),

with G(x, y) = -(2 pi)^-1 ln|x-y|.  The subtracted corner value u(z_c) drops
out identically in the continuum (theta(x)/2pi + W[1](x) = 0 on the whole
boundary), so each collocation row may subtract the value at whichever corner
it likes; subtracting at the corner nearest the collocation node makes the
integrand vanish exactly where the kernel is nearly singular, which is what
keeps the graded quadrature accurate on cells with corners.  Corner values
are ordinary unknowns: every vertex is a zero-weight grid node.

The weakly singular single layer on the right is split in the global
periodic parameter as ln|x-y| = (1/2) ln(4 sin^2((s-t)/2)) + smooth
remainder; the singular part uses the classical trigonometric log-kernel
weights and the remainder the plain graded trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import gmres

from .kressquad import BoundaryGrid

__all__ = [
    "kernel_dGdn",
    "log_kernel_weights",
    "double_layer_matrix",
    "single_layer_matrix",
    "single_layer_apply",
    "NeumannProblem",
    "SolveReport",
    "SolverError",
    "CompatibilityError",
    "NystromSolver",
    "solve_neumann",
]


class SolverError(RuntimeError):
    """GMRES failed to reach the requested residual."""


class CompatibilityError(ValueError):
    """Neumann data with non-vanishing total flux."""


def kernel_dGdn(x, y, n_y, diag_curvature=None):
    """Normal derivative (in y) of the Laplace fundamental solution.

    (1/2pi) (x-y).n(y) / |x-y|^2 off the diagonal; at a coincident point the
    continuous limit along the arc, -kappa(y)/(4 pi), is returned and the
    signed curvature must be supplied.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    r2 = np.einsum("...i,...i->...", d, d)
    if np.all(r2 > 0):
        return np.einsum("...i,...i->...", d, np.asarray(n_y, dtype=float)) / (
            2.0 * np.pi * r2
        )
    if diag_curvature is None:
        raise ValueError("coincident points need diag_curvature for the limit value")
    safe = np.where(r2 == 0.0, 1.0, r2)
    off = np.einsum("...i,...i->...", d, np.asarray(n_y, dtype=float)) / (2.0 * np.pi * safe)
    return np.where(r2 == 0.0, -np.asarray(diag_curvature) / (4.0 * np.pi), off)


def log_kernel_weights(N):
    """Quadrature weights R_k for the 2 pi periodic log kernel.

    Sum_j R_{|i-j|} f(s_j) approximates int_0^2pi ln(4 sin^2((s_i - s)/2)) f(s) ds
    on an N-point uniform grid (N even), exactly for trigonometric polynomials
    of degree < N/2.
    """
    if N % 2 != 0:
        raise ValueError("log-kernel weights need an even number of nodes")
    k = np.arange(N)
    m = np.arange(1, N // 2)
    R = -(4.0 * np.pi / N) * (np.cos(2.0 * np.pi * np.outer(k, m) / N) / m).sum(axis=1)
    R -= (4.0 * np.pi / N**2) * np.cos(np.pi * k)
    return R


def double_layer_matrix(grid: BoundaryGrid):
    """Pointwise kernel values dG/dn(y)(x_i, x_j) with continuous diagonal."""
    pts = grid.points
    dx = pts[:, 0, None] - pts[None, :, 0]
    dy = pts[:, 1, None] - pts[None, :, 1]
    r2 = dx * dx + dy * dy
    # distinct nodes whose graded separation underflows double precision:
    # the subtracted density vanishes there, so the limit contribution is 0
    collapsed = r2 == 0.0
    r2[collapsed] = 1.0
    K = (dx * grid.normals[None, :, 0] + dy * grid.normals[None, :, 1]) / (
        2.0 * np.pi * r2
    )
    K[collapsed] = 0.0
    np.fill_diagonal(K, -grid.curvature / (4.0 * np.pi))
    return K


def single_layer_matrix(grid: BoundaryGrid):
    """Dense matrix mapping Neumann data samples g to int G(x_i, y) g ds(y).

    Splits off the periodic logarithmic singularity; the remainder kernel is
    the plain graded trapezoid rule.  Zero-jacobian (vertex) columns vanish.
    """
    key = "single_layer_matrix"
    cached = grid._memo.get(key)
    if cached is not None:
        return cached
    N = grid.N
    pts = grid.points
    dx = pts[:, 0, None] - pts[None, :, 0]
    dy = pts[:, 1, None] - pts[None, :, 1]
    dist = np.sqrt(dx * dx + dy * dy)
    ds = grid.tau[:, None] - grid.tau[None, :]
    trig = np.abs(2.0 * np.sin(0.5 * ds))
    np.fill_diagonal(dist, 1.0)
    np.fill_diagonal(trig, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        M = -np.log(dist / trig) / (2.0 * np.pi)
        diag = np.where(grid.jacobian > 0.0, np.log(grid.jacobian), 0.0)
    np.fill_diagonal(M, -diag / (2.0 * np.pi))
    # distinct nodes can collapse in floating point near corners, and vertex
    # rows/columns hit log(0); all such entries ride on zero-jacobian columns
    # or vanishing densities, so the limit value 0 is consistent
    M[~np.isfinite(M)] = 0.0

    R = log_kernel_weights(N)
    idx = np.abs(np.arange(N)[:, None] - np.arange(N)[None, :])
    S = (-0.25 / np.pi) * R[idx] + grid.h * M
    S *= grid.jacobian[None, :]
    grid._memo[key] = S
    return S


def single_layer_apply(samples, grid: BoundaryGrid):
    """Single-layer potential of the sampled density at all grid nodes."""
    values = np.asarray(getattr(samples, "values", samples), dtype=float)
    if values.shape != (grid.N,):
        raise ValueError(f"expected {grid.N} samples, got shape {values.shape}")
    return single_layer_matrix(grid) @ values


@dataclass
class NeumannProblem:
    """Neumann data g sampled on a boundary grid."""

    grid: BoundaryGrid
    g: np.ndarray

    def __post_init__(self):
        self.g = np.asarray(getattr(self.g, "values", self.g), dtype=float)
        if self.g.shape != (self.grid.N,):
            raise ValueError(
                f"expected {self.grid.N} Neumann samples, got shape {self.g.shape}"
            )


@dataclass
class SolveReport:
    iterations: int
    relative_residual: float
    compatibility_defect: float


@dataclass
class NystromSolver:
    """Assembled Neumann-to-Dirichlet solver for one boundary grid.

    The dense system matrix is grid-only, so one instance amortizes across
    any number of right-hand sides.  Every solve appends its SolveReport to
    `history`.
    """

    grid: BoundaryGrid
    gmres_tol: float = 1e-13
    gmres_maxiter: int = 300
    compat_tol: float = 1e-8
    history: list = field(default_factory=list)

    def __post_init__(self):
        g = self.grid
        W = g.dsweights
        K = double_layer_matrix(g)
        A = (K + 1.0) * W[None, :]
        A[np.arange(g.N), np.arange(g.N)] += 0.5
        # per-row subtraction of the nearest-corner value
        d = 0.5 + K @ W
        A[np.arange(g.N), g.nearest_corner] -= d
        self.matrix = A
        self.slp = single_layer_matrix(g)
        self.perimeter = g.perimeter

    def solve(self, g, tol=None, max_iter=None, enforce_compat=True):
        """Zero-mean Dirichlet trace of the harmonic function with Neumann data g.

        Returns (trace values, SolveReport).  Raises CompatibilityError when
        the total flux of g is too far from zero (unless enforce_compat is
        False, for internally derived data whose flux defect is pure
        quadrature error), SolverError when GMRES does not converge.  The
        flux defect is subtracted uniformly from g in either case.
        """
        grid = self.grid
        g = np.asarray(getattr(g, "values", g), dtype=float)
        if g.shape != (grid.N,):
            raise ValueError(f"expected {grid.N} Neumann samples, got shape {g.shape}")
        tol = self.gmres_tol if tol is None else tol
        max_iter = self.gmres_maxiter if max_iter is None else max_iter

        defect = float(np.dot(g, grid.dsweights))
        if enforce_compat:
            budget = self.compat_tol * (
                1.0 + np.max(np.abs(g), initial=0.0) * self.perimeter
            )
            if abs(defect) > budget:
                raise CompatibilityError(
                    f"Neumann data has total flux {defect:.3e}, above budget {budget:.3e}"
                )
        g = g - defect / self.perimeter

        b = self.slp @ g
        bnorm = np.linalg.norm(b)
        if bnorm == 0.0:
            report = SolveReport(0, 0.0, defect)
            self.history.append(report)
            return np.zeros(grid.N), report

        iters = [0]

        def count(_):
            iters[0] += 1

        try:
            u, info = gmres(
                self.matrix,
                b,
                rtol=tol,
                atol=0.0,
                restart=max_iter,
                maxiter=1,
                callback=count,
                callback_type="pr_norm",
            )
        except TypeError:  # older scipy spells rtol as tol
            u, info = gmres(
                self.matrix,
                b,
                tol=tol,
                atol=0.0,
                restart=max_iter,
                maxiter=1,
                callback=count,
                callback_type="pr_norm",
            )
        relres = float(np.linalg.norm(self.matrix @ u - b) / bnorm)
        if info != 0 and relres > tol * 10.0:
            raise SolverError(
                f"GMRES did not converge in {max_iter} iterations "
                f"(relative residual {relres:.3e})"
            )
        u = u - np.dot(u, grid.dsweights) / self.perimeter
        report = SolveReport(iters[0], relres, defect)
        self.history.append(report)
        return u, report


def default_solver(grid: BoundaryGrid, **opts) -> NystromSolver:
    """Solver for this grid, cached on the grid when built with defaults."""
    if opts:
        return NystromSolver(grid, **opts)
    solver = grid._memo.get("nystrom_solver")
    if solver is None:
        solver = NystromSolver(grid)
        grid._memo["nystrom_solver"] = solver
    return solver


def solve_neumann(problem: NeumannProblem, tol=1e-13, max_iter=300):
    """One-shot Neumann solve; see NystromSolver.solve."""
    solver = default_solver(problem.grid)
    return solver.solve(problem.g, tol=tol, max_iter=max_iter)
