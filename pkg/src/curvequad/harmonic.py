"""Boundary operations on harmonic functions known by their traces.

Everything lives at the quadrature nodes of one boundary grid: tangential
differentiation is global trigonometric differentiation in the periodic
parameter, Dirichlet-to-Neumann goes through the harmonic conjugate, and the
anti-Laplacian construction performs the three Neumann solves that produce a
function Phi with Laplacian(Phi) equal to a given harmonic function.  No
interior values are ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kressquad import BoundaryGrid
from .nystrom import NystromSolver, default_solver

__all__ = [
    "TraceSamples",
    "HarmonicAntiLaplacian",
    "tangential_derivative",
    "harmonic_conjugate",
    "dirichlet_to_neumann",
    "anti_laplacian_harmonic",
]

DIRICHLET = "dirichlet"
NEUMANN = "neumann"
TANGENTIAL = "tangential-derivative"


@dataclass
class TraceSamples:
    """Values of a scalar boundary field at all grid nodes."""

    grid: BoundaryGrid
    values: np.ndarray
    kind: str = DIRICHLET

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.N,):
            raise ValueError(
                f"expected {self.grid.N} node values, got shape {self.values.shape}"
            )
        if self.kind not in (DIRICHLET, NEUMANN, TANGENTIAL):
            raise ValueError(f"unknown trace kind {self.kind!r}")

    def boundary_mean(self):
        return float(np.dot(self.values, self.grid.dsweights) / self.grid.perimeter)


def _fourier_derivative(values):
    """Derivative of a periodic function sampled uniformly on [0, 2 pi)."""
    N = values.shape[0]
    freq = np.fft.fftfreq(N, d=1.0 / N)
    if N % 2 == 0:
        freq[N // 2] = 0.0  # Nyquist mode carries no usable derivative
    return np.fft.ifft(np.fft.fft(values) * 1j * freq).real


def tangential_derivative(f: TraceSamples) -> TraceSamples:
    """Arclength derivative of a boundary trace via global FFT differentiation.

    Vertex nodes, where the parameterization jacobian vanishes, get the value
    0 by convention; they carry zero quadrature weight and are never consumed.
    """
    grid = f.grid
    dds = _fourier_derivative(f.values)
    out = np.zeros(grid.N)
    ok = grid.jacobian > 0.0
    out[ok] = dds[ok] / grid.jacobian[ok]
    return TraceSamples(grid, out, TANGENTIAL)


def harmonic_conjugate(f: TraceSamples, solver: NystromSolver | None = None):
    """Zero-mean Dirichlet trace of a harmonic conjugate of f.

    The conjugate solves the Neumann problem whose data is minus the
    tangential derivative of f.
    """
    if f.kind != DIRICHLET:
        raise ValueError("harmonic_conjugate expects a Dirichlet trace")
    solver = solver or default_solver(f.grid)
    g = -tangential_derivative(f).values
    values, _ = solver.solve(g)
    return TraceSamples(f.grid, values, DIRICHLET)


def dirichlet_to_neumann(f: TraceSamples, solver: NystromSolver | None = None):
    """Neumann trace of the harmonic extension of f.

    The normal derivative of f equals the tangential derivative of its
    harmonic conjugate.
    """
    conj = harmonic_conjugate(f, solver)
    out = tangential_derivative(conj)
    return TraceSamples(f.grid, out.values, NEUMANN)


@dataclass
class HarmonicAntiLaplacian:
    """Boundary data of Phi with Laplacian(Phi) = phi for harmonic phi.

    Carries the node traces of phi, its conjugate, the conjugate potential
    pair (rho, rho_hat), and the derived traces of Phi, dPhi/dn and dPhi/dt.
    All Neumann solves return the zero-mean representative; Phi is then fixed
    only up to a harmonic affine term, which no Green-identity pairing sees.
    """

    grid: BoundaryGrid
    phi: np.ndarray
    phi_hat: np.ndarray
    rho: np.ndarray
    rho_hat: np.ndarray
    phi_values: np.ndarray
    normal_derivative: np.ndarray
    tangential_derivative: np.ndarray

    def conjugate_anti_laplacian_values(self):
        """Trace of the companion Phi_hat = (x1 rho_hat - x2 rho)/4 with
        Laplacian(Phi_hat) = phi_hat."""
        x1, x2 = self.grid.points[:, 0], self.grid.points[:, 1]
        return 0.25 * (x1 * self.rho_hat - x2 * self.rho)


def anti_laplacian_harmonic(
    f: TraceSamples, solver: NystromSolver | None = None, conjugate=None
):
    """Anti-Laplacian of the harmonic function with Dirichlet trace f.

    Three Neumann solves: the conjugate phi_hat from -dphi/dt (skipped when a
    precomputed conjugate trace is passed), then the potentials rho and
    rho_hat of the conservative fields (phi, -phi_hat) and (phi_hat, phi).
    Phi = (x1 rho + x2 rho_hat)/4, and its full boundary gradient

        grad Phi = ((rho + x1 phi + x2 phi_hat), (rho_hat - x1 phi_hat + x2 phi)) / 4

    supplies both dPhi/dn and dPhi/dt without any numerical differentiation.
    """
    if f.kind != DIRICHLET:
        raise ValueError("anti_laplacian_harmonic expects a Dirichlet trace")
    grid = f.grid
    solver = solver or default_solver(grid)
    phi = f.values
    if conjugate is None:
        phi_hat, _ = solver.solve(-tangential_derivative(f).values)
    else:
        phi_hat = np.asarray(getattr(conjugate, "values", conjugate), dtype=float)

    # the potential data is divergence-free in exact arithmetic; its discrete
    # flux defect is quadrature error and is subtracted, not fatal
    n1, n2 = grid.normals[:, 0], grid.normals[:, 1]
    rho, _ = solver.solve(phi * n1 - phi_hat * n2, enforce_compat=False)
    rho_hat, _ = solver.solve(phi_hat * n1 + phi * n2, enforce_compat=False)

    x1, x2 = grid.points[:, 0], grid.points[:, 1]
    values = 0.25 * (x1 * rho + x2 * rho_hat)
    g1 = 0.25 * (rho + x1 * phi + x2 * phi_hat)
    g2 = 0.25 * (rho_hat - x1 * phi_hat + x2 * phi)
    dndir = g1 * n1 + g2 * n2
    dtdir = g1 * grid.tangents[:, 0] + g2 * grid.tangents[:, 1]
    return HarmonicAntiLaplacian(grid, phi, phi_hat, rho, rho_hat, values, dndir, dtdir)
