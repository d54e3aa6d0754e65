"""Graded trapezoid quadrature on cell boundaries.

Each edge gets 2n nodes on an equal slice [0, 2*pi/E] of a global periodic
parameter; the Kress sigmoidal change of variable pushes nodes toward the
edge endpoints so that the weight function vanishes to order sigma-1 at every
vertex.  The left endpoint of each edge is kept as a zero-weight node so the
global parameter grid stays uniform, which the spectral differentiation and
the Nystrom collocation rely on.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "kress_lambda",
    "kress_lambda_prime",
    "BoundaryGrid",
    "build_grid",
    "integrate_boundary",
]


def _check_sigma(sigma):
    if int(sigma) != sigma or sigma < 2:
        raise ValueError(f"grading parameter sigma must be an integer >= 2, got {sigma}")
    return int(sigma)


def kress_lambda(tau, a, b, sigma):
    """Sigmoidal change of variable on [a, b] with grading parameter sigma."""
    sigma = _check_sigma(sigma)
    tau = np.asarray(tau, dtype=float)
    theta = (2.0 * tau - a - b) / (b - a)
    cc = (0.5 - 1.0 / sigma) * theta**3 + theta / sigma + 0.5
    num = cc**sigma
    den = num + (1.0 - cc) ** sigma
    return (b - a) * num / den + a


def kress_lambda_prime(tau, a, b, sigma):
    """Analytic derivative of kress_lambda; roots of order sigma-1 at a and b."""
    sigma = _check_sigma(sigma)
    tau = np.asarray(tau, dtype=float)
    theta = (2.0 * tau - a - b) / (b - a)
    cc = (0.5 - 1.0 / sigma) * theta**3 + theta / sigma + 0.5
    den = cc**sigma + (1.0 - cc) ** sigma
    dcdtheta = 3.0 * (0.5 - 1.0 / sigma) * theta**2 + 1.0 / sigma
    return 2.0 * sigma * cc ** (sigma - 1) * (1.0 - cc) ** (sigma - 1) * dcdtheta / den**2


class BoundaryGrid:
    """Quadrature nodes, geometry samples and weights along a cell boundary.

    Attributes are flat arrays of length N = 2*n*E in counter-clockwise node
    order: global parameter `tau`, boundary points, unit tangents/normals,
    curvature, parameterization speed |x'(t)|, grading derivative `lamprime`,
    jacobian |dy/dtau| = speed*lamprime and ds-weights h*jacobian.
    """

    def __init__(self, cell, n, sigma):
        sigma = _check_sigma(sigma)
        if n < 2:
            raise ValueError(f"size parameter n must be >= 2, got {n}")
        E = cell.num_edges
        m = 2 * n
        L = 2.0 * np.pi / E
        h = L / m

        self.cell = cell
        self.n = int(n)
        self.sigma = sigma
        self.num_edges = E
        self.h = h
        self.N = m * E

        tau_loc = h * np.arange(m)
        t_loc = kress_lambda(tau_loc, 0.0, L, sigma)
        lamp = kress_lambda_prime(tau_loc, 0.0, L, sigma)
        lamp[0] = 0.0  # exact zero at the edge start
        u = t_loc / L

        pts, tans, nrms, kappa, spd = [], [], [], [], []
        for e in cell.edges:
            pts.append(e.point(u))
            tans.append(e.unit_tangent(u))
            nrms.append(e.unit_normal(u))
            kappa.append(e.curvature(u))
            spd.append(e.speed(u) / L)  # speed in the edge parameter t on [0, L]

        self.tau = np.concatenate([i * L + tau_loc for i in range(E)])
        self.t = np.concatenate([i * L + t_loc for i in range(E)])
        self.edge_index = np.repeat(np.arange(E), m)
        self.local_index = np.tile(np.arange(m), E)
        self.points = np.concatenate(pts, axis=0)
        self.tangents = np.concatenate(tans, axis=0)
        self.normals = np.concatenate(nrms, axis=0)
        self.curvature = np.concatenate(kappa)
        self.speed = np.concatenate(spd)
        self.lamprime = np.tile(lamp, E)
        self.jacobian = self.speed * self.lamprime
        self.dsweights = h * self.jacobian

        # vertex bookkeeping: node m*e is the left vertex of edge e
        self.corner_nodes = m * np.arange(E)
        right = m * ((np.arange(E) + 1) % E)
        self.nearest_corner = np.where(
            self.local_index < n, self.corner_nodes[self.edge_index], right[self.edge_index]
        )

        self._memo = {}

    @property
    def perimeter(self):
        return float(np.sum(self.dsweights))

    def __repr__(self):
        return (
            f"BoundaryGrid({self.cell.name}, n={self.n}, sigma={self.sigma}, "
            f"N={self.N})"
        )


def build_grid(cell, n, sigma=7, _with_shift=True):
    """Boundary grid with 2n Kress-graded nodes per edge."""
    grid = BoundaryGrid(cell, n, sigma)
    if _with_shift:
        cell.shift  # materialize the shift point while the cell is known valid
    return grid


def integrate_boundary(samples, grid) -> float:
    """Weighted node sum approximating the boundary integral of the samples."""
    values = np.asarray(getattr(samples, "values", samples), dtype=float)
    if values.shape != (grid.N,):
        raise ValueError(f"expected {grid.N} samples, got shape {values.shape}")
    return float(np.dot(values, grid.dsweights))
