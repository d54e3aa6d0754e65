"""Implicitly defined cell functions and their boundary-reduced inner products.

A member of the local space is described by the data that defines it: a
polynomial Laplacian p (possibly zero) and a Dirichlet trace given per edge
as a polynomial restriction, a pointwise sampler, or zero.  The splitting
into a harmonic part (trace f, Laplacian 0) and a zero-trace part
(Laplacian p) drives the product dispatch:

* gradient products use the harmonic/zero-trace orthogonality, the
  normal-derivative pairing for two harmonic parts, and the anti-Laplacian
  reduction with the split normal derivative for two zero-trace parts;
* L2 products run the full three-pairing Green reduction with the harmonic
  anti-Laplacian construction, with shortcuts when both functions are
  harmonic or one is an explicit polynomial.

Pairings that would multiply a solved trace's tangential derivative are
integrated by parts around the closed boundary, so solved traces enter the
final quadratures undifferentiated; the other factor is differentiated
exactly (polynomial traces and anti-Laplacian packs both have exact boundary
gradients).  Traces given only as samplers fall back to spectral
differentiation.

A Workspace caches, per function, the anti-Laplacians and the Neumann solves
(the expensive part), so assembling a full local matrix costs a handful of
GMRES solves per basis member.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import polyalg
from .harmonic import (
    DIRICHLET,
    TraceSamples,
    anti_laplacian_harmonic,
    tangential_derivative,
)
from .kressquad import BoundaryGrid
from .nystrom import NystromSolver, default_solver
from .polyalg import Poly2, anti_laplacian_poly, poly_mul, poly_volume_integral

__all__ = [
    "VmFunction",
    "Workspace",
    "l2_product",
    "h1_product",
    "assemble_local_matrix",
    "LocalMatrix",
    "make_vertex_fn",
    "make_edge_fn_product",
    "make_arc_linear_fn",
    "make_bubble",
    "from_polynomial",
    "constant_one",
]


class VmFunction:
    """Cell function given by its polynomial Laplacian and Dirichlet trace.

    traces: one spec per edge; each is None (zero trace), a Poly2 evaluated
    at boundary points, a callable mapping an (m, 2) point array to m values,
    or a (sampler, tangential_sampler) pair whose second member returns the
    exact arclength derivative of the trace given points and unit tangents.
    A single spec may be passed for all edges.  `poly` marks the function as
    the restriction of an explicit polynomial (then the Laplacian and the
    traces are derived from it), which unlocks the simpler polynomial-source
    product formula.
    """

    def __init__(self, cell, lap=None, traces=None, degree=None, poly=None, name=""):
        self.cell = cell
        self.name = name
        z = cell.shift
        if poly is not None:
            poly = poly.recenter(z)
            lap = polyalg.poly_laplacian(poly)
            if traces is None:
                traces = poly
        self.poly = poly
        if lap is None:
            lap = Poly2.zero(z)
        elif not isinstance(lap, Poly2):
            lap = Poly2.constant(z, float(lap))
        if lap.center != (float(z[0]), float(z[1])):
            lap = lap.recenter(z)
        self.lap = lap
        if traces is None or isinstance(traces, Poly2) or callable(traces) or (
            isinstance(traces, tuple) and len(traces) == 2 and callable(traces[0])
        ):
            traces = [traces] * cell.num_edges
        if len(traces) != cell.num_edges:
            raise ValueError(f"expected {cell.num_edges} trace specs, got {len(traces)}")
        self.traces = list(traces)
        self.degree = degree

    @property
    def is_harmonic(self):
        return self.lap.is_zero

    @property
    def has_zero_trace(self):
        return all(
            spec is None or (isinstance(spec, Poly2) and spec.is_zero)
            for spec in self.traces
        )

    @property
    def is_polynomial(self):
        return self.poly is not None

    @property
    def has_exact_tangential(self):
        return all(
            spec is None or isinstance(spec, Poly2) or isinstance(spec, tuple)
            for spec in self.traces
        )

    def trace_values(self, grid: BoundaryGrid):
        """Dirichlet trace sampled at all grid nodes."""
        if grid.cell is not self.cell and grid.cell != self.cell:
            raise ValueError("grid was built for a different cell")
        out = np.zeros(grid.N)
        for e, spec in enumerate(self.traces):
            if spec is None:
                continue
            sel = grid.edge_index == e
            pts = grid.points[sel]
            if isinstance(spec, Poly2):
                out[sel] = spec.eval(pts)
            elif isinstance(spec, tuple):
                out[sel] = spec[0](pts)
            else:
                out[sel] = spec(pts)
        return out

    def trace_tangential_values(self, grid: BoundaryGrid):
        """Exact arclength derivative of the trace at the nodes, or None when
        some edge spec cannot provide one.  Vertex nodes are set to 0."""
        if not self.has_exact_tangential:
            return None
        out = np.zeros(grid.N)
        for e, spec in enumerate(self.traces):
            if spec is None:
                continue
            sel = grid.edge_index == e
            pts = grid.points[sel]
            tan = grid.tangents[sel]
            if isinstance(spec, Poly2):
                gx, gy = polyalg.poly_grad(spec)
                out[sel] = gx.eval(pts) * tan[:, 0] + gy.eval(pts) * tan[:, 1]
            else:
                out[sel] = spec[1](pts, tan)
        out[grid.corner_nodes] = 0.0
        return out

    def __repr__(self):
        kind = (
            "polynomial"
            if self.is_polynomial
            else "harmonic"
            if self.is_harmonic
            else "zero-trace"
            if self.has_zero_trace
            else "general"
        )
        return f"VmFunction({self.name or kind}, cell={self.cell.name})"


# -- per-function cached boundary data ---------------------------------------


class _Pack:
    """Lazy traces, anti-Laplacians and Neumann solves for one function.

    The conjugate of any needed harmonic trace is assembled from at most two
    solves (the full trace f and the anti-Laplacian trace P on the boundary),
    using linearity of the conjugation map.
    """

    def __init__(self, v: VmFunction, grid: BoundaryGrid, solver: NystromSolver):
        self.v = v
        self.grid = grid
        self.solver = solver
        self._cache = {}

    def _get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    def _conjugate_of(self, values):
        data = -tangential_derivative(TraceSamples(self.grid, values, DIRICHLET)).values
        out, _ = self.solver.solve(data, enforce_compat=False)
        return out

    @property
    def f(self):
        return self._get("f", lambda: self.v.trace_values(self.grid))

    @property
    def dt_f(self):
        """Exact tangential derivative of the trace, or None."""
        return self._get("dt_f", lambda: self.v.trace_tangential_values(self.grid))

    @property
    def P(self):
        return self._get("P", lambda: anti_laplacian_poly(self.v.lap))

    @property
    def P_trace(self):
        return self._get("P_trace", lambda: self.P.eval(self.grid.points))

    @property
    def dPdn(self):
        return self._get("dPdn", lambda: _poly_dn(self.P, self.grid))

    @property
    def Pstar(self):
        return self._get("Pstar", lambda: anti_laplacian_poly(self.P))

    @property
    def phi(self):
        """Trace of the harmonic remainder v - P."""
        if self.v.is_harmonic:
            return self.f
        return self._get("phi", lambda: self.f - self.P_trace)

    @property
    def conj_f(self):
        """Conjugate trace of the harmonic extension of the full trace f."""
        if self.v.has_zero_trace:
            return np.zeros(self.grid.N)
        return self._get("conj_f", lambda: self._conjugate_of(self.f))

    @property
    def conj_Ptr(self):
        """Conjugate trace of the harmonic extension of P restricted to the
        boundary."""
        if self.v.is_harmonic:
            return np.zeros(self.grid.N)
        return self._get("conj_Ptr", lambda: self._conjugate_of(self.P_trace))

    @property
    def conj_phi(self):
        """Conjugate trace for the harmonic remainder v - P."""
        if self.v.is_harmonic:
            return self.conj_f
        if self.v.has_zero_trace:
            return self._get("conj_phi", lambda: -self.conj_Ptr)
        return self._get("conj_phi", lambda: self.conj_f - self.conj_Ptr)

    @property
    def harmonic_pack(self):
        """Anti-Laplacian construction for the harmonic remainder v - P."""
        return self._get(
            "harmonic_pack",
            lambda: anti_laplacian_harmonic(
                TraceSamples(self.grid, self.phi, DIRICHLET),
                self.solver,
                conjugate=self.conj_phi,
            ),
        )

    @property
    def dtn_f(self):
        """Normal derivative of the harmonic extension of f (spectral form)."""
        return self._get(
            "dtn_f",
            lambda: tangential_derivative(
                TraceSamples(self.grid, self.conj_f, DIRICHLET)
            ).values,
        )


def _poly_dn(p: Poly2, grid: BoundaryGrid):
    gx, gy = polyalg.poly_grad(p)
    return (
        gx.eval(grid.points) * grid.normals[:, 0]
        + gy.eval(grid.points) * grid.normals[:, 1]
    )


def _poly_dt(p: Poly2, grid: BoundaryGrid):
    gx, gy = polyalg.poly_grad(p)
    return (
        gx.eval(grid.points) * grid.tangents[:, 0]
        + gy.eval(grid.points) * grid.tangents[:, 1]
    )


# -- the product engine -------------------------------------------------------


class Workspace:
    """Product evaluations over one grid with per-function caching."""

    def __init__(self, grid: BoundaryGrid, solver: NystromSolver | None = None):
        self.grid = grid
        self.solver = solver or default_solver(grid)
        self._packs = {}

    def pack(self, v: VmFunction) -> _Pack:
        pack = self._packs.get(v)
        if pack is None:
            pack = _Pack(v, self.grid, self.solver)
            self._packs[v] = pack
        return pack

    def _dot(self, values):
        return float(np.dot(values, self.grid.dsweights))

    # gradient (H1 semi) inner product ------------------------------------

    def h1(self, v: VmFunction, w: VmFunction) -> float:
        pv, pw = self.pack(v), self.pack(w)
        total = 0.0

        # harmonic parts: int dv/dn w ds = -int conj(v) dw/dt ds by parts
        if not (v.has_zero_trace or w.has_zero_trace):
            if pw.dt_f is not None:
                total -= self._dot(pv.conj_f * pw.dt_f)
            elif pv.dt_f is not None:
                total -= self._dot(pw.conj_f * pv.dt_f)
            else:
                total += self._dot(pv.dtn_f * pw.f)

        # zero-trace parts: int dv_K/dn Q ds - int p Q dx, with
        # dv_K/dn = d(conj(-P))/dt + dP/dn paired by parts against Q
        if not (v.is_harmonic or w.is_harmonic):
            Q = pw.P
            total += self._dot(pv.dPdn * pw.P_trace)
            total += self._dot(pv.conj_Ptr * _poly_dt(Q, self.grid))
            total -= poly_volume_integral(poly_mul(v.lap, Q), self.grid.cell, self.grid)
        return total

    # L2 inner product ------------------------------------------------------

    def l2(self, v: VmFunction, w: VmFunction) -> float:
        if v.is_harmonic and w.is_harmonic:
            return self._l2_harmonic(v, w)
        if w.is_polynomial:
            return self._l2_polynomial_source(v, w)
        if v.is_polynomial:
            return self._l2_polynomial_source(w, v)
        return self._l2_general(v, w)

    def _pair_with_solved_dn(self, q_poly, conj_values):
        """int q d(solved)/dn ds = int dq/dt conj(solved) ds by parts, where
        d(solved)/dn = d conj(solved)/dt."""
        return self._dot(_poly_dt(q_poly, self.grid) * conj_values)

    def _l2_harmonic(self, v, w):
        pv, pw = self.pack(v), self.pack(w)
        hp = pv.harmonic_pack
        # int dPhi/dn g ds - int Phi dw/dn ds, second pairing by parts
        return self._dot(hp.normal_derivative * pw.f) + self._dot(
            hp.tangential_derivative * pw.conj_f
        )

    def _l2_polynomial_source(self, v, w):
        """L2 product when w is the restriction of an explicit polynomial r."""
        pv = self.pack(v)
        r = w.poly
        R = anti_laplacian_poly(r)
        dRdn = _poly_dn(R, self.grid)
        boundary = self._dot(pv.phi * dRdn) + self._pair_with_solved_dn(R, pv.conj_phi)
        volume = poly_volume_integral(poly_mul(pv.P, r), self.grid.cell, self.grid)
        return boundary + volume

    def _l2_general(self, v, w):
        pv, pw = self.pack(v), self.pack(w)
        hp = pv.harmonic_pack
        gmQ = pw.phi

        total = self._dot(hp.normal_derivative * gmQ) + self._dot(
            hp.tangential_derivative * pw.conj_phi
        )
        if not w.is_harmonic:
            Qstar = pw.Pstar
            total += self._dot(_poly_dn(Qstar, self.grid) * pv.phi)
            total += self._pair_with_solved_dn(Qstar, pv.conj_phi)
        if not v.is_harmonic:
            Pstar = pv.Pstar
            total += self._dot(_poly_dn(Pstar, self.grid) * gmQ)
            total += self._pair_with_solved_dn(Pstar, pw.conj_phi)
        if not (v.is_harmonic or w.is_harmonic):
            total += poly_volume_integral(
                poly_mul(pv.P, pw.P), self.grid.cell, self.grid
            )
        return total


def l2_product(v: VmFunction, w: VmFunction, grid: BoundaryGrid) -> float:
    return Workspace(grid).l2(v, w)


def h1_product(v: VmFunction, w: VmFunction, grid: BoundaryGrid) -> float:
    return Workspace(grid).h1(v, w)


@dataclass
class LocalMatrix:
    basis: list
    entries: np.ndarray
    kind: str
    raw_asymmetry: float = 0.0


def assemble_local_matrix(basis, grid: BoundaryGrid, kind: str) -> LocalMatrix:
    """Symmetric matrix of pairwise products; kind is 'mass' or 'stiffness'."""
    if kind not in ("mass", "stiffness"):
        raise ValueError("kind must be 'mass' or 'stiffness'")
    ws = Workspace(grid)
    product = ws.l2 if kind == "mass" else ws.h1
    d = len(basis)
    raw = np.zeros((d, d))
    for i in range(d):
        for j in range(d):
            raw[i, j] = product(basis[i], basis[j])
    asym = float(np.max(np.abs(raw - raw.T), initial=0.0))
    return LocalMatrix(list(basis), 0.5 * (raw + raw.T), kind, asym)


# -- builders -----------------------------------------------------------------


def _edge_is_line(edge):
    from .cellgeom import LineEdge

    return isinstance(edge, LineEdge)


def _barycentric_traces(A, B, apex):
    """Affine barycentric coordinates of the triangle (A, B, apex) as Poly2s
    centered at the origin, returned in that vertex order."""
    mat = np.array(
        [[A[0], B[0], apex[0]], [A[1], B[1], apex[1]], [1.0, 1.0, 1.0]]
    )
    coeff = np.linalg.inv(mat)  # rows: [cx, cy, c0] per coordinate
    return [
        Poly2((0.0, 0.0), [((1, 0), cx), ((0, 1), cy), ((0, 0), c0)])
        for cx, cy, c0 in coeff
    ]


def _fictitious_apex(cell, edge, apex="inward"):
    """Apex of the equilateral triangle on the edge's chord.

    "inward" points the apex toward the cell shift point, "outward" away
    from it.  The inward choice reproduces the benchmark tables; the outward
    one makes the tab arc functions positive and the blank ones negative.
    """
    A = np.asarray(edge.start, float)
    B = np.asarray(edge.end, float)
    mid = 0.5 * (A + B)
    chord = B - A
    perp = np.array([-chord[1], chord[0]])  # |perp| = chord length
    z = np.asarray(cell.shift, float)
    toward = 1.0 if np.dot(z - mid, perp) > 0.0 else -1.0
    sign = toward if apex == "inward" else -toward
    return mid + sign * 0.5 * np.sqrt(3.0) * perp


def _linear_edge_traces(cell, e, apex="inward"):
    """Trace polynomials on edge e that are 1 at one endpoint and 0 at the
    other: linear in arclength on straight edges, barycentric traces of the
    fictitious equilateral triangle on arcs.  Returns
    (trace_at_start, trace_at_end, apex_trace_or_None)."""
    edge = cell.edges[e]
    A = np.asarray(edge.start, float)
    B = np.asarray(edge.end, float)
    if _edge_is_line(edge):
        d = B - A
        L2 = float(np.dot(d, d))
        t_end = Poly2(
            (0.0, 0.0),
            [((1, 0), d[0] / L2), ((0, 1), d[1] / L2),
             ((0, 0), -float(np.dot(A, d)) / L2)],
        )
        t_start = Poly2.constant((0.0, 0.0), 1.0) - t_end
        return t_start, t_end, None
    apex_pt = _fictitious_apex(cell, edge, apex)
    lam_A, lam_B, lam_apex = _barycentric_traces(A, B, apex_pt)
    return lam_A, lam_B, lam_apex


def make_vertex_fn(cell, i, apex="inward") -> VmFunction:
    """Harmonic function whose trace is edgewise linear with value 1 at
    vertex i and 0 at every other vertex."""
    E = cell.num_edges
    if not 0 <= i < E:
        raise ValueError(f"vertex index {i} out of range for {E} edges")
    traces = [None] * E
    traces[i], _, _ = _linear_edge_traces(cell, i, apex)
    prev = (i - 1) % E
    _, traces[prev], _ = _linear_edge_traces(cell, prev, apex)
    return VmFunction(cell, traces=traces, degree=1, name=f"v{i}")


def make_edge_fn_product(cell, i, apex="inward") -> VmFunction:
    """Harmonic function whose trace is the product of the vertex-function
    traces at vertices i and i+1 (supported on their shared edge)."""
    E = cell.num_edges
    vi = make_vertex_fn(cell, i, apex)
    vj = make_vertex_fn(cell, (i + 1) % E, apex)
    traces = []
    for e in range(E):
        a, b = vi.traces[e], vj.traces[e]
        traces.append(poly_mul(a, b) if a is not None and b is not None else None)
    return VmFunction(cell, traces=traces, degree=2, name=f"w{i}")


def make_arc_linear_fn(cell, i, apex="inward") -> VmFunction:
    """Harmonic function supported on arc edge i whose trace there is the
    fictitious-triangle apex coordinate (vanishes at all vertices)."""
    edge = cell.edges[i]
    if _edge_is_line(edge):
        raise ValueError(f"edge {i} is straight; arc-linear functions need an arc")
    _, _, apex_tr = _linear_edge_traces(cell, i, apex)
    traces = [None] * cell.num_edges
    traces[i] = apex_tr
    return VmFunction(cell, traces=traces, degree=1, name=f"u{i}")


def make_bubble(cell, p=-1.0) -> VmFunction:
    """Zero-trace function with the given polynomial Laplacian (default -1)."""
    lap = p if isinstance(p, Poly2) else Poly2.constant(cell.shift, float(p))
    return VmFunction(cell, lap=lap, traces=None, degree=2, name="bubble")


def from_polynomial(cell, poly: Poly2, name="") -> VmFunction:
    """The restriction of an explicit polynomial, as a space member."""
    return VmFunction(cell, poly=poly, name=name)


def constant_one(cell) -> VmFunction:
    """The harmonic function with trace identically 1."""
    return VmFunction(
        cell, traces=Poly2.constant((0.0, 0.0), 1.0), degree=0, name="one"
    )
