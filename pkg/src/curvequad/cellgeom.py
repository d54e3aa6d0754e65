"""Curvilinear polygon cells: parameterized edges, built-in shapes, validation.

Edges are smooth regular arcs parameterized on [0, 1] with analytic first and
second derivatives.  A cell is a closed counter-clockwise chain of edges;
vertices are the edge start points.  The quadrature layer reparameterizes each
edge over an equal slice of a global 2*pi-periodic parameter.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "LineEdge",
    "ArcEdge",
    "FuncEdge",
    "Cell",
    "build_square",
    "build_circle",
    "build_pacman",
    "build_puzzle",
    "validate_cell",
    "cell_from_file",
    "unit_tangent",
    "unit_normal",
    "speed",
    "curvature",
]

_MIN_SPEED = 1e-14


class _EdgeBase:
    """Common derived quantities for edges parameterized on [0, 1]."""

    def point(self, u):
        raise NotImplementedError

    def d1(self, u):
        raise NotImplementedError

    def d2(self, u):
        raise NotImplementedError

    @property
    def start(self):
        return tuple(np.asarray(self.point(0.0), dtype=float))

    @property
    def end(self):
        return tuple(np.asarray(self.point(1.0), dtype=float))

    def speed(self, u):
        d = self.d1(u)
        return np.hypot(d[..., 0], d[..., 1])

    def unit_tangent(self, u):
        d = self.d1(u)
        s = np.hypot(d[..., 0], d[..., 1])
        if np.any(s < _MIN_SPEED):
            raise ValueError("degenerate parameterization: |x'| below 1e-14")
        return d / s[..., None]

    def unit_normal(self, u):
        """Outward normal for counter-clockwise traversal (tangent rotated by -pi/2)."""
        t = self.unit_tangent(u)
        return np.stack([t[..., 1], -t[..., 0]], axis=-1)

    def curvature(self, u):
        """Signed curvature, positive for counter-clockwise convex arcs."""
        d1 = self.d1(u)
        d2 = self.d2(u)
        s = np.hypot(d1[..., 0], d1[..., 1])
        if np.any(s < _MIN_SPEED):
            raise ValueError("degenerate parameterization: |x'| below 1e-14")
        return (d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]) / s**3


class LineEdge(_EdgeBase):
    """Straight segment from p0 to p1."""

    def __init__(self, p0, p1):
        self.p0 = np.asarray(p0, dtype=float)
        self.p1 = np.asarray(p1, dtype=float)

    def point(self, u):
        u = np.asarray(u, dtype=float)
        return self.p0 + u[..., None] * (self.p1 - self.p0)

    def d1(self, u):
        u = np.asarray(u, dtype=float)
        return np.broadcast_to(self.p1 - self.p0, u.shape + (2,)).copy()

    def d2(self, u):
        u = np.asarray(u, dtype=float)
        return np.zeros(u.shape + (2,))

    def __repr__(self):
        return f"LineEdge({tuple(self.p0)} -> {tuple(self.p1)})"


class ArcEdge(_EdgeBase):
    """Circular arc, swept from theta0 to theta1 (signed; theta1 < theta0 is
    a clockwise arc)."""

    def __init__(self, center, radius, theta0, theta1):
        if radius <= 0:
            raise ValueError("arc radius must be positive")
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.theta0 = float(theta0)
        self.theta1 = float(theta1)

    def _theta(self, u):
        u = np.asarray(u, dtype=float)
        return self.theta0 + u * (self.theta1 - self.theta0)

    def point(self, u):
        th = self._theta(u)
        return self.center + self.radius * np.stack([np.cos(th), np.sin(th)], axis=-1)

    def d1(self, u):
        th = self._theta(u)
        dth = self.theta1 - self.theta0
        return self.radius * dth * np.stack([-np.sin(th), np.cos(th)], axis=-1)

    def d2(self, u):
        th = self._theta(u)
        dth = self.theta1 - self.theta0
        return -self.radius * dth**2 * np.stack([np.cos(th), np.sin(th)], axis=-1)

    def __repr__(self):
        return (
            f"ArcEdge(c={tuple(self.center)}, r={self.radius}, "
            f"theta={self.theta0}..{self.theta1})"
        )


class FuncEdge(_EdgeBase):
    """Edge from user-supplied callables x(u), x'(u), x''(u) on [0, 1].

    Each callable takes an array of parameters and returns (..., 2) points.
    """

    def __init__(self, f, df, ddf):
        self._f, self._df, self._ddf = f, df, ddf

    def point(self, u):
        return np.asarray(self._f(np.asarray(u, dtype=float)), dtype=float)

    def d1(self, u):
        return np.asarray(self._df(np.asarray(u, dtype=float)), dtype=float)

    def d2(self, u):
        return np.asarray(self._ddf(np.asarray(u, dtype=float)), dtype=float)


# module-level aliases matching the operation names
def unit_tangent(edge, u):
    return edge.unit_tangent(u)


def unit_normal(edge, u):
    return edge.unit_normal(u)


def speed(edge, u):
    return edge.speed(u)


def curvature(edge, u):
    return edge.curvature(u)


class Cell:
    """Curvilinear polygon bounded by a closed counter-clockwise edge chain."""

    def __init__(self, edges, name="cell", shift=None):
        if not edges:
            raise ValueError("a cell needs at least one edge")
        self.edges = list(edges)
        self.name = name
        self._shift = None if shift is None else (float(shift[0]), float(shift[1]))

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def vertices(self):
        return [e.start for e in self.edges]

    @property
    def shift(self):
        """Shift point z for centered polynomials; defaults to the barycenter."""
        if self._shift is None:
            self._shift = _barycenter(self)
        return self._shift

    def __repr__(self):
        return f"Cell({self.name}, {self.num_edges} edges)"


def _barycenter(cell, n=32, sigma=7):
    """Barycenter from boundary-reduced moment integrals."""
    from .kressquad import build_grid

    grid = build_grid(cell, n, sigma, _with_shift=False)
    x, y = grid.points[:, 0], grid.points[:, 1]
    xn = x * grid.normals[:, 0] + y * grid.normals[:, 1]
    area = 0.5 * np.dot(xn, grid.dsweights)
    mx = np.dot(x * xn, grid.dsweights) / 3.0
    my = np.dot(y * xn, grid.dsweights) / 3.0
    return (mx / area, my / area)


def signed_area(cell, n=32, sigma=7):
    """Signed area from the boundary; positive for counter-clockwise cells."""
    from .kressquad import build_grid

    grid = build_grid(cell, n, sigma, _with_shift=False)
    xn = np.einsum("ij,ij->i", grid.points, grid.normals)
    return float(0.5 * np.dot(xn, grid.dsweights))


def validate_cell(cell, closure_tol=1e-10, samples=64):
    """Check closure, orientation and edge regularity.

    Returns a list of violation messages; an empty list means the cell is
    usable.
    """
    problems = []
    E = cell.num_edges
    for i, e in enumerate(cell.edges):
        nxt = cell.edges[(i + 1) % E]
        gap = math.hypot(e.end[0] - nxt.start[0], e.end[1] - nxt.start[1])
        if gap > closure_tol:
            problems.append(
                f"edge {i} ends at {e.end} but edge {(i + 1) % E} starts at "
                f"{nxt.start} (gap {gap:.3e})"
            )
        u = np.linspace(0.0, 1.0, samples)
        if np.any(e.speed(u) < _MIN_SPEED):
            problems.append(f"edge {i} has |x'| below {_MIN_SPEED}")
    try:
        area = signed_area(cell)
        if area <= 0:
            problems.append(f"signed area {area:.6g} is not positive (orientation)")
    except Exception as exc:  # degenerate edges already reported above
        problems.append(f"area computation failed: {exc}")
    return problems


# -- built-in cells ---------------------------------------------------------


def build_square():
    """Unit square with vertices (0,0), (1,0), (1,1), (0,1)."""
    v = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    edges = [LineEdge(v[i], v[(i + 1) % 4]) for i in range(4)]
    return Cell(edges, name="square")


def build_circle(radius=1.0):
    """Circle split into two half-circle edges with vertices on a diameter."""
    edges = [
        ArcEdge((0.0, 0.0), radius, 0.0, math.pi),
        ArcEdge((0.0, 0.0), radius, math.pi, 2.0 * math.pi),
    ]
    return Cell(edges, name="circle")


def build_pacman(mu=4.0 / 7.0):
    """Sector of the unit circle with opening angle pi/mu, 1/2 < mu < 1."""
    if not 0.5 < mu < 1.0:
        raise ValueError(f"pacman parameter must satisfy 1/2 < mu < 1, got {mu}")
    ang = math.pi / mu
    tip = (math.cos(ang), math.sin(ang))
    edges = [
        LineEdge((0.0, 0.0), (1.0, 0.0)),
        ArcEdge((0.0, 0.0), 1.0, 0.0, ang),
        LineEdge(tip, (0.0, 0.0)),
    ]
    return Cell(edges, name="pacman")


def build_puzzle(r=0.22, b=0.17):
    """Unit-square puzzle piece: blanks on the bottom/top edges, tabs on the
    right/left edges, all circular with radius r and chord offset b < r.

    Tab circle centers sit at distance b outside the square, blank centers at
    distance b inside, so tabs cut off exactly fill the blanks and |K| = 1.
    """
    if not 0.0 < b < r:
        raise ValueError(f"puzzle parameters must satisfy 0 < b < r, got r={r}, b={b}")
    c = math.sqrt(r * r - b * b)  # chord half-length on the square side
    gam = math.asin(b / r)
    bet = math.acos(b / r)
    edges = [
        LineEdge((0.0, 0.0), (0.5 - c, 0.0)),
        # bottom blank: clockwise major arc dipping into the square
        ArcEdge((0.5, b), r, math.pi + gam, -gam),
        LineEdge((0.5 + c, 0.0), (1.0, 0.0)),
        LineEdge((1.0, 0.0), (1.0, 0.5 - c)),
        # right tab: counter-clockwise major arc bulging outward
        ArcEdge((1.0 + b, 0.5), r, bet - math.pi, math.pi - bet),
        LineEdge((1.0, 0.5 + c), (1.0, 1.0)),
        LineEdge((1.0, 1.0), (0.5 + c, 1.0)),
        # top blank
        ArcEdge((0.5, 1.0 - b), r, gam, -math.pi - gam),
        LineEdge((0.5 - c, 1.0), (0.0, 1.0)),
        LineEdge((0.0, 1.0), (0.0, 0.5 + c)),
        # left tab
        ArcEdge((-b, 0.5), r, bet, 2.0 * math.pi - bet),
        LineEdge((0.0, 0.5 - c), (0.0, 0.0)),
    ]
    return Cell(edges, name="puzzle")


BUILTIN_CELLS = {
    "square": build_square,
    "circle": build_circle,
    "pacman": build_pacman,
    "puzzle": build_puzzle,
}


def cell_from_file(path, name=None):
    """Load a cell from a plain-text edge list.

    Each non-comment line is `line x0 y0 x1 y1` or `arc cx cy r theta0 theta1`,
    in counter-clockwise order.
    """
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            kind, vals = parts[0].lower(), [float(v) for v in parts[1:]]
            if kind == "line" and len(vals) == 4:
                edges.append(LineEdge(vals[:2], vals[2:]))
            elif kind == "arc" and len(vals) == 5:
                edges.append(ArcEdge(vals[:2], vals[2], vals[3], vals[4]))
            else:
                raise ValueError(f"{path}:{lineno}: unrecognized edge record {text!r}")
    cell = Cell(edges, name=name or "custom")
    problems = validate_cell(cell)
    if problems:
        raise ValueError(f"{path}: invalid cell: " + "; ".join(problems))
    return cell
