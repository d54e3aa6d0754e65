"""Sparse bivariate polynomial algebra over a shifted monomial basis.

Polynomials are stored as sparse (linear index, coefficient) pairs relative
to a shift point z, i.e. p(x) = sum_k c_k (x - z)^alpha(k).  The linear
enumeration orders multiindices by total degree, then by the second exponent.
Coefficients may be floats or fractions.Fraction; the algebra is exact when
all inputs are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ._antilap_table import ANTILAP_MAX_DEGREE, ANTILAP_TABLE

__all__ = [
    "mi_to_index",
    "index_to_mi",
    "Poly2",
    "poly_mul",
    "poly_grad",
    "poly_laplacian",
    "anti_laplacian_poly",
    "poly_volume_integral",
    "poly_eval",
    "poly_trace",
    "poly_normal_derivative_trace",
]


def mi_to_index(alpha):
    """Linear index of the multiindex alpha = (a1, a2)."""
    a1, a2 = alpha
    if a1 < 0 or a2 < 0:
        raise ValueError(f"multiindex entries must be nonnegative, got {alpha}")
    n = a1 + a2
    return n * (n + 1) // 2 + a2


def index_to_mi(k):
    """Multiindex (a1, a2) for linear index k; inverse of mi_to_index."""
    if k < 0:
        raise ValueError(f"linear index must be nonnegative, got {k}")
    n = (math.isqrt(8 * k + 1) - 1) // 2
    a2 = k - n * (n + 1) // 2
    return (n - a2, a2)


class Poly2:
    """Sparse bivariate polynomial centered at a shift point.

    Stores only nonzero coefficients, keyed by the linear multiindex
    enumeration, sorted by index.  Instances are treated as immutable.
    """

    __slots__ = ("center", "coeffs")

    def __init__(self, center, terms=()):
        self.center = (float(center[0]), float(center[1]))
        coeffs = {}
        for key, c in terms:
            k = key if isinstance(key, int) else mi_to_index(key)
            if k in coeffs:
                coeffs[k] = coeffs[k] + c
            else:
                coeffs[k] = c
        self.coeffs = {k: c for k, c in sorted(coeffs.items()) if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, center):
        return cls(center)

    @classmethod
    def constant(cls, center, value):
        return cls(center, [((0, 0), value)])

    @classmethod
    def monomial(cls, center, alpha, coeff=1.0):
        return cls(center, [(alpha, coeff)])

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        """Total degree; -inf for the zero polynomial."""
        if not self.coeffs:
            return float("-inf")
        return sum(index_to_mi(max(self.coeffs)))

    def terms(self):
        """List of (multiindex, coefficient) pairs sorted by linear index."""
        return [(index_to_mi(k), c) for k, c in self.coeffs.items()]

    def __repr__(self):
        body = " + ".join(f"{c}*X^{index_to_mi(k)}" for k, c in self.coeffs.items())
        return f"Poly2(z={self.center}, {body or '0'})"

    def __eq__(self, other):
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.center == other.center and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.center, tuple(self.coeffs.items())))

    # -- arithmetic ----------------------------------------------------------

    def _same_center(self, other):
        if self.center != other.center:
            raise ValueError(
                f"polynomials have different centers: {self.center} vs {other.center}"
            )

    def __add__(self, other):
        self._same_center(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return Poly2(self.center, out.items())

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, a):
        return Poly2(self.center, [(k, a * c) for k, c in self.coeffs.items()])

    def __mul__(self, other):
        if isinstance(other, Poly2):
            return poly_mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def recenter(self, new_center):
        """Re-expand around a different shift point (exact binomial shift)."""
        zx, zy = self.center
        wx, wy = float(new_center[0]), float(new_center[1])
        dx, dy = wx - zx, wy - zy  # (x - z) = (x - w) + (w - z)
        out = {}
        for k, c in self.coeffs.items():
            a1, a2 = index_to_mi(k)
            for i in range(a1 + 1):
                bi = math.comb(a1, i) * dx ** (a1 - i)
                for j in range(a2 + 1):
                    kk = mi_to_index((i, j))
                    out[kk] = out.get(kk, 0) + c * bi * math.comb(a2, j) * dy ** (a2 - j)
        return Poly2((wx, wy), out.items())

    # -- evaluation ----------------------------------------------------------

    def eval(self, points):
        """Evaluate at points, an array of shape (..., 2)."""
        pts = np.asarray(points, dtype=float)
        dx = pts[..., 0] - self.center[0]
        dy = pts[..., 1] - self.center[1]
        out = np.zeros(dx.shape)
        for k, c in self.coeffs.items():
            a1, a2 = index_to_mi(k)
            out += float(c) * dx**a1 * dy**a2
        return out

    def __call__(self, points):
        return self.eval(points)

    def grad(self):
        return poly_grad(self)

    def laplacian(self):
        return poly_laplacian(self)


def poly_mul(p: Poly2, q: Poly2) -> Poly2:
    """Product via a double loop over the nonzero coefficients."""
    p._same_center(q)
    out = {}
    pm = [(index_to_mi(k), c) for k, c in p.coeffs.items()]
    qm = [(index_to_mi(k), c) for k, c in q.coeffs.items()]
    for (a1, a2), ca in pm:
        for (b1, b2), cb in qm:
            k = mi_to_index((a1 + b1, a2 + b2))
            out[k] = out.get(k, 0) + ca * cb
    return Poly2(p.center, out.items())


def poly_grad(p: Poly2):
    """Formal gradient, returned as a pair of polynomials."""
    gx, gy = {}, {}
    for k, c in p.coeffs.items():
        a1, a2 = index_to_mi(k)
        if a1 > 0:
            gx[mi_to_index((a1 - 1, a2))] = a1 * c
        if a2 > 0:
            gy[mi_to_index((a1, a2 - 1))] = a2 * c
    return Poly2(p.center, gx.items()), Poly2(p.center, gy.items())


def poly_laplacian(p: Poly2) -> Poly2:
    """Formal Laplacian."""
    out = {}
    for k, c in p.coeffs.items():
        a1, a2 = index_to_mi(k)
        if a1 >= 2:
            kk = mi_to_index((a1 - 2, a2))
            out[kk] = out.get(kk, 0) + a1 * (a1 - 1) * c
        if a2 >= 2:
            kk = mi_to_index((a1, a2 - 2))
            out[kk] = out.get(kk, 0) + a2 * (a2 - 1) * c
    return Poly2(p.center, out.items())


def _antilap_monomial_exact(alpha):
    """Exact-rational anti-Laplacian of (x-z)^alpha via the closed formula.

    Used above the tabulated degree.  Returns {index: Fraction}.
    """
    n = alpha[0] + alpha[1]
    # running power of |x-z|^2/4, as an index->Fraction dict
    r2q = {mi_to_index((2, 0)): Fraction(1, 4), mi_to_index((0, 2)): Fraction(1, 4)}

    def mul(a, b):
        out = {}
        for ka, ca in a.items():
            a1, a2 = index_to_mi(ka)
            for kb, cb in b.items():
                b1, b2 = index_to_mi(kb)
                kk = mi_to_index((a1 + b1, a2 + b2))
                out[kk] = out.get(kk, 0) + ca * cb
        return out

    def lap(a):
        out = {}
        for k, c in a.items():
            a1, a2 = index_to_mi(k)
            if a1 >= 2:
                kk = mi_to_index((a1 - 2, a2))
                out[kk] = out.get(kk, 0) + a1 * (a1 - 1) * c
            if a2 >= 2:
                kk = mi_to_index((a1, a2 - 2))
                out[kk] = out.get(kk, 0) + a2 * (a2 - 1) * c
        return out

    term = {mi_to_index(alpha): Fraction(1)}  # Laplacian^j of the monomial
    r2j = {mi_to_index((0, 0)): Fraction(1)}  # (|x-z|^2/4)^j
    acc = {}
    for j in range(n // 2 + 1):
        cj = Fraction((-1) ** j * math.factorial(n - j), math.factorial(j + 1))
        for k, c in mul(r2j, term).items():
            acc[k] = acc.get(k, 0) + cj * c
        term = lap(term)
        if not term:
            break
        r2j = mul(r2j, r2q)
    pref = Fraction(1, 4 * math.factorial(n + 1))
    out = {}
    for k, c in mul(r2q, acc).items():  # leading |x-z|^2/4 factor, then 1/(n+1)!
        v = 4 * pref * c
        if v != 0:
            out[k] = v
    return out


def antilap_monomial_exact(k: int):
    """Exact anti-Laplacian of the k-th shifted monomial as {index: Fraction}.

    Tabulated rows for total degree <= 10, closed formula beyond.
    """
    alpha = index_to_mi(k)
    if alpha[0] + alpha[1] <= ANTILAP_MAX_DEGREE:
        idx, nums, den = ANTILAP_TABLE[k]
        return {i: Fraction(nu, den) for i, nu in zip(idx, nums)}
    return _antilap_monomial_exact(alpha)


def anti_laplacian_poly(p: Poly2) -> Poly2:
    """A polynomial P with Laplacian(P) = p and deg P = deg p + 2.

    Linear in p; uses the tabulated rows for total degree <= 10 and the
    closed formula above that.  Output coefficients are floats when p's are.
    """
    out = {}
    for k, c in p.coeffs.items():
        for kk, frac in antilap_monomial_exact(k).items():
            add = c * frac if isinstance(c, Fraction) else float(c) * float(frac)
            out[kk] = out.get(kk, 0) + add
    return Poly2(p.center, out.items())


def poly_volume_integral(p: Poly2, cell, grid) -> float:
    """Integral of p over the cell, reduced to one boundary quadrature.

    Uses div[(x-z)^alpha (x-z)] = (2+|alpha|)(x-z)^alpha: scale each
    coefficient by 1/(2+|alpha|) and integrate against (x-z).n ds.
    """
    if grid.cell is not cell and grid.cell != cell:
        raise ValueError("grid was built for a different cell")
    z = cell.shift
    if not np.allclose(p.center, z, rtol=0.0, atol=1e-13):
        raise ValueError(
            f"polynomial center {p.center} differs from the cell shift point {z}"
        )
    if p.is_zero:
        return 0.0
    scaled = Poly2(
        p.center,
        [(k, float(c) / (2 + sum(index_to_mi(k)))) for k, c in p.coeffs.items()],
    )
    vals = scaled.eval(grid.points)
    xn = (grid.points[:, 0] - z[0]) * grid.normals[:, 0] + (
        grid.points[:, 1] - z[1]
    ) * grid.normals[:, 1]
    return float(np.dot(vals * xn, grid.dsweights))


def poly_eval(p: Poly2, x):
    """Pointwise value(s) of p."""
    return p.eval(x)


def poly_trace(p: Poly2, edge, t):
    """Values of p along a parameterized edge."""
    return p.eval(edge.point(t))


def poly_normal_derivative_trace(p: Poly2, edge, t):
    """Values of grad(p).n along a parameterized edge."""
    gx, gy = poly_grad(p)
    pts = edge.point(t)
    nrm = edge.unit_normal(t)
    return gx.eval(pts) * nrm[..., 0] + gy.eval(pts) * nrm[..., 1]
