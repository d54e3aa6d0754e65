"""Reference values for the benchmark experiments.

Everything here is independent of the boundary-integral pipeline: exact
rationals, closed forms, or separation-of-variables series evaluated with
analytically bounded tails.  The series machinery covers the unit-square
basis functions (vertex, edge, bubble) and the zero-trace monomial-source
family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "ReferenceValue",
    "ref_S",
    "ref_square_bubble_pair",
    "ref_pacman",
    "square_basis_references",
]


@dataclass(frozen=True)
class ReferenceValue:
    """A reference number with its provenance: 'exact', 'series' (with the
    truncation cutoff and estimated tail), or 'none' for self-convergence."""

    value: float
    provenance: str = "exact"
    truncation: int | None = None
    tail_bound: float | None = None

    def __float__(self):
        return self.value


def ref_S(a: int, ell: int) -> float:
    """Closed form of int_0^1 t^a sin(ell pi t) dt for a >= 0, ell >= 1."""
    if a < 0 or ell < 1:
        raise ValueError(f"need a >= 0 and ell >= 1, got a={a}, ell={ell}")
    lp = ell * math.pi
    total = 0.0
    for j in range(a // 2 + 1):
        total += (-1) ** j / lp ** (2 * j + 1) * (
            math.factorial(a) // math.factorial(a - 2 * j)
        )
    total *= (-1) ** (ell + 1)
    total -= (
        (-1) ** (a // 2)
        * math.factorial(a)
        * (a - 2 * (a // 2) - 1)
        / lp ** (a + 1)
    )
    return total


def _S_vector(a: int, K: int) -> np.ndarray:
    """ref_S(a, ell) for ell = 1..K, vectorized."""
    ell = np.arange(1, K + 1, dtype=float)
    lp = ell * math.pi
    total = np.zeros(K)
    for j in range(a // 2 + 1):
        total += (-1) ** j / lp ** (2 * j + 1) * (
            math.factorial(a) // math.factorial(a - 2 * j)
        )
    sign = np.where(np.arange(1, K + 1) % 2 == 0, -1.0, 1.0)  # (-1)^(ell+1)
    total *= sign
    total -= (
        (-1) ** (a // 2)
        * math.factorial(a)
        * (a - 2 * (a // 2) - 1)
        / lp ** (a + 1)
    )
    return total


@lru_cache(maxsize=None)
def ref_square_bubble_pair(alpha, beta, cutoff=16000):
    """L2 and H1 reference values for the zero-trace unit-square functions
    with monomial sources x^alpha, x^beta.

    Double sine series summed directly over 1 <= k, ell <= cutoff (skipping
    exactly-zero coefficients); the tail of the slowest (H1) sum is bounded
    by ~0.007/cutoff^3, below 2e-15 at the default cutoff.  Returns
    (l2, h1) ReferenceValues.
    """
    a1, a2 = alpha
    b1, b2 = beta
    Sk = _S_vector(a1, cutoff) * _S_vector(b1, cutoff)
    Sl = _S_vector(a2, cutoff) * _S_vector(b2, cutoff)
    k2 = np.arange(1, cutoff + 1, dtype=float) ** 2
    knz = Sk != 0.0
    lnz = Sl != 0.0
    Sk, k2k = Sk[knz], k2[knz]
    Sl, k2l = Sl[lnz], k2[lnz]
    l2sum = 0.0
    h1sum = 0.0
    chunk = 1024
    for lo in range(0, len(Sk), chunk):
        hi = min(lo + chunk, len(Sk))
        inv = 1.0 / (k2k[lo:hi, None] + k2l[None, :])
        h1sum += float(Sk[lo:hi] @ (inv @ Sl))
        inv *= inv
        l2sum += float(Sk[lo:hi] @ (inv @ Sl))
    l2 = 4.0 * l2sum / math.pi**4
    h1 = 4.0 * h1sum / math.pi**2
    # |S_{a,l}| <= ~1/(pi l) for all printed pairs; both one-sided tails
    tail_h1 = 2.0 * (4.0 / math.pi**6) * (math.pi**2 / 6.0) / (3.0 * cutoff**3)
    tail_l2 = 2.0 * (4.0 / math.pi**8) * (math.pi**2 / 6.0) / (5.0 * cutoff**5)
    return (
        ReferenceValue(l2, "series", cutoff, tail_l2),
        ReferenceValue(h1, "series", cutoff, tail_h1),
    )


def ref_pacman(mu: float, nu: float, pair) -> tuple:
    """Exact L2 and H1 references for the circular-sector experiment.

    pair is one of (1,1), (1,2), (1,3), (2,3); functions 1 and 2 are the
    harmonic power functions with exponents mu and nu, function 3 the
    zero-trace quartic.  Requires 0 < nu <= mu and 1/2 < mu < 1.
    """
    if not (0.5 < mu < 1.0 and 0.0 < nu <= mu):
        raise ValueError(f"need 1/2 < mu < 1 and 0 < nu <= mu, got mu={mu}, nu={nu}")
    pair = tuple(sorted(pair))
    if pair == (1, 1):
        return (
            ReferenceValue(math.pi / (4.0 * mu * (mu + 1.0))),
            ReferenceValue(math.pi / 2.0),
        )
    if pair == (1, 2):
        if nu == mu:
            return ref_pacman(mu, nu, (1, 1))
        s = math.sin(nu * math.pi / mu)
        return (
            ReferenceValue(mu * s / ((mu + nu + 2.0) * (mu * mu - nu * nu))),
            ReferenceValue(mu * nu * s / (mu * mu - nu * nu)),
        )
    if pair in ((1, 3), (2, 3)):
        s = mu if pair == (1, 3) else nu
        num = 2.0 * s * math.sin(math.pi / mu) * math.sin(s * math.pi / mu) - 4.0 * math.cos(
            math.pi / mu
        ) * (1.0 - math.cos(s * math.pi / mu))
        den = s * (s + 4.0) * (s + 6.0) * (s * s - 4.0)
        return (ReferenceValue(num / den), ReferenceValue(0.0))
    raise ValueError(f"unknown function pair {pair}")


# -- unit-square basis references --------------------------------------------


def _odd(K):
    return np.arange(1, K + 1, 2, dtype=float)


def _odd_zeta(s: int) -> float:
    """sum over odd k of 1/k^s."""
    from scipy.special import zeta

    return float((1.0 - 2.0 ** (-s)) * zeta(s))


@lru_cache(maxsize=None)
def _sinh_sums(K=41):
    """Odd-k sums for the edge-function rows.

    The coth sums are split as an exact odd-zeta plus the exponentially
    small remainder coth(k pi) - 1 = 2/(exp(2 pi k) - 1), so every numeric
    sum here converges exponentially.
    """
    k = _odd(K)
    q = np.exp(-math.pi * k)  # exp(-pi k), well below 1
    inv_sinh = 2.0 * q / (1.0 - q * q)
    coth_m1 = 2.0 * q * q / (1.0 - q * q)
    t1 = float(np.sum(inv_sinh / k**5))                 # sum 1/(k^5 sinh(k pi))
    t2 = _odd_zeta(5) + float(np.sum(coth_m1 / k**5))   # sum coth(k pi)/k^5
    t3 = _odd_zeta(7) + float(np.sum(coth_m1 / k**7))   # sum coth(k pi)/k^7
    t4 = float(np.sum(inv_sinh**2 / k**6))              # sum 1/(k^6 sinh^2)
    return t1, t2, t3, t4


@lru_cache(maxsize=None)
def _lattice_sums(K=81):
    """Odd-index double lattice sums with tanh closed forms for the inner
    series and odd-zeta splits for the outer tails.

    sum_{l odd} 1/(l^2 + a^2)   = pi tanh(pi a / 2) / (4 a)
    sum_{l odd} 1/(l^2 + a^2)^2 = (pi/8) [tanh(h) - h sech^2(h)] / a^3,
                                  h = pi a / 2.
    """
    k = _odd(K)
    h = 0.5 * math.pi * k
    e = np.exp(-h)
    tanh_m1 = -2.0 * e * e / (1.0 + e * e)          # tanh(h) - 1
    sech2 = (2.0 * e / (1.0 + e * e)) ** 2
    # s223 = sum_{k,l odd} 1/(k^2 l^2 (k^2+l^2))
    #      = (pi^2/8) zeta_odd(4) - (pi/4) sum tanh(h)/k^5
    s_223 = (math.pi**2 / 8.0) * _odd_zeta(4) - (math.pi / 4.0) * (
        _odd_zeta(5) + float(np.sum(tanh_m1 / k**5))
    )
    # s44 = sum_{k,l odd} 1/(k^4 (k^2+l^2)^2)
    #     = (pi/8) [sum tanh(h)/k^7 - (pi/2) sum sech^2(h)/k^6]
    s_44 = (math.pi / 8.0) * (
        _odd_zeta(7)
        + float(np.sum(tanh_m1 / k**7))
        - (math.pi / 2.0) * float(np.sum(sech2 / k**6))
    )
    return s_223, s_44


def square_basis_references():
    """Reference L2/H1 values for the unit-square basis rows, keyed like the
    experiment pairs.  Exact rationals where available, 1D series otherwise.
    """
    t1, t2, t3, t4 = _sinh_sums()
    s223, s44 = _lattice_sums()
    pi = math.pi

    refs = {}

    def put(key, l2, h1, prov_l2="exact", prov_h1="exact"):
        refs[key] = (
            l2 if isinstance(l2, ReferenceValue) else ReferenceValue(l2, prov_l2),
            h1 if isinstance(h1, ReferenceValue) else ReferenceValue(h1, prov_h1),
        )

    put(("v", "v"), 1.0 / 9.0, 2.0 / 3.0)
    put(("v", "v+1"), 1.0 / 18.0, -1.0 / 6.0)
    put(("v", "v+2"), 1.0 / 36.0, -1.0 / 3.0)
    put(
        ("v0", "w1"),
        ReferenceValue(1.0 / 120.0 - 8.0 / pi**5 * t1, "series", 41),
        -1.0 / 12.0,
    )
    put(
        ("v1", "w1"),
        ReferenceValue(8.0 / pi**5 * t2 - 1.0 / 120.0, "series", 41),
        1.0 / 12.0,
    )
    put(
        ("w", "w"),
        ReferenceValue(16.0 / pi**7 * t3 - 16.0 / pi**6 * t4, "series", 41),
        ReferenceValue(32.0 / pi**5 * t2, "series", 41),
    )
    bubble_l2, bubble_h1 = ref_square_bubble_pair((0, 0), (0, 0))
    put(("wb", "wb"), bubble_l2, bubble_h1)
    put(
        ("v", "wb"),
        ReferenceValue(16.0 / pi**6 * s223, "series", 81),
        0.0,
    )
    put(
        ("w", "wb"),
        ReferenceValue(64.0 / pi**8 * s44, "series", 81),
        0.0,
    )
    return refs
