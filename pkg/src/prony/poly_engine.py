"""Real-root machinery for univariate polynomials.

Sturm counting, Budan-Fourier sign-variation bounds, root isolation and
refinement, and resultant-based discriminants.  Everything here works on the
standard discriminant convention; sign adapters for the d=2/d=3 closed forms
live in :mod:`prony.closed_forms`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _kernels as K
from .errors import DegenerateSequence

__all__ = [
    "Poly",
    "SignVariation",
    "monic_from_sigma",
    "derivative_tower",
    "sign_variation",
    "budan_fourier_bound",
    "sturm_count",
    "is_hyperbolic",
    "real_roots",
    "discriminant",
]

# Accuracy targets (see module design notes): isolation brackets are bisected
# to this relative width before Newton polishing.
_BISECT_RELWIDTH = 1e-10
_NEWTON_STEPS = 5


@dataclass(frozen=True, eq=False)
class Poly:
    """Dense univariate polynomial, coefficients in ascending degree order.

    Construct through :meth:`from_coeffs`, which trims leading coefficients
    smaller than 1e-14 of the largest magnitude so the stored leading
    coefficient is genuinely nonzero (the zero polynomial is kept as the
    single coefficient 0.0).
    """

    coefficients: np.ndarray

    @classmethod
    def from_coeffs(cls, coeffs) -> "Poly":
        c = np.asarray(coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        trimmed = np.array(K.trim_coeffs(c.tolist()), dtype=float)
        trimmed.setflags(write=False)
        return cls(trimmed)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self.coefficients[0] == 0.0

    def __call__(self, x):
        return npoly.polyval(x, self.coefficients)

    def deriv(self) -> "Poly":
        return Poly.from_coeffs(K.poly_derivative(self.coefficients.tolist()))

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Poly(degree={self.degree}, coefficients={self.coefficients.tolist()})"


@dataclass(frozen=True)
class SignVariation:
    """Sign-variation count of the derivative vector (P, P', ..., P^(n)) at a
    point; the point may be +-inf."""

    point: float
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("variation count must be nonnegative")


def _as_poly(p) -> Poly:
    return p if isinstance(p, Poly) else Poly.from_coeffs(p)


def monic_from_sigma(sigma) -> Poly:
    """Monic polynomial z^d + s1*z^(d-1) + ... + sd from the coefficient
    vector (s1, ..., sd)."""
    s = np.asarray(getattr(sigma, "sigma", sigma), dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("sigma must be a nonempty 1-d sequence")
    c = np.concatenate([s[::-1], [1.0]])
    return Poly.from_coeffs(c)


def derivative_tower(p) -> list[Poly]:
    """[P, P', ..., P^(n)] down to the constant derivative."""
    p = _as_poly(p)
    tower = [p]
    while tower[-1].degree > 0:
        tower.append(tower[-1].deriv())
    return tower


def sign_variation(p, x) -> SignVariation:
    """Number of sign changes in (P(x), P'(x), ..., P^(n)(x)).

    Components that evaluate to an exact floating zero are skipped (the
    classical convention).  At +inf every derivative carries the sign of the
    leading coefficient, so the count is 0; at -inf the signs alternate, so
    the count equals the degree.
    """
    p = _as_poly(p)
    n = p.degree
    if math.isinf(x):
        return SignVariation(x, 0 if x > 0 else n)
    shifted = K.shifted_coeffs(p.coefficients.tolist(), float(x))
    # entry k of the Taylor shift is P^(k)(x)/k!; positive scalings do not
    # affect variation counts
    return SignVariation(float(x), K.sign_changes(shifted, 0.0))


def budan_fourier_bound(p, a, b) -> int:
    """Budan-Fourier upper bound nu(a) - nu(b) on the number of roots in
    (a, b], counted with multiplicity; exceeds the true count by an even
    integer."""
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError("need a < b")
    p = _as_poly(p)
    return sign_variation(p, a).count - sign_variation(p, b).count


def _nudge_off_root(chain, coeffs, x):
    # Sturm endpoint evaluation needs P(x) != 0; step outward by a
    # machine-scale offset when we land on a root.
    for _ in range(4):
        if K.horner(coeffs, x) != 0.0:
            return x
        x = x + 1e-10 * (1.0 + abs(x))
    return x


def sturm_count(p, a, b) -> int:
    """Exact number of distinct real roots in (a, b] (endpoints may be
    +-inf).  Non-squarefree input is handled by the generalized chain, which
    terminates at the gcd and still counts distinct roots."""
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError("need a < b")
    p = _as_poly(p)
    chain = K.sturm_chain(p.coefficients.tolist())
    if not chain:
        raise DegenerateSequence("input polynomial is numerically zero")
    if len(chain) == 1:
        return 0
    coeffs = list(chain[0])

    def variations(x, side_positive):
        if math.isinf(x):
            return K.chain_variations_inf(chain, x > 0)
        return K.chain_variations(chain, _nudge_off_root(chain, coeffs, x))

    return variations(a, False) - variations(b, True)


def is_hyperbolic(sigma) -> bool:
    """True iff z^d + s1*z^(d-1) + ... + sd has d real distinct roots."""
    s = np.asarray(getattr(sigma, "sigma", sigma), dtype=float)
    q = monic_from_sigma(s)
    chain = K.sturm_chain(q.coefficients.tolist())
    if not chain:
        return False
    squarefree = len(chain[-1]) == 1
    count = K.chain_variations_inf(chain, False) - K.chain_variations_inf(chain, True)
    return squarefree and count == len(s)


def _quadratic_roots(c0, c1, c2):
    disc = c1 * c1 - 4.0 * c0 * c2
    if disc < 0.0:
        return []
    if disc == 0.0:
        return [-c1 / (2.0 * c2)]
    sq = math.sqrt(disc)
    q = -0.5 * (c1 + math.copysign(sq, c1))
    # citardauq pairing avoids cancellation in the small root
    r1 = q / c2
    r2 = c0 / q if q != 0.0 else -c1 / c2 - r1
    return sorted((r1, r2))


def real_roots(p) -> np.ndarray:
    """All real roots, sorted ascending.

    Degrees 1-2 use stable closed forms; degree >= 3 uses Sturm bisection for
    isolation followed by bisection + Newton refinement.  Repeated roots are
    reported once (the input is reduced by its gcd with its derivative
    first).  Returns an empty array for constants, including the zero
    polynomial.
    """
    p = _as_poly(p)
    c = p.coefficients.tolist()
    deg = p.degree
    if deg <= 0:
        return np.empty(0)
    if deg == 1:
        return np.array([-c[0] / c[1]])
    if deg == 2:
        return np.array(_quadratic_roots(c[0], c[1], c[2]))

    chain = K.sturm_chain(c)
    if not chain:
        return np.empty(0)
    if len(chain[-1]) > 1:
        # repeated roots: the distinct roots are those of P / gcd(P, P')
        quo, _rem = npoly.polydiv(c, np.asarray(chain[-1]))
        return real_roots(Poly.from_coeffs(quo))

    cauchy = 1.0 + max(abs(v) for v in c[:-1]) / abs(c[-1])
    v_lo = K.chain_variations(chain, -cauchy)
    v_hi = K.chain_variations(chain, cauchy)
    dc = K.poly_derivative(c)

    roots: list[float] = []
    stack = [(-cauchy, cauchy, v_lo, v_hi)]
    while stack:
        lo, hi, vl, vh = stack.pop()
        n = vl - vh
        if n <= 0:
            continue
        if n == 1:
            lo_positive = K.horner(c, lo) > 0.0
            l, h = K.bisect_refine(c, lo, hi, lo_positive, _BISECT_RELWIDTH)
            x0 = 0.5 * (l + h)
            roots.append(K.newton_polish(c, dc, x0, l, h, _NEWTON_STEPS))
            continue
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-13 * (1.0 + abs(mid)):
            # cluster below float resolution: report one representative
            roots.append(mid)
            continue
        for _ in range(4):
            if K.horner(c, mid) != 0.0:
                break
            mid += (hi - lo) * 1e-9
        vm = K.chain_variations(chain, mid)
        stack.append((lo, mid, vl, vm))
        stack.append((mid, hi, vm, vh))
    return np.array(sorted(roots))


def _sylvester(pc, qc):
    m = len(pc) - 1
    n = len(qc) - 1
    size = m + n
    s = np.zeros((size, size))
    pd = pc[::-1]
    qd = qc[::-1]
    for i in range(n):
        s[i, i : i + m + 1] = pd
    for i in range(m):
        s[n + i, i : i + n + 1] = qd
    return s


def discriminant(p) -> float:
    """Standard discriminant Disc(P) = (-1)^(d(d-1)/2) Res(P, P') of a monic
    polynomial of degree d >= 2, via the Sylvester resultant."""
    p = _as_poly(p)
    d = p.degree
    if d < 2:
        raise ValueError("discriminant requires degree >= 2")
    c = p.coefficients
    if abs(c[-1] - 1.0) > 1e-12 * max(1.0, float(np.max(np.abs(c)))):
        raise ValueError("discriminant requires a monic polynomial")
    dp = K.poly_derivative(c.tolist())
    res = float(np.linalg.det(_sylvester(c.tolist(), dp)))
    return res if (d * (d - 1) // 2) % 2 == 0 else -res
