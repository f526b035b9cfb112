"""Hankel matrices and the one-missing-moment solution line in sigma-space.

With all moments mu_0..mu_{2d-1} of a d-spike train known, the coefficients
of the monic node polynomial solve a single d x d linear system whose matrix
is the Hankel matrix of (mu_0, ..., mu_{2d-2}).  Drop the top moment and the
solution set becomes a line: substituting a free parameter t for the last
right-hand side entry and applying Cramer's rule makes every coordinate
sigma_j(t) an affine function of t.  This module constructs that line, the
open parameter set where the node polynomial keeps d real distinct roots,
and the residuals of the projected moment equations used to test membership
of a candidate node vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import poly_engine
from .errors import (
    DegenerateHankel,
    InconsistentComputation,
    InterpolationInconsistency,
    ResidualTooLarge,
)
from .signal_model import (
    MomentVector,
    Signal,
    SymmetricCoords,
    amplitudes_from_nodes,
    compute_moments,
    elementary_symmetric,
)

__all__ = [
    "HankelMatrix",
    "PronyLine",
    "DomainEndpoint",
    "HyperbolicDomain",
    "hankel",
    "line_params",
    "hyperbolic_domain",
    "projection_residuals",
    "lift_to_solution",
]

# det M below this fraction of the largest first minor counts as degenerate
_DEGENERATE_REL = 1e-12
# agreement required between the cofactor formulas and the two-point solve
_CROSS_CHECK_REL = 1e-6
# agreement required from the extra discriminant interpolation sample
_INTERP_CHECK_REL = 1e-6
# projected-system residuals below this (times scale) admit lifting
_LIFT_REL = 1e-8


def _det_cofactor(a: np.ndarray) -> float:
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    if n == 2:
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    acc = 0.0
    for j in range(n):
        sub = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        term = float(a[0, j]) * _det_cofactor(sub)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _det(a: np.ndarray) -> float:
    # exact cofactor recursion while cheap, pivoted LU beyond
    if a.shape[0] <= 4:
        return _det_cofactor(a)
    return float(np.linalg.det(a))


@dataclass(frozen=True, eq=False)
class HankelMatrix:
    """d x d matrix with entry (i, j) = mu_{i+j}, plus determinant and the
    full table of first minors.

    ``minors[i-1, j-1]`` is the determinant after deleting row i and column
    j (1-indexed); for d = 1 the table is [[1.0]], the empty determinant.
    """

    entries: np.ndarray
    determinant: float
    minors: np.ndarray

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    def minor(self, i: int, j: int) -> float:
        """First minor M_{i,j}, rows and columns numbered from 1."""
        if not (1 <= i <= self.d and 1 <= j <= self.d):
            raise ValueError("minor indices are 1-based and at most d")
        return float(self.minors[i - 1, j - 1])


def hankel(mu) -> HankelMatrix:
    """Hankel matrix of a moment vector of odd length 2d-1."""
    values = np.asarray(getattr(mu, "values", mu), dtype=float)
    if values.ndim != 1 or values.size == 0 or values.size % 2 == 0:
        raise ValueError("need an odd number of moments mu_0..mu_{2d-2}")
    d = (len(values) + 1) // 2
    m = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            m[i, j] = values[i + j]
    minors = np.empty((d, d))
    if d == 1:
        minors[0, 0] = 1.0
    else:
        for i in range(d):
            for j in range(d):
                sub = np.delete(np.delete(m, i, axis=0), j, axis=1)
                minors[i, j] = _det(sub)
    det = _det(m)
    m.setflags(write=False)
    minors.setflags(write=False)
    return HankelMatrix(entries=m, determinant=det, minors=minors)


@dataclass(frozen=True, eq=False)
class PronyLine:
    """Affine map t -> sigma(t) = slopes*t + intercepts solving the d moment
    equations with the top right-hand side entry replaced by t.

    ``slopes[j-1]`` and ``intercepts[j-1]`` belong to sigma_j.  The source
    moments (length 2d-1) and det M are kept for residual evaluation and
    downstream certificates.
    """

    d: int
    slopes: np.ndarray
    intercepts: np.ndarray
    detM: float
    mu: MomentVector

    def sigma_at(self, t: float) -> SymmetricCoords:
        return SymmetricCoords(self.slopes * float(t) + self.intercepts)

    def parameter_of(self, sigma) -> float:
        """The t value whose line point has these coordinates: the last
        moment equation evaluated at sigma."""
        s = np.asarray(getattr(sigma, "sigma", sigma), dtype=float)
        if len(s) != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {len(s)}")
        row = self.mu.values[self.d - 1 : 2 * self.d - 1]
        return float(np.dot(row, s[::-1]))

    def system_residuals(self, t: float) -> np.ndarray:
        """Left-hand sides of all d moment equations at sigma(t).

        The first d-1 entries must vanish for every t; the last entry is
        (last equation) - t and must vanish as well.
        """
        rev = self.sigma_at(t).sigma[::-1]  # (sigma_d, ..., sigma_1)
        v = self.mu.values
        d = self.d
        out = np.empty(d)
        for k in range(d - 1):
            out[k] = float(np.dot(v[k : k + d], rev)) + v[k + d]
        out[d - 1] = float(np.dot(v[d - 1 : 2 * d - 1], rev)) - float(t)
        return out


def line_params(mu) -> PronyLine:
    """Build the solution line from a moment vector of length 2d-1.

    Slopes and intercepts come from the cofactor (Cramer) formulas
    sigma_{d-k+1} slope = (-1)^(d+k) M_{d,k} / det M; the result is then
    cross-checked against a direct linear solve of the full system at two
    parameter values.  The two routes are kept deliberately independent.
    """
    mu = mu if isinstance(mu, MomentVector) else MomentVector(mu)
    H = hankel(mu)
    d = H.d
    max_minor = float(np.max(np.abs(H.minors)))
    if abs(H.determinant) <= _DEGENERATE_REL * max_minor:
        raise DegenerateHankel(
            f"det M = {H.determinant:.3e} is below {_DEGENERATE_REL} of the "
            f"largest first minor {max_minor:.3e}: nodes collide identically "
            "or an amplitude vanishes identically"
        )

    v = mu.values
    slopes = np.empty(d)
    intercepts = np.empty(d)
    for k in range(1, d + 1):
        j = d - k + 1
        slopes[j - 1] = (-1.0) ** (d + k) * H.minors[d - 1, k - 1] / H.determinant
        acc = 0.0
        for i in range(1, d):
            acc += (-1.0) ** (i + 1) * v[d + i - 1] * H.minors[i - 1, k - 1]
        intercepts[j - 1] = (-1.0) ** k * acc / H.determinant

    # independent route: solve M * (sigma_d..sigma_1)^T = rhs(t) at t = 0, 1
    # and recover the affine data from the two solutions
    rhs0 = np.concatenate([-v[d : 2 * d - 1], [0.0]])
    rhs1 = np.concatenate([-v[d : 2 * d - 1], [1.0]])
    sig0 = np.linalg.solve(H.entries, rhs0)[::-1]
    sig1 = np.linalg.solve(H.entries, rhs1)[::-1]
    tol = _CROSS_CHECK_REL * max(
        1.0, float(np.max(np.abs(slopes))), float(np.max(np.abs(intercepts)))
    )
    if (
        float(np.max(np.abs(sig1 - sig0 - slopes))) > tol
        or float(np.max(np.abs(sig0 - intercepts))) > tol
    ):
        raise InconsistentComputation(
            "cofactor line formulas disagree with the direct two-point solve"
        )

    slopes.setflags(write=False)
    intercepts.setflags(write=False)
    return PronyLine(d=d, slopes=slopes, intercepts=intercepts, detM=H.determinant, mu=mu)


@dataclass(frozen=True)
class DomainEndpoint:
    """Finite boundary point of the hyperbolic parameter set.

    kind is "collision-boundary" when exactly one side is hyperbolic and
    "puncture" when both sides are (an isolated interior collision).
    """

    t0: float
    kind: str


@dataclass(frozen=True, eq=False)
class HyperbolicDomain:
    """Open set of parameters where sigma(t) has d real distinct roots:
    disjoint sorted open intervals, possibly unbounded, possibly none."""

    intervals: tuple
    endpoints: tuple
    disc_poly: poly_engine.Poly

    @property
    def empty(self) -> bool:
        return len(self.intervals) == 0

    def contains(self, t: float) -> bool:
        return any(lo < t < hi for lo, hi in self.intervals)


def _interp_disc_poly(line: PronyLine, R: float) -> poly_engine.Poly:
    # Disc(Q_sigma(t)) restricted to the line is a polynomial in t of degree
    # at most 2d-2; recover it from 2d-1 samples at Chebyshev points, in the
    # scaled variable u = t/R for conditioning, and verify on a fresh sample.
    n = 2 * line.d - 1

    def disc_at(t):
        return poly_engine.discriminant(poly_engine.monic_from_sigma(line.sigma_at(t)))

    us = np.array([math.cos((2 * i + 1) * math.pi / (2 * n)) for i in range(n)])
    vals = np.array([disc_at(R * u) for u in us])
    cu = np.linalg.solve(np.vander(us, increasing=True), vals)
    ct = np.array([cu[k] / R**k for k in range(n)])

    u_check = math.cos(1.0)  # never a Chebyshev node
    exact = disc_at(R * u_check)
    approx = float(np.polynomial.polynomial.polyval(u_check, cu))
    denom = max(float(np.max(np.abs(vals))), abs(exact))
    if denom > 0.0 and abs(approx - exact) > _INTERP_CHECK_REL * denom:
        raise InterpolationInconsistency(
            f"discriminant interpolant off by {abs(approx - exact):.3e} "
            f"(budget {_INTERP_CHECK_REL * denom:.3e}) at the check sample"
        )
    return poly_engine.Poly.from_coeffs(ct)


def _turning_points(line: PronyLine) -> list[float]:
    # where an individual sigma coordinate crosses zero; these set the
    # natural parameter scales of the line
    out = []
    for s, b in zip(line.slopes, line.intercepts):
        if abs(s) > 1e-300:
            out.append(-b / s)
    return out


def _turning_radius(line: PronyLine) -> float:
    R = 1.0
    for t in _turning_points(line):
        R = max(R, 1.0 + abs(t))
    return R


def _bisect_disc(disc_at, a, b, fallback):
    """Zero of the exact restricted discriminant inside [a, b], by sign
    bisection; returns ``fallback`` when the ends do not bracket a sign
    change (tangential contact)."""
    fa, fb = disc_at(a), disc_at(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        return fallback
    while True:
        m = 0.5 * (a + b)
        if m == a or m == b:  # float resolution reached
            break
        fm = disc_at(m)
        if fm == 0.0:
            return m
        if (fm > 0.0) == (fa > 0.0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)


def _boundary_between(hyperbolic_at, t_in, t_out):
    # boolean bisection: t_in hyperbolic, t_out not
    a, b = t_in, t_out
    while True:
        m = 0.5 * (a + b)
        if m == a or m == b:  # float resolution reached
            break
        if hyperbolic_at(m):
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def _expand_window(hyperbolic_at, p):
    """Maximal hyperbolic interval around a hyperbolic point p, found by
    outward geometric expansion and boolean bisection on the exact root
    count.  Sides with no exit within ~20 orders of magnitude are taken as
    unbounded."""

    def edge(direction):
        step = 1e-3 * (1.0 + abs(p))
        t_in = p
        for _ in range(80):
            t_out = t_in + direction * step
            if not hyperbolic_at(t_out):
                return _boundary_between(hyperbolic_at, t_in, t_out)
            t_in = t_out
            step *= 2.0
        return direction * float("inf")

    return (edge(-1.0), edge(1.0))


def _expand_gap(hyperbolic_at, p):
    """Mirror of :func:`_expand_window`: maximal non-hyperbolic interval
    around a non-hyperbolic point p."""

    def edge(direction):
        step = 1e-3 * (1.0 + abs(p))
        t_in = p
        for _ in range(80):
            t_out = t_in + direction * step
            if hyperbolic_at(t_out):
                return _boundary_between(hyperbolic_at, t_out, t_in)
            t_in = t_out
            step *= 2.0
        return direction * float("inf")

    return (edge(-1.0), edge(1.0))


def hyperbolic_domain(line: PronyLine) -> HyperbolicDomain:
    """Parameter set where the line's node polynomial is real-rooted with
    distinct roots.

    Candidate endpoints are the real roots of the restricted discriminant;
    each candidate subinterval is accepted or rejected by a root-count probe
    at its midpoint (or at +-(|r_max|+1) for unbounded pieces, with a
    further probe one decade out demanding the same answer).  An empty
    result is returned as such, not raised; consumers that need a nonempty
    domain raise on it.
    """
    inf = float("inf")
    if line.d == 1:
        # a monic linear polynomial always has its one real root
        one = poly_engine.Poly.from_coeffs([1.0])
        return HyperbolicDomain(intervals=((-inf, inf),), endpoints=(), disc_poly=one)

    def disc_at(t):
        return poly_engine.discriminant(poly_engine.monic_from_sigma(line.sigma_at(t)))

    # widen the sampling radius until every discriminant root sits well
    # inside it; roots near or past the radius are poorly determined by the
    # far tail of the interpolant
    R = _turning_radius(line)
    for _ in range(6):
        D = _interp_disc_poly(line, R)
        roots = [float(r) for r in poly_engine.real_roots(D)]
        r_far = max((abs(r) for r in roots), default=0.0)
        if r_far <= 0.7 * R:
            break
        R = 2.0 * max(r_far, R)
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= 1e-10 * (1.0 + abs(r)):
            continue
        merged.append(r)

    bounds = [-inf] + merged + [inf]
    candidates = list(zip(bounds[:-1], bounds[1:]))
    r_max = max((abs(r) for r in merged), default=0.0)

    def hyperbolic_at(t):
        return poly_engine.is_hyperbolic(line.sigma_at(t))

    accepted = []
    probes = []
    for lo, hi in candidates:
        if math.isinf(lo) and math.isinf(hi):
            probe, fars = 0.0, (-10.0, 10.0)
        elif math.isinf(lo):
            probe = -(r_max + 1.0)
            fars = (10.0 * probe,)
        elif math.isinf(hi):
            probe = r_max + 1.0
            fars = (10.0 * probe,)
        else:
            probe, fars = 0.5 * (lo + hi), ()
        ok = hyperbolic_at(probe)
        if any(hyperbolic_at(far) != ok for far in fars):
            raise InterpolationInconsistency(
                "root count changes past the last discriminant root: far "
                "structure missed by the interpolant"
            )
        accepted.append(ok)
        probes.append(probe)

    # pin each kept endpoint down on the exact discriminant: interpolant
    # roots can drift when the sampled values span many orders of magnitude
    refined = []
    for idx, r in enumerate(merged):
        if accepted[idx] or accepted[idx + 1]:
            refined.append(_bisect_disc(disc_at, probes[idx], probes[idx + 1], r))
        else:
            refined.append(r)

    bounds = [-inf] + refined + [inf]
    kept = [c for c, ok in zip(zip(bounds[:-1], bounds[1:]), accepted) if ok]

    # structural probes: the coordinate turning scales are where the
    # interpolant is most likely to have lost structure to rounding.  A
    # hyperbolic probe outside every kept interval pins the lost window by
    # direct expansion; a non-hyperbolic probe inside a kept interval carves
    # the lost gap out of it.
    for p in [0.0] + _turning_points(line):
        if any(abs(p - r) <= 1e-9 * (1.0 + abs(p)) for r in refined):
            continue
        cover = next((i for i, (lo, hi) in enumerate(kept) if lo < p < hi), None)
        if hyperbolic_at(p):
            if cover is None:
                kept.append(_expand_window(hyperbolic_at, p))
        elif cover is not None:
            lo, hi = kept.pop(cover)
            a, b = _expand_gap(hyperbolic_at, p)
            a, b = max(a, lo), min(b, hi)
            if a <= lo and b >= hi:
                raise InterpolationInconsistency(
                    f"non-hyperbolic probe at t={p:.6g} contradicts the whole "
                    "accepted interval around it"
                )
            if a > lo:
                kept.append((lo, a))
            if b < hi:
                kept.append((b, hi))

    kept.sort()
    swept: list = []
    for lo, hi in kept:
        if swept and lo < swept[-1][1]:
            swept[-1] = (swept[-1][0], max(swept[-1][1], hi))
        else:
            swept.append((lo, hi))

    endpoints = []
    for i, (lo, hi) in enumerate(swept):
        if math.isfinite(lo) and not (i > 0 and swept[i - 1][1] == lo):
            endpoints.append(DomainEndpoint(lo, "collision-boundary"))
        if math.isfinite(hi):
            if i + 1 < len(swept) and swept[i + 1][0] == hi:
                endpoints.append(DomainEndpoint(hi, "puncture"))
            else:
                endpoints.append(DomainEndpoint(hi, "collision-boundary"))
    return HyperbolicDomain(
        intervals=tuple(swept), endpoints=tuple(endpoints), disc_poly=D
    )


def projection_residuals(mu, X, q: int) -> np.ndarray:
    """Left-hand sides of the q-d+1 projected moment equations at nodes X.

    Entry k is mu_k*sigma_d + mu_{k+1}*sigma_{d-1} + ... + mu_{k+d-1}*sigma_1
    + mu_{k+d} with the signed symmetric functions of X; all entries vanish
    exactly when X is a node vector consistent with the moments.
    """
    x = np.asarray(X, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("X must be a nonempty 1-d sequence")
    d = len(x)
    if not d <= q <= 2 * d - 1:
        raise ValueError(f"order q={q} must satisfy d <= q <= 2d-1 for d={d}")
    values = np.asarray(getattr(mu, "values", mu), dtype=float)
    if len(values) != q + 1:
        raise ValueError(f"expected {q + 1} moments for order q={q}, got {len(values)}")
    rev = elementary_symmetric(x).sigma[::-1]  # (sigma_d, ..., sigma_1)
    out = np.empty(q - d + 1)
    for k in range(q - d + 1):
        out[k] = float(np.dot(values[k : k + d], rev)) + values[k + d]
    return out


def lift_to_solution(mu, X, q: int) -> Signal:
    """Signal on nodes X reproducing the full moment vector.

    Amplitudes come from the first d moments alone; the remaining q-d+1
    equations then hold automatically whenever the projected residuals
    vanish, and this is verified on the result rather than assumed.
    """
    mu = mu if isinstance(mu, MomentVector) else MomentVector(mu)
    x = np.asarray(X, dtype=float)
    res = projection_residuals(mu, x, q)
    rev_scale = float(np.max(np.abs(elementary_symmetric(x).sigma))) if len(x) else 0.0
    scale = max(1.0, float(np.max(np.abs(mu.values)))) * max(1.0, rev_scale)
    if float(np.max(np.abs(res), initial=0.0)) > _LIFT_REL * scale:
        raise ResidualTooLarge(
            f"projected residual {float(np.max(np.abs(res))):.3e} exceeds "
            f"{_LIFT_REL * scale:.3e}: nodes are not on the variety"
        )
    d = len(x)
    amps = amplitudes_from_nodes(mu.truncated(d - 1), x)
    signal = Signal(amplitudes=amps, nodes=x)
    back = compute_moments(signal, q).values
    if float(np.max(np.abs(back - mu.values))) > _LIFT_REL * scale:
        raise ResidualTooLarge(
            "lifted signal fails to reproduce the full moment vector"
        )
    return signal
