"""Signals, moments, symmetric coordinates, and amplitude recovery.

A signal is a finite spike train: amplitudes a_1..a_d attached to strictly
increasing nodes x_1..x_d.  Its order-q moment vector is mu_k = sum_i a_i *
x_i^k for k = 0..q.  Symmetric coordinates are the signed elementary
symmetric functions s_k = (-1)^k e_k(X), i.e. the coefficients of the monic
node polynomial Q(z) = prod (z - x_i) = z^d + s1 z^(d-1) + ... + sd.  That
sign convention is fixed here and consumed by every other module.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import poly_engine
from .errors import InconsistentComputation, NotHyperbolic, RepeatedNodes

__all__ = [
    "Signal",
    "MomentVector",
    "SymmetricCoords",
    "compute_moments",
    "elementary_symmetric",
    "vieta_inverse",
    "amplitudes_from_nodes",
    "ROUND_TRIP_RTOL",
]

# Default relative tolerance for the round-trip identities of this module.
ROUND_TRIP_RTOL = 1e-9


def _as_float_vector(values, name):
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    v = v.copy()
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class Signal:
    """Spike train with strictly increasing nodes and nonzero amplitudes."""

    amplitudes: np.ndarray
    nodes: np.ndarray

    def __post_init__(self):
        a = _as_float_vector(self.amplitudes, "amplitudes")
        x = _as_float_vector(self.nodes, "nodes")
        if len(a) != len(x):
            raise ValueError("amplitudes and nodes must have equal length")
        if np.any(a == 0.0):
            raise ValueError("amplitudes must be nonzero")
        if np.any(np.diff(x) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "nodes", x)

    @property
    def d(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class MomentVector:
    """Moment sequence (mu_0, ..., mu_q) of order q."""

    values: np.ndarray
    q: int = -1

    def __post_init__(self):
        v = _as_float_vector(self.values, "moments")
        q = self.q if self.q >= 0 else len(v) - 1
        if len(v) != q + 1:
            raise ValueError(f"expected {q + 1} moments, got {len(v)}")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "q", q)

    def truncated(self, q: int) -> "MomentVector":
        if not 0 <= q <= self.q:
            raise ValueError("truncation order out of range")
        return MomentVector(self.values[: q + 1])

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class SymmetricCoords:
    """Coefficient vector (s1, ..., sd) of a monic degree-d polynomial."""

    sigma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma", _as_float_vector(self.sigma, "sigma"))

    @property
    def d(self) -> int:
        return len(self.sigma)

    @cached_property
    def hyperbolic(self) -> bool:
        """True iff the polynomial has d real distinct roots (Sturm count)."""
        return poly_engine.is_hyperbolic(self.sigma)

    def poly(self) -> poly_engine.Poly:
        return poly_engine.monic_from_sigma(self.sigma)


def compute_moments(signal: Signal, q: int) -> MomentVector:
    """Moments mu_k = sum_i a_i x_i^k, k = 0..q.

    Summation is plain left-to-right in node order, so results are
    reproducible to the bit across runs and platforms.
    """
    if q < 0:
        raise ValueError("q must be nonnegative")
    a = signal.amplitudes
    x = signal.nodes
    out = np.empty(q + 1)
    for k in range(q + 1):
        acc = 0.0
        for i in range(len(a)):
            acc += a[i] * x[i] ** k
        out[k] = acc
    return MomentVector(out)


def elementary_symmetric(nodes) -> SymmetricCoords:
    """Signed symmetric functions s_k = (-1)^k e_k of the node vector, i.e.
    the coefficients of prod (z - x_i) below the leading 1."""
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("nodes must be a nonempty 1-d sequence")
    # ascending coefficients of the monic product, built one factor at a time
    c = [1.0]
    for xi in x:
        nxt = [0.0] * (len(c) + 1)
        for k in range(len(c)):
            nxt[k + 1] += c[k]
            nxt[k] -= xi * c[k]
        c = nxt
    d = len(x)
    sigma = np.array([c[d - k] for k in range(1, d + 1)])
    return SymmetricCoords(sigma)


def vieta_inverse(sigma) -> np.ndarray:
    """Sorted real roots of z^d + s1 z^(d-1) + ... + sd.

    Raises NotHyperbolic unless the polynomial has d real distinct roots.
    """
    s = np.asarray(getattr(sigma, "sigma", sigma), dtype=float)
    if not poly_engine.is_hyperbolic(s):
        raise NotHyperbolic("polynomial does not have d real distinct roots")
    roots = poly_engine.real_roots(poly_engine.monic_from_sigma(s))
    if len(roots) != len(s):
        raise InconsistentComputation(
            f"Sturm count promised {len(s)} distinct roots, refinement found {len(roots)}"
        )
    return roots


def amplitudes_from_nodes(mu, nodes) -> np.ndarray:
    """Amplitudes recovered from the first d moments at known nodes.

    Implements the explicit Vandermonde-inverse formula
    a_k = [sum_j r_{d-1-j}(X \\ x_k) * mu_j] / L_k(X), where r_i are the
    signed symmetric functions of the remaining nodes (r_0 = 1) and
    L_k = prod_{i != k} (x_k - x_i).  A generic linear solve is kept out of
    the library on purpose; it serves as a test oracle only.
    """
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("nodes must be a nonempty 1-d sequence")
    d = len(x)
    values = np.asarray(getattr(mu, "values", mu), dtype=float)
    if len(values) < d:
        raise ValueError(f"need at least {d} moments, got {len(values)}")

    out = np.empty(d)
    for k in range(d):
        lagrange = 1.0
        for i in range(d):
            if i != k:
                lagrange *= x[k] - x[i]
        if lagrange == 0.0:
            raise RepeatedNodes(f"node {x[k]} repeats; Lagrange denominator vanishes")
        rest = np.delete(x, k)
        if len(rest):
            rho = elementary_symmetric(rest).sigma  # rho[i-1] = r_i
        else:
            rho = np.empty(0)
        acc = 0.0
        for j in range(d):
            order = d - 1 - j
            coeff = 1.0 if order == 0 else rho[order - 1]
            acc += coeff * values[j]
        out[k] = acc / lagrange
    return out
