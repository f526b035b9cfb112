"""Closed-form collision and boundedness verdicts for d=2 and d=3.

At d=2 one Hankel determinant decides both questions.  At d=3 the decision
reduces to a degree-4 polynomial in the line parameter whose leading
coefficient has an explicit 2x2-determinant expression; this module builds
that quartic by interpolation along the line and cross-checks it against the
closed form, so the verdicts can be certified against the numeric domain
machinery instead of trusted on faith.

Sign convention: `discriminant_cubic_paper` is the negative of the standard
cubic discriminant, so negative values mean three distinct real roots.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import poly_engine, prony_line
from .errors import InterpolationInconsistency

__all__ = [
    "Classification",
    "classify_d2",
    "classify_d3",
    "discriminant_cubic_paper",
    "quartic_Pmu",
    "P8_closed_form",
    "P8_second_form",
    "K_value",
]

logger = logging.getLogger(__name__)

# Verdicts become "indeterminate" when the deciding quantity sits within
# _INDET_REL of zero, measured against what its own monomials add up to
# before cancellation (term-magnitude scale).  The underlying statements are
# strict inequalities, so near-zero pivots are genuinely undecidable in
# floating point.
_INDET_REL = 1e-6

# Agreement required between the interpolated quartic and a fresh evaluation.
_INTERP_RTOL = 1e-8

_VERDICTS = ("yes", "no", "indeterminate")


@dataclass(frozen=True, eq=False)
class Classification:
    """Collision / boundedness verdict for one moment vector.

    collision and bounded are "yes", "no", or "indeterminate"; evidence
    carries the numbers the verdict was read from (det M always; for d=3
    additionally the quartic coefficients, K, the hypothesis flags, and the
    numeric domain intervals used as a cross-check).
    """

    d: int
    collision: str
    bounded: str
    evidence: dict

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError("classification covers d=2 and d=3 only")
        if self.collision not in _VERDICTS:
            raise ValueError(f"unsupported collision verdict {self.collision!r}")
        if self.bounded not in _VERDICTS:
            raise ValueError(f"unsupported bounded verdict {self.bounded!r}")


def _moment_scale(mu: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(mu))))


def discriminant_cubic_paper(sigma) -> float:
    """27*s3^2 + 4*s2^3 - s1^2*s2^2 + 4*s1^3*s3 - 18*s1*s2*s3 for the monic
    cubic z^3 + s1*z^2 + s2*z + s3.

    Negative iff the cubic has three distinct real roots; equals the negative
    of the standard discriminant.
    """
    s = np.asarray(getattr(sigma, "sigma", sigma), dtype=float)
    if s.shape != (3,):
        raise ValueError("expected exactly three symmetric coordinates")
    if not np.all(np.isfinite(s)):
        raise ValueError("symmetric coordinates must be finite")
    s1, s2, s3 = (float(v) for v in s)
    return (27.0 * s3 * s3 + 4.0 * s2 ** 3 - s1 * s1 * s2 * s2
            + 4.0 * s1 ** 3 * s3 - 18.0 * s1 * s2 * s3)


def _delta_term_scale(s1: float, s2: float, s3: float) -> float:
    # Magnitude the five monomials of the cubic discriminant add up to before
    # cancellation; the natural yardstick for "is this value really nonzero".
    return (27.0 * s3 * s3 + 4.0 * abs(s2) ** 3 + s1 * s1 * s2 * s2
            + 4.0 * abs(s1) ** 3 * abs(s3) + 18.0 * abs(s1 * s2 * s3))


def _check_length(mu, n: int) -> np.ndarray:
    m = np.asarray(getattr(mu, "values", mu), dtype=float)
    if m.shape != (n,):
        raise ValueError(f"expected a moment vector of length {n}")
    if not np.all(np.isfinite(m)):
        raise ValueError("moments must be finite")
    return m


def P8_closed_form(mu) -> float:
    """Leading (t^4) coefficient of the denominator-cleared quartic, as the
    explicit combination 4*d1^3*d2 - d1^2*d3^2 of 2x2 Hankel determinants
    d1 = mu0*mu2 - mu1^2, d2 = mu1*mu3 - mu2^2, d3 = mu0*mu3 - mu1*mu2.
    """
    m = _check_length(mu, 5)
    d1 = m[0] * m[2] - m[1] * m[1]
    d2 = m[1] * m[3] - m[2] * m[2]
    d3 = m[0] * m[3] - m[1] * m[2]
    return float(4.0 * d1 ** 3 * d2 - d1 * d1 * d3 * d3)


def K_value(mu) -> float:
    """discriminant_cubic_paper at (3*mu1/mu0, 3*mu2/mu0, mu3/mu0).

    Scale-invariant in mu; its sign decides boundedness at d=3 when the
    hypotheses of classify_d3 hold.  Requires mu0 != 0.
    """
    m = np.asarray(getattr(mu, "values", mu), dtype=float)
    if m.ndim != 1 or m.size < 4:
        raise ValueError("need at least the first four moments")
    if not np.all(np.isfinite(m[:4])):
        raise ValueError("moments must be finite")
    if m[0] == 0.0:
        raise ValueError("K is undefined for a zero leading moment")
    return discriminant_cubic_paper(
        (3.0 * m[1] / m[0], 3.0 * m[2] / m[0], m[3] / m[0]))


def P8_second_form(mu) -> float:
    """-(mu0^4/27) * d1^2 * K_value(mu); identical to P8_closed_form whenever
    mu0 != 0 (the division by mu0 inside K cancels against the mu0^4)."""
    m = _check_length(mu, 5)
    if m[0] == 0.0:
        raise ValueError("the second form needs a nonzero leading moment")
    d1 = m[0] * m[2] - m[1] * m[1]
    return float(-(m[0] ** 4 / 27.0) * d1 * d1 * K_value(m))


def quartic_Pmu(mu) -> poly_engine.Poly:
    """Degree <= 4 polynomial in t whose real roots are the finite endpoints
    of the hyperbolic parameter set of the one-missing-moment line at d=3.

    Computed as det(M)^4 times the cubic discriminant along the line,
    recovered from five samples; the denominator clearing makes every
    coefficient polynomial in the moments, with P8_closed_form leading.

    Raises DegenerateHankel through line_params and
    InterpolationInconsistency if a sixth fresh evaluation disagrees with the
    interpolant beyond relative 1e-8.
    """
    m = _check_length(mu, 5)
    line = prony_line.line_params(m)
    scale4 = line.detM ** 4

    # Interpolate in u = t/S so the Vandermonde solve stays conditioned even
    # on lines whose interesting range sits far from the origin.
    S = 1.0
    big = float(np.max(np.abs(line.slopes)))
    if big > 0.0:
        S = max(1.0, float(np.max(np.abs(line.intercepts))) / big)

    u_grid = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])

    def cleared_disc(u):
        return scale4 * discriminant_cubic_paper(line.sigma_at(S * u))

    values = np.array([cleared_disc(u) for u in u_grid])
    c_u = np.linalg.solve(npoly.polyvander(u_grid, 4), values)
    c_t = c_u / S ** np.arange(5)

    u6 = 0.5
    fresh = cleared_disc(u6)
    interp = float(npoly.polyval(u6, c_u))
    ref = max(abs(fresh), abs(interp), float(np.max(np.abs(values))))
    if abs(fresh - interp) > _INTERP_RTOL * max(ref, 1e-300):
        raise InterpolationInconsistency(
            "quartic interpolation failed its holdout check: "
            f"fresh={fresh:.17g} interpolated={interp:.17g}")
    return poly_engine.Poly.from_coeffs(c_t)


def classify_d2(mu) -> Classification:
    """Collision iff det M < 0; no moment vector gives a bounded family.

    Degenerate Hankel matrices are rejected (DegenerateHankel); within
    _INDET_REL of det M = 0 the collision verdict abstains.
    """
    m = _check_length(mu, 3)
    line = prony_line.line_params(m)
    detM = line.detM
    tol = _INDET_REL * max(1.0, abs(m[0] * m[2]) + m[1] * m[1])
    if abs(detM) <= tol:
        collision = "indeterminate"
    else:
        collision = "yes" if detM < 0.0 else "no"
    return Classification(d=2, collision=collision, bounded="no",
                          evidence={"detM": detM})


def _domain_evidence(line) -> dict:
    try:
        dom = prony_line.hyperbolic_domain(line)
    except InterpolationInconsistency as exc:
        logger.warning("domain evidence unavailable: %s", exc)
        return {"domain_intervals": None, "domain_all_bounded": None,
                "domain_error": str(exc)}
    return {
        "domain_intervals": dom.intervals,
        "domain_all_bounded": all(
            np.isfinite(lo) and np.isfinite(hi) for lo, hi in dom.intervals),
    }


def classify_d3(mu) -> Classification:
    """Collision iff the cleared quartic has a real root (Sturm count, exact
    for the computed coefficients); bounded iff K < 0, decided only while
    mu0, the top-left 2x2 Hankel determinant, and P8 are all safely nonzero.

    Whenever a pivot quantity falls inside its indeterminate band the verdict
    abstains.  The numeric hyperbolic-set intervals are always attached as
    evidence so callers can cross-examine the closed-form answer.
    """
    m = _check_length(mu, 5)
    line = prony_line.line_params(m)
    quartic = quartic_Pmu(m)
    s = _moment_scale(m)

    d1 = m[0] * m[2] - m[1] * m[1]
    d2 = m[1] * m[3] - m[2] * m[2]
    d3 = m[0] * m[3] - m[1] * m[2]
    p8 = P8_closed_form(m)
    p8_scale = 4.0 * abs(d1) ** 3 * abs(d2) + (d1 * d3) ** 2
    p8_ok = abs(p8) > _INDET_REL * max(1.0, p8_scale)
    mu0_ok = abs(m[0]) > _INDET_REL * s
    d1_ok = abs(d1) > _INDET_REL * max(1.0, abs(m[0] * m[2]) + m[1] * m[1])

    if p8_ok:
        n_real = poly_engine.sturm_count(quartic, -np.inf, np.inf)
        collision = "yes" if n_real >= 1 else "no"
    else:
        # With the leading coefficient this close to zero the quartic's
        # behaviour at infinity, and with it the root count, is unreliable.
        n_real = None
        collision = "indeterminate"

    K = None
    if m[0] != 0.0:
        K = K_value(m)
    if not (mu0_ok and d1_ok and p8_ok):
        bounded = "indeterminate"
    else:
        r1, r2, r3 = 3.0 * m[1] / m[0], 3.0 * m[2] / m[0], m[3] / m[0]
        k_tol = _INDET_REL * max(1.0, _delta_term_scale(r1, r2, r3))
        if K < -k_tol:
            bounded = "yes"
        elif K > k_tol:
            bounded = "no"
        else:
            bounded = "indeterminate"

    coeffs = np.zeros(5)
    coeffs[: len(quartic.coefficients)] = quartic.coefficients
    evidence = {
        "detM": line.detM,
        "quartic_coefficients": tuple(float(c) for c in coeffs[::-1]),
        "P8": p8,
        "K": K,
        "real_root_count": n_real,
        "mu0_ok": mu0_ok,
        "d1_ok": d1_ok,
        "p8_ok": p8_ok,
    }
    evidence.update(_domain_evidence(line))
    return Classification(d=3, collision=collision, bounded=bounded,
                          evidence=evidence)
