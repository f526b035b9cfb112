"""Pure-Python kernel lane.

Low-level polynomial primitives shared by the root machinery: Horner
evaluation, Taylor shifts, Sturm chains and sign-variation counting, plus the
bisection/Newton refinement loops.  Coefficients are plain lists of floats in
ascending degree order.  The compiled lane in ``_fast.pyx`` mirrors these
functions operation-for-operation so both lanes return bit-identical results.
"""

# Leading coefficients below this are treated as zero when counting
# variations at +-infinity; guards against subnormal garbage.
_SIGN_TINY = 1e-290

# Pointwise variation counting snaps an evaluation to zero when it is smaller
# than this multiple of its own Horner magnitude sum: at that size the true
# sign is unknowable in double precision and "x sits on a root" is the
# accurate reading.  An absolute cutoff is wrong here: chains built from
# subnormal-range coefficients produce honest values far below any fixed
# threshold.
_EVAL_GUARD = 1e-14

# Relative threshold below which a Sturm remainder counts as underflowed
# (inputs are rescaled to unit max-norm, so this is an absolute test too).
_REM_TOL = 1e-13

_TRIM_TOL = 1e-14


def horner(c, x):
    acc = 0.0
    for k in range(len(c) - 1, -1, -1):
        acc = acc * x + c[k]
    return acc


def poly_derivative(c):
    n = len(c)
    if n <= 1:
        return [0.0]
    return [k * c[k] for k in range(1, n)]


def max_abs(c):
    m = 0.0
    for v in c:
        a = abs(v)
        if a > m:
            m = a
    return m


def trim_coeffs(c, rel_tol=_TRIM_TOL):
    """Drop leading-degree coefficients below rel_tol * max|c|."""
    m = max_abs(c)
    if m == 0.0:
        return [0.0]
    cut = rel_tol * m
    n = len(c)
    while n > 1 and abs(c[n - 1]) <= cut:
        n -= 1
    return [float(c[k]) for k in range(n)]


def shifted_coeffs(c, x0):
    """Coefficients of P(x0 + h) in h; entry k equals P^(k)(x0) / k!."""
    a = [float(v) for v in c]
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += x0 * a[j + 1]
    return a


def sign_changes(vals, zero_tol):
    prev = 0
    count = 0
    for v in vals:
        if abs(v) <= zero_tol:
            continue
        s = 1 if v > 0.0 else -1
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def _rescale(c):
    m = max_abs(c)
    if m == 0.0 or m == 1.0:
        return list(c)
    inv = 1.0 / m
    return [v * inv for v in c]


def _poly_mod(num, den):
    # remainder of num / den; den trimmed with nonzero leading coefficient
    r = [float(v) for v in num]
    dn = len(den) - 1
    lead = den[dn]
    for k in range(len(r) - 1, dn - 1, -1):
        f = r[k] / lead
        if f != 0.0:
            for j in range(dn):
                r[k - dn + j] -= f * den[j]
        r[k] = 0.0
    return r[:dn] if dn > 0 else [0.0]


def sturm_chain(c):
    """Sturm chain of c, each element rescaled to unit max-norm.

    Ends early at (a positive multiple of) gcd(P, P') when a remainder
    underflows, which yields distinct-root counts for non-squarefree input.
    Returns [] when c is numerically the zero polynomial.
    """
    p0 = trim_coeffs(c)
    if max_abs(p0) == 0.0:
        return []
    p0 = _rescale(p0)
    chain = [p0]
    if len(p0) == 1:
        return chain
    p1 = trim_coeffs(poly_derivative(p0))
    p1 = _rescale(p1)
    chain.append(p1)
    while len(chain[-1]) > 1:
        rem = trim_coeffs(_poly_mod(chain[-2], chain[-1]))
        if max_abs(rem) <= _REM_TOL:
            break
        chain.append(_rescale([-v for v in rem]))
    return chain


def chain_variations(chain, x):
    prev = 0
    count = 0
    ax = abs(x)
    for c in chain:
        v = 0.0
        b = 0.0
        for k in range(len(c) - 1, -1, -1):
            v = v * x + c[k]
            b = b * ax + abs(c[k])
        if -_EVAL_GUARD * b <= v <= _EVAL_GUARD * b:
            continue
        s = 1 if v > 0.0 else -1
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def chain_variations_inf(chain, positive):
    prev = 0
    count = 0
    for c in chain:
        lead = c[len(c) - 1]
        if -_SIGN_TINY <= lead <= _SIGN_TINY:
            continue
        s = 1 if lead > 0.0 else -1
        if not positive and (len(c) - 1) % 2 == 1:
            s = -s
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def bisect_refine(c, lo, hi, lo_positive, rel_width):
    """Shrink a sign-change bracket (lo, hi) by bisection.

    lo_positive gives the sign of P on the lo side.  Returns the final
    bracket; collapses to (r, r) on an exact hit.
    """
    while (hi - lo) > rel_width * (1.0 + 0.5 * abs(lo + hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v = horner(c, mid)
        if v == 0.0:
            return mid, mid
        if (v > 0.0) == lo_positive:
            lo = mid
        else:
            hi = mid
    return lo, hi


def newton_polish(c, dc, x0, lo, hi, max_steps):
    """Newton steps from x0 constrained to [lo, hi]; on divergence the last
    in-bracket iterate (possibly x0 itself) is returned."""
    x = x0
    for _ in range(max_steps):
        df = horner(dc, x)
        if df == 0.0:
            break
        step = horner(c, x) / df
        xn = x - step
        if xn < lo or xn > hi or xn == x:
            break
        x = xn
        if abs(step) <= 1e-15 * (1.0 + abs(x)):
            break
    return x
