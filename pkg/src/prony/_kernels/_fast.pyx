# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel lane.

Mirrors pure.py operation-for-operation (same arithmetic, same order) so the
two lanes return bit-identical results; the build disables floating-point
contraction to keep it that way.
"""

from libc.stdlib cimport malloc, free
from libc.math cimport fabs

cdef double SIGN_TINY = 1e-290
cdef double EVAL_GUARD = 1e-14
cdef double REM_TOL = 1e-13
cdef double TRIM_TOL = 1e-14


cdef double* _to_c(object seq, Py_ssize_t* n_out) except NULL:
    cdef Py_ssize_t n = len(seq)
    cdef double* buf = <double*> malloc(n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = seq[i]
    n_out[0] = n
    return buf


cdef double _horner_seq(object c, double x):
    cdef Py_ssize_t k = len(c)
    cdef double acc = 0.0
    while k > 0:
        k -= 1
        acc = acc * x + <double> c[k]
    return acc


def horner(c, double x):
    return _horner_seq(c, x)


def poly_derivative(c):
    cdef Py_ssize_t n = len(c)
    if n <= 1:
        return [0.0]
    cdef list out = []
    cdef Py_ssize_t k
    for k in range(1, n):
        out.append(k * <double> c[k])
    return out


def max_abs(c):
    cdef double m = 0.0
    cdef double a
    cdef Py_ssize_t i
    for i in range(len(c)):
        a = fabs(<double> c[i])
        if a > m:
            m = a
    return m


def trim_coeffs(c, double rel_tol=TRIM_TOL):
    cdef double m = max_abs(c)
    if m == 0.0:
        return [0.0]
    cdef double cut = rel_tol * m
    cdef Py_ssize_t n = len(c)
    while n > 1 and fabs(<double> c[n - 1]) <= cut:
        n -= 1
    cdef list out = []
    cdef Py_ssize_t k
    for k in range(n):
        out.append(<double> c[k])
    return out


def shifted_coeffs(c, double x0):
    cdef Py_ssize_t n
    cdef double* a = _to_c(c, &n)
    cdef Py_ssize_t i, j
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += x0 * a[j + 1]
    cdef list out = []
    for i in range(n):
        out.append(a[i])
    free(a)
    return out


def sign_changes(vals, double zero_tol):
    cdef int prev = 0
    cdef int count = 0
    cdef int s
    cdef double v
    cdef Py_ssize_t i
    for i in range(len(vals)):
        v = <double> vals[i]
        if fabs(v) <= zero_tol:
            continue
        s = 1 if v > 0.0 else -1
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


cdef list _rescale(object c):
    cdef double m = max_abs(c)
    cdef list out = []
    cdef Py_ssize_t i
    if m == 0.0 or m == 1.0:
        for i in range(len(c)):
            out.append(<double> c[i])
        return out
    cdef double inv = 1.0 / m
    for i in range(len(c)):
        out.append((<double> c[i]) * inv)
    return out


cdef list _poly_mod(object num, object den):
    cdef Py_ssize_t n
    cdef double* r = _to_c(num, &n)
    cdef Py_ssize_t nd
    cdef double* dd = _to_c(den, &nd)
    cdef Py_ssize_t dn = nd - 1
    cdef double lead = dd[dn]
    cdef double f
    cdef Py_ssize_t k, j
    for k in range(n - 1, dn - 1, -1):
        f = r[k] / lead
        if f != 0.0:
            for j in range(dn):
                r[k - dn + j] -= f * dd[j]
        r[k] = 0.0
    cdef list out = []
    if dn > 0:
        for k in range(dn):
            out.append(r[k])
    else:
        out.append(0.0)
    free(r)
    free(dd)
    return out


def sturm_chain(c):
    cdef list p0 = trim_coeffs(c)
    if max_abs(p0) == 0.0:
        return []
    p0 = _rescale(p0)
    cdef list chain = [p0]
    if len(p0) == 1:
        return chain
    cdef list p1 = _rescale(trim_coeffs(poly_derivative(p0)))
    chain.append(p1)
    cdef list rem, neg
    cdef Py_ssize_t i, m
    m = len(chain)
    while len(<list> chain[m - 1]) > 1:
        rem = trim_coeffs(_poly_mod(chain[m - 2], chain[m - 1]))
        if max_abs(rem) <= REM_TOL:
            break
        neg = []
        for i in range(len(rem)):
            neg.append(-(<double> rem[i]))
        chain.append(_rescale(neg))
        m = len(chain)
    return chain


def chain_variations(chain, double x):
    cdef int prev = 0
    cdef int count = 0
    cdef int s
    cdef double v, b, cv
    cdef double ax = fabs(x)
    cdef Py_ssize_t k
    for c in chain:
        v = 0.0
        b = 0.0
        k = len(c)
        while k > 0:
            k -= 1
            cv = <double> c[k]
            v = v * x + cv
            b = b * ax + fabs(cv)
        if -EVAL_GUARD * b <= v <= EVAL_GUARD * b:
            continue
        s = 1 if v > 0.0 else -1
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def chain_variations_inf(chain, bint positive):
    cdef int prev = 0
    cdef int count = 0
    cdef int s
    cdef double lead
    cdef Py_ssize_t deg
    for c in chain:
        deg = len(c) - 1
        lead = <double> c[deg]
        if -SIGN_TINY <= lead <= SIGN_TINY:
            continue
        s = 1 if lead > 0.0 else -1
        if (not positive) and deg % 2 == 1:
            s = -s
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def bisect_refine(c, double lo, double hi, bint lo_positive, double rel_width):
    cdef Py_ssize_t n
    cdef double* b = _to_c(c, &n)
    cdef double mid, v, acc
    cdef Py_ssize_t k
    try:
        while (hi - lo) > rel_width * (1.0 + 0.5 * fabs(lo + hi)):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            acc = 0.0
            k = n
            while k > 0:
                k -= 1
                acc = acc * mid + b[k]
            v = acc
            if v == 0.0:
                return mid, mid
            if (v > 0.0) == lo_positive:
                lo = mid
            else:
                hi = mid
        return lo, hi
    finally:
        free(b)


def newton_polish(c, dc, double x0, double lo, double hi, int max_steps):
    cdef Py_ssize_t n, nd
    cdef double* b = _to_c(c, &n)
    cdef double* db = _to_c(dc, &nd)
    cdef double x = x0
    cdef double f, df, step, xn, acc
    cdef Py_ssize_t k
    cdef int it
    try:
        for it in range(max_steps):
            acc = 0.0
            k = nd
            while k > 0:
                k -= 1
                acc = acc * x + db[k]
            df = acc
            if df == 0.0:
                break
            acc = 0.0
            k = n
            while k > 0:
                k -= 1
                acc = acc * x + b[k]
            f = acc
            step = f / df
            xn = x - step
            if xn < lo or xn > hi or xn == x:
                break
            x = xn
            if fabs(step) <= 1e-15 * (1.0 + fabs(x)):
                break
        return x
    finally:
        free(b)
        free(db)
