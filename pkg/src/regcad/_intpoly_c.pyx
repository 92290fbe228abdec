# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _intpoly_py.

Coefficients stay Python ints (arbitrary precision); the win over the
pure version is loop overhead, which dominates at the small degrees the
isolation bisection works on.
"""


def shift1(c):
    """Coefficients of p(x+1), via the in-place Pascal triangle scheme."""
    cdef list out = list(c)
    cdef Py_ssize_t n = len(out)
    cdef Py_ssize_t i, j
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + out[j + 1]
    return out


def half_lower(c):
    """Coefficients of 2^deg * p(x/2)."""
    cdef list cc = list(c)
    cdef Py_ssize_t n = len(cc) - 1
    cdef Py_ssize_t i
    cdef list out = [None] * (n + 1)
    for i in range(n + 1):
        out[i] = cc[i] << (n - i)
    return out


def sign_variations(c):
    """Number of sign changes in the coefficient sequence, zeros skipped."""
    cdef int count = 0
    cdef int prev = 0
    cdef int s
    for a in c:
        if a == 0:
            continue
        s = 1 if a > 0 else -1
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def descartes_0_1(c):
    """Sign variations bounding the number of roots of p in the open (0,1)."""
    return sign_variations(shift1(list(c)[::-1]))


def eval_int(c, x):
    """p(x) for integer x, by Horner."""
    r = 0
    for a in reversed(c):
        r = r * x + a
    return r


def eval_qq(c, p, q):
    """q^deg * p-evaluated-at-p/q, an integer with the sign of p(p/q)."""
    cdef list cc = list(c)
    cdef Py_ssize_t n = len(cc) - 1
    cdef Py_ssize_t i
    r = cc[n]
    qq = 1
    for i in range(n - 1, -1, -1):
        qq = qq * q
        r = r * p + cc[i] * qq
    return r
