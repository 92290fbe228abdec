"""Pure-Python integer polynomial primitives.

These are the inner-loop operations of real root isolation and interval
refinement.  Coefficient lists are ascending (c[0] is the constant term)
with arbitrary-precision Python ints.  A compiled twin of this module
lives in _intpoly_c.pyx; both must stay behaviourally identical.
"""


def shift1(c):
    """Coefficients of p(x+1), via the in-place Pascal triangle scheme."""
    c = list(c)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += c[j + 1]
    return c


def half_lower(c):
    """Coefficients of 2^deg * p(x/2)."""
    n = len(c) - 1
    return [c[i] << (n - i) for i in range(n + 1)]


def sign_variations(c):
    """Number of sign changes in the coefficient sequence, zeros skipped."""
    count = 0
    prev = 0
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
    return sign_variations(shift1(c[::-1]))


def eval_int(c, x):
    """p(x) for integer x, by Horner."""
    r = 0
    for a in reversed(c):
        r = r * x + a
    return r


def eval_qq(c, p, q):
    """q^deg * p-evaluated-at-p/q, an integer with the sign of p(p/q)."""
    n = len(c) - 1
    r = c[n]
    qq = 1
    for i in range(n - 1, -1, -1):
        qq *= q
        r = r * p + c[i] * qq
    return r
