"""Real root isolation and exact real algebraic numbers.

A real algebraic number is held as (square-free primitive integer
defining polynomial, isolating rational interval).  Point intervals
(lo == hi) hold exact rationals.  For proper intervals the defining
polynomial is nonzero at both endpoints and has exactly one root
strictly inside.  Values are immutable; refinement returns new objects.

Sign decisions are exact: zero is certified either through a gcd with
the defining polynomial (one algebraic coordinate) or through a
computed lower bound on the nonzero roots of a resultant-based norm
(several algebraic coordinates), never from a small numeric value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from regcad import intpoly
from regcad.poly import MultiPoly, PolyError, exact_div, gcd_poly, resultant

# ---------------------------------------------------------------------------
# univariate helpers on ascending Fraction / int coefficient lists


def uni_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def uni_degree(c) -> int:
    return len(c) - 1


def uni_derivative(c):
    return [c[i] * i for i in range(1, len(c))]


def uni_to_int(c: Sequence[Fraction]) -> list[int]:
    """Scale to primitive integer coefficients with positive leading one."""
    c = uni_trim([Fraction(x) for x in c])
    if not c:
        return []
    den = 1
    for q in c:
        den = den * q.denominator // _gcd(den, q.denominator)
    ints = [int(q * den) for q in c]
    g = 0
    for a in ints:
        g = _gcd(g, abs(a))
    ints = [a // g for a in ints]
    if ints[-1] < 0:
        ints = [-a for a in ints]
    return ints


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def uni_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db = uni_degree(b)
    lc = b[-1]
    while uni_degree(a) >= db and a:
        q = a[-1] / lc
        shift = uni_degree(a) - db
        for i in range(db + 1):
            a[shift + i] -= q * b[i]
        a.pop()
        uni_trim(a)
    return a


def uni_gcd_int(c1: Sequence[int], c2: Sequence[int]) -> list[int]:
    """gcd of two integer polynomials, returned primitive with positive lead."""
    a = [Fraction(x) for x in c1]
    b = [Fraction(x) for x in c2]
    uni_trim(a)
    uni_trim(b)
    while b:
        a, b = b, uni_rem(a, b)
    return uni_to_int(a)


def uni_square_free(c: Sequence[Fraction]) -> list[int]:
    ints = uni_to_int(c)
    if len(ints) <= 1:
        return ints
    g = uni_gcd_int(ints, uni_to_int(uni_derivative([Fraction(x) for x in ints])))
    if len(g) <= 1:
        return ints
    q = _uni_exact_div_int(ints, g)
    return q


def _uni_exact_div_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    fa = [Fraction(x) for x in a]
    fb = [Fraction(x) for x in b]
    out = [Fraction(0)] * (len(fa) - len(fb) + 1)
    while uni_trim(fa) and uni_degree(fa) >= uni_degree(fb):
        q = fa[-1] / fb[-1]
        shift = uni_degree(fa) - uni_degree(fb)
        out[shift] = q
        for i in range(len(fb)):
            fa[shift + i] -= q * fb[i]
        fa.pop()
    return uni_to_int(out)


def uni_sign_at(c: Sequence[int], x: Fraction) -> int:
    """Sign of the integer polynomial at the exact rational x."""
    x = Fraction(x)
    v = intpoly.eval_qq(list(c), x.numerator, x.denominator)
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------------------
# RealAlgebraic


class RealAlgebraic:
    """An exact real algebraic number with a refinable isolating interval."""

    __slots__ = ("defining", "lo", "hi")

    def __init__(self, defining: Sequence[int], lo: Fraction, hi: Fraction):
        self.defining = tuple(int(a) for a in defining)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if self.lo > self.hi:
            raise ValueError("empty isolating interval")

    @classmethod
    def from_rational(cls, r) -> "RealAlgebraic":
        r = Fraction(r)
        return cls((-r.numerator, r.denominator), r, r)

    def is_rational(self) -> bool:
        return self.lo == self.hi

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not certified rational")
        return self.lo

    def refined(self, width: Fraction) -> "RealAlgebraic":
        """Same root, interval width at most ``width``."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        lo, hi = self.lo, self.hi
        if lo == hi:
            return self
        slo = uni_sign_at(self.defining, lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            sm = uni_sign_at(self.defining, mid)
            if sm == 0:
                return RealAlgebraic(self.defining, mid, mid)
            if sm == slo:
                lo = mid
            else:
                hi = mid
        return RealAlgebraic(self.defining, lo, hi)

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def approx(self, width: Fraction) -> Fraction:
        return self.refined(width).midpoint()

    def __float__(self) -> float:
        return float(self.approx(Fraction(1, 1 << 60)))

    def interval(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)

    def __repr__(self) -> str:
        if self.is_rational():
            return f"RealAlgebraic({self.lo})"
        return f"RealAlgebraic({list(self.defining)}, [{self.lo}, {self.hi}])"

    def __eq__(self, other) -> bool:
        return isinstance(other, RealAlgebraic) and compare(self, other) == 0

    __hash__ = None  # value equality crosses defining polynomials

    def __lt__(self, other) -> bool:
        return compare(self, other) < 0

    def __le__(self, other) -> bool:
        return compare(self, other) <= 0


def compare(a: RealAlgebraic, b: RealAlgebraic) -> int:
    """Exact order of the represented reals: -1, 0 or +1."""
    if a.is_rational() and b.is_rational():
        x, y = a.lo, b.lo
        return (x > y) - (x < y)
    if a.is_rational():
        return -_cmp_alg_rational(b, a.lo)
    if b.is_rational():
        return _cmp_alg_rational(a, b.lo)
    ra, rb = a, b
    g: list[int] | None = None
    while True:
        if ra.hi < rb.lo:
            return -1
        if rb.hi < ra.lo:
            return 1
        if g is None:
            g = uni_gcd_int(ra.defining, rb.defining)
        if len(g) > 1:
            lo = max(ra.lo, rb.lo)
            hi = min(ra.hi, rb.hi)
            s1, s2 = uni_sign_at(g, lo), uni_sign_at(g, hi)
            if s1 == 0 or s2 == 0 or s1 != s2:
                return 0
        w = min(ra.hi - ra.lo, rb.hi - rb.lo) / 4
        if w == 0:
            w = Fraction(1, 16)
        ra = ra.refined(w)
        rb = rb.refined(w)
        if ra.is_rational() and rb.is_rational():
            return (ra.lo > rb.lo) - (ra.lo < rb.lo)
        if ra.is_rational():
            return -_cmp_alg_rational(rb, ra.lo)
        if rb.is_rational():
            return _cmp_alg_rational(ra, rb.lo)


def _cmp_alg_rational(a: RealAlgebraic, r: Fraction) -> int:
    """Sign of (a - r), exact, one bisection step."""
    if r < a.lo:
        return 1
    if r > a.hi:
        return -1
    sr = uni_sign_at(a.defining, r)
    if sr == 0:
        # r is a root of the defining polynomial inside the isolating
        # interval, hence it is the represented root
        return 0
    shi = uni_sign_at(a.defining, a.hi)
    return 1 if sr != shi else -1


def refine(a: RealAlgebraic, width) -> RealAlgebraic:
    return a.refined(Fraction(width))


def separate(roots: list[RealAlgebraic]) -> list[RealAlgebraic]:
    """Refine a sorted list of distinct roots until closed intervals are disjoint."""
    roots = list(roots)
    for i in range(len(roots) - 1):
        while roots[i].hi >= roots[i + 1].lo:
            w = roots[i].hi - roots[i].lo
            w2 = roots[i + 1].hi - roots[i + 1].lo
            target = max(w, w2) / 4
            if target == 0:
                target = Fraction(1, 1 << 8)
            roots[i] = roots[i].refined(target)
            roots[i + 1] = roots[i + 1].refined(target)
    return roots


# ---------------------------------------------------------------------------
# root isolation (Descartes bisection on the square-free part)


def isolate_real_roots(f: MultiPoly) -> list[RealAlgebraic]:
    """Isolate the distinct real roots of a univariate polynomial.

    One RealAlgebraic per distinct real root of the square-free part,
    ascending, with pairwise disjoint isolating intervals.
    """
    if f.is_zero():
        raise PolyError("zero polynomial")
    vs = f.variables()
    if len(vs) > 1:
        raise PolyError("polynomial is not univariate")
    var = vs.pop() if vs else 0
    return isolate_coeff_roots(f.univariate_coeffs(var))


def isolate_coeff_roots(coeffs: Sequence[Fraction]) -> list[RealAlgebraic]:
    c = uni_square_free(coeffs)
    if not c:
        raise PolyError("zero polynomial")
    if len(c) == 1:
        return []
    roots: list[RealAlgebraic] = []
    if c[0] == 0:
        roots.append(RealAlgebraic.from_rational(0))
        k = 1
        while c[k] == 0:  # cannot happen for square-free, kept for safety
            k += 1
        c = c[k:]
        if len(c) == 1:
            return roots
    bound = _root_bound_pow2(c)
    n = len(c) - 1
    pos = [c[i] * bound**i for i in range(n + 1)]
    for kind, a, b in _descartes_01(pos):
        if kind == "point":
            roots.append(RealAlgebraic.from_rational(a * bound))
        else:
            roots.append(_make_interval_root(c, a * bound, b * bound))
    neg_c = [(-1) ** i * c[i] for i in range(n + 1)]
    negp = [neg_c[i] * bound**i for i in range(n + 1)]
    for kind, a, b in _descartes_01(negp):
        if kind == "point":
            roots.append(RealAlgebraic.from_rational(-a * bound))
        else:
            roots.append(_make_interval_root(c, -b * bound, -a * bound))
    roots.sort(key=lambda r: (r.lo, r.hi))
    return separate(roots)


def _root_bound_pow2(c: list[int]) -> int:
    lead = abs(c[-1])
    m = max(abs(a) for a in c[:-1]) if len(c) > 1 else 0
    b = 1
    while b * lead <= lead + m:
        b <<= 1
    return b


def _descartes_01(scaled: list[int]):
    """Yield isolated roots of the integer polynomial inside (0, 1).

    ``scaled`` are the coefficients after mapping the interval of
    interest onto (0, 1).  Yields ('point', m, m) for exact rational
    hits at dyadic midpoints and ('interval', a, b) otherwise, with
    a, b Fractions inside [0, 1], in ascending order.
    """
    work = [(Fraction(0), Fraction(1), [int(a) for a in scaled])]
    out = []
    while work:
        lo, hi, q = work.pop()
        v = intpoly.descartes_0_1(q)
        if v == 0:
            continue
        if v == 1:
            out.append(("interval", lo, hi))
            continue
        mid = (lo + hi) / 2
        ql = intpoly.half_lower(q)
        qr = intpoly.shift1(ql)
        if qr[0] == 0:
            out.append(("point", mid, mid))
            qr = qr[1:]
        # push right first so the left half pops first (ascending output)
        work.append((mid, hi, qr))
        work.append((lo, mid, ql))
    out.sort(key=lambda t: t[1])
    return out


def _make_interval_root(defining: list[int], lo: Fraction, hi: Fraction) -> RealAlgebraic:
    # guarantee nonzero values at the endpoints (an endpoint may be an
    # adjacent root of the defining polynomial) so later sign logic is clean
    deriv = uni_to_int(uni_derivative([Fraction(a) for a in defining]))
    while True:
        slo = uni_sign_at(defining, lo)
        shi = uni_sign_at(defining, hi)
        if slo != 0 and shi != 0:
            return RealAlgebraic(defining, lo, hi)
        mid = (lo + hi) / 2
        sm = uni_sign_at(defining, mid)
        if sm == 0:
            return RealAlgebraic(defining, mid, mid)
        # sign just inside the left endpoint (roots are simple)
        eff = slo if slo != 0 else uni_sign_at(deriv, lo)
        if eff != sm:
            hi = mid
        else:
            lo = mid


# ---------------------------------------------------------------------------
# rational interval arithmetic


def iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def iv_mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def iv_pow(a, k: int):
    if k == 0:
        return (Fraction(1), Fraction(1))
    r = a
    for _ in range(k - 1):
        r = iv_mul(r, a)
    return r


def iv_scale(a, c: Fraction):
    lo, hi = a[0] * c, a[1] * c
    return (lo, hi) if c >= 0 else (hi, lo)


def eval_on_box(f: MultiPoly, box: Sequence[tuple[Fraction, Fraction]]):
    """Interval evaluation of f over a coordinate box (exact endpoints)."""
    total = (Fraction(0), Fraction(0))
    for e, c in f.terms.items():
        m = (Fraction(1), Fraction(1))
        for iv, k in zip(box, e):
            if k:
                m = iv_mul(m, iv_pow(iv, k))
        total = iv_add(total, iv_scale(m, c))
    return total


# ---------------------------------------------------------------------------
# points and exact sign evaluation


class Point:
    """A point with RealAlgebraic coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[RealAlgebraic]):
        self.coords = tuple(coords)

    @classmethod
    def of(cls, *vals) -> "Point":
        out = []
        for v in vals:
            if isinstance(v, RealAlgebraic):
                out.append(v)
            else:
                out.append(RealAlgebraic.from_rational(v))
        return cls(out)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> RealAlgebraic:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def box(self) -> list[tuple[Fraction, Fraction]]:
        return [(c.lo, c.hi) for c in self.coords]

    def refined(self, width: Fraction) -> "Point":
        return Point([c.refined(width) for c in self.coords])

    def approx(self, width: Fraction) -> tuple[Fraction, ...]:
        return tuple(c.approx(width) for c in self.coords)

    def __repr__(self) -> str:
        return f"Point({', '.join(repr(c) for c in self.coords)})"


def sign_at(f: MultiPoly, point: Point | Sequence[RealAlgebraic]) -> int:
    """Exact sign of f at a point with real algebraic coordinates."""
    coords = list(point.coords if isinstance(point, Point) else point)
    if f.is_zero():
        return 0
    if any(v >= len(coords) for v in f.variables()):
        raise PolyError("point dimension mismatch")
    coords = coords[: f.nvars]
    assign = {i: c.as_fraction() for i, c in enumerate(coords) if c.is_rational()}
    g = f.subst_partial(assign)
    alg = [(i, c) for i, c in enumerate(coords) if not c.is_rational()]
    alg = [(i, c) for i, c in alg if g.degree(i) > 0]
    if not alg:
        v = g.constant_value()
        return (v > 0) - (v < 0)

    # fast path: interval refinement only
    cur = [c for _, c in alg]
    for _ in range(3):
        box = _box_for(g, alg, cur)
        lo, hi = eval_on_box(g, box)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        cur = [c.refined((c.hi - c.lo) / 16) for c in cur]

    if len(alg) == 1:
        return _sign_one_algebraic(g, alg[0][0], cur[0])
    return _sign_many_algebraic(g, [(i, c) for (i, _), c in zip(alg, cur)])


def _box_for(g: MultiPoly, alg, cur) -> list[tuple[Fraction, Fraction]]:
    box = [(Fraction(0), Fraction(0))] * g.nvars
    for (i, _), c in zip(alg, cur):
        box[i] = (c.lo, c.hi)
    return box


def _sign_one_algebraic(g: MultiPoly, var: int, a: RealAlgebraic) -> int:
    h = [Fraction(0)] * (g.degree(var) + 1)
    for e, c in g.terms.items():
        h[e[var]] += c
    hs = uni_square_free(h)
    gg = uni_gcd_int(hs, list(a.defining))
    if len(gg) > 1:
        s1, s2 = uni_sign_at(gg, a.lo), uni_sign_at(gg, a.hi)
        if s1 == 0 or s2 == 0 or s1 != s2:
            return 0
    hi_int = uni_to_int(h)
    while True:
        a = a.refined((a.hi - a.lo) / 16)
        if a.is_rational():
            return uni_sign_at(hi_int, a.lo)
        lo, hi = eval_on_box(g, _box_for(g, [(var, a)], [a]))
        if lo > 0:
            return 1
        if hi < 0:
            return -1


def _sign_many_algebraic(g: MultiPoly, alg: list[tuple[int, RealAlgebraic]]) -> int:
    # norm of the value: eliminate each coordinate from (z - g) against its
    # defining polynomial; the value g(p) is a root of the result
    n = g.nvars
    zvar = n
    ext = MultiPoly(n + 1, {e + (0,): c for e, c in g.terms.items()})
    z = MultiPoly.var(n + 1, zvar)
    t = z - ext
    t = eliminate_coordinates(t, [(i, a) for i, a in alg], n + 1)
    r = t.univariate_coeffs(zvar)
    m = 0
    while r[m] == 0:
        m += 1
    bound = None
    if m > 0:
        tail = r[m:]
        c0 = abs(tail[0])
        rest = max((abs(x) for x in tail[1:]), default=Fraction(0))
        bound = c0 / (c0 + rest) if rest else Fraction(1)
    cur = [a for _, a in alg]
    while True:
        box = _box_for(g, alg, cur)
        lo, hi = eval_on_box(g, box)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if bound is not None and hi - lo < bound:
            # the value is a root of the norm smaller than every nonzero root
            return 0
        cur = [c.refined((c.hi - c.lo) / 16) for c in cur]
        alg = [(i, c) for (i, _), c in zip(alg, cur)]


def int_list_as_poly(coeffs: Sequence[int], var: int, nvars: int) -> MultiPoly:
    t = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * nvars
            e[var] = k
            t[tuple(e)] = Fraction(c)
    return MultiPoly(nvars, t)


def defining_as_poly(a: RealAlgebraic, var: int, nvars: int) -> MultiPoly:
    return int_list_as_poly(a.defining, var, nvars)


def eliminate_coordinates(
    t: MultiPoly, coords: list[tuple[int, RealAlgebraic]], nvars: int
) -> MultiPoly:
    """Eliminate algebraic coordinates from t by resultants with their
    defining polynomials.

    Defining polynomials are square-free, not irreducible, so a stray
    conjugate can annihilate t; such factors are stripped from the
    defining polynomial (when they miss the represented root) or divided
    out of t (when they hit it) before taking the resultant.
    """
    for i, a in coords:
        d = list(a.defining)
        while True:
            per_var = _coefficient_gcd_in_var(t, i)
            e = uni_gcd_int(d, per_var) if per_var else [1]
            if len(e) <= 1:
                break
            s1, s2 = uni_sign_at(e, a.lo), uni_sign_at(e, a.hi)
            if s1 != 0 and s2 != 0 and s1 == s2:
                d = _uni_exact_div_int(d, e)
                if len(d) <= 1:
                    raise PolyError("defining polynomial exhausted in elimination")
                break
            t = exact_div(t, int_list_as_poly(e, i, nvars))
        dp = int_list_as_poly(d, i, nvars)
        t = resultant(dp, t, i)
        if t.is_zero():
            raise PolyError("unexpected zero resultant in elimination")
    return t


def _coefficient_gcd_in_var(t: MultiPoly, var: int) -> list[int]:
    """gcd over monomials-in-other-vars of the univariate-in-var coefficient
    polynomials of t; [] when t is zero."""
    per_mono: dict[tuple[int, ...], dict[int, Fraction]] = {}
    for e, c in t.terms.items():
        key = tuple(k if j != var else 0 for j, k in enumerate(e))
        per_mono.setdefault(key, {})[e[var]] = c
    g: list[int] = []
    for mono in per_mono.values():
        coeffs = [Fraction(0)] * (max(mono) + 1)
        for k, c in mono.items():
            coeffs[k] = c
        g = uni_gcd_int(g, uni_to_int(coeffs)) if g else uni_to_int(coeffs)
        if len(g) == 1:
            return g
    return g


def roots_at_point(
    f: MultiPoly, base: Sequence[RealAlgebraic], var: int
) -> list[RealAlgebraic]:
    """Real roots of x -> f(base, x) in the variable ``var``.

    The base assigns all variables below ``var``; f(base, .) must not be
    identically zero (nullification is the caller's concern).
    """
    assign = {i: b.as_fraction() for i, b in enumerate(base) if i < var and b.is_rational()}
    g = f.subst_partial(assign)
    alg = [(i, b) for i, b in enumerate(base) if i < var and not b.is_rational() and g.degree(i) > 0]
    if not alg:
        coeffs = [Fraction(0)] * (g.degree(var) + 1)
        for e, c in g.terms.items():
            coeffs[e[var]] += c
        if not uni_trim(list(coeffs)):
            raise PolyError("polynomial vanishes identically at the base point")
        if uni_degree(uni_trim(list(coeffs))) < 1:
            return []
        return isolate_coeff_roots(coeffs)
    norm = eliminate_coordinates(g, alg, f.nvars)
    coeffs = [Fraction(0)] * (norm.degree(var) + 1)
    for e, c in norm.terms.items():
        coeffs[e[var]] += c
    if uni_degree(uni_trim(list(coeffs))) < 1:
        return []
    candidates = isolate_coeff_roots(coeffs)
    point = list(base[:var])
    out = []
    for r in candidates:
        probe = point + [r]
        if sign_at(f, probe) == 0:
            out.append(r)
    return out


def merge_roots(groups: list[list[RealAlgebraic]]) -> list[tuple[RealAlgebraic, list[int]]]:
    """Union of root lists; returns sorted (root, contributing-group-indices)."""
    items: list[tuple[RealAlgebraic, int]] = []
    for gi, roots in enumerate(groups):
        for r in roots:
            items.append((r, gi))
    merged: list[tuple[RealAlgebraic, list[int]]] = []
    for r, gi in items:
        placed = False
        for k, (s, gs) in enumerate(merged):
            if compare(r, s) == 0:
                gs.append(gi)
                placed = True
                break
        if not placed:
            merged.append((r, [gi]))
    merged.sort(key=lambda t: t[0])
    for k in range(len(merged) - 1):
        seps = separate([merged[k][0], merged[k + 1][0]])
        merged[k] = (seps[0], merged[k][1])
        merged[k + 1] = (seps[1], merged[k + 1][1])
    return merged
