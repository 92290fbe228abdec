"""Exact multivariate polynomials over arbitrary-precision rationals.

Variables are x1 .. xn with the fixed order x1 < x2 < ... < xn.  A
polynomial is a map from exponent tuples to nonzero Fraction
coefficients; the zero polynomial has an empty term map.  Everything
here is immutable.

The text grammar accepted by parse_poly: variables ``x1``..``x9``,
integer or ``p/q`` rational literals, operators ``+ - * ^`` and
parentheses, whitespace insensitive.  Example: ``x1^2*x3 - x2^2``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping


class PolyError(ValueError):
    pass


def _grlex_key(expt: tuple[int, ...]) -> tuple:
    return (sum(expt), expt)


class MultiPoly:
    """Immutable multivariate polynomial with Fraction coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Fraction]):
        clean: dict[tuple[int, ...], Fraction] = {}
        for e, c in terms.items():
            if len(e) != nvars:
                raise PolyError("exponent vector length mismatch")
            c = Fraction(c)
            if c != 0:
                clean[tuple(int(k) for k in e)] = c
        self.nvars = nvars
        self.terms = clean
        self._hash: int | None = None

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        """The variable x(i+1) as a polynomial (i is 0-based)."""
        if not 0 <= i < nvars:
            raise PolyError("variable index out of range")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    # -- basics ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise PolyError("not a constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree(self, var: int) -> int:
        """Degree in variable ``var`` (0-based); 0 for the zero polynomial."""
        return max((e[var] for e in self.terms), default=0)

    def variables(self) -> set[int]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return used

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        """Leading term under graded lexicographic order (x1 most significant)."""
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic --------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise PolyError("variable-count mismatch")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return MultiPoly(self.nvars, t)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) - c
        return MultiPoly(self.nvars, t)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        t: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.nvars, t)

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        if c == 0:
            return MultiPoly.zero(self.nvars)
        return MultiPoly(self.nvars, {e: k * c for e, k in self.terms.items()})

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise PolyError("negative power")
        r = MultiPoly.const(self.nvars, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def derivative(self, var: int) -> "MultiPoly":
        if not 0 <= var < self.nvars:
            raise PolyError("variable index out of range")
        t: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            if e[var] == 0:
                continue
            e2 = list(e)
            e2[var] -= 1
            t[tuple(e2)] = t.get(tuple(e2), Fraction(0)) + c * e[var]
        return MultiPoly(self.nvars, t)

    # -- structure relative to one variable --------------------------

    def coeffs_in(self, var: int) -> list["MultiPoly"]:
        """Coefficients of powers of ``var`` (ascending), as polynomials."""
        d = self.degree(var)
        out = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            e2 = list(e)
            k = e2[var]
            e2[var] = 0
            out[k][tuple(e2)] = out[k].get(tuple(e2), Fraction(0)) + c
        return [MultiPoly(self.nvars, t) for t in out]

    @classmethod
    def from_coeffs(cls, coeffs: list["MultiPoly"], var: int, nvars: int) -> "MultiPoly":
        t: dict[tuple[int, ...], Fraction] = {}
        for k, p in enumerate(coeffs):
            for e, c in p.terms.items():
                e2 = list(e)
                e2[var] += k
                key = tuple(e2)
                t[key] = t.get(key, Fraction(0)) + c
        return cls(nvars, t)

    def leading_coeff_in(self, var: int) -> "MultiPoly":
        return self.coeffs_in(var)[-1]

    def reductum(self, var: int) -> "MultiPoly":
        """Drop the leading term in ``var`` (whole leading coefficient block)."""
        d = self.degree(var)
        t = {e: c for e, c in self.terms.items() if e[var] != d}
        return MultiPoly(self.nvars, t)

    def reducta(self, var: int) -> list["MultiPoly"]:
        """Chain f, red(f), red^2(f), ... down to (and excluding) zero."""
        out = []
        f = self
        while not f.is_zero():
            out.append(f)
            if f.degree(var) == 0:
                break
            f = f.reductum(var)
        return out

    # -- evaluation / substitution ------------------------------------

    def eval(self, point: Iterable) -> Fraction:
        vals = [Fraction(v) for v in point]
        if len(vals) != self.nvars:
            raise PolyError("point dimension mismatch")
        r = Fraction(0)
        for e, c in self.terms.items():
            m = c
            for v, k in zip(vals, e):
                if k:
                    m *= v**k
            r += m
        return r

    def subst_partial(self, assign: Mapping[int, Fraction]) -> "MultiPoly":
        """Substitute exact rationals for some variables (keeps nvars)."""
        t: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            m = c
            e2 = list(e)
            for i, v in assign.items():
                if e2[i]:
                    m *= Fraction(v) ** e2[i]
                    e2[i] = 0
            if m != 0:
                key = tuple(e2)
                t[key] = t.get(key, Fraction(0)) + m
        return MultiPoly(self.nvars, t)

    def univariate_coeffs(self, var: int) -> list[Fraction]:
        """Ascending Fraction coefficients; requires all other vars absent."""
        if any(i != var for i in self.variables()):
            raise PolyError("polynomial is not univariate in the given variable")
        out = [Fraction(0)] * (self.degree(var) + 1)
        for e, c in self.terms.items():
            out[e[var]] += c
        return out

    # -- formatting ---------------------------------------------------

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r})"


# ---------------------------------------------------------------------------
# parsing / formatting


def parse_poly(text: str, nvars: int) -> MultiPoly:
    """Parse the polynomial grammar into a MultiPoly with ``nvars`` variables."""
    toks = _tokenize(text)
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else None

    def take():
        t = peek()
        pos[0] += 1
        return t

    def parse_expr() -> MultiPoly:
        if peek() == "-":
            take()
            node = -parse_term()
        else:
            if peek() == "+":
                take()
            node = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term() -> MultiPoly:
        node = parse_factor()
        while peek() == "*":
            take()
            node = node * parse_factor()
        return node

    def parse_factor() -> MultiPoly:
        base = parse_base()
        if peek() == "^":
            take()
            e = take()
            if not isinstance(e, int) or e < 0:
                raise PolyError(f"bad exponent in {text!r}")
            return base**e
        return base

    def parse_base() -> MultiPoly:
        t = take()
        if t == "(":
            node = parse_expr()
            if take() != ")":
                raise PolyError(f"unbalanced parentheses in {text!r}")
            return node
        if t == "-":
            return -parse_base()
        if isinstance(t, int):
            if peek() == "/":
                take()
                den = take()
                if not isinstance(den, int) or den == 0:
                    raise PolyError(f"bad rational literal in {text!r}")
                return MultiPoly.const(nvars, Fraction(t, den))
            return MultiPoly.const(nvars, t)
        if isinstance(t, str) and t.startswith("x"):
            i = int(t[1:]) - 1
            if not 0 <= i < nvars:
                raise PolyError(f"variable {t} out of range for nvars={nvars}")
            return MultiPoly.var(nvars, i)
        raise PolyError(f"unexpected token {t!r} in {text!r}")

    node = parse_expr()
    if pos[0] != len(toks):
        raise PolyError(f"trailing input in {text!r}")
    return node


def _tokenize(text: str):
    toks: list = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*^()/":
            toks.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(int(text[i:j]))
            i = j
        elif ch == "x" and i + 1 < len(text) and text[i + 1].isdigit():
            toks.append(text[i : i + 2])
            i += 2
        else:
            raise PolyError(f"bad character {ch!r} in polynomial text")
    return toks


def format_poly(f: MultiPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e in sorted(f.terms, key=_grlex_key, reverse=True):
        c = f.terms[e]
        monos = [f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
        if not monos:
            body = _fmt_frac(abs(c))
        elif abs(c) == 1:
            body = "*".join(monos)
        else:
            body = _fmt_frac(abs(c)) + "*" + "*".join(monos)
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# exact division, gcd, square-free part, normalization


def divides_term(e1: tuple[int, ...], e2: tuple[int, ...]) -> bool:
    return all(a <= b for a, b in zip(e1, e2))


def exact_div(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """f / g when g divides f exactly; raises PolyError otherwise."""
    if g.is_zero():
        raise PolyError("division by zero polynomial")
    if f.is_zero():
        return MultiPoly.zero(f.nvars)
    f._check(g)
    ge, gc = g.leading_term()
    q: dict[tuple[int, ...], Fraction] = {}
    r = f
    while not r.is_zero():
        re, rc = r.leading_term()
        if not divides_term(ge, re):
            raise PolyError("inexact polynomial division")
        qe = tuple(a - b for a, b in zip(re, ge))
        qc = rc / gc
        q[qe] = q.get(qe, Fraction(0)) + qc
        r = r - MultiPoly(f.nvars, {qe: qc}) * g
    return MultiPoly(f.nvars, q)


def _int_content(f: MultiPoly) -> Fraction:
    """Positive rational c with f/c integer and primitive; 0 for f == 0."""
    if f.is_zero():
        return Fraction(0)
    num = 0
    den = 1
    for c in f.terms.values():
        num = math.gcd(num, abs(c.numerator))
        den = den * c.denominator // math.gcd(den, c.denominator)
    return Fraction(num, den)


def primitive_part(f: MultiPoly) -> MultiPoly:
    """f scaled to integer coefficients with content 1, sign preserved."""
    c = _int_content(f)
    return f if c == 0 else f.scale(1 / c)


def gcd_poly(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Multivariate gcd (primitive, positive leading coefficient)."""
    if f.is_zero():
        return _pos_lead(primitive_part(g))
    if g.is_zero():
        return _pos_lead(primitive_part(f))
    vs = f.variables() | g.variables()
    if not vs:
        return MultiPoly.const(f.nvars, 1)
    v = max(vs)
    return _pos_lead(_gcd_in_var(primitive_part(f), primitive_part(g), v))


def _content_in_var(f: MultiPoly, v: int) -> MultiPoly:
    c = MultiPoly.zero(f.nvars)
    for coeff in f.coeffs_in(v):
        if not coeff.is_zero():
            c = gcd_poly(c, coeff)
    return c


def _gcd_in_var(f: MultiPoly, g: MultiPoly, v: int) -> MultiPoly:
    cf = _content_in_var(f, v)
    cg = _content_in_var(g, v)
    cont = gcd_poly(cf, cg)
    a = exact_div(f, cf)
    b = exact_div(g, cg)
    if a.degree(v) < b.degree(v):
        a, b = b, a
    while not b.is_zero():
        r = _pseudo_rem(a, b, v)
        a = b
        b = exact_div(r, _content_in_var(r, v)) if not r.is_zero() else r
    return cont * a


def _pseudo_rem(f: MultiPoly, g: MultiPoly, v: int) -> MultiPoly:
    """lc(g)^(deg f - deg g + 1) * f mod g, treating both in variable v."""
    df, dg = f.degree(v), g.degree(v)
    if df < dg:
        raise PolyError("pseudo remainder needs deg f >= deg g")
    lcg = g.leading_coeff_in(v)
    r = f
    for _ in range(df - dg + 1):
        if r.is_zero() or r.degree(v) < dg:
            r = r * lcg
            continue
        lr = r.leading_coeff_in(v)
        shift = r.degree(v) - dg
        e = [0] * f.nvars
        e[v] = shift
        r = r * lcg - g * lr * MultiPoly(f.nvars, {tuple(e): Fraction(1)})
    return r


def _pos_lead(f: MultiPoly) -> MultiPoly:
    if f.is_zero():
        return f
    _, c = f.leading_term()
    return -f if c < 0 else f


def square_free_part(f: MultiPoly) -> MultiPoly:
    """f divided by gcd(f, all partial derivatives); primitive, positive lead."""
    if f.is_zero():
        raise PolyError("zero polynomial")
    g = primitive_part(f)
    d = g
    for v in g.variables():
        d = gcd_poly(d, g.derivative(v))
    if d.is_constant():
        return _pos_lead(g)
    return _pos_lead(primitive_part(exact_div(g, d)))


def normalize(f: MultiPoly) -> MultiPoly:
    """Canonical form for set semantics: primitive square-free, positive lead."""
    return square_free_part(f)


def normalize_set(fs: Iterable[MultiPoly]) -> list[MultiPoly]:
    """Normalized, deduplicated, constants dropped; grlex-sorted for determinism."""
    out = []
    seen = set()
    for f in fs:
        if f.is_zero() or f.is_constant():
            continue
        g = normalize(f)
        if g.is_constant():
            continue
        if g not in seen:
            seen.add(g)
            out.append(g)
    out.sort(key=lambda p: (p.total_degree(), sorted(p.terms.items()).__repr__()))
    return out


# ---------------------------------------------------------------------------
# resultants via a Euclidean remainder sequence over the coefficient field


class PolyFrac:
    """Rational function num/den used as the coefficient field for resultants."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.const(num.nvars, 1)
        if den.is_zero():
            raise PolyError("zero denominator")
        self.num = num
        self.den = den

    def reduce(self) -> "PolyFrac":
        if self.num.is_zero():
            return PolyFrac(MultiPoly.zero(self.num.nvars))
        g = gcd_poly(self.num, self.den)
        num, den = exact_div(self.num, g), exact_div(self.den, g)
        _, dc = den.leading_term()
        return PolyFrac(num.scale(1 / dc), den.scale(1 / dc))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, o: "PolyFrac") -> "PolyFrac":
        return PolyFrac(self.num * o.den + o.num * self.den, self.den * o.den).reduce()

    def __sub__(self, o: "PolyFrac") -> "PolyFrac":
        return PolyFrac(self.num * o.den - o.num * self.den, self.den * o.den).reduce()

    def __mul__(self, o: "PolyFrac") -> "PolyFrac":
        return PolyFrac(self.num * o.num, self.den * o.den).reduce()

    def __truediv__(self, o: "PolyFrac") -> "PolyFrac":
        if o.is_zero():
            raise PolyError("division by zero")
        return PolyFrac(self.num * o.den, self.den * o.num).reduce()

    def __pow__(self, n: int) -> "PolyFrac":
        r = PolyFrac(MultiPoly.const(self.num.nvars, 1))
        b = self
        for _ in range(n):
            r = r * b
        return r

    def as_poly(self) -> MultiPoly:
        r = self.reduce()
        if not r.den.is_constant():
            raise PolyError("rational function is not a polynomial")
        return r.num.scale(1 / r.den.constant_value())


def _frac_coeffs(f: MultiPoly, var: int) -> list[PolyFrac]:
    cs = [PolyFrac(c) for c in f.coeffs_in(var)]
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def resultant(f: MultiPoly, g: MultiPoly, var: int) -> MultiPoly:
    """Sylvester resultant of f and g eliminating ``var``.

    Computed by a Euclidean remainder sequence over the rational-function
    field of the remaining variables, with the classical degree/sign
    bookkeeping, so the value agrees exactly with the Sylvester
    determinant.  res(f, c) with c constant in var is c^deg(f).
    """
    f._check(g)
    if f.is_zero() or g.is_zero():
        raise PolyError("resultant of zero polynomial")
    A = _frac_coeffs(f, var)
    B = _frac_coeffs(g, var)
    one = PolyFrac(MultiPoly.const(f.nvars, 1))
    acc = one
    sign = 1
    while True:
        da, db = len(A) - 1, len(B) - 1
        if da < db:
            A, B = B, A
            if (da & 1) and (db & 1):
                sign = -sign
            continue
        if db == 0:
            acc = acc * B[0] ** da
            break
        # divide A by B in the coefficient field
        R = list(A)
        lcb = B[-1]
        while len(R) - 1 >= db and R:
            q = R[-1] / lcb
            shift = len(R) - 1 - db
            for i in range(db + 1):
                R[shift + i] = R[shift + i] - q * B[i]
            R.pop()
            while R and R[-1].is_zero():
                R.pop()
        if not R:
            return MultiPoly.zero(f.nvars)
        dr = len(R) - 1
        acc = acc * lcb ** (da - dr)
        if (da & 1) and (db & 1):
            sign = -sign
        A, B = B, R
    res = acc.as_poly()
    return -res if sign < 0 else res


def discriminant(f: MultiPoly, var: int) -> MultiPoly:
    """res(f, df/dvar, var) divided by the leading coefficient of f in var."""
    if f.degree(var) < 1:
        raise PolyError("discriminant needs positive degree")
    r = resultant(f, f.derivative(var), var)
    return exact_div(r, f.leading_coeff_in(var))


# ---------------------------------------------------------------------------
# spec-level operation wrappers


def poly_ring_ops(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise PolyError(f"unknown ring op {op!r}")


def partial_derivative(f: MultiPoly, var: int) -> MultiPoly:
    return f.derivative(var)


def derivative_closure(fs: Iterable[MultiPoly], var: int) -> list[MultiPoly]:
    """Smallest superset of fs closed under d/d(var), zero results omitted."""
    out: list[MultiPoly] = []
    seen: set[MultiPoly] = set()
    stack = list(fs)
    for f in stack:
        if f.is_zero():
            raise PolyError("zero polynomial in input set")
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        out.append(f)
        d = f.derivative(var)
        if not d.is_zero():
            stack.append(d)
    return out
