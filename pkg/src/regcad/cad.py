"""Cylindrical algebraic decomposition of R^n (n <= 3) with exact arithmetic.

Construction is the classical projection/lifting scheme: Collins-style
projection sets (coefficients, reducta, discriminants, pairwise
resultants), a base decomposition of the line, and recursive stack
lifting over exact sample points.  Cell indices follow the odd/even
convention: within a stack of 2r+1 cells, odd positions are sectors and
even positions are sections.

Subadjacency above the base level is computed numerically: sections are
continued along validated paths toward boundary samples and the
extrapolated limits are matched into the target stack against exact
root values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from regcad.poly import (
    MultiPoly,
    PolyError,
    discriminant,
    format_poly,
    normalize,
    normalize_set,
    parse_poly,
    resultant,
)
from regcad.realroots import (
    Point,
    RealAlgebraic,
    compare,
    eval_on_box,
    isolate_coeff_roots,
    merge_roots,
    roots_at_point,
    separate,
    sign_at,
    uni_trim,
)


class CadError(Exception):
    pass


class RefinementBudgetError(CadError):
    """Numeric continuation could not settle within its budget."""


class AmbiguousMatchError(CadError):
    def __init__(self, msg, cells=None):
        super().__init__(msg)
        self.cells = cells


class PathValidationError(CadError):
    pass


# ---------------------------------------------------------------------------
# cells and the tree


@dataclass
class Cell:
    """One cell of the decomposition, at any level of the tree."""

    index: tuple[int, ...]
    sample: Point
    stack_sizes: tuple[int, ...]
    vanishing: tuple[int, ...] = ()  # level-poly positions vanishing on a section
    signs: tuple[int, ...] | None = None  # signs of the input polynomials (top level)

    @property
    def level(self) -> int:
        return len(self.index)

    @property
    def kinds(self) -> tuple[str, ...]:
        return tuple("section" if i % 2 == 0 else "sector" for i in self.index)

    @property
    def dim(self) -> int:
        return sum(1 for i in self.index if i % 2 == 1)

    @property
    def parent_index(self) -> tuple[int, ...]:
        return self.index[:-1]

    @property
    def bounded(self) -> bool:
        return all(1 < i < s for i, s in zip(self.index, self.stack_sizes))

    @property
    def id(self) -> str:
        return ".".join(str(i) for i in self.index)

    def kind_at(self, level: int) -> str:
        return "section" if self.index[level - 1] % 2 == 0 else "sector"


class CadTree:
    """Stacks of cells over a projection-set hierarchy."""

    def __init__(self, nvars: int, input_polys: list[MultiPoly], levels: list[list[MultiPoly]]):
        self.nvars = nvars
        self.input_polys = input_polys
        self.levels = levels  # levels[k-1] holds the level-k polynomials
        self.stacks: dict[tuple[int, ...], list[Cell]] = {}
        # (base index, level poly position) pairs that vanished identically
        self.nullified: set[tuple[tuple[int, ...], int]] = set()
        self.subadjacency: set[tuple[tuple[int, ...], tuple[int, ...]]] | None = None

    def cells_at_level(self, level: int) -> list[Cell]:
        out = []
        for key, stack in self.stacks.items():
            if len(key) == level - 1:
                out.extend(stack)
        out.sort(key=lambda c: c.index)
        return out

    def top_cells(self) -> list[Cell]:
        return self.cells_at_level(self.nvars)

    def all_cells(self) -> list[Cell]:
        out = []
        for level in range(1, self.nvars + 1):
            out.extend(self.cells_at_level(level))
        return out

    def cell(self, index: Sequence[int]) -> Cell:
        index = tuple(index)
        stack = self.stacks.get(index[:-1])
        if not stack or not 1 <= index[-1] <= len(stack):
            raise CadError(f"no cell with index {index}")
        return stack[index[-1] - 1]

    def stack_over(self, index: Sequence[int]) -> list[Cell]:
        return self.stacks[tuple(index)]

    def cell_count(self) -> int:
        return len(self.top_cells())

    def nullified_input_pairs(self) -> list[tuple[tuple[int, ...], int]]:
        """Nullified (base index, input-poly position) pairs at the top level."""
        out = []
        norm_of_input = [normalize(f) for f in self.input_polys]
        top = self.levels[self.nvars - 1]
        for base_idx, pos in sorted(self.nullified):
            if len(base_idx) != self.nvars - 1:
                continue
            for fi, nf in enumerate(norm_of_input):
                if nf == top[pos]:
                    out.append((base_idx, fi))
        return sorted(set(out))


# ---------------------------------------------------------------------------
# projection


def project_level(fk: Iterable[MultiPoly], level: int) -> list[MultiPoly]:
    """Project level-k polynomials to level k-1 by eliminating x_k.

    Emits all coefficients, discriminants of all reducta of degree >= 2,
    and pairwise resultants of reducta of distinct polynomials; the
    result is normalized (primitive square-free, deduplicated, constants
    dropped).
    """
    if level < 2:
        raise CadError("projection needs level >= 2")
    var = level - 1
    fs = [f for f in fk]
    out: list[MultiPoly] = []
    for f in fs:
        out.extend(f.coeffs_in(var))
        for r in f.reducta(var):
            if r.degree(var) >= 2:
                out.append(discriminant(r, var))
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            for ri in fs[i].reducta(var):
                if ri.degree(var) < 1:
                    continue
                for rj in fs[j].reducta(var):
                    if rj.degree(var) < 1:
                        continue
                    out.append(resultant(ri, rj, var))
    return normalize_set(out)


def projection_levels(f_input: list[MultiPoly], nvars: int) -> list[list[MultiPoly]]:
    levels = [[] for _ in range(nvars)]
    levels[nvars - 1] = normalize_set(f_input)
    for k in range(nvars, 1, -1):
        levels[k - 2] = project_level(levels[k - 1], k)
    return levels


# ---------------------------------------------------------------------------
# lifting


def _nullified_positions(
    polys: list[MultiPoly], var: int, base: Point
) -> set[int]:
    """Positions of polynomials all of whose x_var coefficients vanish at base."""
    out = set()
    for pos, f in enumerate(polys):
        if all(sign_at(c, base) == 0 for c in f.coeffs_in(var)):
            out.add(pos)
    return out


def _stack_roots(
    polys: list[MultiPoly], var: int, base: Point, nullified: set[int]
) -> list[tuple[RealAlgebraic, list[int]]]:
    groups = []
    positions = []
    for pos, f in enumerate(polys):
        if pos in nullified or f.degree(var) == 0:
            continue
        groups.append(roots_at_point(f, list(base.coords), var))
        positions.append(pos)
    merged = merge_roots(groups)
    return [(r, sorted(positions[g] for g in gs)) for r, gs in merged]


def _sector_samples(roots: list[RealAlgebraic]) -> list[Fraction]:
    """Rational sector sample points interleaving the given sorted roots."""
    if not roots:
        return [Fraction(0)]
    roots = separate(list(roots))
    out = [roots[0].lo - 1]
    for a, b in zip(roots, roots[1:]):
        out.append(Fraction(a.hi + b.lo, 2))
    out.append(roots[-1].hi + 1)
    return out


def lift_stack(
    cad: CadTree, base_cell: Cell, level_polys: list[MultiPoly] | None = None
) -> list[Cell]:
    """Build the stack of cells over a base cell from the next level's set."""
    level = base_cell.level + 1
    var = level - 1
    polys = cad.levels[level - 1] if level_polys is None else level_polys
    base = base_cell.sample
    nullified = _nullified_positions(polys, var, base)
    for pos in nullified:
        cad.nullified.add((base_cell.index, pos))
    rootinfo = _stack_roots(polys, var, base, nullified)
    roots = [r for r, _ in rootinfo]
    sectors = _sector_samples(roots)
    cells: list[Cell] = []
    size = 2 * len(roots) + 1
    for j, s in enumerate(sectors):
        idx = base_cell.index + (2 * j + 1,)
        sample = Point(list(base.coords) + [RealAlgebraic.from_rational(s)])
        cells.append(Cell(idx, sample, base_cell.stack_sizes + (size,)))
        if j < len(roots):
            ridx = base_cell.index + (2 * j + 2,)
            rsample = Point(list(base.coords) + [roots[j]])
            cells.append(
                Cell(ridx, rsample, base_cell.stack_sizes + (size,), vanishing=tuple(rootinfo[j][1]))
            )
    _check_stack_order(cells, roots)
    cad.stacks[base_cell.index] = cells
    return cells


def _check_stack_order(cells: list[Cell], roots: list[RealAlgebraic]) -> None:
    # sector samples must interleave the section roots strictly
    for c in cells:
        if c.index[-1] % 2 == 1:
            v = c.sample[-1]
            k = (c.index[-1] - 1) // 2
            if k - 1 >= 0 and not compare(roots[k - 1], v) < 0:
                raise CadError("sector sample not above its lower section")
            if k < len(roots) and not compare(v, roots[k]) < 0:
                raise CadError("sector sample not below its upper section")


def base_decomposition(cad: CadTree) -> list[Cell]:
    polys = cad.levels[0]
    groups = []
    positions = []
    for pos, f in enumerate(polys):
        groups.append(isolate_coeff_roots(f.univariate_coeffs(0)))
        positions.append(pos)
    merged = merge_roots(groups)
    roots = [r for r, _ in merged]
    sectors = _sector_samples(roots)
    size = 2 * len(roots) + 1
    cells: list[Cell] = []
    for j, s in enumerate(sectors):
        cells.append(Cell((2 * j + 1,), Point.of(s), (size,)))
        if j < len(roots):
            vanish = tuple(sorted(positions[g] for g in merged[j][1]))
            cells.append(Cell((2 * j + 2,), Point([roots[j]]), (size,), vanishing=vanish))
    cad.stacks[()] = cells
    return cells


def build_cad(
    f_input: Sequence[MultiPoly | str], nvars: int, levels: list[list[MultiPoly]] | None = None
) -> CadTree:
    """Build a sign-invariant decomposition for the input set.

    ``levels`` overrides the computed projection hierarchy; it must list
    the polynomials per level (level 1 first) and is the entry point for
    auditing externally specified decompositions.
    """
    if not 1 <= nvars <= 3:
        raise CadError(f"unsupported dimension {nvars} (supported: 1..3)")
    polys = [parse_poly(f, nvars) if isinstance(f, str) else f for f in f_input]
    for f in polys:
        if f.is_zero():
            raise CadError("zero polynomial in input set")
        if f.nvars != nvars:
            raise CadError("input polynomial has wrong variable count")
    if levels is None:
        levels = projection_levels(polys, nvars)
    else:
        levels = [normalize_set(l) for l in levels]
    cad = CadTree(nvars, polys, levels)
    base_decomposition(cad)
    for level in range(2, nvars + 1):
        for base_cell in cad.cells_at_level(level - 1):
            lift_stack(cad, base_cell)
    _assign_input_signs(cad)
    return cad


def _assign_input_signs(cad: CadTree) -> None:
    for c in cad.top_cells():
        c.signs = tuple(sign_at(f, c.sample) for f in cad.input_polys)


def assign_samples(cad: CadTree) -> CadTree:
    """Recompute sector samples from the section roots and validate them.

    Section samples are the exact roots; sector samples are rational
    midpoints of the refined gaps (outermost sectors sit one unit beyond
    the nearest root).  Idempotent on trees built by build_cad.
    """
    for key in sorted(cad.stacks, key=len):
        stack = cad.stacks[key]
        roots = [c.sample[-1] for c in stack if c.index[-1] % 2 == 0]
        sectors = _sector_samples(roots)
        for c in stack:
            if c.index[-1] % 2 == 1:
                s = sectors[(c.index[-1] - 1) // 2]
                c.sample = Point(list(c.sample.coords[:-1]) + [RealAlgebraic.from_rational(s)])
        _check_stack_order(stack, roots)
    return cad


# ---------------------------------------------------------------------------
# formulas over the input set


@dataclass(frozen=True)
class Atom:
    poly: int
    op: str  # one of < <= = >= > !=

    def holds(self, sign: int) -> bool:
        return {
            "<": sign < 0,
            "<=": sign <= 0,
            "=": sign == 0,
            ">=": sign >= 0,
            ">": sign > 0,
            "!=": sign != 0,
        }[self.op]


@dataclass(frozen=True)
class Formula:
    kind: str  # atom | and | or | not
    atom: Atom | None = None
    items: tuple["Formula", ...] = ()

    def holds(self, signs: Sequence[int]) -> bool:
        if self.kind == "atom":
            return self.atom.holds(signs[self.atom.poly])
        if self.kind == "and":
            return all(i.holds(signs) for i in self.items)
        if self.kind == "or":
            return any(i.holds(signs) for i in self.items)
        return not self.items[0].holds(signs)

    def atoms(self) -> list[Atom]:
        if self.kind == "atom":
            return [self.atom]
        return [a for i in self.items for a in i.atoms()]


def parse_formula(text: str, npolys: int) -> Formula:
    """Formulas like ``f0 <= 0``, ``f0 < 0 & f1 > 0``, ``!(f0 = 0) | f1 != 0``."""
    import re

    tokens = re.findall(r"f\d+|<=|>=|!=|[<>=]|&|\||!|\(|\)|0", text)
    if "".join(tokens).replace(" ", "") != text.replace(" ", ""):
        raise CadError(f"cannot parse formula {text!r}")
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take():
        t = peek()
        pos[0] += 1
        return t

    def parse_or():
        node = parse_and()
        while peek() == "|":
            take()
            node = Formula("or", items=(node, parse_and()))
        return node

    def parse_and():
        node = parse_unit()
        while peek() == "&":
            take()
            node = Formula("and", items=(node, parse_unit()))
        return node

    def parse_unit():
        t = peek()
        if t == "!":
            take()
            return Formula("not", items=(parse_unit(),))
        if t == "(":
            take()
            node = parse_or()
            if take() != ")":
                raise CadError(f"unbalanced parentheses in formula {text!r}")
            return node
        return parse_atom()

    def parse_atom():
        t = take()
        if not (t and t.startswith("f")):
            raise CadError(f"expected atom in formula {text!r}")
        fi = int(t[1:])
        if not 0 <= fi < npolys:
            raise CadError(f"atom references f{fi} outside the input set")
        op = take()
        if op not in ("<", "<=", "=", ">=", ">", "!="):
            raise CadError(f"bad relation {op!r} in formula {text!r}")
        if take() != "0":
            raise CadError("atoms must compare against 0")
        return Formula("atom", atom=Atom(fi, op))

    node = parse_or()
    if pos[0] != len(tokens):
        raise CadError(f"trailing input in formula {text!r}")
    return node


def select_cells(cad: CadTree, formula: Formula) -> list[Cell]:
    """Top-level cells whose sign vector satisfies the formula."""
    for a in formula.atoms():
        if not 0 <= a.poly < len(cad.input_polys):
            raise CadError(f"atom references f{a.poly} outside the input set")
    return [c for c in cad.top_cells() if formula.holds(c.signs)]


# ---------------------------------------------------------------------------
# paths inside cells (cylindrical: straight at the base, lifted through
# section graphs and sector blends)


BoxCoord = tuple[Fraction, Fraction]


def _as_box(v) -> BoxCoord:
    if isinstance(v, RealAlgebraic):
        return (v.lo, v.hi)
    return (Fraction(v), Fraction(v))


def _mid(b: BoxCoord) -> Fraction:
    return (b[0] + b[1]) / 2


class TowerPath:
    """A parametrized path inside a cell, ending at a boundary target.

    The bottom coordinate interpolates linearly; section levels follow
    their root function exactly; sector levels blend between the tracked
    walls.  ``variant`` perturbs the blend target at levels where the
    walls collapse at the target, producing paths that approach the same
    boundary point from different directions.
    """

    def __init__(
        self,
        cad: CadTree,
        cell: Cell,
        target: Point,
        variant: int = 0,
        precision: Fraction = Fraction(1, 10**12),
    ):
        self.cad = cad
        self.cell = cell
        self.target = target
        self.variant = variant
        self.precision = precision
        self._last_roots: dict[tuple[int, ...], float] = {}
        self._collapse: dict[int, bool] = {}
        self.used_fallback = False
        q = target.refined(precision)
        self.q_approx = [_mid(_as_box(c)) for c in q.coords]

    def at(self, t: Fraction) -> list[RealAlgebraic]:
        """Exact path point at parameter t in [0, 1)."""
        coords: list[RealAlgebraic] = []
        for level in range(1, self.cell.level + 1):
            coords.append(self._coord_at(level, t, coords))
        return coords

    def _coord_at(self, level: int, t: Fraction, partial: list[RealAlgebraic]) -> RealAlgebraic:
        cell = self.cad.cell(self.cell.index[:level])
        s = cell.sample[level - 1]
        if level == 1:
            if cell.kind_at(1) == "section":
                return s
            v = (1 - t) * s.as_fraction() + t * self.q_approx[0]
            return RealAlgebraic.from_rational(v)
        if cell.kind_at(level) == "section":
            return self._track_root(cell, partial, level)
        return RealAlgebraic.from_rational(self._sector_coord(cell, partial, level, t))

    def _track_root(self, cell: Cell, partial: list[RealAlgebraic], level: int) -> RealAlgebraic:
        f = self.cad.levels[level - 1][cell.vanishing[0]]
        try:
            roots = roots_at_point(f, partial, level - 1)
        except PolyError as e:
            raise PathValidationError(f"section root lost along path: {e}")
        if not roots:
            raise PathValidationError("section root lost along path")
        prev = self._last_roots.get(cell.index)
        if prev is None:
            prev = float(cell.sample[level - 1])
        best = min(roots, key=lambda r: abs(float(r) - prev))
        self._last_roots[cell.index] = float(best)
        return best

    def _sector_coord(
        self, cell: Cell, partial: list[RealAlgebraic], level: int, t: Fraction
    ) -> Fraction:
        lo, hi = self._walls(cell, partial, level)
        s_here = _mid(_as_box(cell.sample[level - 1]))
        qv = self.q_approx[level - 1]
        if lo is None and hi is None:
            return (1 - t) * s_here + t * qv
        if lo is None:
            hi_v = _wall_value(hi)
            off0 = self._wall_at_sample(cell, level, upper=True) - s_here
            v = (1 - t) * s_here + t * qv
            if v >= hi_v:
                v = hi_v - off0 * (1 - t)
                self.used_fallback = True
            if not _certified_below(v, hi):
                raise PathValidationError("path crossed the upper wall")
            return v
        if hi is None:
            lo_v = _wall_value(lo)
            off0 = s_here - self._wall_at_sample(cell, level, upper=False)
            v = (1 - t) * s_here + t * qv
            if v <= lo_v:
                v = lo_v + off0 * (1 - t)
                self.used_fallback = True
            if not _certified_above(v, lo):
                raise PathValidationError("path crossed the lower wall")
            return v
        lo_v, hi_v = _wall_value(lo), _wall_value(hi)
        gap = hi_v - lo_v
        if gap <= 0:
            raise PathValidationError("sector walls crossed during tracking")
        lam0 = self._lambda_at_sample(cell, level)
        if self.variant and self._walls_collapse(level):
            lam = (1 - t) * lam0 + t * self._variant_lambda()
            v = lo_v + lam * gap
        else:
            v = (1 - t) * (lo_v + lam0 * gap) + t * qv
            if not lo_v < v < hi_v:
                v = lo_v + lam0 * gap
                self.used_fallback = True
        if not (_certified_above(v, lo) and _certified_below(v, hi)):
            raise PathValidationError("sector blend left the walls")
        return v

    def _walls(self, cell: Cell, partial: list[RealAlgebraic], level: int):
        pos = cell.index[level - 1]
        stack = self.cad.stack_over(cell.index[: level - 1])
        lo = hi = None
        if pos > 1:
            lo = self._track_root(stack[pos - 2], partial, level)
        if pos < len(stack):
            hi = self._track_root(stack[pos], partial, level)
        return lo, hi

    def _wall_at_sample(self, cell: Cell, level: int, upper: bool) -> Fraction:
        pos = cell.index[level - 1]
        stack = self.cad.stack_over(cell.index[: level - 1])
        wall_cell = stack[pos] if upper else stack[pos - 2]
        return _mid(_as_box(wall_cell.sample[level - 1]))

    def _lambda_at_sample(self, cell: Cell, level: int) -> Fraction:
        pos = cell.index[level - 1]
        stack = self.cad.stack_over(cell.index[: level - 1])
        lo = _mid(_as_box(stack[pos - 2].sample[level - 1]))
        hi = _mid(_as_box(stack[pos].sample[level - 1]))
        s = _mid(_as_box(cell.sample[level - 1]))
        return (s - lo) / (hi - lo)

    def _walls_collapse(self, level: int) -> bool:
        """Do the sector walls meet at the target point?"""
        if level in self._collapse:
            return self._collapse[level]
        ans = False
        t = Fraction(4095, 4096)
        saved = dict(self._last_roots)
        try:
            partial: list[RealAlgebraic] = []
            for l in range(1, level):
                partial.append(self._coord_at(l, t, partial))
            cell = self.cad.cell(self.cell.index[:level])
            lo, hi = self._walls(cell, partial, level)
            if lo is not None and hi is not None:
                ans = _wall_value(hi) - _wall_value(lo) < Fraction(1, 1 << 9)
        except (PathValidationError, PolyError):
            ans = False
        finally:
            self._last_roots = saved
        self._collapse[level] = ans
        return ans

    def _variant_lambda(self) -> Fraction:
        seq = [Fraction(3, 4), Fraction(1, 4), Fraction(7, 8), Fraction(1, 8), Fraction(15, 16)]
        return seq[(self.variant - 1) % len(seq)]


def _wall_value(r: RealAlgebraic, width: Fraction = Fraction(1, 1 << 48)) -> Fraction:
    return r.approx(width)


def _certified_above(v: Fraction, wall: RealAlgebraic | None) -> bool:
    if wall is None:
        return True
    return compare(RealAlgebraic.from_rational(v), wall) > 0


def _certified_below(v: Fraction, wall: RealAlgebraic | None) -> bool:
    if wall is None:
        return True
    return compare(RealAlgebraic.from_rational(v), wall) < 0


def _substitute_box_mid(f: MultiPoly, base_mid: list[Fraction], var: int) -> list[Fraction]:
    assign = {i: v for i, v in enumerate(base_mid) if i < var}
    g = f.subst_partial(assign)
    out = [Fraction(0)] * (g.degree(var) + 1)
    for e, c in g.terms.items():
        out[e[var]] += c
    return out


def validate_point_in_cell(cad: CadTree, cell: Cell, box: list[BoxCoord], max_rounds: int = 6) -> bool:
    """Check a box point against the cell's sign conditions.

    Nonzero signs must be certified by interval evaluation; zero signs
    only need the interval to straddle zero (section coordinates are
    roots by construction).
    """
    for level in range(1, cell.level + 1):
        anc = cad.cell(cell.index[:level])
        for f in cad.levels[level - 1]:
            want = sign_at(f, anc.sample)
            lo, hi = eval_on_box(f, box[:level] + [(Fraction(0), Fraction(0))] * (f.nvars - level))
            if want == 0:
                if lo > 0 or hi < 0:
                    return False
            else:
                got = 1 if lo > 0 else (-1 if hi < 0 else 0)
                if got == 0:
                    continue  # interval too wide to certify; tolerated
                if got != want:
                    return False
    return True


# ---------------------------------------------------------------------------
# numeric continuation of a section toward the boundary


@dataclass
class TrackResult:
    status: str  # "limit" | "diverged" | "jump"
    limit: Fraction | None = None
    error: Fraction | None = None
    detail: str = ""


def track_section_to_boundary(
    cad: CadTree,
    cell: Cell,
    path: TowerPath | Point,
    steps: int = 28,
    tol: Fraction = Fraction(1, 10**9),
) -> TrackResult:
    """Continue the root function of a section along a path to the boundary.

    Returns the extrapolated limit with an error estimate at most tol,
    or a witness that the values diverge.  The path may be given as a
    TowerPath or as a target point (straight/cylindrical path from the
    base sample).
    """
    if cell.kind_at(cell.level) != "section":
        raise CadError("tracking needs a section cell")
    base_cell = cad.cell(cell.parent_index)
    if isinstance(path, Point):
        path = TowerPath(cad, base_cell, path)
    level = cell.level
    var = level - 1
    f = cad.levels[level - 1][cell.vanishing[0]]
    tol = Fraction(tol)
    prec = min(tol * Fraction(1, 1 << 12), Fraction(1, 1 << 40))
    prev = float(cell.sample[var])
    values: list[Fraction] = []
    for m in range(1, steps + 1):
        t = 1 - Fraction(1, 1 << m)
        try:
            pt = path.at(t)
            roots = roots_at_point(f, pt, var)
        except (PathValidationError, PolyError) as e:
            return TrackResult("jump", detail=f"path failed at t={t}: {e}")
        if not roots:
            return TrackResult("jump", detail=f"no real root at t={t}")
        best = min(roots, key=lambda r: abs(float(r) - prev))
        v = best.refined(prec).midpoint()
        if m > 3 and abs(v - prev) > 8 * (abs(prev) + 1):
            return TrackResult("diverged", detail=f"value escaped at t={t}")
        prev = float(v)
        values.append(v)
        lim, err = _extrapolate(values, tol)
        if lim is not None:
            return TrackResult("limit", limit=lim, error=err)
    lim, err = _extrapolate(values, tol, final=True)
    if lim is not None:
        return TrackResult("limit", limit=lim, error=err)
    return TrackResult("diverged", detail="extrapolation did not settle", limit=values[-1])


def _aitken(seq: list[Fraction]) -> list[Fraction]:
    out = []
    for a, b, c in zip(seq, seq[1:], seq[2:]):
        d = (c - b) - (b - a)
        if d == 0:
            out.append(c)
        else:
            out.append(c - (c - b) ** 2 / d)
    return out

def _extrapolate(values: list[Fraction], tol: Fraction, final: bool = False):
    if len(values) >= 3 and abs(values[-1] - values[-2]) < tol / 4 and abs(values[-2] - values[-3]) < tol / 4:
        return values[-1], abs(values[-1] - values[-2])
    if len(values) < 5:
        return None, None
    a1 = _aitken(values)
    a2 = _aitken(a1) if len(a1) >= 3 else a1
    tail = a2[-3:]
    if len(tail) == 3 and abs(tail[2] - tail[1]) < tol / 2 and abs(tail[1] - tail[0]) < tol:
        return tail[2], abs(tail[2] - tail[1])
    if final and len(a2) >= 2 and abs(a2[-1] - a2[-2]) < tol:
        return a2[-1], abs(a2[-1] - a2[-2])
    return None, None


# ---------------------------------------------------------------------------
# subadjacency


def _match_limit_in_stack(
    stack: list[Cell], limit: Fraction, tol: Fraction
) -> Cell:
    """The stack cell whose closure the limit value lands in."""
    sections = [c for c in stack if c.index[-1] % 2 == 0]
    hits = []
    for c in sections:
        r = c.sample[-1].refined(tol / 8)
        if abs(limit - r.midpoint()) <= tol:
            hits.append(c)
    if len(hits) > 1:
        raise AmbiguousMatchError("limit within tolerance of two stack values", [c.index for c in hits])
    if len(hits) == 1:
        return hits[0]
    lo_i = 0
    for k, c in enumerate(sections):
        r = c.sample[-1].refined(tol / 8)
        if limit > r.midpoint():
            lo_i = k + 1
    return stack[2 * lo_i]


def _limit_toward(
    cad: CadTree,
    section: Cell,
    target_cell: Cell,
    tol: Fraction,
    steps: int,
    variant: int = 0,
) -> TrackResult:
    base_cell = cad.cell(section.parent_index)
    path = TowerPath(cad, base_cell, target_cell.sample, variant=variant)
    return track_section_to_boundary(cad, section, path, steps=steps, tol=tol)


def compute_subadjacency(
    cad: CadTree, tol: Fraction = Fraction(1, 10**9), steps: int = 30
) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """The full subadjacency relation (C, D) meaning C meets closure(D).

    Base-level adjacency is interval incidence; higher levels continue
    sections toward the samples of boundary base cells and match limits
    into the target stack; sector subadjacency spans the interval
    between the limits of the bounding sections.
    """
    rel: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    for c in cad.all_cells():
        rel.add((c.index, c.index))
    base = cad.stacks[()]
    for c in base:
        if c.index[0] % 2 == 0:
            rel.add((c.index, (c.index[0] - 1,)))
            rel.add((c.index, (c.index[0] + 1,)))
    for level in range(2, cad.nvars + 1):
        pairs_below = [
            (a, b)
            for (a, b) in rel
            if len(a) == level - 1 and len(b) == level - 1 and a != b
        ]
        for stack in (cad.stacks[k] for k in cad.stacks if len(k) == level - 1):
            for c in stack:
                if c.index[-1] % 2 == 0:
                    rel.add((c.index, c.index[:-1] + (c.index[-1] - 1,)))
                    rel.add((c.index, c.index[:-1] + (c.index[-1] + 1,)))
        for a_idx, b_idx in pairs_below:
            dprime = cad.cell(a_idx)  # boundary-side base cell
            target_stack = cad.stack_over(a_idx)
            over_d = cad.stack_over(b_idx)
            limits: dict[int, TrackResult] = {}
            for c in over_d:
                if c.index[-1] % 2 == 0:
                    limits[c.index[-1]] = _limit_toward(cad, c, dprime, tol, steps)
            for c in over_d:
                pos = c.index[-1]
                if pos % 2 == 0:
                    tr = limits[pos]
                    if tr.status == "limit":
                        m = _match_limit_in_stack(target_stack, tr.limit, tol)
                        rel.add((m.index, c.index))
                else:
                    # span between the limits of the bounding sections;
                    # a missing or diverging wall leaves that side open
                    lo_tr = limits.get(pos - 1)
                    hi_tr = limits.get(pos + 1)
                    if (lo_tr and lo_tr.status == "jump") or (hi_tr and hi_tr.status == "jump"):
                        continue
                    lo = lo_tr.limit if lo_tr and lo_tr.status == "limit" else None
                    hi = hi_tr.limit if hi_tr and hi_tr.status == "limit" else None
                    for m in _cells_meeting_span(target_stack, lo, hi, tol):
                        rel.add((m.index, c.index))
    cad.subadjacency = rel
    return rel


def _cells_meeting_span(
    stack: list[Cell], lo: Fraction | None, hi: Fraction | None, tol: Fraction
) -> list[Cell]:
    """Stack cells meeting the closed fiber span [lo, hi] (None = infinite)."""
    sections = [c for c in stack if c.index[-1] % 2 == 0]
    out = []
    for c in stack:
        if c.index[-1] % 2 == 0:
            v = c.sample[-1].refined(tol / 8).midpoint()
            if (lo is None or v >= lo - tol) and (hi is None or v <= hi + tol):
                out.append(c)
        else:
            k = (c.index[-1] - 1) // 2
            s_lo = sections[k - 1].sample[-1].refined(tol / 8).midpoint() if k >= 1 else None
            s_hi = sections[k].sample[-1].refined(tol / 8).midpoint() if k < len(sections) else None
            # the open interval (s_lo, s_hi) must intersect [lo, hi]
            if s_hi is not None and lo is not None and s_hi <= lo + tol:
                continue
            if s_lo is not None and hi is not None and s_lo >= hi - tol:
                continue
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# section-extension audit helper (per-section; orchestrated in props)


def boundary_base_cells(cad: CadTree, base_cell: Cell) -> list[Cell]:
    """Strict subadjacency predecessors of a base cell (its boundary cells)."""
    if cad.subadjacency is None:
        compute_subadjacency(cad)
    out = []
    for a, b in cad.subadjacency:
        if b == base_cell.index and a != b and len(a) == len(b):
            out.append(cad.cell(a))
    out.sort(key=lambda c: c.index)
    return out


def root_near(
    cad: CadTree, section_cell: Cell, base_coords: list[RealAlgebraic], level: int
) -> RealAlgebraic | None:
    """The root of a section's vanishing polynomial over a nearby base point,
    selected by continuation from the section's own sample value."""
    f = cad.levels[level - 1][section_cell.vanishing[0]]
    rts = roots_at_point(f, base_coords, level - 1)
    if not rts:
        return None
    want = float(section_cell.sample[level - 1])
    return min(rts, key=lambda r: abs(float(r) - want))


def interior_probes(cad: CadTree, cell: Cell, count: int = 3) -> list[Point]:
    """Extra interior points of a cell, generated levelwise.

    Sector coordinates move to quartile heights between the bounding
    sections; section coordinates are re-solved over the perturbed base.
    """
    fracs = [Fraction(1, 4), Fraction(3, 4), Fraction(3, 8), Fraction(5, 8)][:count]
    probes = []
    for q in fracs:
        coords: list[RealAlgebraic] = []
        ok = True
        for level in range(1, cell.level + 1):
            anc = cad.cell(cell.index[:level])
            pos = anc.index[level - 1]
            stack = cad.stack_over(anc.index[: level - 1])
            if pos % 2 == 0:
                best = root_near(cad, anc, coords, level)
                if best is None:
                    ok = False
                    break
                coords.append(best)
            else:
                lo_v = root_near(cad, stack[pos - 2], coords, level) if pos > 1 else None
                hi_v = root_near(cad, stack[pos], coords, level) if pos < len(stack) else None
                coords.append(RealAlgebraic.from_rational(_quartile_value(lo_v, hi_v, q)))
        if ok:
            probes.append(Point(coords))
    return probes


def _quartile_value(lo: RealAlgebraic | None, hi: RealAlgebraic | None, q: Fraction) -> Fraction:
    w = Fraction(1, 1 << 20)
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi.refined(w).lo - 1 - q
    if hi is None:
        return lo.refined(w).hi + 1 + q
    a = lo.refined(w).hi
    b = hi.refined(w).lo
    if a >= b:
        a, b = lo.refined(w * w).hi, hi.refined(w * w).lo
    return a + (b - a) * q
