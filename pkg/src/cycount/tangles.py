"""
Front words for graded Legendrian tangles and their ruling invariants.

A tangle is a word of basic letters (left cusp, right cusp, crossing)
acting on graded boundary sets, read left to right.  Rulings of a word
are enumerated by a left-to-right sweep over boundary rulings: a left
cusp births its two strands paired together, a right cusp requires its
two strands to be paired, and a crossing either lets the pairing follow
the strands or switches it (only at equal degrees, subject to the
disjoint-or-nested condition).  The same local rules assemble into
transfer matrices over Z[z^{±1}], one per letter, whose product is the
ruling-polynomial functor; on closed words the single entry is the
ruling polynomial z^{sw - rc} summed over rulings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import GradedPointSet, Ruling, deg_eq, deg_reduce, sort_rulings
from .laurent import LaurentPoly


class TangleError(ValueError):
    pass


class TangleSyntaxError(TangleError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class GradingError(TangleError):
    pass


class BoundaryMismatchError(TangleError):
    pass


# ---------------------------------------------------------------------------
# basic letters and words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BasicTangle:
    """One letter: kind 'L' (left cusp), 'R' (right cusp) or 'X' (crossing).

    pos is the bottom strand index of the cusp pair / crossing (1-based);
    upper_degree is the degree of the upper newborn strand of a left cusp.
    """

    kind: str
    pos: int
    left_boundary: GradedPointSet
    right_boundary: GradedPointSet
    upper_degree: int | None = None

    @property
    def m(self) -> int:
        return self.left_boundary.m

    def crossing_gap(self) -> int:
        """deg(s_k) - deg(s_{k+1}) on the left boundary of a crossing."""
        if self.kind != "X":
            raise ValueError("not a crossing")
        return deg_reduce(
            self.left_boundary.deg(self.pos) - self.left_boundary.deg(self.pos + 1),
            self.m,
        )


def apply_letter(points: GradedPointSet, kind: str, pos: int, a: int | None = None):
    """Right boundary of one letter acting on the given left boundary."""
    degs = list(points.degrees)
    n = len(degs)
    m = points.m
    if kind == "L":
        if not 1 <= pos <= n + 1:
            raise TangleError(f"left cusp position {pos} out of range 1..{n + 1}")
        if a is None:
            raise TangleError("left cusp needs the upper strand degree")
        degs[pos - 1 : pos - 1] = [a + 1, a]
    elif kind == "R":
        if not 1 <= pos <= n - 1:
            raise TangleError(f"right cusp position {pos} out of range 1..{n - 1}")
        if not deg_eq(degs[pos - 1], degs[pos] + 1, m):
            raise GradingError(
                f"right cusp at {pos}: strand degrees {degs[pos - 1]}, {degs[pos]} "
                f"violate deg(lower) = deg(upper) + 1"
            )
        del degs[pos - 1 : pos + 1]
    elif kind == "X":
        if not 1 <= pos <= n - 1:
            raise TangleError(f"crossing position {pos} out of range 1..{n - 1}")
        degs[pos - 1], degs[pos] = degs[pos], degs[pos - 1]
    else:
        raise TangleError(f"unknown letter kind {kind!r}")
    return GradedPointSet(m, tuple(degs))


def make_letter(points: GradedPointSet, kind: str, pos: int, a: int | None = None):
    return BasicTangle(kind, pos, points, apply_letter(points, kind, pos, a), a)


@dataclass(frozen=True)
class TangleWord:
    m: int
    left_boundary: GradedPointSet
    letters: tuple[BasicTangle, ...]

    def __post_init__(self):
        cur = self.left_boundary
        for t in self.letters:
            if t.left_boundary != cur:
                raise BoundaryMismatchError("consecutive letter boundaries differ")
            cur = t.right_boundary

    @property
    def right_boundary(self) -> GradedPointSet:
        return self.letters[-1].right_boundary if self.letters else self.left_boundary

    @property
    def is_closed(self) -> bool:
        return len(self.left_boundary) == 0 and len(self.right_boundary) == 0

    def slices(self) -> list[GradedPointSet]:
        out = [self.left_boundary]
        for t in self.letters:
            out.append(t.right_boundary)
        return out

    def right_cusp_count(self) -> int:
        return sum(1 for t in self.letters if t.kind == "R")

    def max_strands(self) -> int:
        return max(len(s) for s in self.slices())

    def compose(self, other: "TangleWord") -> "TangleWord":
        if self.m != other.m:
            raise BoundaryMismatchError("grading moduli differ")
        if self.right_boundary != other.left_boundary:
            raise BoundaryMismatchError("boundaries do not match under composition")
        return TangleWord(self.m, self.left_boundary, self.letters + other.letters)


def word_from_ops(m: int, left_degrees, ops) -> TangleWord:
    """Build a word from (kind, pos[, upper_degree]) tuples."""
    cur = GradedPointSet(m, tuple(left_degrees))
    letters = []
    for op in ops:
        kind, pos, *rest = op
        a = rest[0] if rest else None
        t = make_letter(cur, kind, pos, a)
        letters.append(t)
        cur = t.right_boundary
    return TangleWord(m, GradedPointSet(m, tuple(left_degrees)), tuple(letters))


def identity_word(m: int, degrees) -> TangleWord:
    return word_from_ops(m, degrees, [])


# ---------------------------------------------------------------------------
# the tangle DSL
# ---------------------------------------------------------------------------


def parse_tangle(text: str) -> TangleWord:
    """Parse the tangle DSL.

    One statement per line; '#' starts a comment.  Statements:
        mod N            grading modulus 2m, written as N (0 = Z)
        left: d1 d2 ...  left boundary degrees, bottom to top (may be empty)
        L i a            left cusp inserting at i, i+1; upper strand degree a
        R i              right cusp merging strands i, i+1
        X k              crossing of strands k, k+1
    """
    mod: int | None = None
    left: tuple[int, ...] | None = None
    ops: list[tuple] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        tokens = line.split()
        head = tokens[0]
        if head == "mod":
            if mod is not None:
                raise TangleSyntaxError(lineno, col, "duplicate mod statement")
            mod = _int_token(tokens, 1, lineno, col, "mod")
            if mod < 0 or mod % 2:
                raise TangleSyntaxError(
                    lineno, col, f"modulus must be even and >= 0, got {mod}"
                )
        elif head == "left:" or head == "left":
            if head == "left" and (len(tokens) < 2 or tokens[1] != ":"):
                raise TangleSyntaxError(lineno, col, "expected 'left:'")
            if left is not None:
                raise TangleSyntaxError(lineno, col, "duplicate left: statement")
            body = tokens[1:] if head == "left:" else tokens[2:]
            try:
                left = tuple(int(tk) for tk in body)
            except ValueError:
                raise TangleSyntaxError(lineno, col, "left: expects integers") from None
        elif head in ("L", "R", "X"):
            if mod is None or left is None:
                raise TangleSyntaxError(
                    lineno, col, "mod and left: must precede letters"
                )
            want = 3 if head == "L" else 2
            if len(tokens) != want:
                raise TangleSyntaxError(
                    lineno, col, f"{head} expects {want - 1} integer argument(s)"
                )
            try:
                args = tuple(int(tk) for tk in tokens[1:])
            except ValueError:
                raise TangleSyntaxError(lineno, col, f"{head}: bad integer") from None
            ops.append((head, *args))
        else:
            raise TangleSyntaxError(lineno, col, f"unknown statement {head!r}")
    if mod is None:
        raise TangleSyntaxError(0, 0, "missing mod statement")
    if left is None:
        raise TangleSyntaxError(0, 0, "missing left: statement")
    return word_from_ops(mod // 2, left, ops)


def _int_token(tokens, idx, lineno, col, what):
    if len(tokens) <= idx:
        raise TangleSyntaxError(lineno, col, f"{what} expects an integer")
    try:
        return int(tokens[idx])
    except ValueError:
        raise TangleSyntaxError(lineno, col, f"{what}: bad integer") from None


# ---------------------------------------------------------------------------
# rulings
# ---------------------------------------------------------------------------


def enumerate_set_rulings(points: GradedPointSet) -> list[Ruling]:
    """All rulings of a graded point set, in canonical order."""
    n = len(points)
    if n % 2:
        return []
    out: list[Ruling] = []

    def rec(unused: tuple[int, ...], acc):
        if not unused:
            out.append(Ruling(tuple(acc)))
            return
        s = unused[0]
        rest = unused[1:]
        for t in rest:
            if deg_eq(points.deg(s), points.deg(t) + 1, points.m):
                acc.append((s, t))
                rec(tuple(u for u in rest if u != t), acc)
                acc.pop()

    rec(tuple(range(1, n + 1)), [])
    return sort_rulings(out)


def in_nested_position(rho: Ruling, k: int) -> bool:
    """Are the pairs through k, k+1 disjoint or nested as index intervals?"""
    p = rho.partner(k)
    r = rho.partner(k + 1)
    i1 = (min(k, p), max(k, p))
    i2 = (min(k + 1, r), max(k + 1, r))
    disjoint = i1[1] < i2[0] or i2[1] < i1[0]
    nested = (i1[0] < i2[0] and i2[1] < i1[1]) or (i2[0] < i1[0] and i1[1] < i2[1])
    return disjoint or nested


def transpose_ruling(rho: Ruling, k: int) -> Ruling:
    swap = {k: k + 1, k + 1: k}
    return Ruling(tuple((swap.get(s, s), swap.get(t, t)) for s, t in rho.pairs))


def _cusp_shift_down(rho: Ruling, i: int) -> Ruling:
    """Relabel after deleting strands i, i+1."""
    return rho.relabel({j: (j if j < i else j - 2) for j in rho.indices()})


def _cusp_shift_up(rho: Ruling, i: int) -> Ruling:
    """Relabel before inserting strands at i, i+1."""
    return rho.relabel({j: (j if j < i else j + 2) for j in rho.indices()})


@dataclass(frozen=True)
class TangleRuling:
    """One ruling of a word: boundary restrictions and switch data."""

    left: Ruling
    right: Ruling
    switches: tuple[int, ...]  # letter indices where the ruling switches

    @property
    def switch_count(self) -> int:
        return len(self.switches)


DEFAULT_WORD_BOUND = 40


def enumerate_tangle_rulings(
    word: TangleWord, bound: int = DEFAULT_WORD_BOUND
) -> list[TangleRuling]:
    """Global enumeration of rulings of a word by a left-to-right sweep."""
    from .complexes import ResourceCapError

    if len(word.letters) > bound:
        raise ResourceCapError(
            f"word length {len(word.letters)} exceeds bound {bound}"
        )
    results: list[TangleRuling] = []
    for start in enumerate_set_rulings(word.left_boundary):
        stack = [(0, start, ())]
        while stack:
            idx, state, switches = stack.pop()
            if idx == len(word.letters):
                results.append(TangleRuling(start, state, switches))
                continue
            t = word.letters[idx]
            if t.kind == "L":
                nxt = _cusp_shift_up(state, t.pos)
                nxt = Ruling(nxt.pairs + ((t.pos, t.pos + 1),))
                stack.append((idx + 1, nxt, switches))
            elif t.kind == "R":
                if state.contains(t.pos, t.pos + 1):
                    rest = Ruling(
                        tuple(p for p in state.pairs if p != (t.pos, t.pos + 1))
                    )
                    stack.append((idx + 1, _cusp_shift_down(rest, t.pos), switches))
            else:
                k = t.pos
                if state.contains(k, k + 1):
                    continue  # paired strands cannot cross without a switch
                stack.append((idx + 1, transpose_ruling(state, k), switches))
                if t.crossing_gap() == 0 and in_nested_position(state, k):
                    stack.append((idx + 1, state, switches + (idx,)))
    return sorted(
        results, key=lambda r: (r.left.pairs, r.right.pairs, r.switches)
    )


def ruling_polynomial(word: TangleWord) -> LaurentPoly:
    """Sum of z^{sw - rc} over rulings of a closed word."""
    if not word.is_closed:
        raise TangleError("ruling polynomial needs a closed word")
    rc = word.right_cusp_count()
    out = LaurentPoly.zero()
    for tr in enumerate_tangle_rulings(word):
        out = out + LaurentPoly.z_pow(tr.switch_count - rc)
    return out


# ---------------------------------------------------------------------------
# transfer matrices
# ---------------------------------------------------------------------------


@dataclass
class TransferMatrix:
    """Matrix indexed by rulings of the two boundaries of a tangle.

    Acts on the right-boundary side: entries[r][c] weights the passage
    from right ruling cols[c] to left ruling rows[r].
    """

    rows: tuple[Ruling, ...]
    cols: tuple[Ruling, ...]
    entries: list[list]
    zero: object
    one: object

    @classmethod
    def build(cls, rows, cols, zero, one, fill=None):
        rows = tuple(rows)
        cols = tuple(cols)
        ent = [[zero for _ in cols] for _ in rows]
        if fill:
            ridx = {r: i for i, r in enumerate(rows)}
            cidx = {c: j for j, c in enumerate(cols)}
            for (r, c), v in fill.items():
                ent[ridx[r]][cidx[c]] = ent[ridx[r]][cidx[c]] + v
        return cls(rows, cols, ent, zero, one)

    @classmethod
    def identity(cls, rulings, zero, one):
        rulings = tuple(rulings)
        m = cls.build(rulings, rulings, zero, one)
        for i in range(len(rulings)):
            m.entries[i][i] = one
        return m

    def entry(self, row: Ruling, col: Ruling):
        return self.entries[self.rows.index(row)][self.cols.index(col)]

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        if self.cols != other.rows:
            raise ValueError("transfer matrices not composable")
        out = TransferMatrix.build(self.rows, other.cols, self.zero, self.one)
        for i in range(len(self.rows)):
            for j in range(len(other.cols)):
                acc = self.zero
                for k in range(len(self.cols)):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                out.entries[i][j] = acc
        return out

    def scale(self, factor) -> "TransferMatrix":
        out = TransferMatrix.build(self.rows, self.cols, self.zero, self.one)
        for i in range(len(self.rows)):
            for j in range(len(self.cols)):
                out.entries[i][j] = self.entries[i][j] * factor
        return out

    def __eq__(self, other):
        return (
            isinstance(other, TransferMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def single_entry(self):
        if len(self.rows) != 1 or len(self.cols) != 1:
            raise ValueError("matrix is not 1x1")
        return self.entries[0][0]


def letter_ruling_matrix(t: BasicTangle) -> TransferMatrix:
    """Transfer matrix of one letter for the ruling-polynomial functor."""
    zero, one = LaurentPoly.zero(), LaurentPoly.one()
    rows = tuple(enumerate_set_rulings(t.left_boundary))
    cols = tuple(enumerate_set_rulings(t.right_boundary))
    fill: dict[tuple[Ruling, Ruling], LaurentPoly] = {}
    if t.kind == "L":
        i = t.pos
        for c in cols:
            if c.contains(i, i + 1):
                fill[(_cusp_shift_down(Ruling(tuple(p for p in c.pairs if p != (i, i + 1))), i), c)] = one
    elif t.kind == "R":
        i = t.pos
        for c in cols:
            r = _cusp_shift_up(c, i)
            r = Ruling(r.pairs + ((i, i + 1),))
            fill[(r, c)] = LaurentPoly.z_pow(-1)
    else:
        k = t.pos
        gap = t.crossing_gap()
        for c in cols:
            if c.contains(k, k + 1):
                continue  # excluded on this side: no passage
            fill[(transpose_ruling(c, k), c)] = one
            if gap == 0 and in_nested_position(c, k):
                fill[(c, c)] = fill.get((c, c), zero) + LaurentPoly.z_pow(1)
    return TransferMatrix.build(rows, cols, zero, one, fill)


def ruling_transfer(word: TangleWord) -> TransferMatrix:
    """Product of letter matrices over Z[z^{±1}]."""
    zero, one = LaurentPoly.zero(), LaurentPoly.one()
    out = TransferMatrix.identity(
        tuple(enumerate_set_rulings(word.left_boundary)), zero, one
    )
    for t in word.letters:
        out = out @ letter_ruling_matrix(t)
    return out
