"""Dot patterns: Ferrers diagrams, echelon Ferrers forms and their bilateral kin.

Indexing is 0-based throughout.  A pattern cell is ZERO, ONE or DOT; a DotShape
is just a boolean mask.  The "dot shape" of a k x n echelon pattern is always
taken over its n - k non-pivot columns, so filler matrices are k x (n - k)
and lifting simply writes them into those columns.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .errors import InvalidParameterError
from .matrix import GFMatrix

ZERO, ONE, DOT = 0, 1, 2


class DotShape:
    """An m x n boolean mask; True marks a dot (free entry)."""

    __slots__ = ("m", "n", "mask")

    def __init__(self, m: int, n: int, mask: Sequence[Sequence[bool]]):
        mask = tuple(tuple(bool(x) for x in row) for row in mask)
        if len(mask) != m or any(len(r) != n for r in mask):
            raise InvalidParameterError(f"mask does not have shape {m}x{n}")
        self.m, self.n, self.mask = m, n, mask

    @classmethod
    def full(cls, m, n):
        return cls(m, n, [[True] * n for _ in range(m)])

    @property
    def dots(self) -> int:
        return sum(sum(r) for r in self.mask)

    def cells(self):
        return [(i, j) for i in range(self.m) for j in range(self.n) if self.mask[i][j]]

    def column_counts(self):
        return tuple(sum(self.mask[i][j] for i in range(self.m)) for j in range(self.n))

    def row_counts(self):
        return tuple(sum(r) for r in self.mask)

    def is_full(self):
        return self.dots == self.m * self.n

    def respects(self, M: GFMatrix) -> bool:
        """True when M is zero outside the dots."""
        if M.shape != (self.m, self.n):
            return False
        return all(not x or ok for row, mrow in zip(M.rows, self.mask) for x, ok in zip(row, mrow))

    def fill(self, field, values) -> GFMatrix:
        """Matrix with the given values written into the dots (row-major)."""
        rows = [[0] * self.n for _ in range(self.m)]
        it = iter(values)
        for i, j in self.cells():
            rows[i][j] = next(it)
        return GFMatrix._raw(field, tuple(tuple(r) for r in rows), self.n)

    def bitstring(self) -> str:
        return "".join("1" if x else "0" for r in self.mask for x in r)

    @classmethod
    def from_bitstring(cls, m, n, s):
        if len(s) != m * n or set(s) - {"0", "1"}:
            raise InvalidParameterError("bad dot-shape bitstring")
        return cls(m, n, [[s[i * n + j] == "1" for j in range(n)] for i in range(m)])

    def embed_top_right(self, M: GFMatrix) -> GFMatrix:
        """Place a smaller matrix in the top-right corner of an m x n zero matrix."""
        a, b = M.shape
        if a > self.m or b > self.n:
            raise InvalidParameterError(f"cannot embed {a}x{b} matrix into {self.m}x{self.n}")
        rows = [[0] * self.n for _ in range(self.m)]
        for i in range(a):
            rows[i][self.n - b:] = M.rows[i]
        return GFMatrix._raw(M.field, tuple(tuple(r) for r in rows), self.n)

    def render(self) -> str:
        return "\n".join(" ".join("•" if x else "." for x in r) for r in self.mask)

    def __eq__(self, other):
        if not isinstance(other, DotShape):
            return NotImplemented
        return (self.m, self.n, self.mask) == (other.m, other.n, other.mask)

    def __hash__(self):
        return hash((self.m, self.n, self.mask))

    def __repr__(self):
        return f"DotShape({self.m}x{self.n}, dots={self.dots})"


class FerrersDiagram:
    """Classical Ferrers diagram given by nondecreasing column counts.

    Dots are top- and right-aligned; the row count is the last column count.
    The empty diagram (no columns) is allowed.
    """

    __slots__ = ("cols",)

    def __init__(self, cols: Sequence[int]):
        cols = tuple(int(c) for c in cols)
        if cols and cols[0] < 1:
            raise InvalidParameterError(f"Ferrers column counts must be >= 1: {list(cols)}")
        if any(a > b for a, b in zip(cols, cols[1:])):
            raise InvalidParameterError(f"Ferrers column counts must be nondecreasing: {list(cols)}")
        self.cols = cols

    @property
    def m(self):
        return self.cols[-1] if self.cols else 0

    @property
    def n(self):
        return len(self.cols)

    @property
    def dots(self):
        return sum(self.cols)

    def row_counts(self):
        """rho_i: number of dots in row i (top row first)."""
        return tuple(sum(1 for c in self.cols if c > i) for i in range(self.m))

    def shape(self) -> DotShape:
        return DotShape(self.m, self.n, [[i < c for c in self.cols] for i in range(self.m)])

    def transpose(self) -> FerrersDiagram:
        return FerrersDiagram(tuple(reversed(self.row_counts())))

    def inverse(self) -> tuple[int, ...]:
        return tuple(reversed(self.cols))

    @classmethod
    def from_shape(cls, shape: DotShape) -> FerrersDiagram:
        """Validate a mask as a Ferrers diagram after trimming empty columns on the left.

        Empty rows at the bottom are dropped as well, so a dot-free shape
        yields the empty diagram.
        """
        counts = shape.column_counts()
        for j, c in enumerate(counts):
            expect = tuple(i < c for i in range(shape.m))
            if tuple(shape.mask[i][j] for i in range(shape.m)) != expect:
                raise InvalidParameterError("dots are not top-aligned; not a Ferrers diagram")
        trimmed = [c for c in counts if c]
        if any(c == 0 for c in counts[len(counts) - len(trimmed):]):
            raise InvalidParameterError("empty column to the right of a dot column")
        return cls(trimmed)

    def __eq__(self, other):
        if isinstance(other, FerrersDiagram):
            return self.cols == other.cols
        return NotImplemented

    def __hash__(self):
        return hash(self.cols)

    def __repr__(self):
        return f"FerrersDiagram({list(self.cols)})"


class FerrersViews(NamedTuple):
    inverse: tuple
    transpose: FerrersDiagram
    dots: int


def ferrers_views(F: FerrersDiagram) -> FerrersViews:
    return FerrersViews(F.inverse(), F.transpose(), F.dots)


def singleton_exponent(F, d: int) -> int:
    """min_i v_i, v_i = dots left after dropping the top i rows and rightmost d-1-i columns."""
    if d < 1:
        raise InvalidParameterError(f"distance must be >= 1, got {d}")
    shape = F.shape() if isinstance(F, FerrersDiagram) else F
    best = None
    for i in range(d):
        right = d - 1 - i
        v = sum(1 for r in range(i, shape.m) for c in range(shape.n - right) if shape.mask[r][c])
        best = v if best is None else min(best, v)
    return best


class EchelonPattern:
    """k x n pattern of ZERO / ONE / DOT cells with exactly one ONE per row."""

    __slots__ = ("k", "n", "cells", "pivots")

    def __init__(self, k: int, n: int, cells):
        cells = tuple(tuple(c) for c in cells)
        if len(cells) != k or any(len(r) != n for r in cells):
            raise InvalidParameterError("pattern has wrong shape")
        pivots = []
        for r in cells:
            ones = [j for j, c in enumerate(r) if c == ONE]
            if len(ones) != 1:
                raise InvalidParameterError("each pattern row needs exactly one ONE")
            pivots.append(ones[0])
        if len(set(pivots)) != k:
            raise InvalidParameterError("pattern pivots must be in distinct columns")
        self.k, self.n, self.cells, self.pivots = k, n, cells, tuple(pivots)

    def support(self) -> tuple[int, ...]:
        v = [0] * self.n
        for p in self.pivots:
            v[p] = 1
        return tuple(v)

    def free_columns(self) -> list[int]:
        ps = set(self.pivots)
        return [j for j in range(self.n) if j not in ps]

    def dot_shape(self) -> DotShape:
        cols = self.free_columns()
        return DotShape(self.k, len(cols), [[self.cells[i][j] == DOT for j in cols] for i in range(self.k)])

    def fill(self, M: GFMatrix) -> GFMatrix:
        """Write M (k x (n-k), zero off the dots) into the free columns."""
        shape = self.dot_shape()
        if M.shape != (shape.m, shape.n):
            raise InvalidParameterError(f"filler has shape {M.shape}, pattern wants {(shape.m, shape.n)}")
        if not shape.respects(M):
            raise InvalidParameterError("filler has nonzero entries outside the pattern's dots")
        cols = self.free_columns()
        rows = []
        for i in range(self.k):
            row = [0] * self.n
            row[self.pivots[i]] = 1
            for jj, j in enumerate(cols):
                row[j] = M.rows[i][jj]
            rows.append(tuple(row))
        return GFMatrix._raw(M.field, tuple(rows), self.n)

    def render(self) -> str:
        sym = {ZERO: "0", ONE: "1", DOT: "•"}
        return "\n".join(" ".join(sym[c] for c in r) for r in self.cells)

    def __eq__(self, other):
        if not isinstance(other, EchelonPattern):
            return NotImplemented
        return self.cells == other.cells and self.n == other.n

    def __hash__(self):
        return hash((self.n, self.cells))

    def __repr__(self):
        return f"EchelonPattern({self.k}x{self.n}, pivots={list(self.pivots)})"


def _check_binary(v):
    v = tuple(int(x) for x in v)
    if any(x not in (0, 1) for x in v):
        raise InvalidParameterError(f"not a binary vector: {v}")
    return v


def parse_binary(s: str) -> tuple[int, ...]:
    return _check_binary(int(c) for c in s if c in "01")


def _ef_rows(v):
    pivots = [j for j, x in enumerate(v) if x]
    pset = set(pivots)
    rows = []
    for p in pivots:
        rows.append(tuple(ONE if j == p else DOT if j > p and j not in pset else ZERO
                          for j in range(len(v))))
    return rows


def _ief_rows(v):
    pivots = [j for j, x in enumerate(v) if x][::-1]
    pset = set(pivots)
    rows = []
    for p in pivots:
        rows.append(tuple(ONE if j == p else DOT if j < p and j not in pset else ZERO
                          for j in range(len(v))))
    return rows


def echelon_ferrers_form(v) -> tuple[EchelonPattern, FerrersDiagram]:
    """EF(v) and the Ferrers diagram F_v formed by its dots."""
    v = _check_binary(v)
    pattern = EchelonPattern(sum(v), len(v), _ef_rows(v))
    return pattern, FerrersDiagram.from_shape(pattern.dot_shape())


def inverse_echelon_ferrers_form(v) -> tuple[EchelonPattern, DotShape]:
    """Inverse echelon Ferrers form; its dots form a left-aligned (inverse) diagram."""
    v = _check_binary(v)
    pattern = EchelonPattern(sum(v), len(v), _ief_rows(v))
    return pattern, pattern.dot_shape()


class BilateralIdentifyingVector:
    """Binary vector split as (identifying | zero middle | inverse identifying)."""

    __slots__ = ("n1", "n2", "bits")

    def __init__(self, n1: int, n2: int, bits):
        bits = _check_binary(bits)
        n = len(bits)
        if n1 < 0 or n2 < 0 or n1 + n2 > n:
            raise InvalidParameterError(f"bad segment lengths n1={n1}, n2={n2} for length {n}")
        if any(bits[n1:n - n2]):
            raise InvalidParameterError("middle segment of a bilateral identifying vector must be zero")
        self.n1, self.n2, self.bits = n1, n2, bits

    @classmethod
    def from_string(cls, s: str):
        """Parse e.g. ``"110100|00|0010110"``."""
        parts = s.split("|")
        if len(parts) != 3:
            raise InvalidParameterError("expected three '|'-separated segments")
        a, b, c = (parse_binary(p) for p in parts)
        return cls(len(a), len(c), a + b + c)

    @classmethod
    def from_segments(cls, v1, middle: int, v2):
        v1, v2 = _check_binary(v1), _check_binary(v2)
        return cls(len(v1), len(v2), v1 + (0,) * middle + v2)

    @property
    def n(self):
        return len(self.bits)

    @property
    def n3(self):
        return self.n - self.n1 - self.n2

    @property
    def v1(self):
        return self.bits[:self.n1]

    @property
    def v3(self):
        return self.bits[self.n1:self.n - self.n2]

    @property
    def v2(self):
        return self.bits[self.n - self.n2:]

    @property
    def a1(self):
        return sum(self.v1)

    @property
    def a2(self):
        return sum(self.v2)

    @property
    def weight(self):
        return self.a1 + self.a2

    @property
    def type(self):
        return (self.n1, self.n3, self.n2)

    def __str__(self):
        s = lambda v: "".join(map(str, v))
        return f"{s(self.v1)}|{s(self.v3)}|{s(self.v2)}"

    def __repr__(self):
        return f"BilateralIdentifyingVector({self})"

    def __eq__(self, other):
        if not isinstance(other, BilateralIdentifyingVector):
            return NotImplemented
        return (self.n1, self.n2, self.bits) == (other.n1, other.n2, other.bits)

    def __hash__(self):
        return hash((self.n1, self.n2, self.bits))


def gb_echelon_form(v: BilateralIdentifyingVector) -> tuple[EchelonPattern, DotShape]:
    """Generalized bilateral echelon Ferrers form and its dot shape."""
    if not isinstance(v, BilateralIdentifyingVector):
        raise InvalidParameterError("gb_echelon_form needs a BilateralIdentifyingVector")
    if v.weight == 0:
        raise InvalidParameterError("bilateral identifying vector has weight 0")
    n, n1, n2, n3 = v.n, v.n1, v.n2, v.n3
    upper = _ef_rows(v.v1)
    lower = _ief_rows(v.v2)
    right_pivots = {j for j, x in enumerate(v.v2) if x}
    rows = []
    for r in upper:
        tail = tuple(ZERO if j in right_pivots else DOT for j in range(n2))
        rows.append(r + (DOT,) * n3 + tail)
    for r in lower:
        rows.append((ZERO,) * n1 + (DOT,) * n3 + r)
    pattern = EchelonPattern(v.weight, n, rows)
    return pattern, pattern.dot_shape()


def sigma_submatrix(M: GFMatrix, a: int, b: int) -> GFMatrix:
    """The a x b block in the upper right-hand corner of M."""
    if not (0 <= a <= M.nrows and 0 <= b <= M.ncols):
        raise InvalidParameterError(f"cannot take a {a}x{b} corner of a {M.nrows}x{M.ncols} matrix")
    return M.submatrix(range(a), range(M.ncols - b, M.ncols))


def phi_submatrix(v: BilateralIdentifyingVector, M: GFMatrix) -> GFMatrix:
    """The a1 x (n2 - a2) upper-right block of a matrix with the form of F~_v."""
    _, shape = gb_echelon_form(v)
    if not shape.respects(M):
        raise InvalidParameterError("matrix does not have the form of the generalized bilateral diagram")
    return sigma_submatrix(M, v.a1, v.n2 - v.a2)
