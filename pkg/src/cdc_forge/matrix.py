"""Matrices and subspaces over GF(q).

Entries are field encodings (ints).  Over GF(2) rows are additionally packed
into Python ints for rank computations, which dominate verification time.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import InvalidParameterError
from .field import FieldSpec


class GFMatrix:
    """Immutable row-major matrix over a finite field."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: FieldSpec, rows: Iterable[Sequence[int]], ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise InvalidParameterError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        q = field.order
        for r in rows:
            if len(r) != ncols:
                raise InvalidParameterError("ragged matrix rows")
            for x in r:
                if not 0 <= x < q:
                    raise InvalidParameterError(f"{x} is not an element of {field}")
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _raw(cls, field, rows, ncols):
        obj = cls.__new__(cls)
        obj.field = field
        obj.rows = rows
        obj.nrows = len(rows)
        obj.ncols = ncols
        return obj

    @classmethod
    def zeros(cls, field, m, n):
        return cls._raw(field, tuple((0,) * n for _ in range(m)), n)

    @classmethod
    def identity(cls, field, k):
        return cls._raw(field, tuple(tuple(int(i == j) for j in range(k)) for i in range(k)), k)

    @classmethod
    def anti_identity(cls, field, k):
        return cls._raw(field, tuple(tuple(int(i + j == k - 1) for j in range(k)) for i in range(k)), k)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, GFMatrix):
            return NotImplemented
        return self.field is other.field and self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"GFMatrix({self.nrows}x{self.ncols} over GF({self.field.order}): [{body}])"

    def _check_same(self, other):
        if self.field is not other.field or self.shape != other.shape:
            raise InvalidParameterError(f"shape/field mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        add = self.field.add
        return GFMatrix._raw(self.field, tuple(
            tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other):
        self._check_same(other)
        sub = self.field.sub
        return GFMatrix._raw(self.field, tuple(
            tuple(sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def scale(self, c: int):
        mul = self.field.mul
        return GFMatrix._raw(self.field, tuple(tuple(mul(c, a) for a in r) for r in self.rows), self.ncols)

    def transpose(self):
        return GFMatrix._raw(self.field, tuple(zip(*self.rows)) if self.nrows else
                             tuple(() for _ in range(self.ncols)), self.nrows)

    def antitranspose(self):
        """Transpose across the anti-diagonal; preserves rank."""
        m, n = self.shape
        return GFMatrix._raw(self.field, tuple(
            tuple(self.rows[m - 1 - j][n - 1 - i] for j in range(m)) for i in range(n)), m)

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        return GFMatrix._raw(self.field, tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def columns(self, cols):
        return self.submatrix(range(self.nrows), cols)

    def is_zero(self):
        return not any(any(r) for r in self.rows)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise InvalidParameterError("hstack needs equal row counts")
        return GFMatrix._raw(self.field, tuple(r + s for r, s in zip(self.rows, other.rows)),
                             self.ncols + other.ncols)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise InvalidParameterError("vstack needs equal column counts")
        return GFMatrix._raw(self.field, self.rows + other.rows, self.ncols)

    def to_list(self):
        return [list(r) for r in self.rows]

    def rank(self) -> int:
        return rank_rows(self.field, self.rows, self.ncols)


# -- elimination kernels ------------------------------------------------

def pack_row(row) -> int:
    """Pack a GF(2) row; column 0 becomes the most significant bit."""
    x = 0
    for b in row:
        x = (x << 1) | b
    return x


def _rank_bits(rows) -> int:
    basis = {}
    r = 0
    for x in rows:
        while x:
            h = x.bit_length()
            b = basis.get(h)
            if b is None:
                basis[h] = x
                r += 1
                break
            x ^= b
    return r


def _rref_bits(rows, ncols):
    rows = list(rows)
    pivots = []
    r = 0
    nr = len(rows)
    for col in range(ncols):
        if r == nr:
            break
        bit = 1 << (ncols - 1 - col)
        sel = next((i for i in range(r, nr) if rows[i] & bit), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pr = rows[r]
        for i in range(nr):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(col)
        r += 1
    return rows[:r], pivots


def _unpack(x, ncols):
    return tuple((x >> (ncols - 1 - j)) & 1 for j in range(ncols))


def _rref_generic(field: FieldSpec, rows, ncols):
    rows = [list(r) for r in rows]
    nr = len(rows)
    add, mul, neg, inv = field._add, field._mul, field._neg, field._inv
    if add is None:
        add = [[field.add(a, b) for b in range(field.order)] for a in range(field.order)]
        mul = [[field.mul(a, b) for b in range(field.order)] for a in range(field.order)]
        neg = [field.neg(a) for a in range(field.order)]
        inv = [0] + [field.inv(a) for a in range(1, field.order)]
    pivots = []
    r = 0
    for col in range(ncols):
        if r == nr:
            break
        sel = next((i for i in range(r, nr) if rows[i][col]), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pr = rows[r]
        c = pr[col]
        if c != 1:
            mrow = mul[inv[c]]
            pr = rows[r] = [mrow[x] for x in pr]
        for i in range(nr):
            if i != r:
                f = rows[i][col]
                if f:
                    mrow = mul[neg[f]]
                    rows[i] = [add[x][mrow[y]] for x, y in zip(rows[i], pr)]
        pivots.append(col)
        r += 1
    return [tuple(x) for x in rows[:r]], pivots


def row_reduce(field: FieldSpec, rows, ncols):
    """Return (nonzero RREF rows, pivot columns)."""
    if field.order == 2:
        packed, pivots = _rref_bits([pack_row(r) for r in rows], ncols)
        return [_unpack(x, ncols) for x in packed], pivots
    return _rref_generic(field, rows, ncols)


def rank_rows(field: FieldSpec, rows, ncols) -> int:
    if field.order == 2:
        return _rank_bits(pack_row(r) for r in rows)
    return len(_rref_generic(field, rows, ncols)[1])


def nullspace(field: FieldSpec, rows, ncols) -> list[tuple[int, ...]]:
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    red, pivots = row_reduce(field, rows, ncols)
    pset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pset:
            continue
        x = [0] * ncols
        x[f] = 1
        for r, p in enumerate(pivots):
            x[p] = field.neg(red[r][f])
        basis.append(tuple(x))
    return basis


# -- public operations ---------------------------------------------------

def rref(M: GFMatrix) -> tuple[GFMatrix, list[int]]:
    """Reduced row echelon form; zero rows are kept at the bottom."""
    red, pivots = row_reduce(M.field, M.rows, M.ncols)
    zero = (0,) * M.ncols
    out = tuple(red) + (zero,) * (M.nrows - len(red))
    return GFMatrix._raw(M.field, out, M.ncols), pivots


def rief(M: GFMatrix) -> tuple[GFMatrix, list[int]]:
    """Reduced row inverse echelon form.

    Each row's leading coefficient is its rightmost nonzero entry, and these
    sit strictly further left going down.  Obtained by reversing columns,
    taking the RREF and reversing back.
    """
    n = M.ncols
    rev = GFMatrix._raw(M.field, tuple(tuple(reversed(r)) for r in M.rows), n)
    red, pivots = rref(rev)
    out = GFMatrix._raw(M.field, tuple(tuple(reversed(r)) for r in red.rows), n)
    return out, [n - 1 - p for p in pivots]


def rank_distance(A: GFMatrix, B: GFMatrix) -> int:
    if A.field is not B.field or A.shape != B.shape:
        raise InvalidParameterError(f"rank distance needs equal shapes, got {A.shape} and {B.shape}")
    return (A - B).rank()


def strip_columns(M: GFMatrix, cols) -> GFMatrix:
    """Drop the given columns (e.g. pivot columns) from M."""
    drop = set(cols)
    return M.columns([j for j in range(M.ncols) if j not in drop])


class Subspace:
    """A subspace of GF(q)^n stored by its RREF generator."""

    __slots__ = ("field", "n", "basis", "pivots", "_bits", "_key")

    def __init__(self, field: FieldSpec, n: int, rows: Iterable[Sequence[int]] = ()):
        red, pivots = row_reduce(field, [tuple(r) for r in rows], n)
        self._init(field, n, tuple(red), tuple(pivots))

    def _init(self, field, n, basis, pivots):
        self.field = field
        self.n = n
        self.basis = basis
        self.pivots = pivots
        self._bits = None
        self._key = None

    @classmethod
    def from_matrix(cls, M: GFMatrix) -> Subspace:
        return cls(M.field, M.ncols, M.rows)

    @classmethod
    def _from_rref(cls, field, n, basis, pivots):
        obj = cls.__new__(cls)
        obj._init(field, n, basis, pivots)
        return obj

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def bits(self):
        if self._bits is None:
            self._bits = tuple(pack_row(r) for r in self.basis)
        return self._bits

    def generator(self) -> GFMatrix:
        return GFMatrix._raw(self.field, self.basis, self.n)

    def inverse_generator(self) -> GFMatrix:
        return rief(self.generator())[0]

    def key(self) -> bytes:
        return canonical_key(self)

    def identifying_vector(self) -> tuple[int, ...]:
        v = [0] * self.n
        for p in self.pivots:
            v[p] = 1
        return tuple(v)

    def inverse_identifying_vector(self) -> tuple[int, ...]:
        v = [0] * self.n
        for p in rief(self.generator())[1]:
            v[p] = 1
        return tuple(v)

    def contains(self, vector: Sequence[int]) -> bool:
        return rank_rows(self.field, self.basis + (tuple(vector),), self.n) == self.dim

    def vectors(self):
        """Every vector of the subspace (q^dim of them)."""
        F = self.field
        for coeffs in itertools.product(range(F.order), repeat=self.dim):
            v = [0] * self.n
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = [F.add(a, F.mul(c, b)) for a, b in zip(v, row)]
            yield tuple(v)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.field is other.field and self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def __repr__(self):
        return f"Subspace(n={self.n}, dim={self.dim}, q={self.field.order}, pivots={list(self.pivots)})"

    def __reduce__(self):
        return (Subspace._from_rref, (self.field, self.n, self.basis, self.pivots))


def identifying_vectors(U: Subspace) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return U.identifying_vector(), U.inverse_identifying_vector()


def canonical_key(U: Subspace) -> bytes:
    """Injective serialization of the RREF generator."""
    if U._key is None:
        width = 1 if U.field.order <= 256 else 2
        head = U.n.to_bytes(2, "big") + U.dim.to_bytes(2, "big")
        body = b"".join(x.to_bytes(width, "big") for r in U.basis for x in r)
        U._key = head + body
    return U._key


def rank_of_union(U: Subspace, V: Subspace) -> int:
    if U.field.order == 2:
        return _rank_bits(U.bits + V.bits)
    return rank_rows(U.field, U.basis + V.basis, U.n)


def subspace_distance(U: Subspace, V: Subspace) -> int:
    """dim(U + V) - dim(U ∩ V)."""
    if U.n != V.n or U.field is not V.field:
        raise InvalidParameterError(
            f"subspaces live in different ambient spaces ({U.n}, GF({U.field.order})) "
            f"vs ({V.n}, GF({V.field.order}))")
    return 2 * rank_of_union(U, V) - U.dim - V.dim


def hamming_distance(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise InvalidParameterError("vectors of different lengths")
    return sum(1 for a, b in zip(u, v) if a != b)


def rref_patterns(n: int, k: int):
    """All pivot tuples of k-dimensional subspaces of an n-space."""
    return itertools.combinations(range(n), k)


def all_subspaces(field: FieldSpec, n: int, k: int):
    """Enumerate every k-dimensional subspace of GF(q)^n in canonical order."""
    q = field.order
    for pivots in rref_patterns(n, k):
        pset = set(pivots)
        free = [(r, j) for r, p in enumerate(pivots) for j in range(p + 1, n) if j not in pset]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, j), x in zip(free, vals):
                rows[r][j] = x
            yield Subspace._from_rref(field, n, tuple(tuple(r) for r in rows), pivots)
