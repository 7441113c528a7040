"""Finite fields GF(q) with integer-encoded elements.

An element of GF(b^m), built as an extension of a base field of order b, is
encoded by the integer whose base-b digits are its polynomial coefficients,
constant term least significant.  Prime fields use the residue itself.

Moduli are fixed so that every emitted artifact is reproducible:

    GF(4) = GF(2)[x]/(x^2 + x + 1)
    GF(8) = GF(2)[x]/(x^3 + x + 1)
    GF(9) = GF(3)[x]/(x^2 + 1)

Every other extension (including the GF(q^m) fields used for Gabidulin
codes) takes the lexicographically least monic irreducible polynomial, where
candidates are ordered by the integer encoding of their non-leading
coefficients.  The three fixed moduli above are exactly what that rule
selects, so the rule is the single source of truth.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .errors import FieldDivisionError, InvalidParameterError

TABLE_LIMIT = 512


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q == p**e, or raise InvalidParameterError."""
    if not isinstance(q, int) or q < 2:
        raise InvalidParameterError(f"field order must be an integer >= 2, got {q!r}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise InvalidParameterError(f"{q} is not a prime power")
    return p, e


class FieldSpec:
    """Immutable description of GF(q) plus its arithmetic tables.

    ``modulus`` lists the coefficients (constant term first, monic) of the
    defining polynomial over ``base``; ``base`` is None for prime fields.
    For fields built directly over GF(p) this is the usual modulus over the
    prime field.
    """

    __slots__ = (
        "order", "characteristic", "degree", "base", "modulus", "ext_degree",
        "_add", "_mul", "_neg", "_inv", "_exp", "_log",
    )

    def __init__(self, base: FieldSpec | None, modulus: tuple[int, ...]):
        self.base = base
        self.modulus = tuple(modulus)
        if base is None:
            p = modulus[0]
            self.modulus = (0, 1)
            self.order = p
            self.characteristic = p
            self.degree = 1
            self.ext_degree = 1
        else:
            m = len(modulus) - 1
            self.ext_degree = m
            self.order = base.order ** m
            self.characteristic = base.characteristic
            self.degree = base.degree * m
        self._build_tables()

    # -- construction ---------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        b, m = self.base.order, self.ext_degree
        out = []
        for _ in range(m):
            out.append(a % b)
            a //= b
        return out

    def _undigits(self, ds) -> int:
        b = self.base.order
        a = 0
        for c in reversed(ds):
            a = a * b + c
        return a

    def _poly_mul(self, a: int, b: int) -> int:
        if self.base is None:
            return a * b % self.order
        B = self.base
        m = self.ext_degree
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x == 0:
                continue
            for j, y in enumerate(db):
                if y:
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i]
            if c:
                for j in range(m):
                    prod[i - m + j] = B.sub(prod[i - m + j], B.mul(c, self.modulus[j]))
                prod[i] = 0
        return self._undigits(prod[:m])

    def _poly_add(self, a: int, b: int) -> int:
        if self.base is None:
            return (a + b) % self.order
        if self.characteristic == 2:
            return a ^ b
        B = self.base
        return self._undigits([B.add(x, y) for x, y in zip(self._digits(a), self._digits(b))])

    def _poly_neg(self, a: int) -> int:
        if self.base is None:
            return -a % self.order
        if self.characteristic == 2:
            return a
        B = self.base
        return self._undigits([B.neg(x) for x in self._digits(a)])

    def _build_tables(self):
        q = self.order
        self._add = self._mul = self._neg = self._inv = None
        self._exp = self._log = None
        if q > TABLE_LIMIT:
            return
        # exp/log tables from a primitive element
        for g in range(1, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._poly_mul(x, g)
            if len(exp) == q - 1:
                break
        log = [0] * q
        for i, x in enumerate(exp):
            log[x] = i
        self._exp, self._log = exp, log

        e = np.array(exp + exp, dtype=np.int64)
        lg = np.array(log, dtype=np.int64)
        mul = e[lg[:, None] + lg[None, :]]
        mul[0, :] = 0
        mul[:, 0] = 0
        if self.base is None:
            r = np.arange(q)
            add = (r[:, None] + r[None, :]) % q
        elif self.characteristic == 2:
            r = np.arange(q)
            add = r[:, None] ^ r[None, :]
        else:
            b, m = self.base.order, self.ext_degree
            badd = np.array(self.base._add, dtype=np.int64)
            r = np.arange(q)
            add = np.zeros((q, q), dtype=np.int64)
            for i in range(m):
                w = b ** i
                di = (r // w) % b
                add += badd[di[:, None], di[None, :]] * w
        self._mul = mul.tolist()
        self._add = add.tolist()
        self._neg = [row.index(0) for row in self._add]
        self._inv = [0] + [exp[(-log[a]) % (q - 1)] for a in range(1, q)]

    # -- arithmetic -----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        return self._poly_add(a, b)

    def neg(self, a: int) -> int:
        if self._neg is not None:
            return self._neg[a]
        return self._poly_neg(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul is not None:
            return self._mul[a][b]
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionError(f"inverse of 0 in GF({self.order})")
        if self._inv is not None:
            return self._inv[a]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def elements(self) -> list[int]:
        return list(range(self.order))

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    # -- misc -----------------------------------------------------------

    @property
    def is_prime(self) -> bool:
        return self.base is None

    def describe(self) -> dict:
        """JSON-friendly summary used in code-file headers."""
        info = {"q": self.order, "p": self.characteristic, "modulus": list(self.modulus)}
        if self.base is not None and self.base.base is not None:
            info["base"] = self.base.describe()
        return info

    def __repr__(self):
        if self.base is None:
            return f"GF({self.order})"
        return f"GF({self.order}; over GF({self.base.order}) mod {list(self.modulus)})"

    def __reduce__(self):
        if self.base is None:
            return (field_new, (self.order,))
        return (_rebuild, (self.base, self.modulus))


def _rebuild(base, modulus):
    return _extension_with_modulus(base, tuple(modulus))


class FieldElement:
    """Convenience wrapper pairing an encoding with its field."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        if not 0 <= value < field.order:
            raise InvalidParameterError(f"{value} is not an element encoding of {field}")
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise InvalidParameterError("operands belong to different fields")
            return other.value
        return other % self.field.order

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.order, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.field!r}({self.value})"


# -- polynomial helpers over a base field --------------------------------

def _poly_divides(base: FieldSpec, g: tuple[int, ...], f: tuple[int, ...]) -> bool:
    """True if monic g divides f (coefficient tuples, constant first)."""
    r = list(f)
    dg = len(g) - 1
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if c:
            for j in range(dg + 1):
                r[i - dg + j] = base.sub(r[i - dg + j], base.mul(c, g[j]))
    return not any(r[:dg])


def _monic_polys(base: FieldSpec, degree: int):
    for lower in itertools.product(range(base.order), repeat=degree):
        yield tuple(reversed(lower)) + (1,)


def is_irreducible(base: FieldSpec, f: tuple[int, ...]) -> bool:
    """Exhaustive factor check; fine for the small degrees used here."""
    deg = len(f) - 1
    if deg < 1 or f[-1] != 1:
        return False
    for dg in range(1, deg // 2 + 1):
        for g in _monic_polys(base, dg):
            if _poly_divides(base, g, f):
                return False
    return True


def least_irreducible(base: FieldSpec, degree: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of the given degree."""
    b = base.order
    for code in range(b ** degree):
        lower = []
        for _ in range(degree):
            lower.append(code % b)
            code //= b
        f = tuple(lower) + (1,)
        if lower[0] != 0 and is_irreducible(base, f):
            return f
    raise InvalidParameterError(f"no irreducible polynomial of degree {degree} over {base}")


@functools.lru_cache(maxsize=None)
def _prime_field(p: int) -> FieldSpec:
    return FieldSpec(None, (p,))


@functools.lru_cache(maxsize=None)
def _extension_with_modulus(base: FieldSpec, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(base, modulus)


def field_new(q: int) -> FieldSpec:
    """GF(q) built over its prime field; raises for non prime powers."""
    p, e = prime_power(q)
    if e == 1:
        return _prime_field(p)
    return extension(_prime_field(p), e)


@functools.lru_cache(maxsize=None)
def extension(base: FieldSpec, m: int) -> FieldSpec:
    """GF(|base|^m) as a degree-m extension of ``base``."""
    if m < 1:
        raise InvalidParameterError(f"extension degree must be >= 1, got {m}")
    if m == 1:
        return base
    return _extension_with_modulus(base, least_irreducible(base, m))


def field_arith(spec: FieldSpec, op: str, a: int, b: int | None = None) -> int:
    """Dispatch a named field operation on element encodings."""
    for x in (a, b):
        if x is not None and not 0 <= x < spec.order:
            raise InvalidParameterError(f"{x} is not an element of {spec}")
    if op in ("add", "sub", "mul") and b is None:
        raise InvalidParameterError(f"{op} needs two operands")
    if op == "add":
        return spec.add(a, b)
    if op == "sub":
        return spec.sub(a, b)
    if op == "mul":
        return spec.mul(a, b)
    if op == "inv":
        return spec.inv(a)
    if op == "neg":
        return spec.neg(a)
    raise InvalidParameterError(f"unknown field operation {op!r}")


def field_elements(spec: FieldSpec) -> list[int]:
    return spec.elements()
