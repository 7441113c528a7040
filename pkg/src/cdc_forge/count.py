"""Exact counting formulas: Gaussian binomials, MRD rank distributions, N.

Everything here is integer arithmetic.  Divisions that theory says are exact
are checked, so a transcription slip surfaces as an AssertionError rather
than a silently wrong bound.
"""

from __future__ import annotations

import functools

from .errors import InvalidParameterError, MissingDataError


def _exact_div(num: int, den: int) -> int:
    quo, rem = divmod(num, den)
    assert rem == 0, f"inexact division {num} / {den}"
    return quo


def _check_q(q):
    if not isinstance(q, int) or q < 2:
        raise InvalidParameterError(f"q must be an integer >= 2, got {q!r}")


@functools.lru_cache(maxsize=4096)
def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n; 0 when k > n."""
    _check_q(q)
    if n < 0 or k < 0:
        raise InvalidParameterError(f"negative argument to gaussian_binomial({n}, {k}, {q})")
    if k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** n - q ** i
        den *= q ** k - q ** i
    return _exact_div(num, den)


@functools.lru_cache(maxsize=4096)
def delsarte_count(m: int, n: int, d: int, i: int, q: int) -> int:
    """Number of rank-i codewords in a linear [m x n, d]_q MRD code."""
    _check_q(q)
    lo, hi = min(m, n), max(m, n)
    if d < 1 or d > lo:
        raise InvalidParameterError(f"need 1 <= d <= min(m, n), got d={d}, m={m}, n={n}")
    if not d <= i <= lo:
        raise InvalidParameterError(f"rank {i} outside [{d}, {lo}]")
    total = 0
    for j in range(i - d + 1):
        term = q ** (j * (j - 1) // 2) * gaussian_binomial(i, j, q) * (q ** (hi * (i - d - j + 1)) - 1)
        total += -term if j % 2 else term
    total *= gaussian_binomial(lo, i, q)
    assert total >= 0, f"negative Delsarte count for {(m, n, d, i, q)}"
    return total


def mrd_size(m: int, n: int, d: int, q: int) -> int:
    """Singleton-like bound q^(max(m,n)(min(m,n)-d+1))."""
    _check_q(q)
    if d < 1 or d > min(m, n):
        raise InvalidParameterError(f"need 1 <= d <= min(m, n), got d={d}, m={m}, n={n}")
    return q ** (max(m, n) * (min(m, n) - d + 1))


def rrmc_size(m: int, n: int, d: int, r: int, q: int) -> int:
    """Codewords of rank <= r in a linear MRD code: 1 + sum_{i=d}^{r} D(m,n,d,i)."""
    _check_q(q)
    if r < 0:
        raise InvalidParameterError(f"rank cap must be nonnegative, got {r}")
    if d < 1 or d > min(m, n):
        raise InvalidParameterError(f"need 1 <= d <= min(m, n), got d={d}, m={m}, n={n}")
    r = min(r, m, n)
    return 1 + sum(delsarte_count(m, n, d, i, q) for i in range(d, r + 1))


def mddc_terms(n: int, k: int, delta: int, c0: int, q: int) -> tuple[int, int]:
    """(numerator, denominator) of the MDDC augmentation quotient."""
    _check_q(q)
    if delta < 2 or not n > k >= 2 * delta - 1:
        raise InvalidParameterError(
            f"need delta >= 2 and n > k >= 2*delta - 1, got n={n}, k={k}, delta={delta}")
    if c0 < 0:
        raise InvalidParameterError(f"code size must be nonnegative, got {c0}")
    low = k - delta + 1
    num = gaussian_binomial(n, low, q) - c0 * gaussian_binomial(k, delta - 1, q)
    den = sum(q ** (i * i) * gaussian_binomial(low, i, q) * gaussian_binomial(n - low, i, q)
              for i in range(delta))
    return num, den


def mddc_increment(n: int, k: int, delta: int, c0: int, q: int) -> int:
    """max(N, 0): guaranteed count of (k-delta+1)-dim words added to an (n, 2delta, {k}) CDC."""
    num, den = mddc_terms(n, k, delta, c0, q)
    return max(num // den, 0)


def registry_n(x: int, y: int, z: int, q: int, registry) -> int:
    """N_q(x, y, z), reading S_q(x, 2y, z) from the registry."""
    key = (q, x, 2 * y, z)
    try:
        size = registry.size(*key)
    except KeyError:
        raise MissingDataError(key, f"registry has no best-known size S_{q}({x},{2 * y},{z}) "
                                    f"(key {q}/{x}/{2 * y}/{z})") from None
    return mddc_increment(x, z, y, size, q)
