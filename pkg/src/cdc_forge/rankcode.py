"""Rank-metric codes: Gabidulin MRD codes, rank-restricted subcodes, FD codes.

Codewords are m x n matrices over GF(q).  Internally a word is a flat
row-major tuple; over GF(2) it is also packed into an int (first entry most
significant) so that differences are XORs.
"""

from __future__ import annotations

import itertools
import os
import random
from collections import Counter

from . import count
from .errors import InvalidParameterError, ResourceError, UnsupportedDiagramError
from .field import FieldSpec, extension, field_new
from .matrix import GFMatrix, _rank_bits, _rref_generic, nullspace
from .shape import DotShape, FerrersDiagram

DEFAULT_BUDGET = int(os.environ.get("CDC_FORGE_BUDGET", 2 ** 22))
EXHAUSTIVE_LIMIT = 4096
DEFAULT_SAMPLES = 10 ** 5


def _as_field(q) -> FieldSpec:
    return q if isinstance(q, FieldSpec) else field_new(q)


def _pack(flat) -> int:
    x = 0
    for b in flat:
        x = (x << 1) | b
    return x


def _unpack(x, length):
    return tuple((x >> (length - 1 - i)) & 1 for i in range(length))


def flat_rank(field, flat, m, n) -> int:
    """Rank of the m x n matrix stored row-major in ``flat``."""
    if field.order == 2:
        if isinstance(flat, int):
            mask = (1 << n) - 1
            return _rank_bits((flat >> ((m - 1 - i) * n)) & mask for i in range(m))
        return _rank_bits(_pack(flat[i * n:(i + 1) * n]) for i in range(m))
    return len(_rref_generic(field, [flat[i * n:(i + 1) * n] for i in range(m)], n)[1])


def _flat_sub(field, a, b):
    if field.order == 2:
        return tuple(x ^ y for x, y in zip(a, b))
    sub = field.sub
    return tuple(sub(x, y) for x, y in zip(a, b))


def _flat_combo(field, basis, coeffs, length):
    if field.order == 2:
        out = [0] * length
        for c, bvec in zip(coeffs, basis):
            if c:
                out = [x ^ y for x, y in zip(out, bvec)]
        return tuple(out)
    add, mul = field.add, field.mul
    out = [0] * length
    for c, bvec in zip(coeffs, basis):
        if c:
            out = [add(x, mul(c, y)) for x, y in zip(out, bvec)]
    return tuple(out)


class RankMetricCode:
    """An m x n rank-metric code given by a linear basis or an explicit word list.

    ``rank_cap`` bounds the rank of each word, or of its upper-right
    ``cap_block = (a, b)`` corner when that is set.  ``mask`` is the DotShape
    every word respects.  ``rho`` carries a reference size to compare against
    for search results.
    """

    def __init__(self, field, m, n, d, *, basis=None, words=None, rank_cap=None,
                 cap_block=None, mask=None, recipe=None, best_effort=False, rho=None):
        if (basis is None) == (words is None):
            raise InvalidParameterError("give exactly one of basis or words")
        self.field, self.m, self.n, self.d = field, m, n, d
        self.rank_cap, self.cap_block, self.mask = rank_cap, cap_block, mask
        self.recipe = dict(recipe or {})
        self.best_effort, self.rho = best_effort, rho
        to_flat = lambda M: tuple(x for r in M.rows for x in r)
        if basis is not None:
            self.kind = "linear"
            self._basis = [to_flat(B) if isinstance(B, GFMatrix) else tuple(B) for B in basis]
            self._words = None
        else:
            self.kind = "explicit"
            self._basis = None
            self._words = [to_flat(W) if isinstance(W, GFMatrix) else tuple(W) for W in words]
        for f in (self._basis or self._words):
            if len(f) != m * n:
                raise InvalidParameterError(f"codeword has {len(f)} entries, expected {m * n}")

    @property
    def size(self) -> int:
        if self.kind == "linear":
            return self.field.order ** len(self._basis)
        return len(self._words)

    @property
    def dimension(self):
        return len(self._basis) if self.kind == "linear" else None

    def basis(self):
        return [self._matrix(f) for f in self._basis] if self.kind == "linear" else None

    def _matrix(self, flat):
        n = self.n
        return GFMatrix._raw(self.field, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(self.m)), n)

    def flat_word(self, idx: int):
        if not 0 <= idx < self.size:
            raise IndexError(idx)
        if self.kind == "explicit":
            return self._words[idx]
        q = self.field.order
        coeffs = []
        for _ in self._basis:
            idx, c = divmod(idx, q)
            coeffs.append(c)
        return _flat_combo(self.field, self._basis, coeffs, self.m * self.n)

    def __getitem__(self, idx: int) -> GFMatrix:
        return self._matrix(self.flat_word(idx))

    def flat_words(self):
        if self.kind == "explicit":
            yield from self._words
            return
        if self.field.order == 2:
            # Gray-code walk: one XOR per word.
            L = self.m * self.n
            packed = [_pack(b) for b in self._basis]
            cur = 0
            yield _unpack(cur, L)
            for i in range(1, 1 << len(packed)):
                cur ^= packed[(i & -i).bit_length() - 1]
                yield _unpack(cur, L)
            return
        for coeffs in itertools.product(range(self.field.order), repeat=len(self._basis)):
            yield _flat_combo(self.field, self._basis, coeffs[::-1], self.m * self.n)

    def __iter__(self):
        for f in self.flat_words():
            yield self._matrix(f)

    def rank_census(self) -> Counter:
        return Counter(flat_rank(self.field, f, self.m, self.n) for f in self.flat_words())

    def capped_rank(self, flat) -> int:
        """Rank of the part of a word that the rank cap applies to."""
        if self.cap_block is None:
            return flat_rank(self.field, flat, self.m, self.n)
        a, b = self.cap_block
        n = self.n
        block = tuple(x for i in range(a) for x in flat[i * n + n - b:(i + 1) * n])
        return flat_rank(self.field, block, a, b)

    def __repr__(self):
        return (f"RankMetricCode({self.m}x{self.n}, d={self.d}, q={self.field.order}, "
                f"size={self.size}, kind={self.kind})")


# -- Gabidulin codes --------------------------------------------------------

def gabidulin_mrd(m: int, n: int, d: int, q) -> RankMetricCode:
    """Linear [m x n, d] MRD code from q-linearized polynomials.

    Messages are polynomials sum_{i<K-d+1} f_i x^{q^i} over GF(q^N) with
    N = max(m, n), K = min(m, n), evaluated at 1, x, ..., x^{K-1}; each value
    is expanded in the polynomial basis to give one column.
    """
    F = _as_field(q)
    if m < 1 or n < 1 or not 1 <= d <= min(m, n):
        raise InvalidParameterError(f"infeasible MRD parameters m={m}, n={n}, d={d}")
    N, K = max(m, n), min(m, n)
    E = extension(F, N)
    qq = F.order
    points = [qq ** j for j in range(K)]
    basis = []
    for i in range(K - d + 1):
        frob = [E.pow(g, qq ** i) for g in points]
        for t in range(N):
            cols = [E._digits(E.mul(qq ** t, g)) if N > 1 else [E.mul(qq ** t, g)] for g in frob]
            # N x K matrix: column j is the expansion of the j-th evaluation.
            if m >= n:
                flat = tuple(cols[j][r] for r in range(N) for j in range(K))
            else:
                flat = tuple(cols[j][r] for j in range(K) for r in range(N))
            basis.append(flat)
    return RankMetricCode(F, m, n, d, basis=basis,
                          recipe={"kind": "gabidulin", "m": m, "n": n, "d": d, "q": qq,
                                  "extension_modulus": list(E.modulus)})


def rank_restricted(code: RankMetricCode, r: int, budget: int | None = None) -> RankMetricCode:
    """Words of rank at most r in a linear MRD code, enumerated explicitly."""
    budget = DEFAULT_BUDGET if budget is None else budget
    if r < 0:
        raise InvalidParameterError(f"rank cap must be nonnegative, got {r}")
    if code.kind != "linear":
        raise InvalidParameterError("rank_restricted needs a linear code")
    if code.size > budget:
        raise ResourceError(f"enumerating {code.size} codewords exceeds the budget {budget}; "
                            "use count.rrmc_size for a count-only answer")
    F, m, n = code.field, code.m, code.n
    words = [f for f in code.flat_words() if flat_rank(F, f, m, n) <= r]
    out = RankMetricCode(F, m, n, code.d, words=words, rank_cap=r, mask=code.mask,
                         recipe={**code.recipe, "rank_cap": r})
    if code.recipe.get("kind") == "gabidulin":
        expect = count.rrmc_size(m, n, code.d, r, F.order)
        assert out.size == expect, f"rank-restricted size {out.size} != {expect}"
    return out


def rrmc(m: int, n: int, d: int, r: int, q, budget: int | None = None) -> RankMetricCode:
    """Convenience: rank-restricted Gabidulin code; the full code when r >= min(m, n)."""
    code = gabidulin_mrd(m, n, d, q)
    if r >= min(m, n):
        code.rank_cap = r
        return code
    return rank_restricted(code, r, budget)


# -- FD codes ---------------------------------------------------------------

def _transform(field, flat, m, n, P, Q):
    """P * M * Q for flat M."""
    add, mul = field.add, field.mul
    M = [flat[i * n:(i + 1) * n] for i in range(m)]
    PM = [[0] * n for _ in range(m)]
    for i in range(m):
        for k in range(m):
            c = P[i][k]
            if c:
                PM[i] = [add(x, mul(c, y)) for x, y in zip(PM[i], M[k])]
    out = []
    for i in range(m):
        for j in range(n):
            s = 0
            for k in range(n):
                if PM[i][k] and Q[k][j]:
                    s = add(s, mul(PM[i][k], Q[k][j]))
            out.append(s)
    return tuple(out)


def _random_invertible(field, size, rng):
    from .matrix import rank_rows
    while True:
        M = [[rng.randrange(field.order) for _ in range(size)] for _ in range(size)]
        if rank_rows(field, M, size) == size:
            return M


def _vanishing_subcode(shape: DotShape, d: int, F: FieldSpec, target: int, tries: int = 64):
    """Basis of the subcode of an MRD code that vanishes outside the dots.

    The plain Gabidulin code is tried first; if the dimension falls short,
    seeded equivalent codes P*C*Q are tried before giving up.
    """
    m, n = shape.m, shape.n
    mrd = gabidulin_mrd(m, n, d, F)
    zero_cells = [i * n + j for i in range(m) for j in range(n) if not shape.mask[i][j]]
    rng = random.Random(0)
    basis = mrd._basis
    for attempt in range(tries + 1):
        if attempt:
            P, Q = _random_invertible(F, m, rng), _random_invertible(F, n, rng)
            basis = [_transform(F, b, m, n, P, Q) for b in mrd._basis]
        system = [tuple(b[c] for b in basis) for c in zero_cells]
        ns = nullspace(F, system, len(basis)) if system else [
            tuple(int(i == j) for j in range(len(basis))) for i in range(len(basis))]
        if len(ns) >= target:
            return [_flat_combo(F, basis, v, m * n) for v in ns], attempt
    return None, tries


def fd_condition(F: FerrersDiagram, d: int) -> bool:
    """m >= n and each of the rightmost d-1 columns has at least n dots."""
    m, n = F.m, F.n
    return m >= n and d <= n and all(c >= n for c in F.cols[n - (d - 1):])


def fd_code(F, d: int, q, allow_transpose: bool = False) -> RankMetricCode:
    """Optimal FD code of size q^(gamma_1 + ... + gamma_{n-d+1}) on a Ferrers diagram.

    The diagram must satisfy the column condition directly.  With
    ``allow_transpose`` a failing diagram is retried through its transpose
    and the words are anti-transposed back, which keeps their rank.
    """
    field = _as_field(q)
    if not isinstance(F, FerrersDiagram):
        F = FerrersDiagram(F)
    if d < 1:
        raise InvalidParameterError(f"distance must be >= 1, got {d}")
    if F.dots == 0:
        return RankMetricCode(field, F.m, F.n, d, basis=[], mask=F.shape(),
                              recipe={"kind": "fd", "diagram": list(F.cols), "d": d})
    if not fd_condition(F, d):
        T = F.transpose()
        if allow_transpose and fd_condition(T, d):
            inner = fd_code(T, d, field)
            basis = [tuple(x for r in inner._matrix(b).antitranspose().rows for x in r)
                     for b in inner._basis]
            return RankMetricCode(field, F.m, F.n, d, basis=basis, mask=F.shape(),
                                  recipe={"kind": "fd", "diagram": list(F.cols), "d": d,
                                          "via": "transpose"})
        raise UnsupportedDiagramError(
            f"diagram {list(F.cols)} with d={d}: needs m >= n and the rightmost {d - 1} "
            f"column(s) to hold at least n={F.n} dots")
    target = sum(F.cols[:F.n - d + 1])
    # Rows below max(n, gamma_{n-d+1}) only carry dots of the rightmost d-1
    # columns, so drop them: the remaining right columns are full and the
    # vanishing subcode of a Gabidulin code then has exactly the target dimension.
    rows = max(F.n, F.cols[F.n - d])
    top = FerrersDiagram([min(c, rows) for c in F.cols])
    inner, attempt = _vanishing_subcode(top.shape(), d, field, target)
    basis = None if inner is None else [b + (0,) * ((F.m - rows) * F.n) for b in inner]
    if basis is None:
        raise UnsupportedDiagramError(
            f"could not realize dimension {target} for diagram {list(F.cols)}, d={d}")
    assert len(basis) == target, f"vanishing subcode has dimension {len(basis)}, expected {target}"
    return RankMetricCode(field, F.m, F.n, d, basis=basis, mask=F.shape(),
                          recipe={"kind": "fd", "diagram": list(F.cols), "d": d,
                                  "equivalence_attempt": attempt})


def fd_code_on_shape(shape: DotShape, d: int, q) -> RankMetricCode:
    """FD code for a pattern's dot shape: build on the trimmed diagram, embed top-right."""
    field = _as_field(q)
    F = FerrersDiagram.from_shape(shape)
    inner = fd_code(F, d, field, allow_transpose=True)
    basis = [tuple(x for r in shape.embed_top_right(inner._matrix(b)).rows for x in r)
             for b in inner._basis]
    return RankMetricCode(field, shape.m, shape.n, d, basis=basis, mask=shape,
                          recipe={**inner.recipe, "embedded": [shape.m, shape.n]})


# -- search fallback ---------------------------------------------------------

def search_fd(shape: DotShape, d: int, q, rank_cap: int | None = None, cap_block=None,
              budget: int = 2 ** 16, mode: str = "auto", exact_limit: int = 64,
              rho: int | None = None) -> RankMetricCode:
    """Explicit code on ``shape`` with rank distance >= d, found by search.

    Candidates are all shape-respecting matrices in lexicographic order of
    their dot values (and within the rank cap, if any).  ``exact`` mode takes
    a maximum clique of the distance graph; ``greedy`` keeps each candidate
    that is far enough from everything kept so far.  ``auto`` picks exact when
    at most ``exact_limit`` candidates survive the cap.  If the candidate space
    exceeds ``budget`` only its first ``budget`` members are scanned and the
    result is flagged best-effort.
    """
    field = _as_field(q)
    if mode not in ("auto", "exact", "greedy"):
        raise InvalidParameterError(f"unknown search mode {mode!r}")
    m, n = shape.m, shape.n
    cells = [i * n + j for i, j in shape.cells()]
    total = field.order ** len(cells)
    best_effort = total > budget
    probe = RankMetricCode(field, m, n, d, words=[], rank_cap=rank_cap, cap_block=cap_block)
    cands = []
    for vals in itertools.islice(itertools.product(range(field.order), repeat=len(cells)), budget):
        flat = [0] * (m * n)
        for c, v in zip(cells, vals):
            flat[c] = v
        flat = tuple(flat)
        if rank_cap is None or probe.capped_rank(flat) <= rank_cap:
            cands.append(flat)
    binary = field.order == 2
    keyed = [_pack(f) for f in cands] if binary else cands

    def dist(a, b):
        return flat_rank(field, a ^ b if binary else _flat_sub(field, a, b), m, n)

    if mode == "exact" or (mode == "auto" and len(cands) <= exact_limit):
        import networkx as nx
        G = nx.Graph()
        G.add_nodes_from(range(len(cands)))
        for i, j in itertools.combinations(range(len(cands)), 2):
            if dist(keyed[i], keyed[j]) >= d:
                G.add_edge(i, j)
        clique, _ = nx.max_weight_clique(G, weight=None)
        chosen = sorted(clique)
        used = "exact"
    else:
        chosen = []
        for i, x in enumerate(keyed):
            if all(dist(x, keyed[j]) >= d for j in chosen):
                chosen.append(i)
        used = "greedy"
    return RankMetricCode(field, m, n, d, words=[cands[i] for i in chosen], rank_cap=rank_cap,
                          cap_block=cap_block, mask=shape, best_effort=best_effort, rho=rho,
                          recipe={"kind": "search", "mode": used, "budget": budget,
                                  "mask": shape.bitstring(), "shape": [m, n]})


def gbfd_rho(k1, l1, k2, l2, k3, l3, delta, r, q) -> int:
    """Guaranteed size of a GB-FD code with the upper-right k2 x l2 block of rank <= r."""
    if delta < 1:
        raise InvalidParameterError(f"delta must be positive, got {delta}")
    for name, v in (("k1", k1), ("l1", l1), ("k2", k2), ("l2", l2), ("k3", k3), ("l3", l3)):
        if v < delta:
            raise InvalidParameterError(f"{name}={v} must be >= delta={delta}")
    if k2 < k1 or l2 < l3:
        raise InvalidParameterError("need k2 >= k1 and l2 >= l3")
    L1, G1 = max(k1, l1), min(k1, l1)
    L3, G3 = max(k3, l3), min(k3, l3)
    d1 = -(-delta // 2) if L1 >= L3 else delta // 2
    d2 = delta - d1
    return (min(q ** (L1 * d2), q ** (L3 * d1)) * q ** (L1 * (G1 - delta + 1) + L3 * (G3 - delta + 1))
            * count.rrmc_size(k2, l2, delta, r, q))


# -- verification -------------------------------------------------------------

class RankReport:
    __slots__ = ("min_distance", "pairs", "exhaustive", "seed", "violations", "mask_ok", "cap_ok")

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw.get(k))

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__slots__}


def verify_rank_code(code: RankMetricCode, min_distance: int | None = None,
                     exhaustive_limit: int = EXHAUSTIVE_LIMIT, samples: int = DEFAULT_SAMPLES,
                     seed: int = 0) -> RankReport:
    """Check distance, mask and rank cap; exhaustive up to ``exhaustive_limit`` words."""
    d = code.d if min_distance is None else min_distance
    F, m, n = code.field, code.m, code.n
    binary = F.order == 2
    size = code.size
    exhaustive = size <= exhaustive_limit
    if exhaustive:
        words = list(code.flat_words())
    mask_ok = cap_ok = True
    if exhaustive and code.mask is not None:
        allowed = [code.mask.mask[i][j] for i in range(m) for j in range(n)]
        mask_ok = all(not x or a for w in words for x, a in zip(w, allowed))
    if exhaustive and code.rank_cap is not None:
        cap_ok = all(code.capped_rank(w) <= code.rank_cap for w in words)
    best, pairs, violations = None, 0, []
    if exhaustive:
        keyed = [_pack(w) for w in words] if binary else words
        for i in range(size):
            for j in range(i + 1, size):
                a, b = keyed[i], keyed[j]
                r = flat_rank(F, a ^ b if binary else _flat_sub(F, a, b), m, n)
                pairs += 1
                if best is None or r < best:
                    best = r
                if r < d and len(violations) < 10:
                    violations.append((i, j, r))
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            i, j = rng.randrange(size), rng.randrange(size)
            if i == j:
                continue
            r = flat_rank(F, _flat_sub(F, code.flat_word(i), code.flat_word(j)), m, n)
            pairs += 1
            if best is None or r < best:
                best = r
            if r < d and len(violations) < 10:
                violations.append((i, j, r))
    return RankReport(min_distance=best, pairs=pairs, exhaustive=exhaustive,
                      seed=None if exhaustive else seed, violations=violations,
                      mask_ok=mask_ok, cap_ok=cap_ok)
