"""Subspace codes: lifting, multilevel-type constructions, mixed dimension
constructions, the generalized bilateral combination, MDDC augmentation,
SC-representations, code files, and distance verification.

A SubspaceCode is a list of parts.  Each part produces its codewords on
demand from a compact description (a pattern plus a rank-metric filler, or
block matrices plus a filler), so codes with 10^12 words can be counted without
being materialized.  ``count_only=True`` on the constructions skips building
fillers altogether and returns a CodeSummary.
"""

from __future__ import annotations

import bisect
import itertools
import json
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from . import count
from .bound import bpm_derived, check_T_windows, l_T, spar_derived
from .errors import InvalidParameterError
from .field import FieldSpec, field_new
from .matrix import (Subspace, all_subspaces, canonical_key, hamming_distance,
                     subspace_distance)
from .rankcode import (EXHAUSTIVE_LIMIT, DEFAULT_SAMPLES, RankMetricCode, _as_field,
                       fd_code_on_shape, gabidulin_mrd, rrmc, search_fd)
from .shape import (BilateralIdentifyingVector, EchelonPattern, echelon_ferrers_form,
                    gb_echelon_form, inverse_echelon_ferrers_form, parse_binary)

FORMAT_VERSION = 1


def _threads():
    try:
        return max(1, int(os.environ.get("CDC_FORGE_THREADS", "1")))
    except ValueError:
        return 1


def _vec(v):
    if isinstance(v, str):
        return parse_binary(v)
    return tuple(int(x) for x in v)


def _vstr(v):
    return str(v) if isinstance(v, BilateralIdentifyingVector) else "".join(map(str, v))


# -- parts ----------------------------------------------------------------------

def _check_filler_fits(filler: RankMetricCode, shape, what):
    if (filler.m, filler.n) != (shape.m, shape.n):
        raise InvalidParameterError(
            f"{what}: filler is {filler.m}x{filler.n}, pattern needs {shape.m}x{shape.n}")
    if filler.mask is not None and all(
            not filler.mask.mask[i][j] or shape.mask[i][j]
            for i in range(shape.m) for j in range(shape.n)):
        return
    words = filler._basis if filler.kind == "linear" else filler._words
    allowed = [shape.mask[i][j] for i in range(shape.m) for j in range(shape.n)]
    for w in words:
        if any(x and not a for x, a in zip(w, allowed)):
            raise InvalidParameterError(f"{what}: filler has entries outside the pattern's dots")


class LiftedPart:
    """Rowspaces of ``pattern`` with its dots filled by each filler codeword."""

    def __init__(self, pattern: EchelonPattern, filler: RankMetricCode, label: str):
        shape = pattern.dot_shape()
        _check_filler_fits(filler, shape, label)
        self.pattern, self.filler, self.label = pattern, filler, label
        self.n = pattern.n

    @property
    def size(self):
        return self.filler.size

    def dims(self):
        return {self.pattern.k: self.size}

    def word(self, i) -> Subspace:
        return Subspace.from_matrix(self.pattern.fill(self.filler[i]))

    def describe(self):
        return {"part": "lifted", "label": self.label, "size": self.size,
                "filler": self.filler.recipe}


class BlockPart:
    """Block matrices from the mixed dimension constructions.

    ``head``: rows (H | 0 | P) over (0 | I | P), with H an r x n_h RREF
    generator on the left.  ``tail``: (Q | 0 | H) over (Q | I | 0) with H on
    the right.  Word index = h_index * |filler| + filler_index.
    """

    def __init__(self, field, n, k, layout, hs, filler: RankMetricCode, label: str):
        if layout not in ("head", "tail"):
            raise InvalidParameterError(f"unknown block layout {layout!r}")
        hs = list(hs)
        if not hs:
            raise InvalidParameterError(f"{label}: no generator matrices")
        r, nh = hs[0].dim, hs[0].n
        if any(h.dim != r or h.n != nh for h in hs):
            raise InvalidParameterError(f"{label}: generator matrices must share shape")
        if filler.m != k or filler.n + (k - r) + nh != n:
            raise InvalidParameterError(
                f"{label}: widths {filler.n} + {k - r} + {nh} do not add up to n = {n}")
        self.field, self.n, self.k, self.layout = field, n, k, layout
        self.hs, self.filler, self.label, self.r, self.nh = hs, filler, label, r, nh

    @property
    def size(self):
        return len(self.hs) * self.filler.size

    def dims(self):
        return {self.k: self.size}

    def word(self, i) -> Subspace:
        h, f = divmod(i, self.filler.size)
        H, P = self.hs[h].basis, self.filler[f].rows
        k, r, nh = self.k, self.r, self.nh
        rows = []
        for i in range(k):
            ident = [0] * (k - r)
            if i >= r:
                ident[i - r] = 1
            hrow = list(H[i]) if i < r else [0] * nh
            if self.layout == "head":
                rows.append(hrow + ident + list(P[i]))
            else:
                rows.append(list(P[i]) + ident + hrow)
        return Subspace(self.field, self.n, rows)

    def describe(self):
        return {"part": "block", "layout": self.layout, "label": self.label, "size": self.size,
                "h_dim": self.r, "h_count": len(self.hs), "filler": self.filler.recipe}


class ExplicitPart:
    """A plain list of subspaces."""

    def __init__(self, words, label="explicit"):
        self.words = list(words)
        self.label = label

    @property
    def size(self):
        return len(self.words)

    def dims(self):
        out = {}
        for w in self.words:
            out[w.dim] = out.get(w.dim, 0) + 1
        return out

    def word(self, i) -> Subspace:
        return self.words[i]

    def describe(self):
        return {"part": "explicit", "label": self.label, "size": self.size}


# -- codes ----------------------------------------------------------------------

class SubspaceCode:
    """A subspace code of GF(q)^n assembled from parts."""

    def __init__(self, field: FieldSpec, n: int, parts, claimed_distance: int,
                 recipe: dict | None = None, seed=None):
        self.field, self.n = field, n
        self.parts = [p for p in parts]
        for p in self.parts:
            if getattr(p, "n", n) != n:
                raise InvalidParameterError(f"part {p.label} lives in dimension {p.n}, not {n}")
        self.claimed_distance = claimed_distance
        self.recipe = dict(recipe or {})
        self.seed = seed
        self._offsets = list(itertools.accumulate([0] + [p.size for p in self.parts]))

    @property
    def size(self) -> int:
        return self._offsets[-1]

    def __len__(self):
        return self.size

    def locate(self, idx):
        """(part index, index inside that part)."""
        if not 0 <= idx < self.size:
            raise IndexError(idx)
        p = bisect.bisect_right(self._offsets, idx) - 1
        return p, idx - self._offsets[p]

    def __getitem__(self, idx) -> Subspace:
        p, i = self.locate(idx)
        return self.parts[p].word(i)

    def __iter__(self):
        for p in self.parts:
            for i in range(p.size):
                yield p.word(i)

    @property
    def eta(self) -> dict:
        out = {}
        for p in self.parts:
            for d, c in p.dims().items():
                out[d] = out.get(d, 0) + c
        return dict(sorted(out.items(), reverse=True))

    @property
    def dims(self):
        return sorted(self.eta, reverse=True)

    def distinct(self) -> bool:
        """True when no two codewords share a canonical key (materializes every word)."""
        seen = set()
        for w in self:
            key = canonical_key(w)
            if key in seen:
                return False
            seen.add(key)
        return True

    def describe(self):
        return {"n": self.n, "q": self.field.order, "size": self.size,
                "eta": {str(k): v for k, v in self.eta.items()},
                "claimed_distance": self.claimed_distance,
                "parts": [p.describe() for p in self.parts], "recipe": self.recipe}

    def __repr__(self):
        return f"SubspaceCode(n={self.n}, q={self.field.order}, size={self.size}, eta={self.eta})"


def union(*codes, claimed_distance=None, recipe=None) -> SubspaceCode:
    """Concatenate the parts of several codes over the same ambient space."""
    if not codes:
        raise InvalidParameterError("union of no codes")
    F, n = codes[0].field, codes[0].n
    for c in codes:
        if c.field is not F or c.n != n:
            raise InvalidParameterError("codes live in different ambient spaces")
    d = min(c.claimed_distance for c in codes) if claimed_distance is None else claimed_distance
    return SubspaceCode(F, n, [p for c in codes for p in c.parts], d,
                        recipe or {"kind": "union", "of": [c.recipe for c in codes]})


def explicit_code(subspaces, claimed_distance, field=None, n=None, recipe=None) -> SubspaceCode:
    subspaces = list(subspaces)
    if field is None:
        if not subspaces:
            raise InvalidParameterError("empty code needs field and n")
        field, n = subspaces[0].field, subspaces[0].n
    return SubspaceCode(field, n, [ExplicitPart(subspaces)], claimed_distance,
                        recipe or {"kind": "explicit"})


@dataclass
class MDDC:
    """Mixed dimension/distance code: d1 within a dimension, d0 across dimensions."""

    code: SubspaceCode
    d1: int
    d0: int

    def __post_init__(self):
        if self.d1 < self.d0:
            raise InvalidParameterError(f"MDDC needs d1 >= d0, got d1={self.d1}, d0={self.d0}")

    @property
    def n(self):
        return self.code.n

    @property
    def eta(self):
        return self.code.eta

    @property
    def T(self):
        return sorted(self.eta, reverse=True)

    @property
    def T_min(self):
        return min(self.eta)

    @property
    def l_T(self):
        return l_T(self.eta)

    def by_dim(self, t):
        return [w for w in self.code if w.dim == t]


@dataclass
class CodeSummary:
    """Count-only view of a construction: per-term sizes without codewords."""

    kind: str
    n: int
    q: int
    claimed_distance: int
    terms: list = dc_field(default_factory=list)  # [(name, dim, size)]
    recipe: dict = dc_field(default_factory=dict)

    @property
    def size(self):
        return sum(s for _, _, s in self.terms)

    @property
    def eta(self):
        out = {}
        for _, d, s in self.terms:
            out[d] = out.get(d, 0) + s
        return out

    def as_dict(self):
        return {"kind": self.kind, "n": self.n, "q": self.q,
                "claimed_distance": self.claimed_distance,
                "terms": [[name, d, str(s)] for name, d, s in self.terms],
                "size": str(self.size), "recipe": self.recipe}


# -- lifting and multilevel constructions -------------------------------------

def lift(pattern: EchelonPattern, filler: RankMetricCode, label: str | None = None) -> SubspaceCode:
    """One subspace per filler codeword: the rowspace of the filled pattern."""
    label = label or "".join(map(str, pattern.support()))
    part = LiftedPart(pattern, filler, label)
    return SubspaceCode(filler.field, pattern.n, [part], 2 * filler.d,
                        {"kind": "lift", "pattern": label})


def _check_constant_weight(vectors, delta, what="vectors"):
    if not vectors:
        raise InvalidParameterError(f"no {what} given")
    weights = {sum(v) for v in vectors}
    lengths = {len(v) for v in vectors}
    if len(weights) != 1 or len(lengths) != 1:
        raise InvalidParameterError(f"{what} must share one length and one weight")
    if len(set(vectors)) != len(vectors):
        raise InvalidParameterError(f"{what} contain a repeated vector")
    for a, b in itertools.combinations(vectors, 2):
        dh = hamming_distance(a, b)
        if dh < 2 * delta:
            raise InvalidParameterError(
                f"Hamming distance {dh} between {_vstr(a)} and {_vstr(b)} is below 2*delta = {2 * delta}")
    return weights.pop(), lengths.pop()


def _check_filler_distance(filler, delta, label):
    if filler.d < delta:
        raise InvalidParameterError(f"filler for {label} has distance {filler.d} < delta = {delta}")


def multilevel(vectors, fillers, delta: int, q=2) -> SubspaceCode:
    """Union of lifts through EF(v); ``fillers`` may be None to build FD codes."""
    vectors = [_vec(v) for v in vectors]
    k, n = _check_constant_weight(vectors, delta)
    F = _as_field(q) if fillers is None else fillers[0].field
    parts = []
    for idx, v in enumerate(vectors):
        pattern, _ = echelon_ferrers_form(v)
        filler = fd_code_on_shape(pattern.dot_shape(), delta, F) if fillers is None else fillers[idx]
        _check_filler_distance(filler, delta, _vstr(v))
        parts.append(LiftedPart(pattern, filler, _vstr(v)))
    return SubspaceCode(F, n, parts, 2 * delta,
                        {"kind": "multilevel", "delta": delta, "vectors": [_vstr(v) for v in vectors]})


def _check_cap(filler, cap, label, block=None):
    if filler.rank_cap is not None and filler.rank_cap <= cap and filler.cap_block == block:
        return
    if filler.size > EXHAUSTIVE_LIMIT:
        raise InvalidParameterError(
            f"filler for {label} declares no rank cap <= {cap} and is too large to check")
    for idx, w in enumerate(filler.flat_words()):
        probe = RankMetricCode(filler.field, filler.m, filler.n, filler.d, words=[], cap_block=block)
        r = probe.capped_rank(w)
        if r > cap:
            raise InvalidParameterError(
                f"filler for {label}: codeword {idx} has rank {r} above the cap {cap}")


def inverse_multilevel(vectors, fillers, delta: int, caps, q=2) -> SubspaceCode:
    """Union of lifts through the inverse echelon forms, fillers rank-capped by ``caps``.

    ``caps`` is a list aligned with ``vectors`` (or one int for all).  With
    ``fillers`` None each filler is found by search on the inverse shape.
    """
    vectors = [_vec(v) for v in vectors]
    k, n = _check_constant_weight(vectors, delta)
    caps = [caps] * len(vectors) if isinstance(caps, int) else list(caps)
    if len(caps) != len(vectors):
        raise InvalidParameterError("need one rank cap per vector")
    F = _as_field(q) if fillers is None else fillers[0].field
    parts = []
    for idx, v in enumerate(vectors):
        pattern, shape = inverse_echelon_ferrers_form(v)
        if fillers is None:
            filler = search_fd(shape, delta, F, rank_cap=caps[idx])
        else:
            filler = fillers[idx]
        _check_filler_distance(filler, delta, _vstr(v))
        _check_cap(filler, caps[idx], _vstr(v))
        parts.append(LiftedPart(pattern, filler, _vstr(v)))
    return SubspaceCode(F, n, parts, 2 * delta,
                        {"kind": "inverse_multilevel", "delta": delta,
                         "vectors": [_vstr(v) for v in vectors], "caps": caps})


def double_multilevel(C1: SubspaceCode, C2: SubspaceCode, delta: int) -> SubspaceCode:
    """Union of a multilevel and an inverse multilevel code under the cross condition."""
    if C1.recipe.get("kind") != "multilevel" or C2.recipe.get("kind") != "inverse_multilevel":
        raise InvalidParameterError("double_multilevel needs a multilevel code and an inverse multilevel code")
    S = [parse_binary(v) for v in C1.recipe["vectors"]]
    Sbar = [parse_binary(v) for v in C2.recipe["vectors"]]
    for vb, s in zip(Sbar, C2.recipe["caps"]):
        for v in S:
            dh = hamming_distance(v, vb)
            if dh < 2 * (s + delta):
                raise InvalidParameterError(
                    f"d_H({_vstr(v)}, {_vstr(vb)}) = {dh} < 2*(s + delta) = {2 * (s + delta)}")
    return union(C1, C2, claimed_distance=2 * delta,
                 recipe={"kind": "double_multilevel", "delta": delta,
                         "S": C1.recipe["vectors"], "Sbar": C2.recipe["vectors"],
                         "caps": C2.recipe["caps"]})


def _as_bilateral(v, type_=None):
    if isinstance(v, BilateralIdentifyingVector):
        return v
    if isinstance(v, str):
        return BilateralIdentifyingVector.from_string(v)
    raise InvalidParameterError(f"cannot read bilateral identifying vector {v!r}")


def gb_filler(v: BilateralIdentifyingVector, delta: int, q=2, rank_cap=None,
              budget: int = 2 ** 16, mode: str = "auto", rho=None) -> RankMetricCode:
    """Search-built GB-FD code on the dots of v's bilateral form.

    ``rank_cap`` bounds the rank of the upper-right wt(v1) x (n2 - wt(v2))
    block (the part that meets the tail of the bilateral form).
    """
    _, shape = gb_echelon_form(v)
    block = (v.a1, v.n2 - v.a2) if rank_cap is not None else None
    return search_fd(shape, delta, q, rank_cap=rank_cap, cap_block=block,
                     budget=budget, mode=mode, rho=rho)


def bilateral_multilevel(vectors, fillers, delta: int, q=2) -> SubspaceCode:
    """Union of lifts through the generalized bilateral echelon forms."""
    vectors = [_as_bilateral(v) for v in vectors]
    types = {v.type for v in vectors}
    if len(types) != 1:
        raise InvalidParameterError(f"bilateral identifying vectors have mixed types {sorted(types)}")
    _check_constant_weight([v.bits for v in vectors], delta, "bilateral identifying vectors")
    F = _as_field(q) if fillers is None else fillers[0].field
    parts = []
    for idx, v in enumerate(vectors):
        pattern, shape = gb_echelon_form(v)
        filler = gb_filler(v, delta, F) if fillers is None else fillers[idx]
        _check_filler_distance(filler, delta, str(v))
        parts.append(LiftedPart(pattern, filler, str(v)))
    return SubspaceCode(F, vectors[0].n, parts, 2 * delta,
                        {"kind": "bilateral_multilevel", "delta": delta,
                         "type": list(vectors[0].type), "vectors": [str(v) for v in vectors]})


# -- mixed dimension constructions ------------------------------------------------

def _eta_of(X):
    if isinstance(X, MDDC):
        return X.eta
    if isinstance(X, dict):
        return {int(t): int(c) for t, c in X.items()}
    raise InvalidParameterError("expected an MDDC or a dimension distribution")


def _check_X(X, n_i, delta, T, name):
    if not isinstance(X, MDDC):
        return
    if X.n != n_i:
        raise InvalidParameterError(f"{name} lives in dimension {X.n}, expected {n_i}")
    if X.d1 < 2 * delta:
        raise InvalidParameterError(f"{name} needs d1 >= 2*delta = {2 * delta}, has {X.d1}")
    if len(T) > 1 and X.d0 < 2 * delta - l_T(T):
        raise InvalidParameterError(f"{name} needs d0 >= 2*delta - l_T = {2 * delta - l_T(T)}, has {X.d0}")


def _require(cond, msg):
    if not cond:
        raise InvalidParameterError(msg)


def _head_parts(F, X1, n, n1, n2, k, delta, T1):
    parts = []
    for t in sorted(T1, reverse=True):
        P = gabidulin_mrd(k, n2 + t - k, delta, F)
        parts.append(BlockPart(F, n, k, "head", X1.by_dim(t), P, f"C1[t={t}]"))
    return parts


def mixed_dimension(X1, X2, n, n1, n2, k, delta, q=2, count_only=False, budget=None):
    """C1 (H1 on the left with MRD tails) united with C2 (H2 on the right with RRMC heads)."""
    eta1, eta2 = _eta_of(X1), _eta_of(X2)
    T1, T2 = sorted(eta1), sorted(eta2)
    _require(n == n1 + n2, f"n = {n} must equal n1 + n2 = {n1 + n2}")
    _require(n1 >= k and n2 >= k, f"n1 = {n1} and n2 = {n2} must both be >= k = {k}")
    _require(k >= delta >= 2, f"need k >= delta >= 2, got k={k}, delta={delta}")
    check_T_windows(k, delta, T1, T2)
    _check_X(X1, n1, delta, T1, "X1")
    _check_X(X2, n2, delta, T2, "X2")
    t0 = min(T1)
    caps = {s: t0 - delta - (k - s) for s in T2}
    recipe = {"kind": "mixed_dimension", "n": n, "n1": n1, "n2": n2, "k": k, "delta": delta,
              "T1": T1[::-1], "T2": T2[::-1], "Q_caps": {str(s): c for s, c in caps.items()}}
    q_ = q.order if isinstance(q, FieldSpec) else q
    if count_only:
        terms = [(f"C1[t={t}]", k, eta1[t] * count.mrd_size(k, n2 + t - k, delta, q_)) for t in T1[::-1]]
        terms += [(f"C2[s={s}]", k, eta2[s] * count.rrmc_size(k, n1 + s - k, delta, caps[s], q_))
                  for s in T2[::-1]]
        return CodeSummary("mixed_dimension", n, q_, 2 * delta, terms, recipe)
    F = _as_field(q)
    parts = _head_parts(F, X1, n, n1, n2, k, delta, T1)
    for s in sorted(T2, reverse=True):
        Q = rrmc(k, n1 + s - k, delta, caps[s], F, budget)
        parts.append(BlockPart(F, n, k, "tail", X2.by_dim(s), Q, f"C2[s={s}]"))
    return SubspaceCode(F, n, parts, 2 * delta, recipe)


def parallel_mixed(X1, X3, n, n1, n2, n3, k, delta, q=2, count_only=False, budget=None):
    """C1 united with C3: H3 generators on the right, rank-(k - delta)-capped heads."""
    from .bound import check_parallel
    eta1, eta3 = _eta_of(X1), _eta_of(X3)
    T1, T2 = sorted(eta1), sorted(eta3)
    check_parallel(n, n1, n2, n3, k, delta, T1, T2)
    _check_X(X1, n1, delta, T1, "X1")
    _check_X(X3, n3, delta, T2, "X3")
    q_ = q.order if isinstance(q, FieldSpec) else q
    recipe = {"kind": "parallel_mixed", "n": n, "n1": n1, "n2": n2, "n3": n3, "k": k,
              "delta": delta, "T1": T1[::-1], "T2": T2[::-1],
              "mu1": n1 + k - min(T1), "mu2": n3 + k - min(T2),
              "mu3": n - (n1 + k - min(T1)) - (n3 + k - min(T2))}
    if count_only:
        terms = [(f"C1[t={t}]", k, eta1[t] * count.mrd_size(k, n2 + t - k, delta, q_)) for t in T1[::-1]]
        terms += [(f"C3[s={s}]", k, eta3[s] * count.rrmc_size(k, n - n3 + s - k, delta, k - delta, q_))
                  for s in T2[::-1]]
        return CodeSummary("parallel_mixed", n, q_, 2 * delta, terms, recipe)
    F = _as_field(q)
    parts = _head_parts(F, X1, n, n1, n2, k, delta, T1)
    for s in sorted(T2, reverse=True):
        Q = rrmc(k, n - n3 + s - k, delta, k - delta, F, budget)
        parts.append(BlockPart(F, n, k, "tail", X3.by_dim(s), Q, f"C3[s={s}]"))
    return SubspaceCode(F, n, parts, 2 * delta, recipe)


def parallel_mixed_simple(X1, n, n1, n2, k, delta, q=2, count_only=False, budget=None):
    """C1 united with C3' = {rs(Q | I_k)}, Q of rank at most k - delta."""
    from .bound import check_parallel_simple
    eta1 = _eta_of(X1)
    T1 = sorted(eta1)
    check_parallel_simple(n, n1, n2, k, delta, T1)
    _check_X(X1, n1, delta, T1, "X1")
    q_ = q.order if isinstance(q, FieldSpec) else q
    recipe = {"kind": "parallel_mixed_simple", "n": n, "n1": n1, "n2": n2, "k": k,
              "delta": delta, "T1": T1[::-1], "mu1": n1 + k - min(T1), "mu2": k,
              "mu3": n - (n1 + k - min(T1)) - k}
    if count_only:
        terms = [(f"C1[t={t}]", k, eta1[t] * count.mrd_size(k, n2 + t - k, delta, q_)) for t in T1[::-1]]
        terms.append(("C3'", k, count.rrmc_size(k, n - k, delta, k - delta, q_)))
        return CodeSummary("parallel_mixed_simple", n, q_, 2 * delta, terms, recipe)
    F = _as_field(q)
    parts = _head_parts(F, X1, n, n1, n2, k, delta, T1)
    Q = rrmc(k, n - k, delta, k - delta, F, budget)
    ident = Subspace(F, k, [[int(i == j) for j in range(k)] for i in range(k)])
    parts.append(BlockPart(F, n, k, "tail", [ident], Q, "C3'"))
    return SubspaceCode(F, n, parts, 2 * delta, recipe)


# -- generalized bilateral combination ---------------------------------------------

def bpm_vectors(n, n1, n2, n3, k, delta, T1, T2):
    """The bilateral identifying vectors v~_{i,j} for the three-part construction."""
    der = bpm_derived(n, n1, n2, n3, k, delta, T1, T2)
    mu1, mu2, mu3, w1, w2 = der["mu1"], der["mu2"], der["mu3"], der["omega1"], der["omega2"]
    out = []
    for c in der["cells"]:
        i, j = c["i"], c["j"]
        seg1 = (0,) * (i * delta) + (1,) * w1 + (0,) * (mu1 - i * delta - w1)
        seg2 = (0,) * (mu2 - w2 - j * delta) + (1,) * w2 + (0,) * (j * delta)
        out.append(((i, j), BilateralIdentifyingVector.from_segments(seg1, mu3, seg2)))
    return out, der


def spar_vectors(n, n1, n2, k, delta, T1):
    """The bilateral identifying vectors v~_{i,j} for the single-identity-block variant."""
    der = spar_derived(n, n1, n2, k, delta, T1)
    mu1, mu3 = der["mu1"], der["mu3"]
    out = []
    for c in der["cells"]:
        i, j = c["i"], c["j"]
        seg1 = (0,) * (i * delta) + (1,) * (k - delta) + (0,) * (mu1 - i * delta - (k - delta))
        seg2 = (0,) * (k - delta - j * delta) + (1,) * delta + (0,) * (j * delta)
        out.append(((i, j), BilateralIdentifyingVector.from_segments(seg1, mu3, seg2)))
    return out, der


def gb_parallel_combine(base: SubspaceCode, vectors, fillers, delta: int) -> SubspaceCode:
    """base united with bilateral lifts whose fillers obey the phi-rank cap."""
    kind = base.recipe.get("kind")
    if kind not in ("parallel_mixed", "parallel_mixed_simple"):
        raise InvalidParameterError("base must come from parallel_mixed or parallel_mixed_simple")
    vectors = [_as_bilateral(v) for v in vectors]
    if not vectors:
        return base
    k = base.recipe["k"]
    want = (base.recipe["mu1"], base.recipe["mu3"], base.recipe["mu2"])
    if fillers is None or len(fillers) != len(vectors):
        raise InvalidParameterError("need one filler per bilateral identifying vector")
    for v, f in zip(vectors, fillers):
        if v.type != want:
            raise InvalidParameterError(f"{v} has type {v.type}, the base needs {want}")
        if v.weight != k:
            raise InvalidParameterError(f"{v} has weight {v.weight}, expected k = {k}")
        if not delta <= v.a1 <= k - delta:
            raise InvalidParameterError(
                f"{v}: wt(v1) = {v.a1} outside [delta, k - delta] = [{delta}, {k - delta}]")
        _check_cap(f, v.a1 - delta, str(v), (v.a1, v.n2 - v.a2))
    gb = bilateral_multilevel(vectors, fillers, delta)
    return union(base, gb, claimed_distance=2 * delta,
                 recipe={"kind": "gb_parallel", "base": base.recipe, "gb": gb.recipe,
                         "base_parts": len(base.parts)})


# -- MDDC augmentation -----------------------------------------------------------------

def mddc_augment(C0: SubspaceCode, delta: int, budget: int | None = None,
                 seed: int | None = None) -> MDDC:
    """Greedily add (k - delta + 1)-dimensional subspaces to a CDC.

    A candidate is kept when it is at distance >= delta + 1 from every word of
    C0 and >= 2*delta from every word added so far.  Candidates come in
    canonical order, or shuffled with ``seed``.  ``budget`` caps the number
    of candidates scanned.  The analytic floor max(N, 0) is recorded in the
    recipe; a full scan always reaches it.
    """
    eta = C0.eta
    if len(eta) > 1:
        raise InvalidParameterError("C0 must be a constant dimension code")
    n = C0.n
    k = next(iter(eta)) if eta else C0.recipe.get("k")
    if k is None:
        raise InvalidParameterError("empty C0 needs recipe['k'] to fix the dimension")
    size0 = C0.size
    floor = count.mddc_increment(n, k, delta, size0, C0.field.order)
    low = k - delta + 1
    base = list(C0)
    cands = all_subspaces(C0.field, n, low)
    if seed is not None:
        cands = list(cands)
        random.Random(seed).shuffle(cands)
    added, scanned = [], 0
    for W in cands:
        if budget is not None and scanned >= budget:
            break
        scanned += 1
        if all(subspace_distance(W, U) >= delta + 1 for U in base) and \
                all(subspace_distance(W, V) >= 2 * delta for V in added):
            added.append(W)
    code = SubspaceCode(C0.field, n, list(C0.parts) + [ExplicitPart(added, f"added[{low}]")],
                        delta + 1,
                        {"kind": "mddc_augment", "delta": delta, "k": k, "base_size": size0,
                         "N": floor, "added": len(added), "scanned": scanned,
                         "complete": budget is None or scanned < budget, "seed": seed})
    return MDDC(code, 2 * delta, delta + 1)


# -- verification ---------------------------------------------------------------------

@dataclass
class VerifyReport:
    mode: str
    size: int
    pairs: int
    min_distance: int | None
    by_dims: dict
    violations: list
    required: dict
    seed: int | None = None
    strata: dict = dc_field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def as_dict(self):
        return {"mode": self.mode, "size": str(self.size), "pairs": self.pairs,
                "min_distance": self.min_distance, "by_dims": self.by_dims,
                "required": self.required, "violations": [list(map(str, v)) for v in self.violations],
                "passed": self.passed, "seed": self.seed, "strata": self.strata}


def _requirement(code, min_distance, mddc):
    if mddc is not None:
        d1, d0 = mddc
        return lambda a, b: d1 if a == b else d0, {"d1": d1, "d0": d0}
    d = code.claimed_distance if min_distance is None else min_distance
    return lambda a, b: d, {"d": d}


class _Acc:
    def __init__(self):
        self.best, self.by_dims, self.violations, self.pairs = None, {}, [], 0

    def add(self, i, j, U, V, need):
        d = subspace_distance(U, V)
        self.pairs += 1
        key = "-".join(map(str, sorted((U.dim, V.dim), reverse=True)))
        if key not in self.by_dims or d < self.by_dims[key]:
            self.by_dims[key] = d
        if self.best is None or d < self.best:
            self.best = d
        r = need(U.dim, V.dim)
        if d < r:
            self.violations.append((i, j, d, r))

    def merge(self, other):
        self.pairs += other.pairs
        for k, v in other.by_dims.items():
            if k not in self.by_dims or v < self.by_dims[k]:
                self.by_dims[k] = v
        if other.best is not None and (self.best is None or other.best < self.best):
            self.best = other.best
        self.violations.extend(other.violations)


def _sample_batch(code, sizes, offsets, need, seed, b, count_, strata_cut):
    rng = random.Random(seed * 1_000_003 + b)
    acc = _Acc()
    nparts = len(sizes)
    cache = {}

    def word(i):
        w = cache.get(i)
        if w is None:
            if len(cache) > 4096:
                cache.clear()
            w = cache[i] = code[i]
        return w

    counts = {"uniform": 0, "same_part": 0, "adjacent_parts": 0}
    for t in range(count_):
        stratum = ("uniform", "same_part", "adjacent_parts")[t % 3] if strata_cut else "uniform"
        if stratum == "same_part":
            p = rng.randrange(nparts)
            if sizes[p] < 2:
                stratum = "uniform"
            else:
                i, j = rng.sample(range(sizes[p]), 2) if sizes[p] < 10 ** 6 else \
                    (rng.randrange(sizes[p]), rng.randrange(sizes[p]))
                i, j = offsets[p] + i, offsets[p] + j
        elif stratum == "adjacent_parts":
            if nparts < 2:
                stratum = "uniform"
            else:
                p = rng.randrange(nparts - 1)
                i = offsets[p] + rng.randrange(sizes[p])
                j = offsets[p + 1] + rng.randrange(sizes[p + 1])
        if stratum == "uniform":
            i, j = rng.randrange(code.size), rng.randrange(code.size)
        if i == j:
            continue
        counts[stratum] += 1
        acc.add(i, j, word(i), word(j), need)
    return acc, counts


def verify(code, min_distance: int | None = None, mode: str = "auto", seed: int = 0,
           pairs: int = DEFAULT_SAMPLES, mddc=None, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
           threads: int | None = None, max_violations: int = 20) -> VerifyReport:
    """Check pairwise subspace distances.

    ``exhaustive`` checks every pair (a proof for the instance).  ``sampled``
    draws ``pairs`` seeded pairs, a third uniform, a third within one part and
    a third across adjacent parts.  ``auto`` is exhaustive up to
    ``exhaustive_limit`` codewords.  Pass an MDDC (or ``mddc=(d1, d0)``) to
    apply d1 within a dimension and d0 across dimensions.
    """
    if isinstance(code, MDDC):
        mddc = mddc or (code.d1, code.d0)
        code = code.code
    need, required = _requirement(code, min_distance, mddc)
    if mode == "auto":
        mode = "exhaustive" if code.size <= exhaustive_limit else "sampled"
    if mode not in ("exhaustive", "sampled"):
        raise InvalidParameterError(f"unknown verification mode {mode!r}")
    threads = threads or _threads()
    if mode == "exhaustive":
        words = list(code)
        acc = _Acc()
        for i, j in itertools.combinations(range(len(words)), 2):
            acc.add(i, j, words[i], words[j], need)
        strata = {"all_pairs": acc.pairs}
        seed_used = None
    else:
        sizes = [p.size for p in code.parts]
        offsets = code._offsets
        batch = 10_000
        nb = -(-pairs // batch)
        jobs = [(b, min(batch, pairs - b * batch)) for b in range(nb)]
        run = lambda job: _sample_batch(code, sizes, offsets, need, seed, job[0], job[1], True)
        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                results = list(ex.map(run, jobs))
        else:
            results = [run(job) for job in jobs]
        acc, strata = _Acc(), {}
        for a, c in results:
            acc.merge(a)
            for k, v in c.items():
                strata[k] = strata.get(k, 0) + v
        seed_used = seed
    return VerifyReport(mode, code.size, acc.pairs, acc.best, dict(sorted(acc.by_dims.items())),
                        acc.violations[:max_violations], required, seed_used, strata)


def verify_cross(A: SubspaceCode, B: SubspaceCode, min_distance: int, pairs: int = DEFAULT_SAMPLES,
                 seed: int = 0, same_skeleton: bool = True) -> VerifyReport:
    """Seeded pairs with one word from A and one from B.

    With ``same_skeleton`` half the pairs fix B's part and draw A's word from
    the part whose words are nearest in identifying vector (the adversarial
    case); the rest are uniform.
    """
    rng = random.Random(seed)
    acc = _Acc()
    need = lambda a, b: min_distance
    cache_a, cache_b = {}, {}
    near = None
    if same_skeleton:
        near = {}
        reps = [A.parts[p].word(0).identifying_vector() for p in range(len(A.parts))]
        for pb, part in enumerate(B.parts):
            vb = part.word(0).identifying_vector()
            near[pb] = min(range(len(reps)), key=lambda pa: hamming_distance(reps[pa], vb))
    strata = {"uniform": 0, "nearest_part": 0}
    for t in range(pairs):
        if near is not None and t % 2:
            jb = rng.randrange(B.size)
            pb, _ = B.locate(jb)
            pa = near[pb]
            ia = A._offsets[pa] + rng.randrange(A.parts[pa].size)
            strata["nearest_part"] += 1
        else:
            ia, jb = rng.randrange(A.size), rng.randrange(B.size)
            strata["uniform"] += 1
        U = cache_a.get(ia) or cache_a.setdefault(ia, A[ia])
        V = cache_b.get(jb) or cache_b.setdefault(jb, B[jb])
        if len(cache_a) > 8192:
            cache_a.clear()
        acc.add(ia, jb, U, V, need)
    return VerifyReport("sampled-cross", A.size + B.size, acc.pairs, acc.best, acc.by_dims,
                        acc.violations[:20], {"d": min_distance}, seed, strata)


# -- SC-representations and code files ---------------------------------------------------

@dataclass
class SCRepresentation:
    """One full-rank RREF generator per codeword, grouped by dimension."""

    field: FieldSpec
    n: int
    groups: dict  # dim -> list[GFMatrix]

    def check(self) -> bool:
        seen = set()
        for dim, mats in self.groups.items():
            for M in mats:
                if M.nrows != dim or M.rank() != dim:
                    return False
                key = canonical_key(Subspace.from_matrix(M))
                if key in seen:
                    return False
                seen.add(key)
        return True

    def rowspaces(self):
        return [Subspace.from_matrix(M) for dim in sorted(self.groups, reverse=True)
                for M in self.groups[dim]]


def sc_representation(code: SubspaceCode) -> SCRepresentation:
    groups = {}
    for w in code:
        groups.setdefault(w.dim, []).append(w.generator())
    return SCRepresentation(code.field, code.n, dict(sorted(groups.items(), reverse=True)))


def write_code(path, code: SubspaceCode, seed=None):
    """Write the code-file JSON: header plus one RREF generator per codeword."""
    eta = code.eta
    header = {"format_version": FORMAT_VERSION, "q": code.field.order,
              "modulus": list(code.field.modulus), "n": code.n,
              "claimed_distance": code.claimed_distance, "recipe": code.recipe,
              "seed": seed if seed is not None else code.seed}
    if len(eta) == 1:
        header["k"] = next(iter(eta))
    else:
        header["T"] = sorted(eta, reverse=True)
    body = [[list(r) for r in w.basis] for w in code]
    with open(path, "w") as fh:
        json.dump({"header": header, "codewords": body}, fh, separators=(",", ":"))
        fh.write("\n")


def read_code(path) -> SubspaceCode:
    """Read a code file written by ``write_code``."""
    try:
        with open(path) as fh:
            data = json.load(fh)
        header, body = data["header"], data["codewords"]
        if header.get("format_version") != FORMAT_VERSION:
            raise InvalidParameterError(f"unsupported code-file version {header.get('format_version')}")
        F = field_new(int(header["q"]))
        if list(F.modulus) != list(header.get("modulus", F.modulus)):
            raise InvalidParameterError("code file uses a different field modulus")
        n = int(header["n"])
        words = []
        for rows in body:
            U = Subspace(F, n, rows)
            if U.dim != len(rows):
                raise InvalidParameterError("code file contains a rank-deficient generator")
            words.append(U)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InvalidParameterError):
            raise
        raise InvalidParameterError(f"malformed code file {path}: {e}") from None
    code = SubspaceCode(F, n, [ExplicitPart(words, "file")], int(header["claimed_distance"]),
                        header.get("recipe") or {}, header.get("seed"))
    return code
