"""Lower bounds on A_q(n, 2*delta, {k}) evaluated with exact integers.

Two theorem-level evaluators (``bound_bpm`` for the three-part parallel
construction, ``bound_spar`` for the variant with a single identity block)
return a BoundReport listing every term.  ``bound_corollary`` evaluates the
four closed-form families, and ``table2`` assembles the comparison table.
"Old" mode drops the generalized-bilateral terms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import count
from .errors import InvalidParameterError, MissingDataError


# -- registry ---------------------------------------------------------------

S2_PROVENANCE = "literature: best-known (8,4801,4,{4})_2 code"
ETA2_PROVENANCE = "literature: (8,4,3,{4,3})_2 MDDC built from the (8,4801,4,{4})_2 and (8,1326,4,{3})_2 codes"
S3_PROVENANCE = "derived-from-Table-2"


def _key(q, n, d, k):
    return f"{q}/{n}/{d}/{k}"


def _eta_key(q, n, d1, d0):
    return f"eta:{q}/{n}/{d1}/{d0}"


class Registry:
    """Best-known code sizes S_q(n, d, k) and MDDC dimension distributions.

    Keys are ``"q/n/d/k"`` for sizes and ``"eta:q/n/d1/d0"`` for
    distributions; each entry stores a value and a provenance string.
    """

    def __init__(self, entries: dict | None = None):
        self.entries = {}
        for key, entry in (entries or {}).items():
            self._put(key, entry["value"], entry.get("provenance", ""))

    def _put(self, key, value, provenance):
        if not provenance:
            raise InvalidParameterError(f"registry entry {key} needs a provenance string")
        if key.startswith("eta:"):
            value = {int(t): int(c) for t, c in value.items()}
            if not value or any(c <= 0 for c in value.values()):
                raise InvalidParameterError(f"dimension distribution {key} must be positive")
        else:
            parts = key.split("/")
            if len(parts) != 4 or not all(p.isdigit() for p in parts):
                raise InvalidParameterError(f"malformed registry key {key!r}; expected q/n/d/k")
            value = int(value)
            if value <= 0:
                raise InvalidParameterError(f"registry size {key} must be positive")
        self.entries[key] = {"value": value, "provenance": provenance}

    @classmethod
    def default(cls) -> Registry:
        reg = cls()
        reg.set(2, 8, 4, 4, 4801, S2_PROVENANCE)
        reg.set_eta(2, 8, 4, 3, {4: 4801, 3: 327}, ETA2_PROVENANCE)
        reg.set(3, 8, 4, 4, 543142, S3_PROVENANCE)
        return reg

    @classmethod
    def load(cls, path) -> Registry:
        with open(path) as fh:
            return cls(json.load(fh))

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n")

    def to_json(self) -> dict:
        out = {}
        for key, e in sorted(self.entries.items()):
            v = e["value"]
            v = {str(t): str(c) for t, c in sorted(v.items(), reverse=True)} if isinstance(v, dict) else str(v)
            out[key] = {"value": v, "provenance": e["provenance"]}
        return out

    def size(self, q, n, d, k) -> int:
        key = _key(q, n, d, k)
        if key not in self.entries:
            raise MissingDataError(key, f"registry has no size for S_{q}({n},{d},{{{k}}}) (key {key})")
        return self.entries[key]["value"]

    def set(self, q, n, d, k, value, provenance):
        self._put(_key(q, n, d, k), value, provenance)

    def eta(self, q, n, d1, d0) -> dict:
        key = _eta_key(q, n, d1, d0)
        if key not in self.entries:
            raise MissingDataError(key, f"registry has no dimension distribution {key}")
        return dict(self.entries[key]["value"])

    def set_eta(self, q, n, d1, d0, eta, provenance):
        self._put(_eta_key(q, n, d1, d0), eta, provenance)

    def get(self, key):
        if key not in self.entries:
            raise MissingDataError(key, f"registry has no entry {key}")
        return self.entries[key]

    def provenance(self, key):
        return self.get(key)["provenance"]


# -- reports ------------------------------------------------------------------

@dataclass
class BoundReport:
    """A bound evaluation: inputs, derived quantities, and the exact terms."""

    kind: str
    params: dict
    derived: dict = field(default_factory=dict)
    terms: list = field(default_factory=list)  # [(name, value)]

    @property
    def total(self) -> int:
        return sum(v for _, v in self.terms)

    def part(self, prefix) -> int:
        return sum(v for name, v in self.terms if name.startswith(prefix))

    @property
    def base(self) -> int:
        return self.total - self.part("gb")

    @property
    def gb(self) -> int:
        return self.part("gb")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": _stringify(self.params),
            "derived": _stringify(self.derived),
            "terms": [[name, str(v)] for name, v in self.terms],
            "base": str(self.base),
            "gb": str(self.gb),
            "total": str(self.total),
        }

    @classmethod
    def from_dict(cls, d) -> BoundReport:
        return cls(kind=d["kind"], params=_unstringify(d["params"]),
                   derived=_unstringify(d["derived"]),
                   terms=[(name, int(v)) for name, v in d["terms"]])


def _stringify(x):
    """Big ints become decimal strings; small ones stay numbers."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x if abs(x) < 2 ** 53 else str(x)
    if isinstance(x, dict):
        return {str(k): _stringify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_stringify(v) for v in x]
    return x


def _unstringify(x):
    if isinstance(x, str) and x.lstrip("-").isdigit():
        return int(x)
    if isinstance(x, dict):
        return {k: _unstringify(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_unstringify(v) for v in x]
    return x


# -- parameter checks and derived quantities ---------------------------------

def l_T(T) -> int:
    """Smallest gap between elements of T (0 for a singleton)."""
    T = sorted(set(T))
    return min(b - a for a, b in zip(T, T[1:])) if len(T) > 1 else 0


def _require(cond, msg):
    if not cond:
        raise InvalidParameterError(msg)


def check_T_windows(k, delta, T1, T2=None):
    T1 = sorted(set(T1))
    _require(T1, "T1 must be nonempty")
    _require(all(delta <= t <= k for t in T1), f"T1={T1} must lie in [delta, k] = [{delta}, {k}]")
    _require(l_T(T1) < 2 * delta, f"l_T1 = {l_T(T1)} must be < 2*delta = {2 * delta}")
    if T2 is not None:
        T2 = sorted(set(T2))
        lo = k + delta - min(T1)
        _require(T2, "T2 must be nonempty")
        _require(all(lo <= s <= k for s in T2), f"T2={T2} must lie in [k+delta-T1min, k] = [{lo}, {k}]")
        _require(l_T(T2) < 2 * delta, f"l_T2 = {l_T(T2)} must be < 2*delta = {2 * delta}")


def check_parallel(n, n1, n2, n3, k, delta, T1, T2):
    _require(n == n1 + n2, f"n = {n} must equal n1 + n2 = {n1 + n2}")
    _require(delta >= 1, "delta must be positive")
    _require(k >= 2 * delta, f"k = {k} must be >= 2*delta = {2 * delta}")
    _require(n1 >= k and n2 >= k, f"n1 = {n1} and n2 = {n2} must both be >= k = {k}")
    check_T_windows(k, delta, T1, T2)
    _require(n3 >= 1, "n3 must be positive")
    lhs, rhs = n1 + k - min(T1), n - n3 + min(T2) - k
    _require(lhs <= rhs, f"need n1+k-T1min <= n-n3+T2min-k, got {lhs} > {rhs}")


def check_parallel_simple(n, n1, n2, k, delta, T1):
    _require(n == n1 + n2, f"n = {n} must equal n1 + n2 = {n1 + n2}")
    _require(n1 >= k and n2 >= k, f"n1 = {n1} and n2 = {n2} must both be >= k = {k}")
    _require(k >= 2 * delta >= 4, f"need k >= 2*delta >= 4, got k={k}, delta={delta}")
    check_T_windows(k, delta, T1)
    lhs = n1 + k - min(T1)
    _require(lhs <= n - k, f"need n1+k-T1min <= n-k, got {lhs} > {n - k}")


def _d1(delta, L1, L3):
    return -(-delta // 2) if L1 >= L3 else delta // 2


def bpm_derived(n, n1, n2, n3, k, delta, T1, T2) -> dict:
    """mu, omega, theta and the per-(i, j) exponents for the three-part construction."""
    mu1 = n1 + k - min(T1)
    mu2 = n3 + k - min(T2)
    mu3 = n - mu1 - mu2
    omega1 = k - delta if mu1 > mu2 else delta
    omega2 = k - omega1
    theta1 = (mu1 - omega1) // delta - 1
    theta2 = min((mu2 - omega2) // delta, (mu2 + mu3 - omega2) // delta - 1)
    cells = []
    for i in range(theta1 + 1):
        a = mu1 - omega1 - i * delta
        L1, G1 = max(omega1, a), min(omega1, a)
        for j in range(theta2 + 1):
            b = mu2 + mu3 - omega2 - j * delta
            L3, G3 = max(omega2, b), min(omega2, b)
            d1 = _d1(delta, L1, L3)
            d2 = delta - d1
            e = min(L1 * d2, L3 * d1) + L1 * (G1 - delta + 1) + L3 * (G3 - delta + 1)
            cells.append({"i": i, "j": j, "Lambda1": L1, "Gamma1": G1, "Lambda3": L3,
                          "Gamma3": G3, "d1": d1, "d2": d2, "exponent": e})
    return {"mu1": mu1, "mu2": mu2, "mu3": mu3, "omega1": omega1, "omega2": omega2,
            "theta1": theta1, "theta2": theta2, "cells": cells,
            "filler_rows": omega1, "filler_cols": n2 - 2 * k + min(T1) + omega1,
            "filler_cap": omega1 - delta}


def spar_derived(n, n1, n2, k, delta, T1) -> dict:
    """theta and the per-(i, j) exponents for the single-identity-block variant."""
    t0 = min(T1)
    theta1 = (n1 - t0) // delta
    theta2 = min(k // delta - 1, (n2 - k + t0) // delta - 2)
    cells = []
    for i in range(theta1 + 1):
        a = n1 - t0 + (1 - i) * delta
        L1, G = max(k - delta, a), min(k - delta, a)
        for j in range(theta2 + 1):
            L3 = n2 - k + t0 - (j + 1) * delta
            d1 = _d1(delta, L1, L3)
            d2 = delta - d1
            e = min(L1 * d2, L3 * d1) + L1 * (G - delta + 1) + L3
            cells.append({"i": i, "j": j, "Lambda1": L1, "Gamma": G, "Lambda3": L3,
                          "d1": d1, "d2": d2, "exponent": e})
    return {"mu1": n1 + k - t0, "mu2": k, "mu3": n2 - 2 * k + t0,
            "theta1": theta1, "theta2": theta2, "cells": cells,
            "filler_rows": k - delta, "filler_cols": n2 - k + t0 - delta,
            "filler_cap": k - 2 * delta}


def _check_eta(eta, T, name):
    eta = {int(t): int(c) for t, c in eta.items()}
    _require(set(eta) == set(T), f"{name} keys {sorted(eta)} must match T = {sorted(T)}")
    _require(all(c > 0 for c in eta.values()), f"{name} counts must be positive")
    return eta


# -- theorem-level bounds --------------------------------------------------

def bound_bpm(q, n, n1, n2, n3, k, delta, T1, T2, eta1, eta3, old=False) -> BoundReport:
    """Three-part bound: parallel mixed dimension code plus generalized bilateral lifts."""
    check_parallel(n, n1, n2, n3, k, delta, T1, T2)
    eta1, eta3 = _check_eta(eta1, T1, "eta1"), _check_eta(eta3, T2, "eta3")
    der = bpm_derived(n, n1, n2, n3, k, delta, T1, T2)
    terms = []
    for t in sorted(eta1, reverse=True):
        terms.append((f"C1[t={t}]", eta1[t] * count.mrd_size(k, n2 + t - k, delta, q)))
    for s in sorted(eta3, reverse=True):
        terms.append((f"C3[s={s}]", eta3[s] * count.rrmc_size(k, n - n3 + s - k, delta, k - delta, q)))
    if not old and der["cells"]:
        factor = count.rrmc_size(der["filler_rows"], der["filler_cols"], delta, der["filler_cap"], q)
        der["filler_factor"] = factor
        for c in der["cells"]:
            terms.append((f"gb[{c['i']},{c['j']}]", factor * q ** c["exponent"]))
    params = {"q": q, "n": n, "n1": n1, "n2": n2, "n3": n3, "k": k, "delta": delta,
              "T1": sorted(T1, reverse=True), "T2": sorted(T2, reverse=True),
              "eta1": eta1, "eta3": eta3, "old": old}
    return BoundReport("bpm", params, der, terms)


def bound_spar(q, n, n1, n2, k, delta, T1, eta1, old=False) -> BoundReport:
    """Bound from the single-identity-block parallel code plus generalized bilateral lifts."""
    check_parallel_simple(n, n1, n2, k, delta, T1)
    eta1 = _check_eta(eta1, T1, "eta1")
    der = spar_derived(n, n1, n2, k, delta, T1)
    terms = []
    for t in sorted(eta1, reverse=True):
        terms.append((f"C1[t={t}]", eta1[t] * count.mrd_size(k, n2 + t - k, delta, q)))
    terms.append(("C3'", count.rrmc_size(k, n - k, delta, k - delta, q)))
    if not old and der["cells"]:
        factor = count.rrmc_size(der["filler_rows"], der["filler_cols"], delta, der["filler_cap"], q)
        der["filler_factor"] = factor
        for c in der["cells"]:
            terms.append((f"gb[{c['i']},{c['j']}]", factor * q ** c["exponent"]))
    params = {"q": q, "n": n, "n1": n1, "n2": n2, "k": k, "delta": delta,
              "T1": sorted(T1, reverse=True), "eta1": eta1, "old": old}
    return BoundReport("spar", params, der, terms)


# -- closed-form families -------------------------------------------------

FAMILIES = ("c2_12", "c2_18", "q_18", "q_12")


def _c2_12(reg, h, old):
    _require(1 <= h <= 5, f"c2_12 is tabulated for 1 <= h <= 5, got h={h}")
    eta = reg.eta(2, 8, 4, 3)
    A, eta3 = eta[4], eta[3]
    terms = [("C1[t=4]", A * 2 ** (12 + 3 * h)), ("C1[t=3]", eta3 * 2 ** (9 + 3 * h)),
             ("C3'", 1 + (2 ** (8 + h) - 1) * 35)]
    if not old:
        for i in range(3):
            for j in range(min(1, (h - 1) // 2) + 1):
                terms.append((f"gb[{i},{j}]", 2 ** (min(7 - 2 * i, h + 1 - 2 * j) + 8 + h - 2 * i - 2 * j)))
    return {"q": 2, "n": 12 + h, "h": h}, terms


def _c2_18(reg, h, old):
    _require(h >= 0, f"c2_18 needs h >= 0, got h={h}")
    eta = reg.eta(2, 8, 4, 3)
    A, eta3 = eta[4], eta[3]
    terms = [("C1[t=4]", A * 2 ** (30 + 3 * h)), ("C1[t=3]", eta3 * 2 ** (27 + 3 * h)),
             ("C3[s=4]", A * (1 + 35 * (2 ** (10 + h) - 1))),
             ("C3[s=3]", eta3 * (1 + 35 * (2 ** (9 + h) - 1)))]
    if not old:
        for i in range(3):
            for j in range(min(3, (5 + h) // 2) + 1):
                terms.append((f"gb[{i},{j}]", 2 ** (min(7 - 2 * i, 7 - 2 * j + h) + 14 + h - 2 * i - 2 * j)))
    return {"q": 2, "n": 18 + h, "h": h}, terms


def _q_18(reg, q, h, old):
    _require(h >= 0, f"q_18 needs h >= 0, got h={h}")
    A = reg.size(q, 8, 4, 4)
    N = count.registry_n(8, 2, 4, q, reg)
    g = (q ** 2 + 1) * (q ** 2 + q + 1)
    terms = [("C1[t=4]", A * q ** (30 + 3 * h)), ("C1[t=3]", N * q ** (27 + 3 * h)),
             ("C3[s=4]", A * (1 + (q ** (10 + h) - 1) * g)),
             ("C3[s=3]", N * (1 + (q ** (9 + h) - 1) * g))]
    if not old:
        for i in range(3):
            for j in range(min(3, (5 + h) // 2) + 1):
                terms.append((f"gb[{i},{j}]", q ** (min(7 - 2 * i, 7 - 2 * j + h) + 14 + h - 2 * i - 2 * j)))
    return {"q": q, "n": 18 + h, "h": h, "N": N}, terms


def _q_12(reg, q, delta, h, old):
    _require(delta >= 2, f"q_12 needs delta >= 2, got {delta}")
    _require(h >= delta - 1, f"q_12 needs h >= delta - 1 = {delta - 1}, got h={h}")
    A = reg.size(q, 4 * delta, 2 * delta, 2 * delta)
    N = count.registry_n(4 * delta, delta, 2 * delta, q, reg)
    _require(N > 0, f"q_12 needs N_q(4delta, delta, 2delta) > 0, got {N}")
    lo, hi = sorted((delta + h + 1, 2 * delta))
    terms = [("C1[t=2delta]", A * q ** ((2 * delta + h) * (delta + 1))),
             ("C1[t=delta+1]", N * q ** (hi * (lo - delta + 1))),
             ("C3'", 1 + count.gaussian_binomial(2 * delta, delta, q) * (q ** (4 * delta + h) - 1))]
    cells = []
    if not old:
        threshold = Fraction(h + 2, delta) - 4
        for i in range(3):
            for j in range(min(1, (h + 1) // delta - 1) + 1):
                d1 = -(-delta // 2) if j - i >= threshold else delta // 2
                d2 = delta - d1
                e = min(((4 - i) * delta - 1) * d2, (h + 1 - j * delta) * d1) + (4 - i) * delta + h - j * delta
                cells.append({"i": i, "j": j, "d1": d1, "d2": d2, "exponent": e})
                terms.append((f"gb[{i},{j}]", q ** e))
    return {"q": q, "n": 6 * delta + h, "delta": delta, "h": h, "N": N, "cells": cells}, terms


def bound_corollary(family: str, q: int = 2, h: int = 0, delta: int = 2,
                    registry: Registry | None = None, old: bool = False) -> BoundReport:
    """Evaluate one of the closed-form families c2_12, c2_18, q_18, q_12."""
    reg = registry or Registry.default()
    if family == "c2_12":
        _require(q == 2, "c2_12 is the q = 2 family")
        derived, terms = _c2_12(reg, h, old)
    elif family == "c2_18":
        _require(q == 2, "c2_18 is the q = 2 family")
        derived, terms = _c2_18(reg, h, old)
    elif family == "q_18":
        derived, terms = _q_18(reg, q, h, old)
    elif family == "q_12":
        derived, terms = _q_12(reg, q, delta, h, old)
    else:
        raise InvalidParameterError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    params = {"family": family, "q": q, "h": h, "old": old}
    if family == "q_12":
        params["delta"] = delta
    return BoundReport(family, params, derived, terms)


# -- the comparison table -------------------------------------------------

TABLE2_ROWS = (
    [(2, 12 + h, "c2_12", h) for h in range(1, 6)]
    + [(2, 18 + h, "c2_18", h) for h in range(2)]
    + [(3, 12 + h, "q_12", h) for h in range(1, 6)]
    + [(3, 18 + h, "q_18", h) for h in range(2)]
)


def table2(registry: Registry | None = None) -> list[dict]:
    """The 14 comparison rows: A_q(n, 4, {4}) new and old values."""
    reg = registry or Registry.default()
    rows = []
    for q, n, family, h in TABLE2_ROWS:
        row = {"q": q, "n": n, "d": 4, "k": 4, "family": family, "h": h}
        try:
            row["new"] = bound_corollary(family, q=q, h=h, delta=2, registry=reg).total
            row["old"] = bound_corollary(family, q=q, h=h, delta=2, registry=reg, old=True).total
        except MissingDataError as e:
            row["missing"] = e.key
        rows.append(row)
    return rows


def invert_base_size(q: int, target: int, h: int = 1, delta: int = 2,
                     registry: Registry | None = None) -> int:
    """Find S_q(4delta, 2delta, {2delta}) so that the q_12 family hits ``target`` exactly.

    The total is nondecreasing in S (the S term dominates the loss in N),
    so a binary search over [1, gaussian_binomial(4delta, 2delta)] suffices.
    Raises if no integer S reproduces the target.
    """
    base = registry or Registry.default()

    def total(S):
        reg = Registry(base.to_json())
        reg.set(q, 4 * delta, 2 * delta, 2 * delta, S, "trial")
        try:
            return bound_corollary("q_12", q=q, h=h, delta=delta, registry=reg).total
        except InvalidParameterError:
            return None

    lo, hi = 1, count.gaussian_binomial(4 * delta, 2 * delta, q)
    while lo < hi:
        mid = (lo + hi) // 2
        t = total(mid)
        if t is None or t >= target:
            hi = mid
        else:
            lo = mid + 1
    if total(lo) != target:
        raise InvalidParameterError(f"no base size reproduces {target} for q={q}, h={h}")
    return lo
