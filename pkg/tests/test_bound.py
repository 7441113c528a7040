"""Tests for the exact lower-bound evaluators and the registry."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from cdc_forge import InvalidParameterError, MissingDataError
from cdc_forge.bound import (
    BoundReport, Registry, TABLE2_ROWS, bound_bpm, bound_corollary, bound_spar, bpm_derived,
    invert_base_size, spar_derived, table2,
)
from cdc_forge.count import registry_n
from cdc_forge.rankcode import gbfd_rho
from cdc_forge.subspace import parallel_mixed, parallel_mixed_simple

ETA = {4: 4801, 3: 327}

# published comparison rows: (q, n) -> (new, old)
TABLE2_Q2 = {
    (2, 13): (158679134, 158676446),
    (2, 14): (1269315038, 1269304286),
    (2, 15): (10154264158, 10154219486),
    (2, 16): (81233502686, 81233326046),
    (2, 17): (649866384350, 649865748446),
    (2, 18): (5199103860464, 5199101447408),
    (2, 19): (41591750345072, 41591745233648),
}


def _bpm_params(q, h):
    return dict(q=q, n=18 + h, n1=8, n2=10 + h, n3=8, k=4, delta=2, T1=[4, 3], T2=[4, 3])


def _spar_params(q, h):
    return dict(q=q, n=12 + h, n1=8, n2=4 + h, k=4, delta=2, T1=[4, 3])


def _eta(q):
    reg = Registry.default()
    if q == 2:
        return dict(ETA)
    return {4: reg.size(3, 8, 4, 4), 3: registry_n(8, 2, 4, 3, reg)}


def _gb_sum_bpm(q, h):
    p = _bpm_params(q, h)
    der = bpm_derived(p["n"], p["n1"], p["n2"], p["n3"], p["k"], p["delta"], p["T1"], p["T2"])
    w1, w2, d = der["omega1"], der["omega2"], p["delta"]
    total = 0
    for i in range(der["theta1"] + 1):
        for j in range(der["theta2"] + 1):
            total += gbfd_rho(w1, der["mu1"] - w1 - i * d, der["filler_rows"], der["filler_cols"],
                              w2, der["mu2"] + der["mu3"] - w2 - j * d, d, der["filler_cap"], q)
    return total


def _gb_sum_spar(q, h):
    p = _spar_params(q, h)
    n, n1, n2, k, d = p["n"], p["n1"], p["n2"], p["k"], p["delta"]
    t0 = min(p["T1"])
    der = spar_derived(n, n1, n2, k, d, p["T1"])
    total = 0
    for i in range(der["theta1"] + 1):
        for j in range(der["theta2"] + 1):
            # the right block has exactly delta rows, so its Gamma term is 1
            total += gbfd_rho(k - d, n1 - t0 + (1 - i) * d, k - d, n2 - k + t0 - d,
                              d, n2 - k + t0 - (j + 1) * d, d, k - 2 * d, q)
    return total


def test_bpm_worked_example():
    rep = bound_bpm(2, 18, 8, 10, 8, 4, 2, [4, 3], [4, 3], ETA, ETA)
    assert rep.base == 5199101447408
    assert rep.gb == 2413056
    assert rep.total == 5199103860464
    assert rep.derived["mu1"] == rep.derived["mu2"] == 9 and rep.derived["omega1"] == 2


def test_spar_worked_example():
    rep = bound_spar(2, 15, 8, 7, 4, 2, [4, 3], ETA)
    assert (rep.base, rep.gb, rep.total) == (10154219486, 44672, 10154264158)


def test_old_mode_drops_gb():
    rep = bound_bpm(2, 18, 8, 10, 8, 4, 2, [4, 3], [4, 3], ETA, ETA, old=True)
    assert rep.gb == 0 and rep.total == 5199101447408


def test_omega_tie_goes_to_delta():
    der = bpm_derived(24, 12, 12, 12, 6, 2, [6], [6])
    assert der["mu1"] == der["mu2"] and der["omega1"] == 2 and der["omega2"] == 4
    der = bpm_derived(24, 12, 12, 10, 6, 2, [6], [6])
    assert der["mu1"] > der["mu2"] and der["omega1"] == 4


def test_bpm_degenerate_theta_gives_no_gb_terms():
    # s > n3 here, so the right window is shorter than omega2
    rep = bound_bpm(2, 8, 4, 4, 1, 4, 2, [2], [4], {2: 1}, {4: 1})
    assert rep.derived["theta2"] < 0 and rep.derived["cells"] == [] and rep.gb == 0


def test_spar_degenerate_theta_only_outside_constraints():
    der = spar_derived(12, 8, 4, 4, 2, [2])
    assert der["theta2"] < 0 and der["cells"] == []
    with pytest.raises(InvalidParameterError, match="n1\\+k-T1min"):
        bound_spar(2, 12, 8, 4, 4, 2, [2], {2: 1})


def test_parameter_violations_name_the_constraint():
    with pytest.raises(InvalidParameterError, match="n1 \\+ n2"):
        bound_bpm(2, 19, 8, 10, 8, 4, 2, [4, 3], [4, 3], ETA, ETA)
    with pytest.raises(InvalidParameterError, match="2\\*delta"):
        bound_bpm(2, 18, 8, 10, 8, 3, 2, [3], [3], {3: 1}, {3: 1})
    with pytest.raises(InvalidParameterError, match="T2"):
        bound_bpm(2, 18, 8, 10, 8, 4, 2, [4, 3], [2], ETA, {2: 1})
    with pytest.raises(InvalidParameterError, match="l_T1"):
        bound_spar(2, 20, 10, 10, 6, 2, [6, 2], {6: 1, 2: 1})
    with pytest.raises(InvalidParameterError, match="eta1"):
        bound_spar(2, 15, 8, 7, 4, 2, [4, 3], {4: 4801})


@pytest.mark.parametrize("key", sorted(TABLE2_Q2))
def test_table2_q2_rows(key):
    rows = {(r["q"], r["n"]): r for r in table2()}
    assert (rows[key]["new"], rows[key]["old"]) == TABLE2_Q2[key]


def test_table2_shape_and_strict_gain():
    rows = table2()
    assert len(rows) == 14 == len(TABLE2_ROWS)
    assert all(r["new"] > r["old"] for r in rows)


@pytest.mark.parametrize("q,n,family,h", TABLE2_ROWS)
def test_table2_gain_equals_filler_sum(q, n, family, h):
    new = bound_corollary(family, q=q, h=h).total
    old = bound_corollary(family, q=q, h=h, old=True).total
    expect = _gb_sum_spar(q, h) if family in ("c2_12", "q_12") else _gb_sum_bpm(q, h)
    assert new - old == expect


@pytest.mark.parametrize("h", range(1, 6))
def test_c2_12_matches_theorem(h):
    assert bound_corollary("c2_12", h=h).total == bound_spar(**_spar_params(2, h), eta1=ETA).total


@pytest.mark.parametrize("h", range(0, 4))
def test_c2_18_matches_theorem(h):
    assert bound_corollary("c2_18", h=h).total == \
        bound_bpm(**_bpm_params(2, h), eta1=ETA, eta3=ETA).total


@pytest.mark.parametrize("h", [0, 1, 2])
def test_q_18_matches_theorem_q3(h):
    eta = _eta(3)
    assert bound_corollary("q_18", q=3, h=h).total == \
        bound_bpm(**_bpm_params(3, h), eta1=eta, eta3=eta).total


@pytest.mark.parametrize("h", range(1, 6))
def test_q_12_matches_theorem_q3(h):
    assert bound_corollary("q_12", q=3, h=h).total == \
        bound_spar(**_spar_params(3, h), eta1=_eta(3)).total


@pytest.mark.parametrize("q", [2, 3])
def test_q_12_gb_terms_at_h2(q):
    assert bound_corollary("q_12", q=q, h=2).gb == q ** 13 + q ** 11 + q ** 9


def test_q_12_rejects_small_h_and_missing_q():
    with pytest.raises(InvalidParameterError):
        bound_corollary("q_12", q=3, h=0)
    with pytest.raises(MissingDataError) as exc:
        bound_corollary("q_12", q=5, h=1)
    assert exc.value.key == "5/8/4/4"


def test_family_checks():
    with pytest.raises(InvalidParameterError):
        bound_corollary("c2_12", h=6)
    with pytest.raises(InvalidParameterError):
        bound_corollary("c2_18", q=3)
    with pytest.raises(InvalidParameterError):
        bound_corollary("nope")


def test_c2_12_increasing_in_h():
    totals = [bound_corollary("c2_12", h=h).total for h in range(1, 6)]
    assert totals == sorted(totals) and len(set(totals)) == 5


def test_report_roundtrip_and_reevaluation():
    rep = bound_bpm(2, 18, 8, 10, 8, 4, 2, [4, 3], [4, 3], ETA, ETA)
    d = json.loads(json.dumps(rep.as_dict()))
    back = BoundReport.from_dict(d)
    assert back.terms == rep.terms and back.total == rep.total
    p = back.params
    again = bound_bpm(p["q"], p["n"], p["n1"], p["n2"], p["n3"], p["k"], p["delta"], p["T1"], p["T2"],
                      p["eta1"], p["eta3"], old=p["old"])
    assert again.as_dict() == rep.as_dict()


def test_big_totals_serialize_as_strings():
    d = bound_corollary("q_18", q=3, h=1).as_dict()
    assert isinstance(d["total"], str) and int(d["total"]) > 2 ** 53


def test_old_mode_equals_construction_count():
    X1 = {4: 4801, 3: 327}
    rep = bound_bpm(2, 18, 8, 10, 8, 4, 2, [4, 3], [4, 3], ETA, ETA, old=True)
    assert parallel_mixed(X1, X1, 18, 8, 10, 8, 4, 2, 2, count_only=True).size == rep.total
    rep = bound_spar(2, 15, 8, 7, 4, 2, [4, 3], ETA, old=True)
    assert parallel_mixed_simple(X1, 15, 8, 7, 4, 2, 2, count_only=True).size == rep.total


def test_registry_defaults_have_provenance():
    reg = Registry.default()
    assert reg.size(2, 8, 4, 4) == 4801
    assert reg.eta(2, 8, 4, 3) == ETA
    assert reg.size(3, 8, 4, 4) == 543142
    assert all(e["provenance"] for e in reg.entries.values())


def test_registry_missing_and_invalid():
    reg = Registry.default()
    with pytest.raises(MissingDataError) as exc:
        reg.size(4, 8, 4, 4)
    assert exc.value.key == "4/8/4/4"
    with pytest.raises(InvalidParameterError):
        reg.set(2, 9, 4, 4, 10, "")
    with pytest.raises(InvalidParameterError):
        reg.set(2, 9, 4, 4, 0, "x")
    with pytest.raises(InvalidParameterError):
        Registry({"2/9/4": {"value": "3", "provenance": "x"}})
    with pytest.raises(InvalidParameterError):
        reg.set_eta(2, 9, 4, 3, {4: 0}, "x")


def test_registry_save_load(tmp_path):
    reg = Registry.default()
    reg.set(2, 9, 4, 4, 10 ** 20, "test: big value")
    path = tmp_path / "reg.json"
    reg.save(path)
    raw = json.loads(path.read_text())
    assert raw["2/9/4/4"]["value"] == str(10 ** 20)
    back = Registry.load(path)
    assert back.to_json() == reg.to_json()
    assert back.size(2, 9, 4, 4) == 10 ** 20


def test_invert_base_size_q3():
    target = 7793875720905  # the q = 3, n = 13 row
    assert invert_base_size(3, target, h=1) == 543142


def test_invert_base_size_unreachable():
    good = bound_corollary("q_12", q=3, h=1).total
    with pytest.raises(InvalidParameterError):
        invert_base_size(3, good + 1, h=1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6), st.sampled_from([2, 3, 4, 5]))
def test_gb_terms_are_nonnegative_gain(h, q):
    eta = {4: 100, 3: 7}
    new = bound_bpm(**_bpm_params(q, h), eta1=eta, eta3=eta)
    old = bound_bpm(**_bpm_params(q, h), eta1=eta, eta3=eta, old=True)
    assert new.total - old.total == new.gb == _gb_sum_bpm(q, h) > 0
