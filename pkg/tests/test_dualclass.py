from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from latdesign.dualclass import (ELIMINATED, FORCES_UNIMODULAR, SURVIVES,
                                 UNDECIDED, ClassifyConfig,
                                 analyze_dual_classes, classify,
                                 default_config, eliminate_to_polynomial,
                                 load_config, rule_even_dual, rule_hecke,
                                 rule_hermite, run_classification)
from latdesign.feasibility import scan
from latdesign.moments import DesignProblem, build_dual_system

T1 = {26: 69888, 36: 1149120, 44: 8500800, 46: 13395200,
      48: 26208000, 49: 50992095}
T2 = {50: 57256875, 56: 237875400, 62: 1071285600, 64: 1866110400,
      66: 3236535225, 68: 4743351900, 72: 3109087800, 76: 1263241980,
      78: 866338200, 82: 470377215}

P9 = DesignProblem(m=6, t=9)
P11 = DesignProblem(m=8, t=11)


def test_elimination_polynomial_n26():
    a = analyze_dual_classes(P9, 26, T1[26])
    assert a.polynomial.coeffs == (0, -128, 112, -32, 3)
    assert a.roots == (Fraction(8, 3), Fraction(4))
    assert a.root_counts[Fraction(8, 3)] == (32768, 2560, 0)
    assert a.root_counts[Fraction(4)] == (34560, 6912, 256)
    assert a.flagged_roots == ()


def test_elimination_roots_table1():
    expected = {26: (Fraction(8, 3), Fraction(4)), 36: (Fraction(4),),
                44: (), 46: (), 48: (), 49: ()}
    for n, s in T1.items():
        a = analyze_dual_classes(P9, n, s)
        assert a.polynomial.degree == 4
        assert a.roots == expected[n], n
    a36 = analyze_dual_classes(P9, 36, T1[36])
    assert a36.root_counts[Fraction(4)] == (544320, 54432, 448)


def test_elimination_roots_table2():
    for n, s in T2.items():
        a = analyze_dual_classes(P11, n, s)
        assert a.polynomial.degree == 5
        assert a.roots == ((Fraction(6),) if n == 56 else ()), n
    a56 = analyze_dual_classes(P11, 56, T2[56])
    assert a56.root_counts[Fraction(6)] == (115758720, 20162520, 823680, 4455)


def test_dual_counts_satisfy_full_system():
    d = build_dual_system(P9, 26, T1[26])
    a = analyze_dual_classes(P9, 26, T1[26])
    for root, tj in a.root_counts.items():
        for i in range(4):
            lhs = sum(d.matrix[i, j] * tj[j] for j in range(3))
            assert lhs == d.rhs[i](root)


def test_eliminate_requires_one_extra_equation():
    d = build_dual_system(DesignProblem(m=2, t=7), 8, 120)  # 3 eqs, 1 unknown
    with pytest.raises(ValueError):
        eliminate_to_polynomial(d)


def test_rule_even_dual():
    assert rule_even_dual([Fraction(4)]).outcome == FORCES_UNIMODULAR
    assert rule_even_dual([Fraction(6)]).outcome == FORCES_UNIMODULAR
    assert rule_even_dual([Fraction(8, 3), Fraction(4)]).outcome == SURVIVES
    assert rule_even_dual([]).outcome == FORCES_UNIMODULAR
    assert rule_even_dual([Fraction(2), Fraction(3)]).outcome == SURVIVES
    v = rule_even_dual([Fraction(4)])
    assert v.witness["roots"] == ["4"]


def test_rule_hermite_eliminates_dim26():
    v = rule_hermite(26, 6, Fraction(3), Fraction(89, 20))
    assert v.outcome == ELIMINATED
    assert 6 ** 26 > Fraction(89, 20) ** 26 * 3


def test_rule_hermite_e8_survives():
    assert rule_hermite(8, 2, Fraction(1), Fraction(2)).outcome == SURVIVES


def test_rule_hermite_scale_invariance():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(2, 30)
        m = rng.randint(2, 12)
        det = Fraction(rng.randint(1, 50), rng.randint(1, 9))
        bound = Fraction(rng.randint(2, 9), rng.randint(1, 3))
        c = rng.randint(1, 6)
        before = rule_hermite(n, m, det, bound).outcome
        after = rule_hermite(n, c * m, Fraction(c) ** n * det, bound).outcome
        # m/det^(1/n) is invariant under (m, det) -> (c m, c^n det)
        assert before == after


def test_rule_hermite_rejects_nonpositive():
    with pytest.raises(ValueError):
        rule_hermite(26, 6, Fraction(0), Fraction(2))


def test_gamma26_bound_is_derivable():
    """89/20 really bounds the dimension-26 Hermite constant.

    Density bound: gamma_n <= (2/pi) * Gamma(n/2 + 2)^(2/n).  At n = 26 this
    is (2/pi) * 14!^(1/13), so 89/20 is valid iff (89 pi / 40)^13 >= 14!,
    which a rational lower bound for pi settles exactly.
    """
    pi_lo = Fraction(3141592653, 10 ** 9)
    assert (Fraction(89, 20) * pi_lo / 2) ** 13 >= math.factorial(14)
    # and the bound is strong enough for the elimination: (89/20)^26 * 3 < 6^26
    assert Fraction(89, 20) ** 26 * 3 < 6 ** 26


def test_rule_hecke():
    survivors = [n for n in (44, 46, 48, 49)
                 if rule_hecke(n, 6).outcome == SURVIVES]
    assert survivors == [48]
    assert rule_hecke(48, 6).witness["extremal"] is True

    by_div = [n for n in T2 if n % 8 == 0]
    assert by_div == [56, 64, 72]
    survivors = [n for n in T2 if rule_hecke(n, 8).outcome == SURVIVES]
    assert survivors == [72]
    assert rule_hecke(56, 8).witness["extremal_bound"] == 6
    assert rule_hecke(64, 8).witness["extremal_bound"] == 6
    assert rule_hecke(72, 8).witness["extremal_bound"] == 8

    leech = rule_hecke(24, 4)
    assert leech.outcome == SURVIVES and leech.witness["extremal"] is True


def test_classify_9_design():
    report = scan(P9, 1, 512)
    cert = classify(P9, report, default_config())
    assert [s["n"] for s in cert.survivors] == [48]
    assert cert.survivors[0]["extremal"] is True
    assert cert.undecided == ()
    conclusions = {e.analysis.n: e.conclusion for e in cert.entries}
    assert conclusions == {26: "eliminated", 36: "eliminated", 44: "eliminated",
                           46: "eliminated", 48: "survives", 49: "eliminated"}
    rules26 = [(v.rule, v.outcome) for v in cert.entries[0].verdicts]
    assert ("hermite", ELIMINATED) in rules26


def test_classify_11_design():
    report = scan(P11, 1, 512)
    cert = classify(P11, report, default_config())
    assert [s["n"] for s in cert.survivors] == [72]
    assert cert.undecided == ()


def test_classify_without_config_is_undecided_not_silent():
    report = scan(P9, 1, 512)
    cert = classify(P9, report, ClassifyConfig(gamma_bounds={}, det_hypotheses={}))
    assert cert.undecided == (26,)
    entry26 = next(e for e in cert.entries if e.analysis.n == 26)
    assert entry26.conclusion == UNDECIDED
    assert any(v.outcome == UNDECIDED for v in entry26.verdicts)
    # the other dimensions still resolve
    assert [s["n"] for s in cert.survivors] == [48]


def test_run_classification_statements():
    config = default_config()
    r9 = run_classification(9, 7, config)
    assert [(f["n"], f["status"]) for f in r9["final"]] == [(24, "cited"), (48, "computed")]
    assert r9["undecided"] == []
    assert "minimum <= 7" in r9["conclusion"]

    r13 = run_classification(13, 11, config)
    assert r13["final"] == []
    assert "no integral 13-design lattice" in r13["conclusion"]

    with pytest.raises(ValueError):
        run_classification(9, 8, config)
    with pytest.raises(ValueError):
        run_classification(9, 5, config)  # below the computed band
    with pytest.raises(ValueError):
        run_classification(7, 5, config)


def test_config_roundtrip(tmp_path):
    cfg = default_config()
    assert cfg.gamma_bound(26) == (Fraction(89, 20), cfg.gamma_bound(26)[1])
    assert "Blichfeldt" in cfg.gamma_bound(26)[1]
    assert cfg.dets_for(9, 6, 26)[0] == (Fraction(3),)
    path = tmp_path / "cfg.json"
    path.write_text('{"gamma_upper_bounds": {"10": {"bound": "7/2"}}}')
    loaded = load_config(path)
    assert loaded.gamma_bound(10) == (Fraction(7, 2), "")
    assert loaded.dets_for(9, 6, 26) is None


def test_certificate_json_shape():
    report = scan(P9, 1, 512)
    cert = classify(P9, report, default_config())
    payload = cert.to_json_dict()
    dims = {d["n"]: d for d in payload["dimensions"]}
    assert dims[26]["p_n"] == ["0", "-128", "112", "-32", "3"]
    assert dims[26]["roots"] == ["8/3", "4"]
    assert payload["survivors"][0]["n"] == 48
    assert payload["zero_count_solutions"] == []


def test_classify_deterministic():
    config = default_config()
    certs = [classify(P9, scan(P9, 1, 128, threads=k), config).to_json()
             for k in (1, 2)]
    assert certs[0] == certs[1]
    zero = classify(P11, scan(P11, 1, 30), config)
    assert [z["n"] for z in zero.to_json_dict()["zero_count_solutions"]] == [24]
