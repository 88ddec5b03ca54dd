from __future__ import annotations

import json
from itertools import product

import pytest

from clustersing.algebra import Fp
from clustersing.classifier import (
    CoefficientPoint,
    Verdict,
    classify,
    classify_A,
    classify_B,
    classify_C,
    classify_D,
    classify_E,
    classify_F4,
    classify_G2,
    classify_rank2,
    coefficient_torus,
    g2_local_identity,
    locate_stratum,
    stratify,
)
from clustersing.presentations import family_rank, reduced_presentation


def pt(p, *eta):
    return CoefficientPoint(p, eta)


def test_coefficient_point_validation():
    with pytest.raises(ValueError):
        pt(5, 1, 5)
    with pytest.raises(ValueError):
        pt(6, 1)
    assert pt(5, 7, -1).eta == (2, 4)


# -- type A ------------------------------------------------------------------


@pytest.mark.parametrize("eta2", [1, 2, 3, 4])
def test_a3_over_f5_singular_when_c1_c3_is_one(eta2):
    rep = classify_A(3, pt(5, 2, eta2, 3))
    assert rep.verdict is Verdict.ISOLATED
    assert rep.singularity_type == "A1"
    assert rep.summary() == "isolated A1 at origin"


def test_a2_always_regular():
    assert all(not classify_A(2, q).singular for p in (2, 3, 5, 7) for q in coefficient_torus(2, p))


def test_a1_two_lines():
    rep = classify_A(1, pt(3, 2))
    assert rep.verdict is Verdict.TWO_LINES
    assert [str(e) for e in rep.components[0].equations] == ["x1", "y1"]
    assert not classify_A(1, pt(5, 2)).singular


# -- type B ------------------------------------------------------------------


def test_b3_singular_when_lambda3_is_one():
    assert classify_B(3, pt(5, 1, 1, 1)).verdict is Verdict.ISOLATED
    assert not classify_B(3, pt(5, 2, 1, 1)).singular


def test_b2_regular_in_odd_characteristic():
    assert all(not classify_B(2, q).singular for q in coefficient_torus(2, 3))


def test_b4_over_f2_point_q():
    rep = classify_B(4, pt(2, 1, 1, 1, 1))
    assert rep.verdict is Verdict.ISOLATED
    assert rep.point == {"z1": 0, "z2": 0, "z3": 0, "u1": 1, "u2": 1, "u3": 0}
    assert rep.local_variables == ("z1", "z2", "z3", "u1", "u2")
    assert rep.elimination


# -- type C ------------------------------------------------------------------


@pytest.mark.parametrize("eta1", [1, 4])
def test_c3_over_f5_singular(eta1):
    assert classify_C(3, pt(5, eta1, 1, 4)).verdict is Verdict.ISOLATED


def test_c3_square_condition_alone_is_not_enough():
    # -eta_3 = 1 is a square but -lambda_1 lambda_3 = 4 != 1: regular (see the oracle tests)
    assert not classify_C(3, pt(5, 2, 1, 4)).singular


def test_c4_odd_characteristic_regular():
    assert all(not classify_C(4, q).singular for q in coefficient_torus(4, 5))


def test_c3_char_two_case_2b():
    rep = classify_C(3, pt(2, 1, 1, 1))
    assert rep.verdict is Verdict.C_SPECIAL and rep.case == "2b"
    # rho = 1, so the last equation is P_2 + 1 = z1*z2
    assert [str(e) for e in rep.components[0].equations] == ["z4", "z1*z2*z3 - z1 - z3", "z1*z2"]


def test_c4_char_two_case_2c():
    rep = classify_C(4, pt(2, 1, 1, 1, 1))
    assert rep.case == "2c" and rep.components[0].dimension == 2


# -- type D ------------------------------------------------------------------


def test_d4_case_a_six_axes():
    rep = classify_D(4, pt(5, 2, 1, 3, 1))
    assert rep.case == "a"
    assert [c.name for c in rep.components] == ["Y0", "Y1", "Y2", "Y3", "Y4"]


def test_d5_case_c():
    for q in coefficient_torus(5, 3):
        rep = classify_D(5, q)
        assert rep.case == "c" and [c.name for c in rep.components] == ["Y0"]


def test_d6_case_b():
    assert classify_D(6, pt(3, 2, 1, 1, 1, 1, 1)).case == "b"
    assert classify_D(6, pt(3, 1, 1, 1, 1, 1, 1)).case == "c"


# -- type E, F4, G2 ----------------------------------------------------------


def test_e_family():
    assert not classify_E(6, pt(3, *[1] * 6)).singular
    rep = classify_E(7, pt(3, 2, 1, 1, 1, 1, 1, 1))
    assert rep.verdict is Verdict.E7_SURFACE and rep.components[0].dimension == 2
    assert classify_E(9, pt(3, *[1] * 9)).singular
    assert not classify_E(8, pt(3, *[1] * 8)).singular


@pytest.mark.parametrize("p", [2, 3, 7])
def test_f4_regular(p):
    assert classify_F4(pt(p, 1, 1, 1, 1)).summary() == "regular"


def test_g2_over_f3():
    rep = classify_G2(pt(3, 1, 1))
    assert rep.singularity_type == "A2"
    assert rep.point == {"x": 2, "y": 0, "z": 2}
    rep2 = classify_G2(pt(3, 2, 1))
    assert rep2.point == {"x": 1, "y": 0, "z": 1}  # delta = 2 since 2^3 = 2 in F_3


def test_g2_regular_away_from_three():
    assert all(not classify_G2(q).singular for p in (2, 5, 7) for q in coefficient_torus(2, p))


@pytest.mark.parametrize("delta", [1, 2])
def test_g2_local_identity(delta):
    assert g2_local_identity(delta)


def test_g2_local_identity_needs_characteristic_three():
    reg = reduced_presentation("G2").registry
    x, y, z = reg.vars("x", "y", "z")
    f = reduced_presentation("G2").generators[0]
    diff = (f - (y * (x * z - 1) - (x + 1) ** 3)).specialize({"c1": 1}, 5)
    assert not diff.is_zero()


# -- rank two ----------------------------------------------------------------


def test_rank2_zero_four_planes():
    assert classify_rank2(0, 0, pt(3, 2, 2)).verdict is Verdict.FOUR_PLANES
    assert classify_rank2(0, 0, pt(3, 2, 1)).verdict is Verdict.TWO_SURFACES
    assert not classify_rank2(0, 0, pt(3, 1, 1)).singular


def test_rank2_2_minus2_over_f2():
    rep = classify_rank2(2, -2, pt(2, 1, 1))
    assert [(c.name, c.local_type, c.rational_count) for c in rep.components] == [("Ya", "A1", 1), ("Yb", "A1", 1)]


def test_rank2_2_minus3_over_f3():
    for q in coefficient_torus(2, 3):
        rep = classify_rank2(2, -3, q)
        assert [c.name for c in rep.components] == ["Yb"]
        assert rep.components[0].local_type == "A2"


def test_rank2_higher_prime_power():
    rep = classify_rank2(9, -1, pt(3, 1, 1))
    assert rep.components[0].local_type == "A8"


@pytest.mark.parametrize("a,b,p", [(2, -2, 2), (4, -2, 2), (3, -6, 3), (6, -3, 3), (5, -5, 5)])
def test_rank2_rational_counts(a, b, p):
    for q in coefficient_torus(2, p):
        rep = classify_rank2(a, b, q)
        for comp in rep.components:
            vals = {"c1": Fp(q.eta[0], p), "c2": Fp(q.eta[1], p)}
            count = 0
            for x1, x2, y1, y2 in product(range(p), repeat=4):
                at = dict(vals, x1=Fp(x1, p), x2=Fp(x2, p), y1=Fp(y1, p), y2=Fp(y2, p))
                count += all(e.evaluate(at, p) == 0 for e in comp.equations)
            assert count == comp.rational_count


def test_rank2_rejects_bad_signs():
    with pytest.raises(ValueError):
        classify_rank2(1, 1, pt(3, 1, 1))


# -- strata ------------------------------------------------------------------


def test_stratify_examples():
    a3 = stratify("A", 3, 5)
    assert [str(c) for c in a3[0].conditions] == ["-1 + c1^-1*c3^-1 = 0"]
    c4 = stratify("C", 4, 2)
    assert [str(c) for s in c4 for c in s.conditions] == ["is_square(-c4)", "not is_square(-c4)"]
    b3 = stratify("B", 3, 7)
    assert [str(c) for c in b3[0].conditions] == ["-1 + c1^-1*c3^-1 = 0"]


FAMILY_GRID = (
    [("A", n, None, None) for n in range(1, 6)]
    + [("B", n, None, None) for n in range(2, 6)]
    + [("C", n, None, None) for n in range(3, 6)]
    + [("D", n, None, None) for n in range(4, 7)]
    + [("E", n, None, None) for n in range(6, 8)]
    + [("F4", None, None, None), ("G2", None, None, None)]
    + [("rank2", None, a, b) for a, b in [(2, -2), (2, -3), (3, -3), (0, 0), (1, -4)]]
)


def _cases():
    for kind, n, a, b in FAMILY_GRID:
        rank = family_rank(kind, n, a, b)
        for p in (2, 3, 5, 7):
            if (p - 1) ** rank <= 4096:
                yield kind, n, a, b, p


@pytest.mark.parametrize("kind,n,a,b,p", list(_cases()))
def test_strata_partition_and_match_classifier(kind, n, a, b, p):
    strata = stratify(kind, n, p, a, b)
    names = [s.name for s in strata]
    assert len(set(names)) == len(names)
    rank = family_rank(kind, n, a, b)
    for q in coefficient_torus(rank, p):
        s = locate_stratum(strata, q)  # raises unless exactly one stratum holds
        rep = classify(kind, n, q, a, b)
        assert rep.stratum == s.name
        assert rep.verdict is s.verdict
        if s.case is not None:
            assert rep.case == s.case


def test_report_json_shape():
    rep = classify("A", 3, pt(5, 2, 1, 3))
    data = json.loads(json.dumps(rep.to_json(), sort_keys=True))
    for key in ("type", "n", "p", "eta", "verdict", "locus", "stratum"):
        assert key in data
    assert data["locus"] == [["z1", "z2", "z3", "z4"]]
    assert data["verdict"] == "IsolatedHypersurface"
