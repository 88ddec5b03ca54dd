from __future__ import annotations

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustersing.algebra import VarRegistry
from clustersing.classifier import CoefficientPoint, classify, coefficient_torus
from clustersing.oracle import (
    BUDGET_ENV,
    BudgetExceeded,
    CompiledPoly,
    FiberInstance,
    batched_rank_mod_p,
    default_budget,
    diff_against_classifier,
    enumerate_fiber,
    hessian_rank_at,
    power_table,
    rank_mod_p,
    reduced_fiber,
    singular_points,
    transport_check,
)
from clustersing.presentations import Presentation, continuant, reduced_presentation


def pt(p, *eta):
    return CoefficientPoint(p, eta)


# -- enumeration --------------------------------------------------------------


def test_a1_fiber_over_f3_is_the_cross():
    fi = reduced_fiber("A", 1, pt(3, 2))
    pts = {tuple(r) for r in enumerate_fiber(fi).tolist()}
    assert pts == {(x, y) for x, y in product(range(3), repeat=2) if x * y == 0}
    assert len(pts) == 5


def test_g2_fiber_count_matches_plain_loop():
    count = sum((x * y * z - y - 1 - x**3) % 3 == 0 for x, y, z in product(range(3), repeat=3))
    assert count == 10  # frozen from the loop above
    assert enumerate_fiber(reduced_fiber("G2", None, pt(3, 1, 1))).shape[0] == count


def test_empty_ideal_gives_whole_space():
    reg = VarRegistry.build(["x", "y", "z"], ["c1"])
    fi = FiberInstance(Presentation(reg, ()), 5, pt(5, 1))
    assert enumerate_fiber(fi).shape == (125, 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_compiled_polynomial_matches_evaluate(p, coeffs):
    reg = VarRegistry.build(["x", "y"], ["c1"])
    x, y, c = reg.vars("x", "y", "c1")
    f = coeffs[0] * x**3 * y + coeffs[1] * x * y**2 + coeffs[2] * c.inverse() * y + coeffs[3]
    spec = f.specialize({"c1": 1}, p)
    comp = CompiledPoly.build(spec, ("x", "y"), p)
    pts = np.array(list(product(range(p), repeat=2)), dtype=np.int64)
    got = comp(power_table(pts, comp.max_exp, p))
    want = [spec.evaluate({"x": a, "y": b}, p).residue for a, b in pts.tolist()]
    assert got.tolist() == want


# -- ranks ---------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([2, 3, 5, 7]),
    st.integers(1, 4),
    st.integers(1, 5),
    st.data(),
)
def test_batched_rank_matches_scalar_rank(p, rows, cols, data):
    mats = data.draw(
        st.lists(
            st.lists(st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols), min_size=rows, max_size=rows),
            min_size=1,
            max_size=8,
        )
    )
    batched = batched_rank_mod_p(np.array(mats, dtype=np.int64), p)
    assert batched.tolist() == [rank_mod_p(m, p) for m in mats]


def test_rank_examples():
    assert rank_mod_p([[1, 2], [2, 4]], 7) == 1
    assert rank_mod_p([[1, 1], [1, 3]], 2) == 1
    assert rank_mod_p([[1, 1], [1, 3]], 3) == 2
    assert rank_mod_p([[0, 0]], 5) == 0


# -- singular points -----------------------------------------------------------


def test_a3_singular_point_at_origin():
    sing = singular_points(reduced_fiber("A", 3, pt(5, 2, 1, 3)))
    assert sing.points == {(0, 0, 0, 0)}
    assert sing.codim_expected == 1


def test_a3_regular_when_lambda_is_not_one():
    assert not singular_points(reduced_fiber("A", 3, pt(5, 1, 1, 2))).points


def test_f4_regular_over_f2():
    assert not singular_points(reduced_fiber("F4", None, pt(2, 1, 1, 1, 1))).points


def test_singular_points_satisfy_generators_and_drop_rank():
    fi = reduced_fiber("B", 3, pt(5, 1, 1, 1))
    sing = singular_points(fi)
    gens = fi.specialized()
    for q in sing.as_dicts():
        assert all(g.evaluate(q, 5) == 0 for g in gens)
        J = [[g.partial(v).evaluate(q, 5).residue for v in fi.variables] for g in gens]
        assert rank_mod_p(J, 5) < len(gens)


@settings(max_examples=10, deadline=None)
@given(st.randoms(use_true_random=False))
def test_enumeration_matches_shuffled_plain_loop(rng):
    fi = reduced_fiber("C", 3, pt(5, 1, 1, 4))
    gens = fi.specialized()
    grid = list(product(range(5), repeat=len(fi.variables)))
    rng.shuffle(grid)
    plain = {q for q in grid if all(g.evaluate(dict(zip(fi.variables, q)), 5) == 0 for g in gens)}
    assert {tuple(r) for r in enumerate_fiber(fi).tolist()} == plain


# -- Hessian -------------------------------------------------------------------


def test_hessian_nondegenerate_quadric():
    reg = VarRegistry.build(["x", "y", "z"])
    x, y, z = reg.vars("x", "y", "z")
    assert hessian_rank_at(x * y - z**2, {"x": 0, "y": 0, "z": 0}, 5) == 3


def test_hessian_of_even_continuant():
    reg = VarRegistry.build([f"z{i}" for i in range(1, 5)])
    f = continuant(4, [reg.var(f"z{i}") for i in range(1, 5)]) - 1
    assert hessian_rank_at(f, {f"z{i}": 0 for i in range(1, 5)}, 5) == 4


def test_hessian_of_a2_has_corank_one():
    reg = VarRegistry.build(["x", "y", "z"])
    x, y, z = reg.vars("x", "y", "z")
    assert hessian_rank_at(x**3 + y * z, {"x": 0, "y": 0, "z": 0}, 5) == 2


def test_hessian_refuses_characteristic_two_and_bad_points():
    reg = VarRegistry.build(["x", "y"])
    x, y = reg.vars("x", "y")
    with pytest.raises(ValueError):
        hessian_rank_at(x * y, {"x": 0, "y": 0}, 2)
    with pytest.raises(ValueError):
        hessian_rank_at(x * y - 1, {"x": 0, "y": 0}, 5)
    with pytest.raises(ValueError):
        hessian_rank_at(x * y + x, {"x": 0, "y": 0}, 5)


@pytest.mark.parametrize("kind,n", [("A", 3), ("A", 5), ("B", 3), ("B", 5), ("C", 3), ("C", 5)])
@pytest.mark.parametrize("p", [3, 5])
def test_hessian_full_rank_at_predicted_a1(kind, n, p):
    seen = 0
    for q in coefficient_torus(n, p):
        rep = classify(kind, n, q)
        if rep.singularity_type != "A1" or rep.local_equation is None:
            continue
        at = dict(rep.point)
        at.update(rep.coefficient_values())
        assert hessian_rank_at(rep.local_equation, at, p, rep.local_variables) == len(rep.local_variables)
        seen += 1
    assert seen > 0


# -- budget --------------------------------------------------------------------


def test_budget_exceeded():
    fi = reduced_fiber("A", 3, pt(5, 2, 1, 3))
    with pytest.raises(BudgetExceeded):
        enumerate_fiber(fi, budget=100)
    assert enumerate_fiber(fi, budget=625).shape[0] > 0


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "50")
    assert default_budget() == 50
    with pytest.raises(BudgetExceeded):
        singular_points(reduced_fiber("A", 3, pt(5, 2, 1, 3)))


# -- classifier diff -----------------------------------------------------------


def test_diff_a3_over_f5():
    rep = diff_against_classifier("A", 3, 5)
    assert rep.ok and rep.total == 64 and rep.singular_eta == 16
    assert rep.summary() == "64/64 eta agree"


def test_diff_g2_over_f3():
    rep = diff_against_classifier("G2", None, 3)
    assert rep.ok and rep.summary() == "4/4 eta agree"
    assert set(rep.singular_counts.values()) == {1}


def test_diff_d4_over_f3():
    rep = diff_against_classifier("D", 4, 3)
    assert rep.ok


@pytest.mark.parametrize("a,b", [(2, -2), (2, -3), (0, 0)])
def test_diff_rank_two(a, b):
    assert diff_against_classifier("rank2", None, 2, a, b).ok


def test_diff_catches_a_wrong_report():
    # move the A3 prediction off the fiber; the true origin must surface as unpredicted
    from dataclasses import replace

    from clustersing.classifier import LocusComponent
    from clustersing.oracle import diff_one

    rep = classify("A", 3, pt(5, 2, 1, 3))
    reg = rep.presentation.registry
    wrong = LocusComponent("bad", tuple(reg.var(v) - 1 for v in reg.plain), 0, "A1", 1)
    found, _ = diff_one(replace(rep, components=(wrong,)))
    assert {d.side for d in found} == {"oracle"}


# -- transport between charts --------------------------------------------------


TRANSPORT_GRID = [
    ("A", 1, None, None, 3),
    ("A", 3, None, None, 5),
    ("B", 3, None, None, 3),
    ("B", 4, None, None, 2),
    ("C", 3, None, None, 3),
    ("C", 3, None, None, 2),
    ("G2", None, None, None, 3),
    ("F4", None, None, None, 2),
    ("rank2", None, 2, -2, 2),
    ("rank2", None, 0, 0, 3),
]


@pytest.mark.parametrize("kind,n,a,b,p", TRANSPORT_GRID)
def test_transport_is_bijective(kind, n, a, b, p):
    from clustersing.presentations import family_rank

    for q in coefficient_torus(family_rank(kind, n, a, b), p):
        rep = transport_check(kind, n, q, a, b)
        assert rep.ok, rep.eta


def test_transport_type_d_on_the_slice_where_the_reduction_holds():
    for q in coefficient_torus(4, 3):
        if q.eta[2] == q.eta[3]:
            assert transport_check("D", 4, q).ok


def test_transport_type_d_off_the_slice_disagrees():
    # the reduced D chart is only isomorphic to the BFZ fiber when c_{n-1} = c_n
    rep = transport_check("D", 4, pt(3, 1, 1, 1, 2))
    assert (rep.bfz_singular, rep.reduced_singular) == (2, 13)
    assert not rep.ok


def test_reduced_fiber_dimension_of_g2():
    assert reduced_presentation("G2").expected_fiber_dim == 2
