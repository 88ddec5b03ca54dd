from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustersing.seeds import (
    ExtendedExchangeMatrix,
    LabeledSeed,
    NotSkewSymmetrizableError,
    SkewSymmetrizer,
    dynkin_matrix,
    dynkin_seed,
    find_skew_symmetrizer,
    involution_check,
    is_acyclic,
    mutate_matrix,
    mutate_seed,
    mutation_class_is_finite,
    rank_two_seed,
    trivial_seed,
    with_generic_coefficients,
    with_principal_coefficients,
)


@st.composite
def skew_symmetrizable(draw, max_n: int = 6, max_frozen: int = 3):
    """B = S * diag(d) with S skew-symmetric, so d certifies B; frozen rows are arbitrary."""
    n = draw(st.integers(1, max_n))
    d = [draw(st.integers(1, 3)) for _ in range(n)]
    S = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            s = draw(st.integers(-2, 2))
            S[i][j], S[j][i] = s, -s
    B = [[S[i][j] * d[j] for j in range(n)] for i in range(n)]
    frozen = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(draw(st.integers(0, max_frozen)))]
    return ExtendedExchangeMatrix.of(B + frozen), tuple(d)


def test_mutation_rule_on_a_small_example():
    # column 2 pivot: b_13 picks up sgn(b_12)[b_12 b_23]_+ = 1
    M = ExtendedExchangeMatrix.of([[0, 1, 0], [-1, 0, 1], [0, -1, 0], [1, 0, 0]])
    mu = mutate_matrix(M, 2)
    assert mu.as_lists() == [[0, -1, 1], [1, 0, -1], [-1, 1, 0], [1, 0, 0]]


def test_mutation_with_multiplicities():
    M = ExtendedExchangeMatrix.of([[0, 2], [-1, 0], [1, 0], [0, 1]])
    assert mutate_matrix(M, 1).as_lists() == [[0, -2], [1, 0], [-1, 2], [0, 1]]


def test_mutation_direction_range():
    M = ExtendedExchangeMatrix.of(dynkin_matrix("A", 2))
    with pytest.raises(IndexError):
        mutate_matrix(M, 3)


def test_rejects_non_skew_symmetrizable():
    with pytest.raises(NotSkewSymmetrizableError):
        ExtendedExchangeMatrix.of([[0, 1], [1, 0]])
    # consistent signs but cyclic ratios that no d can satisfy
    with pytest.raises(NotSkewSymmetrizableError):
        ExtendedExchangeMatrix.of([[0, 1, -1], [-2, 0, 1], [1, -1, 0]])


@settings(max_examples=200)
@given(skew_symmetrizable())
def test_involution_and_symmetrizer_preserved(data):
    M, d = data
    cert = SkewSymmetrizer(d)
    assert cert.certifies(M.principal_part)
    for k in range(1, M.n + 1):
        mu = mutate_matrix(M, k)
        assert mutate_matrix(mu, k) == M
        assert cert.certifies(mu.principal_part)


@given(skew_symmetrizable())
def test_found_symmetrizer_certifies(data):
    M, _ = data
    found = find_skew_symmetrizer(M)
    assert found is not None and found.certifies(M.principal_part)


@pytest.mark.parametrize(
    "kind,n,d",
    [("A", 4, None), ("B", 3, None), ("C", 4, None), ("D", 5, None), ("E", 8, None), ("F4", None, None), ("G2", None, None)],
)
def test_dynkin_seeds_are_acyclic_and_symmetrizable(kind, n, d):
    M = dynkin_matrix(kind, n)
    assert is_acyclic(M)
    assert find_skew_symmetrizer(M) is not None


def test_dynkin_symmetrizers():
    assert find_skew_symmetrizer(dynkin_matrix("B", 3)).d == (2, 2, 1)
    assert find_skew_symmetrizer(dynkin_matrix("C", 3)).d == (1, 1, 2)
    assert find_skew_symmetrizer(dynkin_matrix("G2")).d == (3, 1)


def test_dynkin_range_checks():
    with pytest.raises(ValueError):
        dynkin_matrix("E", 5)
    with pytest.raises(ValueError):
        dynkin_matrix("D", 3)
    with pytest.raises(ValueError):
        rank_two_seed(1, 1)


def test_cyclic_quiver_detected():
    assert not is_acyclic([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])


def test_mutate_seed_relation_and_names():
    s = with_principal_coefficients(dynkin_seed("A", 3))
    new, rel = mutate_seed(s, 2)
    assert new.vars[1] == "x2'"
    assert str(rel) == "-x1*c2 + x2*x2' - x3"
    assert involution_check(s, 2)


def test_seed_json_round_trip():
    s = with_generic_coefficients(dynkin_seed("B", 2))
    assert LabeledSeed.from_json(json.dumps(s.to_json())) == s


def test_mutable_variables_cannot_be_invertible():
    M = ExtendedExchangeMatrix.of([[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        LabeledSeed(M, ("x1", "x2"), (True, False))


# Class sizes with principal framing equal the number of clusters of the finite type.
@pytest.mark.parametrize(
    "kind,n,count",
    [("A", 2, 5), ("A", 3, 14), ("B", 3, 20), ("C", 3, 20), ("D", 4, 50), ("G2", None, 8), ("B", 2, 6)],
)
def test_mutation_class_counts_clusters(kind, n, count):
    res = mutation_class_is_finite(dynkin_seed(kind, n), budget=2000)
    assert res.finite and res.count == count


def test_affine_rank_two_exceeds_budget():
    res = mutation_class_is_finite(rank_two_seed(2, -2), budget=300)
    assert not res.finite and res.status == "exceeded"


def test_unframed_classes_are_small():
    res = mutation_class_is_finite(dynkin_seed("A", 3), framed=False)
    assert res.finite and res.count < 14


def test_trivial_seed_frozen_rows_are_not_inverted():
    s = trivial_seed([[0, 1], [-1, 0], [1, 1]])
    assert s.frozen == ("x3",) and s.invertible == (False, False, False)
