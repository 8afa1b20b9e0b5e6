"""Tests for the symmetric-pair constructions over the three coefficient
fields: dimension bookkeeping, involution behavior, axiom checks, and the
isotropy representation."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nullcone.linalg import RealSubspace, bracket, gram_signature
from nullcone.pairs import (
    Family,
    build_pair,
    check_symmetric_axioms,
    corrupt_pair,
    default_families,
    dimension_table,
    formula_dims,
    isotropy_matrix,
)

ALL_FIELDS = ("R", "C", "H")


def test_closed_formula_spot_values():
    # hand-checked rows, one per field
    dim_h, dim_m, sig = formula_dims(Family("R", 3, 2))
    assert (dim_h, dim_m, sig) == (10, 14, (8, 6))
    dim_h, dim_m, sig = formula_dims(Family("C", 1, 1))
    assert (dim_h, dim_m, sig) == (3, 3, (1, 2))
    dim_h, dim_m, sig = formula_dims(Family("H", 1, 1))
    assert (dim_h, dim_m, sig) == (10, 5, (1, 4))


def test_dimension_table_matches_formulas():
    rows = dimension_table(default_families(2, 6))
    assert len(rows) > 0
    seen = set()
    for row in rows:
        assert row.match, row
        assert (row.dim_h, row.dim_m, row.signature) == row.formula
        seen.add(row.family.field)
    assert seen == set(ALL_FIELDS)


def test_family_validation():
    with pytest.raises(ValueError):
        Family("X", 2, 1)
    with pytest.raises(ValueError):
        Family("C", 0, 1)
    with pytest.raises(ValueError):
        Family("C", 2, -1)


def test_special_variant_needs_balanced_low_rank():
    with pytest.raises(ValueError):
        build_pair(Family("C", 3, 1), "canonical-T")


@pytest.mark.parametrize("field", ALL_FIELDS)
def test_conjugation_preserves_the_split(field):
    pair = build_pair(Family(field, 2, 1))
    rng = np.random.default_rng(10)
    for _ in range(5):
        X = pair.h.random_element(rng)
        Y = pair.m.random_element(rng)
        # the negative conjugate transpose fixes both summands setwise
        assert pair.h.residual(pair.involution(X)) < 1e-10
        assert pair.m.residual(pair.involution(Y)) < 1e-10
        assert_allclose(pair.involution(pair.involution(X)), X, atol=1e-12)
        # automorphism property
        Z = pair.h.random_element(rng) + pair.m.random_element(rng)
        W = pair.h.random_element(rng) + pair.m.random_element(rng)
        assert_allclose(pair.involution(bracket(Z, W)),
                        bracket(pair.involution(Z), pair.involution(W)),
                        atol=1e-8)


@pytest.mark.parametrize("field", ALL_FIELDS)
@pytest.mark.parametrize("variant", ["standard", "canonical-T"])
def test_split_involution_eigenspaces(field, variant):
    # conjugating the negative conjugate transpose by the carrier form gives
    # the decomposition involution: +1 on h, -1 on m
    pair = build_pair(Family(field, 2, 1), variant)
    G = pair.carrier_form
    rng = np.random.default_rng(20)
    for _ in range(5):
        X = pair.h.random_element(rng)
        Y = pair.m.random_element(rng)
        assert_allclose(-G @ X.conj().T @ G, X, atol=1e-10)
        assert_allclose(-G @ Y.conj().T @ G, -Y, atol=1e-10)


@pytest.mark.parametrize("field", ALL_FIELDS)
def test_bracket_relations_between_h_and_m(field):
    pair = build_pair(Family(field, 2, 1))
    rng = np.random.default_rng(11)
    for _ in range(5):
        X1, X2 = pair.h.random_element(rng), pair.h.random_element(rng)
        Y1, Y2 = pair.m.random_element(rng), pair.m.random_element(rng)
        assert pair.h.residual(bracket(X1, X2)) < 1e-8
        assert pair.h.residual(bracket(Y1, Y2)) < 1e-8
        assert pair.m.residual(bracket(X1, Y1)) < 1e-8
        assert abs(np.trace(X1 + Y2)) < 1e-9


def test_form_negative_definite_on_compact_isotropy_part():
    # the +1 eigenspace of the carrier-form conjugation inside h is compact
    pair = build_pair(Family("C", 2, 1))
    F = pair.hermitian_matrix
    fixed = pair.h.kernel_of(lambda X: F @ X @ F - X)
    assert fixed is not None and fixed.dim == 4
    _, sig = gram_signature(pair.form, fixed)
    assert sig == (0, 4, 0)


@pytest.mark.parametrize("field", ALL_FIELDS)
@pytest.mark.parametrize("pq", [(2, 1), (1, 1), (2, 2)])
def test_axiom_report_standard(field, pq):
    pair = build_pair(Family(field, *pq))
    rep = check_symmetric_axioms(pair, rng=np.random.default_rng(12))
    assert rep.ok, rep.failures()


@pytest.mark.parametrize("field", ALL_FIELDS)
def test_axiom_report_special_variant(field):
    pair = build_pair(Family(field, 2, 1), "canonical-T")
    rep = check_symmetric_axioms(pair, rng=np.random.default_rng(13))
    assert rep.ok, rep.failures()


def test_corrupted_pair_fails_axioms():
    pair = corrupt_pair(build_pair(Family("C", 2, 1)))
    rep = check_symmetric_axioms(pair, rng=np.random.default_rng(14))
    assert rep.n_fail > 0


@pytest.mark.parametrize("field", ALL_FIELDS)
def test_isotropy_matrix_is_form_skew(field):
    pair = build_pair(Family(field, 2, 1))
    rng = np.random.default_rng(15)
    basis = pair.m.basis
    G = np.array([[pair.form(a, b) for b in basis] for a in basis])
    for _ in range(5):
        X = pair.h.random_element(rng)
        M = isotropy_matrix(pair, X)
        assert M.shape == (pair.m.dim, pair.m.dim)
        assert abs(np.trace(M)) < 1e-9
        assert_allclose(M.T @ G + G @ M, np.zeros_like(G), atol=1e-8)
        # the matrix really represents ad(X) in the chosen basis
        Y = pair.m.random_element(rng)
        assert_allclose(M @ pair.m.coords(Y), pair.m.coords(bracket(X, Y)),
                        atol=1e-8)


def test_isotropy_matrix_rejects_non_members():
    pair = build_pair(Family("C", 2, 1))
    Y = pair.m.random_element(np.random.default_rng(16))
    with pytest.raises(ValueError):
        isotropy_matrix(pair, Y)
