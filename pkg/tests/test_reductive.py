"""Tests for reductive complements, torsion, canonical curvature, Ricci
contractions, Casimir operators, and metric comparison checks."""

import dataclasses

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nullcone.casestudies import b_diag, sp21_build, su21_build, v_minus, v_plus
from nullcone.casestudies import hatn_isometry_map
from nullcone.linalg import RealSubspace, bracket
from nullcone.pairs import Family, build_pair
from nullcone.reductive import (
    ReductiveSplit,
    bianchi_residual,
    canonical_curvature,
    casimir,
    einstein_fit,
    homothety_check,
    metric_gram,
    reductive_split,
    ricci_canonical,
    ricci_levi_civita,
    torsion,
    torsion_derivation_check,
    torsion_eval,
    wang_ziller_check,
)


@pytest.fixture(scope="module")
def su21():
    return su21_build()


@pytest.fixture(scope="module")
def sp21():
    return sp21_build()


@pytest.fixture(scope="module")
def torsion_free_split():
    # compact Cartan line inside the rank-one complex pair: its orthogonal
    # complement brackets back into the line, so the torsion vanishes
    pair = build_pair(Family("C", 1, 1))
    return reductive_split(pair, RealSubspace([np.diag([1j, -1j])]))


@pytest.fixture(scope="module")
def abelian_split():
    # synthetic split on commuting diagonal matrices: flat by construction
    pair = build_pair(Family("R", 2, 1))
    e1 = np.diag([1.0, -1.0, 0.0]).astype(complex) / np.sqrt(2.0)
    e2 = np.diag([1.0, 1.0, -2.0]).astype(complex) / np.sqrt(6.0)
    return ReductiveSplit(pair=pair, b=None, n=RealSubspace([e1, e2]),
                          e_basis=[e1, e2], eps=np.array([1.0, 1.0]),
                          form=pair.form)


def test_split_dimensions(su21, sp21):
    assert (su21.split.dim_b, su21.split.dim_n) == (2, 6)
    assert (sp21.split.dim_b, sp21.split.dim_n) == (9, 12)
    assert list(su21.split.eps[:3]) == [1.0, 1.0, 1.0]
    assert list(su21.split.eps[3:]) == [-1.0, -1.0, -1.0]
    assert sorted(sp21.split.eps) == [-1.0] * 7 + [1.0] * 5


def test_metric_gram_is_signed_identity(su21, sp21):
    for split in (su21.split, sp21.split):
        assert_allclose(metric_gram(split), np.diag(split.eps), atol=1e-9)


def test_trivial_complement_of_empty_b():
    # a trivial stabilizer leaves the whole isotropy algebra as complement
    pair = build_pair(Family("R", 2, 1))
    split = reductive_split(pair, None)
    assert split.dim_b == 0
    assert split.dim_n == pair.h.dim
    assert_allclose(casimir(split), np.zeros((split.dim_n, split.dim_n)),
                    atol=1e-12)
    lam, res = einstein_fit(split)
    assert lam == pytest.approx(0.25, abs=1e-9)
    assert res < 1e-9
    flag, const = wang_ziller_check(split)
    assert flag and const == pytest.approx(0.0, abs=1e-9)


def test_degenerate_b_is_rejected():
    d = su21_build()
    with pytest.raises(ValueError, match="degenerate"):
        reductive_split(d.pair, RealSubspace([v_plus(1.0, 0.0)]))


def test_torsion_free_example(torsion_free_split):
    split = torsion_free_split
    assert (split.dim_b, split.dim_n) == (1, 2)
    assert np.abs(torsion(split).components).max() < 1e-12
    # with zero torsion both Ricci contractions agree
    assert_allclose(ricci_canonical(split), ricci_levi_civita(split),
                    atol=1e-10)


def test_abelian_split_is_flat(abelian_split):
    split = abelian_split
    assert np.abs(torsion(split).components).max() == 0.0
    assert np.abs(ricci_canonical(split)).max() == 0.0
    rng = np.random.default_rng(0)
    u = split.n.random_element(rng)
    v = split.n.random_element(rng)
    assert np.abs(canonical_curvature(split, u, v)).max() == 0.0
    lam, res = einstein_fit(split)
    assert lam == 0.0 and res == 0.0


def test_torsion_antisymmetry_and_total_skew(su21, sp21):
    rng = np.random.default_rng(1)
    for data in (su21, sp21):
        split = data.split
        for _ in range(10):
            u = split.n.random_element(rng)
            v = split.n.random_element(rng)
            w = split.n.random_element(rng)
            Tuv = torsion_eval(split, u, v)
            assert np.abs(Tuv + torsion_eval(split, v, u)).max() < 1e-9
            # the trilinear form K(T(u,v), w) is alternating
            a = split.form(Tuv, w)
            b = split.form(torsion_eval(split, v, w), u)
            c = split.form(torsion_eval(split, u, w), v)
            assert abs(a - b) < 1e-8
            assert abs(a + c) < 1e-8


def test_torsion_vanishes_on_mixed_null_halves(su21):
    rng = np.random.default_rng(2)
    for _ in range(10):
        xp = v_plus(rng.standard_normal() + 1j * rng.standard_normal(),
                    rng.standard_normal())
        xm = v_minus(rng.standard_normal() + 1j * rng.standard_normal(),
                     rng.standard_normal())
        assert np.abs(torsion_eval(su21.split, xp, xm)).max() < 1e-12


def test_curvature_basic_identities(su21):
    from nullcone.reductive import curvature_eval

    split = su21.split
    rng = np.random.default_rng(3)
    for _ in range(5):
        u = split.n.random_element(rng)
        v = split.n.random_element(rng)
        w = split.n.random_element(rng)
        z = split.n.random_element(rng)
        assert np.abs(canonical_curvature(split, u, u)).max() < 1e-12
        # the curvature operator is skew relative to the metric
        lhs = split.form(curvature_eval(split, u, v, w), z)
        rhs = split.form(curvature_eval(split, u, v, z), w)
        assert abs(lhs + rhs) < 1e-8


def test_bianchi_residual_is_reported_not_asserted(su21):
    split = su21.split
    rng = np.random.default_rng(4)
    vals = []
    for _ in range(5):
        u = split.n.random_element(rng)
        v = split.n.random_element(rng)
        w = split.n.random_element(rng)
        r = bianchi_residual(split, u, v, w)
        assert np.isfinite(r)
        vals.append(r)
    assert max(vals) >= 0.0


def test_einstein_constants(su21, sp21):
    lam, res = einstein_fit(su21.split)
    assert lam == pytest.approx(2.5, abs=1e-9)
    assert res < 1e-9
    lam, res = einstein_fit(sp21.split)
    assert lam == pytest.approx(7.0, abs=1e-9)
    assert res < 1e-9


def test_ricci_symmetry_and_invariance(su21, sp21):
    R0 = ricci_canonical(su21.split)
    assert_allclose(R0, R0.T, atol=1e-9)
    # invariance under the stabilizer action on the complement
    split = sp21.split
    R0 = ricci_canonical(split)
    for X in sp21.b_basis[:3]:
        A = np.column_stack([split.n_coords(split.proj_n(bracket(X, e)))
                             for e in split.e_basis])
        assert np.abs(A.T @ R0 + R0 @ A).max() < 1e-8


def test_casimir_multiples(su21, sp21):
    assert_allclose(casimir(su21.split), 2.0 * np.eye(6), atol=1e-8)
    assert_allclose(casimir(sp21.split), 6.0 * np.eye(12), atol=1e-8)


def test_wang_ziller_verdicts(su21, sp21):
    flag, const = wang_ziller_check(su21.split)
    assert flag and const == pytest.approx(2.0, abs=1e-8)
    flag, const = wang_ziller_check(sp21.split)
    assert flag and const == pytest.approx(6.0, abs=1e-8)


def test_wang_ziller_detects_missing_direction(su21):
    # dropping one stabilizer direction breaks the multiple-of-identity
    split = reductive_split(su21.pair, RealSubspace([b_diag(1.0, 0.0)]))
    flag, _ = wang_ziller_check(split)
    assert not flag


def test_derivation_check_passes_on_case_studies(su21, sp21):
    assert torsion_derivation_check(su21.split).ok
    assert torsion_derivation_check(sp21.split).ok


def test_derivation_check_fails_on_perturbed_stabilizer(su21):
    bad_b = RealSubspace([su21.b_basis[0],
                          su21.b_basis[1] + 0.05 * su21.n_basis[0]])
    bad = dataclasses.replace(su21.split, b=bad_b)
    assert torsion_derivation_check(bad).n_fail > 0


def test_homothety_checks(su21, sp21):
    flag, note = homothety_check(su21.split, su21.S, su21.S_hat)
    assert flag, note
    flag, note = homothety_check(sp21.split, sp21.S, sp21.S_hat,
                                 isometry=hatn_isometry_map)
    assert flag, note
    assert "rank 12" in note
