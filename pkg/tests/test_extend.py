import numpy as np
import pytest
from scipy.linalg import null_space

from numrad import (
    NormSpec,
    ScalarField,
    Space,
    Subspace,
    annihilator_basis,
    default_extension,
    hyperplane_projections,
    induced_space,
    linf_hyperplane_lambda,
    minimal_extension,
    minimal_projection,
    numerical_radius,
    paper_examples,
    restricted_op_norm,
    restricted_radius,
    seminorm_is_norm_check,
)
from numrad.errors import DegenerateInputError


def linf(n, field=ScalarField.REAL):
    return Space(n, field, NormSpec("max"))


def test_annihilator_dimensions():
    X = linf(3)
    V = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    fam = annihilator_basis(X, V)
    assert len(fam.basis) == 2
    # every basis operator kills V and maps into V
    for B in fam.basis:
        assert np.abs(B @ V.basis).max() <= 1e-12
        resid = B - V.basis @ np.linalg.lstsq(V.basis, B, rcond=None)[0]
        assert np.abs(resid).max() <= 1e-10


def test_annihilator_dim_four():
    X = linf(4)
    V = Subspace(null_space(np.array([[0.0, 1.0, 1.0, 1.0], [1.0, 0.0, 0.0, 0.0]])))
    fam = annihilator_basis(X, V)
    assert len(fam.basis) == (4 - 2) * 2


def test_annihilator_rejects_trivial():
    X = linf(3)
    with pytest.raises(Exception):
        annihilator_basis(X, Subspace(np.eye(3)))


def test_default_extension_restricts_to_a():
    X = linf(3)
    V = Subspace.from_kernel(np.array([1.0, -2.0, 1.0]))
    A = np.array([[1.0, 0.5], [0.0, -1.0]])
    A0 = default_extension(X, V, A)
    assert np.abs(A0 @ V.basis - V.basis @ A).max() <= 1e-12


def test_minimal_extension_independent_of_a0():
    X = linf(3)
    V = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    A = np.eye(2)
    base = minimal_extension(X, V, A, with_suba=False)
    # a different valid extension: add an annihilator correction to A0
    fam = annihilator_basis(X, V)
    A0 = default_extension(X, V, A) + 0.7 * fam.basis[0] - 0.3 * fam.basis[1]
    other = minimal_extension(X, V, A, A0=A0, with_suba=False)
    assert base.lambda_w == pytest.approx(other.lambda_w, abs=1e-9)


def test_extension_invariants():
    X = linf(3)
    rng = np.random.default_rng(0)
    for _ in range(10):
        M = rng.standard_normal((3, 2))
        V = Subspace(M)
        A = rng.standard_normal((2, 2))
        if restricted_radius(X, V, A) <= 1e-6:
            continue
        res = minimal_extension(X, V, A, with_suba=False)
        E = res.minimizer
        # E extends A and maps into V
        assert np.abs(E @ M - M @ A).max() <= 1e-7
        proj = M @ np.linalg.lstsq(M, E, rcond=None)[0]
        assert np.abs(E - proj).max() <= 1e-7
        # lambda_w equals the radius of the minimizer and dominates w(A)
        assert numerical_radius(X, E).value == pytest.approx(res.lambda_w, abs=1e-8)
        assert res.lambda_w >= restricted_radius(X, V, A) - 1e-8


def test_minimal_extension_rejects_degenerate():
    X = linf(3)
    V = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    with pytest.raises(DegenerateInputError):
        minimal_extension(X, V, np.zeros((2, 2)))


def test_minimal_projection_is_projection():
    X = linf(3)
    V = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    res = minimal_projection(X, V, with_suba=False)
    P = res.minimizer
    assert np.abs(P @ P - P).max() <= 1e-10
    assert res.lambda_w == pytest.approx(1.0, abs=1e-10)
    assert res.unique == "non_unique"


def test_induced_space_gauge():
    X = linf(3)
    V = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    ind = induced_space(X, V)
    assert ind.dim == 2
    from numrad import norm

    rng = np.random.default_rng(1)
    for _ in range(20):
        c = rng.standard_normal(2)
        assert norm(ind, c) == pytest.approx(norm(X, V.basis @ c), abs=1e-9)


def test_restricted_op_norm_identity():
    X = linf(3)
    V = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    assert restricted_op_norm(X, V, np.eye(2)) == pytest.approx(1.0, abs=1e-10)
    assert restricted_radius(X, V, np.eye(2)) == pytest.approx(1.0, abs=1e-10)


def test_hyperplane_lambda_values():
    assert linf_hyperplane_lambda(np.array([0.0, 1 / 3, 1 / 3, 1 / 3]), 4) == pytest.approx(4 / 3, abs=1e-12)
    assert linf_hyperplane_lambda(np.array([0.0, 0.25, 0.25, 0.25, 0.25]), 5) == pytest.approx(1.5, abs=1e-12)


def test_hyperplane_lambda_preconditions():
    with pytest.raises(ValueError):
        linf_hyperplane_lambda(np.array([0.0, 0.4, 0.6]), 3)  # f3 >= 1/2
    with pytest.raises(ValueError):
        linf_hyperplane_lambda(np.array([0.1, 0.45, 0.45]), 3)  # f1 != 0
    with pytest.raises(ValueError):
        linf_hyperplane_lambda(np.array([0.0, 0.3, 0.3]), 3)  # wrong normalization


def test_hyperplane_projections_are_projections():
    f = np.array([0.0, 1 / 3, 1 / 3, 1 / 3])
    P1, P2, lam = hyperplane_projections(f)
    for P in (P1, P2):
        assert np.abs(P @ P - P).max() <= 1e-12
        assert np.abs(f @ P).max() <= 1e-12  # range in ker f
    assert np.abs(P1 - P2).max() > 1e-9
    X = linf(4)
    assert numerical_radius(X, P1).value == pytest.approx(lam, abs=1e-12)
    assert numerical_radius(X, P2).value == pytest.approx(lam, abs=1e-12)


def test_seminorm_is_norm_on_z_id():
    X = linf(3)
    V = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    assert seminorm_is_norm_check(X, V, np.eye(2), trials=100, seed=3)


def test_seminorm_check_rejects_zero_a():
    X = linf(3)
    V = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    with pytest.raises(DegenerateInputError):
        seminorm_is_norm_check(X, V, np.zeros((2, 2)))


def test_paper_examples_all_pass():
    report = paper_examples()
    assert report["all_pass"]
    names = {e["name"] for e in report["entries"]}
    assert {"norm_one_hyperplane", "hyperplane_dim_4", "hyperplane_dim_5", "complex_projection"} <= names


def test_subspace_json_round_trip():
    V = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    V2 = Subspace.from_json(V.to_json(), ScalarField.REAL)
    # same span
    stacked = np.hstack([V.basis, V2.basis])
    assert np.linalg.matrix_rank(stacked, tol=1e-10) == 2
