import numpy as np
import pytest

from numrad import (
    CapabilityError,
    DualityPair,
    NormSpec,
    ScalarField,
    Space,
    dual_norm,
    extreme_pairs,
    norm,
    peak_functional,
    q_pairs,
    radius_pairs,
    signed_closure,
)
from numrad.spaces import PairSet, array_from_json, polar_vertices


def linf(n, field=ScalarField.REAL):
    return Space(n, field, NormSpec("max"))


def l1(n, field=ScalarField.REAL):
    return Space(n, field, NormSpec("sum"))


def l2(n, field=ScalarField.REAL):
    return Space(n, field, NormSpec("euclid"))


def diamond_square():
    # unit ball = convex hull of the square and diamond corners
    verts = np.array(
        [[1, 0], [0, 1], [-1, 0], [0, -1], [0.8, 0.8], [-0.8, 0.8], [0.8, -0.8], [-0.8, -0.8]],
        dtype=float,
    )
    return Space(2, ScalarField.REAL, NormSpec("polytope", verts))


def test_norm_values():
    assert norm(l2(2), [3.0, 4.0]) == pytest.approx(5.0, abs=1e-14)
    assert norm(linf(3), [1.0, -2.0, 0.5]) == pytest.approx(2.0, abs=1e-14)
    assert norm(l1(3), [1.0, -2.0, 0.5]) == pytest.approx(3.5, abs=1e-14)
    assert norm(linf(2, ScalarField.COMPLEX), [3 + 4j, 1.0]) == pytest.approx(5.0, abs=1e-14)


def test_dual_norm_pairs_up():
    rng = np.random.default_rng(0)
    for sp in (linf(3), l1(3), l2(3), diamond_square()):
        for _ in range(20):
            x = rng.standard_normal(sp.dim)
            f = rng.standard_normal(sp.dim)
            assert abs(f @ x) <= norm(sp, x) * dual_norm(sp, f) + 1e-9


def test_peak_functional_norms_one():
    assert np.allclose(peak_functional(l2(2), [0.0, 2.0]), [0.0, 1.0])
    rng = np.random.default_rng(1)
    for sp in (linf(3), l1(3), l2(3), diamond_square()):
        for _ in range(25):
            x = rng.standard_normal(sp.dim)
            f = peak_functional(sp, x)
            assert f @ x == pytest.approx(norm(sp, x), abs=1e-9)
            assert dual_norm(sp, f) == pytest.approx(1.0, abs=1e-9)


def test_polytope_validation():
    with pytest.raises(ValueError):
        # not symmetric
        Space(2, ScalarField.REAL, NormSpec("polytope", np.array([[1.0, 0.0], [0.0, 1.0]])))
    with pytest.raises(ValueError):
        # does not span
        Space(2, ScalarField.REAL, NormSpec("polytope", np.array([[1.0, 0.0], [-1.0, 0.0]])))
    with pytest.raises(ValueError):
        # interior point listed as a vertex
        Space(
            2,
            ScalarField.REAL,
            NormSpec(
                "polytope",
                np.array([[1, 0], [0, 1], [-1, 0], [0, -1], [0.1, 0.1], [-0.1, -0.1]], dtype=float),
            ),
        )
    with pytest.raises(CapabilityError):
        Space(2, ScalarField.COMPLEX, NormSpec("polytope", np.array([[1.0, 0], [0, 1], [-1, 0], [0, -1]])))


def test_polar_of_cube_is_cross_polytope():
    cube = np.array([[sx, sy] for sx in (-1, 1) for sy in (-1, 1)], dtype=float)
    polar = polar_vertices(cube)
    expect = {(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)}
    got = {tuple(np.round(v, 9)) for v in polar}
    assert got == expect


def test_extreme_pairs_real_linf():
    pairs = extreme_pairs(linf(2))
    # 4 sign functionals x 2 matching cube corners each
    assert len(pairs) == 8
    for p in pairs:
        assert abs(p.xstar @ p.x - 1.0) <= 1e-12
        assert norm(linf(2), p.x) == pytest.approx(1.0, abs=1e-12)
        assert dual_norm(linf(2), p.xstar) == pytest.approx(1.0, abs=1e-12)


def test_extreme_pairs_complex_grid_contains_paper_pairs():
    pairs = extreme_pairs(linf(3, ScalarField.COMPLEX), phase_resolution=4)
    keys = {p.key() for p in pairs}
    e1 = np.array([1, 0, 0], dtype=complex)
    x1 = np.array([1, -1, -1], dtype=complex)
    assert DualityPair(e1, x1, 1.0 + 0j).key() in keys


def test_signed_closure_idempotent():
    for sp in (linf(2), linf(2, ScalarField.COMPLEX)):
        W = PairSet(extreme_pairs(sp), sp.field, closed=False)
        C1 = signed_closure(W)
        C2 = signed_closure(C1)
        assert C1.closed and C2.closed
        assert [p.key() for p in C1] == [p.key() for p in C2]


def test_real_closure_contains_negated_functionals():
    W = radius_pairs(linf(2))
    keys = {p.key() for p in W}
    for p in W.pairs:
        assert DualityPair(-p.xstar, p.x, -p.pairing).key() in keys


def test_q_pairs_euclid_angle():
    q = 0.5
    W = q_pairs(l2(2), q, 8)
    for p in W.pairs:
        assert p.xstar @ p.x == pytest.approx(q, abs=1e-12)
        # angle between x* and x is arccos(q) = pi/3
        cosang = (p.xstar @ p.x) / (np.linalg.norm(p.xstar) * np.linalg.norm(p.x))
        assert np.arccos(np.clip(cosang, -1, 1)) == pytest.approx(np.pi / 3, abs=1e-9)


def test_q_pairs_polytope_unsupported():
    with pytest.raises(CapabilityError):
        q_pairs(diamond_square(), 0.5, 8)


def test_space_json_round_trip():
    for sp in (linf(3), l1(2), l2(4), diamond_square(), linf(2, ScalarField.COMPLEX)):
        sp2 = Space.from_json(sp.to_json())
        assert sp2.dim == sp.dim and sp2.field == sp.field and sp2.norm.kind == sp.norm.kind


def test_array_from_json_complex_pairs():
    v = array_from_json([[1.0, 2.0], [0.0, -1.0]], ScalarField.COMPLEX)
    assert np.allclose(v, [1 + 2j, -1j])
    M = array_from_json([[1.0, 0.0], [0.0, 1.0]], ScalarField.REAL)
    assert M.shape == (2, 2)
