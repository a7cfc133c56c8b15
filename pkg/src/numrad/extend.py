"""Minimal numerical-radius extensions and projections.

Given a subspace V of X and an operator A on V, the minimal extension
problem asks for the extension of A to X (with range in V) of least
numerical radius.  It reduces to a best-approximation problem over the
space of operators X -> V vanishing on V.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection

from .errors import CapabilityError, DegenerateInputError, DimensionMismatchError
from .approx import ApproxProblem, ApproxResult, OperatorSubspace, solve
from .certify import Certificate, SubaReport, best_approx_certificate, caratheodory_reduce, suba_constant
from .radius import numerical_radius, operator_norm, seminorm
from .spaces import (
    DEFAULT_PHASE_RESOLUTION,
    NormSpec,
    PairSet,
    ScalarField,
    Space,
    _dedup_rows,
    norm as space_norm,
    peak_functional,
    radius_pairs,
)


@dataclass
class Subspace:
    """A subspace of a Space, stored as a basis matrix (columns)."""

    basis: np.ndarray  # shape (n, d)

    def __post_init__(self):
        self.basis = np.atleast_2d(np.asarray(self.basis))
        if self.basis.ndim != 2:
            raise DimensionMismatchError("subspace basis must be a matrix")
        if np.linalg.matrix_rank(self.basis, tol=1e-10) < self.basis.shape[1]:
            raise ValueError("subspace basis is linearly dependent")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_kernel(cls, f: np.ndarray) -> "Subspace":
        f = np.atleast_2d(np.asarray(f))
        return cls(null_space_bilinear(f))

    @classmethod
    def from_json(cls, data: dict, field: ScalarField) -> "Subspace":
        from .spaces import array_from_json

        if "kernel_of" in data:
            return cls.from_kernel(array_from_json(data["kernel_of"], field))
        cols = [array_from_json(c, field) for c in data["basis"]]
        return cls(np.array(cols).T)

    def to_json(self) -> dict:
        from .spaces import _array_to_json

        return {"basis": [_array_to_json(col) for col in self.basis.T]}


@dataclass
class ExtensionResult:
    minimizer: np.ndarray  # n x n extension with range in V
    lambda_w: float
    op_norm_A: float
    unique: str
    suba: SubaReport | None
    certificate: Certificate | None
    approx: ApproxResult

    def to_json(self) -> dict:
        from .spaces import _array_to_json

        return {
            "minimizer": [_array_to_json(row) for row in self.minimizer],
            "lambda_w": self.lambda_w,
            "op_norm_A": self.op_norm_A,
            "unique": self.unique,
            "suba": None if self.suba is None else self.suba.to_json(),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


def null_space_bilinear(rows: np.ndarray) -> np.ndarray:
    """Null space of a stacked-functional matrix under the bilinear pairing."""
    return null_space(np.atleast_2d(rows))


def annihilator_basis(X: Space, V: Subspace) -> OperatorSubspace:
    """Basis of operators X -> V vanishing on V: outer products of a V basis
    with a basis of the annihilator of V."""
    M = V.basis
    n, d = M.shape
    if d == 0 or d >= n:
        raise DegenerateInputError("V must be a proper nontrivial subspace")
    funcs = null_space(M.T)  # columns f with f . v = 0 for v in V
    ops = []
    for j in range(funcs.shape[1]):
        for i in range(d):
            op = np.outer(M[:, i], funcs[:, j])
            # a complex scalar field doubles the real span via i*B
            ops.append(op.astype(X.field.dtype))
    return OperatorSubspace(ops)


def default_extension(X: Space, V: Subspace, A: np.ndarray) -> np.ndarray:
    """Extend A (in V coordinates) by zero on the pseudoinverse complement."""
    M = V.basis
    A = np.asarray(A, dtype=M.dtype if np.iscomplexobj(M) else X.field.dtype)
    if A.shape != (V.dim, V.dim):
        raise DimensionMismatchError("A must act on V's coordinates")
    return M @ A @ np.linalg.pinv(M)


def restriction_coordinates(V: Subspace, T: np.ndarray) -> np.ndarray:
    """T|_V expressed in V coordinates (requires range(T|_V) in V)."""
    M = V.basis
    TV = np.asarray(T) @ M
    coords, res, _, _ = np.linalg.lstsq(M, TV, rcond=None)
    if np.abs(M @ coords - TV).max() > 1e-8:
        raise DegenerateInputError("operator does not map V into V")
    return coords


def induced_space(X: Space, V: Subspace) -> Space:
    """(V, inherited norm) as a concrete space in V coordinates.

    Real polyhedral norms produce an explicit polytope ball via halfspace
    intersection; real Euclidean norms stay Euclidean after an orthogonal
    change of coordinates is folded into the vertices... (polytope only).
    """
    if not X.is_polyhedral():
        raise CapabilityError("induced space requires a real polyhedral norm")
    M = V.basis
    d = M.shape[1]
    D = X.dual_vertices()
    halfspaces = D @ M  # rows f: f.c <= 1
    keep = np.abs(halfspaces).max(axis=1) > 1e-12
    halfspaces = halfspaces[keep]
    if d == 1:
        a = np.abs(halfspaces).max()
        verts = np.array([[1.0 / a], [-1.0 / a]])
    else:
        hs = np.hstack([halfspaces, -np.ones((len(halfspaces), 1))])
        inter = HalfspaceIntersection(hs, np.zeros(d))
        verts = _dedup_rows(inter.intersections)
    return Space(d, ScalarField.REAL, NormSpec("polytope", verts))


def restricted_radius(X: Space, V: Subspace, A: np.ndarray, samples: int = 4096) -> float:
    """Numerical radius of A on (V, inherited norm).

    Exact for real polyhedral and Euclidean norms; a sampled lower estimate
    otherwise (sufficient for the positivity hypothesis check).
    """
    A = np.asarray(A)
    if X.is_polyhedral():
        return numerical_radius(induced_space(X, V), A.real).value
    M = V.basis
    if X.norm.kind == "euclid" and X.field is ScalarField.REAL:
        G = M.T @ M
        L = np.linalg.cholesky(G)
        At = L.T @ A @ np.linalg.inv(L.T)
        H = (At + At.T) / 2.0
        return float(np.abs(np.linalg.eigvalsh(H)).max())
    return _sampled_restricted_radius(X, V, A, samples)


def restricted_op_norm(X: Space, V: Subspace, A: np.ndarray, samples: int = 4096) -> float:
    """Operator norm of A on (V, inherited norm); sampled if not exact."""
    A = np.asarray(A)
    M = V.basis
    if X.is_polyhedral():
        ind = induced_space(X, V)
        return operator_norm(ind, A.real)
    if X.norm.kind == "euclid" and X.field is ScalarField.REAL:
        G = M.T @ M
        L = np.linalg.cholesky(G)
        return float(np.linalg.norm(L.T @ A @ np.linalg.inv(L.T), 2))
    rng = np.random.default_rng(11)
    best = 0.0
    for _ in range(samples):
        c = rng.standard_normal(V.dim)
        if np.iscomplexobj(M) or X.field is ScalarField.COMPLEX:
            c = c + 1j * rng.standard_normal(V.dim)
        v = M @ c
        nv = space_norm(X, v)
        if nv <= 1e-12:
            continue
        best = max(best, space_norm(X, M @ (A @ c)) / nv)
    return best


def _sampled_restricted_radius(X: Space, V: Subspace, A: np.ndarray, samples: int) -> float:
    """Lower estimate of sup |v*(Av)| over normalized pairs of (V, norm|V)."""
    rng = np.random.default_rng(13)
    M = V.basis
    best = 0.0
    for _ in range(samples):
        c = rng.standard_normal(V.dim)
        if X.field is ScalarField.COMPLEX:
            c = c + 1j * rng.standard_normal(V.dim)
        v = M @ c
        nv = space_norm(X, v)
        if nv <= 1e-12:
            continue
        v = v / nv
        c = c / nv
        # peak functional of v in X restricts to a norming functional on V
        try:
            xstar = peak_functional(X, v)
        except Exception:
            continue
        best = max(best, abs(complex(xstar @ (M @ (A @ c)))))
    return best


def minimal_extension(
    X: Space,
    V: Subspace,
    A: np.ndarray,
    A0: np.ndarray | None = None,
    phase_resolution: int = DEFAULT_PHASE_RESOLUTION,
    with_suba: bool = True,
    cert_tol: float = 1e-6,
) -> ExtensionResult:
    """Extension of A from V to X with minimal numerical radius.

    Solves the best-approximation problem of A0 from the operators
    vanishing on V; the result does not depend on the chosen A0.  The
    certificate tolerance sits above the LP feasibility noise of the
    solver so the attached certificate is decisive on exact pair sets.
    """
    A = np.asarray(A, dtype=X.field.dtype)
    if restricted_radius(X, V, A) <= 1e-10:
        raise DegenerateInputError("A has zero numerical radius on V")
    if A0 is None:
        A0 = default_extension(X, V, A)
    else:
        A0 = np.asarray(A0, dtype=X.field.dtype)
        if np.abs(A0 @ V.basis - V.basis @ A).max() > 1e-8:
            raise DegenerateInputError("A0 does not extend A")
    family = annihilator_basis(X, V)
    pairs = radius_pairs(X, phase_resolution)
    problem = ApproxProblem(X, A0, family, pairs)
    res = solve(problem)
    extension = A0 - res.minimizer
    op_norm_A = restricted_op_norm(X, V, A)
    cert = None
    suba = None
    if with_suba:
        cert = best_approx_certificate(X, A0, res.minimizer, family, pairs, cert_tol)
        if cert.verdict == "optimal":
            cert = caratheodory_reduce(cert, family.real_dim)
            suba = suba_constant(X, A0, res.minimizer, family, pairs, cert_tol)
    return ExtensionResult(
        minimizer=extension,
        lambda_w=res.value,
        op_norm_A=op_norm_A,
        unique=res.unique,
        suba=suba,
        certificate=cert,
        approx=res,
    )


def minimal_projection(
    X: Space,
    V: Subspace,
    phase_resolution: int = DEFAULT_PHASE_RESOLUTION,
    with_suba: bool = True,
) -> ExtensionResult:
    """Minimal-radius projection onto V (minimal extension of the identity)."""
    d = V.dim
    eye = np.eye(d, dtype=X.field.dtype)
    result = minimal_extension(X, V, eye, phase_resolution=phase_resolution, with_suba=with_suba)
    P = result.minimizer
    if np.abs(P @ P - P).max() > 1e-8:
        raise DegenerateInputError("minimal extension of the identity is not idempotent")
    return result


def linf_hyperplane_lambda(f: np.ndarray, n: int) -> float:
    """Closed-form relative projection constant for ker(f) in the max-norm
    space, f = (0, f_2, ..., f_n) with positive entries summing to one and
    each below 1/2.  Equals the minimal numerical-radius projection value."""
    f = np.asarray(f, dtype=float)
    if f.shape != (n,):
        raise DimensionMismatchError("f length mismatch")
    if abs(f[0]) > 1e-14:
        raise ValueError("first coordinate of f must vanish")
    tail = f[1:]
    if np.any(tail <= 0):
        raise ValueError("f_i must be positive for i >= 2")
    if abs(tail.sum() - 1.0) > 1e-12:
        raise ValueError("tail of f must sum to one")
    if np.any(tail >= 0.5):
        raise ValueError("each f_i must be below 1/2")
    return 1.0 + 1.0 / float((tail / (1.0 - 2.0 * tail)).sum())


def hyperplane_projections(f: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """The two distinct minimal projections onto ker(f) in the max norm.

    The first uses y with y_1 = lambda - 1 (the i >= 2 formula continued to
    f_1 = 0), the second zeroes that coordinate.  The quotient form of y_i
    is forced by f(y) = 1, which any projection onto ker(f) must satisfy.
    """
    f = np.asarray(f, dtype=float)
    n = len(f)
    lam = linf_hyperplane_lambda(f, n)
    y = (lam - 1.0) / (1.0 - 2.0 * f)
    z = y.copy()
    z[0] = 0.0
    P1 = np.eye(n) - np.outer(y, f)
    P2 = np.eye(n) - np.outer(z, f)
    return P1, P2, lam


def seminorm_is_norm_check(
    X: Space,
    V: Subspace,
    A: np.ndarray,
    A0: np.ndarray | None = None,
    trials: int = 200,
    seed: int = 0,
) -> bool:
    """Check that the radius seminorm is a norm on span[A0] + {L: L|_V = 0}.

    Samples the subspace and verifies every nonzero sample has positive
    seminorm; for polyhedral norms the two constructive witnesses (the
    Hahn-Banach pair for components along A0 and the shifted-best-
    approximation vector for pure annihilator elements) are run as well.
    """
    A = np.asarray(A, dtype=X.field.dtype)
    if restricted_radius(X, V, A) <= 1e-10:
        raise DegenerateInputError("A has zero numerical radius on V")
    if A0 is None:
        A0 = default_extension(X, V, A)
    family = annihilator_basis(X, V)
    pairs = radius_pairs(X)
    rng = np.random.default_rng(seed)
    m = family.real_dim
    floor = 10 * np.finfo(float).eps
    for _ in range(trials):
        coeffs = rng.standard_normal(m + 1)
        coeffs /= np.linalg.norm(coeffs)
        L = coeffs[0] * A0 + family.element(coeffs[1:])
        if seminorm(L, pairs) <= floor:
            return False
    if X.is_polyhedral():
        if not _alpha_witness(X, V, A, A0, pairs):
            return False
        if not _annihilator_witness(X, V, family, pairs, rng):
            return False
    return True


def _alpha_witness(X: Space, V: Subspace, A, A0, pairs: PairSet) -> bool:
    """Hahn-Banach witness: a pair of X restricting to a norming pair of V."""
    ind = induced_space(X, V)
    rep = numerical_radius(ind, np.asarray(A).real)
    if not rep.active:
        return False
    p = rep.active[0]
    M = V.basis
    v = M @ p.x
    xstar = _min_dual_norm_extension(X, M, p.xstar)
    if xstar is None:
        return False
    val = abs(complex(xstar @ (A0 @ v)))
    return val > 1e-10


def _min_dual_norm_extension(X: Space, M: np.ndarray, vstar: np.ndarray) -> np.ndarray | None:
    """Extend a functional on V to X without increasing the dual norm (LP)."""
    n = X.dim
    if X.norm.kind == "max":
        # dual norm is l1: min sum u, -u <= x* <= u, M^T x* = vstar
        A_eq = np.hstack([M.T, np.zeros((M.shape[1], n))])
        A_ub = np.vstack(
            [np.hstack([np.eye(n), -np.eye(n)]), np.hstack([-np.eye(n), -np.eye(n)])]
        )
        res = linprog(
            c=np.concatenate([np.zeros(n), np.ones(n)]),
            A_eq=A_eq,
            b_eq=np.asarray(vstar, dtype=float),
            A_ub=A_ub,
            b_ub=np.zeros(2 * n),
            bounds=[(None, None)] * n + [(0, None)] * n,
            method="highs",
        )
        return res.x[:n] if res.status == 0 else None
    # generic polyhedral: dual ball = conv(D); find convex combination of
    # dual vertices restricting to vstar
    D = X.dual_vertices()
    k = len(D)
    A_eq = np.vstack([(D @ M).T, np.ones(k)])
    b_eq = np.append(np.asarray(vstar, dtype=float), 1.0)
    res = linprog(
        c=np.zeros(k), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * k, method="highs"
    )
    return res.x @ D if res.status == 0 else None


def _annihilator_witness(X: Space, V: Subspace, family: OperatorSubspace, pairs: PairSet, rng) -> bool:
    """Shifted-vector witness for a random pure annihilator element."""
    m = family.real_dim
    coeffs = rng.standard_normal(m)
    L = family.element(coeffs).real
    M = V.basis
    funcs = null_space(M.T)
    # decompose L = sum_j outer(v'_j, f_j)
    vprimes = [L @ _dual_rep(funcs, j) for j in range(funcs.shape[1])]
    lead = None
    for j, vp in enumerate(vprimes):
        if np.linalg.norm(vp) > 1e-9:
            lead = (j, vp)
            break
    if lead is None:
        return True  # zero element; nothing to witness
    j0, v1 = lead
    others = [funcs[:, j] for j in range(funcs.shape[1]) if j != j0]
    x2_basis = null_space(np.array(others)) if others else np.eye(X.dim)
    f1 = funcs[:, j0]
    # x0 in X2 with f1(x0) != 0
    x0 = None
    for col in x2_basis.T:
        if abs(f1 @ col) > 1e-9:
            x0 = col
            break
    if x0 is None:
        return False
    lo, hi = _best_approx_interval(X, x0, v1)
    shift = (lo + hi) / 2.0 + (hi - lo) / 2.0 + 0.5 * max(1.0, abs(hi))
    x = x0 - shift * v1
    x = x / space_norm(X, x)
    xstar = peak_functional(X, x)
    return abs(complex(xstar @ (L @ x))) > 1e-10


def _dual_rep(funcs: np.ndarray, j: int) -> np.ndarray:
    """Vector paired 1 with funcs[:, j] and 0 with the others."""
    sol, *_ = np.linalg.lstsq(funcs.T, np.eye(funcs.shape[1])[j], rcond=None)
    return sol


def _best_approx_interval(X: Space, x0: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    """Interval of minimizers of t -> ||x0 - t v|| (polyhedral norms, LP)."""
    D = X.dual_vertices()
    # min s subject to D (x0 - t v) <= s
    res = linprog(
        c=np.array([0.0, 1.0]),
        A_ub=np.column_stack([-(D @ v), -np.ones(len(D))]),
        b_ub=-(D @ x0),
        bounds=[(None, None), (None, None)],
        method="highs",
    )
    if res.status != 0:
        raise DegenerateInputError("best-approximation LP failed")
    s = res.x[1] + 1e-10
    ends = []
    for sign in (1.0, -1.0):
        r2 = linprog(
            c=np.array([sign, 0.0]),
            A_ub=np.column_stack([-(D @ v), -np.ones(len(D))]),
            b_ub=-(D @ x0),
            bounds=[(None, None), (None, s)],
            method="highs",
        )
        ends.append(r2.x[0] if r2.status == 0 else res.x[0])
    return min(ends), max(ends)


def paper_examples(phase_resolution: int = DEFAULT_PHASE_RESOLUTION) -> dict:
    """End-to-end reproduction of the three counterexample constructions.

    Returns a structured report; every entry carries expected and computed
    values plus a pass flag.
    """
    entries = []

    # norm-one, non-unique minimal projection (3-dim max norm)
    X3 = Space(3, ScalarField.REAL, NormSpec("max"))
    V35 = Subspace.from_kernel(np.array([1.0, 1.0, 0.0]))
    res35 = minimal_projection(X3, V35, with_suba=False)
    P1 = np.eye(3) - np.outer(np.array([1.0, 0.0, 0.0]), np.array([1.0, 1.0, 0.0]))
    P2 = np.eye(3) - np.outer(np.array([0.0, 1.0, 0.0]), np.array([1.0, 1.0, 0.0]))
    w1 = numerical_radius(X3, P1).value
    w2 = numerical_radius(X3, P2).value
    entries.append(
        {
            "name": "norm_one_hyperplane",
            "expected": {"value": 1.0, "distinct_minimizers": 2, "w_P1": 1.0, "w_P2": 1.0},
            "computed": {
                "value": res35.lambda_w,
                "unique": res35.unique,
                "w_P1": w1,
                "w_P2": w2,
            },
            "pass": (
                abs(res35.lambda_w - 1.0) <= 1e-12
                and res35.unique == "non_unique"
                and abs(w1 - 1.0) <= 1e-12
                and abs(w2 - 1.0) <= 1e-12
            ),
        }
    )

    # dimension >= 4 hyperplane: closed-form constant, two minimizers
    for n, tail in ((4, [1.0 / 3] * 3), (5, [0.25] * 4)):
        f = np.array([0.0] + tail)
        lam = linf_hyperplane_lambda(f, n)
        Xn = Space(n, ScalarField.REAL, NormSpec("max"))
        Vn = Subspace.from_kernel(f)
        resn = minimal_projection(Xn, Vn, with_suba=False)
        P1n, P2n, _ = hyperplane_projections(f)
        w1n = numerical_radius(Xn, P1n).value
        w2n = numerical_radius(Xn, P2n).value
        entries.append(
            {
                "name": f"hyperplane_dim_{n}",
                "expected": {"lambda": lam, "w_P1": lam, "w_P2": lam, "P1_neq_P2": True},
                "computed": {
                    "lp_value": resn.lambda_w,
                    "unique": resn.unique,
                    "w_P1": w1n,
                    "w_P2": w2n,
                    "P1_neq_P2": bool(np.abs(P1n - P2n).max() > 1e-9),
                },
                "pass": (
                    abs(resn.lambda_w - lam) <= 1e-8
                    and resn.unique == "non_unique"
                    and abs(w1n - lam) <= 1e-10
                    and abs(w2n - lam) <= 1e-10
                ),
            }
        )

    # complex 3-dim max norm: radius 4/3, optimal certificate, SUBA failure
    Xc = Space(3, ScalarField.COMPLEX, NormSpec("max"))
    Vc = Subspace(null_space(np.ones((1, 3))))
    Pc = np.eye(3, dtype=complex) - np.ones((3, 3)) / 3.0
    wc = numerical_radius(Xc, Pc).value
    resc = minimal_extension(Xc, Vc, np.eye(2, dtype=complex), A0=Pc, phase_resolution=phase_resolution)
    entries.append(
        {
            "name": "complex_projection",
            "expected": {"w": 4.0 / 3.0, "active_pairs": 3, "suba_r": 0.0},
            "computed": {
                "w": wc,
                "lp_value": resc.lambda_w,
                "certificate_residual": None if resc.certificate is None else resc.certificate.residual,
                "suba_r": None if resc.suba is None else resc.suba.r,
            },
            "pass": (
                abs(wc - 4.0 / 3.0) <= 1e-12
                and abs(resc.lambda_w - 4.0 / 3.0) <= 1e-9
                and resc.certificate is not None
                and resc.certificate.verdict == "optimal"
                and resc.certificate.residual <= 1e-12
                and resc.suba is not None
                and resc.suba.r == 0.0
            ),
        }
    )

    return {"entries": entries, "all_pass": all(e["pass"] for e in entries)}
