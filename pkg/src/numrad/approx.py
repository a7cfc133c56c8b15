"""Best approximation in radius-type seminorms via minimax linear programming.

The problem min over the affine family of ||T - offset - sum c_k B_k||_W is
linear once W is closed under the sign/phase closure: the modulus becomes a
max of real parts over closure pairs, so the epigraph formulation is an LP
in the real coefficients c and the level t.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.optimize import linprog

from .errors import DimensionMismatchError, SolverError
from .radius import evaluate_pairs
from .spaces import (
    DualityPair,
    PairSet,
    ScalarField,
    Space,
    _canonical,
)

LP_FEAS_TOL = 1e-10
LP_OPT_TOL = 1e-9
UNIQUE_RANGE_TOL = 1e-5


@dataclass
class OperatorSubspace:
    """A real-linear span of operators used as the approximation family.

    Complex basis operators contribute two real degrees of freedom each
    (B and iB), so coefficients are always real.
    """

    basis: list[np.ndarray]

    def __post_init__(self):
        self.basis = [np.asarray(B) for B in self.basis]
        if self.basis:
            shape = self.basis[0].shape
            if any(B.shape != shape for B in self.basis):
                raise DimensionMismatchError("basis operators differ in shape")
            flat = np.array([_realify_flat(B) for B in self.real_basis()])
            if np.linalg.matrix_rank(flat, tol=1e-10) < len(flat):
                raise ValueError("family basis is linearly dependent")

    def real_basis(self) -> list[np.ndarray]:
        out = []
        for B in self.basis:
            out.append(B)
            if np.iscomplexobj(B):
                out.append(1j * B)
        return out

    @property
    def real_dim(self) -> int:
        return len(self.real_basis())

    def element(self, coeffs: np.ndarray) -> np.ndarray:
        rb = self.real_basis()
        if len(coeffs) != len(rb):
            raise DimensionMismatchError("coefficient length != real dimension")
        if not rb:
            return np.zeros((0, 0))
        out = np.zeros(rb[0].shape, dtype=rb[0].dtype if not any(np.iscomplexobj(B) for B in rb) else complex)
        for c, B in zip(coeffs, rb):
            out = out + float(c) * B
        return out

    def coefficients_of(self, L: np.ndarray, tol: float = 1e-8) -> np.ndarray | None:
        """Real coefficients representing L, or None if L is outside the span."""
        rb = self.real_basis()
        if not rb:
            return np.zeros(0) if np.abs(L).max() <= tol else None
        A = np.array([_realify_flat(B) for B in rb]).T
        b = _realify_flat(np.asarray(L))
        coeffs, res, _, _ = np.linalg.lstsq(A, b, rcond=None)
        if np.abs(A @ coeffs - b).max() > tol:
            return None
        return coeffs

    def to_json(self) -> list:
        from .spaces import _array_to_json

        return [[_array_to_json(row) for row in B] for B in self.basis]


@dataclass
class ApproxProblem:
    space: Space
    target: np.ndarray
    family: OperatorSubspace
    pairs: PairSet
    offset: np.ndarray | None = None

    def __post_init__(self):
        n = self.space.dim
        self.target = np.asarray(self.target, dtype=self.space.field.dtype)
        if self.target.shape != (n, n):
            raise DimensionMismatchError("target shape mismatch")
        if self.offset is None:
            self.offset = np.zeros((n, n), dtype=self.space.field.dtype)
        else:
            self.offset = np.asarray(self.offset, dtype=self.space.field.dtype)
        if not self.pairs.closed:
            raise ValueError("pair set must be closed (apply signed_closure)")


@dataclass
class ApproxResult:
    coefficients: np.ndarray
    minimizer: np.ndarray
    value: float
    active: list[DualityPair]
    unique: str  # "unique" | "non_unique" | "unknown"

    def to_json(self) -> dict:
        from .spaces import _array_to_json

        return {
            "coefficients": [float(c) for c in self.coefficients],
            "minimizer": [_array_to_json(row) for row in self.minimizer],
            "value": self.value,
            "unique": self.unique,
            "active": [p.to_json() for p in self.active],
        }


def constraint_matrix(pairs, operators) -> np.ndarray:
    """E[p, k] = re(xstar_p(B_k x_p)) for every pair and operator."""
    cols = [evaluate_pairs(pairs, B).real for B in operators]
    if not cols:
        return np.zeros((len(list(pairs)), 0))
    return np.stack(cols, axis=1)


def solve(problem: ApproxProblem) -> ApproxResult:
    """Global minimizer of the closed-pair-set minimax problem."""
    rb = problem.family.real_basis()
    m = len(rb)
    pairs = problem.pairs.pairs
    residual0 = problem.target - problem.offset
    a = evaluate_pairs(pairs, residual0).real
    E = constraint_matrix(pairs, rb)

    if m == 0:
        value = float(a.max())
        active = _active_from(pairs, a, value)
        return ApproxResult(np.zeros(0), problem.offset.copy(), value, active, "unique")

    # variables (c_1..c_m, t); constraints a_p - E c <= t
    A_ub = np.hstack([-E, -np.ones((len(pairs), 1))])
    res = linprog(
        c=np.append(np.zeros(m), 1.0),
        A_ub=A_ub,
        b_ub=-a,
        bounds=[(None, None)] * (m + 1),
        method="highs",
    )
    if res.status != 0:
        raise SolverError(f"minimax LP failed: {res.message}")
    value = float(res.x[m])
    coeffs = _l1_canonical(E, a, value, res.x[:m])
    vals = a - E @ coeffs
    active = _active_from(pairs, vals, value)
    unique = _uniqueness(problem, E, a, value, coeffs)
    minimizer = problem.offset + problem.family.element(coeffs)
    return ApproxResult(coeffs, minimizer, value, active, unique)


def distance(problem: ApproxProblem) -> float:
    """Value-only convenience wrapper around solve."""
    return solve(problem).value


def _active_from(pairs, vals, value, tol: float | None = None) -> list[DualityPair]:
    if tol is None:
        tol = 1e-8 * max(1.0, abs(value))
    return _canonical(p for p, v in zip(pairs, vals) if v >= value - tol)


def _l1_canonical(E, a, value, fallback) -> np.ndarray:
    """Second LP stage: among optima, pick the coefficient vector of
    minimal l1 norm.  Makes the reported minimizer deterministic on fat
    optimal faces (and returns 0 whenever 0 is optimal)."""
    m = E.shape[1]
    slack = LP_OPT_TOL * max(1.0, abs(value))
    # variables (c, u) with u >= |c|
    A_ub = np.vstack(
        [
            np.hstack([-E, np.zeros_like(E)]),
            np.hstack([np.eye(m), -np.eye(m)]),
            np.hstack([-np.eye(m), -np.eye(m)]),
        ]
    )
    b_ub = np.concatenate([value + slack - a, np.zeros(2 * m)])
    res = linprog(
        c=np.append(np.zeros(m), np.ones(m)),
        A_ub=A_ub,
        b_ub=b_ub,
        bounds=[(None, None)] * m + [(0, None)] * m,
        method="highs",
    )
    if res.status != 0:
        return fallback
    c = res.x[:m]
    return np.where(np.abs(c) <= 1e-11, 0.0, c)


def _uniqueness(problem: ApproxProblem, E, a, value, coeffs) -> str:
    """Probe the optimal face coordinate by coordinate.

    Exact pair sets give a definite unique/non_unique verdict; sampled sets
    report unknown because the discretized optimal face may be fatter than
    the true one.
    """
    if not problem.pairs.exact:
        return "unknown"
    m = E.shape[1]
    spread = 0.0
    slack = LP_OPT_TOL * max(1.0, abs(value))
    A_ub = np.hstack([-E, -np.ones((len(a), 1))])
    bounds = [(None, None)] * m + [(None, value + slack)]
    for k in range(m):
        lohi = []
        for sign in (1.0, -1.0):
            obj = np.zeros(m + 1)
            obj[k] = sign
            res = linprog(c=obj, A_ub=A_ub, b_ub=-a, bounds=bounds, method="highs")
            if res.status != 0:
                return "unknown"
            lohi.append(res.x[k])
        spread = max(spread, abs(lohi[0] - lohi[1]))
    return "non_unique" if spread > UNIQUE_RANGE_TOL else "unique"


def _realify_flat(B: np.ndarray) -> np.ndarray:
    B = np.asarray(B)
    if np.iscomplexobj(B):
        return np.concatenate([B.real.ravel(), B.imag.ravel()])
    return B.astype(float).ravel()
