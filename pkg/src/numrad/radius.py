"""Numerical-radius-type seminorms, active sets, and the numerical index.

The seminorm of an operator over a pair set W is the max of |xstar(Tx)|
over the pairs.  Exact engines exist per norm: closed forms for max/sum
norms, eigenvalue computations for Euclidean norms, and extreme-pair
enumeration for real polytope norms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import CapabilityError, DegenerateInputError, DimensionMismatchError
from .spaces import (
    DEFAULT_PHASE_RESOLUTION,
    DualityPair,
    NormSpec,
    PairSet,
    ScalarField,
    Space,
    _array_to_json,
    _canonical,
    q_pairs,
    radius_pairs,
    signed_closure,
)

DEFAULT_ACTIVE_TOL = 1e-8


@dataclass
class RadiusReport:
    """Value of a radius computation plus the attaining pairs."""

    value: float
    active: list[DualityPair]
    method: str  # closed_form | enumeration | eigensweep | sampled
    tol: float

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "tol": self.tol,
            "active": [p.to_json() for p in self.active],
        }


def evaluate_pairs(pairs, T: np.ndarray) -> np.ndarray:
    """Vectorized xstar(Tx) over a list of pairs."""
    plist = list(pairs)
    if not plist:
        return np.zeros(0, dtype=complex)
    dtype = complex if any(np.iscomplexobj(p.x) or np.iscomplexobj(p.xstar) for p in plist) or np.iscomplexobj(T) else float
    Xs = np.array([p.xstar for p in plist], dtype=dtype)
    X = np.array([p.x for p in plist], dtype=dtype)
    return np.einsum("ki,ij,kj->k", Xs, np.asarray(T, dtype=dtype), X)


def seminorm(T: np.ndarray, W: PairSet) -> float:
    """max |xstar(Tx)| over the finite pair set W."""
    _check_square(T, len(W.pairs[0].x))
    return float(np.abs(evaluate_pairs(W, T)).max())


def active_set(space: Space, T: np.ndarray, W: PairSet, tol: float | None = None) -> list[DualityPair]:
    """Pairs of the closed set W attaining xstar(Tx) = seminorm (a real value).

    W must already be closed under the sign/phase closure; the attaining
    pairs then exist by finiteness.  Complex grids get an extra imaginary
    slack of value * 2*pi/resolution to absorb the discretization.
    """
    if not W.closed:
        raise ValueError("active_set requires a closed pair set")
    vals = evaluate_pairs(W, T)
    value = float(vals.real.max())
    if tol is None:
        tol = DEFAULT_ACTIVE_TOL * max(1.0, abs(value))
    if W.field is ScalarField.COMPLEX and not W.exact:
        im_tol = max(tol, abs(value) * 2 * np.pi / max(W.phase_resolution, 1))
    else:
        im_tol = tol
    idx = np.nonzero((vals.real >= value - tol) & (np.abs(vals.imag) <= im_tol))[0]
    active = [W.pairs[i] for i in idx]
    return _canonical(active)


def numerical_radius(space: Space, T: np.ndarray) -> RadiusReport:
    """Numerical radius of T with an exact engine chosen per norm."""
    T = _as_operator(space, T)
    kind = space.norm.kind
    if kind == "max":
        return _max_norm_radius(space, T)
    if kind == "sum":
        swapped = Space(space.dim, space.field, NormSpec("max"))
        rep = _max_norm_radius(swapped, T.T)
        active = _canonical(
            DualityPair(p.x.copy(), p.xstar.copy(), p.pairing) for p in rep.active
        )
        return RadiusReport(rep.value, active, rep.method, rep.tol)
    if kind == "euclid":
        if space.field is ScalarField.REAL:
            return _euclid_real_radius(T)
        return _euclid_complex_radius(T)
    if kind == "polytope":
        W = radius_pairs(space)
        vals = evaluate_pairs(W, T)
        value = float(vals.real.max())
        return RadiusReport(value, active_set(space, T, W), "enumeration", 1e-12)
    raise CapabilityError(f"numerical radius unsupported for norm {kind!r}")


def operator_norm(space: Space, T: np.ndarray) -> float:
    """Operator norm: the sup over unconstrained extreme pairs."""
    T = _as_operator(space, T)
    kind = space.norm.kind
    if kind == "max":
        return float(np.abs(T).sum(axis=1).max())
    if kind == "sum":
        return float(np.abs(T).sum(axis=0).max())
    if kind == "euclid":
        return float(np.linalg.norm(T, 2))
    vals = space.dual_vertices() @ T @ space.ball_vertices().T
    return float(np.abs(vals).max())


def q_radius(space: Space, T: np.ndarray, q: float, resolution: int = 64) -> RadiusReport:
    """Seminorm over a q-pair sample with one local refinement pass."""
    T = _as_operator(space, T)
    W = q_pairs(space, q, resolution)
    vals = np.abs(evaluate_pairs(W, T))
    best = int(vals.argmax())
    value = float(vals[best])
    tol = 1e-12
    if space.norm.kind == "euclid" and space.dim == 2 and space.field is ScalarField.REAL:
        value = max(value, _refine_euclid2(T, q))
        tol = 1e-9
    elif space.norm.kind in ("max", "sum") and space.field is ScalarField.REAL:
        value = max(value, _refine_polyhedral_q(space, T, q, W.pairs[best]))
        tol = 1e-9
    else:
        tol = max(1e-9, 4.0 * np.pi / resolution * operator_norm_bound(T))
    active = [p for p, v in zip(W.pairs, np.abs(evaluate_pairs(W, T))) if v >= value - max(tol, 1e-9)]
    return RadiusReport(value, _canonical(active), "sampled", tol)


def operator_norm_bound(T: np.ndarray) -> float:
    return float(np.linalg.norm(T, 2))


def numerical_index(space: Space, trials: int, seed: int) -> float:
    """Upper estimate of the numerical index n(X).

    Minimum of radius/op-norm over structured candidates (shifts, skews,
    permutations) plus ``trials`` seeded random operators.  This is an upper
    bound on the true index, not an exact value.
    """
    n = space.dim
    rng = np.random.default_rng(seed)
    best = 1.0  # ratio of the identity
    for cand in _structured_candidates(space):
        best = min(best, _index_ratio(space, cand, best))
    dtype = space.field.dtype
    for _ in range(trials):
        T = rng.standard_normal((n, n))
        if space.field is ScalarField.COMPLEX:
            T = T + 1j * rng.standard_normal((n, n))
        best = min(best, _index_ratio(space, T.astype(dtype), best))
    return best


def _index_ratio(space: Space, T: np.ndarray, current: float) -> float:
    op = operator_norm(space, T)
    if op <= 1e-12:
        return current
    return numerical_radius(space, T).value / op


def _structured_candidates(space: Space):
    n = space.dim
    eye = np.eye(n)
    yield eye
    for i in range(n):
        for j in range(n):
            if i != j:
                E = np.zeros((n, n))
                E[i, j] = 1.0
                yield E
                yield E - E.T
    # cyclic shift permutation
    yield np.roll(eye, 1, axis=0)


def w_equivalent(T: np.ndarray, L: np.ndarray, W: PairSet, tol: float = 1e-10) -> bool:
    """Whether T and L agree as elements of the seminormed quotient."""
    return seminorm(np.asarray(T) - np.asarray(L), W) <= tol


def range_boundary_samples(space: Space, T: np.ndarray, count: int = 360) -> np.ndarray:
    """Rows (theta, re, im) sampling the boundary of the numerical range.

    Complex Euclidean spaces sweep the support function of the field of
    values; other supported norms emit the evaluations of the enumerated
    pair set (a finite range).
    """
    T = _as_operator(space, T)
    if space.norm.kind == "euclid":
        thetas = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
        rows = []
        for th in thetas:
            H = _hermitian_part(np.exp(1j * th) * T.astype(complex))
            lam, vecs = np.linalg.eigh(H)
            v = vecs[:, -1]
            z = complex(np.conj(v) @ T.astype(complex) @ v)
            rows.append((th, z.real, z.imag))
        return np.array(rows)
    W = radius_pairs(space)
    vals = evaluate_pairs(W, T)
    return np.array([(float(np.angle(z)), z.real, z.imag) for z in vals])


# ---------------------------------------------------------------------------
# engines


def _max_norm_radius(space: Space, T: np.ndarray) -> RadiusReport:
    absT = np.abs(T)
    scores = np.abs(T.diagonal()) + absT.sum(axis=1) - absT.diagonal()
    value = float(scores.max())
    tol = 1e-12 * max(1.0, value)
    pairs = []
    for j in np.nonzero(scores >= value - tol)[0]:
        pairs.extend(_max_norm_active_pairs(T, int(j)))
    return RadiusReport(value, _canonical(pairs), "closed_form", tol)


def _max_norm_active_pairs(T: np.ndarray, j: int) -> list[DualityPair]:
    """Pairs attaining the row-j closed form, with zero entries enumerated."""
    n = T.shape[0]
    others = [k for k in range(n) if k != j]
    zero = [k for k in others if abs(T[j, k]) <= 1e-15]
    nonzero = [k for k in others if abs(T[j, k]) > 1e-15]
    pairs = []
    if np.iscomplexobj(T):
        diag = T[j, j]
        omega = diag / abs(diag) if abs(diag) > 1e-15 else 1.0
        fills = itertools.product([1.0, -1.0, 1j, -1j], repeat=len(zero)) if len(zero) <= 4 else [(1.0,) * len(zero)]
        # align every off-diagonal term with the diagonal direction, then
        # rotate the whole pair so xstar(Tx) is real and positive
        S = sum(abs(T[j, k]) for k in nonzero)
        val = diag + omega * S
        phi = np.conj(val) / abs(val) if abs(val) > 1e-15 else 1.0
        for fill in fills:
            x = np.empty(n, dtype=complex)
            x[j] = 1.0 / omega
            for k in nonzero:
                x[k] = np.conj(T[j, k]) / abs(T[j, k])
            for k, u in zip(zero, fill):
                x[k] = u
            xstar = np.zeros(n, dtype=complex)
            xstar[j] = phi * omega
            pairs.append(DualityPair(xstar, x, phi))
    else:
        diag = T[j, j]
        eps_signs = [1.0] if diag > 1e-15 else [-1.0] if diag < -1e-15 else [1.0, -1.0]
        fills = itertools.product([1.0, -1.0], repeat=len(zero)) if len(zero) <= 6 else [(1.0,) * len(zero)]
        fills = list(fills)
        for eps in eps_signs:
            for sigma in (1.0, -1.0):
                for fill in fills:
                    x = np.empty(n)
                    x[j] = sigma
                    for k in nonzero:
                        x[k] = eps * sigma * np.sign(T[j, k])
                    for k, u in zip(zero, fill):
                        x[k] = u
                    xstar = np.zeros(n)
                    xstar[j] = eps * sigma
                    pairs.append(DualityPair(xstar, x, eps))
    return pairs


def _euclid_real_radius(T: np.ndarray) -> RadiusReport:
    H = (T + T.T) / 2.0
    lam, vecs = np.linalg.eigh(H)
    value = float(np.abs(lam).max())
    tol = 1e-12 * max(1.0, value)
    pairs = []
    if value <= 1e-15:
        n = T.shape[0]
        e1 = np.zeros(n)
        e1[0] = 1.0
        pairs.append(DualityPair(e1, e1.copy(), 1.0))
    else:
        for lv, v in zip(lam, vecs.T):
            if abs(abs(lv) - value) <= tol:
                v = _canonical_sign(v)
                s = 1.0 if lv > 0 else -1.0
                pairs.append(DualityPair(s * v, v.copy(), s))
    return RadiusReport(value, _canonical(pairs), "eigensweep", tol)


def _euclid_complex_radius(T: np.ndarray) -> RadiusReport:
    T = T.astype(complex)

    def lam_max(theta: float) -> float:
        return float(np.linalg.eigvalsh(_hermitian_part(np.exp(1j * theta) * T))[-1])

    grid = np.linspace(0.0, 2 * np.pi, 720, endpoint=False)
    vals = np.array([lam_max(t) for t in grid])
    k = int(vals.argmax())
    lo, hi = grid[k] - 2 * np.pi / 720, grid[k] + 2 * np.pi / 720
    theta = _golden_max(lam_max, lo, hi, 1e-10)
    value = lam_max(theta)
    lam, vecs = np.linalg.eigh(_hermitian_part(np.exp(1j * theta) * T))
    v = _canonical_sign(vecs[:, -1])
    xstar = np.exp(1j * theta) * np.conj(v)
    pairs = [DualityPair(xstar, v.copy(), complex(np.exp(1j * theta)))]
    return RadiusReport(float(value), pairs, "eigensweep", 1e-10)


def _hermitian_part(A: np.ndarray) -> np.ndarray:
    return (A + A.conj().T) / 2.0


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def _refine_euclid2(T: np.ndarray, q: float) -> float:
    s = np.sqrt(max(0.0, 1.0 - q * q))

    def val(t: float) -> float:
        x = np.array([np.cos(t), np.sin(t)])
        u = np.array([-np.sin(t), np.cos(t)])
        return max(abs((q * x + sg * s * u) @ T @ x) for sg in (1.0, -1.0))

    grid = np.linspace(0.0, 2 * np.pi, 720, endpoint=False)
    k = int(np.argmax([val(t) for t in grid]))
    lo, hi = grid[k] - 2 * np.pi / 720, grid[k] + 2 * np.pi / 720
    return val(_golden_max(val, lo, hi, 1e-12))


def _refine_polyhedral_q(space: Space, T: np.ndarray, q: float, best: DualityPair) -> float:
    """One alternating exact pass: optimize xstar for the best x, then x."""
    value = abs(complex(best.xstar @ T @ best.x))
    x = best.x.real.copy()
    xstar = _best_functional_at(space, T, x, q)
    value = max(value, abs(float(xstar @ T @ x)))
    x2 = _best_vector_at(space, T, xstar, q)
    if x2 is not None:
        value = max(value, abs(float(xstar @ T @ x2)))
    return value


def _best_functional_at(space: Space, T: np.ndarray, x: np.ndarray, q: float) -> np.ndarray:
    """max |f(Tx)| over dual-unit f with f(x) = q, via LP on dual vertices."""
    D = space.dual_vertices()  # dual ball = conv(D)
    y = T @ x
    best_f, best_v = None, -np.inf
    for sign in (1.0, -1.0):
        res = linprog(
            c=-sign * (D @ y),
            A_eq=np.vstack([(D @ x), np.ones(len(D))]),
            b_eq=np.array([q, 1.0]),
            bounds=[(0, None)] * len(D),
            method="highs",
        )
        if res.status == 0 and -res.fun > best_v:
            best_v = -res.fun
            best_f = res.x @ D
    if best_f is None:
        return _as_float(space, x) * 0.0
    return best_f


def _best_vector_at(space: Space, T: np.ndarray, f: np.ndarray, q: float) -> np.ndarray | None:
    """max |f(Tx)| over unit-ball x with f(x) = q, via LP on ball vertices."""
    V = space.ball_vertices()
    c = V @ (T.T @ f)
    best_x, best_v = None, -np.inf
    for sign in (1.0, -1.0):
        res = linprog(
            c=-sign * c,
            A_eq=np.vstack([(V @ f), np.ones(len(V))]),
            b_eq=np.array([q, 1.0]),
            bounds=[(0, None)] * len(V),
            method="highs",
        )
        if res.status == 0 and -res.fun > best_v:
            best_v = -res.fun
            best_x = res.x @ V
    return best_x


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    idx = np.nonzero(np.abs(v) > 1e-12)[0]
    if idx.size == 0:
        return v
    lead = v[idx[0]]
    if np.iscomplexobj(v):
        return v * (np.conj(lead) / abs(lead))
    return v if lead > 0 else -v


def _as_operator(space: Space, T) -> np.ndarray:
    T = np.asarray(T, dtype=space.field.dtype)
    _check_square(T, space.dim)
    return T


def _check_square(T: np.ndarray, n: int) -> None:
    T = np.asarray(T)
    if T.shape != (n, n):
        raise DimensionMismatchError(f"expected operator shape ({n},{n}), got {T.shape}")


def _as_float(space: Space, x) -> np.ndarray:
    return np.asarray(x, dtype=float)
