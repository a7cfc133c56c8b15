"""Finite-dimensional normed spaces, duals, and normalized duality pairs.

A duality pair is a functional/vector pair (xstar, x) with dual_norm(xstar)
and norm(x) at most one and a prescribed bilinear pairing xstar . x (one for
numerical-radius pairs, q for q-pairs).  Functionals act bilinearly: there is
no conjugation in the complex case, so the classical field of values is
recovered by pairing x with conj(x).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection

from .errors import (
    CapabilityError,
    DegenerateInputError,
    DimensionMismatchError,
)

DEDUP_DECIMALS = 12
PAIR_TOL = 1e-10
#: Default phase-grid resolution for complex extreme-pair enumeration.  Must
#: be a multiple of 4 so the grid contains 1, i, -1, -i; the paper-style
#: complex examples attain their radius at those phases and are then exact.
DEFAULT_PHASE_RESOLUTION = 8


class ScalarField(Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self):
        return np.float64 if self is ScalarField.REAL else np.complex128


@dataclass
class NormSpec:
    """Norm of a space: one of "max", "sum", "euclid", "polytope".

    Polytope norms carry an explicit symmetric vertex set whose convex hull
    is the unit ball; they are supported over the reals only.
    """

    kind: str
    vertices: np.ndarray | None = None

    KINDS = ("max", "sum", "euclid", "polytope")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "polytope":
            if self.vertices is None:
                raise ValueError("polytope norm requires vertices")
            self.vertices = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        elif self.vertices is not None:
            raise ValueError(f"{self.kind} norm takes no vertices")


@dataclass
class Space:
    """A finite-dimensional real or complex normed space."""

    dim: int
    field: ScalarField
    norm: NormSpec
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.norm.kind == "polytope":
            if self.field is not ScalarField.REAL:
                raise CapabilityError("polytope norms are real-only")
            verts = self.norm.vertices
            if verts.shape[1] != self.dim:
                raise DimensionMismatchError(
                    f"vertex dim {verts.shape[1]} != space dim {self.dim}"
                )
            if np.linalg.matrix_rank(verts, tol=1e-10) < self.dim:
                raise ValueError("polytope vertices do not span the space")
            _check_symmetric(verts)
            # every listed vertex must sit on the unit sphere of the gauge
            dual = self.dual_vertices()
            vals = verts @ dual.T
            on_sphere = np.abs(vals.max(axis=1) - 1.0) <= 1e-9
            if not on_sphere.all():
                raise ValueError("polytope vertex strictly inside the hull")

    # -- cached geometry ---------------------------------------------------

    def ball_vertices(self) -> np.ndarray:
        """Extreme points of the unit ball (real polyhedral norms only)."""
        if "ball_vertices" not in self._cache:
            self._cache["ball_vertices"] = _ball_vertices(self)
        return self._cache["ball_vertices"]

    def dual_vertices(self) -> np.ndarray:
        """Extreme points of the dual unit ball (real polyhedral norms)."""
        if "dual_vertices" not in self._cache:
            self._cache["dual_vertices"] = _dual_ball_vertices(self)
        return self._cache["dual_vertices"]

    def is_polyhedral(self) -> bool:
        return self.field is ScalarField.REAL and self.norm.kind in (
            "max",
            "sum",
            "polytope",
        )

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        out = {"dim": self.dim, "field": self.field.value, "norm": {"kind": self.norm.kind}}
        if self.norm.vertices is not None:
            out["norm"]["vertices"] = self.norm.vertices.tolist()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Space":
        norm = NormSpec(data["norm"]["kind"], data["norm"].get("vertices"))
        return cls(int(data["dim"]), ScalarField(data["field"]), norm)


@dataclass(frozen=True)
class DualityPair:
    """A normalized pair (xstar, x) with the bilinear pairing xstar . x."""

    xstar: np.ndarray
    x: np.ndarray
    pairing: complex

    def evaluate(self, T: np.ndarray) -> complex:
        """The pair applied to an operator: xstar(Tx)."""
        return complex(self.xstar @ (T @ self.x))

    def key(self) -> tuple:
        return (
            tuple(np.round(_realify(self.xstar), DEDUP_DECIMALS)),
            tuple(np.round(_realify(self.x), DEDUP_DECIMALS)),
        )

    def to_json(self) -> dict:
        return {
            "xstar": _array_to_json(self.xstar),
            "x": _array_to_json(self.x),
            "pairing": _scalar_to_json(self.pairing),
        }


@dataclass
class PairSet:
    """A finite index set W of duality pairs for a sup-of-evaluations seminorm.

    ``closed`` means the list is already invariant under the sign closure
    (real) or the phase-grid closure (complex).  ``exact`` records whether
    the list captures the full index set of the seminorm (true for real
    polyhedral enumerations) or is a discretized sample.
    """

    pairs: list[DualityPair]
    field: ScalarField
    kind: str = "numerical_radius"  # "numerical_radius" | "q" | "explicit"
    q: float = 1.0
    closed: bool = False
    exact: bool = True
    phase_resolution: int = DEFAULT_PHASE_RESOLUTION

    def __post_init__(self):
        if not self.pairs:
            raise DegenerateInputError("pair set must be non-empty")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def to_json(self) -> dict:
        return {
            "field": self.field.value,
            "kind": self.kind,
            "q": self.q,
            "closed": self.closed,
            "exact": self.exact,
            "phase_resolution": self.phase_resolution,
            "pairs": [p.to_json() for p in self.pairs],
        }


# ---------------------------------------------------------------------------
# norms


def norm(space: Space, x) -> float:
    """The space's norm of a vector."""
    x = _as_vector(space, x)
    kind = space.norm.kind
    if kind == "max":
        return float(np.abs(x).max())
    if kind == "sum":
        return float(np.abs(x).sum())
    if kind == "euclid":
        return float(np.linalg.norm(x))
    return _gauge(space.norm.vertices, x.real)


def dual_norm(space: Space, f) -> float:
    """Dual norm of a functional under the bilinear pairing."""
    f = _as_vector(space, f)
    kind = space.norm.kind
    if kind == "max":
        return float(np.abs(f).sum())
    if kind == "sum":
        return float(np.abs(f).max())
    if kind == "euclid":
        return float(np.linalg.norm(f))
    return float(np.abs(space.norm.vertices @ f.real).max())


def peak_functional(space: Space, x) -> np.ndarray:
    """An extreme dual functional f with f(x) = norm(x).

    Tie-breaks are deterministic: max norm picks the first max-attaining
    coordinate (sign-matched), polytope norms pick the lexicographically
    smallest attaining dual vertex.
    """
    x = _as_vector(space, x)
    nx = norm(space, x)
    if nx <= 10 * np.finfo(float).eps:
        raise DegenerateInputError("peak functional of the zero vector")
    kind = space.norm.kind
    f = np.zeros(space.dim, dtype=space.field.dtype)
    if kind == "max":
        j = int(np.argmax(np.abs(x) >= nx - PAIR_TOL))
        f[j] = _phase(x[j])
        return f
    if kind == "sum":
        f = np.where(np.abs(x) > PAIR_TOL, _phase(x), 1.0).astype(space.field.dtype)
        return f
    if kind == "euclid":
        return np.conj(x) / nx
    dual = space.dual_vertices()
    attaining = dual[np.abs(dual @ x.real - nx) <= 1e-9 * max(1.0, nx)]
    if attaining.size == 0:  # pragma: no cover - gauge/dual mismatch
        raise DegenerateInputError("no dual vertex attains the norm")
    order = np.lexsort(attaining.T[::-1])
    return attaining[order[0]].astype(float)


# ---------------------------------------------------------------------------
# pair enumeration


def extreme_pairs(space: Space, phase_resolution: int = DEFAULT_PHASE_RESOLUTION) -> list[DualityPair]:
    """All (xstar, x) with xstar extreme dual, x extreme primal, xstar(x)=1.

    Real polyhedral norms are enumerated exactly.  Complex max/sum norms use
    a phase grid of the given resolution on every free coordinate.
    """
    if space.field is ScalarField.REAL:
        if not space.is_polyhedral():
            raise CapabilityError(
                "extreme pairs need a polyhedral norm; use q_pairs sampling"
            )
        dual = space.dual_vertices()
        primal = space.ball_vertices()
        pairs = []
        prod = primal @ dual.T
        for i, j in zip(*np.nonzero(np.abs(prod - 1.0) <= 1e-9)):
            pairs.append(DualityPair(dual[j].copy(), primal[i].copy(), 1.0))
        return _canonical(pairs)
    if space.norm.kind not in ("max", "sum"):
        raise CapabilityError(
            "complex extreme pairs support max/sum norms only; "
            "use q_pairs-style sampling for other norms"
        )
    if phase_resolution < 1:
        raise ValueError("phase resolution must be positive")
    n = space.dim
    if phase_resolution ** n * n > 2_000_000:
        raise CapabilityError("phase grid too large; lower the resolution")
    phases = _snap(np.exp(2j * np.pi * np.arange(phase_resolution) / phase_resolution))
    pairs = []
    for j in range(n):
        for w in phases:
            # one coordinate is pinned by xstar(x) = 1, the rest sweep the grid
            for rest in itertools.product(phases, repeat=n - 1):
                v = np.empty(n, dtype=complex)
                v[:j] = rest[:j]
                v[j] = 1.0 / w
                v[j + 1 :] = rest[j:]
                unit = np.zeros(n, dtype=complex)
                unit[j] = w
                if space.norm.kind == "max":
                    # xstar = w e_j extreme dual, x unimodular with x_j = 1/w
                    pairs.append(DualityPair(unit, v, 1.0))
                else:
                    # x = (1/w) e_j extreme primal, xstar unimodular with f_j = w
                    f = v.copy()
                    f[j] = w
                    x = np.zeros(n, dtype=complex)
                    x[j] = 1.0 / w
                    pairs.append(DualityPair(f, x, 1.0))
    return _canonical(pairs)


def q_pairs(space: Space, q: float, resolution: int) -> PairSet:
    """A deterministic finite sample of W_q: unit pairs with xstar(x) = q."""
    if not 0 < q <= 1:
        raise ValueError("q must lie in (0, 1]")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    kind = space.norm.kind
    if kind == "euclid":
        pairs = _euclid_q_pairs(space, q, resolution)
        exact = False
    elif kind == "max" and space.field is ScalarField.REAL:
        pairs = _max_q_pairs(space, q)
        exact = True
    elif kind == "sum" and space.field is ScalarField.REAL:
        pairs = [
            DualityPair(p.x.copy(), p.xstar.copy(), p.pairing)
            for p in _max_q_pairs(_swap_norm(space), q)
        ]
        exact = True
    else:
        raise CapabilityError(f"q_pairs unsupported for {kind}/{space.field.value}")
    return PairSet(
        _canonical(pairs), space.field, kind="q", q=q, closed=False, exact=exact
    )


def _euclid_q_pairs(space: Space, q: float, resolution: int) -> list[DualityPair]:
    n, rng = space.dim, np.random.default_rng(12345)
    xs = []
    if n == 2:
        t = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
        xs = np.stack([np.cos(t), np.sin(t)], axis=1)
        us = np.stack([-np.sin(t), np.cos(t)], axis=1)
    else:
        xs = rng.standard_normal((resolution, n))
        xs /= np.linalg.norm(xs, axis=1, keepdims=True)
        us = rng.standard_normal((resolution, n))
        us -= (us * xs).sum(axis=1, keepdims=True) * xs
        us /= np.linalg.norm(us, axis=1, keepdims=True)
    s = np.sqrt(max(0.0, 1.0 - q * q))
    dtype = space.field.dtype
    pairs = []
    for x, u in zip(xs, us):
        for sign in (1.0, -1.0):
            xstar = q * x + sign * s * u
            if space.field is ScalarField.COMPLEX:
                pairs.append(DualityPair(xstar.astype(dtype), x.astype(dtype), q))
            else:
                pairs.append(DualityPair(xstar, x.copy(), q))
            if s == 0.0:
                break
    return pairs


def _max_q_pairs(space: Space, q: float) -> list[DualityPair]:
    n = space.dim
    if n == 1:
        if abs(q - 1.0) > PAIR_TOL:
            raise CapabilityError("dim-1 max norm admits only q = 1")
        return [DualityPair(np.array([s]), np.array([s]), 1.0) for s in (1.0, -1.0)]
    pairs = []
    for j in range(n):
        for s in (1.0, -1.0):
            for rest in itertools.product((1.0, -1.0), repeat=n - 1):
                x = np.empty(n)
                x[:j] = rest[:j]
                x[j] = s * q
                x[j + 1 :] = rest[j:]
                xstar = np.zeros(n)
                xstar[j] = s
                pairs.append(DualityPair(xstar, x, q))
    return pairs


def _swap_norm(space: Space) -> Space:
    kind = {"max": "sum", "sum": "max"}[space.norm.kind]
    return Space(space.dim, space.field, NormSpec(kind))


def signed_closure(pairs: PairSet) -> PairSet:
    """Close a pair set under sign flips (real) or the phase grid (complex).

    Idempotent; the output is canonically ordered and marked closed.
    """
    if pairs.field is ScalarField.REAL:
        doubled = []
        for p in pairs:
            doubled.append(p)
            doubled.append(DualityPair(-p.xstar, p.x, -p.pairing))
        closed = _canonical(doubled)
    else:
        m = pairs.phase_resolution
        phases = _snap(np.exp(2j * np.pi * np.arange(m) / m))
        closed = _canonical(
            DualityPair(w * p.xstar, p.x, w * p.pairing)
            for p in pairs
            for w in phases
        )
    return PairSet(
        closed,
        pairs.field,
        kind=pairs.kind,
        q=pairs.q,
        closed=True,
        exact=pairs.exact,
        phase_resolution=pairs.phase_resolution,
    )


def radius_pairs(space: Space, phase_resolution: int = DEFAULT_PHASE_RESOLUTION) -> PairSet:
    """Closed numerical-radius pair set from the extreme-pair enumeration."""
    pairs = PairSet(
        extreme_pairs(space, phase_resolution),
        space.field,
        exact=space.field is ScalarField.REAL,
        phase_resolution=phase_resolution,
    )
    return signed_closure(pairs)


# ---------------------------------------------------------------------------
# polytope geometry


def _ball_vertices(space: Space) -> np.ndarray:
    n, kind = space.dim, space.norm.kind
    if kind == "max":
        return np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    if kind == "sum":
        return np.vstack([np.eye(n), -np.eye(n)])
    if kind == "polytope":
        return _extreme_filter(space.norm.vertices)
    raise CapabilityError(f"{kind} ball has no finite vertex set")


def _dual_ball_vertices(space: Space) -> np.ndarray:
    n, kind = space.dim, space.norm.kind
    if kind == "max":
        return np.vstack([np.eye(n), -np.eye(n)])
    if kind == "sum":
        return np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    if kind == "polytope":
        return polar_vertices(space.norm.vertices)
    raise CapabilityError(f"{kind} dual ball has no finite vertex set")


def polar_vertices(vertices: np.ndarray) -> np.ndarray:
    """Vertices of the polar polytope {f : f . v <= 1 for every vertex v}.

    The vertex set must be symmetric and span, so the polar is a bounded
    polytope with the origin in its interior.
    """
    vertices = np.atleast_2d(vertices)
    n = vertices.shape[1]
    if n == 1:
        a = np.abs(vertices).max()
        return np.array([[1.0 / a], [-1.0 / a]])
    halfspaces = np.hstack([vertices, -np.ones((len(vertices), 1))])
    hs = HalfspaceIntersection(halfspaces, np.zeros(n))
    return _dedup_rows(hs.intersections)


def _extreme_filter(vertices: np.ndarray) -> np.ndarray:
    """Drop listed vertices lying in the hull of the others."""
    keep = []
    for i, v in enumerate(vertices):
        others = np.delete(vertices, i, axis=0)
        if not _in_hull(others, v):
            keep.append(v)
    return _dedup_rows(np.array(keep))


def _in_hull(points: np.ndarray, x: np.ndarray, tol: float = 1e-9) -> bool:
    """Convex-hull membership by LP feasibility."""
    k = len(points)
    res = linprog(
        c=np.zeros(k),
        A_eq=np.vstack([points.T, np.ones(k)]),
        b_eq=np.append(x, 1.0),
        bounds=[(0, None)] * k,
        method="highs",
    )
    return res.status == 0


def _gauge(vertices: np.ndarray, x: np.ndarray) -> float:
    """Minkowski gauge of conv(vertices) via a small LP."""
    k = len(vertices)
    res = linprog(
        c=np.ones(k),
        A_eq=vertices.T,
        b_eq=x,
        bounds=[(0, None)] * k,
        method="highs",
    )
    if res.status != 0:  # pragma: no cover - vertices span, so always feasible
        raise DegenerateInputError("gauge LP infeasible; vertices do not span")
    return float(res.fun)


# ---------------------------------------------------------------------------
# small helpers


def _check_symmetric(vertices: np.ndarray) -> None:
    keys = {tuple(np.round(v, 9)) for v in vertices}
    for v in vertices:
        if tuple(np.round(-v, 9)) not in keys:
            raise ValueError("polytope vertex set is not symmetric")


def _as_vector(space: Space, x) -> np.ndarray:
    x = np.asarray(x, dtype=space.field.dtype)
    if x.shape != (space.dim,):
        raise DimensionMismatchError(f"expected shape ({space.dim},), got {x.shape}")
    return x


def _snap(z: np.ndarray) -> np.ndarray:
    """Round away sub-1e-15 noise so grid phases at 1, i, -1, -i are exact."""
    return np.round(z.real, 15) + 1j * np.round(z.imag, 15)


def _phase(z):
    """Unimodular phase with sign convention phase(z) * z = |z| (1 at z = 0)."""
    a = np.abs(z)
    return np.where(a > 0, np.conj(z) / np.where(a > 0, a, 1.0), 1.0)


def _realify(v: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(v):
        return np.concatenate([v.real, v.imag])
    return np.asarray(v, dtype=float)


def _canonical(pairs: Iterable[DualityPair]) -> list[DualityPair]:
    """Dedupe by rounded coordinates and sort lexicographically."""
    seen = {}
    for p in pairs:
        seen.setdefault(p.key(), p)
    return [seen[k] for k in sorted(seen)]


def _dedup_rows(arr: np.ndarray, decimals: int = 9) -> np.ndarray:
    seen = {}
    for row in arr:
        seen.setdefault(tuple(np.round(row, decimals)), row)
    rows = [seen[k] for k in sorted(seen)]
    return np.array(rows)


def _array_to_json(v: np.ndarray):
    if np.iscomplexobj(v):
        return [[float(z.real), float(z.imag)] for z in v]
    return [float(t) for t in v]


def _scalar_to_json(z):
    if isinstance(z, complex) and z.imag != 0.0:
        return [z.real, z.imag]
    return float(np.real(z))


def array_from_json(data, field: ScalarField) -> np.ndarray:
    """Parse a vector/matrix; complex scalars are [re, im] pairs."""
    arr = np.asarray(data, dtype=float)
    if field is ScalarField.COMPLEX:
        if arr.ndim >= 2 and arr.shape[-1] == 2:
            return arr[..., 0] + 1j * arr[..., 1]
        return arr.astype(complex)
    return arr
