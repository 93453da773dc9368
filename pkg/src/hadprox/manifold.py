"""Hadamard manifold oracles: Euclidean space, the upper hyperboloid sheet,
symmetric positive definite matrices with the affine-invariant metric, and
finite products of those.

Every oracle works on ambient coordinate arrays: flat vectors for Euclidean
space, Minkowski (n+1)-vectors for the hyperboloid, row-major n*n entries for
SPD matrices, and concatenations for products. Points and tangents are
immutable value objects tagged with the oracle's ``manifold_id``; operations
validate tags, finiteness and base points and raise :class:`GeometryError`
rather than silently repairing bad input.

Oracles are stateless after construction and safe to share across threads.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np

from .kernels import hyperboloid as _hyp
from .kernels import spd as _spd

__all__ = [
    "GeometryError",
    "ManifoldPoint",
    "TangentVector",
    "ManifoldOracle",
    "Euclidean",
    "Hyperboloid",
    "SymmetricPositiveDefinite",
    "ProductManifold",
    "product_manifold",
    "point_payload",
    "point_from_payload",
    "tangent_payload",
    "tangent_from_payload",
    "oracle_from_id",
]

# tolerance for deciding two coordinate arrays name the same base point
_BASE_MATCH_TOL = 1e-9
# hyperboloid sheet / tangency defect tolerance
_HYP_DEFECT_TOL = 1e-10
# SPD symmetry defect tolerance
_SPD_SYM_TOL = 1e-12


class GeometryError(ValueError):
    """Invalid geometric input: off-manifold point, mismatched base, non-finite data."""


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    manifold_id: str
    coords: np.ndarray


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Tangent vector in ambient coordinates, anchored at ``base``.

    Supports linear arithmetic between vectors sharing a base point, which is
    how residuals like ``u + n - lam * lg`` are assembled.
    """

    base: ManifoldPoint
    coords: np.ndarray

    def _check_mate(self, other: "TangentVector") -> None:
        if self.base is other.base:
            return
        if self.base.manifold_id != other.base.manifold_id or not np.allclose(
            self.base.coords, other.base.coords, rtol=0.0, atol=_BASE_MATCH_TOL
        ):
            raise GeometryError("tangent arithmetic requires a shared base point")

    def __add__(self, other: "TangentVector") -> "TangentVector":
        self._check_mate(other)
        return TangentVector(self.base, _frozen(self.coords + other.coords))

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        self._check_mate(other)
        return TangentVector(self.base, _frozen(self.coords - other.coords))

    def __neg__(self) -> "TangentVector":
        return TangentVector(self.base, _frozen(-self.coords))

    def __mul__(self, a: float) -> "TangentVector":
        return TangentVector(self.base, _frozen(float(a) * self.coords))

    __rmul__ = __mul__


class ManifoldOracle(abc.ABC):
    """Geometry interface shared by all concrete manifolds."""

    kind: str
    manifold_id: str
    dimension: int
    ambient_dim: int

    # -- coordinate-level maps supplied by subclasses ------------------------

    @abc.abstractmethod
    def _exp(self, p: np.ndarray, v: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _log(self, p: np.ndarray, q: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _dist(self, p: np.ndarray, q: np.ndarray) -> float: ...

    @abc.abstractmethod
    def _transport(self, p: np.ndarray, q: np.ndarray, v: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _inner(self, p: np.ndarray, u: np.ndarray, v: np.ndarray) -> float: ...

    @abc.abstractmethod
    def _check_point(self, c: np.ndarray) -> None: ...

    @abc.abstractmethod
    def _check_tangent(self, p: np.ndarray, c: np.ndarray) -> None: ...

    @abc.abstractmethod
    def _tangent_from_intrinsic(self, p: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Linear (not necessarily isometric) map from R^dimension into T_p."""

    @abc.abstractmethod
    def _origin(self) -> np.ndarray: ...

    def flat_slices(self) -> tuple[tuple[int, int], ...]:
        """Ambient index ranges whose geometry is plain Euclidean (for boxes)."""
        return ()

    # -- validation helpers --------------------------------------------------

    def _as_coords(self, a, what: str) -> np.ndarray:
        arr = np.asarray(a, dtype=float)
        if arr.shape != (self.ambient_dim,):
            raise GeometryError(
                f"{what}: expected {self.ambient_dim} ambient coordinates, "
                f"got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise GeometryError(f"{what}: non-finite coordinates")
        return arr

    def _own(self, p: ManifoldPoint, what: str) -> np.ndarray:
        if p.manifold_id != self.manifold_id:
            raise GeometryError(
                f"{what}: point belongs to {p.manifold_id!r}, not {self.manifold_id!r}"
            )
        return self._as_coords(p.coords, what)

    def _based(self, p: ManifoldPoint, v: TangentVector, what: str) -> np.ndarray:
        if v.base is not p:
            if v.base.manifold_id != p.manifold_id or not np.allclose(
                v.base.coords, p.coords, rtol=0.0, atol=_BASE_MATCH_TOL
            ):
                raise GeometryError(f"{what}: tangent is based at a different point")
        return self._as_coords(v.coords, what)

    # -- constructors --------------------------------------------------------

    def point(self, coords) -> ManifoldPoint:
        c = self._as_coords(coords, "point")
        self._check_point(c)
        return ManifoldPoint(self.manifold_id, _frozen(c))

    def tangent(self, p: ManifoldPoint, coords) -> TangentVector:
        pc = self._own(p, "tangent base")
        c = self._as_coords(coords, "tangent")
        self._check_tangent(pc, c)
        return TangentVector(p, _frozen(c))

    def zero_tangent(self, p: ManifoldPoint) -> TangentVector:
        self._own(p, "zero_tangent")
        return TangentVector(p, _frozen(np.zeros(self.ambient_dim)))

    def origin(self) -> ManifoldPoint:
        return ManifoldPoint(self.manifold_id, _frozen(self._origin()))

    # -- public operations ---------------------------------------------------

    def exp(self, p: ManifoldPoint, v: TangentVector) -> ManifoldPoint:
        pc = self._own(p, "exp")
        vc = self._based(p, v, "exp")
        out = self._exp(pc, vc)
        if not np.all(np.isfinite(out)):
            raise GeometryError("exp produced non-finite coordinates")
        return ManifoldPoint(self.manifold_id, _frozen(out))

    def log(self, p: ManifoldPoint, q: ManifoldPoint) -> TangentVector:
        pc = self._own(p, "log")
        qc = self._own(q, "log")
        return TangentVector(p, _frozen(self._log(pc, qc)))

    def dist(self, p: ManifoldPoint, q: ManifoldPoint) -> float:
        pc = self._own(p, "dist")
        qc = self._own(q, "dist")
        return float(self._dist(pc, qc))

    def transport(self, p: ManifoldPoint, q: ManifoldPoint, v: TangentVector) -> TangentVector:
        pc = self._own(p, "transport")
        qc = self._own(q, "transport")
        vc = self._based(p, v, "transport")
        return TangentVector(q, _frozen(self._transport(pc, qc, vc)))

    def inner(self, p: ManifoldPoint, u: TangentVector, v: TangentVector) -> float:
        pc = self._own(p, "inner")
        uc = self._based(p, u, "inner")
        vc = self._based(p, v, "inner")
        return float(self._inner(pc, uc, vc))

    def norm(self, v: TangentVector) -> float:
        val = self.inner(v.base, v, v)
        return float(np.sqrt(max(val, 0.0)))

    def geodesic(self, p: ManifoldPoint, q: ManifoldPoint, t: float) -> ManifoldPoint:
        return self.exp(p, float(t) * self.log(p, q))

    def law_of_cosines_slack(
        self, p1: ManifoldPoint, p2: ManifoldPoint, p3: ManifoldPoint
    ) -> float:
        """Comparison slack of the geodesic triangle (p1, p2, p3) at corner p3.

        Nonnegative on any nonpositively curved space:
        d^2(p1,p3) + d^2(p3,p2) - 2 <log_{p3} p1, log_{p3} p2>  <=  d^2(p1,p2).
        """
        a = self.dist(p1, p3)
        b = self.dist(p3, p2)
        c = self.dist(p1, p2)
        cross = self.inner(p3, self.log(p3, p1), self.log(p3, p2))
        return c * c - (a * a + b * b - 2.0 * cross)

    # -- sampling ------------------------------------------------------------

    def tangent_from_intrinsic(self, p: ManifoldPoint, z) -> TangentVector:
        pc = self._own(p, "tangent_from_intrinsic")
        z = np.asarray(z, dtype=float)
        if z.shape != (self.dimension,):
            raise GeometryError(
                f"tangent_from_intrinsic: expected {self.dimension} entries, got {z.shape}"
            )
        return TangentVector(p, _frozen(self._tangent_from_intrinsic(pc, z)))

    def random_tangent(
        self, p: ManifoldPoint, rng: np.random.Generator, scale: float = 1.0
    ) -> TangentVector:
        return self.tangent_from_intrinsic(p, scale * rng.standard_normal(self.dimension))

    def random_point(self, rng: np.random.Generator, scale: float = 1.0) -> ManifoldPoint:
        o = self.origin()
        return self.exp(o, self.random_tangent(o, rng, scale))


class Euclidean(ManifoldOracle):
    kind = "euclidean"

    def __init__(self, n: int):
        if n < 1:
            raise GeometryError("Euclidean dimension must be at least 1")
        self.dimension = int(n)
        self.ambient_dim = int(n)
        self.manifold_id = f"euclidean:{n}"

    def _exp(self, p, v):
        return p + v

    def _log(self, p, q):
        return q - p

    def _dist(self, p, q):
        return float(np.linalg.norm(q - p))

    def _transport(self, p, q, v):
        return v.copy()

    def _inner(self, p, u, v):
        return float(u @ v)

    def _check_point(self, c):
        pass

    def _check_tangent(self, p, c):
        pass

    def _tangent_from_intrinsic(self, p, z):
        return z.copy()

    def _origin(self):
        return np.zeros(self.dimension)

    def flat_slices(self):
        return ((0, self.ambient_dim),)


class Hyperboloid(ManifoldOracle):
    """n-dimensional hyperbolic space as the upper hyperboloid sheet in R^{n+1}."""

    kind = "hyperboloid"

    def __init__(self, n: int):
        if n < 1:
            raise GeometryError("hyperboloid dimension must be at least 1")
        self.dimension = int(n)
        self.ambient_dim = int(n) + 1
        self.manifold_id = f"hyperboloid:{n}"

    def _exp(self, p, v):
        return _hyp.exp(p, v)

    def _log(self, p, q):
        return _hyp.log(p, q)

    def _dist(self, p, q):
        return _hyp.dist(p, q)

    def _transport(self, p, q, v):
        return _hyp.transport(p, q, v)

    def _inner(self, p, u, v):
        return _hyp.mink_inner(u, v)

    def _check_point(self, c):
        # the quadratic form is evaluated with ~|c|^2 * eps of noise, so the
        # sheet test must scale with the squared coordinate magnitude
        scale = 1.0 + float(c @ c)
        if _hyp.point_defect(c) > _HYP_DEFECT_TOL * scale:
            raise GeometryError("point is off the unit hyperboloid sheet")
        if c[0] <= 0.0:
            raise GeometryError("point is on the lower hyperboloid sheet")

    def _check_tangent(self, p, c):
        if _hyp.tangent_defect(p, c) > _HYP_DEFECT_TOL * (1.0 + float(np.abs(c).max())):
            raise GeometryError("tangent is not Minkowski-orthogonal to its base")

    def _tangent_from_intrinsic(self, p, z):
        # transporting the origin chart keeps the lift isometric everywhere;
        # projecting the ambient lift instead would blow up far from the origin
        v = np.concatenate(([0.0], z))
        return _hyp.transport(self._origin(), p, v)

    def _origin(self):
        o = np.zeros(self.ambient_dim)
        o[0] = 1.0
        return o


class SymmetricPositiveDefinite(ManifoldOracle):
    """SPD(n) under the affine-invariant metric; coordinates are row-major entries."""

    kind = "spd"

    def __init__(self, n: int):
        if n < 1:
            raise GeometryError("SPD matrix size must be at least 1")
        self.n = int(n)
        self.dimension = int(n * (n + 1) // 2)
        self.ambient_dim = int(n * n)
        self.manifold_id = f"spd:{n}"

    def _mat(self, c):
        return np.ascontiguousarray(c.reshape(self.n, self.n))

    def _exp(self, p, v):
        return _spd.exp(self._mat(p), self._mat(v)).reshape(-1)

    def _log(self, p, q):
        return _spd.log(self._mat(p), self._mat(q)).reshape(-1)

    def _dist(self, p, q):
        return _spd.dist(self._mat(p), self._mat(q))

    def _transport(self, p, q, v):
        return _spd.transport(self._mat(p), self._mat(q), self._mat(v)).reshape(-1)

    def _inner(self, p, u, v):
        return _spd.inner(self._mat(p), self._mat(u), self._mat(v))

    def _check_point(self, c):
        m = self._mat(c)
        if float(np.abs(m - m.T).max()) > _SPD_SYM_TOL:
            raise GeometryError("SPD point is not symmetric")
        if _spd.min_eig(_spd.sym(m)) <= _spd.EIG_FLOOR:
            raise GeometryError("SPD point has an eigenvalue at or below the positivity floor")

    def _check_tangent(self, p, c):
        m = self._mat(c)
        if float(np.abs(m - m.T).max()) > _SPD_SYM_TOL * (1.0 + float(np.abs(m).max())):
            raise GeometryError("SPD tangent is not symmetric")

    def _tangent_from_intrinsic(self, p, z):
        m = np.zeros((self.n, self.n))
        idx = np.triu_indices(self.n)
        m[idx] = z
        m = m + m.T
        m[np.diag_indices(self.n)] *= 0.5
        # congruence by p^{1/2} keeps the chart isometric at every base point
        s, _ = _spd.sqrt_pair(self._mat(p))
        return (s @ m @ s).reshape(-1)

    def _origin(self):
        return np.eye(self.n).reshape(-1)


class ProductManifold(ManifoldOracle):
    """Finite product manifold; all operations act factor-wise.

    Coordinates are the concatenation of the factors' ambient coordinates,
    squared distances add, inner products add, transports act per factor.
    """

    kind = "product"

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise GeometryError("product manifold needs at least one factor")
        self.factors = factors
        self.dimension = sum(f.dimension for f in factors)
        self.ambient_dim = sum(f.ambient_dim for f in factors)
        self.manifold_id = "product[" + "|".join(f.manifold_id for f in factors) + "]"
        offs = np.cumsum([0] + [f.ambient_dim for f in factors])
        self.offsets = tuple(int(o) for o in offs)

    def factor_slice(self, i: int) -> slice:
        return slice(self.offsets[i], self.offsets[i + 1])

    def _parts(self, c):
        return [c[self.factor_slice(i)] for i in range(len(self.factors))]

    def _exp(self, p, v):
        return np.concatenate(
            [f._exp(pc, vc) for f, pc, vc in zip(self.factors, self._parts(p), self._parts(v))]
        )

    def _log(self, p, q):
        return np.concatenate(
            [f._log(pc, qc) for f, pc, qc in zip(self.factors, self._parts(p), self._parts(q))]
        )

    def _dist(self, p, q):
        total = 0.0
        for f, pc, qc in zip(self.factors, self._parts(p), self._parts(q)):
            d = f._dist(pc, qc)
            total += d * d
        return float(np.sqrt(total))

    def _transport(self, p, q, v):
        return np.concatenate(
            [
                f._transport(pc, qc, vc)
                for f, pc, qc, vc in zip(
                    self.factors, self._parts(p), self._parts(q), self._parts(v)
                )
            ]
        )

    def _inner(self, p, u, v):
        return float(
            sum(
                f._inner(pc, uc, vc)
                for f, pc, uc, vc in zip(
                    self.factors, self._parts(p), self._parts(u), self._parts(v)
                )
            )
        )

    def _check_point(self, c):
        for f, pc in zip(self.factors, self._parts(c)):
            f._check_point(pc)

    def _check_tangent(self, p, c):
        for f, pc, cc in zip(self.factors, self._parts(p), self._parts(c)):
            f._check_tangent(pc, cc)

    def _tangent_from_intrinsic(self, p, z):
        out = []
        k = 0
        for f, pc in zip(self.factors, self._parts(p)):
            out.append(f._tangent_from_intrinsic(pc, z[k : k + f.dimension]))
            k += f.dimension
        return np.concatenate(out)

    def _origin(self):
        return np.concatenate([f._origin() for f in self.factors])

    def flat_slices(self):
        out = []
        for i, f in enumerate(self.factors):
            base = self.offsets[i]
            for lo, hi in f.flat_slices():
                out.append((base + lo, base + hi))
        return tuple(out)


def product_manifold(factors) -> ProductManifold:
    return ProductManifold(factors)


# -- serialization -----------------------------------------------------------


def point_payload(p: ManifoldPoint) -> dict:
    return {"manifold_id": p.manifold_id, "coords": [float(x) for x in p.coords]}


def point_from_payload(oracle: ManifoldOracle, payload: dict) -> ManifoldPoint:
    if payload.get("manifold_id") != oracle.manifold_id:
        raise GeometryError(
            f"payload names manifold {payload.get('manifold_id')!r}, "
            f"oracle is {oracle.manifold_id!r}"
        )
    return oracle.point(payload["coords"])


def tangent_payload(v: TangentVector) -> dict:
    return {"manifold_id": v.base.manifold_id, "coords": [float(x) for x in v.coords]}


def tangent_from_payload(
    oracle: ManifoldOracle, base: ManifoldPoint, payload: dict
) -> TangentVector:
    if payload.get("manifold_id") != oracle.manifold_id:
        raise GeometryError(
            f"payload names manifold {payload.get('manifold_id')!r}, "
            f"oracle is {oracle.manifold_id!r}"
        )
    return oracle.tangent(base, payload["coords"])


def oracle_from_id(manifold_id: str) -> ManifoldOracle:
    """Rebuild an oracle from its id string, e.g. ``spd:3`` or ``product[a|b]``."""
    mid = manifold_id.strip()
    if mid.startswith("product[") and mid.endswith("]"):
        inner = mid[len("product[") : -1]
        parts, depth, start = [], 0, 0
        for i, ch in enumerate(inner):
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
            elif ch == "|" and depth == 0:
                parts.append(inner[start:i])
                start = i + 1
        parts.append(inner[start:])
        return ProductManifold([oracle_from_id(s) for s in parts])
    kind, _, size = mid.partition(":")
    if not size.isdigit():
        raise GeometryError(f"unparseable manifold id {manifold_id!r}")
    n = int(size)
    if kind == "euclidean":
        return Euclidean(n)
    if kind == "hyperboloid":
        return Hyperboloid(n)
    if kind == "spd":
        return SymmetricPositiveDefinite(n)
    raise GeometryError(f"unknown manifold kind {kind!r}")
