"""Linear geometry through the origin: subspaces, reflections, projections, rotations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT


class DimensionError(ValueError):
    pass


def as_point(x) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim != 1 or p.size < 2 or not np.all(np.isfinite(p)):
        raise ValueError(f"not a finite point in R^n, n >= 2: {x!r}")
    return p


def unit(x) -> np.ndarray:
    """Normalize ``x`` to a unit direction."""
    p = as_point(x)
    n = np.linalg.norm(p)
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    return p / n


def direction(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta)])


def _orthonormalize(basis: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(basis.T)
    if np.any(np.abs(np.diag(r)) < 1e-14):
        raise ValueError("subspace basis is rank deficient")
    # fix signs so the first basis vector keeps its orientation
    q = q * np.sign(np.diag(r))
    return q.T


@dataclass(frozen=True)
class LineSubspace:
    """A linear subspace H through the origin, stored by an orthonormal basis.

    In the plane a line is identified with its angle in [0, pi); build it with
    :meth:`from_angle`.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=float))
        n = b.shape[1]
        if n < 2 or not 1 <= b.shape[0] <= n - 1:
            raise ValueError(f"subspace of dimension {b.shape[0]} in R^{n}")
        drift = np.abs(b @ b.T - np.eye(b.shape[0])).max()
        if drift > DEFAULT.unit_norm:
            b = _orthonormalize(b)
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @classmethod
    def from_angle(cls, angle: float) -> "LineSubspace":
        return cls(direction(angle % math.pi)[None, :])

    @classmethod
    def orthogonal_to(cls, u) -> "LineSubspace":
        """The hyperplane u-perp."""
        u = unit(u)
        n = u.size
        full = np.linalg.svd(u[None, :])[2]
        return cls(full[1:n])

    @property
    def ambient(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def angle(self) -> float:
        """Angle in [0, pi) of a line in the plane."""
        if self.ambient != 2:
            raise DimensionError("angle is only defined for lines in R^2")
        b = self.basis[0]
        a = math.atan2(b[1], b[0]) % math.pi
        return 0.0 if a >= math.pi else a

    @property
    def normal(self) -> np.ndarray:
        """Unit normal of a hyperplane (2D: the line rotated by +90 degrees)."""
        if self.dim != self.ambient - 1:
            raise DimensionError("normal is defined for hyperplanes only")
        if self.ambient == 2:
            b = self.basis[0]
            return np.array([-b[1], b[0]])
        return np.linalg.svd(self.basis)[2][-1]

    def contains(self, x, tol: float = DEFAULT.unit_norm) -> bool:
        p = as_point(x)
        return bool(np.linalg.norm(p - project_point(p, self)) <= tol * max(1.0, np.linalg.norm(p)))


def _check(x: np.ndarray, H: LineSubspace):
    if x.shape[-1] != H.ambient:
        raise DimensionError(f"point in R^{x.shape[-1]} vs subspace in R^{H.ambient}")


def project_point(x, H: LineSubspace) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    _check(x, H)
    return (x @ H.basis.T) @ H.basis


def reflect_point(x, H: LineSubspace) -> np.ndarray:
    """Reflection x -> x - 2 P_{H-perp} x. Works on (n,) or (k, n) arrays."""
    x = np.asarray(x, dtype=float)
    _check(x, H)
    return 2.0 * project_point(x, H) - x


def reflection_matrix(H: LineSubspace) -> np.ndarray:
    return 2.0 * H.basis.T @ H.basis - np.eye(H.ambient)


@dataclass(frozen=True)
class RotationOp:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("rotation matrix must be square")
        if np.abs(m.T @ m - np.eye(m.shape[0])).max() > DEFAULT.orthogonality:
            raise ValueError("matrix is not orthogonal")
        if np.linalg.det(m) <= 0:
            raise ValueError("matrix is a reflection, not a rotation")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, n: int = 2) -> "RotationOp":
        return cls(np.eye(n))

    @classmethod
    def planar(cls, angle: float) -> "RotationOp":
        c, s = math.cos(angle), math.sin(angle)
        return cls(np.array([[c, -s], [s, c]]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def angle(self) -> float:
        """Rotation angle of a planar rotation, in (-pi, pi]."""
        if self.dim != 2:
            raise DimensionError("angle is only defined in R^2")
        return math.atan2(self.matrix[1, 0], self.matrix[0, 0])

    def apply(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.matrix.T

    def inverse(self) -> "RotationOp":
        return RotationOp(self.matrix.T)

    def __matmul__(self, other: "RotationOp") -> "RotationOp":
        if self.dim != other.dim:
            raise DimensionError("composing rotations of different dimension")
        return RotationOp(self.matrix @ other.matrix)


def rotation_between(u, v) -> RotationOp:
    """Rotation in span{u, v} taking u to v and fixing the orthogonal complement."""
    u, v = unit(u), unit(v)
    if u.size != v.size:
        raise DimensionError("directions of different dimension")
    c = float(np.clip(u @ v, -1.0, 1.0))
    w = v - c * u
    s = float(np.linalg.norm(w))
    n = u.size
    if s < 1e-15:
        if c > 0:
            return RotationOp(np.eye(n))
        raise ValueError("antipodal directions: rotation plane is ambiguous")
    w = w / s
    # R = I + s (w u^T - u w^T) + (c - 1)(u u^T + w w^T)
    m = np.eye(n) + s * (np.outer(w, u) - np.outer(u, w)) + (c - 1.0) * (np.outer(u, u) + np.outer(w, w))
    return RotationOp(m)


def rotation_distance(A: RotationOp, B: RotationOp) -> float:
    """Operator norm of A - B (largest singular value)."""
    if A.dim != B.dim:
        raise DimensionError("rotations of different dimension")
    return float(np.linalg.norm(A.matrix - B.matrix, ord=2))
