"""Lorentzian linear algebra on the Minkowski space E^{1,3}.

The bilinear form has signature (-,+,+,+); coordinate x0 is the affine-chart
coordinate, so the chart {x0 = 1} carries the projective (Klein) ball model
of hyperbolic 3-space.  Points of the hyperboloid <x,x> = -1 (x0 > 0) are
hyperbolic points, unit spacelike vectors (<x,x> = +1) are poles of geodesic
half-spaces.

Matrices act on row vectors throughout: ``v @ M``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ORTHO_TOL = 1e-12
DEGENERACY_TOL = 1e-10

_METRIC = np.array([-1.0, 1.0, 1.0, 1.0])


class MinkowskiError(ValueError):
    """Base class for geometric errors in this module."""


class NonSpacelike(MinkowskiError):
    """Normalisation requested for a vector with <a,a> <= tolerance."""


class AtInfinity(MinkowskiError):
    """Chart projection requested for a vector with x0 ~ 0."""


class DegenerateSpan(MinkowskiError):
    """Plane normal requested for (numerically) dependent spanning vectors."""


class AmbiguousOrientation(MinkowskiError):
    """Interior witness lies on the plane, so no outward side exists."""


@dataclass(frozen=True)
class MinkVec:
    """A vector of E^{1,3}; components must be finite."""

    x0: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        for v in (self.x0, self.x1, self.x2, self.x3):
            if not math.isfinite(v):
                raise MinkowskiError(f"non-finite component in {self!r}")

    @classmethod
    def from_array(cls, a) -> "MinkVec":
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x0, self.x1, self.x2, self.x3)

    def __add__(self, other: "MinkVec") -> "MinkVec":
        return MinkVec(self.x0 + other.x0, self.x1 + other.x1,
                       self.x2 + other.x2, self.x3 + other.x3)

    def __sub__(self, other: "MinkVec") -> "MinkVec":
        return MinkVec(self.x0 - other.x0, self.x1 - other.x1,
                       self.x2 - other.x2, self.x3 - other.x3)

    def __mul__(self, s: float) -> "MinkVec":
        return MinkVec(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)

    __rmul__ = __mul__

    def __neg__(self) -> "MinkVec":
        return MinkVec(-self.x0, -self.x1, -self.x2, -self.x3)


@dataclass(frozen=True)
class ChartPoint:
    """A Euclidean point of the affine chart {x0 = 1}."""

    y1: float
    y2: float
    y3: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.y1, self.y2, self.y3)


@dataclass(frozen=True, eq=False)
class TwistMatrix:
    """Rotation by pi/n about the x3 axis composed with the flip x3 -> -x3.

    This is the generator of the rotatory-reflection symmetry carrying each
    wedge of the polyhedron to the next one; its 2n-th power is the identity
    and its determinant is -1.
    """

    n: int
    entries: np.ndarray

    @classmethod
    def for_order(cls, n: int) -> "TwistMatrix":
        if n < 3:
            raise MinkowskiError(f"twist order must be >= 3, got {n}")
        c = math.cos(math.pi / n)
        s = math.sin(math.pi / n)
        m = np.array([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, s, 0.0],
            [0.0, -s, c, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ])
        return cls(n=n, entries=m)

    def inverse(self) -> "TwistMatrix":
        return TwistMatrix(n=self.n, entries=self.entries.T.copy())

    def power(self, k: int) -> np.ndarray:
        return np.linalg.matrix_power(self.entries, k % (2 * self.n))


def twist_matrix(n: int) -> TwistMatrix:
    return TwistMatrix.for_order(n)


def mink_inner(a: MinkVec, b: MinkVec) -> float:
    """Bilinear form -a0*b0 + a1*b1 + a2*b2 + a3*b3."""
    return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3


def mink_norm_sq(a: MinkVec) -> float:
    return mink_inner(a, a)


def normalize_spacelike(a: MinkVec, tol: float = ORTHO_TOL) -> MinkVec:
    """Scale a spacelike vector onto the unit de Sitter sphere <x,x> = 1."""
    nn = mink_norm_sq(a)
    if nn <= tol:
        raise NonSpacelike(f"<a,a> = {nn}, not spacelike")
    return a * (1.0 / math.sqrt(nn))


def apply_twist(a: MinkVec, twist: TwistMatrix) -> MinkVec:
    """Image of a row vector under the twist: a @ N."""
    return MinkVec.from_array(a.as_array() @ twist.entries)


def project_to_chart(a: MinkVec, tol: float = ORTHO_TOL) -> ChartPoint:
    """Radial projection to the affine chart {x0 = 1}."""
    if abs(a.x0) <= tol:
        raise AtInfinity(f"x0 = {a.x0}, direction is parallel to the chart")
    return ChartPoint(a.x1 / a.x0, a.x2 / a.x0, a.x3 / a.x0)


def _lorentz_cross(p: MinkVec, q: MinkVec, r: MinkVec) -> np.ndarray:
    # Cofactor expansion of det(x; p; q; r) gives the Euclidean-orthogonal
    # vector; flipping the sign of the x0 component turns Euclidean
    # orthogonality into Lorentzian orthogonality.
    rows = np.vstack([p.as_array(), q.as_array(), r.as_array()])
    cof = np.empty(4)
    for i in range(4):
        minor = np.delete(rows, i, axis=1)
        cof[i] = ((-1) ** i) * np.linalg.det(minor)
    return _METRIC * cof


def plane_normal(
    p: MinkVec,
    q: MinkVec,
    r: MinkVec,
    interior: MinkVec,
    degeneracy_tol: float = DEGENERACY_TOL,
    orientation_tol: float = ORTHO_TOL,
) -> MinkVec:
    """Outward unit normal of the plane spanned by three lifts.

    The result w satisfies <w,p> = <w,q> = <w,r> = 0 and <w, interior> < 0,
    so the interior witness lies inside the half-space the normal bounds.
    """
    w = _lorentz_cross(p, q, r)
    scale = max(np.max(np.abs(v.as_array())) for v in (p, q, r)) ** 3
    if np.max(np.abs(w)) <= degeneracy_tol * max(scale, 1.0):
        raise DegenerateSpan("spanning vectors are numerically dependent")
    wv = normalize_spacelike(MinkVec.from_array(w))
    side = mink_inner(wv, interior)
    if abs(side) <= orientation_tol:
        raise AmbiguousOrientation("interior witness lies on the plane")
    return -wv if side > 0 else wv
