"""Tilts of the truncated wedge and canonicality of the segment decomposition.

The tilt of an internal face measures, per piece, on which side of the
supporting hyperplane of the piece's truncation poles the neighbouring
poles fall.  With every tilt negative, the convex hull of the pole orbit is
locally convex across every face and the decomposition into the 2n wedges
is the canonical one.

Two independent routes are provided:

* ``tilts_from_gram`` -- the Gram-matrix equation over the directly computed
  face normals (authoritative for the verdict);
* closed forms in (n, h): ``tilts_closed_form`` evaluates the reference
  algebraic forms with second factors ``sqrt(1-c)(1+c)(2c - sqrt(1-c))`` and
  ``(c - sqrt(1-c))``, while ``tilts_exact_form`` evaluates the reduction of
  the Gram route, with factors ``(1-c)(1+c)(2c-1)`` and ``(2c-1)``.  The two
  variants have the same signs for n >= 4 but different values; the exact
  forms agree with the Gram route to rounding, the reference forms do not.
  ``convention_report`` records all of this, including the variant where the
  far-side normal is replaced by the near-side one inside the Gram matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .minkowski import MinkVec, mink_inner
from .realization import NumericalDegeneracy, Realization, UnsupportedN

SINGULAR_TOL = 1e-12
TILT_SYMMETRY_TOL = 1e-9
AGREEMENT_REPORT_TOL = 1e-6


class SingularPairing(ValueError):
    """A face/pole pairing is numerically orthogonal; reciprocal blows up."""


@dataclass(frozen=True)
class TiltVector:
    """Tilts of the four internal faces of one wedge.

    ``common_factor`` and ``upper_scale_denom`` carry the closed-form
    intermediates (the shared positive factor under the square root and the
    denominator scaling the upper/lower tilts); they are None for the Gram
    route.
    """

    t_upper: float
    t_lower: float
    t_near: float
    t_far: float
    method: str
    common_factor: float | None = None
    upper_scale_denom: float | None = None

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.t_upper, self.t_lower, self.t_near, self.t_far)

    @property
    def max_tilt(self) -> float:
        return max(self.as_tuple())


@dataclass(frozen=True)
class CanonicalityVerdict:
    is_canonical: bool
    margin: float
    agreement_residual: float
    exact_agreement_residual: float


def _face_pole_pairs(real: Realization) -> tuple[tuple[MinkVec, MinkVec], ...]:
    # each face paired with the truncation pole of the one wedge vertex that
    # does not lie on the face's plane (the vertex the face looks at)
    return (
        (real.normal_upper, real.apex_bottom),
        (real.normal_lower, real.apex_top),
        (real.normal_near, real.mid_lower),
        (real.normal_far, real.mid_upper),
    )


def gram_matrix(real: Realization, far_equals_near: bool = False) -> np.ndarray:
    """Pairwise inner products of the face normals (order: upper, lower,
    near, far), with unit diagonal.

    ``far_equals_near`` substitutes the near-side normal for the far-side
    one, a deliberately wrong convention kept for comparison reports.
    """
    normals = list(real.face_normals())
    if far_equals_near:
        normals[3] = normals[2]
    g = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            g[i, j] = mink_inner(normals[i], normals[j])
    return g


def tilts_from_gram(
    real: Realization,
    far_equals_near: bool = False,
    singular_tol: float = SINGULAR_TOL,
) -> TiltVector:
    """Tilt vector from the Gram-matrix equation.

    t = G . (-1 / <face_i, pole_i>) where pole_i is the truncation pole the
    face looks at.  The pole pairings always use the directly computed
    normals: substituting the near normal for the far one there would pair a
    face with a pole lying on its own plane (an exactly zero inner product).
    """
    g = gram_matrix(real, far_equals_near=far_equals_near)
    rhs = np.empty(4)
    for i, (face, pole) in enumerate(_face_pole_pairs(real)):
        inner = mink_inner(face, pole)
        if abs(inner) < singular_tol:
            raise SingularPairing(f"face/pole pairing {i} is orthogonal")
        rhs[i] = -1.0 / inner
    t = g @ rhs
    return TiltVector(
        t_upper=float(t[0]), t_lower=float(t[1]),
        t_near=float(t[2]), t_far=float(t[3]),
        method="gram",
    )


def _closed_form(n: int, h: float, reduced: bool) -> TiltVector:
    if n < 4:
        raise UnsupportedN(f"n must be >= 4, got {n}")
    c = math.cos(math.pi / n)
    common = (h * h - 1.0) / (
        (1 + c) ** 2 * (2 * c - 1) + (1 - c) ** 2 * (2 * c + 1) * h * h
    )
    denom = (1 + c) * ((1 - c) * h * h + (1 + c) * (2 * c - 1)) + h * h * (1 - c) * (
        1 + c - (1 - c) * (2 * c + 1) * h * h
    )
    if common <= 0 or denom <= 0:
        raise NumericalDegeneracy(
            f"closed-form intermediates lost positivity at n={n}, h={h}: "
            f"{common}, {denom}"
        )
    if reduced:
        brace = (1 - c) ** 2 * (2 * c + 1) * h * h + (1 - c) * (1 + c) * (2 * c - 1)
        scalar = 2 * c - 1
    else:
        brace = (1 - c) ** 2 * (2 * c + 1) * h * h + math.sqrt(1 - c) * (1 + c) * (
            2 * c - math.sqrt(1 - c)
        )
        scalar = c - math.sqrt(1 - c)
    t_upper = -h * math.sqrt(common / denom) * brace
    t_near = -math.sqrt(common) * math.sqrt(1 - c) * math.sqrt(1 + c) * scalar
    return TiltVector(
        t_upper=t_upper, t_lower=t_upper, t_near=t_near, t_far=t_near,
        method="closed_form_reduced" if reduced else "closed_form",
        common_factor=common, upper_scale_denom=denom,
    )


def tilts_closed_form(n: int, h: float) -> TiltVector:
    """Reference closed forms (factors with sqrt(1-c); see module docstring)."""
    return _closed_form(n, h, reduced=False)


def tilts_exact_form(n: int, h: float) -> TiltVector:
    """Closed forms reducing the Gram route exactly (factors with 2c-1)."""
    return _closed_form(n, h, reduced=True)


def _max_abs_diff(a: TiltVector, b: TiltVector) -> float:
    return max(abs(x - y) for x, y in zip(a.as_tuple(), b.as_tuple()))


def canonicality_verdict(real: Realization) -> CanonicalityVerdict:
    """Canonicality from the Gram route; closed-form residuals recorded."""
    gram = tilts_from_gram(real)
    reference = tilts_closed_form(real.params.n, real.params.h)
    exact = tilts_exact_form(real.params.n, real.params.h)
    margin = gram.max_tilt
    return CanonicalityVerdict(
        is_canonical=margin < 0.0,
        margin=margin,
        agreement_residual=_max_abs_diff(gram, reference),
        exact_agreement_residual=_max_abs_diff(gram, exact),
    )


@dataclass(frozen=True)
class ConventionReport:
    """Residuals of the reference closed forms against each Gram variant."""

    residual_direct: float
    residual_far_equals_near: float
    residual_exact_vs_direct: float
    signs_agree: bool
    matching_convention: str | None


def convention_report(
    real: Realization, tol: float = AGREEMENT_REPORT_TOL
) -> ConventionReport:
    """Which Gram convention, if any, reproduces the reference closed forms.

    Also records that the reduced closed forms match the direct Gram route,
    and whether the reference forms at least have the right signs.
    """
    direct = tilts_from_gram(real)
    substituted = tilts_from_gram(real, far_equals_near=True)
    reference = tilts_closed_form(real.params.n, real.params.h)
    exact = tilts_exact_form(real.params.n, real.params.h)
    res_direct = _max_abs_diff(direct, reference)
    res_sub = _max_abs_diff(substituted, reference)
    matching = None
    if res_direct < tol:
        matching = "direct"
    elif res_sub < tol:
        matching = "far_equals_near"
    signs = all(
        (x < 0) == (y < 0)
        for x, y in zip(direct.as_tuple(), reference.as_tuple())
    )
    return ConventionReport(
        residual_direct=res_direct,
        residual_far_equals_near=res_sub,
        residual_exact_vs_direct=_max_abs_diff(direct, exact),
        signs_agree=signs,
        matching_convention=matching,
    )


def support_hull_margins(real: Realization) -> dict[str, float]:
    """Independent canonicality certificate from the pole hull.

    For the support vector q of the wedge's four poles (normalised to
    <q, pole> = 1), develops the neighbouring piece across each internal
    face and returns <w, q> - 1 for its remaining pole w.  All margins
    strictly positive means the hull is locally convex at every face, i.e.
    the decomposition is canonical.
    """
    tw = real.twist
    ups, tau = real.apex_bottom, real.apex_top
    alp, dlt = real.mid_upper, real.mid_lower
    bet, gam = real.normal_upper, real.normal_lower

    poles = np.vstack([v.as_array() for v in (tau, ups, alp, dlt)])
    metric = np.array([-1.0, 1.0, 1.0, 1.0])
    q = np.linalg.solve(poles * metric, np.ones(4))

    def margin(w: np.ndarray) -> float:
        return float((w * metric) @ q - 1.0)

    w_near = alp.as_array() @ tw.entries.T
    w_far = dlt.as_array() @ tw.entries
    # develop across the upper face: the congruence taking the frame
    # (mid_upper, mid_lower, apex_bottom, lower normal) to
    # (apex_top, mid_upper, mid_lower, -upper normal)
    src = np.vstack([v.as_array() for v in (alp, dlt, ups, gam)])
    dst = np.vstack([v.as_array() for v in (tau, alp, dlt, -bet)])
    w_up = tau.as_array() @ np.linalg.solve(src, dst)
    src2 = np.vstack([v.as_array() for v in (dlt, alp, tau, bet)])
    dst2 = np.vstack([v.as_array() for v in (ups, dlt, alp, -gam)])
    w_dn = ups.as_array() @ np.linalg.solve(src2, dst2)

    return {
        "near_side": margin(w_near),
        "far_side": margin(w_far),
        "upper": margin(w_up),
        "lower": margin(w_dn),
    }
