"""The labelled tetrahedral decomposition of the step-k quotient.

The antiprism dual with 2n quad faces is cut along the n planes through its
axis into 2n tetrahedral wedges, numbered so that the wedge containing the
i-th upper-to-lower equator edge is 2i and the next one (containing the
lower-to-upper edge) is 2i+1.  Within a piece the vertex labels are

    0 = top apex, 1 = upper middle, 2 = lower middle, 3 = bottom apex,

and faces are addressed by their opposite vertex.  The step-k rule matches
the upper quad through pieces (2i, 2i+1) with the lower quad through pieces
(2(i+k)+1, 2(i+k)+2); together with the side cuts this yields 4n internal
triangle pairings, each an involution carrying a bijection of the three
shared vertex labels.

Internal edges fall into three families, each closed under the pairings:

* the axis edges {0,3} (one arc with 2n wedges);
* the polyhedron edges {0,1}, {1,2}, {2,3}, i.e. the original edges of the
  uncut polyhedron (one class of 6n wedges when n is not divisible by 3,
  otherwise three classes of 2n wedges);
* the quad diagonals {0,2} and {1,3} created by the cutting (n classes of
  4 wedges each; they contribute to the boundary genus).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .minkowski import mink_inner
from .realization import DihedralAngles, Realization

ANGLE_SUM_TOL = 1e-9


class DecompositionError(ValueError):
    pass


class InvalidStep(DecompositionError):
    """n or k outside the valid range."""


class DescentFailure(DecompositionError):
    """A quad pairing failed to carry cut diagonals to cut diagonals."""


class WrongCase(DecompositionError):
    """Arc labels e1..e3 requested although n is not divisible by 3."""


class NonManifold(DecompositionError):
    """An external edge of the boundary complex is not shared by 2 faces."""


# label maps of the two pairing families; faces are {0,1,2,3} minus the
# opposite vertex, maps are stored as (source label -> target label)
_SIDE_LOWER_MAP = ((0, 0), (2, 2), (3, 3))   # faces opp 1, shared lower-mid
_SIDE_UPPER_MAP = ((0, 0), (1, 1), (3, 3))   # faces opp 2, shared upper-mid
_QUAD_MAP = ((0, 1), (1, 2), (2, 3))         # face opp 3 onto face opp 0


@dataclass(frozen=True)
class FacePairing:
    """An identification of two internal triangle slots.

    ``vertex_map`` sends the three labels of face (piece_a, face_a) to the
    labels of face (piece_b, face_b).
    """

    piece_a: int
    face_a: int
    piece_b: int
    face_b: int
    vertex_map: tuple[tuple[int, int], ...]

    def forward(self) -> dict[int, int]:
        return dict(self.vertex_map)

    def backward(self) -> dict[int, int]:
        return {b: a for a, b in self.vertex_map}


_ROLE_BY_EDGE = {
    (0, 3): "axis",
    (0, 1): "slant_upper",
    (2, 3): "slant_lower",
    (1, 2): "equator",
    (0, 2): "diag_upper",
    (1, 3): "diag_lower",
}

_KIND_BY_ROLE = {
    "axis": "axis",
    "slant_upper": "poly",
    "slant_lower": "poly",
    "equator": "poly",
    "diag_upper": "diagonal",
    "diag_lower": "diagonal",
}


@dataclass(frozen=True)
class EdgeClass:
    """An orbit of (piece, edge) wedge slots under the pairing action."""

    wedges: tuple[tuple[int, tuple[int, int]], ...]
    kind: str

    @property
    def wedge_count(self) -> int:
        return len(self.wedges)

    @property
    def distinct_piece_count(self) -> int:
        return len({p for p, _ in self.wedges})

    def role_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for _, edge in self.wedges:
            role = _ROLE_BY_EDGE[edge]
            counts[role] = counts.get(role, 0) + 1
        return counts

    def contains(self, piece: int, edge: tuple[int, int]) -> bool:
        return (piece, tuple(sorted(edge))) in set(self.wedges)


@dataclass(frozen=True)
class BoundarySurface:
    vertex_count: int
    edge_count: int
    face_count: int
    euler_characteristic: int
    genus: int
    is_orientable: bool
    is_connected: bool


class Decomposition:
    """The face-paired complex of 2n labelled tetrahedra for given (n, k)."""

    def __init__(self, n: int, k: int):
        if n < 4:
            raise InvalidStep(f"n must be >= 4, got {n}")
        if not 0 <= k <= n - 1:
            raise InvalidStep(f"k must lie in 0..{n - 1}, got {k}")
        self.n = n
        self.k = k
        self.num_pieces = 2 * n
        self.pairings = self._build_pairings()
        self._slot = {}
        for fp in self.pairings:
            fwd = fp.forward()
            self._slot[(fp.piece_a, fp.face_a)] = (fp.piece_b, fp.face_b, fwd)
            self._slot[(fp.piece_b, fp.face_b)] = (
                fp.piece_a, fp.face_a, fp.backward())
        self._check_descent()
        self.edge_classes = self._compute_edge_classes()
        self._class_of_slot = {
            w: idx for idx, cls in enumerate(self.edge_classes) for w in cls.wedges
        }

    # -- construction -----------------------------------------------------

    def _build_pairings(self) -> tuple[FacePairing, ...]:
        n, k = self.n, self.k
        m = 2 * n
        out = []
        for i in range(n):
            out.append(FacePairing(2 * i, 1, (2 * i + 1) % m, 1, _SIDE_LOWER_MAP))
            out.append(FacePairing(2 * i + 1, 2, (2 * i + 2) % m, 2, _SIDE_UPPER_MAP))
            out.append(FacePairing(2 * i, 3, (2 * i + 2 * k + 2) % m, 0, _QUAD_MAP))
            out.append(FacePairing(2 * i + 1, 3, (2 * i + 2 * k + 1) % m, 0, _QUAD_MAP))
        return tuple(out)

    def _check_descent(self):
        # the cut diagonal of an upper quad is the {0,2} edge of its two
        # opp-3 faces; the step rule must send it onto the {1,3} diagonal of
        # the receiving lower quad, otherwise the quad identification does
        # not descend to the cut triangles
        for fp in self.pairings:
            if fp.face_a != 3:
                continue
            fwd = fp.forward()
            image = {fwd[0], fwd[2]}
            if image != {1, 3}:
                raise DescentFailure(
                    f"pairing {fp} carries the upper diagonal to {sorted(image)}"
                )

    def pairing_at(self, piece: int, face: int):
        """(other piece, other face, label map) across an internal slot."""
        return self._slot[(piece, face)]

    def slots(self):
        return self._slot.keys()

    # -- edge classes ------------------------------------------------------

    def _compute_edge_classes(self) -> tuple[EdgeClass, ...]:
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        for p in range(self.num_pieces):
            for e in edges:
                parent[(p, e)] = (p, e)
        for fp in self.pairings:
            fwd = fp.forward()
            labels = sorted(fwd)
            for a in range(3):
                for b in range(a + 1, 3):
                    u, v = labels[a], labels[b]
                    src = (fp.piece_a, (u, v))
                    img = tuple(sorted((fwd[u], fwd[v])))
                    union(src, (fp.piece_b, img))

        groups: dict = {}
        for slot in parent:
            groups.setdefault(find(slot), []).append(slot)

        classes = []
        for members in groups.values():
            members.sort()
            kinds = {_KIND_BY_ROLE[_ROLE_BY_EDGE[e]] for _, e in members}
            if len(kinds) != 1:
                raise DecompositionError(
                    f"edge class mixes families {kinds}: {members[:4]}..."
                )
            classes.append(EdgeClass(wedges=tuple(members), kind=kinds.pop()))
        order = {"axis": 0, "poly": 1, "diagonal": 2}
        classes.sort(key=lambda c: (order[c.kind], c.wedges[0]))
        return tuple(classes)

    def class_of(self, piece: int, edge: tuple[int, int]) -> int:
        """Index of the edge class containing the given wedge slot."""
        return self._class_of_slot[(piece, tuple(sorted(edge)))]

    @property
    def axis_class(self) -> EdgeClass:
        return self.edge_classes[0]

    @property
    def poly_classes(self) -> tuple[EdgeClass, ...]:
        return tuple(c for c in self.edge_classes if c.kind == "poly")

    @property
    def diagonal_classes(self) -> tuple[EdgeClass, ...]:
        return tuple(c for c in self.edge_classes if c.kind == "diagonal")


def build_decomposition(n: int, k: int) -> Decomposition:
    return Decomposition(n, k)


def edge_classes(dec: Decomposition) -> tuple[EdgeClass, ...]:
    return dec.edge_classes


def arcs(dec: Decomposition) -> dict[str, int]:
    """Arc labels to edge-class indices.

    For n divisible by 3 the polyhedron edges split into the three arcs
    e1, e2, e3 containing the slant edges of pieces 0, 2, 4; otherwise they
    merge into a single arc.  e0 is always the axis arc.
    """
    out = {"e0": dec.class_of(0, (0, 3))}
    if dec.n % 3 == 0:
        out["e1"] = dec.class_of(0, (0, 1))
        out["e2"] = dec.class_of(2, (0, 1))
        out["e3"] = dec.class_of(4, (0, 1))
    else:
        out["single"] = dec.class_of(0, (0, 1))
    return out


def arc_label_of_class(dec: Decomposition, class_index: int) -> str | None:
    """Inverse of ``arcs``: None for diagonal classes."""
    for label, idx in arcs(dec).items():
        if idx == class_index:
            return label
    return None


def require_div3(dec: Decomposition):
    if dec.n % 3 != 0:
        raise WrongCase(f"arcs e1..e3 exist only for n divisible by 3 (n={dec.n})")


# -- boundary surface -------------------------------------------------------


def _boundary_triangles(dec: Decomposition):
    # one truncation triangle per (piece, vertex); its corners are the ends
    # of the three edges at that vertex, tagged by the other endpoint
    return [(p, v) for p in range(dec.num_pieces) for v in range(4)]


def boundary_surface(dec: Decomposition) -> BoundarySurface:
    """Euler characteristic, genus, orientability of the quotient boundary.

    The boundary is assembled from the 8n truncation triangles; each
    internal pairing glues the triangle edges lying on the identified faces.
    """
    tris = _boundary_triangles(dec)
    tri_index = {t: i for i, t in enumerate(tris)}

    # corner identifications: corner (piece, v, u) = end of edge {v,u} on
    # the truncation triangle of v
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for p, v in tris:
        for u in range(4):
            if u != v:
                parent[(p, v, u)] = (p, v, u)

    # each boundary edge slot: (piece, v, w) = the side of triangle (p, v)
    # facing internal face opp w; glued via the pairing at (p, w)
    edge_glue = {}
    for p, v in tris:
        for w in range(4):
            if w == v:
                continue
            p2, w2, fwd = dec.pairing_at(p, w)
            v2 = fwd[v]
            edge_glue[(p, v, w)] = (p2, v2, w2)
            u1, u2 = [x for x in range(4) if x not in (v, w)]
            union((p, v, u1), (p2, v2, fwd[u1]))
            union((p, v, u2), (p2, v2, fwd[u2]))

    # manifold check: edge gluing must be a fixed-point-free involution
    for slot, img in edge_glue.items():
        if edge_glue[img] != slot or img == slot:
            raise NonManifold(f"boundary edge {slot} glued inconsistently")

    face_count = len(tris)
    edge_count = len(edge_glue) // 2
    vertex_count = len({find(c) for c in parent})
    euler = vertex_count - edge_count + face_count

    # orientability: orient each triangle by the sorted cyclic order of its
    # corner tags and 2-colour so glued edges receive opposite directions
    def direction(v, u1, u2):
        ring = [x for x in range(4) if x != v]
        i1, i2 = ring.index(u1), ring.index(u2)
        return 1 if (i2 - i1) % 3 == 1 else -1

    orientation = {}
    is_orientable = True
    components = 0
    for start in tris:
        if start in orientation:
            continue
        components += 1
        orientation[start] = 1
        stack = [start]
        while stack:
            p, v = stack.pop()
            for w in range(4):
                if w == v:
                    continue
                p2, w2, fwd = dec.pairing_at(p, w)
                v2 = fwd[v]
                u1, u2 = [x for x in range(4) if x not in (v, w)]
                d1 = direction(v, u1, u2)
                d2 = direction(v2, fwd[u1], fwd[u2])
                needed = -orientation[(p, v)] * d1 * d2
                if (p2, v2) not in orientation:
                    orientation[(p2, v2)] = needed
                    stack.append((p2, v2))
                elif orientation[(p2, v2)] != needed:
                    is_orientable = False

    is_connected = components == 1
    genus = (2 - euler) // 2 if is_orientable and is_connected else -1
    return BoundarySurface(
        vertex_count=vertex_count,
        edge_count=edge_count,
        face_count=face_count,
        euler_characteristic=euler,
        genus=genus,
        is_orientable=is_orientable,
        is_connected=is_connected,
    )


# -- angle sums --------------------------------------------------------------


@dataclass(frozen=True)
class AngleSumReport:
    """Per edge class, the sum of its wedge angles minus 2*pi."""

    residuals: tuple[float, ...]
    classes_checked: int
    max_residual: float
    all_within: bool
    tolerance: float = field(default=ANGLE_SUM_TOL)


def angle_sum_check(
    dec: Decomposition,
    angles: DihedralAngles,
    real: Realization | None = None,
    tol: float = ANGLE_SUM_TOL,
) -> AngleSumReport:
    """Verify that the wedge angles around every edge class sum to 2*pi.

    Axis wedges contribute pi/n, slant wedges the slant angle, equator
    wedges the equator angle.  The quad-diagonal classes need the face
    normals to evaluate their two angles, so they are checked only when the
    realization is supplied (the two angles are right angles, and each
    diagonal class has four wedges).
    """
    axis_angle = math.pi / dec.n
    role_angle = {
        "axis": axis_angle,
        "slant_upper": angles.slant,
        "slant_lower": angles.slant,
        "equator": angles.equator,
    }
    if real is not None:
        role_angle["diag_upper"] = math.acos(
            -mink_inner(real.normal_far, real.normal_upper))
        role_angle["diag_lower"] = math.acos(
            -mink_inner(real.normal_lower, real.normal_near))

    residuals = []
    for cls in dec.edge_classes:
        if cls.kind == "diagonal" and real is None:
            continue
        total = sum(
            role_angle[role] * count for role, count in cls.role_counts().items()
        )
        residuals.append(total - 2 * math.pi)
    max_res = max(abs(x) for x in residuals)
    return AngleSumReport(
        residuals=tuple(residuals),
        classes_checked=len(residuals),
        max_residual=max_res,
        all_within=max_res < tol,
        tolerance=tol,
    )


# -- serialization -----------------------------------------------------------


def decomposition_to_dict(dec: Decomposition) -> dict:
    """Documented JSON form: pieces, pairings with vertex maps, edge classes."""
    return {
        "n": dec.n,
        "k": dec.k,
        "pieces": dec.num_pieces,
        "pairings": [
            {
                "a": [fp.piece_a, fp.face_a],
                "b": [fp.piece_b, fp.face_b],
                "map": [list(pair) for pair in fp.vertex_map],
            }
            for fp in dec.pairings
        ],
        "edge_classes": [
            {
                "kind": cls.kind,
                "wedge_count": cls.wedge_count,
                "distinct_pieces": cls.distinct_piece_count,
                "wedges": [[p, list(e)] for p, e in cls.wedges],
            }
            for cls in dec.edge_classes
        ],
        "arcs": arcs(dec),
    }
