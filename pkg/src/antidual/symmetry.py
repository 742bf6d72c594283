"""Combinatorial isomorphisms of the tetrahedral decompositions.

An isomorphism is a bijection of pieces together with a vertex-label
bijection per piece, commuting with every face pairing.  Because the
pairing graph is connected, such a map is determined by its value on piece
0, so the full search space is (2n pieces) x (24 label bijections); every
seed is propagated breadth-first and kept only if globally consistent.  No
geometric shortcut prunes the seed space: the classical restrictions (axis
preservation, the eight candidate seeds) come out of the search rather
than going in.

Isometry classification reduces to this search: two quotients with the same
n are isometric iff their decompositions are isomorphic, and the isometry
group is the automorphism group of the decomposition.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .decomposition import Decomposition, arcs, require_div3

_ALL_VERTEX_MAPS = tuple(itertools.permutations(range(4)))


class SymmetryError(ValueError):
    pass


class ClosureFailure(SymmetryError):
    """Composition of enumerated automorphisms left the enumerated set."""


@dataclass(frozen=True)
class CombIso:
    """A combinatorial isomorphism between two decompositions.

    ``pieces[j]`` is the image piece of j; ``vertex_maps[j][x]`` the image
    label of x in piece j.  Source and target are (n, k) tags.
    """

    pieces: tuple[int, ...]
    vertex_maps: tuple[tuple[int, int, int, int], ...]
    source: tuple[int, int]
    target: tuple[int, int]

    def apply_slot(self, piece: int, face: int) -> tuple[int, int]:
        return self.pieces[piece], self.vertex_maps[piece][face]

    def apply_edge(self, piece: int, edge: tuple[int, int]) -> tuple[int, tuple[int, int]]:
        vm = self.vertex_maps[piece]
        return self.pieces[piece], tuple(sorted((vm[edge[0]], vm[edge[1]])))

    def compose(self, other: "CombIso") -> "CombIso":
        """self after other (apply ``other`` first)."""
        if other.target != self.source:
            raise SymmetryError(
                f"cannot compose: {other.target} -> {self.source} mismatch")
        pieces = tuple(self.pieces[p] for p in other.pieces)
        vmaps = tuple(
            tuple(self.vertex_maps[other.pieces[j]][other.vertex_maps[j][x]]
                  for x in range(4))
            for j in range(len(other.pieces))
        )
        return CombIso(pieces, vmaps, other.source, self.target)

    def inverse(self) -> "CombIso":
        m = len(self.pieces)
        inv_pieces = [0] * m
        inv_vmaps: list = [None] * m
        for j in range(m):
            pj = self.pieces[j]
            inv_pieces[pj] = j
            vm = self.vertex_maps[j]
            inv = [0, 0, 0, 0]
            for x in range(4):
                inv[vm[x]] = x
            inv_vmaps[pj] = tuple(inv)
        return CombIso(tuple(inv_pieces), tuple(inv_vmaps),
                       self.target, self.source)

    @classmethod
    def identity(cls, dec: Decomposition) -> "CombIso":
        m = dec.num_pieces
        return cls(tuple(range(m)), ((0, 1, 2, 3),) * m,
                   (dec.n, dec.k), (dec.n, dec.k))

    def is_identity(self) -> bool:
        return (self.pieces == tuple(range(len(self.pieces)))
                and all(v == (0, 1, 2, 3) for v in self.vertex_maps))


def is_isomorphism(iso: CombIso, a: Decomposition, b: Decomposition) -> bool:
    """Check commutation with every pairing (independent of the search)."""
    if len(iso.pieces) != a.num_pieces or a.num_pieces != b.num_pieces:
        return False
    if sorted(iso.pieces) != list(range(a.num_pieces)):
        return False
    for fp in a.pairings:
        src_piece, src_face = fp.piece_a, fp.face_a
        fwd = fp.forward()
        ip, iface = iso.apply_slot(src_piece, src_face)
        try:
            tp, tface, tmap = b.pairing_at(ip, iface)
        except KeyError:
            return False
        if (tp, tface) != iso.apply_slot(fp.piece_b, fp.face_b):
            return False
        vm_a = iso.vertex_maps[src_piece]
        vm_b = iso.vertex_maps[fp.piece_b]
        for x in fwd:
            if tmap[vm_a[x]] != vm_b[fwd[x]]:
                return False
    return True


def _propagate(a: Decomposition, b: Decomposition,
               seed_piece: int, seed_vmap: tuple[int, ...]) -> CombIso | None:
    """Extend a piece-0 seed over the pairing graph; None if inconsistent."""
    m = a.num_pieces
    pieces: list = [None] * m
    vmaps: list = [None] * m
    used = [False] * m
    pieces[0] = seed_piece
    vmaps[0] = tuple(seed_vmap)
    used[seed_piece] = True
    queue = deque([0])
    while queue:
        j = queue.popleft()
        vm = vmaps[j]
        pj = pieces[j]
        for face in range(4):
            j2, face2, smap = a.pairing_at(j, face)
            try:
                tp, tface, tmap = b.pairing_at(pj, vm[face])
            except KeyError:
                return None
            # image of piece j2 and its labels are forced
            new_vm = [None] * 4
            new_vm[face2] = tface
            ok = True
            for x, y in smap.items():
                img = tmap.get(vm[x])
                if img is None:
                    ok = False
                    break
                new_vm[y] = img
            if not ok:
                return None
            if pieces[j2] is None:
                if used[tp]:
                    return None
                pieces[j2] = tp
                vmaps[j2] = tuple(new_vm)
                used[tp] = True
                queue.append(j2)
            else:
                if pieces[j2] != tp or vmaps[j2] != tuple(new_vm):
                    return None
    iso = CombIso(tuple(pieces), tuple(vmaps), (a.n, a.k), (b.n, b.k))
    return iso if is_isomorphism(iso, a, b) else None


def enumerate_isomorphisms(
    a: Decomposition, b: Decomposition, find_all: bool = True
) -> list[CombIso]:
    """All combinatorial isomorphisms a -> b, in deterministic seed order.

    Different n never admit isomorphisms (the piece counts differ), so the
    search is skipped.  With ``find_all=False`` the list holds at most one
    element (useful when only existence matters).
    """
    if a.n != b.n:
        return []
    out = []
    for seed_piece in range(a.num_pieces):
        for vmap in _ALL_VERTEX_MAPS:
            iso = _propagate(a, b, seed_piece, vmap)
            if iso is not None:
                out.append(iso)
                if not find_all:
                    return out
    return out


# -- distinguished elements ---------------------------------------------------


def rotation_iso(dec: Decomposition, steps: int = 1) -> CombIso:
    """The 2*pi/n rotation about the axis: piece j -> j + 2*steps."""
    m = dec.num_pieces
    pieces = tuple((j + 2 * steps) % m for j in range(m))
    return CombIso(pieces, ((0, 1, 2, 3),) * m, (dec.n, dec.k), (dec.n, dec.k))


def flip_iso(dec: Decomposition) -> CombIso:
    """The pi-rotation through the midpoint of the equator edge of piece 0.

    Swaps top and bottom (labels 0<->3, 1<->2) and reverses the wedge order.
    """
    m = dec.num_pieces
    pieces = tuple((-j) % m for j in range(m))
    return CombIso(pieces, ((3, 2, 1, 0),) * m, (dec.n, dec.k), (dec.n, dec.k))


def reflection_iso(dec: Decomposition) -> CombIso:
    """Reflection in the cutting plane between pieces 0 and 1.

    Carries the step-k decomposition onto the step-(n-k-1) one; it is an
    automorphism exactly when k = n-k-1.
    """
    m = dec.num_pieces
    pieces = tuple((1 - j) % m for j in range(m))
    return CombIso(pieces, ((0, 1, 2, 3),) * m,
                   (dec.n, dec.k), (dec.n, (dec.n - dec.k - 1) % dec.n))


@dataclass(frozen=True)
class AutGroupData:
    """The automorphism group as an explicit list of elements."""

    elements: tuple[CombIso, ...]
    order: int
    generators: dict

    def contains(self, iso: CombIso) -> bool:
        key = (iso.pieces, iso.vertex_maps)
        return any((e.pieces, e.vertex_maps) == key for e in self.elements)


def automorphism_group(dec: Decomposition, verify_closure: bool = True) -> AutGroupData:
    """Brute-force automorphism group with closure verification.

    Identifies the distinguished generators when present: ``r`` (the
    rotation), ``t`` (the top-bottom flip), ``u`` (the mirror through a
    cutting plane, present iff k = n-k-1), ``s`` (the half-turn fixing
    piece 0 with labels (0 1)(2 3), present iff n % 3 == 0 and k % 3 == 1).
    """
    elements = enumerate_isomorphisms(dec, dec)
    elements.sort(key=lambda e: (e.pieces, e.vertex_maps))
    keyset = {(e.pieces, e.vertex_maps) for e in elements}

    if verify_closure:
        for x in elements:
            if (x.inverse().pieces, x.inverse().vertex_maps) not in keyset:
                raise ClosureFailure(f"inverse of {x.pieces} not enumerated")
        for x in elements:
            for y in elements:
                z = x.compose(y)
                if (z.pieces, z.vertex_maps) not in keyset:
                    raise ClosureFailure(
                        f"composition left the set: {x.pieces} o {y.pieces}")

    def lookup(candidate: CombIso) -> CombIso | None:
        key = (candidate.pieces, candidate.vertex_maps)
        return candidate if key in keyset else None

    gens = {
        "r": lookup(rotation_iso(dec)),
        "t": lookup(flip_iso(dec)),
        "u": lookup(reflection_iso(dec)),
    }
    s_candidates = [
        e for e in elements
        if e.pieces[0] == 0 and e.vertex_maps[0] == (1, 0, 3, 2)
    ]
    gens["s"] = s_candidates[0] if s_candidates else None
    return AutGroupData(elements=tuple(elements), order=len(elements),
                        generators=gens)


# -- the eight candidate seeds -------------------------------------------------

CANDIDATE_SEEDS = (
    (0, (0, 1, 2, 3)),
    (1, (0, 1, 2, 3)),
    (0, (1, 0, 3, 2)),
    (1, (1, 0, 3, 2)),
    (0, (0, 3, 2, 1)),
    (1, (0, 3, 2, 1)),
    (0, (1, 2, 3, 0)),
    (1, (1, 2, 3, 0)),
)


@dataclass(frozen=True)
class CandidateReport:
    """Extension status of one candidate seed."""

    index: int
    seed_piece: int
    seed_vertex_map: tuple[int, int, int, int]
    extends: bool
    target_k: int | None
    is_automorphism: bool
    iso: CombIso | None


def extend_seed(dec: Decomposition, seed_piece: int, seed_vmap: tuple[int, ...]):
    """Try the seed against every step target; (iso, k') or (None, None)."""
    for k2 in range(dec.n):
        target = dec if k2 == dec.k else Decomposition(dec.n, k2)
        iso = _propagate(dec, target, seed_piece, tuple(seed_vmap))
        if iso is not None:
            return iso, k2
    return None, None


def candidate_maps(dec: Decomposition) -> list[CandidateReport]:
    """Extension report for the eight seeds fixing or swapping piece 0/1.

    These are the seeds sending the top apex of piece 0 to a vertex of
    piece 0 or 1 compatibly with the wedge geometry; the classical analysis
    shows every isomorphism is one of them composed with the rotation
    subgroup, and the full search (which does not assume this) confirms it.
    """
    out = []
    for idx, (piece, vmap) in enumerate(CANDIDATE_SEEDS):
        iso, k2 = extend_seed(dec, piece, vmap)
        out.append(CandidateReport(
            index=idx,
            seed_piece=piece,
            seed_vertex_map=vmap,
            extends=iso is not None,
            target_k=k2,
            is_automorphism=iso is not None and k2 == dec.k,
            iso=iso,
        ))
    return out


def candidate_composition_identities(dec: Decomposition) -> dict[str, bool | None]:
    """The composition identities among the eight candidates.

    Each identity is checked as equality of fully extended maps (the right
    factor applied first); None when either side fails to extend.
    """
    reports = candidate_maps(dec)

    def ext(i: int) -> CombIso | None:
        return reports[i].iso

    def after(outer_idx: int, inner: CombIso | None) -> CombIso | None:
        # candidate ``outer_idx`` re-extended with the inner map's target as
        # its source, composed after the inner map
        if inner is None:
            return None
        k_src = inner.target[1]
        src = dec if k_src == dec.k else Decomposition(dec.n, k_src)
        piece, vmap = CANDIDATE_SEEDS[outer_idx]
        outer, _ = extend_seed(src, piece, vmap)
        return None if outer is None else outer.compose(inner)

    def equal(a: CombIso | None, b: CombIso | None) -> bool | None:
        if a is None or b is None:
            return None
        return (a.pieces, a.vertex_maps, a.target) == (b.pieces, b.vertex_maps, b.target)

    return {
        "phi3 = phi1 . phi2": equal(ext(3), after(1, ext(2))),
        "phi4 = phi1 . phi5": equal(ext(4), after(1, ext(5))),
        "phi5 = phi2 . r^-k-1": equal(
            ext(5), after(2, rotation_iso(dec, steps=-(dec.k + 1)))),
        "phi6 = phi2 . phi4": equal(ext(6), after(2, ext(4))),
        "phi7 = phi5 . t": equal(ext(7), after(5, flip_iso(dec))),
    }


# -- induced actions -----------------------------------------------------------


def arc_permutation(aut: CombIso, dec: Decomposition) -> tuple[int, int, int, int]:
    """Permutation of the arcs (e0, e1, e2, e3) induced by an automorphism.

    Returned as images: position i holds the index j with e_i -> e_j.
    Requires n divisible by 3.
    """
    require_div3(dec)
    if aut.source != aut.target:
        raise SymmetryError("arc permutations are defined for automorphisms")
    arc_map = arcs(dec)
    class_to_arc = {idx: int(label[1]) for label, idx in arc_map.items()}
    rep_slots = {
        "e0": (0, (0, 3)),
        "e1": (0, (0, 1)),
        "e2": (2, (0, 1)),
        "e3": (4, (0, 1)),
    }
    images = []
    for i in range(4):
        piece, edge = rep_slots[f"e{i}"]
        ip, iedge = aut.apply_edge(piece, edge)
        target_class = dec.class_of(ip, iedge)
        if target_class not in class_to_arc:
            raise SymmetryError(
                f"automorphism carries arc e{i} to an unlabelled class")
        images.append(class_to_arc[target_class])
    return tuple(images)


def edge_parity(aut: CombIso) -> int:
    """Parity of the piece receiving the axis edge of piece 0."""
    return aut.pieces[0] % 2


# -- classification -------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationResult:
    n: int
    classes: tuple[tuple[int, ...], ...]


def classify(n: int) -> ClassificationResult:
    """Partition of the steps 0..n-1 into isometry classes by full search."""
    decs = {k: Decomposition(n, k) for k in range(n)}
    assigned: dict[int, int] = {}
    classes: list[list[int]] = []
    for k in range(n):
        if k in assigned:
            continue
        cls = [k]
        assigned[k] = len(classes)
        for k2 in range(k + 1, n):
            if k2 in assigned:
                continue
            if enumerate_isomorphisms(decs[k], decs[k2], find_all=False):
                cls.append(k2)
                assigned[k2] = len(classes)
        classes.append(cls)
    return ClassificationResult(
        n=n, classes=tuple(tuple(c) for c in classes))


def group_to_dict(aut: AutGroupData) -> dict:
    """Permutation realization of the group for JSON export."""
    return {
        "order": aut.order,
        "generators_found": sorted(
            name for name, iso in aut.generators.items() if iso is not None),
        "elements": [
            {"pieces": list(e.pieces),
             "vertex_maps": [list(v) for v in e.vertex_maps]}
            for e in aut.elements
        ],
    }
