import json
import math
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from antidual.decomposition import (
    InvalidStep,
    WrongCase,
    angle_sum_check,
    arcs,
    boundary_surface,
    build_decomposition,
    decomposition_to_dict,
    require_div3,
)
from antidual.realization import dihedral_angles, realize

GOLDEN = Path(__file__).parent / "golden"


def test_counting_for_4_0():
    dec = build_decomposition(4, 0)
    assert dec.num_pieces == 8
    assert len(dec.pairings) == 16  # 8 pieces x 4 internal faces / 2


def test_invalid_inputs():
    with pytest.raises(InvalidStep):
        build_decomposition(3, 1)
    with pytest.raises(InvalidStep):
        build_decomposition(5, 5)
    with pytest.raises(InvalidStep):
        build_decomposition(5, -1)


def test_pairing_involution():
    dec = build_decomposition(6, 2)
    for piece, face in dec.slots():
        p2, f2, fwd = dec.pairing_at(piece, face)
        p3, f3, back = dec.pairing_at(p2, f2)
        assert (p3, f3) == (piece, face)
        for x, y in fwd.items():
            assert back[y] == x


def test_every_internal_slot_paired_once():
    dec = build_decomposition(7, 3)
    assert set(dec.slots()) == {
        (p, f) for p in range(dec.num_pieces) for f in range(4)
    }


@pytest.mark.parametrize("n,k", [(5, 2), (7, 0), (8, 3), (10, 7)])
def test_not_div3_census(n, k):
    dec = build_decomposition(n, k)
    assert dec.axis_class.wedge_count == 2 * n
    assert dec.axis_class.distinct_piece_count == 2 * n
    polys = dec.poly_classes
    assert len(polys) == 1
    assert polys[0].wedge_count == 6 * n
    assert len(dec.diagonal_classes) == n
    assert all(c.wedge_count == 4 for c in dec.diagonal_classes)


@pytest.mark.parametrize("n,k,subcase22", [
    (6, 0, False), (6, 1, True), (9, 1, True), (9, 2, False), (12, 4, True),
    (12, 5, False),
])
def test_div3_census(n, k, subcase22):
    dec = build_decomposition(n, k)
    polys = dec.poly_classes
    assert len(polys) == 3
    for cls in polys:
        assert cls.wedge_count == 2 * n
        roles = cls.role_counts()
        # each arc holds n/3 slant-up, n/3 equator pairs, n/3 slant-down edges
        assert roles["slant_upper"] == 2 * n // 3
        assert roles["slant_lower"] == 2 * n // 3
        assert roles["equator"] == 2 * n // 3
        expected_pieces = 2 * n if subcase22 else 4 * n // 3
        assert cls.distinct_piece_count == expected_pieces


def test_wedge_slots_conserved():
    for (n, k) in [(4, 1), (6, 3), (9, 4)]:
        dec = build_decomposition(n, k)
        total = sum(c.wedge_count for c in dec.edge_classes)
        assert total == 12 * n  # 6 edges per piece, no loss or double count


def test_arcs_labels():
    dec = build_decomposition(6, 1)
    labels = arcs(dec)
    assert set(labels) == {"e0", "e1", "e2", "e3"}
    assert len(set(labels.values())) == 4
    dec = build_decomposition(5, 2)
    labels = arcs(dec)
    assert set(labels) == {"e0", "single"}
    with pytest.raises(WrongCase):
        require_div3(dec)


def test_arc_classes_contain_slant_edges_of_pieces_0_2_4():
    dec = build_decomposition(9, 4)
    labels = arcs(dec)
    for i, name in enumerate(("e1", "e2", "e3")):
        assert dec.class_of(2 * i, (0, 1)) == labels[name]


@pytest.mark.parametrize("n", range(4, 31))
def test_boundary_genus_formula(n):
    dec = build_decomposition(n, min(1, n - 1))
    surf = boundary_surface(dec)
    assert surf.is_orientable
    assert surf.is_connected
    assert surf.face_count == 8 * n
    assert surf.edge_count == 12 * n
    expected = n - 3 if n % 3 == 0 else n - 1
    assert surf.genus == expected
    assert surf.euler_characteristic == 2 - 2 * expected


def test_boundary_vertices_count_twice_the_edge_classes():
    for (n, k) in [(5, 1), (6, 2), (9, 4)]:
        dec = build_decomposition(n, k)
        surf = boundary_surface(dec)
        assert surf.vertex_count == 2 * len(dec.edge_classes)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=4, max_value=16), st.data())
def test_census_properties_random_cells(n, data):
    k = data.draw(st.integers(min_value=0, max_value=n - 1))
    dec = build_decomposition(n, k)
    polys = dec.poly_classes
    if n % 3 == 0:
        assert sorted(c.wedge_count for c in polys) == [2 * n] * 3
    else:
        assert [c.wedge_count for c in polys] == [6 * n]
    assert dec.axis_class.wedge_count == 2 * n
    surf = boundary_surface(dec)
    assert surf.genus == (n - 3 if n % 3 == 0 else n - 1)


@pytest.mark.parametrize("n,k", [(5, 0), (6, 1), (9, 2), (12, 7)])
def test_angle_sums_all_classes(n, k):
    dec = build_decomposition(n, k)
    real = realize(n)
    report = angle_sum_check(dec, dihedral_angles(real), real=real)
    assert report.classes_checked == len(dec.edge_classes)
    assert report.all_within
    assert report.max_residual < 1e-9


def test_angle_sums_without_realization_skips_diagonals():
    dec = build_decomposition(6, 1)
    report = angle_sum_check(dec, dihedral_angles(realize(6)))
    assert report.classes_checked == len(dec.edge_classes) - len(dec.diagonal_classes)
    assert report.all_within


def test_axis_class_sums_exactly():
    for n in (4, 9, 17):
        dec = build_decomposition(n, 1)
        total = dec.axis_class.wedge_count * (math.pi / n)
        assert abs(total - 2 * math.pi) < 1e-12


@pytest.mark.parametrize("n,k", [(4, 0), (6, 1)])
def test_golden_json(n, k):
    produced = decomposition_to_dict(build_decomposition(n, k))
    expected = json.loads((GOLDEN / f"decomposition_{n}_{k}.json").read_text())
    assert produced == expected


def test_quad_rule_descends_to_diagonals():
    # diagonal-to-diagonal descent is enforced at construction; every quad
    # pairing maps the {0,2} diagonal onto the {1,3} one
    dec = build_decomposition(11, 6)
    for fp in dec.pairings:
        if fp.face_a == 3:
            fwd = fp.forward()
            assert {fwd[0], fwd[2]} == {1, 3}


def test_diagonal_classes_meet_four_pieces_along_the_step():
    n, k = 7, 2
    dec = build_decomposition(n, k)
    for i in range(n):
        idx = dec.class_of(2 * i, (0, 2))
        cls = dec.edge_classes[idx]
        assert cls.wedge_count == 4
        pieces = {p for p, _ in cls.wedges}
        expected = {2 * i, 2 * i + 1,
                    (2 * i + 2 * k + 1) % (2 * n), (2 * i + 2 * k + 2) % (2 * n)}
        assert pieces == expected


def test_nonmanifold_guard_is_not_triggered_on_valid_input():
    # the guard exists for corrupted pairing tables; valid decompositions
    # must never trip it
    for (n, k) in [(4, 3), (6, 5)]:
        boundary_surface(build_decomposition(n, k))
