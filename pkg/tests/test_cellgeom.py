"""Cell geometry: built-in shapes, normals, curvature, validation, file IO."""

import math

import numpy as np
import pytest

from curvequad.cellgeom import (
    ArcEdge,
    Cell,
    LineEdge,
    build_circle,
    build_pacman,
    build_puzzle,
    build_square,
    cell_from_file,
    curvature,
    signed_area,
    unit_normal,
    unit_tangent,
    validate_cell,
)
from curvequad.kressquad import build_grid


def test_builtin_cells_valid():
    for cell, area in [
        (build_square(), 1.0),
        (build_circle(), math.pi),
        (build_pacman(), 7.0 * math.pi / 8.0),
        (build_puzzle(), 1.0),
    ]:
        assert validate_cell(cell) == []
        assert abs(signed_area(cell) - area) < 1e-11


def test_edge_chain_closure():
    for cell in (build_square(), build_circle(), build_pacman(), build_puzzle()):
        for i, e in enumerate(cell.edges):
            nxt = cell.edges[(i + 1) % cell.num_edges]
            assert math.hypot(e.end[0] - nxt.start[0], e.end[1] - nxt.start[1]) < 1e-12


def test_normals_tangents_orthonormal():
    for cell in (build_square(), build_circle(), build_puzzle()):
        u = np.linspace(0.0, 1.0, 33)
        for e in cell.edges:
            t = unit_tangent(e, u)
            n = unit_normal(e, u)
            assert np.max(np.abs(np.einsum("ij,ij->i", t, n))) < 1e-14
            assert np.max(np.abs(np.einsum("ij,ij->i", n, n) - 1.0)) < 1e-14


def test_circle_normal_and_curvature():
    edge = ArcEdge((0.0, 0.0), 1.0, 0.0, math.pi)
    n0 = unit_normal(edge, np.array(0.0))
    assert np.allclose(n0, [1.0, 0.0], atol=1e-15)
    for r in (0.5, 1.0, 2.5):
        arc = ArcEdge((0.3, -0.2), r, 0.2, 2.0)
        u = np.linspace(0, 1, 17)
        assert np.max(np.abs(curvature(arc, u) - 1.0 / r)) < 1e-13


def test_straight_edge_curvature_zero():
    line = LineEdge((0.0, 0.0), (2.0, 1.0))
    assert np.max(np.abs(curvature(line, np.linspace(0, 1, 9)))) == 0.0


def test_outward_normals_on_square():
    sq = build_square()
    expected = [(0, -1), (1, 0), (0, 1), (-1, 0)]
    for e, n in zip(sq.edges, expected):
        assert np.allclose(unit_normal(e, np.array(0.5)), n)


def test_pacman_geometry():
    pac = build_pacman()
    assert pac.num_edges == 3
    kinds = [type(e).__name__ for e in pac.edges]
    assert kinds.count("ArcEdge") == 1
    with pytest.raises(ValueError):
        build_pacman(0.4)
    with pytest.raises(ValueError):
        build_pacman(1.0)


def test_puzzle_geometry():
    r, b = 0.22, 0.17
    pz = build_puzzle(r, b)
    assert pz.num_edges == 12
    arcs = [e for e in pz.edges if isinstance(e, ArcEdge)]
    assert len(arcs) == 4
    # straight edges adjacent to the features have length 1/2 - sqrt(r^2-b^2)
    c = math.sqrt(r * r - b * b)
    e0 = pz.edges[0]
    length = math.hypot(e0.end[0] - e0.start[0], e0.end[1] - e0.start[1])
    assert abs(length - (0.5 - c)) < 1e-14
    assert abs(length - 0.3604) < 5e-5
    # interior angle at a tab vertex: pi - turn between edge tangents
    e3, e4 = pz.edges[3], pz.edges[4]
    t_in = unit_tangent(e3, np.array(1.0))
    t_out = unit_tangent(e4, np.array(0.0))
    turn = math.atan2(
        t_in[0] * t_out[1] - t_in[1] * t_out[0], float(np.dot(t_in, t_out))
    )
    interior = math.pi - turn
    if interior < 0:
        interior += 2 * math.pi
    assert abs(interior - (1.5 * math.pi + math.asin(b / r))) < 1e-12
    # tabs exactly fill the blanks
    assert abs(signed_area(pz) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        build_puzzle(0.1, 0.2)


def test_reversed_orientation_is_flagged():
    v = [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]  # clockwise
    cell = Cell([LineEdge(v[i], v[(i + 1) % 4]) for i in range(4)], name="cw")
    problems = validate_cell(cell)
    assert any("orientation" in p for p in problems)


def test_open_chain_is_flagged():
    cell = Cell(
        [LineEdge((0, 0), (1, 0)), LineEdge((1, 0.1), (0, 0))], name="gap"
    )
    assert any("gap" in p for p in validate_cell(cell))


def test_closure_integral_of_derivative():
    # sum over edges of int x'(t) dt telescopes to zero on a closed chain
    for cell in (build_square(), build_puzzle(), build_pacman()):
        total = np.zeros(2)
        for e in cell.edges:
            total += np.asarray(e.end) - np.asarray(e.start)
        assert np.max(np.abs(total)) < 1e-12


def test_cell_file_round_trip(tmp_path):
    path = tmp_path / "square.cell"
    path.write_text(
        "# unit square\n"
        "line 0 0 1 0\n"
        "line 1 0 1 1\n"
        "line 1 1 0 1\n"
        "line 0 1 0 0\n"
    )
    cell = cell_from_file(path)
    assert cell.num_edges == 4
    assert abs(signed_area(cell) - 1.0) < 1e-12
    grid = build_grid(cell, 16, 7)
    assert abs(grid.perimeter - 4.0) < 1e-8


def test_cell_file_arc_and_errors(tmp_path):
    path = tmp_path / "disk.cell"
    path.write_text("arc 0 0 1 0 3.141592653589793\narc 0 0 1 3.141592653589793 6.283185307179586\n")
    cell = cell_from_file(path)
    assert abs(signed_area(cell) - math.pi) < 1e-10
    bad = tmp_path / "bad.cell"
    bad.write_text("line 0 0 1\n")
    with pytest.raises(ValueError):
        cell_from_file(bad)
    gap = tmp_path / "gap.cell"
    gap.write_text("line 0 0 1 0\nline 1 0.5 0 0\n")
    with pytest.raises(ValueError):
        cell_from_file(gap)


def test_shift_point_is_barycenter():
    sq = build_square()
    assert np.allclose(sq.shift, (0.5, 0.5), atol=1e-9)
    circ = build_circle()
    assert np.allclose(circ.shift, (0.0, 0.0), atol=1e-9)
