import os
import random
from pathlib import Path

import pytest

from anysipp.grid import GridMap, MapFormatError, parse_map
from anysipp.geometry import swept_cells

from oracles import sampled_swept_cells


def make_map(body, width=None, height=None):
    rows = body.strip().splitlines()
    h = height if height is not None else len(rows)
    w = width if width is not None else len(rows[0])
    return f"type octile\nheight {h}\nwidth {w}\nmap\n" + "\n".join(rows) + "\n"


def test_parse_small_map():
    g = parse_map(make_map(".@\n.."))
    assert g.width == 2 and g.height == 2
    assert not g.is_traversable((1, 0))
    assert g.is_traversable((0, 0))
    assert g.is_traversable((0, 1))
    assert g.is_traversable((1, 1))


def test_parse_bytes_and_terrain_chars():
    g = parse_map(make_map(".G@T\nOSW.").encode())
    assert [g.is_traversable((c, 0)) for c in range(4)] == [True, True, False, False]
    assert [g.is_traversable((c, 1)) for c in range(4)] == [False, False, False, True]


def test_height_mismatch_reports_error():
    text = "type octile\nheight 4\nwidth 2\nmap\n..\n..\n..\n"
    with pytest.raises(MapFormatError, match="height 4"):
        parse_map(text)


def test_row_width_mismatch_reports_line():
    text = "type octile\nheight 2\nwidth 3\nmap\n...\n..\n"
    with pytest.raises(MapFormatError, match="line 6"):
        parse_map(text)


def test_unknown_character_reports_position():
    text = "type octile\nheight 2\nwidth 2\nmap\n..\n.x\n"
    with pytest.raises(MapFormatError, match="line 6, col 2"):
        parse_map(text)


def test_bad_header():
    with pytest.raises(MapFormatError):
        parse_map("type tile\nheight 1\nwidth 1\nmap\n.\n")
    with pytest.raises(MapFormatError):
        parse_map("type octile\nheight one\nwidth 1\nmap\n.\n")


def test_out_of_bounds_is_blocked():
    g = GridMap.empty(8, 8)
    assert g.is_traversable((3, 3))
    assert not g.is_traversable((-1, 0))
    assert not g.is_traversable((8, 0))
    assert not g.is_traversable((0, 8))


def test_move_feasible_straight_on_empty_grid():
    g = GridMap.empty(8, 8)
    assert g.move_is_feasible((0, 0), (5, 0))


def test_move_blocked_iff_cell_swept():
    g = GridMap.from_blocked(8, 8, [(2, 1)])
    swept = sampled_swept_cells((0, 0), (4, 2))
    assert g.move_is_feasible((0, 0), (4, 2)) == ((2, 1) not in swept)
    assert (2, 1) in swept  # this diagonal passes close enough to block


def test_corner_touch_blocks_diagonal():
    # The disk passes through the shared corner (0.5, 0.5), so cell (1, 0)
    # is swept and a block there forbids the diagonal move.
    g = GridMap.from_blocked(4, 4, [(1, 0)])
    assert (1, 0) in sampled_swept_cells((0, 0), (1, 1))
    assert not g.move_is_feasible((0, 0), (1, 1))


def test_move_feasibility_symmetry_and_endpoints():
    rng = random.Random(11)
    g = GridMap.from_blocked(12, 12, [(rng.randrange(12), rng.randrange(12)) for _ in range(14)])
    for _ in range(300):
        a = (rng.randrange(12), rng.randrange(12))
        b = (rng.randrange(12), rng.randrange(12))
        f = g.move_is_feasible(a, b)
        assert f == g.move_is_feasible(b, a)
        if f:
            assert g.is_traversable(a) and g.is_traversable(b)


def test_adjacent_moves_always_feasible_on_free_grid():
    g = GridMap.empty(6, 6)
    for x in range(5):
        assert g.move_is_feasible((x, 2), (x + 1, 2))
        assert g.move_is_feasible((2, x), (2, x + 1))


def test_swept_cells_stay_in_bounds_hull():
    rng = random.Random(3)
    for _ in range(200):
        a = (rng.randrange(10), rng.randrange(10))
        b = (rng.randrange(10), rng.randrange(10))
        lo_c, hi_c = min(a[0], b[0]), max(a[0], b[0])
        lo_r, hi_r = min(a[1], b[1]), max(a[1], b[1])
        for c, r in swept_cells(a, b):
            assert lo_c <= c <= hi_c
            assert lo_r <= r <= hi_r


MAPS_DIR = Path(os.environ.get("MOVINGAI_MAPS", "maps"))


@pytest.mark.parametrize("name", ["brc202d", "den520d", "ost003d"])
def test_benchmark_maps_parse(name):
    path = MAPS_DIR / f"{name}.map"
    if not path.exists():
        pytest.skip(f"benchmark map {path} not available")
    g = parse_map(path.read_text())
    assert g.width > 100 and g.height > 100
    assert g.any_blocked
