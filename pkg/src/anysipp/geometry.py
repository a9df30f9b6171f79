"""Geometric kernel for disk-on-grid motion.

Lengths are grid units: the cell side is 1 and the agent is an open disk of
radius 0.5, so a cell whose distance to a motion segment is exactly the
radius is grazed, not entered. Cell (c, r) is centered at the integer point
(c, r) and spans [c - 0.5, c + 0.5] x [r - 0.5, r + 0.5].
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import List, Tuple

import numpy as np

AGENT_RADIUS = 0.5
# Distances within this band of a threshold count as an exact touch.
GEOM_TOL = 1e-9

Cell = Tuple[int, int]
Point = Tuple[float, float]


def _as_cell(p) -> Cell:
    c, r = round(p[0]), round(p[1])
    if abs(p[0] - c) > GEOM_TOL or abs(p[1] - r) > GEOM_TOL:
        raise ValueError(f"segment endpoint {p!r} is not a cell center")
    return int(c), int(r)


def swept_cells(a, b) -> Tuple[Cell, ...]:
    """Cells an open disk of radius 0.5 touches while its center moves a -> b.

    Endpoints must be cell centers. A cell is included iff its interior
    intersects the open swept region {q : dist(q, segment) < 0.5}; exact
    touches (distance within GEOM_TOL of the radius) are excluded. Output is
    ordered along the dominant axis, minor axis ascending within a batch, and
    is identical for a -> b and b -> a.
    """
    pa, pb = _as_cell(a), _as_cell(b)
    if pb < pa:
        pa, pb = pb, pa
    return _swept_cached(pa[0], pa[1], pb[0], pb[1])


@lru_cache(maxsize=1 << 16)
def _swept_cached(ax: int, ay: int, bx: int, by: int) -> Tuple[Cell, ...]:
    dx, dy = bx - ax, by - ay
    if dx == 0 and dy == 0:
        return ((ax, ay),)
    if dy == 0:
        lo, hi = (ax, bx) if ax <= bx else (bx, ax)
        return tuple((x, ay) for x in range(lo, hi + 1))
    if dx == 0:
        lo, hi = (ay, by) if ay <= by else (by, ay)
        return tuple((ax, y) for y in range(lo, hi + 1))
    if abs(dx) == abs(dy):
        return _swept_diagonal(ax, ay, bx, by)
    return _swept_general(ax, ay, bx, by)


def _swept_diagonal(ax, ay, bx, by) -> Tuple[Cell, ...]:
    # The segment runs corner to corner, so each crossed corner drags in the
    # two off-diagonal cells that share it.
    sx = 1 if bx > ax else -1
    sy = 1 if by > ay else -1
    cells = []
    for k in range(abs(bx - ax)):
        x, y = ax + k * sx, ay + k * sy
        cells += [(x, y), (x + sx, y), (x, y + sy)]
    cells.append((bx, by))
    cells.sort()
    return tuple(cells)


def _swept_general(ax, ay, bx, by) -> Tuple[Cell, ...]:
    steep = abs(by - ay) > abs(bx - ax)
    if steep:
        ax, ay, bx, by = ay, ax, by, bx
    if ax > bx:
        ax, ay, bx, by = bx, by, ax, ay
    # |slope| < 1 and both deltas nonzero from here on.
    m = (by - ay) / (bx - ax)
    xs = np.arange(ax, bx + 1, dtype=np.float64)
    xl = np.maximum(xs - 0.5, float(ax))
    xr = np.minimum(xs + 0.5, float(bx))
    y1 = ay + m * (xl - ax)
    y2 = ay + m * (xr - ax)
    ylo = np.minimum(y1, y2)
    yhi = np.maximum(y1, y2)
    # Candidate rows: the line's own batch plus two rows of margin each way;
    # the exact distance test below decides membership.
    r0 = np.floor(ylo + 0.5).astype(np.int64) - 2
    r1 = np.floor(yhi + 0.5).astype(np.int64) + 2
    width = int((r1 - r0).max()) + 1
    rows = r0[:, None] + np.arange(width, dtype=np.int64)[None, :]
    valid = rows <= r1[:, None]
    cx = np.broadcast_to(xs[:, None], rows.shape)
    cy = rows.astype(np.float64)
    d2 = _seg_box_dist2(float(ax), float(ay), float(bx), float(by), cx, cy)
    lim = AGENT_RADIUS - GEOM_TOL
    mask = valid & (d2 < lim * lim)
    cols_hit = np.broadcast_to(
        np.arange(ax, bx + 1, dtype=np.int64)[:, None], rows.shape
    )[mask]
    rows_hit = rows[mask]
    if steep:
        return tuple(zip(rows_hit.tolist(), cols_hit.tolist()))
    return tuple(zip(cols_hit.tolist(), rows_hit.tolist()))


def _seg_box_dist2(ax, ay, bx, by, cx, cy):
    """Squared distance from segment (ax,ay)-(bx,by) to unit boxes at (cx,cy).

    dist(P(t), box) is convex in t, so the minimum over t in [0,1] sits at an
    endpoint, at a parameter where the moving point crosses a box edge line,
    or at a stationary point of one of the corner-distance branches. Every
    candidate is evaluated with the true clamped distance, so extra
    candidates are harmless.
    """
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    shape = cx.shape
    cands = [
        np.zeros(shape), np.ones(shape),
        ((cx - 0.5) - ax) / dx, ((cx + 0.5) - ax) / dx,
        ((cy - 0.5) - ay) / dy, ((cy + 0.5) - ay) / dy,
    ]
    for ex in (-0.5, 0.5):
        for ey in (-0.5, 0.5):
            cands.append(-((ax - (cx + ex)) * dx + (ay - (cy + ey)) * dy) / den)
    t = np.stack(cands, axis=-1)
    np.clip(t, 0.0, 1.0, out=t)
    px = ax + t * dx
    py = ay + t * dy
    ux = np.abs(px - cx[..., None]) - 0.5
    uy = np.abs(py - cy[..., None]) - 0.5
    np.maximum(ux, 0.0, out=ux)
    np.maximum(uy, 0.0, out=uy)
    return (ux * ux + uy * uy).min(axis=-1)


def closest_point_on_segment(p, a, b) -> Point:
    """Projection of p onto segment a-b, clamped to the segment."""
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    if den <= 0.0:
        return (float(ax), float(ay))
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / den
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return (ax + t * dx, ay + t * dy)


def dist_point_segment(p, a, b) -> float:
    q = closest_point_on_segment(p, a, b)
    return math.hypot(p[0] - q[0], p[1] - q[1])


def circle_segment_intersections(center, radius, a, b) -> List[Tuple[Point, float]]:
    """Points where the circle boundary crosses segment a-b.

    Returns (point, arclength-from-a) pairs sorted by arclength. A tangency
    yields a single point; a segment strictly inside the circle yields
    nothing, so callers interested in containment must test the endpoints
    themselves.
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    ax, ay = a
    bx, by = b
    seg_len = math.hypot(bx - ax, by - ay)
    if seg_len == 0.0:
        on_circle = abs(math.hypot(ax - center[0], ay - center[1]) - radius) <= GEOM_TOL
        return [((float(ax), float(ay)), 0.0)] if on_circle else []
    ux, uy = (bx - ax) / seg_len, (by - ay) / seg_len
    mx, my = center[0] - ax, center[1] - ay
    proj = mx * ux + my * uy
    perp2 = mx * mx + my * my - proj * proj
    if perp2 < 0.0:
        perp2 = 0.0
    disc = radius * radius - perp2
    if disc < -1e-12:
        return []
    if disc <= 1e-12:
        roots = [proj]
    else:
        half = math.sqrt(disc)
        roots = [proj - half, proj + half]
    out = []
    for s in roots:
        if -GEOM_TOL <= s <= seg_len + GEOM_TOL:
            s = min(max(s, 0.0), seg_len)
            out.append(((ax + s * ux, ay + s * uy), s))
    return out
