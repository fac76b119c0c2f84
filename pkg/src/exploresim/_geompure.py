"""Pure-Python geometry kernel.

Reference implementation of the hot geometric primitives: ray casting
against the room walls and axis-aligned obstacle boxes (slab method),
point-in-free-space, and disc-vs-solid collision.  ``_geomcore.pyx`` is
the compiled twin; both perform the same floating-point operations in
the same order, and neither computes any trigonometry (direction
vectors come in from the caller), so results are bit-identical across
backends.
"""

from __future__ import annotations

import math

_INF = math.inf


class GeomCore:
    """Immutable room geometry: walls at [0,w]x[0,h] plus AABB obstacles."""

    __slots__ = ("width", "height", "boxes")

    def __init__(self, width: float, height: float, boxes):
        self.width = float(width)
        self.height = float(height)
        # (xmin, ymin, xmax, ymax) per obstacle
        self.boxes = tuple((float(a), float(b), float(c), float(d)) for a, b, c, d in boxes)

    def ray_distance(self, ox: float, oy: float, dx: float, dy: float) -> float:
        """Distance along the unit direction (dx, dy) to the first wall or
        obstacle face.

        The caller supplies the direction components (trig stays outside
        the kernel so both backends consume identical doubles).  The
        origin must be in free space; walls enclose the room so the
        result is always finite.
        """
        if dx > 0.0:
            t = (self.width - ox) / dx
        elif dx < 0.0:
            t = -ox / dx
        else:
            t = _INF
        if dy > 0.0:
            ty = (self.height - oy) / dy
        elif dy < 0.0:
            ty = -oy / dy
        else:
            ty = _INF
        if ty < t:
            t = ty
        for x0, y0, x1, y1 in self.boxes:
            if dx != 0.0:
                inv = 1.0 / dx
                ta = (x0 - ox) * inv
                tb = (x1 - ox) * inv
                if ta > tb:
                    ta, tb = tb, ta
                tmin = ta
                tmax = tb
            else:
                if ox <= x0 or ox >= x1:
                    continue
                tmin = -_INF
                tmax = _INF
            if dy != 0.0:
                inv = 1.0 / dy
                ta = (y0 - oy) * inv
                tb = (y1 - oy) * inv
                if ta > tb:
                    ta, tb = tb, ta
                if ta > tmin:
                    tmin = ta
                if tb < tmax:
                    tmax = tb
            else:
                if oy <= y0 or oy >= y1:
                    continue
            if tmin <= tmax and tmin > 0.0 and tmin < t:
                t = tmin
        return t

    def point_free(self, x: float, y: float) -> bool:
        """True iff strictly inside the room and strictly outside every box."""
        if x <= 0.0 or x >= self.width or y <= 0.0 or y >= self.height:
            return False
        for x0, y0, x1, y1 in self.boxes:
            if x0 <= x <= x1 and y0 <= y <= y1:
                return False
        return True

    def disc_blocked(self, x: float, y: float, r: float) -> bool:
        """True iff a disc of radius r strictly penetrates a wall or box."""
        if x - r < 0.0 or x + r > self.width or y - r < 0.0 or y + r > self.height:
            return True
        rr = r * r
        for x0, y0, x1, y1 in self.boxes:
            cx = x0 if x < x0 else (x1 if x > x1 else x)
            cy = y0 if y < y0 else (y1 if y > y1 else y)
            ddx = x - cx
            ddy = y - cy
            if ddx * ddx + ddy * ddy < rr:
                return True
        return False
