# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled geometry kernel.

Same primitives and operation order as ``_geompure.GeomCore`` so the two
backends produce bit-identical doubles; see that module for contracts.
Directions come in as unit vectors: libm's sin/cos can differ by an ulp
from the interpreter's (ifunc-selected variants), so trig is banned here.
"""

from libc.math cimport INFINITY
from libc.stdlib cimport malloc, free


cdef class GeomCore:
    cdef public double width
    cdef public double height
    cdef double *_boxes
    cdef int _n
    cdef readonly tuple boxes

    def __init__(self, width, height, boxes):
        self.width = width
        self.height = height
        self.boxes = tuple((float(a), float(b), float(c), float(d)) for a, b, c, d in boxes)
        self._n = len(self.boxes)
        self._boxes = <double *> malloc(4 * self._n * sizeof(double)) if self._n else NULL
        cdef int i
        for i in range(self._n):
            self._boxes[4 * i + 0] = self.boxes[i][0]
            self._boxes[4 * i + 1] = self.boxes[i][1]
            self._boxes[4 * i + 2] = self.boxes[i][2]
            self._boxes[4 * i + 3] = self.boxes[i][3]

    def __dealloc__(self):
        if self._boxes != NULL:
            free(self._boxes)

    def __reduce__(self):
        return (GeomCore, (self.width, self.height, self.boxes))

    cpdef double ray_distance(self, double ox, double oy, double dx, double dy):
        cdef double t, ty, inv, ta, tb, tmin, tmax, x0, y0, x1, y1
        cdef int i
        if dx > 0.0:
            t = (self.width - ox) / dx
        elif dx < 0.0:
            t = -ox / dx
        else:
            t = INFINITY
        if dy > 0.0:
            ty = (self.height - oy) / dy
        elif dy < 0.0:
            ty = -oy / dy
        else:
            ty = INFINITY
        if ty < t:
            t = ty
        for i in range(self._n):
            x0 = self._boxes[4 * i + 0]
            y0 = self._boxes[4 * i + 1]
            x1 = self._boxes[4 * i + 2]
            y1 = self._boxes[4 * i + 3]
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
                tmin = -INFINITY
                tmax = INFINITY
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

    cpdef bint point_free(self, double x, double y):
        cdef int i
        if x <= 0.0 or x >= self.width or y <= 0.0 or y >= self.height:
            return False
        for i in range(self._n):
            if (self._boxes[4 * i + 0] <= x <= self._boxes[4 * i + 2]
                    and self._boxes[4 * i + 1] <= y <= self._boxes[4 * i + 3]):
                return False
        return True

    cpdef bint disc_blocked(self, double x, double y, double r):
        cdef double rr, cx, cy, ddx, ddy, x0, y0, x1, y1
        cdef int i
        if x - r < 0.0 or x + r > self.width or y - r < 0.0 or y + r > self.height:
            return True
        rr = r * r
        for i in range(self._n):
            x0 = self._boxes[4 * i + 0]
            y0 = self._boxes[4 * i + 1]
            x1 = self._boxes[4 * i + 2]
            y1 = self._boxes[4 * i + 3]
            cx = x0 if x < x0 else (x1 if x > x1 else x)
            cy = y0 if y < y0 else (y1 if y > y1 else y)
            ddx = x - cx
            ddy = y - cy
            if ddx * ddx + ddy * ddy < rr:
                return True
        return False
