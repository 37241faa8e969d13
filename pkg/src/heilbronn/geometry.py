"""Geometric primitives in cube coordinates: points, lines, tubes, boxes.

Points are plain float ndarrays of length d, d in {2, 3}.  Lines are stored
in point+direction form with the direction normalized to unit length and a
canonical sign (first nonzero coordinate positive), so that a line has a
unique representation.  All objects are immutable after construction and
every operation in this module is pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

UNIT_TOL = 1e-12      # unit-direction tolerance
FRAME_TOL = 1e-10     # orthonormal-frame tolerance
ON_LINE_TOL = 1e-9    # point-on-line tolerance


class DimensionMismatch(ValueError):
    """Raised when objects of different ambient dimension are combined."""


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Validate and return a point as a read-only float vector."""
    p = np.array(x, dtype=float)
    if p.ndim != 1 or p.shape[0] not in (2, 3):
        raise ValueError(f"point must be a vector of length 2 or 3, got shape {p.shape}")
    if dim is not None and p.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {p.shape[0]}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point has non-finite coordinates")
    p.setflags(write=False)
    return p


def canonical_direction(v) -> np.ndarray:
    """Unit-normalize v and fix the sign so the first nonzero coordinate is positive."""
    v = np.array(v, dtype=float)
    n = float(np.linalg.norm(v))
    if not np.isfinite(n) or n == 0.0:
        raise ValueError("direction must be a nonzero finite vector")
    if abs(n - 1.0) > 1e-13:  # keep already-unit vectors bit-stable
        v = v / n
    for c in v:
        if abs(c) > 1e-14:
            if c < 0:
                v = -v
            break
    v.setflags(write=False)
    return v


def direction_distance(u, v) -> float:
    """Distance between directions identified up to sign: min(|u-v|, |u+v|)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(min(np.linalg.norm(u - v), np.linalg.norm(u + v)))


@dataclass(frozen=True)
class Line:
    """Infinite line through `base` with unit direction `dir` (canonical sign)."""

    base: np.ndarray
    dir: np.ndarray

    def __init__(self, base, dir):
        b = as_point(base)
        d = canonical_direction(dir)
        if b.shape[0] != d.shape[0]:
            raise DimensionMismatch("base and direction dimensions differ")
        if abs(np.linalg.norm(d) - 1.0) > UNIT_TOL:
            raise ValueError("direction failed unit normalization")
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "dir", d)

    @property
    def dim(self) -> int:
        return self.base.shape[0]

    def point_at(self, t: float) -> np.ndarray:
        return self.base + t * self.dir

    def project(self, p) -> np.ndarray:
        """Orthogonal projection of p onto the line."""
        p = as_point(p, self.dim)
        t = float((p - self.base) @ self.dir)
        return self.point_at(t)

    def __eq__(self, other):
        if not isinstance(other, Line):
            return NotImplemented
        return (self.dim == other.dim
                and np.array_equal(self.dir, other.dir)
                and point_line_distance(other.base, self) < ON_LINE_TOL)

    def __hash__(self):
        return hash((self.dim, tuple(np.round(self.dir, 9))))


@dataclass(frozen=True)
class Tube:
    """Neighborhood of a line segment: `radius` around `axis`, of given `length`.

    `length=None` means unbounded within the unit ball (clipped downstream).
    """

    axis: Line
    radius: float
    length: float | None = 1.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("tube radius must be positive")
        if self.length is not None and self.radius > self.length:
            raise ValueError("tube radius exceeds its length")


@dataclass(frozen=True)
class Box:
    """Oriented box with half-extents sorted ascending (a u x w x 1 prism).

    `frame` rows are the box axes; row i corresponds to half_extents[i], so the
    longest side comes last.
    """

    center: np.ndarray
    half_extents: np.ndarray
    frame: np.ndarray

    def __init__(self, center, half_extents, frame):
        c = as_point(center)
        h = np.array(half_extents, dtype=float)
        F = np.array(frame, dtype=float)
        d = c.shape[0]
        if h.shape != (d,) or F.shape != (d, d):
            raise ValueError("half_extents / frame shapes inconsistent with center")
        if np.any(h <= 0):
            raise ValueError("degenerate box: all half-extents must be positive")
        if np.any(np.diff(h) < -1e-12):
            raise ValueError("half-extents must be sorted ascending")
        if not np.allclose(F @ F.T, np.eye(d), atol=FRAME_TOL):
            raise ValueError("frame is not orthonormal")
        h.setflags(write=False)
        F.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "half_extents", h)
        object.__setattr__(self, "frame", F)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def dilate(self, factor: float) -> "Box":
        return Box(self.center, self.half_extents * factor, self.frame)


@dataclass(frozen=True)
class SphericalRectangle:
    """Neighborhood of a great-circle arc on S^2.

    The arc has center direction `center`, tangent `axis` (orthogonal to the
    center), and total length `length`; the rectangle is the neighborhood of
    total width `width` (so an "a x b" rectangle has width=a, length=b).
    """

    center: np.ndarray
    axis: np.ndarray
    width: float
    length: float

    def __init__(self, center, axis, width, length):
        c = canonical_direction(center)
        a = np.array(axis, dtype=float)
        a = a - (a @ c) * c
        n = np.linalg.norm(a)
        if n < 1e-12:
            raise ValueError("axis must not be parallel to center direction")
        a = a / n
        a.setflags(write=False)
        if not (0 < width <= length <= 2 * np.pi):
            raise ValueError("need 0 < width <= length <= 2*pi")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "axis", a)
        object.__setattr__(self, "width", float(width))
        object.__setattr__(self, "length", float(length))

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """Arc endpoints on the sphere."""
        h = self.length / 2.0
        e1 = np.cos(h) * self.center + np.sin(h) * self.axis
        e2 = np.cos(h) * self.center - np.sin(h) * self.axis
        return e1, e2


def point_line_distance(p, line: Line) -> float:
    """Euclidean distance from p to the infinite line."""
    p = as_point(p, line.dim)
    u = p - line.base
    t = float(u @ line.dir)
    return float(np.linalg.norm(u - t * line.dir))


def points_line_distance(P: np.ndarray, line: Line) -> np.ndarray:
    """Vectorized point_line_distance for an (n, d) array of points."""
    U = np.asarray(P, dtype=float) - line.base
    t = U @ line.dir
    return np.linalg.norm(U - t[:, None] * line.dir, axis=1)


def lines_min_distance(l1: Line, l2: Line) -> float:
    """Minimum distance between two infinite lines."""
    if l1.dim != l2.dim:
        raise DimensionMismatch("lines of different dimension")
    v1, v2 = l1.dir, l2.dir
    if l1.dim == 2:
        cross = v1[0] * v2[1] - v1[1] * v2[0]
        if abs(cross) < 1e-12:
            return point_line_distance(l2.base, l1)
        return 0.0
    n = np.cross(v1, v2)
    nn = float(np.linalg.norm(n))
    if nn < 1e-12:
        return point_line_distance(l2.base, l1)
    return float(abs((l2.base - l1.base) @ n) / nn)


def line_metric(l1: Line, l2: Line) -> float:
    """Premetric on lines: direction distance (mod sign) plus minimal point distance.

    Symmetric, zero exactly on identical lines.
    """
    return direction_distance(l1.dir, l2.dir) + lines_min_distance(l1, l2)


def line_metric_many(line: Line, bases: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """line_metric from one line to many lines given as (n,d) base/dir arrays."""
    bases = np.asarray(bases, dtype=float)
    dirs = np.asarray(dirs, dtype=float)
    v1 = line.dir
    dth = np.minimum(np.linalg.norm(dirs - v1, axis=1),
                     np.linalg.norm(dirs + v1, axis=1))
    db = bases - line.base
    if line.dim == 2:
        cross = v1[0] * dirs[:, 1] - v1[1] * dirs[:, 0]
        t = db @ v1
        perp = np.linalg.norm(db - t[:, None] * v1, axis=1)
        dmin = np.where(np.abs(cross) < 1e-12, perp, 0.0)
    else:
        n = np.cross(np.broadcast_to(v1, dirs.shape), dirs)
        nn = np.linalg.norm(n, axis=1)
        para = np.einsum("ij,ij->i", db, np.where(nn[:, None] < 1e-12, 0.0, n))
        t = db @ v1
        perp = np.linalg.norm(db - t[:, None] * v1, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            skew = np.abs(para) / np.where(nn < 1e-12, 1.0, nn)
        dmin = np.where(nn < 1e-12, perp, skew)
    return dth + dmin


def line_box_chord(line: Line, box: Box) -> float:
    """Length of the intersection of the infinite line with the box."""
    if line.dim != box.dim:
        raise DimensionMismatch("line and box dimensions differ")
    b = box.frame @ (line.base - box.center)
    v = box.frame @ line.dir
    tmin, tmax = -np.inf, np.inf
    for i in range(box.dim):
        if abs(v[i]) < 1e-14:
            if abs(b[i]) > box.half_extents[i]:
                return 0.0
            continue
        t1 = (-box.half_extents[i] - b[i]) / v[i]
        t2 = (box.half_extents[i] - b[i]) / v[i]
        lo, hi = (t1, t2) if t1 <= t2 else (t2, t1)
        tmin = max(tmin, lo)
        tmax = min(tmax, hi)
    return float(max(0.0, tmax - tmin))


def lines_box_chords(bases: np.ndarray, dirs: np.ndarray, box: Box) -> np.ndarray:
    """Vectorized line_box_chord over (n,d) base/dir arrays."""
    B = (np.asarray(bases, dtype=float) - box.center) @ box.frame.T
    V = np.asarray(dirs, dtype=float) @ box.frame.T
    return _chords_from_local(B, V, box.half_extents)


def _chords_from_local(B: np.ndarray, V: np.ndarray, half: np.ndarray) -> np.ndarray:
    """Chord lengths from box-local coordinates B, V against half-extents."""
    n, d = B.shape
    tmin = np.full(n, -np.inf)
    tmax = np.full(n, np.inf)
    alive = np.ones(n, dtype=bool)
    for i in range(d):
        v = V[:, i]
        b = B[:, i]
        h = half[i]
        par = np.abs(v) < 1e-14
        alive &= ~(par & (np.abs(b) > h))
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (-h - b) / v
            t2 = (h - b) / v
        lo = np.minimum(t1, t2)
        hi = np.maximum(t1, t2)
        upd = ~par
        tmin = np.where(upd, np.maximum(tmin, lo), tmin)
        tmax = np.where(upd, np.minimum(tmax, hi), tmax)
    chord = np.clip(tmax - tmin, 0.0, None)
    chord = np.where(np.isfinite(chord), chord, 0.0)
    return np.where(alive, chord, 0.0)


def covering_number(items, w: float, metric=None) -> int:
    """Size of a greedy maximal w-separated subset of `items`.

    This is a constant-factor proxy for the w-covering number: the greedy net
    covers with w-balls (so it upper bounds the covering number) and any
    2w-separated subset lower bounds it.

    `items` may be an (n, d) array (Euclidean metric) or any sequence combined
    with an explicit `metric(a, b)`.
    """
    if w <= 0:
        raise ValueError("w must be positive")
    if metric is None:
        A = np.asarray(items, dtype=float)
        if A.size == 0:
            return 0
        centers = np.empty((0, A.shape[1]))
        for x in A:
            if centers.shape[0] == 0 or np.min(np.linalg.norm(centers - x, axis=1)) >= w:
                centers = np.vstack([centers, x])
        return centers.shape[0]
    items = list(items)
    if not items:
        return 0
    centers: list = []
    for x in items:
        if all(metric(x, c) >= w for c in centers):
            centers.append(x)
    return len(centers)


def direction_covering_number(dirs: np.ndarray, w: float) -> int:
    """Greedy covering count for directions identified up to sign."""
    if w <= 0:
        raise ValueError("w must be positive")
    D = np.asarray(dirs, dtype=float)
    if D.size == 0:
        return 0
    centers = np.empty((0, D.shape[1]))
    for v in D:
        if centers.shape[0] == 0:
            centers = np.vstack([centers, v])
            continue
        dist = np.minimum(np.linalg.norm(centers - v, axis=1),
                          np.linalg.norm(centers + v, axis=1))
        if np.min(dist) >= w:
            centers = np.vstack([centers, v])
    return centers.shape[0]


def line_covering_number(lines, w: float) -> int:
    """Greedy covering count for a family of lines under line_metric."""
    if w <= 0:
        raise ValueError("w must be positive")
    lines = list(lines)
    if not lines:
        return 0
    kept: list[Line] = []
    kb = np.empty((0, lines[0].dim))
    kd = np.empty((0, lines[0].dim))
    for ln in lines:
        if kept:
            if np.min(line_metric_many(ln, kb, kd)) < w:
                continue
        kept.append(ln)
        kb = np.vstack([kb, ln.base])
        kd = np.vstack([kd, ln.dir])
    return len(kept)


def complete_frame(axis: np.ndarray) -> np.ndarray:
    """Orthonormal frame (rows) whose last row is the given unit axis."""
    axis = np.asarray(axis, dtype=float)
    d = axis.shape[0]
    if d == 2:
        e1 = np.array([-axis[1], axis[0]])
        return np.vstack([e1, axis])
    pick = np.argmin(np.abs(axis))
    helper = np.zeros(3)
    helper[pick] = 1.0
    e1 = np.cross(axis, helper)
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    return np.vstack([e1, e2, axis])
