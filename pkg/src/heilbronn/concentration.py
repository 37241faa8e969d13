"""Concentration numbers, covering profiles, Katz-Tao fits and uniformization.

Concentration numbers measure how strongly a family clusters at a scale: the
maximal number of points in a w-cube, of lines crossing a u x w x 1 box, or
of configuration pairs within a (point, direction, line) distance triple of
an anchor.  Box maxima cannot scan all oriented boxes, so candidate boxes
are anchored on member lines (axis from one line, secondary orientation from
a partner, plus a subdivision pass around the per-scale argmax); the box
Lipschitz inequality bounds the loss by a constant, and every downstream
comparison carries explicit constant slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .configurations import (
    EmptyConfigurationError,
    PointLineConfiguration,
    min_config_distance,
    rescale_config,
    slab_restriction,
)
from .geometry import (
    Box,
    _chords_from_local,
    complete_frame,
    covering_number,
    direction_covering_number,
    line_covering_number,
)


class HypothesisViolation(ValueError):
    """A numerically checked hypothesis failed; carries the violating scales."""

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = violations or []


@dataclass(frozen=True)
class ConcentrationQuery:
    """A concentration request: scale triple plus the counting mode.

    Modes: 'points' (points per w-cube), 'lines' (lines per u x w x 1 box),
    'config' (configuration pairs per point/direction/line scale triple).
    """

    u: float
    v: float
    w: float
    mode: str = "config"

    def __post_init__(self):
        if self.mode not in ("points", "lines", "config"):
            raise ValueError("mode must be points, lines or config")
        for s in (self.u, self.v, self.w):
            if not 0 < s <= 1:
                raise ValueError("scales must lie in (0, 1]")
        if self.mode == "lines" and self.u > self.w:
            raise ValueError("line boxes need u <= w")

    def evaluate(self, target) -> int:
        if self.mode == "points":
            return m_points(target, self.w)
        if self.mode == "lines":
            return m_lines(target, self.u, self.w)
        return m_config(target, self.u, self.v, self.w)


class DegenerateGridError(ValueError):
    """Too few populated scale cells to run a regression."""


# ---------------------------------------------------------------------------
# point concentration


def m_points(P, w: float) -> int:
    """Maximal number of points in any w-cube (shifted-grid approximation).

    Grids at all w/2 offsets are scanned; any w-cube is covered by at most
    2^d shifted grid cubes, so the result is within that factor of the true
    maximum and never exceeds it.
    """
    if not 0 < w:
        raise ValueError("w must be positive")
    P = np.asarray(P, dtype=float)
    if P.size == 0:
        return 0
    n, d = P.shape
    best = 0
    for mask in range(2**d):
        off = np.array([(mask >> ax) & 1 for ax in range(d)]) * (w / 2.0)
        keys = np.floor((P - off) / w).astype(np.int64)
        packed = keys[:, 0].copy()
        for ax in range(1, d):
            packed = packed * 1_000_003 + keys[:, ax]
        _, counts = np.unique(packed, return_counts=True)
        best = max(best, int(counts.max()))
    return best


# ---------------------------------------------------------------------------
# line concentration in boxes


def _line_arrays(lines) -> tuple[np.ndarray, np.ndarray]:
    bases = np.array([ln.base for ln in lines])
    dirs = np.array([ln.dir for ln in lines])
    return bases, dirs


def _subsample(n: int, cap: int) -> np.ndarray:
    if n <= cap:
        return np.arange(n)
    return np.unique(np.linspace(0, n - 1, cap).round().astype(int))


def _closest_points(b1, v1, b2, v2):
    """Closest points of two infinite 3D lines (on line1, on line2)."""
    w0 = b1 - b2
    a = 1.0
    b = float(v1 @ v2)
    c = 1.0
    dd = float(v1 @ w0)
    e = float(v2 @ w0)
    den = a * c - b * b
    if abs(den) < 1e-14:
        t1 = 0.0
        t2 = e
    else:
        t1 = (b * e - c * dd) / den
        t2 = (a * e - b * dd) / den
    return b1 + t1 * v1, b2 + t2 * v2


def _pair_frame(b1, v1, b2, v2):
    """Frame (rows e1, e2, e3=v1) with e2 spanned toward the partner line."""
    proj = v2 - (v2 @ v1) * v1
    np_ = np.linalg.norm(proj)
    if np_ > 1e-9:
        e2 = proj / np_
    else:
        off = (b2 - b1) - ((b2 - b1) @ v1) * v1
        no = np.linalg.norm(off)
        if no > 1e-9:
            e2 = off / no
        else:
            return complete_frame(v1)
    e1 = np.cross(v1, e2)
    n1 = np.linalg.norm(e1)
    if n1 < 1e-9:
        return complete_frame(v1)
    e1 = e1 / n1
    e2 = np.cross(e1, v1) * -1.0
    e2 = e2 / np.linalg.norm(e2)
    return np.vstack([e1, e2, v1])


def _box_candidates(bases: np.ndarray, dirs: np.ndarray,
                    anchor_cap: int = 48, partner_cap: int = 24,
                    single_cap: int = 192):
    """Candidate (center, frame) pairs anchored on member lines."""
    n = bases.shape[0]
    cube_center = np.full(3, 0.5)
    cands: list[tuple[np.ndarray, np.ndarray]] = []
    for i in _subsample(n, single_cap):
        t = (cube_center - bases[i]) @ dirs[i]
        cands.append((bases[i] + t * dirs[i], complete_frame(dirs[i])))
    for i in _subsample(n, anchor_cap):
        for j in _subsample(n, partner_cap):
            if i == j:
                continue
            p1, p2 = _closest_points(bases[i], dirs[i], bases[j], dirs[j])
            frame = _pair_frame(bases[i], dirs[i], bases[j], dirs[j])
            cands.append(((p1 + p2) / 2.0, frame))
    return cands


def _counts_for_candidate(bases, dirs, center, frame, scales, min_chord=0.5):
    """Membership counts of lines for one candidate at every (u, w) scale."""
    B = (bases - center) @ frame.T
    V = dirs @ frame.T
    out = []
    for (u, w) in scales:
        half = np.array([u / 2.0, w / 2.0, 0.5])
        chords = _chords_from_local(B, V, half)
        out.append(int(np.count_nonzero(chords >= min_chord)))
    return out


def m_lines_sweep(lines, scales, anchor_cap: int = 48, partner_cap: int = 24,
                  subdivide: bool = True):
    """Max lines captured by a u x w x 1 box, for every (u, w) in `scales`.

    Returns (values, boxes): per-scale maxima and the realizing boxes.
    """
    scales = [tuple(map(float, s)) for s in scales]
    for u, w in scales:
        if not (0 < u <= w <= 1 + 1e-9):
            raise ValueError(f"need 0 < u <= w <= 1, got ({u}, {w})")
    bases, dirs = _line_arrays(lines) if not isinstance(lines, tuple) else lines
    n = bases.shape[0]
    if n == 0:
        return [0] * len(scales), [None] * len(scales)
    cands = _box_candidates(bases, dirs, anchor_cap, partner_cap)
    best = [0] * len(scales)
    best_cand = [cands[0]] * len(scales)
    for center, frame in cands:
        counts = _counts_for_candidate(bases, dirs, center, frame, scales)
        for s, c in enumerate(counts):
            if c > best[s]:
                best[s] = c
                best_cand[s] = (center, frame)
    if subdivide:
        children: list[tuple[np.ndarray, np.ndarray]] = []
        for s_parent, (u_p, w_p) in enumerate(scales):
            center, frame = best_cand[s_parent]
            for (u_c, w_c) in scales:
                if u_c > u_p and w_c > w_p:
                    continue
                shifts_u = _span_steps(u_p, u_c)
                shifts_w = _span_steps(w_p, w_c)
                if len(shifts_u) * len(shifts_w) <= 1:
                    continue
                for du in shifts_u:
                    for dw in shifts_w:
                        children.append((center + du * frame[0] + dw * frame[1], frame))
        for center, frame in children:
            counts = _counts_for_candidate(bases, dirs, center, frame, scales)
            for s, c in enumerate(counts):
                if c > best[s]:
                    best[s] = c
                    best_cand[s] = (center, frame)
    boxes = []
    for s, (u, w) in enumerate(scales):
        center, frame = best_cand[s]
        boxes.append(Box(center, np.array([u / 2.0, w / 2.0, 0.5]), frame))
    return best, boxes


def _span_steps(extent_parent: float, extent_child: float, cap: int = 13) -> np.ndarray:
    """Offsets of child boxes covering a parent extent (both centered)."""
    if extent_child >= extent_parent:
        return np.array([0.0])
    half_span = (extent_parent - extent_child) / 2.0
    k = int(np.ceil(2.0 * half_span / (extent_child / 2.0))) + 1
    k = min(k, cap)
    return np.linspace(-half_span, half_span, k)


def m_lines(lines, u: float, w: float, **kw) -> int:
    """Approximate max of lines crossing (chord >= 1/2) a u x w x 1 box."""
    if u > w:
        raise ValueError("need u <= w")
    values, _ = m_lines_sweep(lines, [(u, w)], **kw)
    return values[0]


# 2D: rectangles w x length around line or segment families


def _segment_rect_counts(centers, dirs, lengths, rect_center, rect_dir, w, rect_len):
    """Count segments whose chord inside the w x rect_len rectangle is >= half their length."""
    e2 = np.array([-rect_dir[1], rect_dir[0]])
    frame = np.vstack([e2, rect_dir])
    B = (centers - rect_center) @ frame.T
    V = dirs @ frame.T
    half = np.array([w / 2.0, rect_len / 2.0])
    tmin = np.full(B.shape[0], -np.inf)
    tmax = np.full(B.shape[0], np.inf)
    alive = np.ones(B.shape[0], dtype=bool)
    for i in range(2):
        v = V[:, i]
        b = B[:, i]
        par = np.abs(v) < 1e-14
        alive &= ~(par & (np.abs(b) > half[i]))
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (-half[i] - b) / v
            t2 = (half[i] - b) / v
        lo, hi = np.minimum(t1, t2), np.maximum(t1, t2)
        upd = ~par
        tmin = np.where(upd, np.maximum(tmin, lo), tmin)
        tmax = np.where(upd, np.minimum(tmax, hi), tmax)
    if lengths is None:
        chord = np.where(alive, np.clip(tmax - tmin, 0.0, None), 0.0)
        return int(np.count_nonzero(chord >= 0.5))
    lo = np.maximum(tmin, -lengths / 2.0)
    hi = np.minimum(tmax, lengths / 2.0)
    chord = np.where(alive, np.clip(hi - lo, 0.0, None), 0.0)
    return int(np.count_nonzero(chord >= lengths / 2.0))


def m_tubes_2d(centers, dirs, lengths, w: float, rect_len: float = 1.0,
               anchor_cap: int = 64, partner_cap: int = 32,
               single_cap: int = 384) -> int:
    """Max segments concentrated in a w x rect_len rectangle (2D families).

    `lengths=None` treats members as infinite lines with chord threshold 1/2.
    """
    centers = np.asarray(centers, dtype=float)
    dirs = np.asarray(dirs, dtype=float)
    n = centers.shape[0]
    if n == 0:
        return 0
    best = 0
    for i in _subsample(n, single_cap):
        best = max(best, _segment_rect_counts(centers, dirs, lengths,
                                              centers[i], dirs[i], w, rect_len))
    for i in _subsample(n, anchor_cap):
        for j in _subsample(n, partner_cap):
            if i == j:
                continue
            mid = (centers[i] + centers[j]) / 2.0
            cross = dirs[i][0] * dirs[j][1] - dirs[i][1] * dirs[j][0]
            if abs(cross) > 1e-12:
                # intersection point of the two axis lines
                dbase = centers[j] - centers[i]
                t = (dbase[0] * dirs[j][1] - dbase[1] * dirs[j][0]) / cross
                mid = centers[i] + t * dirs[i]
            best = max(best, _segment_rect_counts(centers, dirs, lengths,
                                                  mid, dirs[i], w, rect_len))
    return best


def m_lines_2d(lines, w: float, **kw) -> int:
    """Max 2D lines crossing a w x 1 rectangle with chord >= 1/2."""
    bases, dirs = _line_arrays(lines)
    return m_tubes_2d(bases, dirs, None, w, **kw)


# ---------------------------------------------------------------------------
# configuration concentration


class ConfigMetrics:
    """Cached pairwise point / direction / line distances of a configuration."""

    def __init__(self, config: PointLineConfiguration):
        self.config = config
        P = config.points()
        D = config.directions()
        bases = config.line_bases()
        n = len(config)
        diff = P[:, None, :] - P[None, :, :]
        self.point_dist = np.linalg.norm(diff, axis=2)
        dminus = np.linalg.norm(D[:, None, :] - D[None, :, :], axis=2)
        dplus = np.linalg.norm(D[:, None, :] + D[None, :, :], axis=2)
        self.dir_dist = np.minimum(dminus, dplus)
        if config.dim == 3:
            cross = np.cross(np.broadcast_to(D[:, None, :], (n, n, 3)),
                             np.broadcast_to(D[None, :, :], (n, n, 3)))
            nn = np.linalg.norm(cross, axis=2)
            db = bases[None, :, :] - bases[:, None, :]
            para = np.abs(np.einsum("ijk,ijk->ij", db, cross))
            t = np.einsum("ijk,ik->ij", db, D)
            perp = np.linalg.norm(db - t[..., None] * D[:, None, :], axis=2)
            with np.errstate(divide="ignore", invalid="ignore"):
                skew = para / np.where(nn < 1e-12, 1.0, nn)
            lmin = np.where(nn < 1e-12, perp, skew)
        else:
            cross = (D[:, None, 0] * D[None, :, 1] - D[:, None, 1] * D[None, :, 0])
            db = bases[None, :, :] - bases[:, None, :]
            t = np.einsum("ijk,ik->ij", db, D)
            perp = np.linalg.norm(db - t[..., None] * D[:, None, :], axis=2)
            lmin = np.where(np.abs(cross) < 1e-12, perp, 0.0)
        self.line_dist = self.dir_dist + lmin

    def local_counts(self, u: float, v: float, w: float,
                     subset: np.ndarray | None = None) -> np.ndarray:
        """Per-anchor counts of members within the (u, v, w) scale triple.

        A scale of 1 means "anywhere within unit range" and is treated as
        unconstrained (the cube diameter exceeds 1).
        """
        pd, dd, ld = self.point_dist, self.dir_dist, self.line_dist
        if subset is not None:
            pd = pd[np.ix_(subset, subset)]
            dd = dd[np.ix_(subset, subset)]
            ld = ld[np.ix_(subset, subset)]
        uu = np.inf if u >= 1 else u
        vv = np.inf if v >= 1 else v
        ww = np.inf if w >= 1 else w
        mask = (pd <= uu) & (dd <= vv) & (ld <= ww)
        return mask.sum(axis=1)


def m_config(config: PointLineConfiguration, u: float, v: float, w: float,
             metrics: ConfigMetrics | None = None) -> int:
    """Max over member anchors of pairs within point/direction/line scales.

    Because the direction distance never exceeds the line distance, the
    identity M(u, v, w) = M(u, min(v, w), w) holds exactly.
    """
    for s in (u, v, w):
        if not 0 < s <= 1 + 1e-9:
            raise ValueError("scales must lie in (0, 1]")
    if len(config) == 0:
        return 0
    if metrics is None:
        metrics = ConfigMetrics(config)
    return int(metrics.local_counts(u, v, w).max())


@dataclass(frozen=True)
class CoveringProfileRow:
    scale: float
    points_cover: int
    lines_cover: int
    directions_cover: int
    m_config_point: int
    sandwich_lower: float


def covering_profiles(config: PointLineConfiguration, scales,
                      metrics: ConfigMetrics | None = None) -> list[CoveringProfileRow]:
    """Covering numbers of P[X], L[X], theta[X] per scale with sandwich data."""
    if metrics is None:
        metrics = ConfigMetrics(config)
    P = config.points()
    lines = config.lines()
    dirs = config.directions()
    rows = []
    for w in scales:
        pc = covering_number(P, w)
        lc = line_covering_number(lines, w)
        tc = direction_covering_number(dirs, w)
        mx = m_config(config, min(w, 1.0), 1.0, 1.0, metrics)
        rows.append(CoveringProfileRow(scale=float(w), points_cover=pc,
                                       lines_cover=lc, directions_cover=tc,
                                       m_config_point=mx,
                                       sandwich_lower=len(config) / mx))
    return rows


# ---------------------------------------------------------------------------
# Katz-Tao fits


@dataclass(frozen=True)
class KatzTaoFit:
    """Least-squares concentration exponents with the realized constant."""

    dim: int
    delta: float
    exponents: tuple[float, ...]
    constant: float
    residuals: tuple[tuple[float, float, int, float], ...]  # (u, w, measured, fitted)

    @property
    def max_residual(self) -> float:
        return max(abs(np.log(max(m, 1)) - np.log(f))
                   for (_, _, m, f) in self.residuals)


def katz_tao_fit(family, delta: float, dim: int, max_octaves: int = 8) -> KatzTaoFit:
    """Fit log box counts against log(u/delta), log(w/delta) on a dyadic grid.

    3D families are lists of lines (boxes u x w x 1); 2D families are
    (centers, dirs, lengths) segment arrays (boxes w x 1, single exponent).
    """
    if dim == 3:
        pairs = []
        w = delta
        while w <= 1.0 + 1e-9:
            u = delta
            while u <= w + 1e-9:
                pairs.append((min(u, 1.0), min(w, 1.0)))
                u *= 2.0
            w *= 2.0
        pairs = sorted(set(pairs))[: max_octaves * max_octaves]
        if len(pairs) < 4:
            raise DegenerateGridError("fewer than 4 scale cells")
        values, _ = m_lines_sweep(family, pairs)
        A = np.array([[1.0, np.log(u / delta), np.log(w / delta)] for u, w in pairs])
        y = np.log(np.maximum(values, 1))
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        fitted = np.exp(A @ coef)
        rows = tuple((u, w, int(v), float(f))
                     for (u, w), v, f in zip(pairs, values, fitted))
        return KatzTaoFit(dim=3, delta=delta, exponents=(float(coef[1]), float(coef[2])),
                          constant=float(np.exp(coef[0])), residuals=rows)
    centers, dirs, lengths = family
    ws = []
    w = delta
    while w <= 1.0 + 1e-9:
        ws.append(min(w, 1.0))
        w *= 2.0
    if len(ws) < 4:
        raise DegenerateGridError("fewer than 4 scale cells")
    values = [m_tubes_2d(centers, dirs, lengths, w) for w in ws]
    A = np.array([[1.0, np.log(w / delta)] for w in ws])
    y = np.log(np.maximum(values, 1))
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    fitted = np.exp(A @ coef)
    rows = tuple((w, w, int(v), float(f)) for w, v, f in zip(ws, values, fitted))
    return KatzTaoFit(dim=2, delta=delta, exponents=(float(coef[1]),),
                      constant=float(np.exp(coef[0])), residuals=rows)


# ---------------------------------------------------------------------------
# plane-reduction check


@dataclass(frozen=True)
class PlaneReductionRow:
    u: float
    w: float
    measured: int
    bound: float
    ratio: float


@dataclass(frozen=True)
class PlaneReductionReport:
    delta: float
    gamma: float
    precondition_ok: bool
    rows: tuple[PlaneReductionRow, ...]
    fitted_constant: float
    slab_count: int
    slab_bound: float


def plane_reduction_check(config: PointLineConfiguration, delta: float,
                          gamma: float) -> PlaneReductionReport:
    """Compare measured box concentration against delta^-3 u^(1+g) w^(2-g).

    Also restricts the configuration to the worst box and reports the size of
    the collapsed 2D configuration against (u/w)^(gamma-2).
    """
    if config.dim != 3:
        raise ValueError("plane reduction check requires a 3D configuration")
    dmin = min_config_distance(config)
    precondition_ok = dmin >= delta * (1 - 1e-9)
    pairs = []
    w = 2.0 * delta
    while w <= 1.0 + 1e-9:
        u = delta
        while u <= w + 1e-9:
            if u * w >= delta * (1 - 1e-12):
                pairs.append((min(u, 1.0), min(w, 1.0)))
            u *= 2.0
        w *= 2.0
    pairs = sorted(set(pairs))
    if not pairs:
        return PlaneReductionReport(delta=delta, gamma=gamma,
                                    precondition_ok=precondition_ok,
                                    rows=(), fitted_constant=0.0,
                                    slab_count=0, slab_bound=np.inf)
    values, boxes = m_lines_sweep(config.lines(), pairs)
    rows = []
    worst = (0.0, 0)
    for idx, ((u, w), v) in enumerate(zip(pairs, values)):
        bound = delta**-3 * u ** (1 + gamma) * w ** (2 - gamma)
        ratio = v / bound
        rows.append(PlaneReductionRow(u=u, w=w, measured=v, bound=bound, ratio=ratio))
        if ratio > worst[0]:
            worst = (ratio, idx)
    u, w = pairs[worst[1]]
    restricted = slab_restriction(config, boxes[worst[1]])
    slab_bound = (u / w) ** (gamma - 2)
    return PlaneReductionReport(delta=delta, gamma=gamma,
                                precondition_ok=precondition_ok,
                                rows=tuple(rows), fitted_constant=worst[0],
                                slab_count=len(restricted), slab_bound=slab_bound)


# ---------------------------------------------------------------------------
# uniformization


@dataclass(frozen=True)
class UniformityCertificate:
    """Scale-triple count ratios of a uniformized configuration."""

    K: float
    scales: tuple[float, ...]
    ratios: dict = field(default_factory=dict)  # (i,j,k) -> (min_count, max_count)
    retained: int = 0
    original: int = 0

    @property
    def valid(self) -> bool:
        return all(mx == 0 or mn >= mx / self.K - 1e-9
                   for mn, mx in self.ratios.values())

    @property
    def worst_ratio(self) -> float:
        vals = [mn / mx for mn, mx in self.ratios.values() if mx > 0]
        return min(vals) if vals else 1.0


def uniformize(config: PointLineConfiguration, K: float,
               delta: float | None = None, c_sep: float = 4,
               max_iter: int = 500):
    """Extract a subset with uniform local counts at every K-power scale triple.

    First selects a parity class of separated cubes at every ladder scale
    (cubes in one class are pairwise c_sep * scale apart), then repeatedly
    buckets members by the dyadic class of their local count at each scale
    triple and keeps the largest bucket, until all triples have counts within
    a factor K.  Returns (subset, certificate).
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    n = len(config)
    if n < 2:
        raise EmptyConfigurationError("uniformize needs at least 2 pairs")
    if delta is None:
        delta = min_config_distance(config)
    if delta <= 0:
        raise ValueError("configuration has zero minimal distance")
    m = max(1, int(np.floor(np.log(1.0 / delta) / np.log(K))))
    scales = tuple(float(K) ** -(j + 1) for j in range(m))

    P = config.points()
    alive = np.arange(n)
    q = int(c_sep) + 1
    for s in scales:
        cube = np.floor(P[alive] / s).astype(np.int64)
        cls = cube % q
        packed = cls[:, 0].copy()
        for ax in range(1, cls.shape[1]):
            packed = packed * q + cls[:, ax]
        vals, counts = np.unique(packed, return_counts=True)
        keep = vals[int(np.argmax(counts))]
        alive = alive[packed == keep]
        if alive.size == 0:
            raise EmptyConfigurationError("separation phase removed all pairs")

    metrics = ConfigMetrics(config)
    triples = [(si, sj, sk) for si in scales for sj in scales for sk in scales]
    for _ in range(max_iter):
        stable = True
        for (si, sj, sk) in triples:
            counts = metrics.local_counts(si, sj, sk, subset=alive)
            cmax, cmin = int(counts.max()), int(counts.min())
            if cmax <= K * cmin:
                continue
            buckets = np.floor(np.log2(counts)).astype(int)
            vals, sizes = np.unique(buckets, return_counts=True)
            keep = vals[int(np.argmax(sizes))]
            alive = alive[buckets == keep]
            stable = False
            break
        if stable or alive.size < 2:
            break

    pairs = tuple(config.pairs[i] for i in alive)
    if not pairs:
        raise EmptyConfigurationError("uniformization removed all pairs")
    subset = PointLineConfiguration(dim=config.dim, pairs=pairs,
                                    provenance=f"uniformize({config.provenance},K={K})")
    ratios = {}
    for (si, sj, sk) in triples:
        counts = metrics.local_counts(si, sj, sk, subset=alive)
        ratios[(si, sj, sk)] = (int(counts.min()), int(counts.max()))
    cert = UniformityCertificate(K=float(K), scales=scales, ratios=ratios,
                                 retained=len(pairs), original=n)
    return subset, cert


def direction_profile(config: PointLineConfiguration, w: float,
                      delta: float | None = None) -> list[float]:
    """Direction-spread exponents across the w-power rescaling ladder.

    beta_j solves w^beta = w^2 |theta[X_{w^j}]|_w for the nested rescalings
    anchored at the first pair; the sequence is truncated when a rescaled
    configuration runs empty.
    """
    if not 0 < w < 1:
        raise ValueError("w must lie in (0, 1)")
    if delta is None:
        delta = min_config_distance(config)
    depth = int(np.floor(np.log(delta) / np.log(w)))
    betas = []
    current = config
    for _ in range(depth + 1):
        cover = direction_covering_number(current.directions(), w)
        betas.append(2.0 + np.log(cover) / np.log(w))
        try:
            current = rescale_config(current, w, current.pairs[0])
        except (EmptyConfigurationError, ValueError):
            break
    return betas
