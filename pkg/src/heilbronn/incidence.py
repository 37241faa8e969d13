"""Smoothed incidence counts, the normalized profile B(w), and high-low RHS
evaluators.

The incidence count pairs every point with every line and weights the pair by
the integral of the scale-w mollifier along the line; since the mollifier is
radial this reduces to a cached 1D profile of the point-line distance, so a
count is a sum of table lookups over pairs within the kernel support.  The
right-hand-side evaluators mirror the high-low inequalities: the basic form,
the direction-aware refinement, the capped variant with verified hypotheses,
and the well-spaced variant with the 9/2 exponent.  Slack factors are never
absorbed silently; every evaluator reports the quantities it used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .concentration import (
    HypothesisViolation,
    m_lines,
    m_lines_2d,
    m_lines_sweep,
    m_points,
)
from .configurations import PointLineConfiguration, rescale_config
from .geometry import (
    direction_covering_number,
    line_covering_number,
    points_line_distance,
)
from .kernels import bump_profile


def _dirs_of(lines) -> np.ndarray:
    return np.array([ln.dir for ln in lines])


def incidence_count(w: float, P, lines, dim: int) -> float:
    """Smoothed incidence count at scale w.

    Each (point, line) pair contributes w^(d-1) times the integral of the
    scale-w kernel along the line, i.e. G(d(p, line)/w) for the cached radial
    line profile G; pairs farther than the kernel support contribute exactly
    zero.
    """
    return incidence_many([w], P, lines, dim)[0]


def incidence_many(ws, P, lines, dim: int) -> list[float]:
    """Incidence counts at several scales sharing one distance computation."""
    ws = [float(w) for w in ws]
    for w in ws:
        if not 0 < w <= 1:
            raise ValueError("scales must lie in (0, 1]")
    prof = bump_profile(dim)
    P = np.asarray(P, dtype=float)
    totals = np.zeros(len(ws))
    if P.size == 0 or not lines:
        return list(totals)
    support = prof.eta_support
    for line in lines:
        d = points_line_distance(P, line)
        dmax = support * max(ws)
        d = d[d < dmax]
        if d.size == 0:
            continue
        for k, w in enumerate(ws):
            totals[k] += float(np.sum(prof.line_profile(d / w)))
    return [float(t) for t in totals]


def normalized_incidence(w: float, P, lines, dim: int) -> float:
    """B(w): incidence count normalized by w^(d-1) |P| |L| (about 1 at random)."""
    P = np.asarray(P, dtype=float)
    if P.shape[0] == 0 or not lines:
        raise ValueError("normalized incidence needs nonempty families")
    count = incidence_count(w, P, lines, dim)
    return count / (w ** (dim - 1) * P.shape[0] * len(lines))


def normalized_incidence_many(ws, P, lines, dim: int) -> list[float]:
    P = np.asarray(P, dtype=float)
    if P.shape[0] == 0 or not lines:
        raise ValueError("normalized incidence needs nonempty families")
    counts = incidence_many(ws, P, lines, dim)
    return [c / (w ** (dim - 1) * P.shape[0] * len(lines)) for c, w in zip(counts, ws)]


# ---------------------------------------------------------------------------
# multiscale report


@dataclass(frozen=True)
class MultiscaleRow:
    scale: float
    b_value: float
    b_difference: float      # |B(w) - B(w/2)|, 0.0 on the last rung
    m_points: int
    m_lines: int
    rhs_basic: float
    ratio: float             # difference^2 / rhs_basic


@dataclass(frozen=True)
class MultiscaleReport:
    dim: int
    n_points: int
    n_lines: int
    rows: tuple[MultiscaleRow, ...]

    def to_csv(self) -> str:
        lines = [
            "# multiscale incidence report",
            "# scale: dyadic evaluation scale w",
            "# b_value: normalized smoothed incidence count at w",
            "# b_difference: |B(w) - B(w/2)| between adjacent rungs",
            "# m_points: max points in a w-cube",
            "# m_lines: max lines crossing a w x w x 1 box (w x 1 in 2D)",
            "# rhs_basic: basic high-low right-hand side at w",
            "# ratio: b_difference^2 / rhs_basic",
            "scale,b_value,b_difference,m_points,m_lines,rhs_basic,ratio",
        ]
        for r in self.rows:
            lines.append(f"{r.scale:.12g},{r.b_value:.12g},{r.b_difference:.12g},"
                         f"{r.m_points},{r.m_lines},{r.rhs_basic:.12g},{r.ratio:.12g}")
        return "\n".join(lines) + "\n"


def rhs_basic(w: float, P, lines, dim: int, eps: float = 0.1,
              ml_value: int | None = None) -> float:
    """Basic high-low right-hand side at scale w.

    2D: w^-3 (M_P/|P|) (M_L(w x 1)/|L|); 3D: w^(-6-eps) with the w x w x 1 box.
    """
    P = np.asarray(P, dtype=float)
    mp = m_points(P, w)
    if ml_value is None:
        ml_value = m_lines(lines, w, w) if dim == 3 else m_lines_2d(lines, w)
    if dim == 3:
        lead = w ** (-6.0 - eps)
    else:
        lead = w ** -3.0
    return lead * (mp / P.shape[0]) * (ml_value / len(lines))


def dyadic_scan(P, lines, w_min: float, w_max: float, dim: int,
                eps: float = 0.1) -> MultiscaleReport:
    """B(w) with successive differences and concentration data on a dyadic ladder."""
    if not 0 < w_min < w_max <= 1:
        raise ValueError("need 0 < w_min < w_max <= 1")
    ws = []
    w = w_max
    while w >= w_min * (1 - 1e-12):
        ws.append(w)
        w /= 2.0
    bs = normalized_incidence_many(ws, P, lines, dim)
    rows = []
    for i, w in enumerate(ws):
        diff = abs(bs[i] - bs[i + 1]) if i + 1 < len(ws) else 0.0
        mp = m_points(P, w)
        ml = m_lines(lines, w, w) if dim == 3 else m_lines_2d(lines, w)
        rhs = rhs_basic(w, P, lines, dim, eps, ml_value=ml)
        ratio = diff**2 / rhs if rhs > 0 else np.inf
        rows.append(MultiscaleRow(scale=w, b_value=bs[i], b_difference=diff,
                                  m_points=mp, m_lines=ml, rhs_basic=rhs, ratio=ratio))
    return MultiscaleReport(dim=dim, n_points=np.asarray(P).shape[0],
                            n_lines=len(lines), rows=tuple(rows))


# ---------------------------------------------------------------------------
# refined right-hand sides (3D)


def _dyadic_us(delta: float) -> list[float]:
    us = []
    u = 1.0
    while u > delta * (1 + 1e-12):
        us.append(u)
        u /= 2.0
    return us


def rhs_refined(delta: float, P, lines, eps: float = 0.1):
    """Direction-aware high-low RHS: max over dyadic u of the slab term.

    Returns (value, maximizing_u).  The slab term is
    min(cover(theta)^{1/2} delta, u) * u * M_L(delta x delta/u x 1) / |L|,
    multiplied by delta^(-6-eps) M_P(delta)/|P|.
    """
    P = np.asarray(P, dtype=float)
    theta_cover = direction_covering_number(_dirs_of(lines), delta)
    us = _dyadic_us(delta)
    scales = [(delta, min(1.0, delta / u)) for u in us]
    values, _ = m_lines_sweep(lines, scales)
    best, best_u = -np.inf, us[0]
    for u, ml in zip(us, values):
        term = min(np.sqrt(theta_cover) * delta, u) * u * ml / len(lines)
        if term > best:
            best, best_u = term, u
    lead = delta ** (-6.0 - eps) * m_points(P, delta) / P.shape[0]
    return lead * best, best_u


def rhs_direction_capped(delta: float, P, lines, nu: float, kappa: float,
                         M: float, eps: float = 0.1) -> float:
    """Capped high-low RHS nu^(kappa/4) delta^(-6-eps) (M_P/|P|) (M/|L|).

    Hypotheses verified numerically before evaluating: the direction covering
    number is at most nu delta^-2 and every dyadic slab count
    M_L(delta x delta/u x 1) is at most u^(kappa-2) M.  A violation raises
    HypothesisViolation listing the violating scales.
    """
    P = np.asarray(P, dtype=float)
    theta_cover = direction_covering_number(_dirs_of(lines), delta)
    violations = []
    if theta_cover > nu * delta**-2:
        violations.append(("theta", theta_cover, nu * delta**-2))
    us = _dyadic_us(delta)
    scales = [(delta, min(1.0, delta / u)) for u in us]
    values, _ = m_lines_sweep(lines, scales)
    for u, ml in zip(us, values):
        if ml > u ** (kappa - 2.0) * M * (1 + 1e-9):
            violations.append(("slab_u", u, ml, u ** (kappa - 2.0) * M))
    if violations:
        raise HypothesisViolation("capped high-low hypotheses failed", violations)
    return (nu ** (kappa / 4.0) * delta ** (-6.0 - eps)
            * (m_points(P, delta) / P.shape[0]) * (M / len(lines)))


@dataclass(frozen=True)
class WellSpacedRhs:
    value: float
    alpha: float
    ml_coarse: int   # M_L(sqrt(delta) x sqrt(delta) x 1)
    ml_fine: int     # M_L(delta x delta x 1)


def rhs_wellspaced(delta: float, P, lines, t1: float, t2: float, K: float,
                   A: float, C0: float, eps: float = 0.1) -> WellSpacedRhs:
    """Well-spaced high-low RHS with the 9/2-power normalization.

    Verifies the point non-concentration bound M_P(delta) <= A delta^3 |P|,
    the C0-uniformity of the line family at scale delta, and the Katz-Tao
    box bounds with (t1, t2, K) on a dyadic probe grid.  The unspecified
    order-one exponent on C0 is pinned to 1.
    """
    P = np.asarray(P, dtype=float)
    n_lines = len(lines)
    violations = []
    mp = m_points(P, delta)
    if mp > A * delta**3 * P.shape[0] * (1 + 1e-9):
        violations.append(("points", mp, A * delta**3 * P.shape[0]))

    root = float(np.sqrt(delta))
    pairs = [(delta, delta), (root, root)]
    probe = []
    w = delta
    while w <= 1.0 + 1e-9:
        u = delta
        while u <= w + 1e-9:
            probe.append((min(u, 1.0), min(w, 1.0)))
            u *= 4.0
        w *= 4.0
    allscales = sorted(set(pairs + probe))
    values, _ = m_lines_sweep(lines, allscales)
    table = dict(zip(allscales, values))
    for (u, w) in probe:
        cap = K * (u / delta) ** t1 * (w / delta) ** t2
        if table[(u, w)] > cap * (1 + 1e-9):
            violations.append(("katz_tao", u, w, table[(u, w)], cap))

    ml_fine = table[(delta, delta)]
    bases = np.array([ln.base for ln in lines])
    dirs = np.array([ln.dir for ln in lines])
    min_in_tube = np.inf
    for ln in lines:
        db = bases - ln.base
        t = db @ ln.dir
        perp = np.linalg.norm(db - t[:, None] * ln.dir, axis=1)
        ang = np.minimum(np.linalg.norm(dirs - ln.dir, axis=1),
                         np.linalg.norm(dirs + ln.dir, axis=1))
        near = np.count_nonzero((perp <= delta) & (ang <= 2 * delta))
        min_in_tube = min(min_in_tube, near)
    if min_in_tube < ml_fine / C0 - 1e-9:
        violations.append(("uniformity", min_in_tube, ml_fine / C0))
    if violations:
        raise HypothesisViolation("well-spaced high-low hypotheses failed", violations)

    alpha = (t1 + 2.0) / (2.0 * t1 + 2.0 * t2)
    ml_coarse = table[(root, root)]
    value = (C0 * delta**-eps * delta**-2.5 * K**alpha * A**3.5
             * ml_coarse ** (1 - alpha) * ml_fine**alpha / n_lines)
    return WellSpacedRhs(value=value, alpha=alpha,
                         ml_coarse=ml_coarse, ml_fine=ml_fine)


# ---------------------------------------------------------------------------
# initial estimate and double counting on uniformized configurations


@dataclass(frozen=True)
class TwoSidedCheck:
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        """Factor by which the left side would need inflating (<= 1 when it holds)."""
        if self.lhs <= 0:
            return np.inf
        return self.rhs / self.lhs


def initial_estimate_check(config: PointLineConfiguration, w: float) -> TwoSidedCheck:
    """B(w) against the direction-ratio lower bound from the rescaled copy.

    lhs = B(w; P[X], L[X]); rhs = cover(theta[X_w], w) / (w^(d-1) cover(L[X], w)).
    Up to a K^O(1) factor the inequality lhs >= rhs holds on uniformized input.
    """
    dim = config.dim
    P = config.points()
    lines = config.lines()
    lhs = normalized_incidence(w, P, lines, dim)
    rescaled = rescale_config(config, w, config.pairs[0])
    theta_w = direction_covering_number(rescaled.directions(), w)
    lines_w = line_covering_number(lines, w)
    rhs = theta_w / (w ** (dim - 1) * lines_w)
    return TwoSidedCheck(lhs=lhs, rhs=rhs)


def double_count_check(config: PointLineConfiguration, w: float) -> TwoSidedCheck:
    """Line covering number against w * direction cover * point cover."""
    lines_w = line_covering_number(config.lines(), w)
    rescaled = rescale_config(config, w, config.pairs[0])
    theta_w = direction_covering_number(rescaled.directions(), w)
    from .geometry import covering_number
    points_w = covering_number(config.points(), w)
    return TwoSidedCheck(lhs=float(lines_w), rhs=w * theta_w * points_w)
