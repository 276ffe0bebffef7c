"""Certified multiprecision roots and zero-location predicates.

Roots come from Aberth iteration on each exact squarefree factor, so repeated
roots are handled by algebra rather than by the iteration.  Each root carries an
inclusion radius ``deg * |p/p'|`` which, when the disks are pairwise disjoint,
isolates exactly one root per disk.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exactpoly import ExactPoly, ToolkitError, mp_context, squarefree_factors

__all__ = [
    "ZeroSet",
    "InterlaceReport",
    "PrecisionCapExceeded",
    "AmbiguousAtPrecision",
    "find_zeros",
    "interlacing_report",
    "sign_changes",
    "cluster_gap",
    "DEFAULT_GAP_THRESHOLD",
]

DEFAULT_PRECISION = 256
PRECISION_CAP = 4096


class PrecisionCapExceeded(ToolkitError):
    pass


class AmbiguousAtPrecision(ToolkitError):
    pass


@dataclass(frozen=True)
class ZeroSet:
    """Roots of a polynomial, repeated according to multiplicity.

    ``radii[k]`` is the inclusion radius of ``points[k]``; ``multiplicity[k]``
    is the exact multiplicity obtained from the squarefree decomposition.
    """

    points: tuple
    precision: int
    radii: tuple
    multiplicity: tuple
    source: str = ""
    certified: bool = True

    def __len__(self) -> int:
        return len(self.points)

    @property
    def ctx(self):
        return mp_context(self.precision)

    def is_real(self, k: int) -> bool:
        return abs(self.ctx.im(self.points[k])) <= self.radii[k]

    def real_points(self) -> list:
        """Real parts of the points certified to be real, sorted."""
        return sorted(self.ctx.re(self.points[k]) for k in range(len(self)) if self.is_real(k))

    def nonreal_count(self) -> int:
        return sum(1 for k in range(len(self)) if not self.is_real(k))

    def distinct(self) -> "ZeroSet":
        seen, pts, rad, mult = set(), [], [], []
        for z, r, m in zip(self.points, self.radii, self.multiplicity):
            key = (id(z),)
            if m > 1:
                key = (m, str(z))
            if key in seen:
                continue
            seen.add(key)
            pts.append(z)
            rad.append(r)
            mult.append(m)
        return ZeroSet(tuple(pts), self.precision, tuple(rad), tuple(mult), self.source, self.certified)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["re", "im", "radius", "multiplicity"])
        for z, r, m in zip(self.points, self.radii, self.multiplicity):
            w.writerow([_s(self.ctx.re(z)), _s(self.ctx.im(z)), _s(r, 8), m])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "precision": self.precision,
            "certified": self.certified,
            "points": [[_s(self.ctx.re(z)), _s(self.ctx.im(z))] for z in self.points],
            "radii": [_s(r, 8) for r in self.radii],
            "multiplicity": list(self.multiplicity),
        }

    @classmethod
    def from_json(cls, d: dict) -> "ZeroSet":
        ctx = mp_context(int(d["precision"]))
        pts = tuple(ctx.mpc(ctx.mpf(a), ctx.mpf(b)) for a, b in d["points"])
        return cls(pts, int(d["precision"]), tuple(ctx.mpf(r) for r in d["radii"]), tuple(d["multiplicity"]),
                   d.get("source", ""), bool(d.get("certified", True)))


def _s(v, digits: int | None = None) -> str:
    ctx = mp_context(64)
    if digits is not None:
        return ctx.nstr(v, digits)
    import mpmath

    return mpmath.libmp.to_str(v._mpf_, max(int(v.context.prec * 0.30103), 1)) if hasattr(v, "_mpf_") else str(v)


def _aberth(coeffs: Sequence[Fraction], ctx, maxiter: int):
    """All roots of a squarefree polynomial given by ascending rational coefficients."""
    n = len(coeffs) - 1
    a = [ctx.mpf(c.numerator) / c.denominator for c in coeffs]
    lead = a[-1]
    a = [c / lead for c in a]
    if n == 1:
        return [ctx.mpc(-a[0])]
    da = [k * a[k] for k in range(1, n + 1)]
    # starting circle: geometric mean radius, shifted by the centroid
    centre = -a[n - 1] / n
    mags = [abs(c) for c in a[:-1] if c != 0]
    radius = max(ctx.mpf(1) if not mags else max(abs(a[k]) ** (ctx.mpf(1) / (n - k)) for k in range(n) if a[k] != 0), ctx.mpf("1e-3"))
    z = [centre + radius * ctx.expjpi(ctx.mpf(2 * k) / n + ctx.mpf(1) / (2 * n)) for k in range(n)]
    start = _double_start(coeffs)
    if start is not None:
        z = [ctx.mpc(complex(v)) for v in start]
    eps = ctx.mpf(2) ** (-ctx.prec + 4)
    absa = [abs(c) for c in a]
    done = [False] * n
    for it in range(maxiter):
        moved = False
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            p = a[n]
            dp = da[n - 1]
            bound = absa[n]
            az = abs(zi)
            for k in range(n - 1, -1, -1):
                p = p * zi + a[k]
                bound = bound * az + absa[k]
            for k in range(n - 2, -1, -1):
                dp = dp * zi + da[k]
            # stop once the residual is at the rounding level of Horner's rule
            if abs(p) <= eps * bound * n:
                done[i] = True
                continue
            ratio = p / dp if dp != 0 else ctx.mpf(1)
            s = ctx.mpf(0)
            for j in range(n):
                if j != i:
                    s += 1 / (zi - z[j])
            z[i] = zi - ratio / (1 - ratio * s)
            moved = True
        if not moved:
            break
    return z


def _double_start(coeffs: Sequence[Fraction]):
    """Aberth in double precision for starting values; None if the data overflow."""
    n = len(coeffs) - 1
    try:
        a = np.array([float(c) for c in reversed(coeffs)], dtype=float)
    except OverflowError:
        return None
    if not np.all(np.isfinite(a)) or a[0] == 0:
        return None
    a = a / a[0]
    da = np.polyder(a)
    nz = [abs(a[k]) ** (1.0 / k) for k in range(1, n + 1) if a[k] != 0]
    radius = max(max(nz) if nz else 1.0, 1e-3)
    centre = -a[1] / n
    z = centre + radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + np.pi / (2 * n)))
    eye = np.eye(n, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(500):
            ratio = np.polyval(a, z) / np.polyval(da, z)
            diff = z[:, None] - z[None, :]
            diff[eye] = 1.0
            inv = 1.0 / diff
            inv[eye] = 0.0
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
            if not np.all(np.isfinite(step)):
                return None
            z = z - step
            if np.max(np.abs(step) / np.maximum(np.abs(z), 1.0)) < 1e-14:
                break
    return z if np.all(np.isfinite(z)) else None


def _eval(coeffs, z, ctx):
    p = ctx.mpf(0)
    for c in reversed(coeffs):
        p = p * z + c
    return p


def _certify(factor: ExactPoly, roots: list, ctx, prec: int):
    """Inclusion radii for roots of a squarefree factor; None when certification fails."""
    n = factor.degree
    a = [ctx.mpf(c.numerator) / c.denominator for c in factor.coeffs]
    da = [k * a[k] for k in range(1, n + 1)]
    thresh = ctx.mpf(2) ** (-(prec // 2))
    radii = []
    for i, z in enumerate(roots):
        p = _eval(a, z, ctx)
        dp = _eval(da, z, ctx)
        if dp == 0:
            return None
        rad = n * abs(p / dp)
        near = min((abs(z - w) for j, w in enumerate(roots) if j != i), default=ctx.mpf(1))
        if near == 0 or abs(p) / (abs(dp) * near) > thresh:
            return None
        radii.append(rad)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if radii[i] + radii[j] >= abs(roots[i] - roots[j]):
                return None
    return radii


def find_zeros(p: ExactPoly, precision: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP, source: str = "") -> ZeroSet:
    """Roots of ``p`` with inclusion radii, doubling precision until certified.

    Raises PrecisionCapExceeded when certification still fails at ``cap`` bits.
    """
    if p.degree < 1:
        raise ValueError("find_zeros needs a polynomial of degree >= 1")
    prec = precision
    factors = squarefree_factors(p)
    while True:
        wp = prec + 32
        ctx = mp_context(wp)
        pts, rad, mult = [], [], []
        ok = True
        for f, m in factors:
            if f.degree < 1:
                continue
            roots = _aberth(f.coeffs, ctx, maxiter=100 + 40 * f.degree)
            r = _certify(f, roots, ctx, prec)
            if r is None:
                ok = False
                break
            for z, rr in zip(roots, r):
                for _ in range(m):
                    pts.append(z)
                    rad.append(rr)
                    mult.append(m)
        if ok:
            # disks of different squarefree factors must not overlap either
            if _cross_overlap(pts, rad, mult):
                ok = False
        if ok:
            out = mp_context(prec)
            order = sorted(range(len(pts)), key=lambda k: (float(ctx.re(pts[k])), float(ctx.im(pts[k]))))
            return ZeroSet(tuple(out.convert(pts[k]) for k in order), prec, tuple(out.convert(rad[k]) for k in order),
                           tuple(mult[k] for k in order), source or str(p), True)
        if prec * 2 > cap:
            raise PrecisionCapExceeded(f"roots not certified at {prec} bits (cap {cap})")
        prec *= 2


def _cross_overlap(pts, rad, mult) -> bool:
    distinct = []
    for z, r in zip(pts, rad):
        if not distinct or distinct[-1][0] is not z:
            distinct.append((z, r))
    for i in range(len(distinct)):
        for j in range(i + 1, len(distinct)):
            zi, ri = distinct[i]
            zj, rj = distinct[j]
            if zi is not zj and ri + rj >= abs(zi - zj):
                return True
    return False


@dataclass(frozen=True)
class InterlaceReport:
    interval: tuple
    count_inside_a: int
    count_inside_b: int
    interlaced_pairs: int
    violations: tuple

    @property
    def perfect(self) -> bool:
        return not self.violations and self.count_inside_a >= 1


def _inside(zs: ZeroSet, lo, hi, closed: tuple) -> list:
    ctx = zs.ctx
    out = []
    for k in range(len(zs)):
        if not zs.is_real(k):
            continue
        x = ctx.re(zs.points[k])
        r = zs.radii[k]
        for e in (lo, hi):
            if e is not None and abs(x - e) <= r:
                raise AmbiguousAtPrecision(f"zero {ctx.nstr(x, 15)} lies within its radius of the endpoint {e}")
        left_ok = lo is None or x > lo or (closed[0] and x == lo)
        right_ok = hi is None or x < hi or (closed[1] and x == hi)
        if left_ok and right_ok:
            out.append((x, r))
    return sorted(out, key=lambda t: t[0])


def interlacing_report(zp: ZeroSet, zs: ZeroSet, interval: tuple, closed: tuple = (False, False)) -> InterlaceReport:
    """Count real zeros of both sets in ``interval`` and check interlacing.

    ``interlaced_pairs`` is the number of gaps between consecutive points of
    ``zp`` inside the interval that contain exactly one point of ``zs``;
    ``violations`` lists the positions of the other gaps.  Endpoints may be
    ``None`` for an unbounded side.
    """
    lo, hi = interval
    ctx = zp.ctx

    def real(v):
        if v is None:
            return None
        if isinstance(v, (int, Fraction)):
            return ctx.mpf(Fraction(v).numerator) / Fraction(v).denominator
        return ctx.mpf(v)

    lo_m, hi_m = real(lo), real(hi)
    a = _inside(zp, lo_m, hi_m, closed)
    b = _inside(zs, lo_m, hi_m, closed)
    for x, r in b:
        for y, s in a:
            if abs(x - y) <= r + s:
                raise AmbiguousAtPrecision("a point of the second set is not separated from the first set")
    pairs = 0
    violations = []
    for g in range(len(a) - 1):
        left, right = a[g][0], a[g + 1][0]
        inside = sum(1 for x, _ in b if left < x < right)
        if inside == 1:
            pairs += 1
        else:
            violations.append(g)
    return InterlaceReport((lo, hi), len(a), len(b), pairs, tuple(violations))


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def sign_changes(evaluator: Callable, interval: tuple, grid: int = 200, depth: int = 6) -> int:
    """Lower bound for the number of sign changes of a real function on an open interval.

    The function is sampled on a uniform grid; cells whose middle sample has
    smaller magnitude than both ends (a possible hidden pair of roots) are
    bisected up to ``depth`` times.  Every counted change is a real one.
    """
    lo, hi = (float(v) if not hasattr(v, "_mpf_") else v for v in interval)
    xs = [lo + (hi - lo) * (k + 0.5) / grid for k in range(grid)]
    samples = [(x, evaluator(x)) for x in xs]

    def refine(x0, f0, x1, f1, level):
        if level == 0:
            return []
        xm = (x0 + x1) / 2
        fm = evaluator(xm)
        out = []
        if _sign(fm) != _sign(f0) or abs(fm) < min(abs(f0), abs(f1)):
            out += refine(x0, f0, xm, fm, level - 1)
            out.append((xm, fm))
            out += refine(xm, fm, x1, f1, level - 1)
        return out

    pts = [samples[0]]
    for (x0, f0), (x1, f1) in zip(samples, samples[1:]):
        if _sign(f0) == _sign(f1):
            pts += refine(x0, f0, x1, f1, depth)
        pts.append((x1, f1))
    signs = [_sign(f) for _, f in pts if _sign(f) != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


DEFAULT_GAP_THRESHOLD = 3.0


def cluster_gap(zs, axis_window: tuple | None = None, threshold: float = DEFAULT_GAP_THRESHOLD):
    """Group real points into clusters separated by unusually large gaps.

    A gap starts a new cluster when it exceeds ``threshold`` times the median
    gap.  Returns ``(clusters, max_gap)``; ``zs`` may be a ZeroSet or a
    sequence of real numbers.
    """
    if isinstance(zs, ZeroSet):
        xs = [float(x) for x in zs.real_points()]
    else:
        xs = sorted(float(x) for x in zs)
    if axis_window is not None:
        lo, hi = (float(v) for v in axis_window)
        xs = [x for x in xs if lo <= x <= hi]
    if not xs:
        return 0, 0.0
    if len(xs) == 1:
        return 1, 0.0
    gaps = [b - a for a, b in zip(xs, xs[1:])]
    med = sorted(gaps)[len(gaps) // 2]
    clusters = 1 + sum(1 for g in gaps if g > threshold * med)
    return clusters, max(gaps)
