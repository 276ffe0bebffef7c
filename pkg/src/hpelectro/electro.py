"""Discrete logarithmic energies and their criticality residuals.

An external field phi is stored through terms whose holomorphic derivative is
rational: ``c * log|p|`` contributes ``c p'/p`` and ``c * log|w|`` for a
Pearson weight contributes ``c B/A``.  With the energy

    E = sum_{i != j} log 1/|z_i - z_j| + 2 sum_j phi(z_j),

the residual ``sum_{i != j} 1/(z_j - z_i) - Phi'(z_j)`` equals ``-dE/dz_j``
(the Wirtinger derivative), which is what the finite-difference tests use.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactpoly import ExactPoly, ToolkitError, mp_context, poly_divmod, rat
from .zeros import ZeroSet, find_zeros

__all__ = [
    "FieldTerm",
    "ExternalField",
    "EquilibriumReport",
    "PoleCollision",
    "OverlapDetected",
    "points",
    "scalar_field",
    "vector_fields",
    "scalar_residual",
    "vector_residual",
    "energy",
    "histogram_export",
    "histogram_csv",
]


class PoleCollision(ToolkitError):
    pass


class OverlapDetected(ToolkitError):
    pass


@dataclass(frozen=True)
class FieldTerm:
    """One term of an external field.

    ``kind`` is ``log_abs_poly`` (data = p) or ``log_abs_weight`` (data = (A, B)).
    """

    coef: Fraction
    kind: str
    data: object

    def __post_init__(self):
        if self.kind not in ("log_abs_poly", "log_abs_weight"):
            raise ValueError(f"unknown field term {self.kind!r}")

    def pole_poly(self) -> ExactPoly:
        return self.data if self.kind == "log_abs_poly" else self.data[0]

    def dphi(self, z, ctx):
        if self.kind == "log_abs_poly":
            p = self.data
            return self.coef * p.deriv().eval_mp(z, ctx) / p.eval_mp(z, ctx)
        A, B = self.data
        return self.coef * B.eval_mp(z, ctx) / A.eval_mp(z, ctx)

    def phi(self, z, ctx):
        if self.kind == "log_abs_poly":
            return self.coef * ctx.log(abs(self.data.eval_mp(z, ctx)))
        return self.coef * _log_abs_weight(self.data[0], self.data[1], z, ctx)


_roots_cache: dict = {}


def _simple_roots(A: ExactPoly, prec: int):
    key = (A, prec)
    if key not in _roots_cache:
        _roots_cache[key] = find_zeros(A, prec) if A.degree >= 1 else None
    return _roots_cache[key]


def _log_abs_weight(A: ExactPoly, B: ExactPoly, z, ctx):
    # log|w| = Re(int Q) + sum_i Re(r_i) log|z - a_i|, residues r_i = B(a_i)/A'(a_i)
    Q, _ = poly_divmod(B, A)
    val = ctx.re(Q.integral().eval_mp(z, ctx))
    zs = _simple_roots(A, ctx.prec)
    if zs is not None:
        dA = A.deriv()
        for a in zs.points:
            r = B.eval_mp(a, ctx) / dA.eval_mp(a, ctx)
            val += ctx.re(r) * ctx.log(abs(z - a))
    return val


@dataclass(frozen=True)
class ExternalField:
    terms: tuple = ()

    def __add__(self, other: "ExternalField") -> "ExternalField":
        return ExternalField(self.terms + other.terms)

    @classmethod
    def log_abs_poly(cls, p: ExactPoly, coef) -> "ExternalField":
        if p.degree < 1:
            return cls(())
        return cls((FieldTerm(rat(coef), "log_abs_poly", p),))

    @classmethod
    def log_abs_weight(cls, A: ExactPoly, B: ExactPoly, coef) -> "ExternalField":
        return cls((FieldTerm(rat(coef), "log_abs_weight", (A, B)),))

    @classmethod
    def quadratic(cls) -> "ExternalField":
        """The field x^2/2 (Hermite zeros)."""
        return cls.log_abs_weight(ExactPoly([1]), ExactPoly([0, -2]), Fraction(-1, 2))

    def dphi(self, z, ctx):
        out = ctx.mpf(0)
        for t in self.terms:
            out += t.dphi(z, ctx)
        return out

    def phi(self, z, ctx):
        out = ctx.mpf(0)
        for t in self.terms:
            out += t.phi(z, ctx)
        return out

    def poles(self, prec: int) -> list:
        out = []
        for t in self.terms:
            p = t.pole_poly()
            if p.degree >= 1:
                out += list(find_zeros(p, prec).points)
        return out


@dataclass(frozen=True)
class EquilibriumReport:
    residuals: tuple
    max_abs: object
    component: str
    precision: int
    excluded: tuple = ()

    def to_json(self) -> dict:
        ctx = mp_context(self.precision)
        return {
            "component": self.component,
            "precision": self.precision,
            "max_abs": ctx.nstr(self.max_abs, 10),
            "log2_max_abs": None if self.max_abs == 0 else float(ctx.log(self.max_abs, 2)),
            "residuals": [[ctx.nstr(ctx.re(r), 10), ctx.nstr(ctx.im(r), 10)] for r in self.residuals],
            "excluded": list(self.excluded),
        }


def points(values: Sequence, precision: int = 256) -> ZeroSet:
    """Wrap plain numbers as a ZeroSet with zero radii (for synthetic configurations)."""
    ctx = mp_context(precision)
    pts = tuple(ctx.mpc(v) if not isinstance(v, Fraction) else ctx.mpc(ctx.mpf(v.numerator) / v.denominator) for v in values)
    zero = ctx.mpf(0)
    return ZeroSet(pts, precision, tuple(zero for _ in pts), tuple(1 for _ in pts), "points", True)


# ---------------------------------------------------------------------------
# Standard fields


def scalar_field(S: ExactPoly, A: ExactPoly, B: ExactPoly) -> ExternalField:
    """phi = (1/2) log|S/v| with v'/v = (A' + B)/A."""
    return (ExternalField.log_abs_poly(S, Fraction(1, 2)) + ExternalField.log_abs_poly(A, Fraction(-1, 2))
            + ExternalField.log_abs_weight(A, B, Fraction(-1, 2)))


def vector_fields(w1, w2, R: ExactPoly, Rstar: ExactPoly | None = None) -> tuple:
    """Field pair for (zeros of P, zeros of S_1) in the two-weight model."""
    f1 = ExternalField.log_abs_poly(w1.A, Fraction(-1, 2)) + ExternalField.log_abs_weight(w1.A, w1.B, Fraction(-1, 2))
    if Rstar is not None:
        # equal weights: R = A^2 R*, and the A-terms cancel exactly
        f2 = ExternalField.log_abs_poly(Rstar, Fraction(1, 2))
    else:
        f2 = (ExternalField.log_abs_poly(R, Fraction(1, 2)) + ExternalField.log_abs_poly(w2.A, -1)
              + ExternalField.log_abs_weight(w1.A, w1.B, Fraction(1, 2)) + ExternalField.log_abs_weight(w2.A, w2.B, Fraction(-1, 2)))
    return f1, f2


# ---------------------------------------------------------------------------


def _distinct(zs: ZeroSet, ctx):
    pts = list(zs.points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) <= zs.radii[i] + zs.radii[j]:
                raise OverlapDetected(f"points {i} and {j} coincide within their radii")
    return pts


def _excluded(zs: ZeroSet, field: ExternalField, ctx, strict: bool) -> set:
    bad = set()
    poles = field.poles(zs.precision)
    for k, z in enumerate(zs.points):
        for q in poles:
            if abs(z - q) <= 2 * zs.radii[k] or z == q:
                if strict:
                    raise PoleCollision(f"point {ctx.nstr(z, 15)} sits on a pole of the field")
                bad.add(k)
    return bad


def _report(res: list, excluded: set, component: str, prec: int, ctx) -> EquilibriumReport:
    kept = [abs(r) for k, r in enumerate(res) if k not in excluded and r is not None]
    return EquilibriumReport(tuple(res), max(kept) if kept else ctx.mpf(0), component, prec, tuple(sorted(excluded)))


def scalar_residual(z: ZeroSet, field: ExternalField, strict: bool = False) -> EquilibriumReport:
    """Residuals sum_{i != j} 1/(z_j - z_i) - Phi'(z_j) for every point."""
    ctx = mp_context(z.precision)
    pts = _distinct(z, ctx)
    skip = _excluded(z, field, ctx, strict)
    res = []
    for j, zj in enumerate(pts):
        if j in skip:
            res.append(None)
            continue
        s = ctx.mpf(0)
        for i, zi in enumerate(pts):
            if i != j:
                s += 1 / (zj - zi)
        res.append(s - field.dphi(zj, ctx))
    return _report(res, skip, "scalar", z.precision, ctx)


def vector_residual(zP: ZeroSet, zS: ZeroSet, a=Fraction(-1, 2), fields: tuple = (ExternalField(), ExternalField()),
                    strict: bool = False) -> tuple:
    """Residuals of both components of the vector model with interaction ``a``.

    Returns ``(report_1, report_2)``; component 1 lives on ``zP`` and
    component 2 on ``zS``.
    """
    prec = min(zP.precision, zS.precision)
    ctx = mp_context(prec)
    a = rat(a)
    am = ctx.mpf(a.numerator) / a.denominator
    p1 = _distinct(zP, ctx)
    p2 = _distinct(zS, ctx)
    for i, x in enumerate(p1):
        for j, y in enumerate(p2):
            if abs(x - y) <= zP.radii[i] + zS.radii[j]:
                raise OverlapDetected("the two configurations share a point")
    out = []
    for own, other, field, zs, name in ((p1, p2, fields[0], zP, "vector_1"), (p2, p1, fields[1], zS, "vector_2")):
        skip = _excluded(zs, field, ctx, strict)
        res = []
        for j, zj in enumerate(own):
            if j in skip:
                res.append(None)
                continue
            s = ctx.mpf(0)
            for i, zi in enumerate(own):
                if i != j:
                    s += 1 / (zj - zi)
            t = ctx.mpf(0)
            for y in other:
                t += 1 / (zj - y)
            res.append(s + am * t - field.dphi(zj, ctx))
        out.append(_report(res, skip, name, prec, ctx))
    return tuple(out)


def energy(zsets, a=Fraction(-1, 2), fields=None, precision: int | None = None):
    """Discrete (vector) energy; +inf when two charges coincide.

    ``zsets`` is one ZeroSet or a pair; ``fields`` is one ExternalField or a
    pair accordingly (None means no field).
    """
    if isinstance(zsets, ZeroSet):
        zsets = (zsets,)
        fields = (fields,)
    else:
        zsets = tuple(zsets)
        fields = tuple(fields) if fields is not None else (None,) * len(zsets)
    prec = precision or min(z.precision for z in zsets)
    ctx = mp_context(prec)
    a = rat(a)
    am = ctx.mpf(a.numerator) / a.denominator
    total = ctx.mpf(0)
    groups = [[ctx.convert(p) for p in z.points] for z in zsets]
    for g, f in zip(groups, fields):
        for i in range(len(g)):
            for j in range(len(g)):
                if i != j:
                    d = abs(g[i] - g[j])
                    if d == 0:
                        return ctx.inf
                    total -= ctx.log(d)
            if f is not None:
                total += 2 * f.phi(g[i], ctx)
    if len(groups) == 2:
        for x in groups[0]:
            for y in groups[1]:
                d = abs(x - y)
                if d == 0:
                    return ctx.inf
                total -= 2 * am * ctx.log(d)
    return total


def histogram_export(z, scaling=1, bins: int = 20) -> dict:
    """Normalised histogram of scaled real zeros with min/max/count."""
    xs = z.real_points() if isinstance(z, ZeroSet) else sorted(z)
    sc = rat(scaling) if not isinstance(scaling, float) else scaling
    xs = [float(x) * float(sc) for x in xs]
    if not xs:
        return {"rows": [], "min": None, "max": None, "count": 0}
    lo, hi = min(xs), max(xs)
    width = (hi - lo) / bins if hi > lo else 1.0
    counts = [0] * bins
    for x in xs:
        k = min(int((x - lo) / width), bins - 1) if hi > lo else 0
        counts[k] += 1
    rows = [(lo + k * width, lo + (k + 1) * width, counts[k] / (len(xs) * width)) for k in range(bins)]
    return {"rows": rows, "min": lo, "max": hi, "count": len(xs)}


def histogram_csv(hist: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["bin_left", "bin_right", "density"])
    for row in hist["rows"]:
        w.writerow([repr(v) for v in row])
    return buf.getvalue()
