"""Semiclassical weights given by a Pearson pair (A, B) and their moments.

A weight w is described up to a constant factor by ``w'/w = B/A`` together with
its support.  Moments are produced either exactly, from a handful of seed
values and the linear recurrence that the Pearson equation forces on them, or
numerically by double-exponential quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .exactpoly import ExactPoly, ToolkitError, mp_context, poly_divmod, rat

__all__ = [
    "SupportComponent",
    "MomentBackend",
    "SemiclassicalWeight",
    "MomentSequence",
    "SeedMomentsMissing",
    "RecurrenceSingular",
    "QuadratureNotConverged",
    "InvalidParameters",
    "recurrence_order",
    "pearson_moments",
    "pearson_residuals",
    "closed_form_moments",
    "numeric_moments",
    "cauchy_transform",
    "weight_evaluator",
    "family",
    "FAMILIES",
]


class SeedMomentsMissing(ToolkitError):
    pass


class RecurrenceSingular(ToolkitError):
    pass


class QuadratureNotConverged(ToolkitError):
    pass


class InvalidParameters(ToolkitError, ValueError):
    pass


INF = math.inf


def _endpoint_to_json(e):
    if isinstance(e, float) and math.isinf(e):
        return "inf" if e > 0 else "-inf"
    return f"{Fraction(e).numerator}/{Fraction(e).denominator}"


def _endpoint_from_json(s):
    if s in ("inf", "+inf"):
        return INF
    if s == "-inf":
        return -INF
    return Fraction(s)


@dataclass(frozen=True)
class SupportComponent:
    """One oriented arc of the support.

    ``kind`` is ``bounded_interval``, ``ray``, ``line`` (the whole real axis) or
    ``contour_tag``.  A contour is a signed sum of rays leaving ``origin`` at
    angles ``angle * pi``; for it ``endpoints`` is unused.
    """

    kind: str
    endpoints: tuple = (Fraction(0), Fraction(1))
    orientation: int = 1
    tag: str = ""
    origin: Fraction = Fraction(0)
    rays: tuple = ()

    def __post_init__(self):
        if self.kind not in ("bounded_interval", "ray", "line", "contour_tag"):
            raise InvalidParameters(f"unknown support kind {self.kind!r}")
        a, b = self.endpoints
        if self.kind == "bounded_interval":
            if not (isinstance(a, Fraction) and isinstance(b, Fraction)) or not a < b:
                raise InvalidParameters("bounded_interval needs finite endpoints left < right")
        elif self.kind == "ray":
            if not ((isinstance(a, Fraction) and b == INF) or (a == -INF and isinstance(b, Fraction))):
                raise InvalidParameters("ray needs exactly one finite endpoint")
        elif self.kind == "line":
            if not (a == -INF and b == INF):
                raise InvalidParameters("line is (-inf, inf)")
        elif not self.tag:
            raise InvalidParameters("contour_tag needs a tag")

    @classmethod
    def interval(cls, a, b) -> "SupportComponent":
        return cls("bounded_interval", (rat(a), rat(b)))

    @classmethod
    def half_line(cls, a, direction: int = 1) -> "SupportComponent":
        a = rat(a)
        return cls("ray", (a, INF) if direction > 0 else (-INF, a))

    @classmethod
    def real_line(cls) -> "SupportComponent":
        return cls("line", (-INF, INF))

    @classmethod
    def contour(cls, tag: str, rays: Sequence, origin=0) -> "SupportComponent":
        rays = tuple((rat(ang), int(sgn)) for ang, sgn in rays)
        return cls("contour_tag", (-INF, INF), 1, tag, rat(origin), rays)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "endpoints": [_endpoint_to_json(e) for e in self.endpoints], "orientation": self.orientation}
        if self.kind == "contour_tag":
            d.update(tag=self.tag, origin=_endpoint_to_json(self.origin), rays=[[_endpoint_to_json(a), s] for a, s in self.rays])
        return d

    @classmethod
    def from_json(cls, d: dict) -> "SupportComponent":
        ends = tuple(_endpoint_from_json(e) for e in d["endpoints"])
        if d["kind"] == "contour_tag":
            return cls("contour_tag", ends, d.get("orientation", 1), d.get("tag", ""), Fraction(d.get("origin", "0")),
                       tuple((Fraction(a), int(s)) for a, s in d["rays"]))
        return cls(d["kind"], ends, d.get("orientation", 1))


@dataclass(frozen=True)
class MomentBackend:
    """How moments are produced.

    ``exact_recurrence`` carries rational seed moments per support component.
    ``closed_form`` names a catalog formula.  ``numeric_quadrature`` records the
    working precision in bits.
    """

    variant: str
    seeds: tuple = ()
    family: str = ""
    params: tuple = ()
    precision: int = 128
    scheme: str = "double_exponential"

    def __post_init__(self):
        if self.variant not in ("exact_recurrence", "closed_form", "numeric_quadrature"):
            raise InvalidParameters(f"unknown moment backend {self.variant!r}")

    @property
    def exact(self) -> bool:
        return self.variant != "numeric_quadrature"

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "family": self.family,
            "params": [[k, f"{v.numerator}/{v.denominator}"] for k, v in self.params],
            "precision": self.precision,
            "scheme": self.scheme,
        }


def recurrence_order(A: ExactPoly, B: ExactPoly) -> int:
    """Number of seed moments the Pearson recurrence needs per support component."""
    return max((A.deriv() + B).degree, A.degree - 1)


@dataclass(frozen=True)
class SemiclassicalWeight:
    A: ExactPoly
    B: ExactPoly
    support: tuple
    backend: MomentBackend
    scale_tag: str = ""
    name: str = ""

    def __post_init__(self):
        if not self.A.is_monic():
            raise InvalidParameters("A must be monic")
        if self.sigma < 0:
            raise InvalidParameters("the class max(deg A - 2, deg B - 1) must be nonnegative")
        if not self.support:
            raise InvalidParameters("empty support")
        if self.backend.variant == "exact_recurrence" and len(self.backend.seeds) != len(self.support):
            raise SeedMomentsMissing("one seed list per support component is required")

    @property
    def sigma(self) -> int:
        return max(self.A.degree - 2, self.B.degree - 1)

    @property
    def order(self) -> int:
        return recurrence_order(self.A, self.B)

    def same_pearson(self, other: "SemiclassicalWeight") -> bool:
        return self.A == other.A and self.B == other.B

    def log_derivative_poles(self) -> ExactPoly:
        return self.A

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "support": [c.to_json() for c in self.support],
            "sigma": self.sigma,
            "backend": self.backend.to_json(),
            "seeds": [[f"{s.numerator}/{s.denominator}" for s in comp] for comp in self.backend.seeds],
            "scale_tag": self.scale_tag,
        }

    @classmethod
    def from_json(cls, d: dict) -> "SemiclassicalWeight":
        b = d["backend"]
        backend = MomentBackend(
            b["variant"],
            tuple(tuple(Fraction(s) for s in comp) for comp in d.get("seeds", [])),
            b.get("family", ""),
            tuple((k, Fraction(v)) for k, v in b.get("params", [])),
            int(b.get("precision", 128)),
            b.get("scheme", "double_exponential"),
        )
        w = cls(ExactPoly.from_json(d["A"]), ExactPoly.from_json(d["B"]),
                tuple(SupportComponent.from_json(c) for c in d["support"]), backend, d.get("scale_tag", ""), d.get("name", ""))
        if "sigma" in d and int(d["sigma"]) != w.sigma:
            raise InvalidParameters("stored class disagrees with (A, B)")
        return w


@dataclass(frozen=True)
class MomentSequence:
    values: tuple
    scale_tag: str = ""
    errors: tuple | None = None
    precision: int | None = None

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]


# ---------------------------------------------------------------------------
# Exact moments


def _extend_component(A: ExactPoly, B: ExactPoly, seeds: Sequence[Fraction], count: int) -> list:
    # Relation k:  sum_j (A'+B)_j u_{k+j} + k sum_j A_j u_{k-1+j} = 0
    a = A.deriv() + B
    d = recurrence_order(A, B)
    if len(seeds) < min(d, count):
        raise SeedMomentsMissing(f"recurrence of order {d} needs {d} seeds, got {len(seeds)}")
    u = [rat(s) for s in seeds[:count]]
    k = 0
    while True:
        top = k + d
        if top >= max(count, len(u)) and top >= len(u):
            break
        lead = a[d] + k * A[d + 1]
        rest = Fraction(0)
        for j in range(d):
            rest += a[j] * u[k + j]
        if k:
            for j in range(d + 1):
                if k - 1 + j < top:
                    rest += k * A[j] * u[k - 1 + j]
        if top < len(u):
            # supplied value: must satisfy the relation unless it is the fallback for a singular step
            if lead * u[top] + rest != 0:
                if lead != 0:
                    raise SeedMomentsMissing(f"seed u_{top} contradicts the recurrence")
                raise RecurrenceSingular(f"relation {k} is singular and inconsistent with the supplied moments")
        else:
            if lead == 0:
                if rest != 0:
                    raise RecurrenceSingular(f"relation {k} is inconsistent")
                raise RecurrenceSingular(f"leading coefficient vanishes at k={k}; supply u_{top} as a seed")
            u.append(-rest / lead)
        k += 1
    return u[:count]


def pearson_moments(w: SemiclassicalWeight, count: int) -> MomentSequence:
    """Moments u_0..u_{count-1} of an exact-backend weight, modulo its scale tag."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if w.backend.variant == "closed_form":
        return MomentSequence(tuple(closed_form_moments(w.backend.family, dict(w.backend.params), count)), w.scale_tag)
    if w.backend.variant != "exact_recurrence":
        raise SeedMomentsMissing("weight has no exact moment backend")
    total = [Fraction(0)] * count
    for seeds in w.backend.seeds:
        comp = _extend_component(w.A, w.B, seeds, count)
        for k, v in enumerate(comp):
            total[k] += v
    return MomentSequence(tuple(total), w.scale_tag)


def pearson_residuals(A: ExactPoly, B: ExactPoly, values: Sequence) -> list:
    """Residual of every recurrence relation fully covered by ``values``."""
    a = A.deriv() + B
    d = recurrence_order(A, B)
    out = []
    for k in range(0, len(values) - d):
        r = sum(a[j] * values[k + j] for j in range(d + 1))
        if k:
            r += sum(k * A[j] * values[k - 1 + j] for j in range(A.degree + 1))
        out.append(r)
    return out


def _poch(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


def closed_form_moments(fam: str, params: dict, count: int) -> list:
    """Catalog moment formulas, normalised so that u_0 = 1."""
    p = {k: rat(v) for k, v in params.items()}
    if fam == "hermite":
        c = p.get("c", Fraction(0))
        # x = y + c/2 with y distributed as exp(-y^2)
        even = [Fraction(1)]
        for j in range(1, count // 2 + 1):
            even.append(even[-1] * Fraction(2 * j - 1, 2))
        return [sum(math.comb(k, 2 * j) * (c / 2) ** (k - 2 * j) * even[j] for j in range(k // 2 + 1)) for k in range(count)]
    if fam == "laguerre":
        al, c = p["alpha"], p.get("c", Fraction(1))
        return [_poch(al + 1, k) / c**k for k in range(count)]
    if fam == "jacobi":
        al, be = p["alpha"], p["beta"]
        # x = 2t - 1 with t ~ t^beta (1-t)^alpha on [0, 1]
        et = [_poch(be + 1, j) / _poch(al + be + 2, j) for j in range(count)]
        return [sum(math.comb(k, j) * 2**j * (-1) ** (k - j) * et[j] for j in range(k + 1)) for k in range(count)]
    if fam == "beta01":
        al, be = p["alpha"], p["beta"]  # x^beta (1-x)^alpha on [0, 1]
        return [_poch(be + 1, k) / _poch(al + be + 2, k) for k in range(count)]
    if fam == "beta_left":
        a, al, be = p["a"], p["alpha"], p["beta"]  # (x-a)^alpha |x|^beta on [a, 0]
        return [a**k * _poch(be + 1, k) / _poch(al + be + 2, k) for k in range(count)]
    raise InvalidParameters(f"no closed form for {fam!r}")


# ---------------------------------------------------------------------------
# Numeric moments: double-exponential quadrature with complementary abscissae


def weight_evaluator(A: ExactPoly, B: ExactPoly, ctx, component: SupportComponent | None = None) -> Callable:
    """Return ``f(x, dist)`` evaluating exp(int B/A) up to a constant.

    ``dist`` maps a finite endpoint of the component to the distance from x,
    computed without cancellation by the quadrature mapping.  Only simple roots
    of A are supported; that covers every catalog family.
    """
    Q, _ = poly_divmod(B, A)
    Qint = Q.integral()
    roots = []
    if A.degree >= 1:
        rs = ctx.polyroots([ctx.mpf(c.numerator) / c.denominator for c in reversed(A.coeffs)], maxsteps=200, extraprec=2 * ctx.prec)
        dA = A.deriv()
        for r in rs:
            if abs(dA.eval_mp(r, ctx)) < ctx.mpf(2) ** (-ctx.prec // 2):
                raise InvalidParameters("numeric weights need simple roots of A")
            res = B.eval_mp(r, ctx) / dA.eval_mp(r, ctx)
            if abs(ctx.im(res)) < ctx.mpf(2) ** (-ctx.prec // 2):
                res = ctx.re(res)
            if abs(ctx.im(r)) < ctx.mpf(2) ** (-ctx.prec // 2):
                r = ctx.re(r)
            roots.append((r, res))
    real = component is None or component.kind != "contour_tag"
    ends = []
    if component is not None and component.kind != "contour_tag":
        ends = [e for e in component.endpoints if isinstance(e, Fraction)]
    elif component is not None:
        ends = [component.origin]
    snap = []
    for r, res in roots:
        hit = None
        for e in ends:
            if abs(r - (ctx.mpf(e.numerator) / e.denominator)) < ctx.mpf(2) ** (-ctx.prec // 2):
                hit = e
        snap.append((r, res, hit))

    def f(x, dist):
        val = ctx.exp(Qint.eval_mp(x, ctx))
        for r, res, hit in snap:
            d = dist.get(hit) if hit is not None else None
            if real:
                dd = d if d is not None else abs(x - r)
                val *= ctx.power(dd, res)
            else:
                val *= ctx.power(x - r, res)
        return val

    return f


def _de_nodes(component: SupportComponent, ctx):
    """Yield a mapping function t -> list of (x, dx/dt, dist) for the component."""
    half_pi = ctx.pi / 2

    if component.kind == "bounded_interval":
        a, b = (ctx.mpf(e.numerator) / e.denominator for e in component.endpoints)
        ea, eb = component.endpoints
        L = b - a

        def m(t):
            u = half_pi * ctx.sinh(t)
            e = ctx.exp(-2 * abs(u))
            small = L * e / (1 + e)
            big = L / (1 + e)
            dl, dr = (big, small) if u >= 0 else (small, big)
            x = a + dl if u < 0 else b - dr
            dxdt = L * half_pi * ctx.cosh(t) * 2 * e / (1 + e) ** 2
            return [(x, dxdt, {ea: dl, eb: dr})]

        return m
    if component.kind == "ray":
        a, b = component.endpoints
        if b == INF:
            o, sgn = a, 1
        else:
            o, sgn = b, -1
        oo = ctx.mpf(o.numerator) / o.denominator

        def m(t):
            u = half_pi * ctx.sinh(t)
            s = ctx.exp(u)
            return [(oo + sgn * s, s * half_pi * ctx.cosh(t), {o: s})]

        return m
    if component.kind == "line":

        def m(t):
            u = half_pi * ctx.sinh(t)
            return [(ctx.sinh(u), ctx.cosh(u) * half_pi * ctx.cosh(t), {})]

        return m

    if not component.rays:
        raise InvalidParameters(f"contour {component.tag!r} has no quadrature path; use exact moments")
    oo = ctx.mpf(component.origin.numerator) / component.origin.denominator
    dirs = [(ctx.expjpi(ctx.mpf(ang.numerator) / ang.denominator), sgn) for ang, sgn in component.rays]

    def m(t):
        u = half_pi * ctx.sinh(t)
        s = ctx.exp(u)
        dsdt = s * half_pi * ctx.cosh(t)
        return [(oo + d * s, sgn * d * dsdt, {component.origin: s}) for d, sgn in dirs]

    return m


def _de_integrate(component: SupportComponent, integrand: Callable, nvals: int, ctx, tol, max_level: int = 12, t_max: float = 9.0):
    """Integrate a vector-valued function over one component.

    ``integrand(x, dist)`` returns ``nvals`` numbers.  Returns (values, errors),
    the error being the change between the last two refinement levels.
    """
    mapping = _de_nodes(component, ctx)
    eps = ctx.mpf(2) ** (-ctx.prec)

    def contrib(t):
        acc = [ctx.mpf(0)] * nvals
        mag = [ctx.mpf(0)] * nvals
        for x, dxdt, dist in mapping(t):
            vals = integrand(x, dist)
            for j in range(nvals):
                term = vals[j] * dxdt
                acc[j] += term
                mag[j] += abs(term)
        return acc, mag

    def outward(h, start, stride, sums, mags):
        # walk t = start, start+stride*h, ... until terms are negligible
        quiet = 0
        k = start
        while True:
            t = k * h
            if abs(t) > t_max:
                break
            c, cm = contrib(ctx.mpf(t))
            big = False
            for j in range(nvals):
                sums[j] += c[j]
                mags[j] += cm[j]
                if cm[j] > eps * max(mags[j], ctx.mpf(2) ** (-4 * ctx.prec)):
                    big = True
            quiet = 0 if big else quiet + 1
            if quiet >= 4:
                break
            k += stride

    # the convergence test is relative to the integral of |integrand|, so that
    # moments which cancel to zero do not stall refinement
    h = ctx.mpf(1)
    raw, mag = contrib(ctx.mpf(0))
    outward(h, 1, 1, raw, mag)
    outward(h, -1, -1, raw, mag)
    prev = [v * h for v in raw]
    for level in range(1, max_level + 1):
        h = h / 2
        extra = [ctx.mpf(0)] * nvals
        # odd multiples of the new step
        outward(h, 1, 2, extra, mag)
        outward(h, -1, -2, extra, mag)
        raw = [raw[j] + extra[j] for j in range(nvals)]
        cur = [v * h for v in raw]
        errs = [abs(cur[j] - prev[j]) for j in range(nvals)]
        if level >= 3 and all(errs[j] <= tol * max(mag[j] * h, ctx.mpf(2) ** (-4 * ctx.prec)) for j in range(nvals)):
            return cur, errs
        prev = cur
    raise QuadratureNotConverged(f"no convergence after {max_level} levels on {component.kind}")


def numeric_moments(w: SemiclassicalWeight, count: int, precision: int = 128) -> MomentSequence:
    """Moments by double-exponential quadrature, summed over the support components.

    Each component uses the weight ``exp(int B/A)`` with unit constant, so the
    result differs from the exact sequence by one overall factor per component.
    The reported error per moment is the last refinement change, which for this
    scheme is an over-estimate of the true error once convergence sets in.
    """
    wp = precision + 32
    ctx = mp_context(wp)
    tol = ctx.mpf(2) ** (-precision + 16)
    vals = [ctx.mpf(0)] * count
    errs = [ctx.mpf(0)] * count
    for comp in w.support:
        f = weight_evaluator(w.A, w.B, ctx, comp)

        def integrand(x, dist, f=f):
            base = f(x, dist)
            out = [base]
            for _ in range(count - 1):
                out.append(out[-1] * x)
            return out

        v, e = _de_integrate(comp, integrand, count, ctx, tol)
        for k in range(count):
            vals[k] += v[k]
            errs[k] += e[k]
    out_ctx = mp_context(precision)
    return MomentSequence(tuple(out_ctx.convert(v) for v in vals), w.scale_tag,
                          tuple(out_ctx.convert(e) for e in errs), precision)


def cauchy_transform(P: ExactPoly, w: SemiclassicalWeight, z, precision: int = 128):
    """Numeric value of ``int P(t) w(t) / (t - z) dt`` over the support (unit constants)."""
    wp = precision + 32
    ctx = mp_context(wp)
    z = ctx.convert(z)
    tol = ctx.mpf(2) ** (-precision + 16)
    total = ctx.mpf(0)
    for comp in w.support:
        f = weight_evaluator(w.A, w.B, ctx, comp)
        v, _ = _de_integrate(comp, lambda x, dist, f=f: [P.eval_mp(x, ctx) * f(x, dist) / (x - z)], 1, ctx, tol)
        total += v[0]
    return mp_context(precision).convert(total)


# ---------------------------------------------------------------------------
# Catalog


def _P(*c) -> ExactPoly:
    return ExactPoly([rat(v) for v in c])


def _bad(cond: bool, msg: str) -> None:
    if cond:
        raise InvalidParameters(msg)


def _not_integer(v: Fraction) -> bool:
    return v.denominator != 1


def _exact(w_A, w_B, support, seeds_per_comp, tag, name, fam="", params=()):
    backend = MomentBackend("exact_recurrence", tuple(tuple(s) for s in seeds_per_comp), fam, tuple(params))
    return SemiclassicalWeight(w_A, w_B, tuple(support), backend, tag, name)


def _hermite(c) -> SemiclassicalWeight:
    c = rat(c)
    return _exact(_P(1), _P(c, -2), [SupportComponent.real_line()], [[1]], f"sqrt(pi)*exp(({c})^2/4)",
                  f"hermite(c={c})", "hermite", [("c", c)])


def _laguerre(alpha, c=1) -> SemiclassicalWeight:
    alpha, c = rat(alpha), rat(c)
    _bad(alpha <= -1, "alpha > -1 required")
    _bad(c <= 0, "c > 0 required")
    return _exact(_P(0, 1), _P(alpha, -c), [SupportComponent.half_line(0)], [[1]], f"Gamma({alpha}+1)/({c})^({alpha}+1)",
                  f"laguerre(alpha={alpha}, c={c})", "laguerre", [("alpha", alpha), ("c", c)])


def _jacobi(alpha, beta) -> SemiclassicalWeight:
    alpha, beta = rat(alpha), rat(beta)
    _bad(alpha <= -1 or beta <= -1, "alpha, beta > -1 required on [-1, 1]")
    return _exact(_P(-1, 0, 1), _P(alpha - beta, alpha + beta), [SupportComponent.interval(-1, 1)], [[1]],
                  f"2^({alpha}+{beta}+1)B({alpha}+1,{beta}+1)", f"jacobi(alpha={alpha}, beta={beta})", "jacobi",
                  [("alpha", alpha), ("beta", beta)])


def _beta01(alpha, beta) -> SemiclassicalWeight:
    # x^beta (1-x)^alpha on [0, 1]
    alpha, beta = rat(alpha), rat(beta)
    _bad(alpha <= -1 or beta <= -1, "alpha, beta > -1 required on [0, 1]")
    return _exact(_P(0, -1, 1), _P(-beta, alpha + beta), [SupportComponent.interval(0, 1)], [[1]],
                  f"B({beta}+1,{alpha}+1)", f"x^{beta}(1-x)^{alpha} on [0,1]", "beta01", [("alpha", alpha), ("beta", beta)])


def family(name: str, **params) -> tuple:
    """Weights of a catalog family, as a tuple of one or two weights."""
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise InvalidParameters(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}") from None
    try:
        return builder(**params)
    except TypeError as exc:
        raise InvalidParameters(f"bad parameters for {name}: {exc}") from None


def _fam_hermite(c=0):
    return (_hermite(c),)


def _fam_multiple_hermite(c1, c2):
    c1, c2 = rat(c1), rat(c2)
    _bad(c1 == c2, "c1 != c2 required")
    return (_hermite(c1), _hermite(c2))


def _fam_laguerre(alpha, c=1):
    return (_laguerre(alpha, c),)


def _fam_mlaguerre1(alpha1, alpha2):
    a1, a2 = rat(alpha1), rat(alpha2)
    _bad(not _not_integer(a1 - a2), "alpha1 - alpha2 must not be an integer")
    return (_laguerre(a1, 1), _laguerre(a2, 1))


def _fam_mlaguerre2(alpha, c1, c2):
    c1, c2 = rat(c1), rat(c2)
    _bad(c1 == c2, "c1 != c2 required")
    return (_laguerre(alpha, c1), _laguerre(alpha, c2))


def _fam_jacobi(alpha, beta):
    return (_jacobi(alpha, beta),)


def _fam_jacobi_pineiro(alpha, beta1, beta2):
    b1, b2 = rat(beta1), rat(beta2)
    _bad(not _not_integer(b1 - b2), "beta1 - beta2 must not be an integer")
    return (_beta01(alpha, b1), _beta01(alpha, b2))


def _fam_angelesco_jacobi(a, alpha, beta, gamma):
    a, al, be, ga = rat(a), rat(alpha), rat(beta), rat(gamma)
    _bad(a >= 0, "a < 0 required")
    _bad(min(al, be, ga) <= -1, "alpha, beta, gamma > -1 required")
    x = ExactPoly.x()
    A = x * (x - a) * (x - 1)
    B = al * x * (x - 1) + be * (x - a) * (x - 1) + ga * x * (x - a)
    d = recurrence_order(A, B)
    params = [("a", a), ("alpha", al), ("beta", be), ("gamma", ga)]
    out = []
    for comp, ok, fam, fp in (
        (SupportComponent.interval(a, 0), ga == 0, "beta_left", {"a": a, "alpha": al, "beta": be}),
        (SupportComponent.interval(0, 1), al == 0, "beta01", {"alpha": ga, "beta": be}),
    ):
        if ok:
            seeds = closed_form_moments(fam, fp, d)
            out.append(_exact(A, B, [comp], [seeds], f"{fam}{tuple(str(v) for v in fp.values())}",
                              f"angelesco_jacobi{tuple(str(v) for _, v in params)} on [{comp.endpoints[0]},{comp.endpoints[1]}]",
                              "angelesco_jacobi", params))
        else:
            out.append(SemiclassicalWeight(A, B, (comp,), MomentBackend("numeric_quadrature", (), "angelesco_jacobi", tuple(params)),
                                           "numeric", f"angelesco_jacobi on [{comp.endpoints[0]},{comp.endpoints[1]}]"))
    return tuple(out)


def _fam_appell():
    return _fam_angelesco_jacobi(-1, 0, 0, 0)


def _fam_jacobi_nonstandard(alpha, beta):
    """The two weights that make a non-standard Jacobi polynomial multiple orthogonal.

    With m = floor(-alpha), the first weight is (1-x)^(alpha+m) (1+x)^beta on
    [-1, 1] and the second is (1-x)^alpha (1+x)^beta on a loop from -1 around +1,
    whose moments are defined through the recurrence alone.
    """
    al, be = rat(alpha), rat(beta)
    _bad(al >= -1, "alpha < -1 required")
    _bad(not (_not_integer(al) and _not_integer(be) and _not_integer(al + be)), "alpha, beta, alpha+beta must be non-integers")
    _bad(be <= -1, "beta > -1 required")
    m = math.floor(-al)
    w1 = _jacobi(al + m, be)
    w2 = _exact(_P(-1, 0, 1), _P(al - be, al + be), [SupportComponent.contour("loop from 1 around -1", (), origin=-1)],
                [[1]], "loop integral", f"jacobi loop(alpha={al}, beta={be})", "jacobi_loop", [("alpha", al), ("beta", be)])
    return (w1, w2)


def _fam_cubic():
    A, B = _P(1), _P(0, 0, -3)
    backend = MomentBackend("numeric_quadrature", (), "cubic")
    third = Fraction(2, 3)
    d1 = SupportComponent.contour("cubic:Delta1", [(-third, -1), (0, 1)])
    d2 = SupportComponent.contour("cubic:Delta2", [(-third, -1), (third, 1)])
    return (SemiclassicalWeight(A, B, (d1,), backend, "numeric", "exp(-z^3) on Delta1"),
            SemiclassicalWeight(A, B, (d2,), backend, "numeric", "exp(-z^3) on Delta2"))


FAMILIES = {
    "hermite": _fam_hermite,
    "multiple_hermite": _fam_multiple_hermite,
    "laguerre": _fam_laguerre,
    "mlaguerre1": _fam_mlaguerre1,
    "mlaguerre2": _fam_mlaguerre2,
    "jacobi": _fam_jacobi,
    "jacobi_pineiro": _fam_jacobi_pineiro,
    "angelesco_jacobi": _fam_angelesco_jacobi,
    "appell": _fam_appell,
    "jacobi_nonstandard": _fam_jacobi_nonstandard,
    "cubic": _fam_cubic,
}
