"""Exact rational polynomials, truncated Laurent tails and precision-tagged complex numbers.

Everything in the exact layer is built on :class:`fractions.Fraction`.  Values are
immutable; every operation returns a new object in canonical form, so equality
is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath

__all__ = [
    "RatScalar",
    "ToolkitError",
    "InexactDivision",
    "PrecisionExhausted",
    "rat",
    "ExactPoly",
    "LaurentTail",
    "BigComplex",
    "mp_context",
    "poly_div_exact",
    "poly_divmod",
    "poly_gcd",
    "squarefree_factors",
    "wronskian",
    "series_mul",
]

RatScalar = Fraction
Number = Union[int, Fraction]


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class InexactDivision(ToolkitError):
    """A polynomial division that was required to be exact left a remainder."""


class PrecisionExhausted(ToolkitError):
    """A truncated series was asked for coefficients it cannot justify."""


def rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: they would silently contaminate the exact pipeline.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational inputs")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def _strip(coeffs: Iterable[Fraction]) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class ExactPoly:
    """Dense univariate polynomial with rational coefficients in ascending order.

    The zero polynomial has an empty coefficient tuple and degree ``-1``.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        self._c = _strip(rat(a) for a in coeffs)

    @classmethod
    def _raw(cls, coeffs: Iterable[Fraction]) -> "ExactPoly":
        obj = cls.__new__(cls)
        obj._c = _strip(coeffs)
        return obj

    # constructors
    @classmethod
    def zero(cls) -> "ExactPoly":
        return cls._raw(())

    @classmethod
    def const(cls, a) -> "ExactPoly":
        return cls._raw((rat(a),))

    @classmethod
    def x(cls) -> "ExactPoly":
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def monomial(cls, k: int, a=1) -> "ExactPoly":
        return cls._raw([Fraction(0)] * k + [rat(a)])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "ExactPoly":
        p = cls.const(1)
        for r in roots:
            p = p * cls._raw((-rat(r), Fraction(1)))
        return p

    @classmethod
    def from_descending(cls, coeffs: Sequence) -> "ExactPoly":
        return cls(list(coeffs)[::-1])

    # basic properties
    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def lead(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, k: int) -> Fraction:
        if k < 0:
            raise IndexError("negative coefficient index")
        return self._c[k] if k < len(self._c) else Fraction(0)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == _strip((Fraction(other),))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    # ring operations
    def __add__(self, other) -> "ExactPoly":
        if isinstance(other, LaurentTail):
            return NotImplemented
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return ExactPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "ExactPoly":
        return ExactPoly._raw(-a for a in self._c)

    def __sub__(self, other) -> "ExactPoly":
        if isinstance(other, LaurentTail):
            return NotImplemented
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "ExactPoly":
        return (-self) + other

    def __mul__(self, other) -> "ExactPoly":
        if isinstance(other, LaurentTail):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            s = Fraction(other)
            return ExactPoly._raw(a * s for a in self._c) if s else ExactPoly.zero()
        if not isinstance(other, ExactPoly):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return ExactPoly.zero()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return ExactPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ExactPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out, base = ExactPoly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, scalar) -> "ExactPoly":
        s = rat(scalar)
        return ExactPoly._raw(a / s for a in self._c)

    def __floordiv__(self, other: "ExactPoly") -> "ExactPoly":
        return poly_divmod(self, other)[0]

    def __mod__(self, other: "ExactPoly") -> "ExactPoly":
        return poly_divmod(self, other)[1]

    # calculus and evaluation
    def deriv(self, k: int = 1) -> "ExactPoly":
        c = self._c
        for _ in range(k):
            c = tuple(i * c[i] for i in range(1, len(c)))
        return ExactPoly._raw(c)

    def integral(self) -> "ExactPoly":
        """Antiderivative vanishing at 0."""
        return ExactPoly._raw([Fraction(0)] + [a / (i + 1) for i, a in enumerate(self._c)])

    def __call__(self, z):
        acc = 0
        for a in reversed(self._c):
            acc = acc * z + a
        return acc

    def eval_mp(self, z, ctx=None):
        """Horner evaluation in an mpmath context (defaults to the global one)."""
        ctx = ctx or mpmath.mp
        acc = ctx.mpf(0)
        for a in reversed(self._c):
            acc = acc * z + ctx.mpf(a.numerator) / a.denominator
        return acc

    def compose(self, q: "ExactPoly") -> "ExactPoly":
        acc = ExactPoly.zero()
        for a in reversed(self._c):
            acc = acc * q + ExactPoly.const(a)
        return acc

    def reflect(self) -> "ExactPoly":
        """Return p(-x)."""
        return ExactPoly._raw(a if i % 2 == 0 else -a for i, a in enumerate(self._c))

    def monic(self) -> "ExactPoly":
        if not self._c:
            raise ZeroDivisionError("the zero polynomial has no monic form")
        return self / self.lead

    def primitive(self) -> "ExactPoly":
        """Integer coefficients, gcd 1, positive leading coefficient."""
        if not self._c:
            return self
        from math import gcd, lcm

        den = 1
        for a in self._c:
            den = lcm(den, a.denominator)
        ints = [int(a * den) for a in self._c]
        g = 0
        for v in ints:
            g = gcd(g, v)
        sign = 1 if ints[-1] > 0 else -1
        return ExactPoly._raw(Fraction(sign * v // g) for v in ints)

    def is_monic(self) -> bool:
        return bool(self._c) and self._c[-1] == 1

    # serialization
    def to_json(self) -> list:
        return [f"{a.numerator}/{a.denominator}" for a in self._c]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "ExactPoly":
        return cls(Fraction(s) for s in data)

    def __repr__(self) -> str:
        return f"ExactPoly({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            a = self._c[k]
            if not a:
                continue
            mag = abs(a)
            sign = "-" if a < 0 else "+"
            if k == 0:
                body = str(mag)
            else:
                xs = "x" if k == 1 else f"x^{k}"
                body = xs if mag == 1 else f"{mag}*{xs}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out


def _as_poly(v) -> "ExactPoly | None":
    if isinstance(v, ExactPoly):
        return v
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return ExactPoly.const(v)
    return None


def poly_divmod(num: ExactPoly, den: ExactPoly) -> tuple:
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(num.coeffs)
    dd = den.degree
    lc = den.lead
    dc = den.coeffs
    if len(r) - 1 < dd:
        return ExactPoly.zero(), num
    q = [Fraction(0)] * (len(r) - dd)
    for k in range(len(r) - 1 - dd, -1, -1):
        t = r[k + dd] / lc
        q[k] = t
        if t:
            for j in range(dd + 1):
                r[k + j] -= t * dc[j]
    return ExactPoly._raw(q), ExactPoly._raw(r[:dd])


def poly_div_exact(num: ExactPoly, den: ExactPoly) -> ExactPoly:
    """Quotient of an exact division; raises :class:`InexactDivision` otherwise."""
    q, r = poly_divmod(num, den)
    if not r.is_zero():
        raise InexactDivision(f"remainder of degree {r.degree} when dividing degree {num.degree} by degree {den.degree}")
    return q


def _int_primitive(c: list) -> list:
    from math import gcd

    g = 0
    for v in c:
        g = gcd(g, v)
    return [v // g for v in c] if g > 1 else c


def _int_prem(a: list, b: list) -> list:
    """Pseudo-remainder of integer coefficient lists (ascending), made primitive."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and any(a):
        la, shift = a[-1], len(a) - 1 - db
        a = [lb * v for v in a]
        for j, v in enumerate(b):
            a[shift + j] -= la * v
        while a and a[-1] == 0:
            a.pop()
        a = _int_primitive(a) if a else a
    return a


def poly_gcd(p: ExactPoly, q: ExactPoly) -> ExactPoly:
    """Monic gcd (zero if both inputs vanish).

    Runs a primitive pseudo-remainder sequence over the integers, which keeps
    coefficient growth in check for the degree-70-ish inputs seen in practice.
    """
    if p.is_zero():
        return q.monic() if not q.is_zero() else q
    if q.is_zero():
        return p.monic()
    a = [int(v) for v in p.primitive().coeffs]
    b = [int(v) for v in q.primitive().coeffs]
    if len(a) < len(b):
        a, b = b, a
    while b:
        a, b = b, _int_prem(a, b)
    return ExactPoly._raw(Fraction(v) for v in a).monic()


def squarefree_factors(p: ExactPoly) -> list:
    """Yun's algorithm: monic factors ``[(f_1, 1), (f_2, 2), ...]`` with p = lead * prod f_k^k."""
    if p.degree < 1:
        return []
    out = []
    a = p.monic()
    b = a.deriv()
    g = poly_gcd(a, b)
    c = poly_div_exact(a, g)
    d = poly_div_exact(b, g) - c.deriv()
    k = 1
    while c.degree >= 1:
        f = poly_gcd(c, d)
        if f.degree >= 1:
            out.append((f, k))
        c = poly_div_exact(c, f)
        d = poly_div_exact(d, f) - c.deriv()
        k += 1
    return out


def wronskian(p: ExactPoly, q: ExactPoly) -> ExactPoly:
    """p q' - p' q."""
    return p * q.deriv() - p.deriv() * q


# ---------------------------------------------------------------------------
# Truncated Laurent series at infinity


class LaurentTail:
    """Truncated expansion ``poly(z) + sum_{k < order} coeffs[k] z^(-k-1) + O(z^(-order-1))``.

    ``order`` counts the negative powers that are known exactly.  Anything past it
    is unknown, and asking for it raises :class:`PrecisionExhausted`.
    """

    __slots__ = ("_poly", "_c")

    def __init__(self, coeffs: Iterable = (), polynomial_part: ExactPoly | None = None, order: int | None = None):
        c = [rat(a) for a in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            if order < len(c):
                c = c[:order]
            else:
                c = c + [Fraction(0)] * (order - len(c))
        self._c = tuple(c)
        self._poly = polynomial_part if polynomial_part is not None else ExactPoly.zero()

    @classmethod
    def _raw(cls, coeffs, poly: ExactPoly) -> "LaurentTail":
        obj = cls.__new__(cls)
        obj._c = tuple(coeffs)
        obj._poly = poly
        return obj

    @property
    def order(self) -> int:
        return len(self._c)

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def polynomial_part(self) -> ExactPoly:
        return self._poly

    def coefficient(self, k: int) -> Fraction:
        """Coefficient of z^(-k-1)."""
        if k >= len(self._c):
            raise PrecisionExhausted(f"coefficient z^-{k + 1} requested, only {len(self._c)} known")
        return self._c[k]

    def first_nonzero(self) -> int | None:
        for k, a in enumerate(self._c):
            if a:
                return k
        return None

    @property
    def top(self) -> int:
        """Largest exponent that may carry a nonzero coefficient."""
        if not self._poly.is_zero():
            return self._poly.degree
        k = self.first_nonzero()
        return -1 - (k if k is not None else len(self._c))

    def tail_is_zero(self) -> bool:
        return all(a == 0 for a in self._c)

    def truncate(self, order: int) -> "LaurentTail":
        if order > len(self._c):
            raise PrecisionExhausted(f"cannot extend order {len(self._c)} to {order}")
        return LaurentTail._raw(self._c[:order], self._poly)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentTail):
            return NotImplemented
        return self._c == other._c and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self._c, self._poly))

    def __neg__(self) -> "LaurentTail":
        return LaurentTail._raw((-a for a in self._c), -self._poly)

    def __add__(self, other) -> "LaurentTail":
        if isinstance(other, LaurentTail):
            n = min(len(self._c), len(other._c))
            return LaurentTail._raw((self._c[k] + other._c[k] for k in range(n)), self._poly + other._poly)
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return LaurentTail._raw(self._c, self._poly + o)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentTail":
        return self + (-other)

    def __rsub__(self, other) -> "LaurentTail":
        return (-self) + other

    def __mul__(self, other) -> "LaurentTail":
        if isinstance(other, LaurentTail):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            s = Fraction(other)
            return LaurentTail._raw((a * s for a in self._c), self._poly * s)
        if isinstance(other, ExactPoly):
            return series_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def derivative(self) -> "LaurentTail":
        c = [Fraction(0)] + [-(k + 1) * a for k, a in enumerate(self._c)]
        return LaurentTail._raw(c, self._poly.deriv())

    def to_json(self) -> dict:
        return {
            "order": len(self._c),
            "coeffs": [f"{a.numerator}/{a.denominator}" for a in self._c],
            "poly_part": self._poly.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentTail":
        return cls([Fraction(s) for s in data["coeffs"]], ExactPoly.from_json(data["poly_part"]), order=int(data["order"]))

    def __repr__(self) -> str:
        return f"LaurentTail(poly={self._poly}, coeffs={[str(a) for a in self._c]}, order={self.order})"


def series_mul(a, b, order: int | None = None) -> LaurentTail:
    """Product of two truncated Laurent series.

    The result keeps exactly the negative powers that both inputs justify.  If
    ``order`` is given and exceeds that, :class:`PrecisionExhausted` is raised;
    otherwise the result is truncated to ``order``.
    """
    a_exact = isinstance(a, ExactPoly)
    b_exact = isinstance(b, ExactPoly)
    sa = LaurentTail._raw((), a) if a_exact else a
    sb = LaurentTail._raw((), b) if b_exact else b
    if not a_exact and sa.order < 1 and sa.polynomial_part.is_zero():
        raise PrecisionExhausted("series factor carries no known coefficients")
    if not b_exact and sb.order < 1 and sb.polynomial_part.is_zero():
        raise PrecisionExhausted("series factor carries no known coefficients")

    limits = []
    if not a_exact:
        limits.append(sa.order - sb.top)
    if not b_exact:
        limits.append(sb.order - sa.top)
    supported = min(limits) if limits else None
    if supported is not None and supported < 0:
        raise PrecisionExhausted("inputs do not determine the polynomial part of the product")
    if order is not None:
        if supported is not None and order > supported:
            raise PrecisionExhausted(f"requested order {order}, inputs support {supported}")
        out_order = order
    else:
        out_order = supported if supported is not None else 0

    # exponent -> coefficient maps; polynomial degree d at exponent d, tail k at -k-1
    pa = sa.polynomial_part.coeffs
    pb = sb.polynomial_part.coeffs
    ta, tb = sa.coeffs, sb.coeffs
    top = len(pa) + len(pb)
    poly = [Fraction(0)] * max(top - 1, 0)
    tail = [Fraction(0)] * out_order

    def put(e: int, v: Fraction) -> None:
        if e >= 0:
            poly[e] += v
        else:
            k = -e - 1
            if k < out_order:
                tail[k] += v

    for i, x in enumerate(pa):
        if not x:
            continue
        for j, y in enumerate(pb):
            if y:
                poly[i + j] += x * y
        for k, y in enumerate(tb):
            if y:
                put(i - k - 1, x * y)
    for k, x in enumerate(ta):
        if not x:
            continue
        for j, y in enumerate(pb):
            if y:
                put(j - k - 1, x * y)
        # tail times tail: z^-(k+1) z^-(m+1) = z^-(k+m+2) -> index k+m+1
        for m, y in enumerate(tb):
            idx = k + m + 1
            if idx >= out_order:
                break
            if y:
                tail[idx] += x * y
    return LaurentTail._raw(tail, ExactPoly._raw(poly))


# ---------------------------------------------------------------------------
# Multiprecision complex scalars


@lru_cache(maxsize=None)
def mp_context(prec: int) -> mpmath.ctx_mp.MPContext:
    """A private mpmath context fixed at ``prec`` bits (shared, never mutated)."""
    ctx = mpmath.MPContext()
    ctx.prec = int(prec)
    return ctx


@dataclass(frozen=True)
class BigComplex:
    """Complex number carried together with the binary precision it was computed at.

    Binary operations run at the larger of the two precisions, never the smaller.
    """

    value: object
    prec: int

    @classmethod
    def make(cls, re, im=0, prec: int = 256) -> "BigComplex":
        ctx = mp_context(prec)
        if isinstance(re, Fraction):
            re = ctx.mpf(re.numerator) / re.denominator
        if isinstance(im, Fraction):
            im = ctx.mpf(im.numerator) / im.denominator
        return cls(ctx.mpc(re, im), prec)

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def _bin(self, other, op):
        if isinstance(other, BigComplex):
            prec = max(self.prec, other.prec)
            ov = other.value
        else:
            prec = self.prec
            ov = other
        ctx = mp_context(prec)
        return BigComplex(op(ctx.convert(self.value), ctx.convert(ov)), prec)

    def __add__(self, o):
        return self._bin(o, lambda x, y: x + y)

    def __sub__(self, o):
        return self._bin(o, lambda x, y: x - y)

    def __mul__(self, o):
        return self._bin(o, lambda x, y: x * y)

    def __truediv__(self, o):
        return self._bin(o, lambda x, y: x / y)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return BigComplex(-self.value, self.prec)

    def __abs__(self):
        return mp_context(self.prec).fabs(self.value)

    def conjugate(self) -> "BigComplex":
        return BigComplex(mp_context(self.prec).conj(self.value), self.prec)

    def __complex__(self) -> complex:
        return complex(self.value)

    def __repr__(self) -> str:
        return f"BigComplex({mpmath.nstr(self.value, 20)}, prec={self.prec})"
