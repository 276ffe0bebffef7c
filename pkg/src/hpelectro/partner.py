"""Electrostatic partners and the polynomial identities they satisfy.

For a polynomial P and a semiclassical weight (A, B) the partner is the
polynomial part of ``P (A c' - B c) - A P' c`` where c is the Cauchy transform
of P w.  Everything else here (Van Vleck polynomial C, the polynomial R tying
two partners together, the third order equation with coefficients E and F, and
the second order equations for the partners) is obtained by exact division, so
any failure of the underlying identities surfaces as an error instead of being
rounded away.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import (
    ExactPoly,
    InexactDivision,
    LaurentTail,
    ToolkitError,
    poly_div_exact,
    poly_divmod,
    poly_gcd,
    series_mul,
    wronskian,
)
from .mop import MopRecord, NotApplicable, cauchy_tail
from .weights import SemiclassicalWeight, pearson_moments

__all__ = [
    "PartnerBundle",
    "OdePair",
    "PolynDCheck",
    "TailNotVanishing",
    "AsymmetryDetected",
    "electrostatic_partner",
    "leading_check",
    "compute_U_H",
    "verify_polynD",
    "van_vleck",
    "ode2_residual",
    "r_polynomial",
    "third_order",
    "ode3_residual",
    "partner_ode",
    "partner_ode_residual",
    "common_root_warnings",
    "complete_record",
    "verify_record",
]


class TailNotVanishing(ToolkitError):
    pass


class AsymmetryDetected(ToolkitError):
    pass


@dataclass(frozen=True)
class PartnerBundle:
    S: ExactPoly
    tail_checked_to: int
    scale_power: int = 1

    @property
    def monic(self) -> ExactPoly:
        return self.S.monic() if not self.S.is_zero() else self.S


@dataclass(frozen=True)
class OdePair:
    S: ExactPoly
    C: ExactPoly


@dataclass(frozen=True)
class PolynDCheck:
    ok: bool
    first_mismatch: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _require_tail_zero(t: LaurentTail, what: str) -> int:
    k = t.first_nonzero()
    if k is not None:
        raise TailNotVanishing(f"{what}: coefficient of z^{-k - 1} is {t.coeffs[k]}")
    return t.order


def electrostatic_partner(P: ExactPoly, w: SemiclassicalWeight, cauchy: LaurentTail) -> PartnerBundle:
    """Partner S of P with respect to w, with its zero tail checked to the available order."""
    c = cauchy
    dc = c.derivative()
    inner = series_mul(w.A, dc) - series_mul(w.B, c)
    D = series_mul(P, inner) - series_mul(w.A * P.deriv(), c)
    checked = _require_tail_zero(D, "partner series")
    return PartnerBundle(D.polynomial_part, checked, 1)


def leading_check(bundle: PartnerBundle, m_n: Fraction, N: int, n: int, w: SemiclassicalWeight) -> bool:
    """Compare the top of S with the value forced by n orthogonality conditions.

    The coefficient of x^(N-n+sigma) must be m_n times (N+n+1 when
    deg A = sigma+2, plus lead(B) when deg B = sigma+1); all higher
    coefficients must vanish.
    """
    s = w.sigma
    top = N - n + s
    expected = Fraction(0)
    if w.A.degree - 2 == s:
        expected += N + n + 1
    if w.B.degree - 1 == s:
        expected += w.B.lead
    expected *= m_n
    S = bundle.S
    if S.degree > top:
        return False
    return S[top] == expected


def compute_U_H(P: ExactPoly, w: SemiclassicalWeight, cauchy: LaurentTail, moments=None):
    """Return (U, H, Epart).

    Epart is the polynomial part of A P'/P and U = A P' - Epart P.  H is the
    polynomial part of A c' - (B + Epart) c, whose tail must equal the Cauchy
    tail of U.
    """
    AdP = w.A * P.deriv()
    Epart, U = poly_divmod(AdP, P)
    c = cauchy
    T = series_mul(w.A, c.derivative()) - series_mul(w.B + Epart, c)
    if moments is None:
        moments = pearson_moments(w, max(U.degree, 0) + T.order + 1).values
    cu = cauchy_tail(U, moments, T.order) if not U.is_zero() else LaurentTail([0] * T.order, order=T.order)
    _require_tail_zero(T - cu, "U/H identity")
    return U, T.polynomial_part, Epart


def verify_polynD(P: ExactPoly, U: ExactPoly, H: ExactPoly, cauchy_P: LaurentTail, cauchy_U: LaurentTail, S: ExactPoly) -> PolynDCheck:
    """Check det[[P, c_P], [U, c_U + H]] against S coefficientwise.

    Positions count from the highest power present (position 0) downwards
    through the polynomial part and then into the tail.
    """
    det = series_mul(P, cauchy_U + LaurentTail((), H, cauchy_U.order)) - series_mul(U, cauchy_P)
    top = max(det.polynomial_part.degree, S.degree, 0)
    pos = 0
    for k in range(top, -1, -1):
        if det.polynomial_part[k] != S[k]:
            return PolynDCheck(False, pos)
        pos += 1
    for j, v in enumerate(det.coeffs):
        if v != 0:
            return PolynDCheck(False, pos + j)
    return PolynDCheck(True, None)


def van_vleck(P: ExactPoly, bundle, w: SemiclassicalWeight) -> OdePair:
    """Van Vleck polynomial C of the second order equation shared by P and its function of the second kind."""
    S = bundle.S if isinstance(bundle, PartnerBundle) else bundle
    A, B = w.A, w.B
    num = A * S * P.deriv(2) + (A.deriv() * S - A * S.deriv() + B * S) * P.deriv()
    return OdePair(S, -poly_div_exact(num, P))


def ode2_residual(y: ExactPoly, S: ExactPoly, C: ExactPoly, w: SemiclassicalWeight) -> ExactPoly:
    A, B = w.A, w.B
    return A * S * y.deriv(2) + (A.deriv() * S - A * S.deriv() + B * S) * y.deriv() + C * y


def _rhs_idr1(S1, S2, w1, w2) -> ExactPoly:
    A1, A2, B1, B2 = w1.A, w2.A, w1.B, w2.B
    return -wronskian(A1, A2) * S1 * S2 + A1 * A2 * wronskian(S1, S2) + (A2 * B1 - A1 * B2) * S1 * S2


def r_polynomial(P: ExactPoly, S1: ExactPoly, S2: ExactPoly, C1: ExactPoly, C2: ExactPoly, w1, w2):
    """Return (R, R_star).

    R is obtained by dividing the Wronskian combination of the partners by P
    and independently as (A1 S1 C2 - A2 S2 C1)/P'; the two must agree.  R_star
    is R/A^2 when both weights share (A, B), otherwise None.
    """
    R = poly_div_exact(_rhs_idr1(S1, S2, w1, w2), P)
    dP = P.deriv()
    R0 = poly_div_exact(w1.A * S1 * C2 - w2.A * S2 * C1, dP) if not dP.is_zero() else R
    if R0 != R:
        raise AsymmetryDetected("the two constructions of R disagree")
    Rstar = None
    if w1.A == w2.A:
        poly_div_exact(R, w1.A)
        if w1.B == w2.B:
            Rstar = poly_div_exact(R, w1.A * w1.A)
    return R, Rstar


def _ef_route(S1, C1, S2, C2, w1, w2, R):
    # E and F from the data of the first partner; the second-partner route swaps 1 <-> 2
    A1, A2, B1, B2 = w1.A, w2.A, w1.B, w2.B
    dR = R.deriv()
    A12 = A1 * A2
    numE = (-A12 * R * S1.deriv(2)
            + ((-A1 * (2 * A2.deriv() + B2) + A2 * B1) * R + A12 * dR) * S1.deriv()
            + A2 * R * C1)
    E = poly_div_exact(numE, S1) + (A1.deriv(2) * A2 + A1.deriv() * (2 * A2.deriv() + B2) + 2 * A2.deriv() * B1
                                    + A2 * B1.deriv() + B1 * B2) * R - A2 * (A1.deriv() + B1) * dR
    numF = (A2 * C1.deriv() + (B2 + 2 * A2.deriv()) * C1) * R - A2 * C1 * dR
    F = poly_div_exact(numF, S1)
    return E, F


def third_order(S1, C1, S2, C2, w1, w2, R):
    """Coefficients (E, F) of the third order equation, checked by both partner routes."""
    if R.is_zero():
        raise NotApplicable("R vanishes identically; the third order equation degenerates")
    E1, F1 = _ef_route(S1, C1, S2, C2, w1, w2, R)
    E2, F2 = _ef_route(S2, C2, S1, C1, w2, w1, R)
    if E1 != E2 or F1 != F2:
        raise AsymmetryDetected("E/F differ between the two partner routes")
    return E1, F1


def ode3_coefficients(w1, w2, R):
    A1, A2, B1, B2 = w1.A, w2.A, w1.B, w2.B
    c3 = A1 * A2 * R
    c2 = (A1 * (2 * A2.deriv() + B2) + A2 * (2 * A1.deriv() + B1)) * R - A1 * A2 * R.deriv()
    return c3, c2


def ode3_residual(y, w1, w2, R, E, F) -> ExactPoly:
    c3, c2 = ode3_coefficients(w1, w2, R)
    return c3 * y.deriv(3) + c2 * y.deriv(2) + E * y.deriv() + F * y


def _partner_ode_coeffs(P, R, w1, w2, which: int):
    A1, A2, B1, B2 = w1.A, w2.A, w1.B, w2.B
    PR = P * R
    c2 = A1 * A2 * PR
    if which == 1:
        mid = 2 * A1 * A2.deriv() + A1 * B2 - A2 * B1
    else:
        mid = 2 * A1.deriv() * A2 - A1 * B2 + A2 * B1
    c1 = mid * PR - A1 * A2 * (P * R.deriv() + P.deriv() * R)
    return c2, c1


def partner_ode(P, R, S, w1, w2, which: int) -> ExactPoly:
    """Zeroth-order coefficient D of the second order equation satisfied by partner ``which``."""
    if which not in (1, 2):
        raise ValueError("which is 1 or 2")
    c2, c1 = _partner_ode_coeffs(P, R, w1, w2, which)
    return -poly_div_exact(c2 * S.deriv(2) + c1 * S.deriv(), S)


def partner_ode_residual(y, P, R, D, w1, w2, which: int) -> ExactPoly:
    c2, c1 = _partner_ode_coeffs(P, R, w1, w2, which)
    return c2 * y.deriv(2) + c1 * y.deriv() + D * y


def reduced_partner_ode(P, Rstar, S1, S2):
    """For equal weights: D* with P R* y'' - (P R*)' y' + D* y = 0 for y = S1, S2.

    D* is computed by division from S1 and compared with the Wronskian of the
    derivatives of both partners.
    """
    PR = P * Rstar
    D = -poly_div_exact(PR * S1.deriv(2) - PR.deriv() * S1.deriv(), S1)
    if D != wronskian(S1.deriv(), S2.deriv()):
        raise AsymmetryDetected("D* differs from the Wronskian of the partner derivatives")
    return D


def reduced_residual(y, P, Rstar, Dstar) -> ExactPoly:
    PR = P * Rstar
    return PR * y.deriv(2) - PR.deriv() * y.deriv() + Dstar * y


def common_root_warnings(P: ExactPoly, S: ExactPoly, w: SemiclassicalWeight, label: str) -> list:
    g = poly_gcd(P, w.A * S)
    if g.degree >= 1:
        return [f"P shares a factor of degree {g.degree} with A*S{label}: {g}"]
    return []


# ---------------------------------------------------------------------------
# Record level


def complete_record(rec: MopRecord, upto: str = "all") -> MopRecord:
    """Fill partners, Van Vleck polynomials and (for two weights) R, E, F and D.

    ``upto="partners"`` stops after the partners, which is all the zero and
    histogram workflows need; ``upto="r"`` stops after R and R*.
    """
    if upto not in ("partners", "r", "all"):
        raise ValueError(f"unknown stage {upto!r}")
    P = rec.P
    bundles = [electrostatic_partner(P, w, t) for w, t in zip(rec.weights, rec.cauchy)]
    S = tuple(b.S for b in bundles)
    warnings = list(rec.warnings)
    for i, (s, w) in enumerate(zip(S, rec.weights), start=1):
        warnings += common_root_warnings(P, s, w, str(i))
    if upto == "partners" or any(s.is_zero() for s in S):
        return rec.with_(partners=S, tail_checked_to=tuple(b.tail_checked_to for b in bundles), warnings=tuple(warnings))
    C = tuple(van_vleck(P, s, w).C for s, w in zip(S, rec.weights))
    out = rec.with_(partners=S, tail_checked_to=tuple(b.tail_checked_to for b in bundles), vanvleck=C, warnings=tuple(warnings))
    if not rec.multiple:
        return out
    w1, w2 = rec.weights
    R, Rstar = r_polynomial(P, S[0], S[1], C[0], C[1], w1, w2)
    out = out.with_(r_poly=R, r_star=Rstar)
    if upto == "r":
        return out
    if R.is_zero():
        return out.with_(warnings=out.warnings + ("R vanishes identically",))
    E, F = third_order(S[0], C[0], S[1], C[1], w1, w2, R)
    D = (partner_ode(P, R, S[0], w1, w2, 1), partner_ode(P, R, S[1], w1, w2, 2))
    Dstar = reduced_partner_ode(P, Rstar, S[0], S[1]) if Rstar is not None else None
    return out.with_(e_poly=E, f_poly=F, d_polys=D, d_star=Dstar)


def _check(results: list, name: str, fn):
    try:
        ok, detail = fn()
    except ToolkitError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    results.append((name, bool(ok), detail))


def verify_record(rec: MopRecord) -> list:
    """Re-check every identity from the polynomials stored in ``rec``.

    Returns a list of ``(name, ok, detail)``.  Nothing stored is trusted: the
    partners are recomputed from P and compared, and every residual uses the
    stored C, R, E, F and D.
    """
    res: list = []
    P = rec.P
    ws = rec.weights

    def orth():
        for i, (w, ni) in enumerate(zip(ws, rec.index.n)):
            u = pearson_moments(w, P.degree + ni + 1).values
            t = cauchy_tail(P, u, ni + 1)
            if any(t.coeffs[:ni]):
                return False, f"weight {i + 1}: orthogonality fails"
            if rec.m_n[i] != -t.coeffs[ni]:
                return False, f"weight {i + 1}: stored m_n is wrong"
        return True, "exact"

    _check(res, "orthogonality", orth)
    if rec.partners is None:
        return res
    S = rec.partners

    def partners():
        for i, (w, t) in enumerate(zip(ws, rec.cauchy)):
            b = electrostatic_partner(P, w, cauchy_tail(P, pearson_moments(w, P.degree + t.order).values, t.order))
            if b.S != S[i]:
                return False, f"S{i + 1} differs from the recomputed partner"
        return True, "recomputed"

    _check(res, "partner", partners)

    def degrees():
        for i, (w, ni) in enumerate(zip(ws, rec.index.n)):
            if S[i].degree > rec.N - ni + w.sigma:
                return False, f"deg S{i + 1} = {S[i].degree} exceeds {rec.N - ni + w.sigma}"
            if rec.vanvleck is not None and rec.vanvleck[i].degree > rec.N - ni + 2 * w.sigma:
                return False, f"deg C{i + 1} too large"
        if rec.r_poly is not None and rec.multiple:
            s1, s2 = ws[0].sigma, ws[1].sigma
            if rec.r_poly.degree > 2 * s1 + 2 * s2 + 3:
                return False, "deg R too large"
            if rec.f_poly is not None and rec.f_poly.degree > s1 + s2 + rec.r_poly.degree + 1:
                return False, "deg F too large"
        return True, "within bounds"

    _check(res, "degree_bounds", degrees)

    def leading():
        for i, (w, ni) in enumerate(zip(ws, rec.index.n)):
            if rec.m_n[i] and not leading_check(PartnerBundle(S[i], 0), rec.m_n[i], rec.N, ni, w):
                return False, f"leading coefficient of S{i + 1}"
        return True, "matches"

    _check(res, "leading_coefficient", leading)
    if rec.vanvleck is None:
        return res
    C = rec.vanvleck
    for i, w in enumerate(ws):
        _check(res, f"ode2_{i + 1}", lambda i=i, w=w: (ode2_residual(P, S[i], C[i], w).is_zero(), "residual at y=P"))
    if not rec.multiple or rec.r_poly is None:
        return res
    w1, w2 = ws
    R = rec.r_poly
    _check(res, "IdR1", lambda: ((R * P) == _rhs_idr1(S[0], S[1], w1, w2), "R*P against the partner Wronskian combination"))
    _check(res, "IdR0", lambda: ((R * P.deriv()) == w1.A * S[0] * C[1] - w2.A * S[1] * C[0], "R*P' against A1 S1 C2 - A2 S2 C1"))
    _check(res, "independence", lambda: (not R.is_zero(), "R not identically zero"))
    if w1.same_pearson(w2):
        A = w1.A
        _check(res, "equal_weight_wronskian", lambda: ((A * A * wronskian(S[0], S[1])) == R * P, "A^2 W(S1,S2) = R P"))
        _check(res, "R_star", lambda: (rec.r_star is not None and A * A * rec.r_star == R, "R = A^2 R*"))
        if rec.d_star is not None:
            for i in (0, 1):
                _check(res, f"reduced_partner_ode_{i + 1}",
                       lambda i=i: (reduced_residual(S[i], P, rec.r_star, rec.d_star).is_zero(), "residual at y=S"))
    if R.is_zero() or rec.e_poly is None:
        return res
    E, F = rec.e_poly, rec.f_poly

    def symmetry():
        third_order(S[0], C[0], S[1], C[1], w1, w2, R)
        return True, "both partner routes agree"

    _check(res, "ef_symmetry", symmetry)
    _check(res, "recomputed_EF", lambda: (third_order(S[0], C[0], S[1], C[1], w1, w2, R) == (E, F), "stored E, F"))
    _check(res, "ode3", lambda: (ode3_residual(P, w1, w2, R, E, F).is_zero(), "residual at y=P"))
    if rec.d_polys is not None:
        for i in (0, 1):
            _check(res, f"partner_ode_{i + 1}",
                   lambda i=i: (partner_ode_residual(S[i], P, R, rec.d_polys[i], w1, w2, i + 1).is_zero(), "residual at y=S"))
    return res
