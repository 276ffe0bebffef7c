from __future__ import annotations

import random
from fractions import Fraction as F

import mpmath
import pytest

from conftest import record, zeros
from hpelectro.electro import (
    ExternalField,
    OverlapDetected,
    PoleCollision,
    energy,
    histogram_csv,
    histogram_export,
    points,
    scalar_field,
    scalar_residual,
    vector_fields,
    vector_residual,
)
from hpelectro.exactpoly import ExactPoly, mp_context
from hpelectro.mop import solve_quasi
from hpelectro.weights import family
from hpelectro.zeros import find_zeros

x = ExactPoly.x()


def _mp(ctx, q):
    q = F(q)
    return ctx.mpf(q.numerator) / q.denominator


# -- scalar model


def test_hermite_two_exact():
    ctx = mp_context(256)
    r = 1 / ctx.sqrt(2)
    rep = scalar_residual(points([-r, r]), ExternalField.quadratic())
    assert rep.max_abs < ctx.mpf(2) ** -250


def test_hermite_six():
    P = solve_quasi(family("hermite")[0], 6, 6).P
    rep = scalar_residual(find_zeros(P, 256), ExternalField.quadratic())
    assert rep.component == "scalar" and len(rep.residuals) == 6
    assert rep.max_abs < mpmath.mpf(2) ** -200


def test_hermite_field_equals_partner_field():
    # with S = 1 the general scalar field reduces to x^2/2
    h = family("hermite")[0]
    f = scalar_field(ExactPoly.const(1), h.A, h.B)
    ctx = mp_context(128)
    for z in (ctx.mpf("0.3"), ctx.mpc(1, 2)):
        assert abs(f.dphi(z, ctx) - z) < ctx.mpf(2) ** -120


def test_multiple_hermite_scalar_decay():
    r = record("multiple_hermite", (5, 5), upto="partners")
    w = r.weights[0]
    f = scalar_field(r.partners[0], w.A, w.B)
    lo = scalar_residual(find_zeros(r.P, 256), f).max_abs
    hi = scalar_residual(find_zeros(r.P, 512), f).max_abs
    assert hi < lo and hi < mpmath.mpf(2) ** -400


# -- vector model


def test_appell_vector_residual():
    r = record("appell", (6, 6), upto="r")
    assert r.r_star.degree == 0
    fields = vector_fields(*r.weights, r.r_poly, r.r_star)
    assert fields[1].terms == ()
    rep1, rep2 = vector_residual(find_zeros(r.P, 256), find_zeros(r.partners[0], 256), F(-1, 2), fields)
    assert rep1.max_abs < mpmath.mpf(2) ** -200 and rep2.max_abs < mpmath.mpf(2) ** -200


def test_laguerre_vector_decay():
    r = record("mlaguerre1", (5, 5), upto="r")
    fields = vector_fields(*r.weights, r.r_poly, r.r_star)
    reps = [vector_residual(find_zeros(r.P, p), find_zeros(r.partners[0], p), F(-1, 2), fields) for p in (256, 512)]
    for k in (0, 1):
        assert reps[1][k].max_abs < reps[0][k].max_abs
        assert reps[1][k].max_abs < mpmath.mpf(2) ** -400


def test_three_charges_symmetry():
    ctx = mp_context(256)
    # component 2 sits at the midpoint: the two pulls cancel
    rep1, rep2 = vector_residual(points([-1, 1]), points([0]), F(-1, 2))
    assert rep2.residuals[0] == 0
    # component 1 at x = 1: 1/2 from the partner charge plus a * 1 from the midpoint
    assert rep1.residuals[1] == ctx.mpf(1) / 2 + _mp(ctx, F(-1, 2))
    rep1, rep2 = vector_residual(points([-1, 1]), points([0]), F(1, 3))
    assert rep2.residuals[0] == 0
    assert abs(rep1.residuals[1] - _mp(ctx, F(5, 6))) < ctx.mpf(2) ** -250
    assert abs(rep1.residuals[0] + _mp(ctx, F(5, 6))) < ctx.mpf(2) ** -250


# -- energy


def test_energy_examples():
    assert energy(points([0, 1])) == 0
    linear = ExternalField.log_abs_weight(ExactPoly.const(1), ExactPoly.const(1), 1)  # phi(x) = x
    assert energy(points([0, 1]), fields=linear) == 2
    assert energy(points([0, 0])) == mpmath.inf


def test_vector_energy_cross_term():
    ctx = mp_context(256)
    e = energy((points([0, 2]), points([1])), a=F(-1, 2))
    # own pairs: -2 log 2; cross: -2a (log 1 + log 1) = 0
    assert abs(e + 2 * ctx.log(2)) < ctx.mpf(2) ** -250


def test_hermite_three_is_stationary():
    P = solve_quasi(family("hermite")[0], 3, 3).P
    z = find_zeros(P, 256)
    f = ExternalField.quadratic()
    ctx = mp_context(256)
    base = energy(z, fields=f)
    h = ctx.mpf("1e-3")
    for j in range(3):
        up = [p + (h if k == j else 0) for k, p in enumerate(z.points)]
        dn = [p - (h if k == j else 0) for k, p in enumerate(z.points)]
        e_up, e_dn = energy(points(up), fields=f), energy(points(dn), fields=f)
        assert abs(e_up - e_dn) / (2 * h) < ctx.mpf("1e-5")
        assert e_up - base > -ctx.mpf("1e-9")


def test_gradient_matches_residual_small_random():
    # d/dz_j of the energy equals -2 * residual_j for real configurations
    rnd = random.Random(7)
    ctx = mp_context(256)
    f = ExternalField.log_abs_poly(x * x + 1, F(1, 2))
    for _ in range(5):
        pts = sorted(rnd.uniform(-3, 3) for _ in range(4))
        if min(b - a for a, b in zip(pts, pts[1:])) < 0.3:
            continue
        z = points(pts)
        res = scalar_residual(z, f).residuals
        h = ctx.mpf(2) ** -30
        for j in range(4):
            up = points([p + (h if k == j else 0) for k, p in enumerate(z.points)])
            dn = points([p - (h if k == j else 0) for k, p in enumerate(z.points)])
            fd = (energy(up, fields=f) - energy(dn, fields=f)) / (2 * h)
            assert abs(fd + 2 * ctx.re(res[j])) < ctx.mpf(2) ** -50


# -- histograms


def test_uniform_grid_histogram_is_flat():
    # dyadic grid: bin edges are exact, 64 points per bin and the right endpoint in the last
    hist = histogram_export([k / 1024 for k in range(1025)], 1, bins=16)
    dens = [row[2] for row in hist["rows"]]
    assert hist["count"] == 1025 and hist["min"] == 0 and hist["max"] == 1
    assert max(dens) / min(dens) == 65 / 64
    assert sum(d * (r - l) for l, r, d in hist["rows"]) == pytest.approx(1)
    assert histogram_csv(hist).splitlines()[0] == "bin_left,bin_right,density"


def test_laguerre_scaled_histogram():
    z = zeros("mlaguerre1", (35, 35))
    hist = histogram_export(z, F(1, 70), bins=25)
    assert hist["count"] == 70
    assert hist["max"] == pytest.approx(217.597 / 70, rel=5e-4)
    assert hist["max"] < 27 / 8


def test_jacobi_pineiro_histogram_reaches_one():
    z = zeros("jacobi_pineiro", (20, 20))
    hist = histogram_export(z, 1, bins=10)
    assert hist["count"] == 40 and 0 < hist["min"] and 0.99 < hist["max"] < 1


# -- field algebra and symmetry


def test_field_derivative_is_the_rational_function():
    p, q = x ** 3 - 2 * x + 5, x * x + F(1, 3)
    f = ExternalField.log_abs_poly(p, F(1, 2)) + ExternalField.log_abs_poly(q, F(-1, 2))
    ctx = mp_context(256)
    for t in (F(1, 7), F(-5, 3), F(9, 2)):
        exact = F(1, 2) * (p.deriv()(t) / p(t) - q.deriv()(t) / q(t))
        got = f.dphi(_mp(ctx, t), ctx)
        assert abs(got - _mp(ctx, exact)) <= ctx.mpf(2) ** -245 * (1 + abs(got))


def test_conjugation_symmetry():
    ctx = mp_context(256)
    z = points([ctx.mpc(1, 1), ctx.mpc(1, -1), 2, ctx.mpc(-1, 3), ctx.mpc(-1, -3)])
    f = ExternalField.log_abs_poly(x * x + 4, F(1, 2)) + ExternalField.quadratic()
    res = scalar_residual(z, f).residuals
    assert res[0] != 0 and abs(res[0] - ctx.conj(res[1])) < ctx.mpf(2) ** -250
    assert abs(res[3] - ctx.conj(res[4])) < ctx.mpf(2) ** -250 and abs(ctx.im(res[2])) < ctx.mpf(2) ** -250
    conj = points([ctx.conj(p) for p in z.points])
    res_c = scalar_residual(conj, f).residuals
    assert all(abs(a - ctx.conj(b)) < ctx.mpf(2) ** -250 for a, b in zip(res, res_c))


# -- failure modes


def test_pole_collision():
    f = ExternalField.log_abs_poly(x - 1, F(1, 2))
    with pytest.raises(PoleCollision):
        scalar_residual(points([1, 2]), f, strict=True)
    rep = scalar_residual(points([1, 2, 3]), f)
    assert rep.excluded == (0,) and rep.residuals[0] is None


def test_overlap_detected():
    with pytest.raises(OverlapDetected):
        scalar_residual(points([1, 1]), ExternalField())
    with pytest.raises(OverlapDetected):
        vector_residual(points([0, 1]), points([1]))


def test_report_json():
    rep = scalar_residual(points([-1, 1]), ExternalField())
    doc = rep.to_json()
    assert doc["component"] == "scalar" and len(doc["residuals"]) == 2 and doc["excluded"] == []
