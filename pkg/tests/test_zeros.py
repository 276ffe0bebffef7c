from __future__ import annotations

import json
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import record, zeros
from hpelectro.electro import points
from hpelectro.exactpoly import ExactPoly, mp_context
from hpelectro.mop import MultiIndex, solve_mop
from hpelectro.weights import cauchy_transform, family
from hpelectro.zeros import (
    AmbiguousAtPrecision,
    ZeroSet,
    cluster_gap,
    find_zeros,
    interlacing_report,
    sign_changes,
)

x = ExactPoly.x()


# -- root finding


def test_sqrt_two():
    z = find_zeros(x * x - 2)
    ctx = z.ctx
    assert [float(v) for v in z.real_points()] == pytest.approx([-2 ** 0.5, 2 ** 0.5], abs=1e-15)
    assert abs(z.real_points()[1] - ctx.sqrt(2)) <= z.radii[1] + ctx.mpf(2) ** -250


def test_hermite_two():
    z = find_zeros(x * x - F(1, 2))
    ctx = z.ctx
    assert abs(z.real_points()[1] - 1 / ctx.sqrt(2)) < ctx.mpf(2) ** -240


def test_multiple_hermite_partner_has_one_real_zero():
    S = record("multiple_hermite", (5, 5), upto="partners").partners[0]
    z = find_zeros(S)
    assert len(z.real_points()) == 1 and z.nonreal_count() == 4
    # the real zero lies left of every zero of P
    zp = find_zeros(record("multiple_hermite", (5, 5), upto="partners").P)
    assert z.real_points()[0] < min(zp.real_points())


def test_multiplicities_reported():
    z = find_zeros((x - 1) ** 3 * (x + 2))
    assert sorted(z.multiplicity) == [1, 3, 3, 3]
    assert len(z.distinct()) == 2


@given(st.lists(st.integers(-30, 30), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
@settings(max_examples=40, deadline=None)
def test_sum_of_roots(coeffs):
    p = ExactPoly(coeffs)
    z = find_zeros(p, 128)
    ctx = mp_context(128)
    total = sum(z.points, ctx.mpc(0))
    ref = -p[p.degree - 1] / p.lead
    scale = 1 + sum(abs(v) for v in z.points)
    assert abs(total - ctx.mpf(ref.numerator) / ref.denominator) <= ctx.mpf(2) ** (-128 + 8) * scale


def test_precision_doubling_shrinks_radii():
    S = record("multiple_hermite", (5, 5), upto="partners").partners[0]
    lo, hi = find_zeros(S, 128), find_zeros(S, 256)
    assert all(b < a for a, b in zip(lo.radii, hi.radii))


def test_appell_reflection_of_zeros():
    S1, S2 = record("appell", (5, 5), upto="partners").partners
    z1 = sorted(find_zeros(S1).points, key=lambda v: (float(v.real), float(v.imag)))
    z2 = sorted((-v for v in find_zeros(S2).points), key=lambda v: (float(v.real), float(v.imag)))
    assert all(abs(a - b) < mpmath.mpf(2) ** -200 for a, b in zip(z1, z2))


# -- interlacing


def test_interlacing_trivial():
    rep = interlacing_report(points([1, 3]), points([2]), (0, 4))
    assert rep.interlaced_pairs == 1 and rep.perfect
    assert rep.interlaced_pairs <= min(rep.count_inside_a, rep.count_inside_b) + 1


def test_interlacing_violation_reported():
    rep = interlacing_report(points([1, 3, 5]), points([2, F(5, 2)]), (0, 6))
    assert rep.interlaced_pairs == 0 and rep.violations == (0, 1)


def test_interlacing_ambiguous_at_endpoint():
    with pytest.raises(AmbiguousAtPrecision):
        interlacing_report(points([1, 3]), points([2, 4]), (0, 4))


def test_angelesco_appell_1515_interlacing():
    r = record("appell", (15, 15), upto="partners")
    zp, zs = find_zeros(r.P), find_zeros(r.partners[0])
    # every zero of P in (0, 1) is inside the open interval, and S1 has a zero at x = 1
    assert r.partners[0](F(1)) == 0
    top = max(zp.real_points())
    rep = interlacing_report(zp, zs, (0, (top + 1) / 2))
    assert rep.count_inside_a == 15 and rep.interlaced_pairs == 14


@pytest.mark.parametrize("n", range(2, 16))
def test_angelesco_zero_split(n):
    ws = family("angelesco_jacobi", a=-1, alpha=0, beta=F(1, 2), gamma=0)
    z = find_zeros(solve_mop(*ws, MultiIndex((n, n))).P, 128)
    pts = z.real_points()
    assert len(pts) == 2 * n
    assert sum(1 for p in pts if -1 < p < 0) == n and sum(1 for p in pts if 0 < p < 1) == n


def test_angelesco_zero_split_off_diagonal():
    ws = family("angelesco_jacobi", a=F(-1, 2), alpha=0, beta=F(1, 2), gamma=0)
    pts = find_zeros(solve_mop(*ws, MultiIndex((4, 2))).P, 128).real_points()
    assert len(pts) == 6
    assert sum(1 for p in pts if -0.5 < p < 0) == 4 and sum(1 for p in pts if 0 < p < 1) == 2


def test_laguerre_sides():
    zs = zeros("mlaguerre1", (35, 35), which=1)
    zp = zeros("mlaguerre1", (35, 35))
    assert len(zp.real_points()) == 70 and all(p > 0 for p in zp.real_points())
    assert zs.real_points() and all(p < 0 for p in zs.real_points())


# -- sign changes


def test_sign_changes_cubic():
    assert sign_changes(lambda t: (t - 1) * (t - 2) * (t - 3), (0, 4)) == 3


def test_sign_changes_finds_close_pair():
    # two roots 1e-3 apart inside one grid cell
    assert sign_changes(lambda t: (t - 0.5) * (t - 0.501), (0, 1), grid=10, depth=12) == 2


def test_jacobi_pineiro_cauchy_transform_sign_changes():
    # the transform against the first weight changes sign at least n2 times on the negative ray;
    # sampled in the log scale variable s with t = -10^s
    r = record("jacobi_pineiro", (5, 5), upto="partners")
    w1 = r.weights[0]

    def f(s):
        return mpmath.re(cauchy_transform(r.P, w1, -mpmath.mpf(10) ** s, 80))

    assert sign_changes(f, (-8, 4), grid=36, depth=2) >= 5


# -- clusters


def test_cluster_gap_uniform_grid():
    clusters, gap = cluster_gap([k / 50 for k in range(51)])
    assert clusters == 1 and gap == pytest.approx(0.02)


def test_cluster_gap_two_groups():
    xs = [k / 50 for k in range(20)] + [3 + k / 50 for k in range(20)]
    assert cluster_gap(xs)[0] == 2
    assert cluster_gap(xs, axis_window=(2, 4))[0] == 1
    assert cluster_gap([]) == (0, 0.0)


# -- export


def test_zero_set_exports():
    z = find_zeros(x * x * (x - 1) + 1)
    back = ZeroSet.from_json(json.loads(json.dumps(z.to_json())))
    assert len(back) == len(z) and back.multiplicity == z.multiplicity
    assert all(abs(a - b) < mpmath.mpf(10) ** -15 for a, b in zip(back.points, z.points))
    lines = z.to_csv().strip().splitlines()
    assert lines[0] == "re,im,radius,multiplicity" and len(lines) == 4
