from __future__ import annotations

import json
from fractions import Fraction as F

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hpelectro.exactpoly import ExactPoly
from hpelectro.mop import (
    MopRecord,
    MultiIndex,
    NonNormalIndex,
    NotApplicable,
    bareiss_solve,
    cauchy_tail,
    check_independence,
    solve_mop,
    solve_quasi,
)
from hpelectro.partner import complete_record
from hpelectro.weights import InvalidParameters, family, pearson_moments

x = ExactPoly.x()


def test_multi_index_parse():
    n = MultiIndex.parse("5,3")
    assert (n.n, n.N, len(n)) == ((5, 3), 8, 2)
    with pytest.raises(ValueError):
        MultiIndex.parse("a,b")


# -- fraction-free elimination


def test_bareiss_small_system():
    sol, rank = bareiss_solve([[F(2), F(1)], [F(1), F(3)]], [F(3), F(5)])
    assert rank == 2 and list(sol) == [F(4, 5), F(7, 5)]


def test_bareiss_singular_consistent_sets_free_to_zero():
    sol, rank = bareiss_solve([[F(1), F(2)], [F(2), F(4)]], [F(3), F(6)])
    assert rank == 1 and list(sol) == [F(3), F(0)]


def test_bareiss_inconsistent():
    sol, rank = bareiss_solve([[F(1), F(2)], [F(2), F(4)]], [F(3), F(7)])
    assert sol is None and rank == 1


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(st.fractions(-9, 9, max_denominator=5), min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(st.fractions(-9, 9, max_denominator=5), min_size=n, max_size=n))))
@settings(max_examples=60, deadline=None)
def test_bareiss_matches_sympy(system):
    rows, rhs = system
    M = sympy.Matrix(rows)
    sol, rank = bareiss_solve(rows, rhs)
    assert rank == M.rank()
    if rank == len(rows):
        expected = M.LUsolve(sympy.Matrix(rhs))
        assert [F(str(v)) for v in expected] == list(sol)


# -- type II solves


def test_multiple_hermite_55():
    r = solve_mop(*family("multiple_hermite", c1=1, c2=-1), MultiIndex((5, 5)))
    assert r.P.coeffs[0] == F(-39971, 1024) and r.P[8] == F(-95, 4)
    assert r.P.is_monic() and r.P.degree == 10 and r.normal


def test_multiple_hermite_mn_against_quadrature():
    r = solve_mop(*family("multiple_hermite", c1=1, c2=-1), MultiIndex((5, 5)))
    with mpmath.workdps(60):
        for i, c in enumerate((1, -1)):
            w = lambda t, c=c: mpmath.exp(-t * t + c * t)
            mass = mpmath.quad(w, [-mpmath.inf, 0, mpmath.inf])
            val = mpmath.quad(lambda t: t**5 * r.P.eval_mp(t) * w(t), [-mpmath.inf, 0, mpmath.inf]) / mass
            ref = mpmath.mpf(r.m_n[i].numerator) / r.m_n[i].denominator
            assert abs(val - ref) < mpmath.mpf(10) ** -40
    assert r.m_n == (F(15, 4), F(-15, 4))


def test_appell_66():
    r = solve_mop(*family("appell"), MultiIndex((6, 6)))
    expected = ExactPoly.from_descending([F(v) for v in
                                          (1, 0, "-44/17", 0, "165/68", 0, "-220/221", 0, "75/442", 0, "-2/221", 0, "1/18564")])
    assert r.P == expected


def test_jacobi_pineiro_55_top_coefficient():
    r = solve_mop(*family("jacobi_pineiro", alpha=0, beta1=0, beta2=F(-1, 2)), MultiIndex((5, 5)))
    assert r.P[9] == F(-380, 87)


@pytest.mark.parametrize("name,params,n", [
    ("multiple_hermite", {"c1": 2, "c2": F(-1, 3)}, (3, 4)),
    ("mlaguerre1", {"alpha1": F(1, 2), "alpha2": 1}, (4, 2)),
    ("mlaguerre2", {"alpha": 1, "c1": 1, "c2": 2}, (2, 5)),
    ("jacobi_pineiro", {"alpha": F(1, 2), "beta1": 0, "beta2": F(-1, 2)}, (3, 3)),
    ("appell", {}, (4, 3)),
])
def test_orthogonality_residuals_exact(name, params, n):
    ws = family(name, **params)
    r = solve_mop(*ws, MultiIndex(n))
    for i, (w, ni) in enumerate(zip(ws, n)):
        u = pearson_moments(w, r.N + ni + 1).values
        t = cauchy_tail(r.P, u, ni + 1)
        assert all(c == 0 for c in t.coeffs[:ni])
        assert t.first_nonzero() == ni  # leading Cauchy index sits exactly at n_i
        assert r.m_n[i] == -r.cauchy[i].coefficient(ni)


def test_nonstandard_pair_is_not_normal():
    ws = family("jacobi_nonstandard", alpha=F(-5, 2), beta=F(1, 3))
    with pytest.raises(NonNormalIndex, match="m_n vanishes"):
        solve_mop(*ws, MultiIndex((4, 2)))
    r = solve_mop(*ws, MultiIndex((4, 2)), strict=False)
    assert not r.normal and r.flags


# -- quasi-orthogonality


def test_quasi_hermite_two():
    r = solve_quasi(family("hermite")[0], 2, 2)
    assert r.P == x * x - F(1, 2)


def test_quasi_legendre_three():
    r = solve_quasi(family("jacobi", alpha=0, beta=0)[0], 3, 3)
    assert r.P == x ** 3 - F(3, 5) * x


def test_quasi_rules():
    w = family("jacobi", alpha=0, beta=0)[0]
    comb = solve_quasi(w, 4, 3, ("combination", (F(1, 3),)))
    assert comb.P == solve_quasi(w, 4, 4).P + F(1, 3) * solve_quasi(w, 3, 3).P
    pinned = solve_quasi(w, 4, 3, ("pinned", {3: F(1, 3)}))
    assert pinned.P == comb.P
    with pytest.raises(InvalidParameters):
        solve_quasi(w, 4, 3)


def test_numeric_backend_refused():
    w1, w2 = family("cubic")
    with pytest.raises(Exception, match="exact"):
        solve_mop(w1, w2, MultiIndex((1, 1)))


# -- independence


def test_independence_checks():
    r = complete_record(solve_mop(*family("multiple_hermite", c1=1, c2=-1), MultiIndex((5, 5))))
    assert check_independence(r) is True
    q = complete_record(solve_quasi(family("hermite")[0], 3, 3))
    with pytest.raises(NotApplicable):
        check_independence(q)
    ws = family("jacobi_nonstandard", alpha=F(-5, 2), beta=F(1, 3))
    d = complete_record(solve_mop(*ws, MultiIndex((4, 2)), strict=False))
    assert check_independence(d) is False


def test_record_json_round_trip():
    r = complete_record(solve_mop(*family("appell"), MultiIndex((3, 3))))
    back = MopRecord.from_json(json.loads(json.dumps(r.to_json())))
    assert back.P == r.P and back.partners == r.partners and back.r_star == r.r_star
    assert back.e_poly == r.e_poly and back.d_star == r.d_star and back.m_n == r.m_n
    assert back.index == r.index and back.cauchy[0] == r.cauchy[0]
