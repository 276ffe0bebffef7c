from __future__ import annotations

import functools
from fractions import Fraction

import pytest

from hpelectro import MultiIndex, complete_record, family, find_zeros, solve_mop

# criterion label -> list of (ok, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}

FAMILIES_55 = {
    "multiple_hermite": {"c1": 1, "c2": -1},
    "mlaguerre1": {"alpha1": Fraction(1, 2), "alpha2": 1},
    "mlaguerre2": {"alpha": 1, "c1": 1, "c2": 2},
    "jacobi_pineiro": {"alpha": 0, "beta1": 0, "beta2": Fraction(-1, 2)},
    "appell": {},
}


@functools.lru_cache(maxsize=None)
def _record(name: str, items: tuple, n: tuple, upto: str):
    ws = family(name, **dict(items))
    return complete_record(solve_mop(ws[0], ws[1], MultiIndex(n)), upto)


def record(name: str, n: tuple, upto: str = "all", **params):
    """Cached solved record for a catalog family (defaults to the fixture parameters)."""
    p = params or FAMILIES_55[name]
    return _record(name, tuple(sorted(p.items())), tuple(n), upto)


@pytest.fixture
def acceptance():
    def note(label: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE.setdefault(label, []).append((bool(ok), detail))

    return note


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: (int(s.split()[0].rstrip("abcdefgh")), s)):
        rows = ACCEPTANCE[label]
        ok = all(r[0] for r in rows)
        details = "; ".join(d for r in rows for d in [r[1]] if d)
        terminalreporter.write_line(f"criterion {label}: {'PASS' if ok else 'FAIL'}  {details}")


@functools.lru_cache(maxsize=None)
def _zeros(name: str, items: tuple, n: tuple, which: int, precision: int):
    r = _record(name, items, n, "partners")
    return find_zeros(r.P if which == 0 else r.partners[which - 1], precision)


def zeros(name: str, n: tuple, which: int = 0, precision: int = 256, **params):
    """Cached zeros of P (which=0) or of partner ``which`` for a catalog record."""
    p = params or FAMILIES_55[name]
    return _zeros(name, tuple(sorted(p.items())), tuple(n), which, precision)
