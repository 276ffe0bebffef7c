"""Type II multiple orthogonal polynomials from exact moments.

The polynomial of a multi-index (n_1, n_2) is the monic P of degree
N = n_1 + n_2 whose first n_i weighted moments against w_i vanish.  The linear
system for its coefficients is solved with fraction-free elimination so that
singularity (a non-normal index) is decided exactly.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .exactpoly import ExactPoly, LaurentTail, ToolkitError, rat
from .weights import InvalidParameters, SemiclassicalWeight, pearson_moments

__all__ = [
    "MultiIndex",
    "MopRecord",
    "NonNormalIndex",
    "InsufficientMoments",
    "NotApplicable",
    "GUARD",
    "bareiss_solve",
    "cauchy_tail",
    "solve_mop",
    "solve_quasi",
    "check_independence",
]

GUARD = 8


class NonNormalIndex(ToolkitError):
    pass


class InsufficientMoments(ToolkitError):
    pass


class NotApplicable(ToolkitError):
    pass


@dataclass(frozen=True)
class MultiIndex:
    n: tuple

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        if not self.n or any(v < 0 for v in self.n):
            raise InvalidParameters("multi-index entries must be nonnegative integers")

    @classmethod
    def parse(cls, text: str) -> "MultiIndex":
        try:
            return cls(tuple(int(t) for t in str(text).replace(" ", "").split(",") if t))
        except ValueError:
            raise InvalidParameters(f"cannot parse multi-index {text!r}") from None

    @property
    def N(self) -> int:
        return sum(self.n)

    def __iter__(self):
        return iter(self.n)

    def __len__(self) -> int:
        return len(self.n)

    def __getitem__(self, i: int) -> int:
        return self.n[i]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.n)) + ")"


@dataclass(frozen=True)
class MopRecord:
    """A solved polynomial with its Cauchy tails and optional derived data.

    ``index`` lists the number of conditions per weight; ``N`` is the degree
    (equal to the index sum for type II records, larger for quasi-orthogonal
    ones).  The slots after ``flags`` are filled by :mod:`hpelectro.partner`.
    """

    index: MultiIndex
    N: int
    P: ExactPoly
    cauchy: tuple
    m_n: tuple
    weights: tuple
    normal: bool = True
    flags: tuple = ()
    completion: tuple | None = None
    partners: tuple | None = None
    tail_checked_to: tuple | None = None
    vanvleck: tuple | None = None
    r_poly: ExactPoly | None = None
    r_star: ExactPoly | None = None
    e_poly: ExactPoly | None = None
    f_poly: ExactPoly | None = None
    d_polys: tuple | None = None
    d_star: ExactPoly | None = None
    warnings: tuple = ()

    def with_(self, **kw) -> "MopRecord":
        return dataclasses.replace(self, **kw)

    @property
    def multiple(self) -> bool:
        return len(self.weights) == 2

    def to_json(self) -> dict:
        def pj(p):
            return None if p is None else p.to_json()

        def tj(t):
            return None if t is None else [pj(p) for p in t]

        return {
            "index": list(self.index.n),
            "N": self.N,
            "P": pj(self.P),
            "m_n": [f"{m.numerator}/{m.denominator}" for m in self.m_n],
            "normal": self.normal,
            "flags": list(self.flags),
            "completion": None if self.completion is None else [self.completion[0], _completion_json(self.completion[1])],
            "cauchy": [t.to_json() for t in self.cauchy],
            "weights": [w.to_json() for w in self.weights],
            "partners": tj(self.partners),
            "tail_checked_to": None if self.tail_checked_to is None else list(self.tail_checked_to),
            "vanvleck": tj(self.vanvleck),
            "R": pj(self.r_poly),
            "R_star": pj(self.r_star),
            "E": pj(self.e_poly),
            "F": pj(self.f_poly),
            "D": tj(self.d_polys),
            "D_star": pj(self.d_star),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json(cls, d: dict) -> "MopRecord":
        def pj(p):
            return None if p is None else ExactPoly.from_json(p)

        def tj(t):
            return None if t is None else tuple(pj(p) for p in t)

        comp = d.get("completion")
        if comp is not None:
            comp = (comp[0], _completion_from_json(comp[1]))
        return cls(
            index=MultiIndex(tuple(d["index"])),
            N=int(d["N"]),
            P=pj(d["P"]),
            cauchy=tuple(LaurentTail.from_json(t) for t in d["cauchy"]),
            m_n=tuple(Fraction(m) for m in d["m_n"]),
            weights=tuple(SemiclassicalWeight.from_json(w) for w in d["weights"]),
            normal=bool(d.get("normal", True)),
            flags=tuple(d.get("flags", ())),
            completion=comp,
            partners=tj(d.get("partners")),
            tail_checked_to=None if d.get("tail_checked_to") is None else tuple(d["tail_checked_to"]),
            vanvleck=tj(d.get("vanvleck")),
            r_poly=pj(d.get("R")),
            r_star=pj(d.get("R_star")),
            e_poly=pj(d.get("E")),
            f_poly=pj(d.get("F")),
            d_polys=tj(d.get("D")),
            d_star=pj(d.get("D_star")),
            warnings=tuple(d.get("warnings", ())),
        )


def _completion_json(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, dict):
        return {str(k): _completion_json(x) for k, x in v.items()}
    return [_completion_json(x) for x in v]


def _completion_from_json(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, dict):
        return {int(k): _completion_from_json(x) for k, x in v.items()}
    return tuple(_completion_from_json(x) for x in v)


# ---------------------------------------------------------------------------
# Linear algebra


def bareiss_solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve a square rational system by fraction-free elimination.

    Rows are scaled to integers first.  Returns ``(solution, rank)``.  For a
    singular but consistent system the free unknowns are set to zero; an
    inconsistent system returns ``(None, rank)``.
    """
    n = len(rows)
    M = []
    for r, b in zip(rows, rhs):
        vals = [rat(v) for v in r] + [rat(b)]
        scale = 1
        for v in vals:
            scale = lcm(scale, v.denominator)
        M.append([int(v * scale) for v in vals])
    m = n + 1
    prev = 1
    pivcols = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, n) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        pr = M[row]
        pv = pr[col]
        for i in range(row + 1, n):
            ri = M[i]
            f = ri[col]
            if f == 0:
                for j in range(col + 1, m):
                    ri[j] = ri[j] * pv // prev
            else:
                for j in range(col + 1, m):
                    ri[j] = (ri[j] * pv - f * pr[j]) // prev
            ri[col] = 0
        prev = pv
        pivcols.append(col)
        row += 1
    rank = row
    if any(M[i][n] != 0 for i in range(rank, n)):
        return None, rank
    x = [Fraction(0)] * n
    for i in range(rank - 1, -1, -1):
        c = pivcols[i]
        s = Fraction(M[i][n])
        for j in pivcols[i + 1:]:
            s -= M[i][j] * x[j]
        x[c] = s / M[i][c]
    return x, rank


# ---------------------------------------------------------------------------


def _exact_moments(w: SemiclassicalWeight, count: int) -> tuple:
    if not w.backend.exact:
        raise InsufficientMoments(f"weight {w.name!r} has only numeric moments; exact solving is refused")
    return pearson_moments(w, count).values


def cauchy_tail(P: ExactPoly, moments: Sequence[Fraction], order: int) -> LaurentTail:
    """Tail of the Cauchy transform: -sum_k c_k z^{-k-1}, c_k = sum_m p_m u_{m+k}."""
    N = P.degree
    if len(moments) < N + order:
        raise InsufficientMoments(f"need {N + order} moments, have {len(moments)}")
    p = P.coeffs
    c = [-sum((p[m] * moments[m + k] for m in range(N + 1)), Fraction(0)) for k in range(order)]
    return LaurentTail(c, order=order)


def default_order(N: int, weights: Sequence[SemiclassicalWeight]) -> int:
    return 2 * N + max(w.sigma for w in weights) + GUARD


def _build(weights, index: MultiIndex, N: int, P: ExactPoly, moms, order: int, strict: bool, flags: list, completion=None):
    tails = tuple(cauchy_tail(P, u, order) for u in moms)
    m_n = tuple(-t.coefficient(ni) for t, ni in zip(tails, index.n))
    normal = not flags
    for i, m in enumerate(m_n):
        if m == 0:
            normal = False
            flags.append(f"m_n vanishes for weight {i + 1}")
    if not normal and strict:
        raise NonNormalIndex("; ".join(flags))
    return MopRecord(index, N, P, tails, m_n, tuple(weights), normal, tuple(flags), completion)


def solve_mop(w1: SemiclassicalWeight, w2: SemiclassicalWeight | None, n, strict: bool = True, order: int | None = None) -> MopRecord:
    """Solve the type II system for ``n`` (a MultiIndex or pair).

    Raises NonNormalIndex for a singular system or a vanishing m_n unless
    ``strict`` is false, in which case the record is returned with
    ``normal=False`` and explanatory flags.
    """
    index = n if isinstance(n, MultiIndex) else MultiIndex(tuple(n))
    weights = [w1] if w2 is None else [w1, w2]
    if len(weights) != len(index):
        raise InvalidParameters("multi-index length must match the number of weights")
    N = index.N
    if N < 1:
        raise InvalidParameters("N >= 1 required")
    order = default_order(N, weights) if order is None else order
    moms = [_exact_moments(w, N + max(order, ni + 1 + GUARD)) for w, ni in zip(weights, index.n)]
    rows, rhs = [], []
    for u, ni in zip(moms, index.n):
        for j in range(ni):
            rows.append([u[m + j] for m in range(N)])
            rhs.append(-u[N + j])
    x, rank = bareiss_solve(rows, rhs)
    flags = []
    if x is None:
        raise NonNormalIndex(f"inconsistent orthogonality system (rank {rank} < {N})")
    if rank < N:
        flags.append(f"singular system of rank {rank}; free coefficients set to zero")
    P = ExactPoly(list(x) + [Fraction(1)])
    return _build(weights, index, N, P, moms, order, strict, flags)


def solve_quasi(w: SemiclassicalWeight, N: int, n: int, rule=None, strict: bool = True, order: int | None = None) -> MopRecord:
    """A monic degree-N polynomial with n orthogonality conditions against w.

    For n < N a completion ``rule`` fixes the remaining freedom:

    * ``("pinned", {k: value, ...})`` prescribes the coefficients of x^k for
      n <= k <= N-1;
    * ``("combination", (d_1, ..., d_{N-n}))`` returns
      P_N + d_1 P_{N-1} + ... with monic orthogonal P_j.
    """
    if not 0 <= n <= N or N < 1:
        raise InvalidParameters("0 <= n <= N and N >= 1 required")
    order = default_order(N, [w]) if order is None else order
    u = _exact_moments(w, N + max(order, n + 1 + GUARD))
    index = MultiIndex((n,))
    if n == N or rule is None:
        if n != N:
            raise InvalidParameters("a completion rule is required when n < N")
        rows = [[u[m + j] for m in range(N)] for j in range(N)]
        x, rank = bareiss_solve(rows, [-u[N + j] for j in range(N)])
        if x is None or rank < N:
            raise NonNormalIndex(f"singular moment matrix at degree {N}")
        return _build([w], index, N, ExactPoly(list(x) + [Fraction(1)]), [u], order, strict, [])
    kind, data = rule
    if kind == "pinned":
        pins = {int(k): rat(v) for k, v in dict(data).items()}
        if set(pins) != set(range(n, N)):
            raise InvalidParameters(f"pinned rule must give the coefficients of x^{n}..x^{N - 1}")
        rows = [[u[m + j] for m in range(n)] for j in range(n)]
        rhs = [-u[N + j] - sum(pins[k] * u[k + j] for k in range(n, N)) for j in range(n)]
        x, rank = bareiss_solve(rows, rhs)
        if x is None or rank < n:
            raise NonNormalIndex(f"singular moment matrix at degree {n}")
        P = ExactPoly(list(x) + [pins[k] for k in range(n, N)] + [Fraction(1)])
        return _build([w], index, N, P, [u], order, strict, [], ("pinned", pins))
    if kind == "combination":
        ds = tuple(rat(d) for d in data)
        if len(ds) != N - n:
            raise InvalidParameters(f"combination rule needs {N - n} coefficients")
        P = solve_quasi(w, N, N, order=order).P
        for k, d in enumerate(ds, start=1):
            if d:
                P = P + d * solve_quasi(w, N - k, N - k, order=order).P
        return _build([w], index, N, P, [u], order, strict, [], ("combination", ds))
    raise InvalidParameters(f"unknown completion rule {kind!r}")


def check_independence(rec: MopRecord) -> bool:
    """True when the R polynomial of a two-weight record is not identically zero."""
    if not rec.multiple:
        raise NotApplicable("independence needs two weights")
    if rec.r_poly is None:
        raise NotApplicable("R has not been computed for this record")
    return not rec.r_poly.is_zero()
