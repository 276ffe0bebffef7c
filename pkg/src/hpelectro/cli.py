"""Command line entry point: ``hpelectro <subcommand> ...``.

Exit codes: 0 success, 1 invalid input, 2 non-normal index, 3 identity
violation, 4 precision or quadrature failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .electro import histogram_csv, histogram_export, scalar_field, scalar_residual, vector_fields, vector_residual
from .exactpoly import ExactPoly, InexactDivision, PrecisionExhausted, ToolkitError
from .mop import MopRecord, MultiIndex, NonNormalIndex, NotApplicable, solve_mop, solve_quasi
from .partner import AsymmetryDetected, TailNotVanishing, complete_record, verify_record
from .weights import FAMILIES, InvalidParameters, QuadratureNotConverged, RecurrenceSingular, SeedMomentsMissing, family
from .zeros import AmbiguousAtPrecision, PrecisionCapExceeded, find_zeros, interlacing_report

__all__ = ["RunConfig", "main", "exit_code_for"]

PARAM_FLAGS = ("c", "c1", "c2", "alpha", "alpha1", "alpha2", "beta", "beta1", "beta2", "gamma", "a")
OUT_ENV = "HPELECTRO_OUTPUT_DIR"


class UsageError(Exception):
    pass


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, NonNormalIndex):
        return 2
    if isinstance(exc, (TailNotVanishing, InexactDivision, AsymmetryDetected, RecurrenceSingular)):
        return 3
    if isinstance(exc, (PrecisionCapExceeded, PrecisionExhausted, QuadratureNotConverged, AmbiguousAtPrecision)):
        return 4
    return 1


@dataclass
class RunConfig:
    family: str = ""
    params: dict = field(default_factory=dict)
    index: list = field(default_factory=list)
    degree: int | None = None
    combination: list | None = None
    precision: int = 256
    guard: int = 8
    out: str = "."
    allow_nonnormal: bool = False

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**known)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser, family_required: bool = False) -> None:
    p.add_argument("--family", help="catalog family id (see `families`)")
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", help="rational parameter, e.g. 1/2")
    p.add_argument("--n", help="multi-index, e.g. 5,5 (a single number for one weight)")
    p.add_argument("--degree", type=int, help="degree N for a single-weight quasi-orthogonal solve")
    p.add_argument("--combination", help="completion d_1,d_2,... for P_N + d_1 P_(N-1) + ...")
    p.add_argument("--precision", type=int, help="bits for numeric stages (default 256)")
    p.add_argument("--guard", type=int, help="extra Cauchy tail coefficients (default 8)")
    p.add_argument("--config", help="JSON config file; explicit flags override it")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    p.add_argument("--allow-nonnormal", action="store_true", help="keep non-normal records instead of failing")


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hpelectro", description="Hermite-Pade polynomials, electrostatic partners and equilibrium checks")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.add_parser("families", help="list catalog families")
    p = sub.add_parser("solve", help="solve, compute partners and write mop_record.json")
    _add_common(p)
    p = sub.add_parser("verify", help="re-check every identity of a record")
    p.add_argument("record")
    p = sub.add_parser("zeros", help="zeros of P and the partners")
    _add_common(p)
    p.add_argument("--record")
    p.add_argument("--interval", help="lo,hi for an interlacing report of P against S1")
    p = sub.add_parser("equilibrium", help="scalar or vector criticality residuals")
    _add_common(p)
    p.add_argument("--record")
    p.add_argument("--vector", action="store_true")
    p = sub.add_parser("export", help="histogram of zeros of P as CSV")
    _add_common(p)
    p.add_argument("--record")
    p.add_argument("--histogram", action="store_true")
    p.add_argument("--scale", default="1")
    p.add_argument("--bins", type=int, default=20)
    p = sub.add_parser("sweep", help="solve and verify many indices")
    _add_common(p)
    p.add_argument("--indices", help="semicolon separated list, e.g. 1,1;2,2")
    p.add_argument("--diagonal", type=int, help="all (k,k) for k = 1..D")
    p.add_argument("--jobs", type=int, default=1)
    return ap


def _resolve(args) -> RunConfig:
    cfg = RunConfig(out=os.environ.get(OUT_ENV, "."))
    if getattr(args, "config", None):
        try:
            cfg = RunConfig.from_json(json.loads(Path(args.config).read_text()))
        except (OSError, ValueError, TypeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    if getattr(args, "family", None):
        cfg.family = args.family
    for name in PARAM_FLAGS:
        v = getattr(args, name, None)
        if v is not None:
            cfg.params[name] = v
    if getattr(args, "n", None):
        cfg.index = list(MultiIndex.parse(args.n).n)
    for name in ("degree", "precision", "guard", "out"):
        v = getattr(args, name, None)
        if v is not None:
            setattr(cfg, name, v)
    if getattr(args, "combination", None):
        cfg.combination = [s for s in args.combination.split(",") if s]
    if getattr(args, "allow_nonnormal", False):
        cfg.allow_nonnormal = True
    return cfg


def _params(cfg: RunConfig) -> dict:
    out = {}
    for k, v in cfg.params.items():
        if isinstance(v, float):
            raise InvalidParameters(f"parameter {k} must be rational text such as 1/2, not a float")
        try:
            out[k] = Fraction(str(v))
        except ValueError:
            raise InvalidParameters(f"parameter {k}={v!r} is not rational") from None
    return out


def solve_config(cfg: RunConfig, upto: str = "all") -> MopRecord:
    if not cfg.family:
        raise InvalidParameters("--family is required")
    ws = family(cfg.family, **_params(cfg))
    if not cfg.index:
        raise InvalidParameters("--n is required")
    strict = not cfg.allow_nonnormal
    if len(ws) == 2:
        N = sum(cfg.index)
        rec = solve_mop(ws[0], ws[1], MultiIndex(tuple(cfg.index)), strict=strict, order=2 * N + max(w.sigma for w in ws) + cfg.guard)
    else:
        if len(cfg.index) != 1:
            raise InvalidParameters("single-weight families take one index")
        n = cfg.index[0]
        N = cfg.degree if cfg.degree is not None else n
        rule = ("combination", tuple(Fraction(v) for v in cfg.combination)) if cfg.combination else None
        rec = solve_quasi(ws[0], N, n, rule, strict=strict, order=2 * N + ws[0].sigma + cfg.guard)
    return complete_record(rec, upto)


def _record_doc(rec: MopRecord, cfg: RunConfig | None) -> dict:
    doc = rec.to_json()
    doc["config"] = cfg.to_json() if cfg else None
    doc["version"] = __version__
    return doc


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _load_record(path: str) -> MopRecord:
    try:
        return MopRecord.from_json(json.loads(Path(path).read_text()))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read record {path}: {exc}") from None


def _record_from(args, cfg: RunConfig, upto: str = "all") -> MopRecord:
    return _load_record(args.record) if getattr(args, "record", None) else solve_config(cfg, upto)


def _envelope(cfg: RunConfig, payload: dict) -> dict:
    return {"version": __version__, "config": cfg.to_json(), **payload}


def cmd_families(args) -> int:
    import inspect

    for name, fn in sorted(FAMILIES.items()):
        sig = ", ".join(inspect.signature(fn).parameters)
        print(f"{name}({sig})")
    return 0


def cmd_solve(args) -> int:
    cfg = _resolve(args)
    rec = solve_config(cfg)
    path = Path(cfg.out) / "mop_record.json"
    _write(path, json.dumps(_record_doc(rec, cfg), indent=1))
    print(f"wrote {path}")
    print(f"P = {rec.P}")
    for i, S in enumerate(rec.partners or (), start=1):
        print(f"S{i} ~ {S.primitive() if not S.is_zero() else S}")
    if rec.r_poly is not None:
        print(f"R ~ {rec.r_poly.monic() if not rec.r_poly.is_zero() else 0}")
    for wmsg in rec.warnings + rec.flags:
        print(f"warning: {wmsg}")
    return 0


def cmd_verify(args) -> int:
    rec = _load_record(args.record)
    results = verify_record(rec)
    first = None
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok and first is None:
            first = name
    if first is not None:
        print(f"first failing identity: {first}")
        return 3
    return 0


def cmd_zeros(args) -> int:
    cfg = _resolve(args)
    rec = _record_from(args, cfg, "partners")
    out = Path(cfg.out)
    polys = [("P", rec.P)] + [(f"S{i}", S) for i, S in enumerate(rec.partners or (), start=1) if S.degree >= 1]
    summary = {}
    sets = {}
    for name, poly in polys:
        z = find_zeros(poly, cfg.precision, source=name)
        sets[name] = z
        _write(out / f"zeros_{name}.csv", z.to_csv())
        reals = z.real_points()
        summary[name] = {
            "degree": poly.degree,
            "precision": z.precision,
            "real": len(reals),
            "nonreal": z.nonreal_count(),
            "largest_real": None if not reals else z.ctx.nstr(reals[-1], 20),
            "smallest_real": None if not reals else z.ctx.nstr(reals[0], 20),
        }
        print(f"{name}: {len(reals)} real, {z.nonreal_count()} non-real" + (f", largest real {z.ctx.nstr(reals[-1], 12)}" if reals else ""))
    payload = {"zeros": {k: v.to_json() for k, v in sets.items()}, "summary": summary}
    if getattr(args, "interval", None) and "S1" in sets:
        lo, hi = (Fraction(s) for s in args.interval.split(","))
        rep = interlacing_report(sets["P"], sets["S1"], (lo, hi))
        payload["interlacing"] = {"interval": [str(lo), str(hi)], "count_P": rep.count_inside_a, "count_S1": rep.count_inside_b,
                                  "interlaced_pairs": rep.interlaced_pairs, "violations": list(rep.violations)}
        print(f"interlacing on ({lo}, {hi}): {rep.interlaced_pairs} pairs, violations {list(rep.violations)}")
    _write(out / "zeros.json", json.dumps(_envelope(cfg, payload), indent=1))
    return 0


def cmd_equilibrium(args) -> int:
    cfg = _resolve(args)
    rec = _record_from(args, cfg, "r" if args.vector else "partners")
    if rec.partners is None:
        raise InvalidParameters("record has no partners")
    zP = find_zeros(rec.P, cfg.precision)
    reports = []
    if args.vector:
        if not rec.multiple or rec.r_poly is None or rec.r_poly.is_zero():
            raise NotApplicable("the vector model needs two weights and R not identically zero")
        zS = find_zeros(rec.partners[0], cfg.precision)
        w1, w2 = rec.weights
        reports = list(vector_residual(zP, zS, Fraction(-1, 2), vector_fields(w1, w2, rec.r_poly, rec.r_star)))
    else:
        w = rec.weights[0]
        reports = [scalar_residual(zP, scalar_field(rec.partners[0], w.A, w.B))]
    for r in reports:
        print(f"{r.component}: max_abs = {r.to_json()['max_abs']} at {r.precision} bits"
              + (f", excluded {list(r.excluded)}" if r.excluded else ""))
    _write(Path(cfg.out) / "equilibrium.json", json.dumps(_envelope(cfg, {"reports": [r.to_json() for r in reports]}), indent=1))
    return 0


def cmd_export(args) -> int:
    cfg = _resolve(args)
    rec = _record_from(args, cfg, "partners")
    z = find_zeros(rec.P, cfg.precision)
    hist = histogram_export(z, Fraction(args.scale), args.bins)
    path = Path(cfg.out) / "histogram.csv"
    _write(path, histogram_csv(hist))
    _write(Path(cfg.out) / "histogram.json", json.dumps(_envelope(cfg, {k: v for k, v in hist.items() if k != "rows"}), indent=1))
    print(f"wrote {path}: count {hist['count']}, min {hist['min']:.6g}, max {hist['max']:.6g}")
    return 0


def _sweep_one(cfg_dict: dict) -> dict:
    cfg = RunConfig.from_json(cfg_dict)
    try:
        rec = solve_config(cfg)
        bad = [name for name, ok, _ in verify_record(rec) if not ok]
        return {"index": cfg.index, "ok": not bad, "failed": bad}
    except ToolkitError as exc:
        return {"index": cfg.index, "ok": False, "error": f"{type(exc).__name__}: {exc}", "code": exit_code_for(exc)}


def cmd_sweep(args) -> int:
    cfg = _resolve(args)
    if args.diagonal:
        indices = [[k, k] for k in range(1, args.diagonal + 1)]
    elif args.indices:
        indices = [list(MultiIndex.parse(s).n) for s in args.indices.split(";") if s]
    else:
        raise InvalidParameters("give --indices or --diagonal")
    jobs = []
    for idx in indices:
        c = RunConfig.from_json(cfg.to_json())
        c.index = idx
        jobs.append(c.to_json())
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]
    for r in results:
        print(f"{'PASS' if r['ok'] else 'FAIL'} {tuple(r['index'])} {r.get('error', '') or ' '.join(r.get('failed', []))}")
    _write(Path(cfg.out) / "sweep.json", json.dumps(_envelope(cfg, {"results": results}), indent=1))
    codes = [r.get("code", 3) for r in results if not r["ok"]]
    return min(codes) if codes else 0


COMMANDS = {
    "families": cmd_families,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "zeros": cmd_zeros,
    "equilibrium": cmd_equilibrium,
    "export": cmd_export,
    "sweep": cmd_sweep,
}


def _glue_values(argv: list) -> list:
    # Negative fractions like -1/2 would otherwise be taken for flags.
    flags = {f"--{n}" for n in PARAM_FLAGS} | {"--scale", "--combination", "--interval", "--n", "--indices"}
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in flags and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        if not args.cmd:
            parser.print_help()
            return 1
        return COMMANDS[args.cmd](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ToolkitError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc) if isinstance(exc, ToolkitError) else 1


if __name__ == "__main__":
    sys.exit(main())
