"""``strat-crit`` command line: problem files in, canonical JSON reports out.

Exit codes: 0 success, 1 a requested verdict gave no conclusion (or a
corpus case failed), 2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from importlib import resources
from pathlib import Path

from . import __version__
from .conormal import (
    FunctionVanishesOnComponent,
    NotIsolated,
    conormal_ideal,
    cotangent_multiplicity,
    exceptional_fibre,
    is_w_homogeneous,
)
from .critical import (
    PointNotOnVariety,
    conormal_substitution_locus,
    containment_audit,
    sigma_alg_membership,
    sigma_C,
    sigma_C_membership,
    sigma_cnr,
    sigma_nash_membership,
    sigma_rdf,
    sigma_reg,
    sigma_stratified,
)
from .family import af_verdict, shared_line
from .geometry import MissingLinkData
from .ideal import (
    Cancelled,
    IdealHandle,
    LocallyClosedSet,
    ResourceLimitError,
    ideal_sum,
    limits_scope,
    local_multiplicity_at_origin,
    set_cache_dir,
    set_equal,
)
from .poly import format_poly, format_rat, parse_poly, rat
from .polar import (
    GenericityExhausted,
    NotIsolatedCritical,
    betti_isolated,
    pick_generic_line,
    relative_polar_curve,
)
from .problem import ProblemError, load_problem, parse_problem

EXIT_OK, EXIT_NO_CONCLUSION, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3
COMMANDS = ("critloc", "betti", "polar", "conormal", "family", "corpus")
SET_AVATARS = ("reg", "cnr", "rdf", "strat", "can", "C")
POINT_AVATARS = ("alg", "nash")
ALL_AVATARS = ("alg", "reg", "nash", "cnr", "can", "strat", "rdf", "C")


# ---------------------------------------------------------------- json shapes


def ideal_json(I: IdealHandle) -> list:
    return [format_poly(b) for b in I.basis()]


def set_json(S: LocallyClosedSet) -> dict:
    return {"closure": ideal_json(S.closure), "boundary": ideal_json(S.boundary)}


def point_json(pt) -> list:
    return [format_rat(rat(c)) for c in pt]


def line_json(L, ring) -> dict:
    return {
        "coefficients": [format_rat(c) for c in L.coefficients],
        "form": format_poly(L.form(ring)),
        "seed": L.seed,
        "retries": L.retries,
        "certificate": list(L.certificate),
    }


def parse_point(text: str) -> tuple:
    try:
        return tuple(rat(c) for c in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ProblemError("--point", f"bad point {text!r}") from None


def parse_k_range(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError:
        raise ProblemError("--k", f"bad range {text!r}") from None


def parse_limits(text: str) -> dict:
    out = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise ProblemError("--limits", f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        if k not in ("degree", "basis", "time"):
            raise ProblemError("--limits", f"unknown limit {k!r}")
        try:
            out[k] = float(v) if k == "time" else int(v)
        except ValueError:
            raise ProblemError("--limits", f"bad value for {k}") from None
    return out


# ---------------------------------------------------------------- commands


def cmd_critloc(problem, opts) -> tuple:
    X = problem.variety()
    f = problem.f
    which = opts.get("which") or list(ALL_AVATARS)
    unknown = [w for w in which if w not in ALL_AVATARS]
    if unknown:
        raise ProblemError("--which", f"unknown avatars {unknown}")
    points = list(problem.points)
    if opts.get("point"):
        points.append(opts["point"])
    need_strat = any(w in ("strat", "can", "C") for w in which)
    strat = problem.stratification() if need_strat else None
    nash_ok = X.is_hypersurface() or X.is_ambient()
    sets = {}
    for w in which:
        if w == "reg":
            sets[w] = sigma_reg(X, f)
        elif w == "cnr":
            sets[w] = sigma_cnr(X, f)
        elif w == "rdf":
            sets[w] = sigma_rdf(X, f)
        elif w in ("strat", "can"):
            sets[w] = sigma_stratified(strat, f)
        elif w == "C":
            sets[w] = sigma_C(strat, f)
    results = {"avatars": {w: set_json(S) for w, S in sorted(sets.items())}}
    table = []
    for pt in points:
        row = {"point": point_json(pt)}
        for w in which:
            if w == "alg":
                row[w] = sigma_alg_membership(X, f, pt)
            elif w == "nash":
                row[w] = sigma_nash_membership(X, f, pt) if nash_ok else None
            elif w == "C":
                row["C"] = sigma_C_membership(strat, f, pt, sets["C"])
                row["Cbar"] = sets["C"].contains_point(pt)
            else:
                row[w] = sets[w].contains_point(pt)
        table.append(row)
    results["points"] = table
    if len(which) >= 2:
        names = {"C": "Cbar", "can": "strat"}
        audit = containment_audit(X, f, strat, points, [names.get(w, w) for w in which])
        results["audit"] = {
            "status": audit.status,
            "checks": {c.relation: {"holds": c.holds, "strict": c.strict,
                                    "witnesses": [point_json(p) for p in c.witnesses]}
                       for c in audit.checks},
        }
    return results, [], EXIT_OK


def cmd_betti(problem, opts) -> tuple:
    strat = problem.stratification()
    f = problem.f
    ks = opts.get("k") or list(range(0, strat.dim))
    line = None
    through = [S for S in strat.visible_strata() if S.dim >= 1
               and all(g.constant_term() == 0 for g in S.closure.generators)]
    if through:
        line = pick_generic_line(strat.strata, f, seed=opts["seed"], max_retries=opts["max_retries"])
    out = {}
    for k in ks:
        rep = betti_isolated(strat, f, k, line)
        out[str(k)] = {
            "value": rep.value,
            "contributions": [{"stratum": n, "weight": w, "multiplicity": m}
                              for n, w, m in rep.contributions],
        }
    certs = [line_json(line, strat.ring)] if line else []
    return {"betti": out}, certs, EXIT_OK


def cmd_polar(problem, opts) -> tuple:
    strat = problem.stratification()
    f = problem.f
    line = pick_generic_line(strat.strata, f, seed=opts["seed"], max_retries=opts["max_retries"])
    L = line.form(strat.ring)
    origin = tuple(0 for _ in strat.ring)
    out = {}
    for S in strat:
        if S.dim < 1 or not S.visible or any(g.constant_term() for g in S.closure.generators):
            continue
        P = relative_polar_curve(S, f, line)
        a = local_multiplicity_at_origin(ideal_sum(P.ideal, IdealHandle(S.ring, [f])))
        b = local_multiplicity_at_origin(ideal_sum(P.ideal, IdealHandle(S.ring, [L])))
        cm = cotangent_multiplicity(conormal_ideal(S.closure, S.codim, S.name), f, origin)
        out[S.name] = {
            "polar_curve": ideal_json(P.ideal),
            "mult_f": int(a),
            "mult_L": int(b),
            "difference": int(a - b),
            "cotangent_multiplicity": cm,
            "agree": cm == a - b,
        }
    return {"strata": out}, [line_json(line, strat.ring)], EXIT_OK


def cmd_conormal(problem, opts) -> tuple:
    f = problem.f
    strat = problem.stratification() if problem.strata is not None else None
    if strat is None:
        X = problem.variety()
        pieces = [("X", X.ideal, X.codim)]
    else:
        pieces = [(S.name, S.closure, S.codim) for S in strat]
    at = opts.get("fibre_at")
    out = {}
    for name, closure, codim in pieces:
        C = conormal_ideal(closure, codim, name)
        entry = {
            "conormal": ideal_json(C.ideal),
            "w_homogeneous": is_w_homogeneous(C.ideal, C.cot),
            "cnr_locus": ideal_json(conormal_substitution_locus(C, f)),
        }
        if at is not None:
            try:
                entry["cotangent_multiplicity"] = cotangent_multiplicity(C, f, at)
            except NotIsolated as e:
                entry["cotangent_multiplicity"] = None
                entry["note"] = str(e)
            fib = exceptional_fibre(C, f, at)
            entry["fibre"] = {"point": point_json(fib.point), "ideal": ideal_json(fib.ideal),
                              "empty": fib.is_empty, "full": fib.is_full}
        out[name] = entry
    return {"pieces": out}, [], EXIT_OK


def cmd_family(problem, opts) -> tuple:
    P = problem.family_problem()
    line = shared_line(P, seed=opts["seed"], max_retries=opts["max_retries"])
    V = af_verdict(P, line)
    results = {
        "samples": [format_rat(a) for a in V.samples],
        "differences": {format_rat(a): d for a, d in V.differences.items()},
        "reconstructed": {format_rat(a): v for a, v in V.reconstructed.items()},
        "constant": V.constant,
        "case": V.case,
        "conclusion": V.conclusion,
        "af_holds": V.af_holds,
        "witnesses": V.witnesses,
        "notices": V.notices,
    }
    code = EXIT_OK if V.af_holds else EXIT_NO_CONCLUSION
    return results, [line_json(line, P.zring)], code


HANDLERS = {
    "critloc": cmd_critloc,
    "betti": cmd_betti,
    "polar": cmd_polar,
    "conormal": cmd_conormal,
    "family": cmd_family,
}


# ---------------------------------------------------------------- reports


def build_report(command, problem, opts, timings=False) -> tuple:
    """Run one command on a parsed problem; return ``(report dict, exit code)``."""
    limits = problem.limits_object()
    for k, name in (("degree", "max_degree"), ("basis", "max_basis")):
        if k in opts.get("limits", {}):
            limits = dataclasses.replace(limits, **{name: opts["limits"][k]})
    if "time" in opts.get("limits", {}):
        limits = limits.with_budget(opts["limits"]["time"])
    opts = dict(opts)
    opts.setdefault("seed", problem.seed)
    if opts["seed"] is None:
        opts["seed"] = problem.seed
    opts.setdefault("max_retries", 20)
    start = time.perf_counter()
    with limits_scope(limits):
        results, certs, code = HANDLERS[command](problem, opts)
    report = {
        "tool": "strat-crit",
        "version": __version__,
        "input_hash": problem.hash,
        "command": command,
        "results": results,
        "certificates": certs,
        "timings": {"total_seconds": round(time.perf_counter() - start, 3)} if timings else {},
        "resources": {"limits": {"degree": limits.max_degree, "basis": limits.max_basis}},
    }
    return report, code


def serialize(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def text_digest(report) -> str:
    """Flat ``path = value`` lines derived from the JSON report."""
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            if not obj:
                lines.append(f"{prefix} = {{}}")
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        elif isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
            for i, x in enumerate(obj):
                walk(f"{prefix}[{i}]", x)
        else:
            lines.append(f"{prefix} = {json.dumps(obj, ensure_ascii=False)}")

    walk("", report)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- corpus


def corpus_dir() -> Path:
    return Path(str(resources.files("stratcrit") / "corpus"))


def _matches(expected, actual, ring, path, diffs):
    if isinstance(expected, dict) and set(expected) == {"radical_equals"}:
        if not isinstance(actual, list):
            diffs.append({"path": path, "expected": expected, "actual": actual})
            return
        A = LocallyClosedSet.closed(IdealHandle(ring, [parse_poly(s, ring) for s in actual]))
        B = LocallyClosedSet.closed(IdealHandle(ring, [parse_poly(s, ring)
                                                       for s in expected["radical_equals"]]))
        if not set_equal(A, B):
            diffs.append({"path": path, "expected": expected, "actual": actual})
        return
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            diffs.append({"path": path, "expected": expected, "actual": actual})
            return
        for k, v in expected.items():
            if k not in actual:
                diffs.append({"path": f"{path}.{k}", "expected": v, "actual": "<missing>"})
            else:
                _matches(v, actual[k], ring, f"{path}.{k}", diffs)
        return
    if isinstance(expected, list) and isinstance(actual, list) and len(expected) == len(actual) \
            and any(isinstance(e, dict) for e in expected):
        for i, (e, a) in enumerate(zip(expected, actual)):
            _matches(e, a, ring, f"{path}[{i}]", diffs)
        return
    if expected != actual:
        diffs.append({"path": path, "expected": expected, "actual": actual})


def run_case(case) -> dict:
    problem = parse_problem(case["problem"])
    opts = dict(case.get("options", {}))
    if "point" in opts:
        opts["point"] = parse_point(opts["point"])
    if "fibre_at" in opts:
        opts["fibre_at"] = parse_point(opts["fibre_at"])
    if "k" in opts:
        opts["k"] = parse_k_range(str(opts["k"]))
    opts.setdefault("seed", None)
    try:
        report, code = build_report(case["command"], problem, opts)
    except Exception as e:  # a corpus case must report, not crash the run
        return {"name": case["name"], "passed": False,
                "diffs": [{"path": "$", "error": f"{type(e).__name__}: {e}"}]}
    diffs = []
    _matches(case.get("expect", {}), report["results"], problem.work_ring, "results", diffs)
    if "exit_code" in case and case["exit_code"] != code:
        diffs.append({"path": "exit_code", "expected": case["exit_code"], "actual": code})
    return {"name": case["name"], "passed": not diffs, "diffs": diffs}


def cmd_corpus(directory=None) -> tuple:
    directory = Path(directory) if directory else corpus_dir()
    files = sorted(directory.glob("*.json"))
    if not files:
        raise ProblemError("corpus", f"no cases in {directory}")
    cases = []
    for fp in files:
        with open(fp, encoding="utf-8") as fh:
            case = json.load(fh)
        case.setdefault("name", fp.stem)
        cases.append(run_case(case))
    passed = sum(c["passed"] for c in cases)
    results = {"cases": cases, "passed": passed, "failed": len(cases) - passed}
    report = {
        "tool": "strat-crit",
        "version": __version__,
        "input_hash": None,
        "command": "corpus",
        "results": results,
        "certificates": [],
        "timings": {},
        "resources": {},
    }
    return report, EXIT_OK if passed == len(cases) else EXIT_NO_CONCLUSION


# ---------------------------------------------------------------- entry point


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strat-crit",
                                 description="Exact critical loci and Milnor-fibre numbers on singular spaces.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", help="problem file (JSON)")
    ap.add_argument("--which", help="comma-separated avatars: " + ",".join(ALL_AVATARS) + " or all")
    ap.add_argument("--k", help="degree or range lo..hi")
    ap.add_argument("--point", help="query point, comma separated rationals")
    ap.add_argument("--fibre-at", dest="fibre_at", help="point for conormal fibres")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--max-retries", dest="max_retries", type=int, default=20)
    ap.add_argument("--cache-dir", dest="cache_dir")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--limits", default="", help="e.g. degree=60,basis=5000,time=600")
    ap.add_argument("--corpus-dir", dest="corpus_dir", help="run this corpus instead of the bundled one")
    ap.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-determinism)")
    return ap


def _error_report(kind, message, code, detail=None):
    rep = {"tool": "strat-crit", "version": __version__,
           "error": {"kind": kind, "message": message, "exit_code": code}}
    if detail:
        rep["error"]["detail"] = detail
    return rep


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    cache = os.environ.get("STRAT_CRIT_CACHE") or args.cache_dir
    if cache:
        os.makedirs(cache, exist_ok=True)
        set_cache_dir(cache)
    out = sys.stdout
    try:
        if args.command == "corpus":
            report, code = cmd_corpus(args.corpus_dir)
        else:
            if not args.input:
                raise ProblemError("--input", "required for this command")
            problem = load_problem(args.input)
            opts = {"seed": args.seed, "max_retries": args.max_retries,
                    "limits": parse_limits(args.limits)}
            if args.which and args.which != "all":
                opts["which"] = [w.strip() for w in args.which.split(",") if w.strip()]
            if args.k:
                opts["k"] = parse_k_range(args.k)
            if args.point:
                opts["point"] = parse_point(args.point)
            if args.fibre_at:
                opts["fibre_at"] = parse_point(args.fibre_at)
            report, code = build_report(args.command, problem, opts, timings=args.timings)
    except ProblemError as e:
        report, code = _error_report("input", str(e), EXIT_INPUT, e.as_dict()), EXIT_INPUT
    except (PointNotOnVariety, MissingLinkData, FunctionVanishesOnComponent,
            NotIsolatedCritical, NotIsolated) as e:
        report, code = _error_report("precondition", str(e), EXIT_INPUT), EXIT_INPUT
    except (ResourceLimitError, Cancelled, GenericityExhausted) as e:
        report, code = _error_report("resource", str(e), EXIT_RESOURCE), EXIT_RESOURCE
    except ValueError as e:
        report, code = _error_report("input", str(e), EXIT_INPUT), EXIT_INPUT
    if "error" in report:
        print(report["error"]["message"], file=sys.stderr)
    out.write(text_digest(report) if args.format == "text" else serialize(report))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
