"""Scenario runner: ``limcm run`` and ``limcm validate``.

A scenario is a JSON document naming a ring, some ideals and modules, and a
list of tasks.  Each task is executed in isolation (its own ring objects and
caches) so that reports do not depend on the order or the number of workers.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import signal
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .algebra.groebner import ResourceLimitExceeded, spair_budget
from .algebra.hilbert import Infinite
from .algebra.ideal import Ideal
from .algebra.parsing import PolynomialSyntaxError
from .algebra.ring import AlgebraError, GradedRing, Polynomial
from .asymptotics import (FrobeniusFamily, LengthSeries, combined_verdict, limcm_verdict,
                          sop_independence, strong_verdict)
from .closure import (DEFAULT_LEVELS, AxiomSevenInstance, ClosureQuery, DietzInstance,
                      closure_diagnostic, colon_capture_suite, dietz_suite,
                      monomial_position_check, tight_closure_check)
from .complexes import koszul_stats
from .frobenius import hilbert_kunz, nu_pushforward_bracket
from .modules import GradedModule
from .serre import SerrePair, pos_limit_series, serre_chi, tor_bound_check

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RESOURCE = 2


class InputError(Exception):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


# serialization ----------------------------------------------------------------
def encode(obj):
    """Lossless JSON form: integers as decimal strings, rationals as "num/den"."""
    if obj is None or isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        if obj != obj:
            return "nan"
        if obj in (float("inf"), float("-inf")):
            return "inf" if obj > 0 else "-inf"
        return round(obj, 6)
    if isinstance(obj, Infinite):
        return "INFINITE"
    if isinstance(obj, str):
        return obj
    if isinstance(obj, Polynomial):
        return str(obj)
    if isinstance(obj, LengthSeries):
        return {str(n): encode(v) for n, v in obj.items()}
    if isinstance(obj, dict):
        return {_key(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return encode(obj.as_dict())
    return str(obj)


def _key(k) -> str:
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


# scenario context ------------------------------------------------------------------
class Context:
    """Ring, named ideals and modules built from the scenario data."""

    def __init__(self, data: dict):
        if not isinstance(data, dict):
            raise InputError("scenario must be a JSON object")
        for key in ("p", "ring", "tasks"):
            if key not in data:
                raise InputError(f"missing top-level field {key!r}")
        spec = data["ring"]
        if not isinstance(spec, dict) or "vars" not in spec:
            raise InputError("ring needs a 'vars' list")
        try:
            self.ring = GradedRing(int(data["p"]), spec["vars"], spec.get("weights"),
                                   spec.get("relations", []), spec.get("multigrading"),
                                   domain=bool(spec.get("domain", False)), name=spec.get("name"))
        except (TypeError, ValueError) as exc:
            raise _wrap(exc)
        self.ideals: dict = {}
        self.modules: dict = {}
        for name, d in (data.get("define") or {}).items():
            if not isinstance(d, dict):
                raise InputError(f"definition {name!r} must be an object")
            if "ideal" in d:
                self.ideals[name] = self.polys(d["ideal"])
            elif "module" in d:
                m = d["module"]
                if "matrix" not in m:
                    raise InputError(f"module {name!r} needs a matrix")
                self.modules[name] = GradedModule.from_matrix(self.ring, m["matrix"], m.get("twists"))
            else:
                raise InputError(f"definition {name!r} must be an ideal or a module")

    def polys(self, lst, ring: GradedRing | None = None) -> list:
        ring = ring or self.ring
        if isinstance(lst, str):
            if lst in self.ideals:
                return list(self.ideals[lst])
            raise InputError(f"unknown ideal {lst!r}")
        if not isinstance(lst, list):
            raise InputError(f"expected a list of polynomials, got {lst!r}")
        return [ring.coerce(str(f)) for f in lst]

    def poly(self, f, ring: GradedRing | None = None) -> Polynomial:
        return (ring or self.ring).coerce(str(f))

    def module(self, ref) -> GradedModule:
        if ref is None or ref == "R":
            return GradedModule.cyclic(self.ring, [])
        if isinstance(ref, str) and ref.startswith("R/"):
            return GradedModule.cyclic(self.ring, self.polys(ref[2:]))
        if ref in self.modules:
            return self.modules[ref]
        raise InputError(f"unknown module {ref!r}")

    def family(self, spec) -> FrobeniusFamily:
        spec = spec or {}
        route = spec.get("route", "bracket")
        if route not in ("bracket", "explicit"):
            raise InputError(f"unknown route {route!r}")
        return FrobeniusFamily(self.module(spec.get("module", "R")), route=route)


def _wrap(exc: Exception) -> InputError:
    if isinstance(exc, InputError):
        return exc
    return InputError(str(exc))


def _levels(task) -> list:
    lv = task.get("levels", list(DEFAULT_LEVELS))
    if not isinstance(lv, list) or len(lv) < 2 or not all(isinstance(n, int) and n >= 0 for n in lv):
        raise InputError("levels must be a list of at least two nonnegative integers")
    return lv


def _require(task, *names):
    for n in names:
        if n not in task:
            raise InputError(f"task {task.get('id')!r} ({task.get('kind')}) needs field {n!r}")


def _status_of(flag) -> str:
    if flag is None:
        return "inconclusive"
    return "pass" if flag else "fail"


# task handlers: each returns (tables, verdicts, status) ---------------------------------
def task_koszul(ctx: Context, t: dict):
    _require(t, "x")
    M = ctx.module(t.get("module"))
    st = koszul_stats(ctx.polys(t["x"]), M)
    regular = st.h[1] == 0 if len(st.h) > 1 else True
    return st.as_dict(), {"h1_zero": regular}, "pass"


def task_limcm(ctx: Context, t: dict):
    _require(t, "x")
    fam = ctx.family(t.get("family"))
    v = limcm_verdict(ctx.ring, fam, ctx.polys(t["x"]), _levels(t), t.get("alpha", "NU"))
    d = v.as_dict()
    verdicts = {"limCM": v.limCM, "weaklyLimCM": v.weaklyLimCM}
    status = "pass" if v.limCM else ("inconclusive" if v.status == "inconclusive" else "fail")
    return {"diagnostics": d["diagnostics"], "tables": d["tables"]}, verdicts, status


def task_strong(ctx: Context, t: dict):
    fam = ctx.family(t.get("family"))
    lv = _levels(t)
    if "x" in t:
        v = combined_verdict(ctx.ring, fam, ctx.polys(t["x"]), lv, t.get("alpha", "NU"))
        verdicts = {"stronglyLimCM": v.stronglyLimCM, "limCM": v.limCM,
                    "strong_implies_lim": v.tables.get("strong_implies_lim")}
    else:
        v = strong_verdict(ctx.ring, fam, lv)
        verdicts = {"stronglyLimCM": v.stronglyLimCM}
    d = v.as_dict()
    return {"diagnostics": d["diagnostics"], "tables": d["tables"], "notes": d["notes"]}, verdicts, \
        _status_of(v.stronglyLimCM)


def task_hilbert_kunz(ctx: Context, t: dict):
    M = ctx.module(t.get("module"))
    I = Ideal(ctx.ring, ctx.polys(t["ideal"])) if "ideal" in t else None
    n_max = int(t.get("n_max", 3))
    series, info = hilbert_kunz(M, I, n_max)
    tables = {"series": series, "estimate": info["gamma"], "previous_estimate": info["previous"],
              "dim": info["dim"]}
    verdicts = {}
    if I is None:
        # ν(F^n_* M) computed on the explicit pushforward for small n, against the bracket value
        nu_check = {}
        for n in range(min(n_max, int(t.get("explicit_n_max", 1))) + 1):
            explicit = FrobeniusFamily(M, route="explicit").nu(n)
            nu_check[n] = {"explicit": explicit, "bracket": nu_pushforward_bracket(M, n)}
        tables["nu_routes"] = nu_check
        verdicts["nu_routes_agree"] = all(v["explicit"] == v["bracket"] for v in nu_check.values())
    return tables, verdicts, _status_of(verdicts.get("nu_routes_agree", True))


def _closure_inputs(ctx: Context, t: dict):
    if "B" in t:
        B = ctx.module(t["B"])
        A = [B.free.vector(ctx.polys(v)) for v in t.get("A", [])]
        u = B.free.vector(ctx.polys(t["u"]))
        return B, A, u
    _require(t, "ideal", "u")
    B = GradedModule.cyclic(ctx.ring, [])
    return B, [B.free.vector([g]) for g in ctx.polys(t["ideal"])], B.free.vector([ctx.poly(t["u"])])


def task_closure(ctx: Context, t: dict):
    _require(t, "u")
    B, A, u = _closure_inputs(ctx, t)
    q = ClosureQuery(B, A, u, ctx.family(t.get("family")), t.get("alpha", "NU"), _levels(t),
                     t.get("truncations"))
    v = closure_diagnostic(q)
    tables = v.as_dict()
    if "colon" in t:
        # an accompanying exact colon computation, e.g. the colon that the closure is meant to capture
        from .modules import ideal_colon
        spec = t["colon"]
        if not isinstance(spec, dict) or "ideal" not in spec or "by" not in spec:
            raise InputError("colon needs 'ideal' and 'by'")
        col = ideal_colon(Ideal(ctx.ring, ctx.polys(spec["ideal"])), ctx.polys(spec["by"]))
        tables["colon"] = [str(g) for g in col.gens]
    status = "inconclusive" if v.verdict == "INCONCLUSIVE" else "pass"
    return tables, {"verdict": v.verdict}, status


def task_tight_closure(ctx: Context, t: dict):
    _require(t, "u", "ideal", "c")
    ring = ctx.ring
    if t.get("modulo"):
        ring = ring.quotient(ctx.polys(t["modulo"]))
    v = tight_closure_check(ring, ctx.poly(t["u"], ring), ctx.polys(t["ideal"], ring), ctx.poly(t["c"], ring),
                            int(t.get("n_max", 1)), bool(t.get("test_element", True)))
    return v.as_dict(), {"verdict": v.verdict}, "pass"


def task_colon_capture(ctx: Context, t: dict):
    _require(t, "x")
    r = colon_capture_suite(ctx.ring, ctx.family(t.get("family")), ctx.polys(t["x"]), t.get("a"), t.get("b"),
                            _levels(t), t.get("alpha", "NU"), t.get("truncations"))
    return r, {"status": r["status"], "verdicts": r["verdicts"]}, r["status"].lower()


def task_monomial_position(ctx: Context, t: dict):
    _require(t, "x", "t")
    r = monomial_position_check(ctx.ring, ctx.family(t.get("family")), ctx.polys(t["x"]), int(t["t"]),
                                _levels(t), t.get("alpha", "NU"), t.get("truncations"))
    return r, {"verdict": r["verdict"]}, r["status"].lower()


def _dietz_instance(ctx: Context, d: dict) -> DietzInstance:
    B = ctx.module(d.get("B"))
    vec = (lambda v: B.free.vector(ctx.polys(v))) if B.ngens > 1 else (lambda f: B.free.vector([ctx.poly(f)]))
    _require(d, "name", "A")
    A = [vec(v) for v in d["A"]]
    A2 = [vec(v) for v in d["A2"]] if "A2" in d else None
    target = images = None
    if "multiply" in d:
        f = ctx.poly(d["multiply"])
        target = B.shift(-f.degree())
        images = [target.free.vector([f if j == i else 0 for j in range(B.ngens)]) for i in range(B.ngens)]
    return DietzInstance(d["name"], B, A, A2, target, images)


def task_dietz(ctx: Context, t: dict):
    insts = [_dietz_instance(ctx, d) for d in t.get("instances", [])]
    seven = []
    for d in t.get("seven", []):
        _require(d, "name", "J", "v", "x_next")
        seven.append(AxiomSevenInstance(d["name"], ctx.ring, ctx.polys(d["J"]), ctx.polys(d["v"]),
                                        ctx.poly(d["x_next"]), int(d.get("max_degree", 2)),
                                        d.get("truncations")))
    r = dietz_suite(ctx.ring, ctx.family(t.get("family")), insts, seven, _levels(t))
    ax = r["axioms"]
    ok = all(v is not False for v in ax.values())
    return r, {"axioms": ax}, "pass" if ok else "fail"


def _pair(ctx: Context, t: dict) -> SerrePair:
    _require(t, "P", "Q")
    return SerrePair(ctx.ring, Ideal(ctx.ring, ctx.polys(t["P"])), Ideal(ctx.ring, ctx.polys(t["Q"])))


def task_serre_chi(ctx: Context, t: dict):
    pair = _pair(ctx, t)
    r = serre_chi(pair)
    return {"pair": pair.describe(), **r.as_dict()}, {"chi": r.chi}, "pass"


def task_pos_limit(ctx: Context, t: dict):
    pair = _pair(ctx, t)
    r = pos_limit_series(pair, int(t.get("n_max", 2)), int(t.get("n_min", 0)))
    f = r.flags
    ok = f["gap_nonincreasing"] and (f["all_terms_at_least_1"] is not False) and \
        f.get("normalized_chi_zero", True)
    return {"pair": pair.describe(), **r.as_dict()}, {"chi": r.chi, **{k: v for k, v in f.items()
                                                                      if isinstance(v, bool)}}, \
        "pass" if ok else "fail"


def task_tor_bound(ctx: Context, t: dict):
    _require(t, "x", "y")
    pair = _pair(ctx, t)
    r = tor_bound_check(pair, ctx.polys(t["x"]), ctx.polys(t["y"]), int(t.get("n", 1)), t.get("i_values"))
    return r, {"status": r["status"]}, r["status"].lower()


def task_sop_independence(ctx: Context, t: dict):
    _require(t, "x", "y")
    r = sop_independence(ctx.ring, ctx.polys(t["x"]), ctx.polys(t["y"]), ctx.family(t.get("family")), _levels(t))
    return r, {"status": r["status"]}, r["status"].lower()


HANDLERS = {
    "koszul": task_koszul,
    "limcm": task_limcm,
    "strong": task_strong,
    "hilbert-kunz": task_hilbert_kunz,
    "closure": task_closure,
    "tight-closure": task_tight_closure,
    "colon-capture": task_colon_capture,
    "monomial-position": task_monomial_position,
    "dietz": task_dietz,
    "serre-chi": task_serre_chi,
    "pos-limit": task_pos_limit,
    "tor-bound": task_tor_bound,
    "sop-independence": task_sop_independence,
}


# validation --------------------------------------------------------------------
def locate(text: str, needle: str, offset: int = 0):
    """1-based (line, column) of ``needle`` (as a JSON string body) in the source text."""
    if text is None:
        return None, None
    body = json.dumps(needle)[1:-1]
    idx = text.find('"' + body + '"')
    if idx < 0:
        return None, None
    idx += 1 + offset
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def _located(exc: Exception, text: str | None, task: dict | None = None) -> InputError:
    if isinstance(exc, PolynomialSyntaxError):
        line, col = locate(text, exc.text, exc.pos)
        return InputError(str(exc), line, col)
    if isinstance(exc, InputError) and exc.line is not None:
        return exc
    line = col = None
    if task is not None and isinstance(task.get("id"), str):
        line, col = locate(text, task["id"])
    return InputError(str(exc), line, col)


def parse_scenario(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, exc.lineno, exc.colno)


def _check_task_fields(ctx: Context, t: dict):
    """Parse every polynomial-valued field so syntax errors surface before running."""
    for key in ("x", "y", "ideal", "P", "Q", "modulo"):
        if key in t:
            ctx.polys(t[key])
    if isinstance(t.get("colon"), dict):
        for key in ("ideal", "by"):
            ctx.polys(t["colon"].get(key, []))
    for key in ("u", "c"):
        if key in t and not isinstance(t[key], list):
            ctx.poly(t[key])
    for key in ("family",):
        if key in t:
            ctx.family(t[key])
    for d in t.get("instances", []) + t.get("seven", []):
        for key in ("A", "A2", "J", "v"):
            for f in d.get(key, []):
                if isinstance(f, list):
                    ctx.polys(f)
                else:
                    ctx.poly(f)


def validate_scenario(data: dict, text: str | None = None) -> Context:
    try:
        ctx = Context(data)
    except (InputError, AlgebraError, TypeError, ValueError) as exc:
        raise _located(exc, text)
    tasks = data["tasks"]
    if not isinstance(tasks, list):
        raise InputError("tasks must be a list")
    seen = set()
    for t in tasks:
        if not isinstance(t, dict) or "id" not in t or "kind" not in t:
            raise InputError("every task needs 'id' and 'kind'")
        if t["id"] in seen:
            raise _located(InputError(f"duplicate task id {t['id']!r}"), text, t)
        seen.add(t["id"])
        if t["kind"] not in HANDLERS:
            raise _located(InputError(f"unknown task kind {t['kind']!r}"), text, t)
        try:
            _check_task_fields(ctx, t)
        except (InputError, AlgebraError, TypeError, ValueError) as exc:
            raise _located(exc, text, t)
    return ctx


def normalize(data: dict) -> dict:
    """Scenario with defaults filled in and relations in canonical form."""
    ctx = Context(data)
    R = ctx.ring
    ring = {"vars": list(R.variables), "weights": list(R.weights),
            "relations": [str(f) for f in R.relations]}
    if R.multigrading:
        ring["multigrading"] = [list(r) for r in R.multigrading]
    if data["ring"].get("domain"):
        ring["domain"] = True
    out = {"p": R.p, "ring": ring, "tasks": data["tasks"]}
    if data.get("define"):
        out["define"] = data["define"]
    return out


# execution -------------------------------------------------------------------
def _alarm(signum, frame):
    raise ResourceLimitExceeded("time limit exceeded")


def run_task(data: dict, index: int, budget: int | None) -> dict:
    """Execute one task on a freshly built context; never raises."""
    t = data["tasks"][index]
    start = time.perf_counter()
    out = {"id": t["id"], "kind": t["kind"]}
    limit = t.get("budget", budget)
    tcap = t.get("time_limit")
    old = None
    try:
        if tcap:
            old = signal.signal(signal.SIGALRM, _alarm)
            signal.setitimer(signal.ITIMER_REAL, float(tcap))
        with spair_budget(limit) as b:
            try:
                ctx = Context(data)
                tables, verdicts, status = HANDLERS[t["kind"]](ctx, t)
                expect = t.get("expect")
                if expect:
                    flat = {**encode(tables), **encode(verdicts)}
                    mism = {k: {"expected": v, "got": flat.get(k)} for k, v in expect.items()
                            if encode(v) != flat.get(k)}
                    status = "fail" if mism else "pass"
                    if mism:
                        verdicts = {**verdicts, "expect_mismatch": mism}
                out.update(status=status, tables=tables, verdicts=verdicts)
            finally:
                out["resources"] = {"spairs": b.used, "budget": limit}
    except ResourceLimitExceeded as exc:
        out.update(status="error", error="resource", message=str(exc), tables={}, verdicts={})
    except (InputError, AlgebraError, TypeError, ValueError, KeyError) as exc:
        out.update(status="error", error="input", message=str(exc), tables={}, verdicts={})
    finally:
        if tcap:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old or signal.SIG_DFL)
    out["ms"] = int((time.perf_counter() - start) * 1000)
    return out


def run_scenario(data: dict, jobs: int = 1, budget: int | None = None) -> dict:
    n = len(data["tasks"])
    if jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, n)) as ex:
            results = list(ex.map(run_task, [data] * n, range(n), [budget] * n))
    else:
        results = [run_task(data, i, budget) for i in range(n)]
    tasks = []
    for r in results:
        r = dict(r)
        for key in ("tables", "verdicts", "resources"):
            if key in r:
                r[key] = encode(r[key])
        tasks.append(r)
    return {"version": __version__, "scenario": normalize(data), "tasks": tasks}


def strip_timing(report: dict) -> dict:
    """Report content without wall-clock fields (for determinism checks)."""
    out = dict(report)
    out["tasks"] = [{k: v for k, v in t.items() if k != "ms"} for t in report["tasks"]]
    return out


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _flatten(prefix: str, obj, rows: list):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, "" if obj is None else obj))


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["task", "kind", "status", "field", "value"])
    for t in report["tasks"]:
        rows: list = []
        _flatten("", {"tables": t.get("tables", {}), "verdicts": t.get("verdicts", {})}, rows)
        for field_, value in rows:
            w.writerow([t["id"], t["kind"], t["status"], field_, value])
    return buf.getvalue()


def exit_code(report: dict) -> int:
    errs = [t.get("error") for t in report["tasks"] if t["status"] == "error"]
    if "resource" in errs:
        return EXIT_RESOURCE
    if "input" in errs:
        return EXIT_INPUT
    return EXIT_OK


def _env_int(name: str):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{name} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="limcm", description="Run lim Cohen-Macaulay verification scenarios.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a scenario and write a report")
    run.add_argument("scenario")
    run.add_argument("--out", required=True)
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--jobs", type=int, default=None)
    run.add_argument("--budget", type=int, default=None, help="S-pair budget per task")
    val = sub.add_parser("validate", help="check a scenario without running it")
    val.add_argument("scenario")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"limcm: cannot read {args.scenario}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        data = parse_scenario(text)
        validate_scenario(data, text)
        if args.command == "validate":
            print(f"{args.scenario}: ok ({len(data['tasks'])} tasks)")
            return EXIT_OK
        jobs = args.jobs if args.jobs is not None else (_env_int("LIMCM_JOBS") or 1)
        budget = args.budget if args.budget is not None else _env_int("LIMCM_BUDGET")
    except InputError as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run_scenario(data, max(1, jobs), budget)
    body = report_json(report) if args.format == "json" else report_csv(report)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(body)
    code = exit_code(report)
    for t in report["tasks"]:
        if t["status"] == "error":
            print(f"{args.scenario}: task {t['id']}: {t['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
