"""Command-line front end.

Every command reads JSON records (files, or ``-`` for stdin), validates them
against ``schemas/<command>.json`` and prints a result envelope
``{status, payload, diagnostics}`` with sorted keys.  Exit codes: 0 ok,
1 domain error, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import jsonschema

from . import acceptance
from .artin import FiniteSuperAlgebra, GradedModule, semilocal_length, super_length
from .cohomology import (LineBundleDescriptor, affine_super_poincare, frolicher_report, hodge_table,
                         integral_forms_table, koszul_acyclicity)
from .curves import SuperCurveModel
from .cycles import FlatPullbackData, ProperMapData, SuperCycle, divisor_cycle, flat_pullback, pushforward
from .errors import DomainError, MalformedInput
from .grassmann import SuperMatrix, berezinian
from .moduli import (DualGraph, SuperMapFiberData, arithmetic_genus, beta_good_filter, fiber_class, is_prestable,
                     stability_violations, supermap_violations, susy_degree_violations)
from .nori import (DiagramRep, EmbeddingPoset, FiniteCategory, NoriGraph, category_diagram, check_graph,
                   effective_pairs_diagram, end_algebra)

EXIT_OK, EXIT_DOMAIN, EXIT_MALFORMED = 0, 1, 2

FILE_COMMANDS = ["ber", "length", "order", "div", "pushforward", "pullback", "rateq", "stability", "susy",
                 "stablemap", "betagood", "nori-build", "nori-end"]
ARG_COMMANDS = ["hodge", "frolicher", "koszul", "selftest"]
COMMANDS = FILE_COMMANDS + ARG_COMMANDS


@dataclass
class CommandResult:
    status: str
    payload: dict | None = None
    diagnostics: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def to_json(self) -> dict:
        return {"status": self.status, "payload": self.payload, "diagnostics": list(self.diagnostics)}


@lru_cache(maxsize=None)
def load_schema(command: str) -> dict:
    text = resources.files("supergeom").joinpath("schemas", f"{command}.json").read_text(encoding="utf-8")
    return json.loads(text)


def _part(command: str, which: str) -> dict:
    doc = load_schema(command)
    sub = dict(doc[which])
    sub["$defs"] = doc["$defs"]
    return sub


def validate(command: str, record, which: str = "input") -> None:
    validator = jsonschema.Draft202012Validator(_part(command, which))
    err = jsonschema.exceptions.best_match(validator.iter_errors(record))
    if err is not None:
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise MalformedInput(f"schema violation at {where}: {err.message}")


def parse_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def dumps(obj, pretty: bool = False) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2 if pretty else None)


# ---------------------------------------------------------------------------
# handlers: record -> payload


def _model(rec) -> SuperCurveModel:
    return SuperCurveModel.from_json(rec.get("model", {}))


def do_ber(rec):
    return {"berezinian": berezinian(SuperMatrix.from_json(rec)).to_pairs()}


def do_length(rec):
    A = FiniteSuperAlgebra.from_json(rec["algebra"])
    mod = rec.get("module", "regular")
    if mod == "regular":
        M = GradedModule.regular(A)
    elif mod == "residue":
        M = GradedModule.residue(A)
    else:
        M = GradedModule.from_json(A, mod)
    if rec.get("semilocal"):
        return {"length": semilocal_length(A, M).to_json(), "method": "semilocal"}
    return {"length": super_length(A, M).to_json(), "method": "local"}


def do_order(rec):
    m = _model(rec)
    p = m.point(rec["point"])
    return {"order": m.ord_at(p, rec["function"]).to_json(), "point": p.name}


def do_div(rec):
    m = _model(rec)
    d = m.div(rec["function"])
    return {"divisor": d.to_json(), "degree": m.degree(d).to_json()}


def do_pushforward(rec):
    return {"cycle": pushforward(SuperCycle.from_json(rec["cycle"]), ProperMapData.from_json(rec["map"])).to_json()}


def do_pullback(rec):
    return {"cycle": flat_pullback(SuperCycle.from_json(rec["cycle"]), FlatPullbackData.from_json(rec["data"])).to_json()}


def do_rateq(rec):
    alpha = SuperCycle.from_json(rec["cycle"])
    total = SuperCycle.zero(alpha.dim)
    for w in rec["witnesses"]:
        total = total + divisor_cycle(w.get("embedding"), SuperCurveModel.from_json(w["model"]), w["function"])
    return {"equivalent": alpha.same_as(total), "witness_sum": total.to_json()}


def _descriptor(x):
    return LineBundleDescriptor.from_json(x) if x is not None else None


def _table(rec):
    return hodge_table(int(rec["genus"]), _descriptor(rec.get("bundle", "trivial")), _descriptor(rec.get("L2")),
                       _descriptor(rec.get("L_omega")), rec.get("convention", "merged"))


def do_hodge(rec):
    T = _table(rec)
    out = T.to_json()
    out["frolicher"] = frolicher_report(T)["verdict"]
    out["integral_forms"] = {f"{p},{q}": v.to_json() for (p, q), v in sorted(integral_forms_table(T).items())}
    out["text"] = T.render()
    return out


def do_frolicher(rec):
    return frolicher_report(_table(rec))


def do_koszul(rec):
    if "m" in rec or "cutoff" in rec:
        return affine_super_poincare(int(rec.get("m", 0)), int(rec.get("n", 1)), int(rec.get("cutoff", 4))).to_json()
    return koszul_acyclicity(int(rec.get("n", 1)), int(rec.get("wmax", 4))).to_json()


def do_stability(rec):
    G = DualGraph.from_json(rec)
    bad = stability_violations(G)
    return {"stable": not bad, "prestable": is_prestable(G), "arithmetic_genus": arithmetic_genus(G), "violations": bad}


def do_susy(rec):
    bad = susy_degree_violations(DualGraph.from_json(rec["graph"]), rec["degL"])
    return {"ok": not bad, "violations": bad}


def do_stablemap(rec):
    fibers = [SuperMapFiberData.from_json(f) for f in rec["fibers"]]
    beta = SuperCycle.from_json(rec["beta"])
    bad = supermap_violations(fibers, beta)
    return {"stable": not bad, "violations": bad, "classes": [fiber_class(f).to_json() for f in fibers]}


def do_betagood(rec):
    beta = SuperCycle.from_json(rec["beta"])
    family = [(label, [SuperMapFiberData.from_json(f) for f in fibers]) for label, fibers in rec["family"]]
    return {"labels": beta_good_filter(family, beta)}


def do_nori_build(rec):
    if "category" in rec:
        G = category_diagram(FiniteCategory.from_json(rec["category"]))
    elif "poset" in rec:
        G = effective_pairs_diagram(EmbeddingPoset.from_json(rec["poset"]), int(rec.get("imax", 0)))
    elif "graph" in rec:
        G = NoriGraph.from_json(rec["graph"])
    else:
        raise MalformedInput("nori-build needs one of: category, poset, graph")
    verdict = check_graph(G)
    edges = []
    if verdict.valid:
        edges = [{"id": e.id, "source": e.source, "target": e.target, "degenerate": e.degenerate} for e in G.edges()]
    return {"graph": G.to_json(), "edges": edges, "check": verdict.to_json()}


def do_nori_end(rec):
    return end_algebra(NoriGraph.from_json(rec["graph"]), DiagramRep.from_json(rec["rep"])).to_json()


def do_selftest(rec):
    results = acceptance.run_all(int(rec.get("seed", 0)))
    return {"criteria": [r.to_json() for r in results], "all_passed": all(r.passed for r in results),
            "lines": [r.line() for r in results]}


HANDLERS = {
    "ber": do_ber, "length": do_length, "order": do_order, "div": do_div, "pushforward": do_pushforward,
    "pullback": do_pullback, "rateq": do_rateq, "hodge": do_hodge, "frolicher": do_frolicher, "koszul": do_koszul,
    "stability": do_stability, "susy": do_susy, "stablemap": do_stablemap, "betagood": do_betagood,
    "nori-build": do_nori_build, "nori-end": do_nori_end, "selftest": do_selftest,
}


def run(command: str, record) -> CommandResult:
    """Validate and execute one record; never raises for domain or input errors."""
    try:
        if command not in HANDLERS:
            raise MalformedInput(f"unknown command {command!r}")
        validate(command, record)
        payload = HANDLERS[command](record)
        lines = payload.pop("lines", None) if isinstance(payload, dict) else None
        res = CommandResult("ok", payload, list(lines or []))
        if command == "selftest" and not payload["all_passed"]:
            res.exit_code = EXIT_DOMAIN
        return res
    except DomainError as exc:
        return CommandResult("error", None, [f"{type(exc).__name__}: {exc}"], EXIT_DOMAIN)
    except MalformedInput as exc:
        return CommandResult("error", None, [f"MalformedInput: {exc}"], EXIT_MALFORMED)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return CommandResult("error", None, [f"MalformedInput: {type(exc).__name__}: {exc}"], EXIT_MALFORMED)


def run_text(command: str, text: str) -> CommandResult:
    try:
        record = parse_json(text)
    except MalformedInput as exc:
        return CommandResult("error", None, [f"MalformedInput: {exc}"], EXIT_MALFORMED)
    return run(command, record)


def _run_path(job):
    command, path = job
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return CommandResult("error", None, [f"MalformedInput: cannot read {path}: {exc.strerror}"], EXIT_MALFORMED)
    return run_text(command, text)


# ---------------------------------------------------------------------------


def parse_bundle(text: str) -> dict:
    """trivial | canonical | generic:D | explicit:D:H0"""
    parts = text.split(":")
    kind = parts[0]
    try:
        if kind in ("trivial", "canonical") and len(parts) == 1:
            return {"kind": kind}
        if kind == "generic" and len(parts) == 2:
            return {"kind": kind, "degree": int(parts[1])}
        if kind == "explicit" and len(parts) == 3:
            return {"kind": kind, "degree": int(parts[1]), "h0": int(parts[2])}
    except ValueError:
        pass
    raise MalformedInput(f"bad bundle descriptor {text!r}; use trivial, canonical, generic:D or explicit:D:H0")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="supergeom", description="Exact computations for split superschemes.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in FILE_COMMANDS:
        p = sub.add_parser(name, help=f"run {name} on JSON input files")
        p.add_argument("inputs", nargs="+", help="input JSON files, or - for stdin")
        p.add_argument("--jobs", type=int, default=1, help="evaluate files in parallel")
        p.add_argument("--pretty", action="store_true")
    for name in ("hodge", "frolicher"):
        p = sub.add_parser(name)
        p.add_argument("inputs", nargs="*")
        p.add_argument("--genus", type=int)
        p.add_argument("--bundle", default="trivial")
        p.add_argument("--convention", choices=["merged", "sheaf"], default="merged")
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--pretty", action="store_true")
    p = sub.add_parser("koszul", help="Koszul acyclicity, or affine super Poincare with --m/--cutoff")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--wmax", type=int, default=4)
    p.add_argument("--m", type=int)
    p.add_argument("--cutoff", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--pretty", action="store_true")
    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(inputs=[], jobs=1)
    return ap


def _arg_record(args) -> dict | None:
    cmd = args.command
    if cmd in ("hodge", "frolicher"):
        if args.genus is None:
            return None
        return {"genus": args.genus, "bundle": parse_bundle(args.bundle), "convention": args.convention}
    if cmd == "koszul":
        rec = {"n": args.n}
        if args.m is not None or args.cutoff is not None:
            rec.update(m=args.m or 0, cutoff=args.cutoff if args.cutoff is not None else 4)
        else:
            rec["wmax"] = args.wmax
        return rec
    if cmd == "selftest":
        return {"seed": args.seed}
    return None


def _emit(res: CommandResult, args, out) -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "text" and res.status == "ok":
        if args.command == "selftest":
            out.write("\n".join(res.diagnostics) + "\n")
            passed = sum(c["passed"] for c in res.payload["criteria"])
            out.write(f"{passed}/{len(res.payload['criteria'])} criteria passed\n")
            return
        if args.command == "hodge":
            out.write(res.payload["text"] + f"\nfrolicher {res.payload['frolicher']}\n")
            return
    out.write(dumps(res.to_json(), args.pretty) + "\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        rec = _arg_record(args)
    except MalformedInput as exc:
        res = CommandResult("error", None, [f"MalformedInput: {exc}"], EXIT_MALFORMED)
        _emit(res, args, out)
        return res.exit_code
    if not args.inputs:
        if rec is None:
            ap.error(f"{args.command} needs --genus or an input file")
        res = run(args.command, rec)
        _emit(res, args, out)
        return res.exit_code
    jobs = []
    stdin_text = None
    results: list[CommandResult | None] = []
    for path in args.inputs:
        if path == "-":
            stdin_text = stdin_text if stdin_text is not None else sys.stdin.read()
            results.append(run_text(args.command, stdin_text))
        else:
            results.append(None)
            jobs.append((len(results) - 1, path))
    if jobs:
        work = [(args.command, p) for _, p in jobs]
        if args.jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                done = list(pool.map(_run_path, work))
        else:
            done = [_run_path(w) for w in work]
        for (i, _), r in zip(jobs, done):
            results[i] = r
    if len(results) == 1:
        _emit(results[0], args, out)
    else:
        out.write(dumps([r.to_json() for r in results], args.pretty) + "\n")
    return max(r.exit_code for r in results)


if __name__ == "__main__":
    sys.exit(main())
