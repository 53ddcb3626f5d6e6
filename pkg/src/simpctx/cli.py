"""``simpctx`` command line.

Every subcommand prints a JSON report.  Exit codes: 0 noncontextual,
feasible or valid; 1 contextual, infeasible or invalid; 2 usage or input
error; 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .cohomology import cl_witness, h1
from .contextuality import (
    chsh_check,
    classical_facets,
    glue_classical,
    is_noncontextual,
    is_strongly_contextual,
    solve_extension,
    uncovered_outcomes,
)
from .errors import ResourceCapError, SimpctxError
from .io import (
    Scenario,
    ScenarioError,
    build_space,
    distribution_to_json,
    dumps,
    format_outcome,
    format_rational,
    load_scenario,
    parse_outcome,
)
from .outcomes import Nerve, check_simplicial, outcome_space
from .quantum import born, state, validate_assignment
from .simpdist import Assignment, deterministic_assignments, restrict, theta
from .sset import PresentedSSet, subspace_from_map, validate

OK, NO, USAGE, CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _need_distribution(scn: Scenario):
    if scn.distribution is None:
        raise UsageError("scenario has no distribution")
    return scn.distribution


def _assignment_json(X: PresentedSSet, Y, r: Assignment) -> dict:
    d = getattr(Y, "d", 2)
    keys = X.keys(1) if isinstance(Y, Nerve) else X.keys()
    return {X.label(k): format_outcome(r[k], d) for k in keys}


def _mixture_json(mix) -> list[dict]:
    return [{"weight": format_rational(w), "assignment": _assignment_json(mix.space, mix.outcome, r)} for r, w in mix.weights]


def _functional_json(X: PresentedSSet, Y, f) -> dict:
    d = getattr(Y, "d", 2)
    return {
        "bound": format_rational(f.bound),
        "coefficients": [
            {"simplex": X.label(k), "outcome": format_outcome(t, d), "coefficient": format_rational(c)}
            for (k, t), c in sorted(f.coefficients.items())
        ],
    }


def _verdict_json(p, v) -> dict:
    out = {"status": v.status, "deterministic_vertices": v.n_vertices, "certificate_verified": v.verify(p)}
    if v.noncontextual:
        out["mixture"] = _mixture_json(v.mixture)
    else:
        out["separating_functional"] = _functional_json(p.space, p.outcome, v.functional)
    return out


def _space_from_args(args) -> tuple[PresentedSSet, object, Scenario | None]:
    if getattr(args, "scenario", None):
        scn = load_scenario(args.scenario)
        return scn.space, scn.outcome, scn
    if getattr(args, "space", None):
        params = dict(_param(p) for p in args.param or [])
        X = build_space({"builtin": args.space, "params": params}, "--space")
        kind, _, d = (args.outcome or "nerve:2").partition(":")
        try:
            Y = outcome_space(kind, int(d or 2))
        except (SimpctxError, ValueError) as exc:
            raise UsageError(f"--outcome: {exc}") from None
        return X, Y, None
    raise UsageError("give a scenario file or --space NAME")


def _param(text: str) -> tuple[str, int]:
    k, sep, v = text.partition("=")
    if not sep:
        raise UsageError(f"--param expects key=value, got {text!r}")
    try:
        return k, int(v)
    except ValueError:
        raise UsageError(f"--param {k}: {v!r} is not an integer") from None


def _resolve_target(spec: str) -> PresentedSSet:
    """A builtin name (``name`` or ``name:k=v,...``) or a scenario file."""
    if Path(spec).suffix == ".json":
        return load_scenario(spec).space
    name, _, rest = spec.partition(":")
    params = dict(_param(p) for p in rest.split(",") if p)
    return build_space({"builtin": name, "params": params}, "--into")


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> tuple[int, dict]:
    scn = load_scenario(args.scenario)
    report: dict = {"space": scn.space.describe(), "simplicial_identity_violations": [asdict(v) for v in validate(scn.space)]}
    bad = bool(report["simplicial_identity_violations"])
    if scn.distribution is not None:
        d = getattr(scn.distribution.outcome, "d", 2)

        def dist(x):
            return {format_outcome(t, d): format_rational(w) if isinstance(w, Fraction) else w for t, w in x.items}

        mism = [
            {"simplex": m.simplex, "face": m.i, "expected": dist(m.expected), "found": dist(m.found)}
            for m in check_simplicial(scn.distribution)
        ]
        report["distribution_face_mismatches"] = mism
        bad = bad or bool(mism)
    if scn.observables is not None:
        obs = validate_assignment(scn.observables)
        report["observable_violations"] = obs
        bad = bad or bool(obs)
    report["valid"] = not bad
    return (NO if bad else OK), report


def cmd_deterministics(args) -> tuple[int, dict]:
    X, Y, _ = _space_from_args(args)
    rs = deterministic_assignments(X, Y, args.cap)
    shown = rs if args.limit is None else rs[: args.limit]
    return OK, {"count": len(rs), "assignments": [_assignment_json(X, Y, r) for r in shown]}


def cmd_check(args) -> tuple[int, dict]:
    scn = load_scenario(args.scenario)
    p = _need_distribution(scn)
    report: dict = {}
    code = OK
    modes = ["noncontextual", "strong", "logical"] if args.mode == "all" else [args.mode]
    if "noncontextual" in modes:
        if p.semiring.is_boolean:
            report["noncontextual"] = {"status": "skipped", "reason": "Boolean weights; use --mode logical"}
        else:
            v = is_noncontextual(p, args.cap)
            report["noncontextual"] = _verdict_json(p, v)
            code = max(code, OK if v.noncontextual else NO)
    if "strong" in modes:
        s = is_strongly_contextual(p, args.cap)
        report["strong"] = {
            "strongly_contextual": s.strongly_contextual,
            "support": [_assignment_json(p.space, p.outcome, r) for r in s.support],
        }
        if args.mode == "strong":
            code = NO if s.strongly_contextual else OK
    if "logical" in modes:
        from .outcomes import BOOLEAN, semiring_map, support_map

        pb = p if p.semiring is BOOLEAN else semiring_map(p, support_map, BOOLEAN)
        miss = uncovered_outcomes(pb, args.cap)
        d = getattr(p.outcome, "d", 2)
        report["logical"] = {
            "logically_contextual": bool(miss),
            "uncovered": [{"simplex": p.space.label(k), "outcome": format_outcome(t, d)} for k, t in miss],
        }
        if args.mode == "logical" or "noncontextual" not in report or report["noncontextual"].get("status") == "skipped":
            code = max(code, NO if miss else OK)
    return code, report


def cmd_chsh(args) -> tuple[int, dict]:
    scn = load_scenario(args.scenario)
    p = _need_distribution(scn)
    r = chsh_check(p)
    return (OK if r.holds else NO), {
        "edges": list(r.edges),
        "correlations": [format_rational(c) for c in r.correlations],
        "expressions": [format_rational(s) for s in r.expressions],
        "value": format_rational(r.value),
        "minimum": format_rational(r.minimum),
        "holds": r.holds,
        "failing": r.failing,
    }


def cmd_extend(args) -> tuple[int, dict]:
    scn = load_scenario(args.scenario)
    p = _need_distribution(scn)
    X = _resolve_target(args.into)
    sub = subspace_from_map(X, scn.space)
    res = solve_extension(p, sub)
    if res.feasible:
        return OK, {"feasible": True, "extension": distribution_to_json(res.extension, all_simplices=True)}
    return NO, {
        "feasible": False,
        "certificate": [{"constraint": n, "multiplier": format_rational(c)} for n, c in res.certificate["rows"]],
    }


def cmd_glue(args) -> tuple[int, dict]:
    a, b = load_scenario(args.first), load_scenario(args.second)
    pa, pb = _need_distribution(a), _need_distribution(b)
    X = _resolve_target(args.into)
    A, B = subspace_from_map(X, a.space), subspace_from_map(X, b.space)
    va, vb = is_noncontextual(pa, args.cap), is_noncontextual(pb, args.cap)
    if not (va.noncontextual and vb.noncontextual):
        return NO, {"glued": False, "reason": "a piece is contextual", "first": va.status, "second": vb.status}
    d = glue_classical(va.mixture, vb.mixture, A, B)
    q = theta(d)
    return OK, {
        "glued": True,
        "mixture": _mixture_json(d),
        "distribution": distribution_to_json(q, all_simplices=True),
        "restricts_to_inputs": restrict(q, A.inclusion) == pa and restrict(q, B.inclusion) == pb,
    }


def cmd_witness(args) -> tuple[int, dict]:
    scn = load_scenario(args.scenario)
    p = _need_distribution(scn)
    sub = scn.subspace(args.subspace)
    w = cl_witness(p, sub, args.cap)
    return (NO if w.verdict == "strongly-contextual" else OK), w.to_json()


def cmd_h1(args) -> tuple[int, dict]:
    X, Y, _ = _space_from_args(args)
    d = args.d or getattr(Y, "d", 2)
    g = h1(X, d)
    return OK, {"d": d, "invariants": list(g.invariants), "order": g.order, "generators": [c.as_labels() for c in g.generators]}


def cmd_born(args) -> tuple[int, dict]:
    scn = load_scenario(args.scenario)
    if scn.observables is None:
        raise UsageError("scenario has no observables")
    params = dict(_param(p) for p in args.param or [])
    try:
        rho = state(args.state, **params)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"--state: {exc}") from None
    p = born(scn.observables, rho)
    v = is_noncontextual(p, args.cap)
    s = is_strongly_contextual(p, args.cap)
    return (OK if v.noncontextual else NO), {
        "state": args.state,
        "distribution": distribution_to_json(p, all_simplices=True),
        "noncontextual": _verdict_json(p, v),
        "strongly_contextual": s.strongly_contextual,
    }


def _coordinates(text: str | None):
    if not text:
        return None
    out = []
    for item in text.split(","):
        lab, sep, t = item.partition(":")
        if not sep:
            raise UsageError(f"--coordinates expects label:outcome items, got {item!r}")
        out.append((lab, parse_outcome(t, "--coordinates")))
    return out


def cmd_facets(args) -> tuple[int, dict]:
    X, Y, _ = _space_from_args(args)
    system = classical_facets(X, Y, _coordinates(args.coordinates), args.cap)
    return OK, {
        "variables": list(system.variables),
        "equalities": [c for c in system.pretty() if "==" in c],
        "inequalities": [c for c in system.pretty() if "<=" in c],
        "facet_count": len(system.inequalities),
    }


def cmd_discrete_embed(args) -> tuple[int, dict]:
    scn = load_scenario(args.scenario)
    if scn.discrete is None:
        raise UsageError("scenario has no discrete section")
    sc = scn.discrete
    report: dict = {
        "measurements": list(sc.measurements),
        "contexts": [list(c) for c in sc.contexts],
        "space": {"simplices": [sc.space.label(k) for k in sc.space.keys()], **sc.space.describe()},
    }
    code = OK
    if scn.distribution is not None:
        v = is_noncontextual(scn.distribution, args.cap)
        sheaf = sc.sheaf_noncontextual(scn.discrete_table)
        report["simplicial"] = _verdict_json(scn.distribution, v)
        report["sheaf_noncontextual"] = sheaf
        report["verdicts_agree"] = sheaf == v.noncontextual
        report["round_trip"] = sc.from_simplicial(scn.distribution) == scn.discrete_table
        code = OK if v.noncontextual else NO
    return code, report


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="simpctx", description="Exact contextuality checks on simplicial scenarios.")
    ap.add_argument("--version", action="version", version=f"simpctx {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, scenario=True, optional_scenario=False):
        p = sub.add_parser(name, help=help_)
        if optional_scenario:
            p.add_argument("scenario", nargs="?")
            p.add_argument("--space", help="builtin space name")
            p.add_argument("--param", action="append", help="builtin parameter key=value")
            p.add_argument("--outcome", help="outcome space kind:d (default nerve:2)")
        elif scenario:
            p.add_argument("scenario")
        p.add_argument("--cap", type=int, default=None, help="enumeration cap (default: SIMPCTX_MAX_VERTICES or 10^6)")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "check identities, face compatibility and observables")
    p = add("deterministics", cmd_deterministics, "list deterministic assignments", optional_scenario=True)
    p.add_argument("--limit", type=int)
    p = add("check", cmd_check, "decide (non)contextuality")
    p.add_argument("--mode", choices=["all", "noncontextual", "strong", "logical"], default="all")
    add("chsh", cmd_chsh, "evaluate the CHSH inequalities")
    p = add("extend", cmd_extend, "extend a distribution to a larger space")
    p.add_argument("--into", required=True, help="builtin name[:k=v,...] or scenario file")
    p = add("glue", cmd_glue, "glue two noncontextual distributions", scenario=False)
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--into", required=True)
    p = add("witness", cmd_witness, "cohomological strong-contextuality witness")
    p.add_argument("--subspace", required=True)
    p = add("h1", cmd_h1, "first cohomology mod d", optional_scenario=True)
    p.add_argument("--d", type=int)
    p = add("born", cmd_born, "Born-rule distribution of the observables")
    p.add_argument("--state", required=True)
    p.add_argument("--param", action="append")
    p = add("facets", cmd_facets, "facets of the classical polytope", optional_scenario=True)
    p.add_argument("--coordinates", help="label:outcome,... (default: p^0 on each edge)")
    add("discrete-embed", cmd_discrete_embed, "embed a measurement/context scenario")
    return ap


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, report = args.fn(args)
    except ResourceCapError as exc:
        out.write(dumps({"error": "resource cap", "detail": str(exc)}))
        return CAP
    except (UsageError, ScenarioError, SimpctxError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"simpctx {args.command}: {msg}", file=sys.stderr)
        return USAGE
    out.write(dumps({"command": args.command, "exit_code": code, **report}))
    return code


def main() -> None:  # pragma: no cover
    sys.exit(run())
