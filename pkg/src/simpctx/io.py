"""JSON scenario files.

A scenario holds a space, an outcome space and optionally a distribution,
observables and named subspaces.  Rationals are written ``"a/b"``; outcome
tuples are digit strings (``"01"``) when ``d <= 10`` and comma separated
otherwise.  Dumping is canonical (sorted keys, two-space indent).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from . import spaces
from .contextuality import DiscreteScenario, discrete_embed
from .errors import SimpctxError
from .outcomes import (
    BOOLEAN,
    NONNEG_RATIONALS,
    SEMIRINGS,
    Distribution,
    OutcomeSpace,
    SimplicialDistribution,
    outcome_space,
)
from .quantum import CommutingTupleAssignment, Pauli
from .sset import PresentedSSet, Subspace, from_ordered_complex, from_tables, subspace


class ScenarioError(SimpctxError, ValueError):
    """Malformed scenario file; the message starts with the offending location."""


# ---------------------------------------------------------------------------
# scalars


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(v: Any, where: str) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ScenarioError(f"{where}: weights must be integers or 'a/b' strings, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ScenarioError(f"{where}: cannot read {v!r} as a rational") from None


def format_outcome(t: tuple[int, ...], d: int) -> str:
    if d <= 10:
        return "".join(map(str, t))
    return ",".join(map(str, t))


def parse_outcome(s: Any, where: str) -> tuple[int, ...]:
    if isinstance(s, (list, tuple)):
        return tuple(int(v) for v in s)
    s = str(s).strip()
    if not s:
        return ()
    try:
        if "," in s:
            return tuple(int(v) for v in s.split(","))
        return tuple(int(c) for c in s)
    except ValueError:
        raise ScenarioError(f"{where}: bad outcome {s!r}") from None


def _weight(v: Any, semiring, where: str):
    if semiring is BOOLEAN:
        if isinstance(v, bool):
            return v
        if v in (0, 1, "0", "1"):
            return bool(int(v))
        raise ScenarioError(f"{where}: Boolean weights must be true/false, got {v!r}")
    return parse_rational(v, where)


def _format_weight(w) -> Any:
    return w if isinstance(w, bool) else format_rational(w)


# ---------------------------------------------------------------------------
# scenario


@dataclass
class Scenario:
    space: PresentedSSet
    space_spec: dict
    outcome: OutcomeSpace
    semiring: Any = NONNEG_RATIONALS
    distribution: SimplicialDistribution | None = None
    distribution_spec: dict | None = None
    observables: CommutingTupleAssignment | None = None
    observables_spec: Any = None
    subspace_specs: dict[str, list[str]] = field(default_factory=dict)
    discrete: DiscreteScenario | None = None
    discrete_table: dict | None = None
    name: str | None = None
    description: str | None = None

    def subspace(self, name: str) -> Subspace:
        if name in self.subspace_specs:
            return subspace(self.space, self.subspace_specs[name])
        builtin = self.space_spec.get("builtin")
        if builtin and name in ("boundary", "loop"):
            return spaces.boundary(self.space, builtin)
        known = sorted(self.subspace_specs) or ["boundary (builtin spaces only)"]
        raise ScenarioError(f"subspaces: no subspace named {name!r}; known: {', '.join(known)}")


def build_space(spec: Mapping, where: str = "space") -> PresentedSSet:
    if not isinstance(spec, Mapping):
        raise ScenarioError(f"{where}: expected an object")
    try:
        if "builtin" in spec:
            return spaces.builtin(spec["builtin"], **dict(spec.get("params", {})))
        max_dim = spec.get("max_dim")
        if "triangles" in spec:
            tris = {k: tuple(v) for k, v in spec["triangles"].items()}
            idents = [tuple(map(tuple, pair)) for pair in spec.get("vertex_identifications", [])]
            return spaces.from_triangles(tris, idents, max_dim or spaces.DEFAULT_MAX_DIM)
        if "simplices" in spec:
            return from_ordered_complex({k: list(v) for k, v in spec["simplices"].items()}, max_dim)
        if "tables" in spec:
            levels = [{lab: [f if isinstance(f, str) else (f[0], f[1]) for f in faces] for lab, faces in lvl.items()} for lvl in spec["tables"]]
            return from_tables(levels, max_dim)
    except ScenarioError:
        raise
    except (SimpctxError, KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"{where}: {exc}") from None
    raise ScenarioError(f"{where}: needs one of builtin, triangles, simplices, tables")


def _build_outcome(spec: Any, where: str) -> OutcomeSpace:
    if spec is None:
        spec = {"nerve": 2}
    if not isinstance(spec, Mapping) or len(spec) != 1:
        raise ScenarioError(f"{where}: expected {{kind: d}} with kind nerve, circle or discrete")
    (kind, d), = spec.items()
    try:
        return outcome_space(kind, int(d))
    except (SimpctxError, ValueError, KeyError) as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def build_distribution(X: PresentedSSet, Y: OutcomeSpace, semiring, spec: Mapping, where: str = "distribution") -> SimplicialDistribution:
    given = {}
    for lab, table in spec.items():
        loc = f"{where}.{lab}"
        if lab not in X._by_label:
            raise ScenarioError(f"{loc}: no simplex with this label")
        if not isinstance(table, Mapping):
            raise ScenarioError(f"{loc}: expected {{outcome: weight}}")
        weights = {}
        for k, v in table.items():
            t = parse_outcome(k, loc)
            w = _weight(v, semiring, f"{loc}.{k}")
            if t in weights:
                raise ScenarioError(f"{loc}: outcome {k!r} listed twice")
            weights[t] = w
        try:
            given[lab] = Distribution.of(weights, semiring)
        except SimpctxError as exc:
            raise ScenarioError(f"{loc}: {exc}") from None
    try:
        return SimplicialDistribution.from_generators(X, Y, given, semiring)
    except (SimpctxError, KeyError) as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _build_observables(X: PresentedSSet, spec: Any, where: str = "observables") -> CommutingTupleAssignment:
    try:
        if spec == "edge_labels":
            return CommutingTupleAssignment.from_edges(X)
        if isinstance(spec, Mapping):
            return CommutingTupleAssignment.from_edges(X, {k: Pauli.parse(v) for k, v in spec.items()})
    except (SimpctxError, KeyError, ValueError) as exc:
        raise ScenarioError(f"{where}: {exc}") from None
    raise ScenarioError(f"{where}: expected \"edge_labels\" or {{edge label: Pauli word}}")


def scenario_from_dict(data: Mapping, name: str | None = None) -> Scenario:
    if not isinstance(data, Mapping):
        raise ScenarioError("top level: expected an object")
    unknown = set(data) - {"space", "outcome", "semiring", "distribution", "observables", "subspaces", "discrete", "name", "description"}
    if unknown:
        raise ScenarioError(f"top level: unknown keys {sorted(unknown)}")
    semiring_name = data.get("semiring", "Q>=0")
    if semiring_name not in SEMIRINGS:
        raise ScenarioError(f"semiring: unknown semiring {semiring_name!r}")
    semiring = SEMIRINGS[semiring_name]
    name = data.get("name", name)
    desc = data.get("description")

    if "discrete" in data:
        spec = data["discrete"]
        try:
            sc = discrete_embed(spec["measurements"], spec["contexts"], int(spec["d"]))
        except KeyError as exc:
            raise ScenarioError(f"discrete: missing {exc}") from None
        except SimpctxError as exc:
            raise ScenarioError(f"discrete: {exc}") from None
        table = None
        dist = None
        if "table" in spec:
            table = {}
            for ctx, weights in spec["table"].items():
                key = tuple(ctx.split(","))
                table[key] = Distribution.of({parse_outcome(k, f"discrete.table.{ctx}"): parse_rational(v, f"discrete.table.{ctx}.{k}") for k, v in weights.items()})
            try:
                dist = sc.to_simplicial(table)
            except SimpctxError as exc:
                raise ScenarioError(f"discrete.table: {exc}") from None
        return Scenario(sc.space, {"discrete": dict(spec)}, sc.outcome, NONNEG_RATIONALS, dist, None, discrete=sc, discrete_table=table, name=name, description=desc)

    if "space" not in data:
        raise ScenarioError("top level: missing 'space'")
    X = build_space(data["space"])
    Y = _build_outcome(data.get("outcome"), "outcome")
    scn = Scenario(X, dict(data["space"]), Y, semiring, name=name, description=desc)
    subs = data.get("subspaces", {})
    if not isinstance(subs, Mapping):
        raise ScenarioError("subspaces: expected {name: [simplex labels]}")
    for sname, labels in subs.items():
        try:
            subspace(X, labels)
        except (SimpctxError, KeyError) as exc:
            raise ScenarioError(f"subspaces.{sname}: {exc}") from None
    scn.subspace_specs = {k: list(v) for k, v in subs.items()}
    if "distribution" in data:
        scn.distribution_spec = dict(data["distribution"])
        scn.distribution = build_distribution(X, Y, semiring, data["distribution"])
    if "observables" in data:
        scn.observables_spec = data["observables"]
        scn.observables = _build_observables(X, data["observables"])
    return scn


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return scenario_from_dict(data, name=path.stem)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def space_to_tables(X: PresentedSSet) -> dict:
    """Explicit presentation: per-dimension ``{label: faces}``, degenerate faces as ``[word, base]``."""
    levels = []
    for n in range(X.max_dim + 1):
        if not X.count(n) and n:
            break
        level = {}
        for key in X.keys(n):
            faces = []
            for f in X.faces_of(key):
                base = X.label(f.base)
                faces.append([list(f.degeneracies), base] if f.degeneracies else base)
            level[X.label(key)] = faces
        levels.append(level)
    return {"tables": levels, "max_dim": X.max_dim}


def distribution_to_json(p: SimplicialDistribution, all_simplices: bool = False) -> dict:
    """Table on the generating simplices (or every nondegenerate simplex)."""
    d = getattr(p.outcome, "d", 2)
    keys = p.space.keys() if all_simplices else p.space.generating
    return {
        p.space.label(k): {format_outcome(t, d): _format_weight(w) for t, w in p.table[k].items}
        for k in keys
    }


def scenario_to_dict(scn: Scenario) -> dict:
    if scn.discrete is not None:
        spec = dict(scn.space_spec["discrete"])
        if scn.discrete_table is not None:
            spec["table"] = {
                ",".join(ctx): {format_outcome(t, scn.discrete.d): format_rational(w) for t, w in dist.items}
                for ctx, dist in scn.discrete_table.items()
            }
        out = {"discrete": spec}
    else:
        out = {"space": scn.space_spec, "outcome": scn.outcome.to_json()}
        if scn.semiring is not NONNEG_RATIONALS:
            out["semiring"] = scn.semiring.name
        if scn.distribution is not None:
            out["distribution"] = distribution_to_json(scn.distribution)
        if scn.observables_spec is not None:
            out["observables"] = scn.observables_spec
        if scn.subspace_specs:
            out["subspaces"] = scn.subspace_specs
    if scn.name:
        out["name"] = scn.name
    if scn.description:
        out["description"] = scn.description
    return out


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, default=_json_default) + "\n"


def _json_default(o: Any):
    if isinstance(o, Fraction):
        return format_rational(o)
    if isinstance(o, tuple):
        return list(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dump_scenario(scn: Scenario) -> str:
    return dumps(scenario_to_dict(scn))
