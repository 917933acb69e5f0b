"""Config-driven command line front end.

A config is a TOML document with the sections ``[young]``, ``[space]``,
``[functions]``, ``[transform]``, ``[budget]``, ``[expect]`` and an array of
``[[run]]`` requests.  ``parse_config`` validates the whole document and
reports every problem with its line; ``run`` executes the requests and
returns a :class:`Report`; ``reproduce_example`` runs one of the shipped
fixtures and compares it against the expectations it embeds.

Exit status: 0 when every request completed, 1 on a config error, 2 when a
report disagrees with the config's ``[expect]`` table.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import re
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import measure as ms
from . import operators as op
from . import orlicz
from . import range as rg
from . import young
from .errors import ConfigError, OrliczError
from .expr import FormulaError, compile_formula

REQUESTS = ("conjugate", "norm", "check-mult", "check-comp", "classify-range", "split-inequality")
EXAMPLES = ("3.9", "3.10", "3.11", "3.12")
REFUSED = "Refused"

_SECTIONS = {"young", "space", "functions", "transform", "budget", "expect", "run", "name", "description"}
_BUDGET_KEYS = {f.name for f in dataclasses.fields(ms.Budget)}
_RUN_FIELDS = {
    "conjugate": ({"phi", "y"}, set()),
    "norm": ({"function", "phi"}, set()),
    "check-mult": ({"symbol", "phi1", "phi2"}, {"phi3", "direction", "assume", "samples"}),
    "check-comp": ({"transform", "phi1", "phi2"}, {"phi3", "assume", "samples"}),
    "classify-range": ({"operator", "phi1", "phi2", "phi3"}, {"symbol", "transform", "regime", "assume"}),
    "split-inequality": ({"phi", "p"}, {"grid"}),
}


@dataclass
class ConfigIssue:
    line: int | None
    message: str
    col: int | None = None

    def __str__(self):
        if self.line is None:
            return self.message
        where = f"line {self.line}" + (f", col {self.col}" if self.col else "")
        return f"{where}: {self.message}"


class _Locator:
    """Line lookup for keys and tables in the config text."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def table(self, name: str, occurrence: int = 0):
        pat = re.compile(r"^\s*\[\[?\s*" + re.escape(name) + r"\s*\]\]?\s*(#.*)?$")
        hits = [i + 1 for i, line in enumerate(self.lines) if pat.match(line)]
        return hits[occurrence] if occurrence < len(hits) else None

    def key(self, table: str | None, key: str, occurrence: int = 0):
        start = self.table(table, occurrence) if table else 1
        if start is None:
            return None
        pat = re.compile(r"^\s*\"?" + re.escape(key) + r"\"?\s*=")
        for i in range(start - 1 if table is None else start, len(self.lines)):
            line = self.lines[i]
            if table is not None and re.match(r"^\s*\[", line):
                break
            if pat.match(line):
                return i + 1
        return start


@dataclass
class AnalysisConfig:
    """A validated config: resolved Young functions and compiled descriptions."""

    name: str
    young: dict
    space: dict
    functions: dict
    transforms: dict
    runs: list
    budget: ms.Budget
    expect: dict = field(default_factory=dict)


def _young_from(spec):
    kind = spec.get("kind")
    if kind == "custom":
        formula = compile_formula(spec["formula"])
        return young.custom(lambda x, f=formula: f(x=x), name=f"custom{{{spec['formula']}}}")
    return young.catalog(kind, spec.get("p", 1.0))


def _as_formula_or_number(value):
    if isinstance(value, (int, float, str)) and not isinstance(value, bool):
        return compile_formula(value)
    raise FormulaError(f"expected a number or a formula, got {value!r}")


def parse_config(text: str, name: str = "<config>") -> AnalysisConfig:
    """Validate ``text``; raise :class:`ConfigError` listing every problem found."""
    loc = _Locator(text)
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise ConfigError([ConfigIssue(line, f"malformed config: {exc}", col)]) from None
    issues: list[ConfigIssue] = []

    def err(message, line=None, col=None):
        issues.append(ConfigIssue(line, message, col))

    for key in doc:
        if key not in _SECTIONS:
            err(f"unknown section {key!r}", loc.table(key) or loc.key(None, key))

    phis = {}
    for key, spec in doc.get("young", {}).items():
        line = loc.key("young", key)
        if not isinstance(spec, dict):
            err(f"young function {key!r} must be a table such as {{kind = \"power\", p = 2}}", line)
            continue
        kind = spec.get("kind")
        if kind not in (*young.CATALOG, "custom"):
            err(f"unknown catalog name {kind!r} for {key!r}; expected one of {sorted(young.CATALOG)} or 'custom'", line)
            continue
        try:
            phis[key] = _young_from(spec)
        except (ValueError, KeyError, FormulaError) as exc:
            err(f"young function {key!r}: {exc}", line, getattr(exc, "col", None))

    space = dict(doc.get("space", {}))
    unknown = set(space) - {"atoms", "generator", "continuum"}
    for key in sorted(unknown):
        err(f"unknown key {key!r} in [space]", loc.key("space", key))
    if "atoms" in space and "generator" in space:
        err("[space] takes either 'atoms' or 'generator', not both", loc.table("space"))
    if "generator" in space:
        gen = space["generator"]
        line = loc.key("space", "generator")
        if not isinstance(gen, dict) or "mass" not in gen:
            err("generator needs a 'mass' formula in n", line)
        else:
            for key in ("mass", "point"):
                if key in gen:
                    try:
                        gen[key] = _as_formula_or_number(gen[key])
                        if gen[key].variables - {"n"}:
                            err(f"generator {key} may only use n", line)
                    except FormulaError as exc:
                        err(f"malformed generator formula: {exc}", line, exc.col)
            for key in ("start", "count"):
                if key in gen and not (isinstance(gen[key], int) and gen[key] >= (0 if key == "start" else 1)):
                    err(f"generator {key} must be a nonnegative integer", line)
    if "atoms" in space:
        line = loc.key("space", "atoms")
        atoms = space["atoms"]
        if not isinstance(atoms, list) or not all(isinstance(a, dict) and "id" in a and "mass" in a for a in atoms):
            err("atoms must be a list of tables with 'id' and 'mass'", line)
        else:
            for a in atoms:
                try:
                    a["mass"] = float(_as_formula_or_number(a["mass"])())
                    if not (a["mass"] > 0 and math.isfinite(a["mass"])):
                        err(f"atom {a['id']!r} needs a positive finite mass", line)
                except (FormulaError, TypeError) as exc:
                    err(f"atom {a['id']!r}: {exc}", line)
            ids = [a["id"] for a in atoms]
            if len(set(ids)) != len(ids):
                err("atom ids must be unique", line)
    if "continuum" in space:
        c = space["continuum"]
        line = loc.key("space", "continuum")
        if not isinstance(c, dict) or "a" not in c or "b" not in c:
            err("continuum needs 'a' and 'b'", line)
        elif not float(c["b"]) > float(c["a"]):
            err("continuum interval must be nonempty (b > a)", line)
        elif "density" in c:
            try:
                c["density"] = _as_formula_or_number(c["density"])
            except FormulaError as exc:
                err(f"malformed density formula: {exc}", line, exc.col)

    functions = {}
    for key, spec in doc.get("functions", {}).items():
        line = loc.key("functions", key) if loc.table(f"functions.{key}") is None else loc.table(f"functions.{key}")
        if not isinstance(spec, dict):
            err(f"function {key!r} must be a table with 'atoms' and/or 'continuum'", line)
            continue
        out = {}
        for part in ("atoms", "continuum"):
            if part not in spec:
                continue
            value = spec[part]
            if part == "atoms" and isinstance(value, (list, dict)):
                out[part] = value
                continue
            try:
                out[part] = _as_formula_or_number(value)
            except FormulaError as exc:
                err(f"malformed formula in function {key!r}: {exc}", line, exc.col)
        for extra in set(spec) - {"atoms", "continuum"}:
            err(f"unknown key {extra!r} in function {key!r}", line)
        functions[key] = out

    transforms = {}
    for key, spec in doc.get("transform", {}).items():
        line = loc.key("transform", key) if loc.table(f"transform.{key}") is None else loc.table(f"transform.{key}")
        if not isinstance(spec, dict) or "map" not in spec:
            err(f"transformation {key!r} needs a 'map'", line)
            continue
        out = {"map": spec["map"]}
        if isinstance(spec["map"], str):
            try:
                out["map"] = compile_formula(spec["map"])
            except FormulaError as exc:
                err(f"malformed map formula in {key!r}: {exc}", line, exc.col)
        if "continuum_weight" in spec:
            try:
                out["continuum_weight"] = _as_formula_or_number(spec["continuum_weight"])
            except FormulaError as exc:
                err(f"malformed continuum_weight in {key!r}: {exc}", line, exc.col)
        transforms[key] = out

    budget_spec = doc.get("budget", {})
    for key in set(budget_spec) - _BUDGET_KEYS:
        err(f"unknown budget key {key!r}", loc.key("budget", key))
    budget = ms.DEFAULT_BUDGET
    try:
        budget = ms.Budget(**{k: v for k, v in budget_spec.items() if k in _BUDGET_KEYS})
    except (ValueError, TypeError) as exc:
        err(f"invalid budget: {exc}", loc.table("budget"))

    runs = doc.get("run", [])
    if not isinstance(runs, list) or not runs:
        err("no [[run]] requests", None)
        runs = []
    names = set()
    for i, req in enumerate(runs):
        line = loc.table("run", i)
        kind = req.get("request")
        if kind not in REQUESTS:
            err(f"unknown request {kind!r}; expected one of {list(REQUESTS)}", loc.key("run", "request", i) or line)
            continue
        req.setdefault("name", f"{kind}-{i + 1}")
        if req["name"] in names:
            err(f"duplicate run name {req['name']!r}", line)
        names.add(req["name"])
        required, optional = _RUN_FIELDS[kind]
        for key in sorted(required - set(req)):
            err(f"request {req['name']!r} is missing {key!r}", line)
        for key in sorted(set(req) - required - optional - {"request", "name"}):
            err(f"request {req['name']!r} has unknown key {key!r}", loc.key("run", key, i))
        for key in ("phi", "phi1", "phi2", "phi3"):
            if key in req and req[key] not in phis and req[key] not in doc.get("young", {}):
                err(f"request {req['name']!r} references undefined young function {req[key]!r}", loc.key("run", key, i))
        for key, pool, what in (("symbol", functions, "function"), ("function", functions, "function"),
                                ("transform", transforms, "transformation")):
            if key in req and req[key] not in pool:
                err(f"request {req['name']!r} references undefined {what} {req[key]!r}", loc.key("run", key, i))
        if kind == "classify-range":
            need = "symbol" if req.get("operator") == "mult" else "transform"
            if req.get("operator") not in ("mult", "comp"):
                err(f"request {req['name']!r}: operator must be 'mult' or 'comp'", loc.key("run", "operator", i))
            elif need not in req:
                err(f"request {req['name']!r} is missing {need!r}", line)
            if req.get("regime", rg.REGIME_A) not in (rg.REGIME_A, rg.REGIME_B):
                err(f"request {req['name']!r}: regime must be 'A' or 'B'", loc.key("run", "regime", i))
        if "direction" in req and req["direction"] not in young.DIRECTIONS:
            err(f"request {req['name']!r}: direction must be one of {list(young.DIRECTIONS)}", loc.key("run", "direction", i))
        if ("symbol" in req or "transform" in req or "function" in req) and not (
            "atoms" in space or "generator" in space or "continuum" in space
        ):
            err(f"request {req['name']!r} needs a [space]", line)

    expect = doc.get("expect", {})
    for key in expect:
        if key not in names:
            err(f"expectation for unknown run {key!r}", loc.key("expect", key))

    if issues:
        raise ConfigError(issues)
    return AnalysisConfig(name, phis, space, functions, transforms, runs, budget, expect)


# -- building objects ---------------------------------------------------------


def _build_space(spec: dict, budget: ms.Budget) -> ms.MeasureSpace:
    cont = None
    if "continuum" in spec:
        c = spec["continuum"]
        density = c.get("density")
        cont = ms.Continuum(float(c["a"]), float(c["b"]), (lambda x, d=density: d(x=x)) if density is not None else None)
    if "generator" in spec:
        gen = spec["generator"]
        mass, point = gen["mass"], gen.get("point")
        pt = (lambda k, f=point: f(n=k)) if point is not None else None
        start = gen.get("start", 1)
        if "count" in gen:
            ks = np.arange(start, start + gen["count"], dtype=float)
            pts = pt(ks) if pt else None
            return ms.MeasureSpace([int(k) for k in ks], mass(n=ks) * np.ones_like(ks), cont, pts)
        return ms.MeasureSpace.generated(lambda k: mass(n=k), budget.n, start=start, point=pt, continuum=cont)
    atoms = spec.get("atoms", [])
    pts = [a.get("point", np.nan) for a in atoms] if any("point" in a for a in atoms) else None
    return ms.MeasureSpace([a["id"] for a in atoms], [a["mass"] for a in atoms], cont, pts)


def _atom_args(space):
    ids = np.array([a if isinstance(a, (int, float)) else np.nan for a in space.ids], dtype=float)
    return {"n": ids, "x": space.points}


def _build_function(spec: dict, space: ms.MeasureSpace) -> ms.MeasurableFunction:
    atoms = spec.get("atoms")
    if atoms is None:
        values = np.zeros(len(space))
    elif isinstance(atoms, dict):
        # TOML keys are strings; atoms may be labelled by integers
        keyed = {str(a): a for a in space.ids}
        unknown = sorted(set(atoms) - set(keyed))
        if unknown:
            raise ValueError(f"values given for unknown atoms {unknown}")
        values = ms.MeasurableFunction.from_map(space, {keyed[k]: v for k, v in atoms.items()}, default=0.0).atom_values
    elif isinstance(atoms, list):
        values = np.asarray(atoms, dtype=float)
    else:
        args = _atom_args(space)
        values = atoms(**{k: args[k] for k in atoms.variables}) if atoms.variables else np.full(len(space), atoms())
        values = np.broadcast_to(values, (len(space),)).astype(float)
    cont = spec.get("continuum")
    evaluator = (lambda x, f=cont: f(x=x) if f.variables else np.full(np.shape(x), f())) if cont is not None else None
    return ms.MeasurableFunction(space, values, evaluator if space.continuum is not None else None)


def _build_transform(spec: dict, space: ms.MeasureSpace) -> ms.Transformation:
    weight = spec.get("continuum_weight")
    w = (lambda x, f=weight: f(x=x) if f.variables else np.full(np.shape(x), f())) if weight is not None else None
    mapping = spec["map"]
    if isinstance(mapping, dict):
        keyed = {str(a): a for a in space.ids}
        return ms.Transformation.from_map(space, {keyed.get(k, k): keyed.get(str(v), v) for k, v in mapping.items()}, w)
    if isinstance(mapping, list):
        return ms.Transformation(space, [space.index(b) for b in mapping], w)
    return ms.Transformation.from_formula(space, lambda k: mapping(n=k), w)


# -- requests -------------------------------------------------------------------


def _split_inequality(phi, p, grid):
    """Check ``x^p/p <= (phi(x) + psi(x^{p-1}))/p`` and the swapped split on ``grid``."""
    x = grid.values()
    psi = young.conjugate_function(phi)
    lhs = x**p / p
    first = (young.evaluate(phi, x) + young.evaluate(psi, x ** (p - 1))) / p
    second = (young.evaluate(phi, x ** (p - 1)) + young.evaluate(psi, x)) / p
    slack = 1e-9 * np.maximum(1.0, lhs)
    bad1 = np.flatnonzero(lhs > first + slack)
    bad2 = np.flatnonzero(lhs > second + slack)
    out = {"holds": bool(bad1.size == 0 and bad2.size == 0), "points": int(x.size), "grid": [grid.lo, grid.hi]}
    if bad1.size:
        out["first_violation"] = float(x[bad1[0]])
    if bad2.size:
        out["second_violation"] = float(x[bad2[0]])
    return out


def _run_one(req, cfg: AnalysisConfig, objects, rng):
    kind = req["request"]
    phi = lambda key: cfg.young[req[key]] if key in req else None  # noqa: E731
    space = objects.get("space")
    budget = cfg.budget
    assume = tuple(req.get("assume", ()))
    if kind == "conjugate":
        ys = np.atleast_1d(np.asarray(req["y"], dtype=float))
        vals = young.conjugate(phi("phi"), ys, budget.tol)
        return {"outcome": "ok", "y": ys.tolist(), "value": [op._num(v) for v in np.atleast_1d(vals)]}
    if kind == "norm":
        f = objects["functions"][req["function"]]
        res = orlicz.luxemburg_norm(space, f, phi("phi"), budget.tol, budget)
        return {
            "outcome": "diverged" if res.diverged else "finite",
            "norm": op._num(res.value),
            "iterations": res.iterations,
            "bracket": [op._num(b) for b in res.bracket],
            "modular": op._num(orlicz.modular(space, f, phi("phi"), budget)),
        }
    if kind == "split-inequality":
        lo, hi = req.get("grid", [young.DEFAULT_GRID.lo, young.DEFAULT_GRID.hi])
        out = _split_inequality(phi("phi"), float(req["p"]), young.Grid(float(lo), float(hi), young.DEFAULT_GRID.points))
        out["outcome"] = "holds" if out["holds"] else "fails"
        return out
    if kind == "check-mult":
        u = objects["functions"][req["symbol"]]
        v = op.assess_mult(u, phi("phi1"), phi("phi2"), phi("phi3"), budget,
                           direction=req.get("direction", young.PHI1_LEFT), assume=assume)
        out = {"outcome": v.status, **v.as_dict()}
        if "samples" in req and space.purely_atomic and not space.truncated:
            out["empirical_norm"] = op.sample_operator_norm("mult", u, space, phi("phi1"), phi("phi2"), req["samples"], rng)
        return out
    if kind == "check-comp":
        t = objects["transforms"][req["transform"]]
        v = op.assess_comp(t, phi("phi1"), phi("phi2"), phi("phi3"), budget, assume=assume)
        out = {"outcome": v.status, **v.as_dict()}
        if "samples" in req and space.purely_atomic and not space.truncated:
            out["empirical_norm"] = op.sample_operator_norm("comp", t, space, phi("phi1"), phi("phi2"), req["samples"], rng)
        return out
    if kind == "classify-range":
        regime = req.get("regime", rg.REGIME_A)
        if req["operator"] == "mult":
            report = rg.classify_mult(objects["functions"][req["symbol"]], phi("phi1"), phi("phi2"), phi("phi3"),
                                      regime, budget, assume=assume)
        else:
            report = rg.classify_comp(objects["transforms"][req["transform"]], phi("phi1"), phi("phi2"), phi("phi3"),
                                      regime, budget, assume=assume)
        return {"outcome": report.classification, **report.as_dict()}
    raise ValueError(kind)


@dataclass
class Report:
    """Ordered per-request entries plus the budget they ran under."""

    config: str
    budget: dict
    entries: list
    space_note: str = ""

    def as_dict(self):
        out = {"config": self.config, "budget": self.budget, "entries": self.entries}
        if self.space_note:
            out["space_note"] = self.space_note
        return out

    def to_machine(self) -> str:
        return json.dumps(op._plain(self.as_dict()), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        b = self.budget
        lines = [f"config: {self.config}",
                 f"budget: n={b['n']} threshold={b['threshold']:g} tol={b['tol']:g} seed={b['seed']}"]
        if self.space_note:
            lines.append(f"space: {self.space_note}")
        for i, e in enumerate(self.entries, 1):
            lines.append(f"[{i}] {e['name']} ({e['request']}): {e['outcome']}")
            for key in ("bound", "norm", "value", "rank_bound", "classification", "clause", "reason", "empirical_norm", "error"):
                if e.get(key) not in (None, "", []):
                    lines.append(f"    {key}: {e[key]}")
            for entry in e.get("criteria_log", []):
                lines.append(f"    - {entry[0]}: {entry[1]} {json.dumps(op._plain(entry[2]), sort_keys=True)}")
            for note in e.get("notes", []):
                lines.append(f"    note: {note}")
        return "\n".join(lines) + "\n"


def run(cfg: AnalysisConfig, requests=None, timing: bool = False) -> Report:
    """Execute the config's requests (optionally only those of the kinds in ``requests``).

    Module refusals and numerical failures become report entries with
    outcome ``Refused``.  Wall-clock timing is added only on request so that
    reports are reproducible byte for byte.
    """
    objects = {}
    note = ""
    if cfg.space:
        space = _build_space(cfg.space, cfg.budget)
        objects["space"] = space
        objects["functions"] = {k: _build_function(v, space) for k, v in cfg.functions.items()}
        objects["transforms"] = {k: _build_transform(v, space) for k, v in cfg.transforms.items()}
        note = f"{len(space)} atoms" + (", truncated" if space.truncated else "") + (f"; {space.note}" if space.note else "")
    entries = []
    for i, req in enumerate(cfg.runs):
        if requests is not None and req["request"] not in requests:
            continue
        rng = np.random.default_rng([cfg.budget.seed, i])
        start = time.perf_counter()
        try:
            body = _run_one(req, cfg, objects, rng)
        except (OrliczError, ValueError, FloatingPointError) as exc:
            body = {"outcome": REFUSED, "error": str(exc)}
        entry = {"name": req["name"], "request": req["request"], **body}
        if timing:
            entry["seconds"] = round(time.perf_counter() - start, 6)
        entries.append(op._plain(entry))
    return Report(cfg.name, dataclasses.asdict(cfg.budget), entries, note)


def check_expectations(report: Report, expect: dict) -> list[dict]:
    """Mismatches between report entries and ``expect`` (outcome string or field table).

    Float fields compare with a relative tolerance of 1e-9.
    """
    by_name = {e["name"]: e for e in report.entries}
    out = []
    for name, want in expect.items():
        if name not in by_name:
            continue
        wanted = want if isinstance(want, dict) else {"outcome": want}
        for key, value in wanted.items():
            got = by_name[name].get(key)
            if isinstance(value, float) and isinstance(got, (int, float)):
                if math.isclose(got, value, rel_tol=1e-9, abs_tol=1e-12):
                    continue
            if got != value:
                out.append({"run": name, "field": key, "expected": value, "got": got})
    return out


def fixture_texts(name: str) -> dict:
    """Fixture file name -> text for an example; one example may ship several spaces."""
    if name not in EXAMPLES:
        raise ConfigError([ConfigIssue(None, f"unknown example {name!r}; expected one of {list(EXAMPLES)}")])
    stem = f"example_{name.replace('.', '_')}"
    root = resources.files("orliczops.fixtures")
    files = sorted(p.name for p in root.iterdir() if p.name == f"{stem}.toml" or p.name.startswith(f"{stem}_"))
    return {f: root.joinpath(f).read_text("utf-8") for f in files}


def reproduce_example(name: str, overrides: dict | None = None, timing: bool = False):
    """Run the shipped fixtures of an example; returns ``(report, mismatches)``.

    Entries from several fixture files are concatenated in file order.
    """
    entries, notes, mismatches, budget = [], [], [], None
    for fname, text in fixture_texts(name).items():
        cfg = parse_config(text, fname)
        if overrides:
            cfg.budget = dataclasses.replace(cfg.budget, **overrides)
        report = run(cfg, timing=timing)
        entries += report.entries
        budget = report.budget
        if report.space_note:
            notes.append(f"{fname}: {report.space_note}")
        mismatches += check_expectations(report, cfg.expect)
    return Report(f"example {name}", budget, entries, "; ".join(notes)), mismatches


# -- argument parsing -------------------------------------------------------------


def _common(parser):
    parser.add_argument("--tol", type=float, help="bisection and conjugation tolerance")
    parser.add_argument("--budget-n", type=int, help="truncation length for generated atom families")
    parser.add_argument("--threshold", type=float, help="divergence threshold for partial sums")
    parser.add_argument("--seed", type=int, help="seed for sampled operator norms")
    parser.add_argument("--out", type=Path, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=["text", "machine"], default="text")
    parser.add_argument("--timing", action="store_true", help="add wall-clock seconds to each entry")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orliczops", description="Orlicz-space operator analyses from a config file")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in ("run", *REQUESTS[:5]):
        p = sub.add_parser(cmd, help=f"run the {cmd} requests of a config" if cmd != "run" else "run every request")
        p.add_argument("--config", type=Path, required=True)
        _common(p)
    p = sub.add_parser("reproduce-example", help="run a shipped example fixture and compare with its expectations")
    p.add_argument("name", choices=EXAMPLES)
    _common(p)
    return parser


def _overrides(args):
    pairs = {"tol": args.tol, "n": args.budget_n, "threshold": args.threshold, "seed": args.seed}
    return {k: v for k, v in pairs.items() if v is not None}


def _emit(report: Report, args):
    text = report.to_machine() if args.format == "machine" else report.to_text()
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "reproduce-example":
            report, mismatches = reproduce_example(args.name, _overrides(args), args.timing)
        else:
            try:
                text = args.config.read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError([ConfigIssue(None, f"cannot read config: {exc}")]) from None
            cfg = parse_config(text, str(args.config))
            cfg.budget = dataclasses.replace(cfg.budget, **_overrides(args))
            kinds = None if args.command == "run" else {args.command}
            if kinds and not any(r["request"] in kinds for r in cfg.runs):
                raise ConfigError([ConfigIssue(None, f"config has no {args.command} requests")])
            report = run(cfg, kinds, args.timing)
            mismatches = check_expectations(report, cfg.expect)
    except ConfigError as exc:
        for issue in exc.errors:
            print(f"config error: {issue}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    _emit(report, args)
    if mismatches:
        for m in mismatches:
            print(f"mismatch: {m['run']}.{m['field']}: expected {m['expected']!r}, got {m['got']!r}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
