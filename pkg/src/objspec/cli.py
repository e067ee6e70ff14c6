"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 capability error (unsupported LTL
fragment, trajectories that are not lassos), 4 check failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import NotLassoEnumerable, ObjspecError, UnsupportedFragment, ValidationError
from .hasse import derive_hasse, emit_dot, relation_table, verify_all
from .io import environment_from_json, objective_from_json, policy_from_json, read_json, with_gamma
from .objectives.evaluators import Exact, MonteCarlo, compare, evaluate
from .objectives.specs import PREORDER_FORMALISMS
from .separations.checks import run_separation
from .separations.fixtures import BUILDERS, FIXTURE_NAMES, SeparationFixture, get_fixture

EXIT_OK, EXIT_INPUT, EXIT_CAPABILITY, EXIT_CHECK = 0, 2, 3, 4

HINTS = {
    UnsupportedFragment: "formulas must be boolean combinations of local formulas, (eventually g), "
                         "(always g) and (until g h) with g, h local",
    NotLassoEnumerable: "use a deterministic policy on a deterministic environment, or pass --samples N "
                        "(and --horizon H for FTR) for a Monte Carlo estimate",
}

FORMATS = {"eval": ("text", "json"), "check": ("json", "text"), "hasse": ("dot", "json", "text"),
           "list-fixtures": ("text", "json")}


@dataclass
class CliConfig:
    subcommand: str
    env: str | None = None
    policies: list = field(default_factory=list)
    objective: str | None = None
    fixture: str | None = None
    format: str | None = None
    gamma: float | None = None
    seed: int = 0
    tolerance: float | None = None
    samples: int | None = None
    horizon: int | None = None

    def output_format(self) -> str:
        allowed = FORMATS[self.subcommand]
        fmt = self.format or allowed[0]
        if fmt not in allowed:
            raise ValidationError(f"--format {fmt} is not available for {self.subcommand}; "
                                  f"choose from {', '.join(allowed)}")
        return fmt


# --- fixture resolution -----------------------------------------------------------


def _fixture_file(name: str) -> Path | None:
    root = os.environ.get("OBJSPEC_FIXTURE_DIR")
    if not root:
        return None
    path = Path(root) / f"{name}.json"
    return path if path.is_file() else None


def _fixture_from_file(name: str, path: Path) -> SeparationFixture:
    doc = read_json(path)
    if not isinstance(doc, dict) or "environment" not in doc:
        raise ValidationError(f"{path}: fixture files need an 'environment' field")
    env = environment_from_json(doc["environment"])
    if name in BUILDERS:
        base = BUILDERS[name]().with_env(env)
        policies, objectives = dict(base.policies), dict(base.objectives)
        gamma, targets = base.gamma, base.targets
    else:
        policies, objectives, gamma, targets = {}, {}, 0.9, ()
    for pname, mapping in doc.get("policies", {}).items():
        policies[pname] = policy_from_json(env, mapping, name=pname)
    for oname, odoc in doc.get("objectives", {}).items():
        objectives[oname] = objective_from_json(env, odoc)
    gamma = float(doc.get("gamma", gamma))
    return SeparationFixture(name, env, gamma, policies, objectives, targets)


def load_fixture(name: str) -> SeparationFixture:
    """Bundled fixture, unless ``$OBJSPEC_FIXTURE_DIR/<name>.json`` overrides it."""
    path = _fixture_file(name)
    if path is not None:
        return _fixture_from_file(name, path)
    return get_fixture(name)


def _is_path(value: str) -> bool:
    return value.endswith(".json") or os.sep in value or Path(value).is_file()


def _resolve_inputs(cfg: CliConfig):
    fixture = load_fixture(cfg.fixture) if cfg.fixture else None
    if cfg.env:
        env = environment_from_json(read_json(cfg.env))
        if fixture is not None and fixture.name in BUILDERS:
            fixture = fixture.with_env(env)
    elif fixture is not None:
        env = fixture.env
    else:
        raise ValidationError("eval needs --env PATH or --fixture NAME")

    if not cfg.objective:
        raise ValidationError("eval needs --objective PATH|NAME")
    if _is_path(cfg.objective):
        name, spec = Path(cfg.objective).stem, objective_from_json(env, read_json(cfg.objective))
    elif fixture is not None:
        name, spec = cfg.objective, fixture.objective(cfg.objective)
    else:
        raise ValidationError(f"objective {cfg.objective!r} is not a file; named objectives need --fixture")

    policies = {}
    for ref in cfg.policies:
        if _is_path(ref):
            policies[Path(ref).stem] = policy_from_json(env, read_json(ref), name=Path(ref).stem)
        elif fixture is not None:
            policies[ref] = fixture.policy(ref)
        else:
            raise ValidationError(f"policy {ref!r} is not a file; named policies need --fixture")
    if not policies:
        if fixture is None:
            raise ValidationError("eval needs at least one --policy")
        policies = dict(fixture.policies)
    if cfg.gamma is not None:
        spec = with_gamma(spec, cfg.gamma)
    return env, name, spec, policies


# --- subcommands ------------------------------------------------------------------


def _fmt_value(x: float) -> str:
    return f"{float(x):.12g}"


def cmd_eval(cfg: CliConfig) -> int:
    fmt = cfg.output_format()
    env, name, spec, policies = _resolve_inputs(cfg)
    mode = Exact()
    if cfg.samples:
        mode = MonteCarlo(samples=cfg.samples, horizon=cfg.horizon, seed=cfg.seed,
                          tolerance=cfg.tolerance if cfg.tolerance is not None else 1e-3)
    if spec.formalism not in PREORDER_FORMALISMS:
        values = {p: evaluate(spec, env, pol, mode) for p, pol in policies.items()}
        if fmt == "json":
            print(json.dumps({"objective": name, "formalism": str(spec.formalism), "values": values}, indent=2))
        elif len(values) == 1:
            print(_fmt_value(next(iter(values.values()))))
        else:
            for p, v in values.items():
                print(f"{p}\t{_fmt_value(v)}")
        return EXIT_OK
    if len(policies) < 2:
        raise ValidationError(f"{spec.formalism} objectives only compare policies; pass at least two")
    kwargs = {"tol": cfg.tolerance} if cfg.tolerance is not None else {}
    rows = [(a, b, compare(spec, env, policies[a], policies[b], mode, **kwargs))
            for a, b in itertools.combinations(policies, 2)]
    if fmt == "json":
        print(json.dumps({"objective": name, "formalism": str(spec.formalism),
                          "comparisons": [{"first": a, "second": b, "ordering": str(o)} for a, b, o in rows]},
                         indent=2))
    else:
        symbol = {"Less": "<", "Equal": "~", "Greater": ">"}
        for a, b, o in rows:
            print(f"{a} {symbol[str(o)]} {b}")
    return EXIT_OK


def cmd_check(cfg: CliConfig) -> int:
    fmt = cfg.output_format()
    if not cfg.fixture:
        raise ValidationError("check needs a fixture name")
    fixture = load_fixture(cfg.fixture)
    if not fixture.targets:
        raise ValidationError(f"fixture {cfg.fixture} declares no separation targets to check")
    report = run_separation(fixture)
    if fmt == "json":
        print(report.dumps())
    else:
        for c in report.checks:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.claim}")
        print(f"{fixture.name}: {'pass' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_hasse(cfg: CliConfig) -> int:
    fmt = cfg.output_format()
    report = verify_all(seed=cfg.seed)
    if fmt == "dot":
        print(emit_dot(derive_hasse(relation_table())), end="")
    elif fmt == "json":
        print(report.dumps())
    else:
        graph = derive_hasse(relation_table())
        for k, cls in enumerate(graph.classes):
            print(f"c{k}: {', '.join(cls)}")
        for a, b in graph.edges:
            print(f"c{a} < c{b}")
        print(f"cells: {report.counts()}")
    for msg in report.failures:
        print(f"verification failure: {msg}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_list_fixtures(cfg: CliConfig) -> int:
    fmt = cfg.output_format()
    names = list(FIXTURE_NAMES)
    root = os.environ.get("OBJSPEC_FIXTURE_DIR")
    if root and Path(root).is_dir():
        names += sorted(p.stem for p in Path(root).glob("*.json") if p.stem not in BUILDERS)
    rows = []
    for name in names:
        fx = load_fixture(name)
        rows.append({"name": name, "override": _fixture_file(name) is not None,
                     "policies": list(fx.policies), "objectives": list(fx.objectives),
                     "targets": [t.name for t in fx.targets]})
    if fmt == "json":
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            mark = " (override)" if r["override"] else ""
            print(f"{r['name']}{mark}: targets {', '.join(r['targets']) or '-'}; "
                  f"policies {', '.join(r['policies'])}; objectives {', '.join(r['objectives'])}")
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "hasse": cmd_hasse, "list-fixtures": cmd_list_fixtures}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="objspec", description="Evaluate and compare objective specifications.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "text", "dot"))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tolerance", type=float)

    p = sub.add_parser("eval", help="evaluate an objective on policies")
    p.add_argument("--env", help="environment JSON")
    p.add_argument("--policy", action="append", default=[], help="policy JSON or fixture policy name")
    p.add_argument("--objective", help="objective JSON or fixture objective name")
    p.add_argument("--fixture", help="bundled fixture supplying names")
    p.add_argument("--gamma", type=float, help="override the objective's discount")
    p.add_argument("--samples", type=int, help="Monte Carlo samples for trajectory objectives")
    p.add_argument("--horizon", type=int, help="Monte Carlo truncation horizon")
    common(p)

    p = sub.add_parser("check", help="replay a separation fixture")
    p.add_argument("name", nargs="?")
    p.add_argument("--fixture")
    common(p)

    p = sub.add_parser("hasse", help="verify the relation table and print the Hasse diagram")
    common(p)

    p = sub.add_parser("list-fixtures", help="list bundled fixtures")
    common(p)
    return parser


def parse_config(argv=None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    fixture = getattr(ns, "fixture", None) or getattr(ns, "name", None)
    return CliConfig(ns.subcommand, getattr(ns, "env", None), list(getattr(ns, "policy", [])),
                     getattr(ns, "objective", None), fixture, ns.format, getattr(ns, "gamma", None),
                     ns.seed, ns.tolerance, getattr(ns, "samples", None),
                     getattr(ns, "horizon", None))


def _message(exc: Exception) -> str:
    # KeyError-derived errors would otherwise print with quotes.
    return str(exc.args[0]) if exc.args else str(exc)


def main(argv=None) -> int:
    cfg = parse_config(argv)
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except (UnsupportedFragment, NotLassoEnumerable) as exc:
        print(f"error: {_message(exc)}\nhint: {HINTS[type(exc)]}", file=sys.stderr)
        return EXIT_CAPABILITY
    except ObjspecError as exc:
        print(f"error: {_message(exc)}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
