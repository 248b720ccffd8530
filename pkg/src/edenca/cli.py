"""Command-line entry point.

Every subcommand writes one JSON report (stdout or ``--out``) that embeds
the configuration that produced it. Exit codes: 0 success, 1 usage
error, 2 verification failure, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path

from . import __version__
from .automata import Pattern, check_mep_certificate, evolve, is_goe_bruteforce
from .converse import (build_theta, build_theta_general, mep_witness, mep_witness_general, preimage,
                       preimage_general)
from .correspondence import (correspondence_document, correspondence_from_document, double_field,
                             verify_correspondence)
from .errors import BudgetExceeded, EdenError, UsageError
from .flow import build_correspondence, expansion_profile
from .groups import ball, ball_layers, group_from_name, parse_genset
from .linear import AlgebraElement, LinearRule, goe_witness_linear, kernel_scan, muller_rule
from .oracle import (BUDGET, IDENTITY_RULE, XOR_RULE, SearchBudget, elementary_rule, find_goe, find_mep,
                     interval, majority_rule, moore_sweep)
from .treefield import build_tree_field, field_to_dot, verify_field

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_BUDGET = 0, 1, 2, 3

DEFAULTS = {
    "group": "F2", "gens": None, "seed": 0, "workers": 1, "budget": None,
    "radius": 2, "max_radius": 4, "m": 2, "n": 1, "factor": 2, "trials": 20,
    "y": "e", "preset": "muller", "rule": "xor", "width": 1, "max_width": 8,
}


@dataclass
class ExperimentConfig:
    """Everything that determines a run; round-trips through JSON."""

    command: str
    group: str
    gens: list[str] | None = None
    seed: int = 0
    workers: int = 1
    params: dict = dc_field(default_factory=dict)
    out: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        return cls(**doc)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Failed(Exception):
    """Verification failed; the report is still written."""


class OverBudget(Exception):
    """A search ran out of budget; the report is still written."""


def _common(p: argparse.ArgumentParser, *params: str):
    p.add_argument("--config", help="JSON file of option values (flags override it)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--group", help="F2, F3, C2*C2*C2, Z, Z2, ...")
    p.add_argument("--gens", help="ordered generating set, e.g. 'a,a^-1,b,b^-1'")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="recorded; searches run sequentially")
    p.add_argument("--budget", type=int, help="enumeration / solver budget")
    flags = {
        "radius": dict(type=int), "max_radius": dict(type=int), "m": dict(type=int),
        "n": dict(type=int), "factor": dict(type=int, help="doubling factor c (m=2c, n=c)"),
        "trials": dict(type=int), "y": dict(help="group element"), "pattern": dict(help="pattern file"),
        "psi_out": dict(help="write the preimage pattern here"),
        "witness_out": dict(help="write the witness pair here"),
        "corr": dict(help="correspondence file (from 'corr build --export')"),
        "export": dict(help="write the correspondence witness here"),
        "dot": dict(help="DOT output path"),
        "preset": dict(choices=["muller", "z-control"]),
        "rule": dict(help="rule0..rule15, xor, identity, majority, muller"),
        "width": dict(type=int), "max_width": dict(type=int),
    }
    for name in params:
        p.add_argument("--" + name.replace("_", "-"), dest=name, **flags[name])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edenca", description="Cellular automata with MEP but no Garden of Eden.")
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="area", required=True, parser_class=_Parser)

    def area(name, cmds):
        sp = top.add_parser(name).add_subparsers(dest="cmd", required=True, parser_class=_Parser)
        for cmd, params in cmds.items():
            _common(sp.add_parser(cmd), *params)

    area("group", {"ball": ["radius"]})
    area("field", {"build": ["radius"], "verify": ["radius"], "export-dot": ["radius", "dot"]})
    area("corr", {"build": ["m", "n", "radius", "export"], "profile": ["max_radius"]})
    moore_cmds = {
        "build": [], "preimage": ["pattern", "radius", "psi_out"],
        "mep-witness": ["y", "pattern", "witness_out"], "roundtrip": ["radius", "trials"],
    }
    area("moore", moore_cmds)
    area("moore-gen", {k: v + ["factor", "corr"] for k, v in moore_cmds.items()})
    area("linca", {"kernel-scan": ["preset", "radius"], "goe-witness": ["preset"]})
    area("oracle", {"goe": ["rule", "width", "radius"], "mep": ["rule", "width", "radius"],
                    "sweep": ["max_width"]})
    return parser


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        if not isinstance(doc, dict):
            raise UsageError("config must be a JSON object")
        doc = doc.get("params", {}) | {k: v for k, v in doc.items() if k != "params"}
        for k, v in doc.items():
            k = k.replace("-", "_")
            if hasattr(args, k) and getattr(args, k) is None:
                setattr(args, k, v)
    for k, v in DEFAULTS.items():
        if k == "group" and args.area in ("linca", "oracle"):
            continue
        if hasattr(args, k) and getattr(args, k) is None:
            setattr(args, k, v)
    return args


def _config(args) -> ExperimentConfig:
    skip = {"area", "cmd", "config", "out", "group", "gens", "seed", "workers"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}
    gens = None
    if args.gens:
        gens = args.gens if isinstance(args.gens, list) else [t for t in args.gens.split(";" if "(" in args.gens else ",")]
    return ExperimentConfig(command=f"{args.area} {args.cmd}", group=args.group, gens=gens,
                            seed=args.seed, workers=args.workers, params=params, out=args.out)


def _group_and_gens(args):
    group = group_from_name(args.group)
    S = parse_genset(group, args.gens) if args.gens else group.standard_genset()
    return group, S


def _random_pattern(states, domain, rng: random.Random) -> Pattern:
    return Pattern(states, {x: states[rng.randrange(len(states))] for x in domain}, check=False)


def _load_pattern(path: str, group) -> Pattern:
    try:
        return Pattern.loads(Path(path).read_text(), group)
    except OSError as exc:
        raise UsageError(f"cannot read pattern file: {exc}") from exc


def _write(path: str | None, text: str):
    if path:
        Path(path).write_text(text)


# -- handlers ----------------------------------------------------------------


def cmd_group_ball(args):
    group, S = _group_and_gens(args)
    elems = ball(group, S, args.radius)
    return {"size": len(elems), "elements": [str(x) for x in elems]}


def _field(args):
    group, S = _group_and_gens(args)
    return build_tree_field(group, S)


def cmd_field_build(args):
    f = _field(args)
    e = f.group.identity()
    sample = [[str(x), str(f(x)), f.status(x)[0]] for layer in ball_layers(f.group, f.S, args.radius) for x in layer]
    return {"S": f.S.names(), "root_image": str(f(e)), "root_fiber": [str(y) for y in f.fiber(e)],
            "fingerprint": f.fingerprint(), "sample": sample}


def cmd_field_verify(args):
    rep = verify_field(_field(args), args.radius)
    doc = rep.to_document()
    if not rep.ok:
        raise Failed(doc)
    return doc


def cmd_field_export_dot(args):
    text = field_to_dot(_field(args), args.radius)
    if args.dot:
        _write(args.dot, text)
        return {"dot": args.dot, "lines": text.count("\n")}
    return {"dot": text}


def cmd_corr_build(args):
    group, S = _group_and_gens(args)
    kw = {"budget": args.budget} if args.budget else {}
    rep = build_correspondence(group, S, args.m, args.n, args.radius, **kw)
    doc = rep.to_document()
    if rep.witness is not None:
        layers = ball_layers(group, S, args.radius)
        check = verify_correspondence(rep.witness, [x for l in layers for x in l], [x for l in layers[:-1] for x in l])
        doc["recount"] = check.to_document()
        if args.export:
            _write(args.export, json.dumps(correspondence_document(rep.witness, rep.witness.rows), indent=1,
                                           ensure_ascii=False) + "\n")
        if not check.ok:
            raise Failed(doc)
    if not rep.feasible:
        raise Failed(doc)
    return doc


def cmd_corr_profile(args):
    group, S = _group_and_gens(args)
    kw = {"budget": args.budget} if args.budget else {}
    prof = expansion_profile(group, S, args.max_radius, **kw)
    return {"profile": [{"radius": r, "best_ratio": f"{q.numerator}/{q.denominator}"} for r, q in prof]}


def _rule(args, general: bool):
    f = _field(args) if not (general and args.corr) else None
    if not general:
        return build_theta(f)
    if args.corr:
        try:
            corr = correspondence_from_document(json.loads(Path(args.corr).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read correspondence: {exc}") from exc
        return build_theta_general(corr)
    return build_theta_general(double_field(f, args.factor))


def _solvers(general):
    return (preimage_general, mep_witness_general) if general else (preimage, mep_witness)


def cmd_moore_build(args, general=False):
    return _rule(args, general).summary()


def cmd_moore_preimage(args, general=False):
    rule = _rule(args, general)
    pre, _ = _solvers(general)
    if args.pattern:
        phi = _load_pattern(args.pattern, rule.group)
    else:
        phi = _random_pattern(rule.states, ball(rule.group, rule.S, args.radius), random.Random(args.seed))
    psi = pre(rule, phi)
    ok = evolve(rule, psi).restrict(phi.domain) == phi
    _write(args.psi_out, psi.dumps() + "\n")
    doc = {"cells_in": len(phi), "cells_out": len(psi), "roundtrip": ok}
    if not ok:
        raise Failed(doc)
    return doc


def cmd_moore_mep_witness(args, general=False):
    rule = _rule(args, general)
    _, witness = _solvers(general)
    y = rule.group.parse(args.y)
    if args.pattern:
        phi = _load_pattern(args.pattern, rule.group)
    else:
        dom = [y * x for x in ball(rule.group, rule.S, 1)]
        phi = _random_pattern(rule.states, dom, random.Random(args.seed))
    p1, p2, Y = witness(rule, y, phi)
    ok = check_mep_certificate(rule, p1, p2, Y)
    diff = sorted((x for x in p1 if p1[x] != p2[x]), key=lambda x: x.key)
    if args.witness_out:
        _write(args.witness_out, json.dumps({"Y": [str(x) for x in sorted(Y, key=lambda x: x.key)],
                                             "first": p1.to_document(), "second": p2.to_document()},
                                            indent=1, ensure_ascii=False) + "\n")
    doc = {"y": str(y), "Y": [str(x) for x in sorted(Y, key=lambda x: x.key)],
           "differing_cells": [str(x) for x in diff],
           "states": [p1.states.format(p1[x]) for x in diff] + [p2.states.format(p2[x]) for x in diff],
           "certificate": ok}
    if not ok:
        raise Failed(doc)
    return doc


def cmd_moore_roundtrip(args, general=False):
    rule = _rule(args, general)
    pre, _ = _solvers(general)
    dom = ball(rule.group, rule.S, args.radius)
    rng = random.Random(args.seed)
    passed = 0
    for _ in range(args.trials):
        phi = _random_pattern(rule.states, dom, rng)
        if evolve(rule, pre(rule, phi)).restrict(dom) == phi:
            passed += 1
    doc = {"trials": args.trials, "passed": passed, "cells": len(dom)}
    if passed != args.trials:
        raise Failed(doc)
    return doc


def _linear_preset(name: str) -> LinearRule:
    if name == "muller":
        return muller_rule()
    Z = group_from_name("Z")
    unit = AlgebraElement.delta(Z.identity())
    return LinearRule(unit, unit, name="z-control")


def cmd_linca_kernel_scan(args):
    rule = _linear_preset(args.preset)
    kw = {"budget": args.budget} if args.budget else {}
    doc = kernel_scan(rule, args.radius, **kw).to_document()
    doc["rule"] = rule.summary()
    return doc


def cmd_linca_goe_witness(args):
    rule = _linear_preset(args.preset)
    w = goe_witness_linear(rule)
    confirmed = is_goe_bruteforce(rule, w)
    doc = {"rule": rule.summary(), "witness": w.to_document()["cells"], "bruteforce_goe": confirmed}
    if not confirmed:
        raise Failed(doc)
    return doc


def _oracle_rule(name: str):
    if name == "xor":
        return elementary_rule(XOR_RULE), True
    if name == "identity":
        return elementary_rule(IDENTITY_RULE), True
    if name == "constant":
        return elementary_rule(0), True
    if name == "majority":
        return majority_rule(), True
    if name == "muller":
        return muller_rule(), False
    for prefix in ("rule", "table:"):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return elementary_rule(int(name[len(prefix):])), True
    raise UsageError(f"unknown rule {name!r}")


def _search_budget(args) -> SearchBudget:
    return SearchBudget(max_assignments=args.budget) if args.budget else SearchBudget()


def _oracle(args, finder):
    rule, on_z = _oracle_rule(args.rule)
    Y = interval(args.width) if on_z else ball(rule.group, None, args.radius)
    out = finder(rule, Y, _search_budget(args))
    doc = {"rule": rule.summary(), "Y": [str(y) for y in sorted(Y, key=lambda x: x.key)],
           "status": out.status, "detail": out.detail}
    if out.found:
        w = out.witness
        doc["witness"] = (w.to_document()["cells"] if isinstance(w, Pattern)
                          else [w[0].to_document()["cells"], w[1].to_document()["cells"]])
    if out.status == BUDGET:
        raise OverBudget(doc)
    return doc


def cmd_oracle_goe(args):
    return _oracle(args, find_goe)


def cmd_oracle_mep(args):
    return _oracle(args, find_mep)


def cmd_oracle_sweep(args):
    rows = moore_sweep(args.max_width, _search_budget(args))
    doc = {"rows": [r.to_document() for r in rows],
           "consistent": all(r.consistent for r in rows)}
    if not doc["consistent"]:
        raise Failed(doc)
    return doc


HANDLERS = {
    ("group", "ball"): cmd_group_ball,
    ("field", "build"): cmd_field_build,
    ("field", "verify"): cmd_field_verify,
    ("field", "export-dot"): cmd_field_export_dot,
    ("corr", "build"): cmd_corr_build,
    ("corr", "profile"): cmd_corr_profile,
    ("moore", "build"): cmd_moore_build,
    ("moore", "preimage"): cmd_moore_preimage,
    ("moore", "mep-witness"): cmd_moore_mep_witness,
    ("moore", "roundtrip"): cmd_moore_roundtrip,
    ("linca", "kernel-scan"): cmd_linca_kernel_scan,
    ("linca", "goe-witness"): cmd_linca_goe_witness,
    ("oracle", "goe"): cmd_oracle_goe,
    ("oracle", "mep"): cmd_oracle_mep,
    ("oracle", "sweep"): cmd_oracle_sweep,
}
for _cmd in ("build", "preimage", "mep-witness", "roundtrip"):
    HANDLERS[("moore-gen", _cmd)] = (lambda h: lambda a: h(a, general=True))(HANDLERS[("moore", _cmd)])


def render(config: ExperimentConfig, status: str, result) -> str:
    doc = {"tool": {"name": "edenca", "version": __version__},
           "config": config.to_dict(), "status": status, "result": result}
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    try:
        args = _resolve(build_parser().parse_args(argv))
        config = _config(args)
    except UsageError as exc:
        print(f"edenca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    handler = HANDLERS[(args.area, args.cmd)]
    try:
        text, code = render(config, "ok", handler(args)), EXIT_OK
    except Failed as exc:
        text, code = render(config, "failed", exc.args[0]), EXIT_FAILED
    except OverBudget as exc:
        text, code = render(config, "budget", exc.args[0]), EXIT_BUDGET
    except BudgetExceeded as exc:
        text, code = render(config, "budget", {"message": str(exc)}), EXIT_BUDGET
    except EdenError as exc:
        print(f"edenca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
