"""Command-line front end.

    loopmult <group> <action> --config run.toml [--out report.json] [cap flags]

Exit status: 0 on success, 1 when the mathematics says no (a failed
verification, an improper loop, a closure cap hit), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .config import COMMANDS, SCHEMA_VERSION, ConfigError, RunConfig, load_config
from .groups import GroupError, make_model
from .kepka import (KepkaError, LoopShape, check_transversal, general_poly, left_family, lv_family,
                    solve_transversal)
from .loops import _PARAM_VARS, LoopError, LoopSpec, loop_ldiv, loop_mul, loop_rdiv, properness_check, verify_axioms
from .mult import ImproperLoop, identify_mult
from .poly import Poly, PolyError, as_rational, fmt_rational, translate_span_dim
from .sections import SectionError, SectionSpec, oracle_agreement, sharp_transitivity_check
from .vfield import ClosureCapExceeded

USAGE_ERRORS = (ConfigError, LoopError, PolyError, GroupError, SectionError, KepkaError, TypeError)


def _q(v) -> str:
    return fmt_rational(as_rational(v))


def _pt(p) -> list:
    return [_q(v) for v in p]


def _element(data: dict, key: str, dim: int) -> tuple:
    raw = data.get(key)
    if not isinstance(raw, list) or len(raw) != dim:
        raise ConfigError(f"group.{key} must be a list of {dim} rationals")
    try:
        return tuple(as_rational(v) for v in raw)
    except (PolyError, TypeError) as exc:
        raise ConfigError(f"group.{key}: {exc}") from None


def _point(data: dict, key: str) -> tuple:
    raw = data.get(key)
    if not isinstance(raw, list) or len(raw) != 3:
        raise ConfigError(f"points.{key} must be a list of 3 rationals")
    try:
        return tuple(as_rational(v) for v in raw)
    except (PolyError, TypeError) as exc:
        raise ConfigError(f"points.{key}: {exc}") from None


def _loop(cfg: RunConfig) -> LoopSpec:
    return LoopSpec.from_mapping(cfg.loop)


def _model_from(data: dict, section: str):
    name = data.get("model")
    if name is None:
        raise ConfigError(f"{section}.model is required")
    params = {k: data[k] for k in ("n", "m") if k in data}
    return make_model(name, **params)


# -- handlers: each returns (ok, result) -------------------------------------

def cmd_group_mul(cfg: RunConfig):
    M = _model_from(cfg.group, "group")
    a = _element(cfg.group, "a", M.dim)
    b = _element(cfg.group, "b", M.dim)
    ab = M.mul(a, b)
    result = {"model": M.name, "model_params": M.params(), "product": _pt(ab),
              "inverse_a": _pt(M.inv(a)), "matrix_oracle": M.matrix_check(a, b)}
    return result["matrix_oracle"] is not False, result


def cmd_loop_eval(cfg: RunConfig):
    spec = _loop(cfg)
    p, q = _point(cfg.points, "p"), _point(cfg.points, "q")
    return True, {"product": _pt(loop_mul(spec, p, q)),
                  "left_division": _pt(loop_ldiv(spec, p, q)),
                  "right_division": _pt(loop_rdiv(spec, q, p))}


def cmd_loop_verify(cfg: RunConfig):
    spec = _loop(cfg)
    rep = verify_axioms(spec, radius=cfg.caps.grid or 2)
    return rep.ok, {"axioms": rep.to_json(), "properness": properness_check(spec).to_json()}


def cmd_section_check(cfg: RunConfig):
    spec = SectionSpec(_loop(cfg), cfg.section.get("reading", ""))
    agree, bad = oracle_agreement(spec, cfg.caps.samples, cfg.caps.seed)
    sharp = sharp_transitivity_check(spec, cfg.caps.samples, cfg.caps.seed)
    return agree and sharp.ok, {
        "model": spec.model.name, "model_params": spec.model.params(), "subgroup": spec.tag,
        "reading": spec.reading, "oracle_agreement": agree,
        "oracle_mismatch": None if bad is None else [_pt(bad[0]), _pt(bad[1])],
        "sharply_transitive": sharp.to_json()}


def cmd_span_dim(cfg: RunConfig):
    text = cfg.span.get("poly")
    if not isinstance(text, str):
        raise ConfigError("span.poly must be a polynomial string")
    p = Poly.parse(text)
    return True, {"poly": str(p), "translate_span_dim": translate_span_dim(p)}


def _kepka_setup(cfg: RunConfig):
    """Model, subgroup tag, left family and (for unknown loop parameters) the rebuild hook."""
    k = cfg.kepka
    spec = _loop(cfg)
    placement = k.get("placement", "section")
    reading = k.get("reading", "")
    degree = cfg.caps.ansatz_degree
    unknown = bool(k.get("unknown_loop", False))
    if placement == "section":
        sec = SectionSpec(spec, reading)
        model, tag = sec.model, k.get("subgroup", sec.tag)

        def build(params: dict):
            return left_family(SectionSpec(LoopShape(spec.family, tuple(sorted(params.items()))), sec.reading))
    elif placement == "lv":
        if spec.family != "LV":
            raise ConfigError("kepka.placement = 'lv' needs loop.family = 'LV'")
        model = _model_from(k, "kepka")
        tag = k.get("subgroup")
        if tag is None:
            raise ConfigError("kepka.subgroup is required with placement = 'lv'")
        reading = reading or "displayed"

        def build(params: dict):
            return lv_family(model, params["v"], reading)
    else:
        raise ConfigError(f"kepka.placement must be 'section' or 'lv', not {placement!r}")
    if unknown:
        unknowns = {name: general_poly(name, _PARAM_VARS[spec.family], degree) for name, _ in spec.params}
        lam = build({name: p for name, (p, _) in unknowns.items()})
    else:
        unknowns = None
        lam = build(dict(spec.params))
    return model, tag, lam, unknowns, build


def _caps(cfg: RunConfig) -> dict:
    return {"max_dim": cfg.caps.max_dim, "max_degree": cfg.caps.max_degree}


def cmd_kepka_check(cfg: RunConfig):
    model, tag, lam, unknowns, _ = _kepka_setup(cfg)
    if unknowns:
        raise ConfigError("kepka.unknown_loop applies to 'kepka solve' only")
    funcs = cfg.kepka.get("transversal")
    if not isinstance(funcs, dict):
        raise ConfigError("[kepka.transversal] table of slot functions is required for 'kepka check'")
    rep = check_transversal(model, tag, lam, {k: str(v) for k, v in funcs.items()},
                            cfg.caps.ansatz_degree, **_caps(cfg))
    return rep.ok, rep.to_json()


def cmd_kepka_solve(cfg: RunConfig):
    model, tag, lam, unknowns, build = _kepka_setup(cfg)
    rep = solve_transversal(model, tag, lam, cfg.caps.ansatz_degree, loop_unknowns=unknowns,
                            lam_builder=build if unknowns else None, **_caps(cfg))
    return rep.ok, rep.to_json()


def cmd_mult_identify(cfg: RunConfig):
    spec = _loop(cfg)
    method = "symbolic" if cfg.caps.grid is None else "grid"
    try:
        rep = identify_mult(spec, cfg.caps.max_dim, cfg.caps.max_degree, method, cfg.caps.grid,
                            cfg.caps.catalog_max_n, cfg.caps.catalog_max_k)
    except ImproperLoop as exc:
        return False, {"state": "improper", "reason": str(exc),
                       "properness": properness_check(spec).to_json()}
    return not rep.capped, rep.to_json()


HANDLERS = {
    "group mul": cmd_group_mul, "loop eval": cmd_loop_eval, "loop verify": cmd_loop_verify,
    "section check": cmd_section_check, "span dim": cmd_span_dim, "kepka check": cmd_kepka_check,
    "kepka solve": cmd_kepka_solve, "mult identify": cmd_mult_identify,
}


def run(cfg: RunConfig) -> tuple:
    """Execute ``cfg``; returns ``(exit status, report dict)``."""
    try:
        ok, result = HANDLERS[cfg.command](cfg)
    except ClosureCapExceeded as exc:
        ok, result = False, {"state": "closure cap exceeded", "cap": str(exc)}
    report = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "config": cfg.to_json(),
              "status": "pass" if ok else "fail", "result": result}
    return (0 if ok else 1), report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False,
                      default=lambda o: fmt_rational(o) if isinstance(o, Fraction) else str(o)) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loopmult", description="Exact computations with "
                                     "three-dimensional loops and their multiplication groups.")
    groups = parser.add_subparsers(dest="group", required=True)
    actions: dict = {}
    for cmd in COMMANDS:
        g, a = cmd.split()
        if g not in actions:
            actions[g] = groups.add_parser(g).add_subparsers(dest="action", required=True)
        p = actions[g].add_parser(a)
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--out", help="write the JSON report here (default: stdout)")
        p.add_argument("--max-dim", type=int)
        p.add_argument("--max-degree", type=int)
        p.add_argument("--ansatz-degree", type=int)
        p.add_argument("--grid", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--seed", type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = f"{args.group} {args.action}"
    overrides = {"max_dim": args.max_dim, "max_degree": args.max_degree,
                 "ansatz_degree": args.ansatz_degree, "grid": args.grid,
                 "samples": args.samples, "seed": args.seed}
    try:
        cfg = load_config(args.config, command, overrides, args.out)
        status, report = run(cfg)
    except USAGE_ERRORS as exc:
        print(f"loopmult: error: {exc}", file=sys.stderr)
        return 2
    text = dump_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{command}: {report['status']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
