"""Command-line front end.

Reports are dictionaries with a fixed key order, printed either as
``dotted.key: value`` lines or as JSON.  Rational values are exact ``p/q``
strings; the only decimals are ``*_display`` fields.  Vertex ids in reports
are the 1-based ids of the input file.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import oracle
from .bcr import solve_bcr
from .decompose import Decomposer, InvariantBreach, phi
from .model import Instance, ValidationError, arc_cost, bidirect, component_cost, fmt_rational
from .sampler import DisconnectedAfterRetries, ZeroMass, build_plan, sample_tree, verify_distribution
from .simplex import Infeasible, Unbounded
from .stp import ParseError, parse_stp

COMMANDS = ("solve-bcr", "decompose", "sample", "oracle-check", "full-pipeline")
EXIT_OK, EXIT_SOLVER, EXIT_BREACH = 0, 1, 2
SOLVER_ERRORS = (
    Infeasible, Unbounded, oracle.TooLarge, ParseError, ValidationError,
    ZeroMass, DisconnectedAfterRetries, OSError,
)

log = logging.getLogger("qbst")


@dataclass
class RunConfig:
    command: str
    input_path: str
    seed: int = 0
    trials: int = 100
    oracle_limit: int = 8
    output: Optional[str] = None
    trace: bool = False
    json: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 1 <= self.oracle_limit <= 12:
            raise ValueError("oracle_limit must lie in 1..12")


def _vid(v: Optional[int]) -> Optional[int]:
    return None if v is None else v + 1


def _component_row(K, weight: Fraction) -> dict:
    return {
        "centre": _vid(K.centre),
        "sink": _vid(K.sink),
        "sources": [_vid(w) for w in sorted(K.sources)],
        "weight": fmt_rational(weight),
        "cost": fmt_rational(K.cost),
    }


def _bcr_section(sol) -> dict:
    return {
        "value": fmt_rational(sol.objective_value),
        "cuts": len(sol.generated_cuts),
        "rounds": sol.rounds,
        "x": [
            {"arc": [_vid(t), _vid(h)], "value": fmt_rational(v)}
            for (t, h), v in sorted(sol.x.items())
        ],
    }


def _decompose_section(inst: Instance, dg, sol, cfg: RunConfig, use_oracle: bool) -> tuple[dict, dict]:
    dec = Decomposer(dg, sol.x, oracle=use_oracle)
    y = dec.run()
    section = {
        "iterations": dec.iterations,
        "components": [_component_row(K, y[K]) for K in sorted(y, key=lambda K: K.sort_key())],
        "phi_matches_x": phi(y) == sol.x,
        "cost": fmt_rational(component_cost(y)),
        "cost_matches": component_cost(y) == arc_cost(dg, sol.x),
        "distribution_identity": verify_distribution(sol.x, y, inst)[0],
    }
    if use_oracle:
        section["oracle_checks"] = dict(dec.checks)
    if cfg.trace:
        section["trace"] = [
            {"kind": r.kind, "centre": _vid(r.centre), "sink": _vid(r.sink),
             "sources": [_vid(w) for w in r.sources], "lambda": fmt_rational(r.lam)}
            for r in dec.steps
        ]
    return section, y


def _sample_section(inst: Instance, sol, cfg: RunConfig) -> dict:
    plan = build_plan(sol.x, inst, cfg.seed)
    rows, total = [], Fraction(0)
    for trial in range(cfg.trials):
        tree = sample_tree(plan, inst, trial)
        total += tree.cost
        ratio = tree.cost / sol.objective_value if sol.objective_value else Fraction(1)
        rows.append({
            "seed": cfg.seed,
            "trial": trial,
            "rounds": plan.rounds,
            "retries": tree.retries,
            "sampled": [_vid(v) for v in sorted(tree.sampled_vertices)],
            "cost": fmt_rational(tree.cost),
            "ratio_display": f"{float(ratio):.6f}",
        })
    mean = total / cfg.trials
    return {
        "M": fmt_rational(plan.M),
        "rounds": plan.rounds,
        "trials": cfg.trials,
        "mean_cost": fmt_rational(mean),
        "mean_ratio_display": f"{float(mean / sol.objective_value) if sol.objective_value else 1.0:.6f}",
        "rows": rows,
    }


def _oracle_section(inst: Instance, sol, y, cfg: RunConfig) -> dict:
    if len(inst.terminals) > cfg.oracle_limit:
        raise oracle.TooLarge(
            f"{len(inst.terminals)} terminals exceeds the oracle limit {cfg.oracle_limit}"
        )
    _, value = oracle.solve_dcr_bruteforce(inst, limit=cfg.oracle_limit)
    section = {"dcr_value": fmt_rational(value), "values_equal": value == sol.objective_value}
    verdict = section["values_equal"]
    if y is not None:
        feasible, witness = oracle.check_feasible_dcr(inst, y)
        section["decomposition_feasible"] = feasible
        if witness is not None:
            section["violated_set"] = [_vid(v) for v in sorted(witness)]
        verdict = verdict and feasible
    section["verdict"] = "PASS" if verdict else "FAIL"
    return section


def build_report(cfg: RunConfig) -> dict:
    with open(cfg.input_path, encoding="utf-8") as fh:
        inst = parse_stp(fh.read())
    dg = bidirect(inst)
    report: dict = {
        "command": cfg.command,
        "instance": {
            "path": os.path.basename(cfg.input_path),
            "vertices": inst.n,
            "edges": len(inst.edges),
            "terminals": len(inst.terminals),
            "root": _vid(inst.root),
        },
    }
    small = len(inst.terminals) <= cfg.oracle_limit
    if cfg.command == "oracle-check" and not small:
        raise oracle.TooLarge(
            f"{len(inst.terminals)} terminals exceeds the oracle limit {cfg.oracle_limit}"
        )
    sol = solve_bcr(dg)
    log.info("relaxation value %s after %d cuts", fmt_rational(sol.objective_value), len(sol.generated_cuts))
    report["bcr"] = _bcr_section(sol)
    y = None
    if cfg.command in ("decompose", "oracle-check", "full-pipeline"):
        use_oracle = cfg.command == "oracle-check"
        report["decomposition"], y = _decompose_section(inst, dg, sol, cfg, use_oracle)
    if cfg.command == "oracle-check" or (cfg.command == "full-pipeline" and small):
        report["oracle"] = _oracle_section(inst, sol, y, cfg)
    if cfg.command in ("sample", "full-pipeline"):
        report["sampling"] = _sample_section(inst, sol, cfg)
    return report


def _flatten(prefix: str, value, out: list[str]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    elif isinstance(value, list):
        out.append(f"{prefix}: " + " ".join("-" if v is None else str(v) for v in value))
    elif isinstance(value, bool):
        out.append(f"{prefix}: {'true' if value else 'false'}")
    else:
        out.append(f"{prefix}: {'-' if value is None else value}")


def render(report: dict, as_json: bool = False) -> str:
    if as_json:
        return json.dumps(report, indent=2) + "\n"
    lines: list[str] = []
    _flatten("", report, lines)
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> tuple[int, dict]:
    try:
        report = build_report(cfg)
        code = EXIT_OK
    except InvariantBreach as exc:
        report = {"command": cfg.command, "error": {"code": type(exc).__name__, "message": str(exc)}}
        code = EXIT_BREACH
    except SOLVER_ERRORS as exc:
        report = {"command": cfg.command, "error": {"code": type(exc).__name__, "message": str(exc)}}
        code = EXIT_SOLVER
    report["exit_code"] = code
    return code, report


def parse_args(argv=None) -> RunConfig:
    p = argparse.ArgumentParser(prog="qbst", description=__doc__.splitlines()[0])
    p.add_argument("--command", choices=COMMANDS, default="full-pipeline")
    p.add_argument("--input", required=True, help="instance in STP format")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--oracle-limit", type=int, default=8, help="max terminals for exhaustive checks (<= 12)")
    p.add_argument("--trace", action="store_true", help="include per-step decomposition records")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--json", action="store_true")
    a = p.parse_args(argv)
    try:
        return RunConfig(
            command=a.command, input_path=a.input, seed=a.seed, trials=a.trials,
            oracle_limit=a.oracle_limit, output=a.output, trace=a.trace, json=a.json,
        )
    except ValueError as exc:
        p.error(str(exc))


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("QBST_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    cfg = parse_args(argv)
    code, report = run(cfg)
    text = render(report, cfg.json)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
