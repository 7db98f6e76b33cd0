"""Command-line front end.

Exit status: 0 on success, 2 when the input system is not structurally
controllable, 1 on I/O or validation errors (with a JSON error object on
stdout).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import gcrit, mptsc, oracle, scrp
from .pattern import PatternError, PerturbStructure, SystemPattern
from .ptsc1 import NOT_SC, PSSC, StructurallyUncontrollableError, Verdict, is_ptsc
from .sctrl import is_structurally_controllable

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_SC = 2
REVALIDATE_TOL = 1e-12


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    system: str | None = None
    perturb: str | None = None
    realization: str | None = None
    seed: int = 0
    tol: float = 1e-6
    trials: int = 1
    budget: int | None = None
    output: str | None = None
    full_trace: bool = False
    dump_graphs: str | None = None
    witness: str | None = None
    method: str = "decomposition"

    def __post_init__(self):
        if self.tol <= 0:
            raise CliError("tolerance must be positive")
        if self.trials < 1:
            raise CliError("trials must be at least 1")
        env = os.environ.get("PTSC_SEED")
        if env is not None:
            try:
                self.seed = int(env)
            except ValueError:
                raise CliError(f"PTSC_SEED must be an integer, got {env!r}") from None


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from None


def load_inputs(cfg: RunConfig) -> tuple[SystemPattern, PerturbStructure]:
    if not cfg.system or not cfg.perturb:
        raise CliError("--system and --perturb are required")
    sys_ = SystemPattern.from_json_obj(_read_json(cfg.system))
    f = PerturbStructure.from_json_obj(_read_json(cfg.perturb))
    f.check_compatible(sys_)
    return sys_, f


def load_realization(path: str, sys_: SystemPattern) -> oracle.Realization:
    """``{"values": [[i, j, value], ...]}``; values may be numbers or rational strings."""
    obj = _read_json(path)
    try:
        values = {(int(i), int(j)): Fraction(str(v)) for i, j, v in obj["values"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"bad realization file {path}: {exc}") from None
    r = oracle.Realization(sys_.n, sys_.m, {k: v for k, v in values.items() if v != 0})
    if any(e not in sys_.ab for e in r.values):
        raise CliError("realization has nonzero entries outside the system pattern")
    return r


def _emit(cfg: RunConfig, obj: dict) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _decide(cfg: RunConfig, sys_: SystemPattern, f: PerturbStructure):
    if sys_.m > 1:
        if not is_structurally_controllable(sys_):
            return Verdict(NOT_SC)
        return mptsc.is_pssc_sufficient(sys_, f, budget=cfg.budget or mptsc.DEFAULT_BUDGET, seed=cfg.seed)
    if cfg.method == "graph":
        return gcrit.is_pssc_graph(sys_, f, full_trace=cfg.full_trace)
    return is_ptsc(sys_, f, full_trace=cfg.full_trace)


def _sample_controllable(sys_: SystemPattern, seed: int) -> oracle.Realization:
    for attempt in range(oracle.MAX_RETRIES):
        r = oracle.sample_realization(sys_, seed + attempt)
        if oracle.is_controllable_numeric(r):
            return r
    raise CliError("could not sample a controllable realization")


def build_witness(sys_: SystemPattern, f: PerturbStructure, verdict, seed: int) -> oracle.Witness:
    """Witness for a PSSC verdict of either the single- or multi-input path."""
    r = _sample_controllable(sys_, seed)
    if isinstance(verdict, mptsc.MultiVerdict):
        res = verdict.result
        block = (res.block_rows, res.block_cols) if verdict.condition == "c2" else None
        return oracle.synth_witness_multi(r, f, verdict.K, res.rows, block, seed=seed)
    trace = verdict.failing_trace
    if verdict.method == "graph":
        trace = is_ptsc(sys_, f).failing_trace
    return oracle.witness_for_trace(r, f, trace, seed=seed)


def _write_witness(path: str, w: oracle.Witness) -> float:
    Path(path).write_text(json.dumps(w.to_json_obj(), indent=2, sort_keys=True) + "\n")
    loaded = oracle.Witness.from_json_obj(_read_json(path))
    recomputed = loaded.recompute_residual()
    if abs(recomputed - w.residual) > REVALIDATE_TOL:
        raise CliError(f"witness residual does not revalidate: {recomputed} vs {w.residual}")
    return recomputed


def cmd_check(cfg: RunConfig) -> int:
    sys_, f = load_inputs(cfg)
    verdict = _decide(cfg, sys_, f)
    if verdict.status == NOT_SC:
        _emit(cfg, {"verdict": NOT_SC, "seed": cfg.seed})
        return EXIT_NOT_SC
    if isinstance(verdict, mptsc.MultiVerdict):
        report = verdict.to_json_obj()
    else:
        report = verdict.to_json_obj(with_traces=cfg.full_trace)
    report["seed"] = cfg.seed
    if cfg.dump_graphs and sys_.m == 1:
        files = []
        for entry in f.edges:
            merged = sys_.merged(f.without(entry))
            files += [str(p) for p in gcrit.dump_graphs(merged, entry, cfg.dump_graphs)]
        report["graphs"] = files
    if cfg.witness and verdict.status == PSSC:
        w = build_witness(sys_, f, verdict, cfg.seed)
        report["witness"] = {"path": cfg.witness, "residual": _write_witness(cfg.witness, w)}
    _emit(cfg, report)
    return EXIT_OK


def cmd_witness(cfg: RunConfig) -> int:
    sys_, f = load_inputs(cfg)
    verdict = _decide(cfg, sys_, f)
    if verdict.status == NOT_SC:
        _emit(cfg, {"verdict": NOT_SC, "seed": cfg.seed})
        return EXIT_NOT_SC
    if verdict.status != PSSC:
        raise CliError(f"no witness: verdict is {verdict.status}")
    w = build_witness(sys_, f, verdict, cfg.seed)
    if w.residual > cfg.tol:
        raise CliError(f"witness residual {w.residual:.3e} above tolerance {cfg.tol:.1e}")
    obj = w.to_json_obj()
    obj["seed"] = cfg.seed
    _emit(cfg, obj)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    sys_, f = load_inputs(cfg)
    if sys_.m != 1:
        raise CliError("the interpolation oracle is single-input only")
    if is_ptsc(sys_, f).status == NOT_SC:
        _emit(cfg, {"verdict": NOT_SC, "seed": cfg.seed})
        return EXIT_NOT_SC
    res = oracle.pssc_oracle_single(sys_, f, trials=cfg.trials, seed=cfg.seed)
    obj = res.to_json_obj()
    obj["seed"] = cfg.seed
    _emit(cfg, obj)
    return EXIT_OK


def cmd_minsupport(cfg: RunConfig) -> int:
    sys_, f = load_inputs(cfg)
    rep = scrp.min_pssc_support(sys_, f, budget=cfg.budget or scrp.DEFAULT_BUDGET)
    obj = rep.to_json_obj()
    obj["seed"] = cfg.seed
    _emit(cfg, obj)
    return EXIT_OK


def cmd_scrp(cfg: RunConfig) -> int:
    sys_, f = load_inputs(cfg)
    r = load_realization(cfg.realization, sys_) if cfg.realization else None
    rep = scrp.scrp_feasibility(sys_, f, r)
    obj = rep.to_json_obj()
    obj["seed"] = cfg.seed
    _emit(cfg, obj)
    return EXIT_NOT_SC if rep.verdict == NOT_SC else EXIT_OK


def cmd_graphs(cfg: RunConfig) -> int:
    sys_, f = load_inputs(cfg)
    if sys_.m != 1:
        raise CliError("graph dumps are single-input only")
    out = cfg.dump_graphs or cfg.output
    if not out:
        raise CliError("graphs needs --dump-graphs DIR")
    if is_ptsc(sys_, f).status == NOT_SC:
        _emit(cfg, {"verdict": NOT_SC, "seed": cfg.seed})
        return EXIT_NOT_SC
    files = []
    for entry in f.edges:
        files += [str(p) for p in gcrit.dump_graphs(sys_.merged(f.without(entry)), entry, out)]
    sys.stdout.write(json.dumps({"graphs": files, "seed": cfg.seed}, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "witness": cmd_witness,
    "oracle": cmd_oracle,
    "minsupport": cmd_minsupport,
    "scrp": cmd_scrp,
    "graphs": cmd_graphs,
}


def run(cfg: RunConfig) -> int:
    return COMMANDS[cfg.command](cfg)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ptsc", description="Perturbation-tolerant structural controllability checks.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, help_ in [
        ("check", "PTSC/PSSC verdict with per-entry trace"),
        ("witness", "numeric uncontrollability certificate"),
        ("oracle", "interpolation cross-check (single input)"),
        ("minsupport", "smallest PSSC sub-structures of F"),
        ("scrp", "feasibility report for the structured radius problem"),
        ("graphs", "DOT dumps of the auxiliary graphs"),
    ]:
        s = sub.add_parser(name, help=help_)
        s.add_argument("--system", required=True, help="[A, B] pattern JSON")
        s.add_argument("--perturb", required=True, help="perturbation pattern JSON")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--tol", type=float, default=1e-6, help="witness residual tolerance")
        s.add_argument("--trials", type=int, default=1)
        s.add_argument("--budget", type=int)
        s.add_argument("--output", "-o", help="write the report here instead of stdout")
        s.add_argument("--full-trace", action="store_true")
        s.add_argument("--dump-graphs", metavar="DIR")
        s.add_argument("--witness", metavar="PATH", help="write a witness file on PSSC")
        s.add_argument("--method", choices=["decomposition", "graph"], default="decomposition")
        s.add_argument("--realization", help="numeric values JSON (scrp)")
    return p


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        if ns.command is None:
            raise CliError("missing command; choose one of " + ", ".join(COMMANDS))
        cfg = RunConfig(**{k: v for k, v in vars(ns).items()})
        return run(cfg)
    except StructurallyUncontrollableError as exc:
        sys.stdout.write(json.dumps({"verdict": NOT_SC, "message": str(exc)}, sort_keys=True) + "\n")
        return EXIT_NOT_SC
    except (CliError, PatternError, ValueError, oracle.DegenerateSampleError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        sys.stdout.write(json.dumps(err, sort_keys=True) + "\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
