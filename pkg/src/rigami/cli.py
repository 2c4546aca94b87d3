"""Command-line entry point.

Every flag can also be set through an environment variable named
``RIGAMI_<FLAG>`` (upper case, dashes as underscores); flags win.  Exit codes:
0 yes/success, 1 no, 2 precision exhausted, 3 budget exceeded, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .flatfold import VertexKind, classify_all
from .oracles import (
    OracleCapExceeded,
    SatInstance,
    brute_force_rigid,
    one_in_three_oracle,
    partition_oracle,
)
from .pattern import Assignment, CreasePattern, Edge, PatternError, export_svg, load_pattern, save_pattern
from .scalar import DEFAULT_BITS, DEFAULT_CAP, PrecisionExhausted, format_rational, parse_rational
from .solver import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    ModeCertificate,
    SolverError,
    decide_all_creases,
    decide_optional_creases,
)

SCHEMA_VERSION = "rigami-cli/1"
EXIT_YES, EXIT_NO, EXIT_PRECISION, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3, 64

# Every --json document is an object with these keys plus command-specific ones.
OUTPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command", "exit_code"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {
            # null when the command line did not name a known command
            "enum": ["check", "solve", "gen-partition", "gen-sat", "witness", "oracle", "fold", "export", None]
        },
        "exit_code": {"enum": [EXIT_YES, EXIT_NO, EXIT_PRECISION, EXIT_BUDGET, EXIT_USAGE]},
        "answer": {"enum": ["yes", "no"]},
        "error": {"type": "string"},
    },
}


class UsageError(Exception):
    pass


@dataclass
class Config:
    precision_bits: int = DEFAULT_BITS
    precision_cap: int = DEFAULT_CAP
    search_budget: int = DEFAULT_BUDGET
    c_constant: int = 64
    threads: int = 0  # 0 means available parallelism
    json: bool = False
    output: Optional[str] = None

    def __post_init__(self):
        if self.precision_bits < 2:
            raise UsageError("precision bits must be at least 2")
        if self.precision_bits > self.precision_cap:
            raise UsageError("precision bits exceed the precision cap")
        if self.search_budget < 1:
            raise UsageError("search budget must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env(dest: str):
    return os.environ.get("RIGAMI_" + dest.upper())


def _flag(p: argparse.ArgumentParser, *names, **kw):
    """add_argument whose default comes from RIGAMI_<DEST> when set."""
    action = p.add_argument(*names, **kw)
    raw = _env(action.dest)
    if raw is not None:
        if isinstance(action, argparse._StoreTrueAction):
            action.default = raw.strip().lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            action.default = [s for s in raw.split(";") if s]
        else:
            action.default = raw
        action.required = False
    return action


def _rational(text) -> Fraction:
    try:
        return parse_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text: str) -> List[int]:
    try:
        return [int(s) for s in str(text).split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _flag(common, "--json", action="store_true", help="machine-readable JSON on stdout")
    _flag(common, "--precision-bits", type=int, default=DEFAULT_BITS)
    _flag(common, "--precision-cap", type=int, default=DEFAULT_CAP)
    _flag(common, "--budget", type=int, default=DEFAULT_BUDGET, help="search budget in propagation steps")
    _flag(common, "--threads", type=int, default=0, help="worker count (0 = available parallelism)")

    parser = _Parser(prog="rigami", description="Rigid foldability tools for crease patterns.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="classify every vertex")
    p.add_argument("pattern")

    p = sub.add_parser("solve", parents=[common], help="decide rigid foldability")
    p.add_argument("pattern")
    _flag(p, "--variant", choices=["all", "optional"], default="optional")
    _flag(p, "--epsilon", type=_rational, default=None)
    _flag(p, "--epsilon-from-meta", action="store_true", help="use the epsilon stored in the pattern meta")
    _flag(p, "--certificate-out", default=None)

    p = sub.add_parser("gen-partition", parents=[common], help="pattern from a Partition instance")
    _flag(p, "--elements", type=_int_list, required=True)
    _flag(p, "--c", type=int, default=64, dest="c_constant")
    _flag(p, "-o", "--output", required=True)

    p = sub.add_parser("gen-sat", parents=[common], help="pattern from a positive 1-in-3 SAT formula")
    _flag(p, "--vars", type=int, required=True)
    _flag(p, "--clause", action="append", required=True)
    _flag(p, "-o", "--output", required=True)

    p = sub.add_parser("witness", parents=[common], help="certificate from a satisfying assignment")
    _flag(p, "--pattern", default=None, help="pattern made by gen-sat (formula read from its meta)")
    _flag(p, "--vars", type=int, default=None)
    _flag(p, "--clause", action="append", default=None)
    _flag(p, "--assignment", required=True, help="e.g. x1=1,x2=0,x3=0")
    _flag(p, "-o", "--output", default=None)

    p = sub.add_parser("oracle", parents=[common], help="brute-force ground truth")
    osub = p.add_subparsers(dest="problem", parser_class=_Parser)
    q = osub.add_parser("partition", parents=[common])
    _flag(q, "--elements", type=_int_list, required=True)
    q = osub.add_parser("sat", parents=[common])
    _flag(q, "--vars", type=int, required=True)
    _flag(q, "--clause", action="append", required=True)
    q = osub.add_parser("rigid", parents=[common])
    _flag(q, "--pattern", required=True)
    _flag(q, "--variant", choices=["all", "optional"], default="optional")
    _flag(q, "--epsilon", type=_rational, default=Fraction(0))

    p = sub.add_parser("fold", parents=[common], help="3D face placements at one fold parameter")
    p.add_argument("pattern")
    _flag(p, "--certificate", required=True)
    _flag(p, "--t", type=_rational, required=True)

    p = sub.add_parser("export", parents=[common], help="SVG drawing")
    p.add_argument("pattern")
    _flag(p, "-o", "--output", required=True)
    _flag(p, "--certificate", default=None, help="colour creases by the certificate's MV assignment")
    return parser


def config_from_args(args) -> Config:
    return Config(
        precision_bits=args.precision_bits,
        precision_cap=args.precision_cap,
        search_budget=args.budget,
        c_constant=getattr(args, "c_constant", 64),
        threads=args.threads,
        json=bool(args.json),
        output=getattr(args, "output", None),
    )


# -- commands --------------------------------------------------------------------------


def _load(path) -> CreasePattern:
    try:
        return load_pattern(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_certificate(path) -> ModeCertificate:
    try:
        return ModeCertificate.from_json(json.loads(Path(path).read_text()))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _sat_instance(num_vars, clauses) -> SatInstance:
    parsed = []
    for c in clauses:
        lits = c if isinstance(c, (list, tuple)) else _int_list(c)
        if len(lits) != 3:
            raise UsageError(f"a clause needs three variables, got {c!r}")
        parsed.append(tuple(lits))
    return SatInstance(int(num_vars), tuple(parsed))


def cmd_check(args, cfg: Config):
    pat = _load(args.pattern)
    classes = classify_all(pat, cfg.precision_bits)
    report = {str(v): classes[v].kind.value for v in sorted(classes)}
    ok = all(c.kind is not VertexKind.OTHER for c in classes.values())
    counts: Dict[str, int] = {}
    for k in report.values():
        counts[k] = counts.get(k, 0) + 1
    doc = {"vertices": report, "counts": dict(sorted(counts.items())), "foldable": ok}
    lines = [f"vertex {v}: {k}" for v, k in report.items()]
    lines.append("all interior vertices foldable" if ok else "some interior vertex is Other")
    return (EXIT_YES if ok else EXIT_NO), doc, lines


def cmd_solve(args, cfg: Config):
    pat = _load(args.pattern)
    if args.epsilon_from_meta:
        if "epsilon" not in pat.meta:
            raise UsageError("pattern meta has no epsilon")
        eps = parse_rational(pat.meta["epsilon"])
    elif args.epsilon is not None:
        eps = args.epsilon
    else:
        eps = Fraction(0)
    kw = dict(budget=cfg.search_budget, bits=cfg.precision_bits, cap=cfg.precision_cap)
    if args.variant == "all":
        verdict = decide_all_creases(pat, eps, **kw)
    else:
        verdict = decide_optional_creases(pat, eps, **kw)
    doc = verdict.to_json()
    doc["variant"] = args.variant
    doc["epsilon"] = format_rational(eps)
    if verdict.certificate is not None and args.certificate_out:
        Path(args.certificate_out).write_text(verdict.certificate.dumps() + "\n")
    lines = [f"{args.variant} creases, epsilon {format_rational(eps)}: {doc['answer']}"]
    if verdict.reason:
        lines.append(verdict.reason)
    lines.append(f"{verdict.nodes} nodes, {verdict.steps} steps")
    return (EXIT_YES if verdict.answer else EXIT_NO), doc, lines


def cmd_gen_partition(args, cfg: Config):
    from .partition import PartitionInstance, reduce_partition

    out = reduce_partition(PartitionInstance(tuple(args.elements)), cfg.c_constant)
    save_pattern(out.pattern, args.output)
    doc = {"output": args.output, "meta": out.meta}
    lines = [
        f"wrote {args.output}: {len(out.pattern.vertices)} vertices, epsilon {format_rational(out.epsilon)}"
    ]
    return EXIT_YES, doc, lines


def cmd_gen_sat(args, cfg: Config):
    from .sat import reduce_sat

    inst = _sat_instance(args.vars, args.clause)
    out = reduce_sat(inst)
    save_pattern(out.pattern, args.output)
    doc = {"output": args.output, "meta": out.meta}
    lines = [f"wrote {args.output}: {len(out.pattern.vertices)} vertices, {len(out.pattern.creases)} creases"]
    return EXIT_YES, doc, lines


def _parse_assignment(text: str) -> Dict[int, bool]:
    asg = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, val = part.partition("=")
        name = name.strip().lstrip("x")
        if not name.isdigit() or val.strip() not in ("0", "1"):
            raise UsageError(f"bad assignment item {part!r}; use x1=1,x2=0")
        asg[int(name)] = val.strip() == "1"
    return asg


def cmd_witness(args, cfg: Config):
    from .sat import reduce_sat, witness_certificate
    from .pattern import ReductionOutput

    output = None
    if args.pattern:
        pat = _load(args.pattern)
        if pat.meta.get("reduction") != "sat":
            raise UsageError("pattern was not produced by gen-sat")
        inst = _sat_instance(pat.meta["num_vars"], pat.meta["clauses"])
        output = ReductionOutput(pat, Fraction(0), pat.meta)
    elif args.vars is not None and args.clause:
        inst = _sat_instance(args.vars, args.clause)
    else:
        raise UsageError("give --pattern or --vars with --clause")
    asg = _parse_assignment(args.assignment)
    try:
        cert = witness_certificate(inst, asg, output or reduce_sat(inst))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.output:
        Path(args.output).write_text(cert.dumps() + "\n")
    doc = {"certificate": cert.to_json()}
    lines = [f"certificate with {len(cert.active_creases)} active creases"]
    if args.output:
        lines.append(f"wrote {args.output}")
    else:
        lines.append(cert.dumps())
    return EXIT_YES, doc, lines


def cmd_oracle(args, cfg: Config):
    if args.problem == "partition":
        res = partition_oracle(args.elements)
        witness = res.witness
    elif args.problem == "sat":
        res = one_in_three_oracle(_sat_instance(args.vars, args.clause))
        witness = None if res.witness is None else {f"x{k}": int(v) for k, v in sorted(res.witness.items())}
    elif args.problem == "rigid":
        res = brute_force_rigid(
            _load(args.pattern), args.epsilon, args.variant, cfg.precision_bits, cfg.precision_cap
        )
        witness = None if res.witness is None else res.witness.to_json()
    else:
        raise UsageError("oracle needs one of: partition, sat, rigid")
    answer = "yes" if res.answer else "no"
    doc = {"problem": args.problem, "answer": answer, "witness": witness}
    lines = [f"{args.problem}: {answer}"]
    if witness is not None and args.problem != "rigid":
        lines.append(f"witness: {witness}")
    return (EXIT_YES if res.answer else EXIT_NO), doc, lines


def cmd_fold(args, cfg: Config):
    from .kinematics import fold_state_3d

    pat = _load(args.pattern)
    cert = _load_certificate(args.certificate)
    state = fold_state_3d(pat, cert.crease_speeds, args.t, cfg.precision_bits)
    doc = state.to_json()
    lines = [f"{len(doc['faces'])} faces placed at t = {doc['t']}", f"max loop residual {doc['max_residual']}"]
    return EXIT_YES, doc, lines


def cmd_export(args, cfg: Config):
    pat = _load(args.pattern)
    if args.certificate:
        cert = _load_certificate(args.certificate)
        mv = cert.mv_assignment()
        edges = tuple(
            e if not e.is_crease or i not in mv
            else Edge(e.u, e.v, Assignment.MOUNTAIN if mv[i] == "M" else Assignment.VALLEY)
            for i, e in enumerate(pat.edges)
        )
        pat = CreasePattern(pat.vertices, edges, pat.boundary, dict(pat.meta))
    export_svg(pat, args.output)
    return EXIT_YES, {"output": args.output}, [f"wrote {args.output}"]


COMMANDS = {
    "check": cmd_check,
    "solve": cmd_solve,
    "gen-partition": cmd_gen_partition,
    "gen-sat": cmd_gen_sat,
    "witness": cmd_witness,
    "oracle": cmd_oracle,
    "fold": cmd_fold,
    "export": cmd_export,
}


def _emit(command: Optional[str], code: int, doc: dict, lines: Sequence[str], as_json: bool, err=False):
    if as_json:
        full = {"schema": SCHEMA_VERSION, "command": command, "exit_code": code}
        full.update(doc)
        print(json.dumps(full, indent=1, sort_keys=True, default=str))
    else:
        stream = sys.stderr if err else sys.stdout
        for line in lines:
            print(line, file=stream)


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv or (_env("json") or "").lower() in ("1", "true", "yes", "on")
    command = next((a for a in argv if a in COMMANDS), None)
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("missing subcommand; try --help")
        cfg = config_from_args(args)
        code, doc, lines = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        _emit(command, EXIT_USAGE, {"error": str(exc)}, [f"usage error: {exc}"], as_json, err=True)
        return EXIT_USAGE
    except (PatternError, OracleCapExceeded, SolverError, ValueError) as exc:
        _emit(command, EXIT_USAGE, {"error": str(exc)}, [f"error: {exc}"], as_json, err=True)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        _emit(command, EXIT_PRECISION, {"error": str(exc)}, [f"precision exhausted: {exc}"], as_json, err=True)
        return EXIT_PRECISION
    except BudgetExceeded as exc:
        _emit(command, EXIT_BUDGET, {"error": str(exc)}, [f"budget exceeded: {exc}"], as_json, err=True)
        return EXIT_BUDGET
    _emit(args.command, code, doc, lines, cfg.json)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
