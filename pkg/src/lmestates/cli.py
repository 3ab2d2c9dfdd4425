"""Command-line front end.

Every subcommand prints one JSON object ``{command, inputs, output,
exit_code}`` on stdout; diagnostics go to stderr. Exit codes: 0 success,
2 domain or usage error, 3 resource error. ``scan --format csv`` is the
only command that prints CSV instead.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import construct as C
from .classify import classify, dim_by_trichotomy
from .dimvec import DimVec, count_rationals, parse_dims
from .errors import DomainError, ResourceError
from .flow import flow_to_normal_form
from .repgroup import group_info, group_state_for_dims, s3_ghz_state, ut_group_state
from .sporadic import compute_seed_set, enumerate_sporadic, scan_grid
from .stabilizer import DEFAULT_CAP, stabilizer_report
from .tensor import StateTensor, is_lme, m_uniform_deviation, read_state, write_state

__all__ = ["CommandResult", "dispatch", "main", "DEFAULT_SEED"]

DEFAULT_SEED = 20240601
EXIT_OK, EXIT_DOMAIN, EXIT_RESOURCE = 0, 2, 3


@dataclass
class CommandResult:
    command: str
    inputs: dict
    output: Any
    exit_code: int = EXIT_OK
    text: str | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "output": self.output,
            "exit_code": self.exit_code,
        }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _UsageError(Exception):
    pass


def _dims_arg(text: str) -> tuple[int, ...]:
    try:
        return parse_dims(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("LME_JOBS", "1")))
    except ValueError:
        return 1


def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the options appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes (env LME_JOBS)")
    p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indented JSON")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="lme", description="LME state existence, dimension, construction and verification.")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes (env LME_JOBS)")
    parser.add_argument("--pretty", action="store_true", help="indented JSON")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    p = add("exists", "decide whether LME states exist")
    p.add_argument("dims", type=_dims_arg)
    p = add("dim", "dimension of the LME quotient")
    p.add_argument("dims", type=_dims_arg)

    p = add("scan", "classify a grid of (A, B, C) triples")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--bmax", "--b-max", dest="bmax", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("sporadic", "sporadic triples with Delta <= -2")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--max-dim", type=int, required=True)

    p = add("construct", "build an explicit LME state")
    p.add_argument("kind", choices=("bell", "ghz", "vec2bb", "2n-np1", "sudoku", "3j", "pauli"))
    p.add_argument("--d", type=int, help="local dimension (bell, ghz)")
    p.add_argument("--parties", type=int, default=3, help="number of parties (ghz)")
    p.add_argument("--b", type=int, help="number of polygon vectors (vec2bb)")
    p.add_argument("--vectors", type=Path, help="file of unit vectors, one 'x y z' per line (vec2bb)")
    p.add_argument("--n", type=int, help="N (2n-np1)")
    p.add_argument("--k", type=int, default=1, help="Bell dressing K (2n-np1)")
    p.add_argument("--grid", type=Path, help="grid file of whitespace-separated integers (sudoku)")
    p.add_argument("--dims", type=_dims_arg, help="dimensions A,B,C (3j)")
    p.add_argument("--generators", type=Path, help="Pauli strings, one per line (pauli)")
    p.add_argument("--six-qubit", action="store_true", help="use the built-in six-qubit AME-like generators (pauli)")
    p.add_argument("-o", "--output", type=Path, required=True)

    p = add("verify", "check the LME property of a state file")
    p.add_argument("statefile", type=Path)
    p.add_argument("--m", type=int, help="also test m-uniformity")
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("flow", "run the moment-map gradient flow")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("statefile", type=Path, nargs="?")
    src.add_argument("--random", type=_dims_arg, help="start from a seeded random state on these dims")
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--max-iters", type=int, default=200_000)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--floor", type=float, default=1e-6)
    p.add_argument("--report", type=Path, help="write the JSON report here too")
    p.add_argument("-o", "--output", type=Path, help="write the endpoint state here")

    p = add("stab-dim", "generic stabilizer dimension by randomized rank")
    p.add_argument("dims", type=_dims_arg)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--method", choices=("ff", "svd"), default="ff")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = add("group-state", "LME state from a finite-group invariant")
    p.add_argument("--family", choices=("ut3p", "s3-ghz"))
    p.add_argument("--p", type=int)
    p.add_argument("--dims", type=_dims_arg, help="pick the family from a dimension vector")
    p.add_argument("--x", type=int, default=1)
    p.add_argument("--y", type=int, default=1)
    p.add_argument("-o", "--output", type=Path)

    p = add("group-info", "classes and irreps of UT(3,p) x| Z_2")
    p.add_argument("--p", type=int, required=True)
    return parser


# ---------------------------------------------------------------------------
# handlers


def _cmd_exists(a) -> dict:
    dv = DimVec(a.dims)
    res = classify(dv)
    return {
        "dims": str(dv),
        "R": res.r_value,
        "N": count_rationals([d * d for d in dv]),
        "Delta": res.delta_value,
        "exists": res.exists,
        "exists_by_R": res.r_value >= 0,
    }


def _cmd_dim(a) -> dict:
    res = classify(DimVec(a.dims))
    out = res.to_dict()
    exists_t, dim_t = dim_by_trichotomy(res.dims)
    out["trichotomy"] = {"exists": exists_t, "dim_complex": dim_t}
    return out


def _cmd_scan(a, jobs: int):
    rows = scan_grid(a.a, a.bmax, jobs=jobs)
    if a.format == "csv":
        buf = io.StringIO()
        cols = ["A", "B", "C", "status", "dim_complex", "R", "Delta"]
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            d = r.as_dict()
            d["dim_complex"] = "" if d["dim_complex"] is None else d["dim_complex"]
            w.writerow(d)
        return {"rows": len(rows)}, buf.getvalue()
    return {"a": a.a, "bmax": a.bmax, "rows": [r.as_dict() for r in rows]}, None


def _cmd_sporadic(a) -> dict:
    seeds = compute_seed_set(a.a, a.max_dim if a.a == 2 else None)
    triples = enumerate_sporadic(a.a, a.max_dim)
    return {
        "a": a.a,
        "max_dim": a.max_dim,
        "seed_set": sorted([list(s) for s in seeds]),
        "triples": [list(t) for t in triples],
    }


def _read_vectors(path: Path) -> np.ndarray:
    rows = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([float(v) for v in line.replace(",", " ").split()])
    return np.array(rows)


def _read_grid(path: Path) -> np.ndarray:
    rows = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                rows.append([int(v) for v in line.split()])
            except ValueError:
                raise DomainError(f"grid file {path} must hold integers") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise DomainError(f"grid file {path} must be a nonempty rectangle")
    return np.array(rows)


def _need(value, name: str, kind: str):
    if value is None:
        raise DomainError(f"construct {kind} needs --{name}")
    return value


def _build(a) -> StateTensor:
    k = a.kind
    if k == "bell":
        return C.bell(_need(a.d, "d", k))
    if k == "ghz":
        return C.ghz(_need(a.d, "d", k), a.parties)
    if k == "vec2bb":
        if a.vectors is not None:
            return C.from_unit_vectors(C.UnitVectorConfig(_read_vectors(a.vectors)))
        return C.from_unit_vectors(C.polygon_vectors(_need(a.b, "b", k)))
    if k == "2n-np1":
        n = _need(a.n, "n", k)
        return C.state_2_n_np1(n) if a.k == 1 else C.state_2_nk(n, a.k)
    if k == "sudoku":
        return C.sudoku_state(C.SudokuGrid.from_entries(_read_grid(_need(a.grid, "grid", k))))
    if k == "3j":
        dims = _need(a.dims, "dims", k)
        if len(dims) != 3:
            raise DomainError("construct 3j needs exactly three dimensions")
        return C.wigner3j_state(*dims)
    if a.six_qubit:
        ps = C.PauliStabilizerSet(C.SIX_QUBIT_GENERATORS)
    else:
        ps = C.PauliStabilizerSet.from_text(_need(a.generators, "generators", k).read_text())
    return C.pauli_stabilizer_state(ps)


def _state_summary(s: StateTensor, tol: float = 1e-9) -> dict:
    ok, dev = is_lme(s, tol)
    return {"dims": "x".join(map(str, s.dims)), "norm": s.norm, "lme": ok, "deviation": dev}


def _cmd_construct(a) -> dict:
    s = _build(a)
    write_state(s, a.output)
    return {"kind": a.kind, "output": str(a.output), **_state_summary(s)}


def _cmd_verify(a) -> dict:
    s = read_state(a.statefile)
    out = _state_summary(s, a.tol)
    if a.m is not None:
        dev = m_uniform_deviation(s, a.m)
        out.update({"m": a.m, "m_uniform": dev <= a.tol, "m_deviation": dev})
    return out


def _cmd_flow(a, seed: int) -> dict:
    if a.random is not None:
        rng = np.random.default_rng(seed)
        n = int(np.prod(a.random))
        s = StateTensor(a.random, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    else:
        s = read_state(a.statefile)
    rep = flow_to_normal_form(s, step=a.step, max_iters=a.max_iters, lme_tol=a.tol, norm_floor=a.floor)
    out = rep.to_dict()
    if a.report is not None:
        a.report.write_text(json.dumps(out, indent=2) + "\n")
    if a.output is not None:
        write_state(rep.endpoint, a.output)
        out["output"] = str(a.output)
    return out


def _cmd_stab(a, seed: int, jobs: int) -> dict:
    rep = stabilizer_report(a.dims, trials=a.trials, seed=seed, method=a.method, cap=a.cap, jobs=jobs)
    return rep.to_dict()


def _cmd_group_state(a) -> dict:
    if a.dims is not None:
        s = group_state_for_dims(a.dims, a.x, a.y)
    elif a.family == "s3-ghz":
        s = s3_ghz_state()
    elif a.family == "ut3p":
        s = ut_group_state(_need(a.p, "p", "group-state"), a.x, a.y)
    else:
        raise DomainError("group-state needs --family or --dims")
    out = _state_summary(s)
    if a.output is not None:
        write_state(s, a.output)
        out["output"] = str(a.output)
    return out


def dispatch(argv: Sequence[str]) -> CommandResult:
    """Parse ``argv`` and run one subcommand; never raises for user errors."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        return CommandResult("", {"argv": list(argv)}, {"error": str(exc), "type": "usage"}, EXIT_DOMAIN)
    if args.command is None:
        return CommandResult("", {"argv": list(argv)}, {"error": "no subcommand given", "type": "usage"}, EXIT_DOMAIN)
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    inputs = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    inputs["jobs"] = jobs
    text = None
    try:
        cmd = args.command
        if cmd == "exists":
            out = _cmd_exists(args)
        elif cmd == "dim":
            out = _cmd_dim(args)
        elif cmd == "scan":
            out, text = _cmd_scan(args, jobs)
        elif cmd == "sporadic":
            out = _cmd_sporadic(args)
        elif cmd == "construct":
            out = _cmd_construct(args)
        elif cmd == "verify":
            out = _cmd_verify(args)
        elif cmd == "flow":
            out = _cmd_flow(args, args.seed)
        elif cmd == "stab-dim":
            out = _cmd_stab(args, args.seed, jobs)
        elif cmd == "group-state":
            out = _cmd_group_state(args)
        else:
            out = group_info(args.p)
    except DomainError as exc:
        return CommandResult(args.command, inputs, {"error": str(exc), "type": "domain"}, EXIT_DOMAIN)
    except ResourceError as exc:
        return CommandResult(args.command, inputs, {"error": str(exc), "type": "resource"}, EXIT_RESOURCE)
    except OSError as exc:
        return CommandResult(args.command, inputs, {"error": str(exc), "type": "io"}, EXIT_DOMAIN)
    return CommandResult(args.command, inputs, out, EXIT_OK, text)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, tuple):
        return list(o)
    return str(o)


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    res = dispatch(argv)
    pretty = "--pretty" in argv
    if res.exit_code != EXIT_OK:
        print(res.output.get("error", "error"), file=sys.stderr)
    if res.text is not None:
        sys.stdout.write(res.text)
    else:
        print(json.dumps(res.to_dict(), indent=2 if pretty else None, default=_json_default))
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
