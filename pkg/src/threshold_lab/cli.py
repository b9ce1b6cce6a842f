"""threshold-lab command line.

Exit codes: 0 success, 1 a verifier found a violation under satisfied
hypotheses, 2 usage or input error, 3 a search budget was exhausted.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .cache import cached_census
from .counting import DEFAULT_CENSUS_EDGES
from .decomposition import DEFAULT_LEADING_CAP, leading_decomposition
from .errors import (BudgetExceeded, CensusTooLarge, Inconclusive, MalformedGraph6, SearchBudgetExceeded, ThresholdLabError)
from .families import Family, load_family
from .graph6 import parse_any, write_graph6
from .montecarlo import p_c_monte_carlo
from .numeric import Real, parse_real
from .structure import DEFAULT_SUNFLOWER_CAP, DEFAULT_TREE_COPIES
from .suites import SUITES, run_suite
from .thresholds import (ScanRow, ScanTable, is_q_sparse, p_expectation_threshold,
                         p_fractional_expectation_threshold, threshold_report)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
COMMANDS = ("pe", "pestar", "sparse-check", "pc-estimate", "decompose", "scan", "verify", "census")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


@dataclass
class RunConfig:
    n: int = 100
    theta: Fraction = Fraction(1, 2)
    mode: str = "exact"
    seed: int = 0
    caps: dict = field(default_factory=dict)
    output: str = "json"

    def __post_init__(self):
        if self.n < 1:
            raise _UsageError("--n must be at least 1")
        if self.theta <= 0:
            raise _UsageError("--theta must be positive")
        if any(v <= 0 for v in self.caps.values()):
            raise _UsageError("budgets must be positive")

    def to_json(self):
        return {"n": self.n, "theta": str(self.theta), "mode": self.mode, "seed": self.seed,
                "caps": dict(sorted(self.caps.items())), "output": self.output}


def _frac(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _real(text):
    try:
        return parse_real(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=100, help="host size of G(n, p)")
    common.add_argument("--theta", type=_frac, help="constant on the right-hand side (default 1/2, or 1 for sparse-check)")
    common.add_argument("--mode", choices=("exact", "logspace"), default="exact")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--graph6", action="append", default=[], help="graph6 or sparse6 string (repeatable)")
    common.add_argument("--family", help="builtin family or path to a graph6 file")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte-reproducibility)")
    common.add_argument("--budget-census-edges", type=int, default=DEFAULT_CENSUS_EDGES)
    common.add_argument("--budget-leading-vertices", type=int, default=DEFAULT_LEADING_CAP)
    common.add_argument("--budget-sunflower-vertices", type=int, default=DEFAULT_SUNFLOWER_CAP)
    common.add_argument("--budget-tree-copies", type=int, default=DEFAULT_TREE_COPIES)

    p = _Parser(prog="threshold-lab", description="Expectation thresholds and their supporting lemmas.")
    p.add_argument("--version", action="version", version=f"threshold-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("pe", parents=[common], help="graphic expectation threshold p_E")
    sub.add_parser("pestar", parents=[common], help="fractional expectation threshold p_E*")
    sc = sub.add_parser("sparse-check", parents=[common], help="is each graph q-sparse")
    sc.add_argument("--q", type=_real, required=True)
    pc = sub.add_parser("pc-estimate", parents=[common], help="Monte Carlo estimate of p_c")
    pc.add_argument("--samples", type=int, default=10_000)
    pc.add_argument("--tolerance", type=float, default=0.05)
    de = sub.add_parser("decompose", parents=[common], help="greedy leading decomposition")
    de.add_argument("--q", type=_real, required=True)
    de.add_argument("--p", type=_real)
    sub.add_parser("scan", parents=[common], help="p_E, p_E* and their ratio over a family")
    ve = sub.add_parser("verify", parents=[common], help="run a verifier suite")
    ve.add_argument("--suite", choices=SUITES, required=True)
    ve.add_argument("--budget", type=int, help="maximum number of instances")
    sub.add_parser("census", parents=[common], help="subgraph census with copy counts")
    return p


def _graphs(args):
    gs = []
    meta = {}
    for text in args.graph6:
        gs.append(parse_any(text))
    if args.family:
        fam = load_family(args.family)
        gs.extend(fam)
        meta = fam.meta if isinstance(fam, Family) else {}
    return gs, meta


def _hash_inputs(gs):
    h = hashlib.sha256()
    for g in gs:
        h.update(write_graph6(g).encode() + b"\n")
    return h.hexdigest()


def _num(x: Real, mode: str):
    out = x.to_json()
    if mode == "logspace":
        out.pop("exact", None)
    return out


def _coerce_mode(x: Real, mode: str) -> Real:
    return Real.from_log2(x.log2) if mode == "logspace" and not x.is_zero else x


def _census(g, cfg):
    return cached_census(g, cfg.caps["census_edges"])


def _cmd_threshold(args, cfg, gs, fractional):
    fn = p_fractional_expectation_threshold if fractional else p_expectation_threshold
    items = []
    for g in gs:
        t = fn(g, cfg.n, cfg.theta, census=_census(g, cfg))
        items.append({"graph6": write_graph6(g), "p": _num(t.p, cfg.mode), "log2_p": t.p.log2,
                      "binding": t.binding.code.decode(), "binding_graph6": write_graph6(t.binding.graph)})
    return items, EXIT_OK


def _cmd_sparse(args, cfg, gs):
    q = _coerce_mode(args.q, cfg.mode)
    items = []
    for g in gs:
        ok, w = is_q_sparse(g, cfg.n, q, cfg.theta, census=_census(g, cfg))
        items.append({"graph6": write_graph6(g), "sparse": ok,
                      "witness": None if w is None else write_graph6(w.graph)})
    return items, EXIT_OK


def _cmd_pc(args, cfg, gs):
    items = []
    code = EXIT_OK
    for g in gs:
        rep = threshold_report(g, cfg.n, cfg.theta, census=_census(g, cfg))
        try:
            est = p_c_monte_carlo(g, cfg.n, args.samples, cfg.seed, args.tolerance, jobs=args.jobs)
        except Inconclusive as exc:
            est = exc.result
            code = EXIT_BUDGET
        item = rep.to_json()
        item["p_c"] = est.to_json()
        item["graph6"] = item.pop("graph")
        items.append(item)
    return items, code


def _cmd_decompose(args, cfg, gs):
    q = _coerce_mode(args.q, cfg.mode)
    p = None if args.p is None else _coerce_mode(args.p, cfg.mode)
    items = []
    for g in gs:
        dec = leading_decomposition(g, cfg.n, q, p, cap=cfg.caps["leading_vertices"])
        items.append({"graph6": write_graph6(g), "chain": dec.to_json(), "valid": dec.valid})
    return items, EXIT_OK


def _scan_table(cfg, gs):
    table = ScanTable(cfg.n)
    for g in gs:
        try:
            table.rows.append(ScanRow(g, threshold_report(g, cfg.n, cfg.theta, census=_census(g, cfg))))
        except ThresholdLabError as exc:
            table.rows.append(ScanRow(g, error=f"{type(exc).__name__}: {exc}"))
    return table


def _cmd_census(args, cfg, gs):
    items = []
    for g in gs:
        c = _census(g, cfg)
        items.append({"graph6": write_graph6(g), "classes": [
            {"code": x.code.decode(), "graph6": write_graph6(x.graph), "v": x.v, "e": x.e, "copies": x.copies,
             "aut": x.aut} for x in c]})
    return items, EXIT_OK


def _emit(text, args, stdout):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _render(report, items, args):
    if args.format == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        flat = [_flatten(it) for it in items]
        cols = sorted({k for f in flat for k in f})
        w.writerow(cols)
        for f in flat:
            w.writerow([f.get(c, "") for c in cols])
        return buf.getvalue()
    lines = [f"# threshold-lab {__version__} {report['command']}"]
    for it in items:
        lines.append(" ".join(f"{k}={v}" for k, v in sorted(_flatten(it).items())))
    return "\n".join(lines) + "\n"


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v, sort_keys=True)
        else:
            out[key] = v
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        stderr.write(f"threshold-lab: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        theta = args.theta
        if theta is None:
            theta = Fraction(1) if args.command == "sparse-check" else Fraction(1, 2)
        cfg = RunConfig(args.n, theta, args.mode, args.seed,
                        {"census_edges": args.budget_census_edges, "leading_vertices": args.budget_leading_vertices,
                         "sunflower_vertices": args.budget_sunflower_vertices,
                         "tree_copies": args.budget_tree_copies}, args.format)
        report = {"schema_version": SCHEMA_VERSION, "tool": f"threshold-lab {__version__}",
                  "command": args.command, "config": cfg.to_json()}
        if args.command == "verify":
            try:
                rep = run_suite(args.suite, budget=args.budget, seed=cfg.seed)
            except BudgetExceeded as exc:
                report["result"] = exc.partial.to_json()
                report["budget_exceeded"] = str(exc)
                _emit(_render(report, [{"suite": args.suite, "budget_exceeded": str(exc)}], args), args, stdout)
                stderr.write(f"threshold-lab: budget exceeded: {exc}\n")
                return EXIT_BUDGET
            report["result"] = rep.to_json()
            items = [{k: v for k, v in rep.to_json().items() if k != "witnesses"}]
            code = EXIT_OK if rep.ok else EXIT_VIOLATION
        else:
            gs, meta = _graphs(args)
            if not gs:
                raise _UsageError("no input graphs; give --graph6 or --family")
            report["inputs"] = {"count": len(gs), "sha256": _hash_inputs(gs), **meta}
            if args.command == "scan":
                table = _scan_table(cfg, gs)
                rows = list(table.to_csv_rows())
                items = [dict(zip(rows[0], r)) for r in rows[1:]]
                mr = table.max_ratio
                report["max_ratio"] = None if mr is None else mr.to_json()
                code = EXIT_OK
                if args.format == "csv":
                    buf = io.StringIO()
                    csv.writer(buf, lineterminator="\n").writerows(rows)
                    report["items"] = items
                    if args.timing:
                        stderr.write(f"elapsed {time.perf_counter() - started:.3f}s\n")
                    _emit(buf.getvalue(), args, stdout)
                    return code
            elif args.command in ("pe", "pestar"):
                items, code = _cmd_threshold(args, cfg, gs, args.command == "pestar")
            elif args.command == "sparse-check":
                items, code = _cmd_sparse(args, cfg, gs)
            elif args.command == "pc-estimate":
                items, code = _cmd_pc(args, cfg, gs)
            elif args.command == "decompose":
                items, code = _cmd_decompose(args, cfg, gs)
            else:
                items, code = _cmd_census(args, cfg, gs)
            report["items"] = items
        if args.timing:
            report["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
        _emit(_render(report, items, args), args, stdout)
        return code
    except _UsageError as exc:
        stderr.write(f"threshold-lab: error: {exc}\n")
        return EXIT_USAGE
    except MalformedGraph6 as exc:
        stderr.write(f"threshold-lab: malformed graph6: {exc.args[0]}\n")
        return EXIT_USAGE
    except (SearchBudgetExceeded, CensusTooLarge) as exc:
        stderr.write(f"threshold-lab: budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (ThresholdLabError, FileNotFoundError, ValueError) as exc:
        stderr.write(f"threshold-lab: error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
