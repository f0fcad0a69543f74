"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 usage or input errors,
3 runtime failure (the golden run itself misbehaves).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import campaign as camp
from .configuration import ConfigurationError, as_configuration
from .interp import DEFAULT_TIMEOUT_FACTOR, GoldenRunError, golden_run
from .lang import ParseError, list_assertions, parse
from .oracle import ground_truth, verify
from .predictor import Predictor, predict_all
from .render import render_svg
from .search import GAParams, exhaustive, ga, greedy

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load_program(path):
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return parse(source)


def _load_results(path):
    try:
        return camp.load(path)
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _emit(obj, pretty_lines=None, pretty=False):
    if pretty and pretty_lines is not None:
        print("\n".join(pretty_lines))
    else:
        print(json.dumps(obj, indent=2))


def _counts_table(reports) -> list[str]:
    head = f"{'config':>10} {'sdc':>9} {'detected':>9} {'benign':>9} {'trap':>7} {'timeout':>7} {'runtime':>7}"
    rows = [head]
    for r in reports:
        k = r["counts"]
        rows.append(f"{r['config'] or '-':>10} {k['sdc']:>9} {k['detected']:>9} {k['benign']:>9}"
                    f" {k['trap']:>7} {k['timeout']:>7} {r['runtime']:>7}")
    return rows


def cmd_golden(args):
    p = _load_program(args.workload)
    g = golden_run(p)
    report = {
        "T": g.T,
        "workload_steps": g.workload_steps,
        "total_bits": g.memory_map.total_bits,
        "outputs": list(g.outputs),
        "assertions": [
            {"index": i, "id": aid, "cost": cost,
             "windows": [[w.t_start, w.t_end] for w in g.windows if w.assertion_index == i]}
            for i, aid, cost in list_assertions(p)
        ],
    }
    lines = [f"T={g.T} workload_steps={g.workload_steps} total_bits={g.memory_map.total_bits}"]
    lines += [f"  [{a['index']}] {a['id']} cost {a['cost']}: {len(a['windows'])} window(s)"
              for a in report["assertions"]]
    _emit(report, lines, args.pretty)
    return EXIT_OK


def cmd_campaign(args):
    p = _load_program(args.workload)
    result = camp.run_discovery(p, args.timeout_factor, args.jobs)
    camp.save(result, args.output)
    totals = {o.value.lower(): n for o, n in result.totals().items()}
    report = {"output": str(args.output), "records": len(result.records),
              "experiments": sum(r.origin is camp.ClassKind.EXPERIMENT for r in result.records),
              "T": result.T, "total_bits": result.total_bits, "totals": totals}
    _emit(report, [f"{k}: {v}" for k, v in report.items()], args.pretty)
    return EXIT_OK


def cmd_predict(args):
    result = _load_results(args.results)
    if args.all:
        reports = [counts.report(c) for c, counts in predict_all(result).items()]
        _emit(reports, _counts_table(reports), args.pretty)
    else:
        if args.config is None:
            raise UsageError("predict needs --config BITS or --all")
        c = as_configuration(args.config, result.n_assertions)
        report = Predictor(result).predict(c).report(c)
        _emit(report, _counts_table([report]), args.pretty)
    return EXIT_OK


def cmd_oracle(args):
    p = _load_program(args.workload)
    c = as_configuration(args.config, p.n_assertions)
    report = ground_truth(p, c, args.timeout_factor, args.jobs).report(c, source="oracle")
    _emit(report, _counts_table([report]), args.pretty)
    return EXIT_OK


def cmd_verify(args):
    p = _load_program(args.workload)
    if p.n_assertions > args.max_n:
        raise UsageError(f"{p.n_assertions} assertions exceed --max-n {args.max_n}")
    rows = verify(p, timeout_factor=args.timeout_factor, jobs=args.jobs, max_n=args.max_n)
    entries = []
    for c, predicted, true in rows:
        entries.append({"config": str(c), "exact": predicted == true,
                        "predicted": predicted.report(c), "oracle": true.report(c)})
    exact = sum(e["exact"] for e in entries)
    report = {"configurations": len(entries), "exact": exact, "results": entries}
    lines = [f"{exact}/{len(entries)} configurations exact"]
    lines += [f"  {e['config'] or '-'}: sdc predicted {e['predicted']['counts']['sdc']}"
              f" oracle {e['oracle']['counts']['sdc']} {'ok' if e['exact'] else 'MISMATCH'}"
              for e in entries]
    _emit(report, lines, args.pretty)
    return EXIT_OK if exact == len(entries) else EXIT_MISMATCH


def cmd_search(args):
    result = _load_results(args.results)
    if args.method == "exhaustive":
        out = exhaustive(result)
    elif args.method == "greedy":
        out = greedy(result)
    else:
        params = GAParams(population=args.population, generations=args.generations,
                          mutation_rate=args.mutation_rate, crossover_rate=args.crossover_rate,
                          seed=args.seed)
        try:
            out = ga(result, params)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    report = out.report()
    _emit(report, [f"{k}: {v}" for k, v in report.items()], args.pretty)
    return EXIT_OK


def cmd_render(args):
    result = _load_results(args.results)
    c = as_configuration(args.config, result.n_assertions)
    Path(args.output).write_text(render_svg(result, c), encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="detox", description="Assertion-configuration SDC analysis.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                        help="human-readable output instead of JSON")
    ap.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    sub = ap.add_subparsers(dest="command", required=True)

    def run_opts(p):
        p.add_argument("--timeout-factor", type=float, default=DEFAULT_TIMEOUT_FACTOR)
        p.add_argument("--jobs", type=int, default=camp.default_jobs(),
                       help="worker processes (default: $DETOX_JOBS or 1)")

    p = sub.add_parser("golden", parents=[common], help="fault-free run summary")
    p.add_argument("workload")
    p.set_defaults(func=cmd_golden)

    p = sub.add_parser("campaign", parents=[common], help="run the discovery campaign")
    p.add_argument("workload")
    p.add_argument("-o", "--output", required=True)
    run_opts(p)
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("predict", parents=[common], help="predict counts from a result file")
    p.add_argument("results")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--config")
    g.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("oracle", parents=[common], help="ground-truth campaign for one configuration")
    p.add_argument("workload")
    p.add_argument("--config", required=True)
    run_opts(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", parents=[common], help="compare predictions with ground truth for all configurations")
    p.add_argument("workload")
    p.add_argument("--max-n", type=int, default=12)
    run_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="search for the minimum-SDC configuration")
    p.add_argument("results")
    p.add_argument("--method", choices=("exhaustive", "greedy", "ga"), default="exhaustive")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--population", type=int, default=32)
    p.add_argument("--generations", type=int, default=100)
    p.add_argument("--mutation-rate", type=float, default=None)
    p.add_argument("--crossover-rate", type=float, default=0.9)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("render", parents=[common], help="draw the fault-space diagram as SVG")
    p.add_argument("results")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GoldenRunError as exc:
        print(f"detox: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (UsageError, ParseError, ConfigurationError, camp.MalformedResultError) as exc:
        print(f"detox: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
