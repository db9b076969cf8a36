"""``ridesched gen|schedule|bench`` command line."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .bench import acceptance_checks, bench, evaluate, parse_algorithms
from .ingest import IngestError, load_instance, read_corpus, render_report, write_corpus
from .routegen import GenConfig, GenerationExhausted, generate

EXIT_OK, EXIT_CHECK, EXIT_IO = 0, 1, 2


def _instances(args) -> dict:
    if not args.instance:
        raise IngestError("at least one --instance is required")
    out = {}
    for path in args.instance:
        inst = load_instance(path, args.format)
        out[inst.name] = inst
    return out


def _params(instances) -> dict:
    return {
        name: inst.battery.params() if inst.battery is not None else None
        for name, inst in instances.items()
    }


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_gen(args) -> int:
    instances = _instances(args)
    cfg = GenConfig(
        seed=args.seed,
        routes_per_instance=args.count,
        size_range=(args.size_min, args.size_max),
        station_density=args.station_density,
        bias=args.bias,
        min_stations=args.min_stations,
    )
    target = args.out or args.corpus
    if target is None:
        raise IngestError("gen needs --out")
    routes = (r for inst in instances.values() for r in generate(inst, cfg))
    n = write_corpus(target, routes)
    print(f"wrote {n} routes to {target}", file=sys.stderr)
    return EXIT_OK


def cmd_schedule(args) -> int:
    instances = _instances(args)
    params = _params(instances)
    algs = parse_algorithms(args.alg)
    lines = [["record", "instance", "vehicle", "size", "alg", "verdict", "excess", "cpu_ms"]]
    for k, route in enumerate(read_corpus(args.corpus, instances), start=1):
        for alg in algs:
            res, _ = evaluate(alg, route, params.get(route.instance_id), args.repeats)
            excess = "" if res.excess is None else repr(float(res.excess))
            lines.append(
                [k, route.instance_id, route.vehicle_id, len(route), alg, res.verdict, excess,
                 f"{res.cpu_ms:.4f}"]
            )
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(lines)
    else:
        csv.writer(sys.stdout, lineterminator="\n").writerows(lines)
    return EXIT_OK


def cmd_bench(args) -> int:
    instances = _instances(args)
    algs = parse_algorithms(args.alg)
    routes = list(read_corpus(args.corpus, instances))
    report = bench(routes, algs, _params(instances), repeats=args.repeats, jobs=args.jobs)
    _write(render_report(report.report_rows()), args.out)
    for row in report.rows:
        if row.causes or row.n_incorrect or row.n_unsound:
            causes = " ".join(f"{k}={v}" for k, v in sorted(row.causes.items()))
            print(
                f"{row.name} {row.alg}: incorrect={row.n_incorrect} unsound={row.n_unsound} {causes}",
                file=sys.stderr,
            )
    if not args.check:
        return EXIT_OK
    status = EXIT_OK
    if "alg1" not in algs:
        raise IngestError("--check needs alg1 among --alg")
    for check in acceptance_checks(report, "alg1"):
        print(f"{'PASS' if check.passed else 'FAIL'} {check.label}: {check.detail}", file=sys.stderr)
        if not check.passed:
            status = EXIT_CHECK
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ridesched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--instance", action="append", default=[], help="instance file (repeatable)")
        p.add_argument("--format", choices=["darp", "eadarp"], default=None,
                       help="instance format; by default inferred from the file suffix")
        p.add_argument("--corpus", help="corpus file")
        p.add_argument("--out", help="output file (default stdout)")

    g = sub.add_parser("gen", help="generate a route corpus")
    common(g)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1000, help="routes per instance")
    g.add_argument("--size-min", type=int, default=4)
    g.add_argument("--size-max", type=int, default=40)
    g.add_argument("--station-density", type=float, default=0.0)
    g.add_argument("--min-stations", type=int, default=0)
    g.add_argument("--bias", choices=["random", "greedy-nearest"], default="greedy-nearest")
    g.set_defaults(func=cmd_gen)

    for name, func, default in (("schedule", cmd_schedule, "alg1"), ("bench", cmd_bench, "alg1,eight-step")):
        p = sub.add_parser(name, help=f"{name} a corpus")
        common(p)
        p.add_argument("--alg", default=default, help="comma separated: alg1, eight-step, oracle")
        p.add_argument("--repeats", type=int, default=3, help="timed repetitions per route")
        if name == "bench":
            p.add_argument("--jobs", type=int, default=1)
            p.add_argument("--check", action="store_true",
                           help="exit 1 when alg1 misses the audit thresholds")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "corpus", None) is None and args.command != "gen":
        print("ridesched: --corpus is required", file=sys.stderr)
        return EXIT_IO
    try:
        return args.func(args)
    except (IngestError, GenerationExhausted, OSError, ValueError) as exc:
        print(f"ridesched: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
