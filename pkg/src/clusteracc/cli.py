"""Command-line interface.

    clusteracc eval GT CAND [--metrics omega,f1h,gnmi] [--ovp] [--json]
    clusteracc generate --nodes N --clusters K [--membership M] [--seed S] [-o FILE]
    clusteracc corpus [SAMPLE ROLE]

Exit status: 0 on success (also when GNMI does not converge), 1 on I/O
errors, 2 on usage errors, 3 on parse errors, 4 on universe mismatch and
5 on degenerate input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import corpus
from .exceptions import DegenerateInputError, ParseError, UniverseMismatchError
from .meanf1 import mean_f1
from .model import (
    ContributionMode,
    MetricResult,
    UniversePolicy,
    align_universes,
    dump_cnl,
    load_cnl,
)
from .nmi import GnmiConfig, Normalization, gnmi, nmi_exact
from .omega import omega, omega_soft
from .synthetic import generate_synthetic

METRICS = ("omega", "omega-soft", "f1a", "f1h", "f1p", "nmi", "gnmi")
DEFAULT_METRICS = ("omega-soft", "f1h", "nmi")

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_UNIVERSE = 4
EXIT_DEGENERATE = 5


@dataclass
class RunSpec:
    gt_path: str
    cand_path: str
    metrics: tuple[str, ...] = DEFAULT_METRICS
    mode: ContributionMode = ContributionMode.MULTIRESOLUTION
    universe_policy: UniversePolicy = UniversePolicy.STRICT
    gnmi: GnmiConfig = field(default_factory=GnmiConfig)
    json: bool = False
    workers: int = 1
    weighted: bool = False
    norm: Normalization = Normalization.MAX

    def __post_init__(self):
        if not self.metrics:
            raise ValueError("select at least one metric")
        unknown = [m for m in self.metrics if m not in METRICS]
        if unknown:
            raise ValueError(f"unknown metric(s): {', '.join(unknown)}")


def _evaluate(name: str, gt, cand, spec: RunSpec) -> MetricResult:
    t0 = time.perf_counter()
    extra = {}
    if name == "omega":
        res = MetricResult(name, omega(gt, cand, workers=spec.workers).value)
    elif name == "omega-soft":
        res = MetricResult(name, omega_soft(gt, cand, workers=spec.workers).value)
    elif name in ("f1a", "f1h", "f1p"):
        res = MetricResult(name, mean_f1(gt, cand, name, spec.mode,
                                         weighted=spec.weighted))
    elif name == "nmi":
        res = MetricResult(name, nmi_exact(gt, cand, spec.norm))
    else:
        r = gnmi(gt, cand, spec.gnmi, spec.workers, spec.norm)
        if r.diagnostic:
            extra["diagnostic"] = r.diagnostic
        res = MetricResult(name, r.value, r.converged, r.events, r.seed,
                           extra=extra)
    res.elapsed_ms = (time.perf_counter() - t0) * 1e3
    return res


def run(spec: RunSpec, out=None, err=None) -> tuple[int, dict]:
    """Evaluate ``spec`` and write the report; returns (exit status, report)."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        gt = load_cnl(spec.gt_path)
        cand = load_cnl(spec.cand_path)
    except ParseError as e:
        print(f"clusteracc: parse error: {e}", file=err)
        return EXIT_PARSE, {}
    except OSError as e:
        print(f"clusteracc: {e}", file=err)
        return EXIT_IO, {}
    try:
        gt, cand = align_universes(gt, cand, spec.universe_policy)
    except UniverseMismatchError as e:
        print(f"clusteracc: {e}", file=err)
        return EXIT_UNIVERSE, {}
    except ParseError as e:
        print(f"clusteracc: {e}", file=err)
        return EXIT_PARSE, {}

    report = {}
    for name in spec.metrics:
        try:
            res = _evaluate(name, gt, cand, spec)
        except DegenerateInputError as e:
            print(f"clusteracc: {name}: {e}", file=err)
            return EXIT_DEGENERATE, report
        report[name] = res.as_dict()
        if not spec.json:
            print(f"{name}\t{res.value:.6f}", file=out)
        if "diagnostic" in res.extra:
            print(f"clusteracc: {name}: {res.extra['diagnostic']}", file=err)
    if spec.json:
        json.dump(report, out, indent=2)
        out.write("\n")
    return EXIT_OK, report


def _metric_list(text: str) -> tuple[str, ...]:
    names = tuple(m.strip().lower() for m in text.split(",") if m.strip())
    if "all" in names:
        return METRICS
    bad = [m for m in names if m not in METRICS]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown metric(s) {', '.join(bad) or '(none)'}; choose from "
            f"{', '.join(METRICS)} or all")
    return names


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="clusteracc",
        description="Accuracy of overlapping and multi-resolution clusterings.")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="compare a candidate with a ground truth")
    ev.add_argument("gt", help="ground-truth clustering (one cluster per line)")
    ev.add_argument("cand", help="candidate clustering")
    ev.add_argument("--metrics", type=_metric_list, default=DEFAULT_METRICS,
                    help="comma-separated list of "
                    f"{', '.join(METRICS)} or all (default: "
                    f"{','.join(DEFAULT_METRICS)})")
    mode = ev.add_mutually_exclusive_group()
    mode.add_argument("--ovp", dest="mode", action="store_const",
                      const=ContributionMode.OVERLAPPING,
                      help="overlapping semantics: shared nodes split their mass")
    mode.add_argument("--multires", dest="mode", action="store_const",
                      const=ContributionMode.MULTIRESOLUTION,
                      help="multi-resolution semantics (default)")
    ev.set_defaults(mode=ContributionMode.MULTIRESOLUTION)
    ev.add_argument("--universe", choices=[u.value for u in UniversePolicy],
                    default="strict",
                    help="node universe handling (default: strict)")
    ev.add_argument("--weighted", action="store_true",
                    help="weight F1 best matches by cluster size")
    ev.add_argument("--norm", choices=[n.value for n in Normalization],
                    default="max", help="NMI normalizer (default: max)")
    ev.add_argument("--rerr", type=float, default=0.01,
                    help="GNMI admissible error (default: 0.01)")
    ev.add_argument("--risk", type=float, default=0.01,
                    help="GNMI risk (default: 0.01)")
    ev.add_argument("--seed", type=int, default=0, help="GNMI seed")
    ev.add_argument("--workers", type=int, default=1,
                    help="threads for omega and gnmi (default: 1)")
    ev.add_argument("--json", action="store_true", help="JSON report")

    gen = sub.add_parser("generate", help="write a random synthetic clustering")
    gen.add_argument("--nodes", type=int, required=True)
    gen.add_argument("--clusters", type=int, required=True)
    gen.add_argument("--membership", type=float, default=1.0,
                     help="average clusters per node (default: 1.0)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", help="output file (default: stdout)")

    cp = sub.add_parser("corpus", help="list or print bundled clusterings")
    cp.add_argument("sample", nargs="?",
                    choices=("tableI",) + corpus.CONSTRAINTS)
    cp.add_argument("role", nargs="?", choices=corpus.ROLES)
    return p


def _cmd_eval(args) -> int:
    try:
        cfg = GnmiConfig(rerr=args.rerr, rrisk=args.risk, seed=args.seed)
    except ValueError as e:
        print(f"clusteracc: {e}", file=sys.stderr)
        return EXIT_USAGE
    spec = RunSpec(args.gt, args.cand, args.metrics, args.mode,
                   UniversePolicy(args.universe), cfg, args.json,
                   max(1, args.workers), args.weighted, Normalization(args.norm))
    return run(spec)[0]


def _cmd_generate(args) -> int:
    try:
        c = generate_synthetic(args.nodes, args.clusters, args.membership,
                               args.seed)
    except ValueError as e:
        print(f"clusteracc: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = dump_cnl(c)
    if args.output is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        print(f"clusteracc: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _cmd_corpus(args) -> int:
    if args.sample is None:
        for s in ("tableI",) + corpus.CONSTRAINTS:
            for r in corpus.ROLES:
                print(f"{s}\t{r}\t{corpus.corpus_path(s, r)}")
        return EXIT_OK
    if args.role is None:
        print("clusteracc: corpus: give a role (gt, low or high)",
              file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(corpus.corpus_path(args.sample, args.role)
                     .read_text(encoding="utf-8"))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"eval": _cmd_eval, "generate": _cmd_generate,
               "corpus": _cmd_corpus}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
