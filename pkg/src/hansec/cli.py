"""Command line: ``hansec bench | demo | sim``.

Exit codes: 0 success (or the expected verdict), 2 unexpected verdict or
protocol failure, 64 usage or scenario parse error.
"""

import argparse
import json
import os
import sys

from .bench import BENCH_PROTOCOLS, bench
from .demo import DEMO_PROTOCOLS, run_demo
from .errors import ConfigurationError, HanError, ScenarioParseError, UnsupportedGroup
from .group import GROUP_NAMES
from .proximity import BoundingConfig
from .sim import expected_verdict, load_scenario, parse_scenario, shipped_scenario_text, shipped_scenarios
from .sim.engine import Verdict

EXIT_OK = 0
EXIT_UNEXPECTED = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bounding(args, base=None):
    base = base or BoundingConfig()
    rounds = args.db_rounds if args.db_rounds is not None else base.rounds
    threshold = args.db_threshold_m if args.db_threshold_m is not None else base.threshold_m
    return BoundingConfig(rounds=rounds, signal_speed=base.signal_speed, processing_delay_ns=base.processing_delay_ns,
                          threshold_m=threshold, response_bits=base.response_bits)


def _add_db_flags(p):
    p.add_argument("--db-rounds", type=int, help="distance-bounding rounds (default 32)")
    p.add_argument("--db-threshold-m", type=float, help="distance-bounding threshold in meters (default 10)")


def build_parser():
    parser = _Parser(prog="hansec", description="Home-network security protocols: benchmarks, demos, attack simulation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bench", help="time a protocol over many iterations")
    b.add_argument("--protocol", required=True, choices=BENCH_PROTOCOLS)
    b.add_argument("--group", required=True, choices=GROUP_NAMES)
    b.add_argument("--iters", type=int, default=1000)
    b.add_argument("--warmup", type=int, default=50)
    b.add_argument("--seed", type=int)
    b.add_argument("--json", metavar="OUT", help="write the report as JSON ('-' for stdout)")
    b.add_argument("--insecure", action="store_true", help="allow the toy group")

    d = sub.add_parser("demo", help="run one annotated honest instance")
    d.add_argument("protocol", choices=DEMO_PROTOCOLS)
    d.add_argument("--group", default="prime192v1", choices=GROUP_NAMES)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--transcript", metavar="FILE", help="transcript path (default demo-<protocol>.jsonl)")
    _add_db_flags(d)

    s = sub.add_parser("sim", help="run a scenario file through the simulator")
    s.add_argument("--config", required=True,
                   help=f"scenario file, or a bundled scenario: {', '.join(shipped_scenarios())}")
    s.add_argument("--seed", type=int, help="override the scenario's seed")
    s.add_argument("--transcript", metavar="FILE", help="transcript path (default <scenario>.jsonl)")
    s.add_argument("--insecure", action="store_true", help="allow the toy group")
    _add_db_flags(s)
    return parser


def _write(path, transcript):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(transcript.to_jsonl())


def cmd_bench(args):
    report = bench(args.protocol, args.group, args.iters, insecure=args.insecure, seed=args.seed, warmup=args.warmup)
    print(f"{report.protocol} {report.group}: mean {report.mean_ms:.3f} ms, stdev {report.stdev_ms:.3f} ms "
          f"over {report.iterations} runs; {report.wire_messages} messages, "
          f"{report.exponentiations} prover/initiator exponentiations")
    if args.json:
        text = json.dumps(report.to_dict(), indent=2) + "\n"
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
    return EXIT_OK


def cmd_demo(args):
    transcript, lines, ok = run_demo(args.protocol, args.group, args.seed, _bounding(args))
    for line in lines:
        print(line)
    path = args.transcript or f"demo-{args.protocol}.jsonl"
    _write(path, transcript)
    print(f"transcript written to {path}")
    return EXIT_OK if ok else EXIT_UNEXPECTED


def _load(config):
    if os.path.exists(config):
        return load_scenario(config)
    if config in shipped_scenarios():
        return parse_scenario(shipped_scenario_text(config))
    raise FileNotFoundError(f"no scenario file or bundled scenario named {config!r}")


def cmd_sim(args):
    scenario = _load(args.config)
    if args.db_rounds is not None or args.db_threshold_m is not None:
        scenario.bounding_config = _bounding(args, scenario.bounding_config)
    outcome = scenario.run(seed=args.seed, insecure=args.insecure)
    path = args.transcript or f"{scenario.name}.jsonl"
    _write(path, outcome.transcript)
    if scenario.expect:
        expected = Verdict.parse(scenario.expect)
    else:
        expected = expected_verdict(scenario.protocol, scenario.adversary)
    match = expected is not None and outcome.verdict == expected
    evidence = "; ".join(f"{e.kind}: {json.dumps(e.detail, sort_keys=True)}" for e in outcome.evidence) or "none"
    print(f"scenario {scenario.name}: {scenario.protocol} vs {scenario.adversary}, seed "
          f"{outcome.seed}, {outcome.metrics['messages']} messages")
    print(f"evidence: {evidence}")
    print(f"transcript written to {path}")
    print(f"verdict: {outcome.verdict} (expected {expected if expected is not None else 'unknown'})"
          f"{'' if match else ' UNEXPECTED'}")
    return EXIT_OK if match else EXIT_UNEXPECTED


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return {"bench": cmd_bench, "demo": cmd_demo, "sim": cmd_sim}[args.command](args)
    except ScenarioParseError as exc:
        print(f"hansec: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigurationError, UnsupportedGroup, ValueError) as exc:
        print(f"hansec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"hansec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HanError as exc:
        print(f"hansec: protocol failure: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
