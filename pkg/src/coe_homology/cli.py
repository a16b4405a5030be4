"""Command-line entry point: coe-homology {verify,homology,cohomology,transfer,report}."""

from __future__ import annotations

import argparse
import sys

from .errors import CoeHomologyError
from .instance import bundled_corpus, load_instance
from .report import COMMANDS, emit_report, run_command

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="coe-homology",
        description="Verify orbit-equivalence links between finite actions and the induced "
                    "(co)homology transfer, in exact rational arithmetic.",
        epilog="Caps can be raised through COE_HOMOLOGY_MAX_DEGREE, COE_HOMOLOGY_SIZE_CAP "
               "and COE_HOMOLOGY_LP_DIM_CAP. Exit status: 0 all pass, 1 failures, 2 input or resource error.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--instance", help="instance JSON file (default: the bundled corpus)")
    p.add_argument("--link", help="restrict to one link (and the actions it joins)")
    p.add_argument("--max-degree", type=int, help="highest chain degree to build (default from params)")
    p.add_argument("--seed", type=int, help="seed for sampled vectors and functionals")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identity)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        print("coe-homology: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_INPUT
    if args.max_degree is not None and args.max_degree < 1:
        print("coe-homology: --max-degree must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        inst = load_instance(args.instance) if args.instance else bundled_corpus()
        rep = run_command(args.command, inst, link=args.link, max_degree=args.max_degree, seed=args.seed)
    except CoeHomologyError as exc:
        print("coe-homology: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    text = emit_report(rep, args.format, with_timings=args.timings)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print("coe-homology: cannot write %s: %s" % (args.out, exc.strerror), file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
