"""
Command-line interface for carveorder.
Parses arguments, dispatches to the command handlers and turns errors into exit codes.
"""

import argparse
import json
from typing import Callable, Dict, List, Optional

from ..core import reporting
from ..core.errors import (
    CarveError,
    GraphFormatError,
    InvariantViolation,
    NoEligibleEdge,
    NotPlanar,
    NotPlanarEmbedding,
    RejectionBudgetExhausted,
)
from ..experiments.bench import DEFAULT_EXACT_BUDGET_S
from ..experiments.netgen import DEFAULT_MAX_REJECTS, DEFAULT_MEMORY_CAP_LOG2, DEFAULT_SAMPLES
from ..experiments.pipeline import DEFAULT_RUNS
from ..solver.ratcatcher import DEFAULT_EPS
from .command_handlers import (
    handle_bench_command,
    handle_decompose_command,
    handle_exact_command,
    handle_generate_command,
    handle_pipeline_command,
    handle_sequence_command,
    handle_simplify_command,
    handle_verify_command,
    handle_width_command,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_PLANAR = 2
EXIT_INPUT = 3
EXIT_INVARIANT = 4
EXIT_USAGE = 64


def _number_or_auto(value: str) -> str:
    if value != "auto":
        try:
            float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {value!r}")
    return value


def _common_options(overrides: bool) -> argparse.ArgumentParser:
    """
    Flags accepted before and after the subcommand.

    The copy attached to the subcommands has no defaults, so a flag given
    after the subcommand overrides the one given before it and an absent
    one leaves it alone.
    """

    def default(value):
        return argparse.SUPPRESS if overrides else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=default(0), help="Seed of every random stream")
    common.add_argument("--workers", type=int, default=default(1), help="Parallel carvings or benchmark jobs")
    common.add_argument("--eps", type=float, default=default(DEFAULT_EPS), help="Tolerance of log2 width comparisons")
    common.add_argument("--format", choices=("json", "csv"), default=default("json"), help="Result format on stdout")
    common.add_argument(
        "--exact-pow2", action="store_true", default=default(False), help="Exact integer widths when every weight is a power of two"
    )
    common.add_argument("--verbose", action="store_true", default=default(False), help="Print [LOG] progress lines")
    return common


class ConsoleUI:
    """
    Single entry point for the carveorder subcommands.
    """

    def __init__(self):
        self.handlers: Dict[str, Callable] = {
            "simplify": handle_simplify_command,
            "width": handle_width_command,
            "decompose": handle_decompose_command,
            "sequence": handle_sequence_command,
            "verify": handle_verify_command,
            "exact": handle_exact_command,
            "generate": handle_generate_command,
            "bench": handle_bench_command,
            "pipeline": handle_pipeline_command,
        }
        self.parser = self.build_parser()

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="carveorder",
            description="Carving-width contraction orders for planar tensor networks.",
            parents=[_common_options(False)],
        )
        sub = parser.add_subparsers(dest="command", required=True)
        common = [_common_options(True)]

        p = sub.add_parser("simplify", parents=common, help="Merge parallels, drop loops, free indices and unit edges")
        p.add_argument("graph")
        p.add_argument("-o", "--output")

        p = sub.add_parser("width", parents=common, help="Carving-width of the simplified network")
        p.add_argument("graph")

        p = sub.add_parser("decompose", parents=common, help="Best of N optimal-width contraction trees")
        p.add_argument("graph")
        p.add_argument("-N", "-n", "--runs", type=int, default=DEFAULT_RUNS)
        p.add_argument("--target", type=float, help="Target width, computed when omitted")
        p.add_argument("-o", "--output")

        p = sub.add_parser("sequence", parents=common, help="Contraction sequence of a tree")
        p.add_argument("graph")
        p.add_argument("tree")
        p.add_argument("-o", "--output")

        p = sub.add_parser("verify", parents=common, help="Re-check a sequence and optionally the tree it came from")
        p.add_argument("graph")
        p.add_argument("sequence")
        p.add_argument("--tree", help="Contraction tree the sequence was built from")
        p.add_argument("--numeric", action="store_true", help="Contract seeded random tensors and compare with the reference sum")

        p = sub.add_parser("exact", parents=common, help="Minimum total time by subset dynamic programming")
        p.add_argument("graph")
        p.add_argument("--budget", type=float, help="Wall-clock budget in seconds")
        p.add_argument("-o", "--output")

        p = sub.add_parser("generate", parents=common, help="Sample lognormal grid networks")
        p.add_argument("-L", type=int, required=True)
        p.add_argument("-n", "--count", type=int, default=DEFAULT_SAMPLES)
        p.add_argument("--mu", type=_number_or_auto, default="auto", help="Natural-log mean or 'auto' to calibrate")
        p.add_argument("--sigma-max", type=_number_or_auto, default="auto")
        p.add_argument("--cap", type=float, default=DEFAULT_MEMORY_CAP_LOG2, help="log2 memory cap")
        p.add_argument("--max-rejects", type=int, default=DEFAULT_MAX_REJECTS)
        p.add_argument("-o", "--output", required=True)

        p = sub.add_parser("bench", parents=common, help="Benchmark sampled grids against the exact optimum")
        p.add_argument("-L", type=int, nargs="*", default=[])
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        p.add_argument("-N", "-n", "--runs", type=int, default=DEFAULT_RUNS)
        p.add_argument("--sigma-max", type=_number_or_auto, default="auto")
        p.add_argument("--cap", type=float, default=DEFAULT_MEMORY_CAP_LOG2)
        p.add_argument("--max-rejects", type=int, default=DEFAULT_MAX_REJECTS)
        p.add_argument("--budget", type=float, default=DEFAULT_EXACT_BUDGET_S, help="Exact baseline budget per graph")
        p.add_argument("-o", "--output", help="CSV file")

        p = sub.add_parser("pipeline", parents=common, help="Simplify, embed, carve and sequence in one go")
        p.add_argument("graph")
        p.add_argument("-N", "-n", "--runs", type=int, default=DEFAULT_RUNS)
        p.add_argument("-o", "--output", required=True, help="Output directory")
        return parser

    def display_help(self) -> None:
        self.parser.print_help()

    def run(self, argv: Optional[List[str]] = None) -> int:
        """
        Parse `argv` and run the chosen subcommand.

        Returns:
            The process exit code; usage errors give EXIT_USAGE
        """
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_USAGE
        reporting.set_verbose(args.verbose)
        try:
            self.handlers[args.command](args)
        except (NotPlanar, NotPlanarEmbedding) as e:
            reporting.error(str(e))
            return EXIT_NOT_PLANAR
        except (RejectionBudgetExhausted, GraphFormatError, OSError) as e:
            reporting.error(str(e))
            return EXIT_INPUT
        except (InvariantViolation, NoEligibleEdge) as e:
            reporting.error(str(e))
            print(json.dumps(e.diagnostics, indent=2, sort_keys=True, default=str))
            return EXIT_INVARIANT
        except CarveError as e:
            reporting.error(str(e))
            return EXIT_ERROR
        return EXIT_OK
