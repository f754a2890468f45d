"""
omegatile command line
Entry point for the compilers, searches, encodings and fidelity reports
"""

import argparse
import logging
import sys
from typing import List, Optional

from ..core.errors import BudgetExhausted, NonPositive, OmegaTileError
from ..core.models import AcceptanceMode, AcceptanceVariant
from ..core.turing_models import MachineAcceptance
from . import commands
from .commands import EXIT_BUDGET, EXIT_DATAERR, EXIT_USAGE, status


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Reports usage errors with exit status 64 instead of 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        status(f"❌ {self.prog}: {message}")
        raise UsageError(message)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget", type=int, default=None,
                        help="Search node budget (default: OMEGATILE_BUDGET or 10^7)")
    parser.add_argument("--format", choices=("text", "records"), default="text",
                        help="Plain text, or key=value records one per line")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")


def _acceptance(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--condition", choices=[v.value for v in AcceptanceVariant],
                        help="Override the acceptance variant of the system file")
    parser.add_argument("--mode", choices=[m.value for m in AcceptanceMode],
                        help="Override where the condition is checked")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="omegatile", description="Tiling systems for omega-pictures and their reductions")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    for verb, handler, what in (("compile-k", commands.cmd_compile_k, "K(m)"),
                                ("compile-h", commands.cmd_compile_h, "H(m)")):
        sub = verbs.add_parser(verb, help=f"Compile a machine to the tiling system {what}")
        sub.add_argument("machine", help="Machine file (turing-machine v1)")
        sub.add_argument("-o", "--output", help="Write the system here instead of stdout")
        _common(sub)
        sub.set_defaults(handler=handler)

    sub = verbs.add_parser("theta", help="Build the machine reading two interleaved words")
    sub.add_argument("left", help="Machine run on the odd letters")
    sub.add_argument("right", help="Machine run on the even letters")
    sub.add_argument("--acceptance", choices=[mode.value for mode in MachineAcceptance], default="1prime",
                     help="Acceptance the machine is built for; with buchi the start state is not accepting")
    sub.add_argument("-o", "--output", help="Write the machine here instead of stdout")
    _common(sub)
    sub.set_defaults(handler=commands.cmd_theta)

    sub = verbs.add_parser("search-run", help="Search for the best run of a system on a picture")
    sub.add_argument("system", help="Tiling-system file")
    sub.add_argument("picture", help="Picture file")
    sub.add_argument("--oracle", action="store_true", help="Enumerate every assignment instead of backtracking")
    _acceptance(sub)
    _common(sub)
    sub.set_defaults(handler=commands.cmd_search_run)

    sub = verbs.add_parser("check-run", help="Validate a given run and evaluate its acceptance")
    sub.add_argument("system", help="Tiling-system file")
    sub.add_argument("picture", help="Picture file")
    sub.add_argument("run", help="Run file over the full window domain")
    _acceptance(sub)
    _common(sub)
    sub.set_defaults(handler=commands.cmd_check_run)

    sub = verbs.add_parser("emptiness", help="Search letters and states together at a fixed depth")
    sub.add_argument("system", help="Tiling-system file")
    sub.add_argument("--depth", type=int, help="Window depth n")
    _acceptance(sub)
    _common(sub)
    sub.set_defaults(handler=commands.cmd_emptiness)

    sub = verbs.add_parser(
        "verify-reduction", help="Compare a machine with its compiled K system",
        description="Compare a machine with its compiled K system.",
        epilog="exit status: 0 agreement, 1 disagreement, 3 budget exhausted "
               "(not the verdict codes of search-run, check-run and emptiness)",
    )
    sub.add_argument("machine", help="Machine file")
    sub.add_argument("--word", help="Word prefix; padded with 'a' to the depth")
    sub.add_argument("--depth", type=int, help="Window depth n")
    sub.add_argument("--seed", type=int, default=0, help="Seed for the random word drawn when --word is absent")
    _common(sub)
    sub.set_defaults(handler=commands.cmd_verify_reduction)

    sub = verbs.add_parser("encode", help="Picture to row stream, run to bit code, or word to picture")
    sub.add_argument("input", nargs="?", help="Picture or run file")
    sub.add_argument("--word", help="Encode this word as the picture p(i,j) = w(b(i,j))")
    sub.add_argument("--depth", type=int, help="Window depth for --word")
    sub.add_argument("--system", help="Tiling-system file fixing the state order of a run code")
    sub.add_argument("-o", "--output", help="Write here instead of stdout")
    _common(sub)
    sub.set_defaults(handler=commands.cmd_encode)

    sub = verbs.add_parser("decode", help="Row stream to picture, bit code to run cells, or picture to word")
    sub.add_argument("input", help="Stream, code or picture file")
    sub.add_argument("-o", "--output", help="Write here instead of stdout")
    _common(sub)
    sub.set_defaults(handler=commands.cmd_decode)

    sub = verbs.add_parser("show", help="Render any supported file as text")
    sub.add_argument("input", help="Machine, system, picture, run, stream or code file")
    _common(sub)
    sub.set_defaults(handler=commands.cmd_show)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except BudgetExhausted as e:
        status(f"⚠️ {e}")
        return EXIT_BUDGET
    except NonPositive as e:
        status(f"❌ {e}")
        return EXIT_USAGE
    except OmegaTileError as e:
        status(f"❌ {type(e).__name__}: {e}")
        return EXIT_DATAERR
    except (OSError, ValueError) as e:
        status(f"❌ {e}")
        return EXIT_DATAERR


if __name__ == "__main__":
    sys.exit(main())
