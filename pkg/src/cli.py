# src/cli.py
"""Command-line front end: ``intersect <command> [options]``."""
import argparse
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
import json
import logging
import sys
from typing import Iterator, List, Optional, Sequence, TextIO

from src.config.settings import get_settings, setup_logging
from src.core.errors import ExpressionError, IntersectionError, ParseError
from src.services.commands import (
    CommandOutput,
    euler_command,
    eval_command,
    lines_command,
    residual_command,
    table_command,
)
from src.services.ring_config import dump_spec, load_preset, ring_to_spec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _int_list(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _grass(text: str) -> List[int]:
    values = _int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected M,K, got {text!r}")
    return values


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so run_command can report exit codes."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}", self.format_usage())


class _UsageError(Exception):
    def __init__(self, message: str, usage: str):
        super().__init__(message)
        self.usage = usage


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="intersect", description="Exact intersection-theory calculator")
    parser.add_argument("--log-level", default=None, help="logging level (default from settings)")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    lines = commands.add_parser("lines", help="count lines on a hypersurface or complete intersection")
    lines.add_argument("--n", type=_positive, required=True, help="ambient projective dimension")
    shape = lines.add_mutually_exclusive_group()
    shape.add_argument("--d", type=_positive, help="hypersurface degree")
    shape.add_argument("--ci", type=_int_list, help="degrees of a complete intersection, e.g. 2,2")
    lines.add_argument("--method", choices=["direct", "residual", "both"], default="direct")
    lines.add_argument("--format", choices=["text", "json"], default="text")

    euler = commands.add_parser("euler", help="Euler characteristic of a preset")
    target = euler.add_mutually_exclusive_group(required=True)
    target.add_argument("--grass", type=_grass, help="Grassmannian as M,K")
    target.add_argument("--projective", type=_non_negative, help="projective space dimension")
    euler.add_argument("--method", choices=["direct", "residual", "both"], default="direct")
    euler.add_argument("--format", choices=["text", "json"], default="text")

    table = commands.add_parser("table", help="formal contribution coefficients")
    table.add_argument("--codim", type=_positive, required=True)
    table.add_argument("--components", type=_positive, required=True)
    table.add_argument("--max-degree", type=_non_negative, required=True)
    table.add_argument("--format", choices=["text", "json"], default="text")

    for name, summary in (("eval", "evaluate an expression"), ("integrate", "integrate an expression")):
        sub = commands.add_parser(name, help=summary)
        sub.add_argument("--ring", required=True, help="preset (P2, G(4,2)) or ring spec file")
        sub.add_argument("--bundles", help="bundle context file")
        sub.add_argument("--format", choices=["text", "json"], default="text")
        sub.add_argument("expression")

    residual = commands.add_parser("residual", help="residual Chern number of a vanishing configuration")
    residual.add_argument("--config", required=True)
    residual.add_argument("--format", choices=["text", "json"], default="text")

    export = commands.add_parser("export", help="print a preset ring as a ring spec document")
    export.add_argument("--ring", required=True)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    return parser


@contextmanager
def _executor() -> Iterator[Optional[ProcessPoolExecutor]]:
    workers = get_settings().MAX_WORKERS
    if workers <= 1:
        yield None
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield pool


def _step(entry) -> str:
    return f"{entry['sign'] * entry['multiplicity']:+d} x {entry['integral']}  {entry['description']}"


def _render_text(output: CommandOutput) -> str:
    if output.command == "lines":
        lines = []
        for method, total in output.result.items():
            lines.append(f"{method}: {total}")
            lines.extend(f"  {_step(entry)}" for entry in output.breakdown.get(method, []))
        return "\n".join(lines)
    if output.command == "table":
        pieces = []
        for row in output.result:
            monomial = row["monomial"]
            pieces.append(str(row["coefficient"]) if monomial == "1" else f"{row['coefficient']}*{monomial}")
        return " + ".join(pieces)
    if output.command == "residual":
        lines = [_step(entry) for entry in output.breakdown]
        lines.append(f"total: {output.result}")
        return "\n".join(lines)
    if output.command == "euler" and output.breakdown:
        return "\n".join([str(output.result)] + [f"  {_step(entry)}" for entry in output.breakdown])
    return str(output.result)


def _emit(output: CommandOutput, fmt: str, out: TextIO) -> None:
    if fmt == "json":
        out.write(json.dumps(output.model_dump(exclude_none=True), indent=2, sort_keys=True) + "\n")
    else:
        out.write(_render_text(output) + "\n")


def _dispatch(args: argparse.Namespace, out: TextIO) -> int:
    if args.command == "lines":
        if args.d is None and args.ci is None:
            raise _UsageError("intersect lines: error: one of --d or --ci is required", "")
        if args.ci is not None and args.method != "direct":
            raise _UsageError("intersect lines: error: --ci supports only --method direct", "")
        with _executor() as pool:
            output = lines_command(args.n, args.d, args.ci, args.method, pool)
    elif args.command == "euler":
        with _executor() as pool:
            output = euler_command(args.grass, args.projective, args.method, pool)
    elif args.command == "table":
        output = table_command(args.codim, args.components, args.max_degree)
    elif args.command in ("eval", "integrate"):
        output = eval_command(
            args.ring, args.expression, bundles=args.bundles,
            integrate_only=args.command == "integrate",
        )
    elif args.command == "residual":
        with _executor() as pool:
            output = residual_command(args.config, pool)
    elif args.command == "export":
        out.write(dump_spec(ring_to_spec(load_preset(args.ring).ring)) + "\n")
        return EXIT_OK
    elif args.command == "serve":
        import uvicorn

        settings = get_settings()
        uvicorn.run("src.main:app", host=args.host or settings.API_HOST, port=args.port or settings.API_PORT)
        return EXIT_OK
    else:
        raise _UsageError(f"intersect: error: unknown command {args.command}", "")
    _emit(output, args.format, out)
    return EXIT_OK


def run_command(argv: Sequence[str], out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except _UsageError as e:
        err.write(e.usage + str(e) + "\n")
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)
    setup_logging(args.log_level)
    expression = getattr(args, "expression", None)
    try:
        return _dispatch(args, out)
    except _UsageError as e:
        err.write(str(e) + "\n")
        return EXIT_USAGE
    except ParseError as e:
        err.write(f"parse error: {e}\n")
        if expression is not None:
            prefix = expression.encode("utf-8")[:e.offset].decode("utf-8", errors="ignore")
            err.write(f"  {expression}\n  {' ' * len(prefix)}^\n")
        return EXIT_USAGE
    except ExpressionError as e:
        err.write(f"expression error: {e}\n")
        return EXIT_USAGE
    except IntersectionError as e:
        logger.debug("Command failed", exc_info=True)
        err.write(f"error: {e}\n")
        return EXIT_DOMAIN_ERROR


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
