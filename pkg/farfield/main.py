"""
Console entry point
"""
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from farfield.api.cli import COMMANDS, build_parser
from farfield.core.config import load_settings
from farfield.core.exceptions import FarFieldError, UsageError
from farfield.core.logging import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


def _report(code: str, message: str) -> None:
    print(f"farfield: error[{code}]: {message}", file=sys.stderr)


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _report(exc.code, str(exc))
        return EXIT_USAGE
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)

    try:
        overrides = {}
        if args.log_level is not None:
            overrides["log_level"] = args.log_level
        settings = load_settings(args.config, **overrides)
        setup_logging(settings)
        logger.debug("command_started", command=args.command)
        return COMMANDS[args.command](args, settings)
    except UsageError as exc:
        _report(exc.code, str(exc))
        return EXIT_USAGE
    except FarFieldError as exc:
        _report(exc.code, str(exc))
        return EXIT_FAILURE
    except ValidationError as exc:
        _report("validation", "; ".join(e["msg"] for e in exc.errors()))
        return EXIT_FAILURE
    except OSError as exc:
        _report("io", str(exc))
        return EXIT_FAILURE


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
