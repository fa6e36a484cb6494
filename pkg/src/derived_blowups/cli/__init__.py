"""Command-line front end: parse a script, run it, print a report."""

import argparse
import sys

from .parser import ParseError, Script, parse
from .printer import print_script
from .runner import GroebnerCache, RunError, Runner, render

__all__ = ["main", "parse", "print_script", "run_script", "Script", "ParseError", "RunError"]


def run_script(text, fmt="text", cache_dir=None, batch=False, timing=None):
    """Parse and run ``text``; returns ``(report_text, records)``."""
    script = parse(text)
    if len(script.commands) > 1 and not batch:
        raise RunError(f"script has {len(script.commands)} commands; pass --batch to run several")
    cache = GroebnerCache(cache_dir) if cache_dir else None
    records = Runner(cache, timing).run(script)
    return render(records, fmt), records


def _build_argparser():
    p = argparse.ArgumentParser(
        prog="derived-blowups",
        description="Koszul homology, derived blow-up charts and divisor checks over Q.",
    )
    p.add_argument("script", nargs="?", default="-", help="script file, or '-' for stdin (default)")
    p.add_argument("-e", "--expr", help="script text given inline instead of a file")
    p.add_argument("--assert", dest="assert_", action="store_true",
                   help="exit with status 1 when any verdict is false")
    p.add_argument("--batch", action="store_true", help="allow several commands in one script")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--cache-dir", help="directory for cached Groebner bases of declared rings")
    p.add_argument("--timing", action="store_true", help="per-command timings on stderr")
    return p


def main(argv=None):
    args = _build_argparser().parse_args(argv)
    try:
        if args.expr is not None:
            text = args.expr
        elif args.script == "-":
            text = sys.stdin.read()
        else:
            with open(args.script, encoding="utf-8") as fh:
                text = fh.read()
        report, records = run_script(text, args.format, args.cache_dir, args.batch,
                                     sys.stderr if args.timing else None)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (RunError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure, still a clean exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(report)
    if args.assert_ and any(r.get("verdict") is False for r in records):
        return 1
    return 0
