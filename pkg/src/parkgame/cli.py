"""Command-line front end.

Exit codes: 0 success, 1 domain error (e.g. not a parking function),
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from typing import Iterator, List, Optional, Tuple

from . import __version__
from .bench import run_bench
from .errors import NotAParkingFunction, ParkGameError, ResourceLimit
from .exact import format_rational
from .game import GameView, check_supermodular, coalition_mask, coalition_members, is_modular
from .leastcore import least_core, shapley_least_core_gap
from .parking import (PreferenceProfile, count_increasing_parking_functions,
                      count_parking_functions, enumerate_parking_functions, simulate_park)
from .shapley import shapley, shapley_bruteforce_perm, shapley_bruteforce_subset

METHODS = {
    "poly": shapley,
    "brute-subset": shapley_bruteforce_subset,
    "brute-perm": shapley_bruteforce_perm,
}

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class ProfileParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


_TOKEN = re.compile(r"[^\s,]+")


def parse_profile(text: str, m: Optional[int] = None, line: int = 1) -> PreferenceProfile:
    """Parse ``"1,4,3"`` or ``"1 1 2 m=3"`` into a validated profile.

    Malformed text raises :class:`ProfileParseError`; well-formed text with
    out-of-range preferences raises ``ValueError`` from the profile itself.
    """
    prefs: List[int] = []
    m_text = None
    for match in _TOKEN.finditer(text):
        tok, col = match.group(), match.start() + 1
        if m_text is not None:
            raise ProfileParseError(f"unexpected {tok!r} after m=", line, col)
        if tok.startswith("m="):
            if not re.fullmatch(r"m=\d+", tok):
                raise ProfileParseError(f"bad spot count {tok!r}", line, col)
            m_text = tok
            continue
        if not tok.isdigit():
            raise ProfileParseError(f"expected a positive integer, got {tok!r}", line, col)
        prefs.append(int(tok))
    if not prefs:
        raise ProfileParseError("empty preference tuple", line, 1)
    if m_text is not None:
        file_m = int(m_text[2:])
        if m is not None and m != file_m:
            raise ProfileParseError(f"m={file_m} conflicts with --m {m}", line, 1)
        m = file_m
    return PreferenceProfile(tuple(prefs), m or 0)


def format_profile(profile: PreferenceProfile) -> str:
    text = ",".join(map(str, profile.prefs))
    if profile.m != profile.n:
        text += f" m={profile.m}"
    return text


def read_profiles(args) -> Iterator[Tuple[int, str]]:
    """Yield ``(line_number, text)`` for each profile named on the command line."""
    if args.prefs is not None:
        yield 1, args.prefs
        return
    if args.file is None:
        raise ProfileParseError("no profile given (use --prefs or --file)", 0, 0)
    stream = sys.stdin if args.file == "-" else open(args.file, encoding="utf-8")
    try:
        for lineno, raw in enumerate(stream, 1):
            text = raw.split("#", 1)[0]
            if text.strip():
                yield lineno, text
    finally:
        if stream is not sys.stdin:
            stream.close()


def _members(mask: int) -> List[int]:
    return list(coalition_members(mask))


# --- per-command evaluation --------------------------------------------------

def _check(profile, args):
    out = simulate_park(profile)
    values = {"parking_function": out.parked,
              "spots": list(out.spots) if out.parked else None,
              "failed_car": out.failed_car}
    return values, None


def _displacement(profile, args):
    out = simulate_park(profile)
    if not out.parked:
        raise NotAParkingFunction(profile.prefs, out.failed_car)
    return {"total": str(out.total_displacement),
            "per_car": [str(d) for d in out.displacements]}, None


def _characteristic(profile, args):
    game = GameView(profile)
    if args.coalition is not None:
        cars = [int(c) for c in re.findall(r"\d+", args.coalition)]
        masks = [coalition_mask(cars, game.n)]
    else:
        if game.n > 16:
            raise ResourceLimit("listing every coalition needs n <= 16; pass --coalition")
        masks = range(1 << game.n)
    return [{"coalition": _members(mask), "value": str(game.characteristic(mask))}
            for mask in masks], None


def _shapley(profile, args):
    phi = METHODS[args.method](profile)
    return [format_rational(x) for x in phi], args.method


def _supermodular(profile, args):
    game = GameView(profile)
    ok, witness = check_supermodular(game, all_pairs=args.all_pairs)
    w = None
    if witness is not None:
        i, S, T = witness
        w = {"car": i, "S": sorted(S), "T": sorted(T)}
    return {"supermodular": ok, "modular": is_modular(game), "witness": w}, \
        ("all-pairs" if args.all_pairs else "covers")


def _leastcore(profile, args):
    res = least_core(profile)
    gap = shapley_least_core_gap(profile)
    return {"z_star": format_rational(res.z_star),
            "allocation": [format_rational(x) for x in res.allocation],
            "tight_coalitions": [sorted(S) for S in res.tight_coalitions],
            "core_empty": res.z_star > 0,
            "shapley": [format_rational(x) for x in gap.shapley],
            "shapley_max_violation": format_rational(gap.max_violation),
            "shapley_argmax": [sorted(S) for S in gap.argmax]}, "simplex"


PROFILE_COMMANDS = {
    "check": _check,
    "displacement": _displacement,
    "characteristic": _characteristic,
    "shapley": _shapley,
    "supermodular": _supermodular,
    "leastcore": _leastcore,
}


def result_document(command, profile, method, values, elapsed_ms, status, message=None):
    doc = {
        "command": command,
        "method": method,
        "n": profile.n if profile is not None else None,
        "m": profile.m if profile is not None else None,
        "prefs": list(profile.prefs) if profile is not None else None,
        "values": values,
        "timing_ms": round(max(elapsed_ms, 0.0), 3),
        "status": status,
    }
    if message is not None:
        doc["message"] = message
    return doc


def _print_table(doc, out) -> None:
    if doc["prefs"] is not None:
        print(f"profile: {','.join(map(str, doc['prefs']))}  (n={doc['n']}, m={doc['m']})", file=out)
    head = doc["command"] + (f" [{doc['method']}]" if doc["method"] else "")
    print(f"{head}: {doc['status']}  ({doc['timing_ms']} ms)", file=out)
    values = doc["values"]
    if doc["command"] == "shapley" and isinstance(values, list):
        for i, v in enumerate(values, 1):
            print(f"  car {i:>3}  {v}", file=out)
    elif isinstance(values, list):
        for item in values:
            if isinstance(item, dict):
                print("  " + "  ".join(f"{k}={_plain(v)}" for k, v in item.items()), file=out)
            else:
                print(f"  {_plain(item)}", file=out)
    elif isinstance(values, dict):
        for k, v in values.items():
            print(f"  {k}: {_plain(v)}", file=out)
    elif values is not None:
        print(f"  {values}", file=out)


def _plain(v) -> str:
    if isinstance(v, list):
        return "{" + ",".join(_plain(x) for x in v) + "}" if v and isinstance(v[0], list) \
            else "(" + ",".join(map(str, v)) + ")"
    if v is None:
        return "-"
    return str(v)


def _emit(doc, args, out) -> None:
    if args.format == "json":
        print(json.dumps(doc), file=out)
    else:
        _print_table(doc, out)


def _run_profile_command(args, out, err) -> int:
    handler = PROFILE_COMMANDS[args.command]
    code = EXIT_OK
    try:
        lines = list(read_profiles(args))
    except OSError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except ProfileParseError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    for lineno, text in lines:
        method = args.method if args.command == "shapley" else None
        try:
            profile = parse_profile(text, args.m, lineno)
        except ProfileParseError as e:
            print(f"parse error: {e}", file=err)
            return EXIT_USAGE
        except ValueError as e:
            print(f"error: line {lineno}: {e}", file=err)
            code = max(code, EXIT_DOMAIN)
            continue
        start = time.perf_counter()
        try:
            values, method = handler(profile, args)
            status, message = "ok", None
            if args.command == "check" and not values["parking_function"]:
                status = "not_parking_function"
                message = str(NotAParkingFunction(profile.prefs, values["failed_car"]))
        except NotAParkingFunction as e:
            values, status, message = None, "not_parking_function", str(e)
        except (ResourceLimit, ParkGameError, ValueError) as e:
            values, status, message = None, "error", str(e)
        elapsed = (time.perf_counter() - start) * 1000.0
        doc = result_document(args.command, profile, method, values, elapsed, status, message)
        if status != "ok":
            print(message, file=err)
            code = max(code, EXIT_DOMAIN)
        _emit(doc, args, out)
    return code


def _run_enumerate(args, out, err) -> int:
    m = args.m or args.n
    start = time.perf_counter()
    try:
        if args.count_only:
            values = {"count": str(sum(1 for _ in enumerate_parking_functions(
                args.n, m, weakly_increasing_only=args.increasing)))}
        else:
            values = [list(p.prefs) for p in enumerate_parking_functions(
                args.n, m, weakly_increasing_only=args.increasing)]
    except (ResourceLimit, ValueError) as e:
        print(f"error: {e}", file=err)
        return EXIT_DOMAIN
    elapsed = (time.perf_counter() - start) * 1000.0
    method = "increasing" if args.increasing else "all"
    doc = result_document("enumerate", None, method, values, elapsed, "ok")
    doc["n"], doc["m"] = args.n, m
    if args.format == "json":
        print(json.dumps(doc), file=out)
    elif args.count_only:
        print(values["count"], file=out)
    else:
        for prefs in values:
            print(",".join(map(str, prefs)), file=out)
    return EXIT_OK


def _run_count(args, out, err) -> int:
    m = args.m or args.n
    start = time.perf_counter()
    try:
        total = count_parking_functions(args.n, m)
        increasing = count_increasing_parking_functions(args.n, m)
    except ValueError as e:
        print(f"error: {e}", file=err)
        return EXIT_DOMAIN
    elapsed = (time.perf_counter() - start) * 1000.0
    doc = result_document("count", None, "closed-form",
                          {"count": str(total), "increasing": str(increasing)}, elapsed, "ok")
    doc["n"], doc["m"] = args.n, m
    if args.format == "json":
        print(json.dumps(doc), file=out)
    else:
        print(total, file=out)
    return EXIT_OK


def _run_bench(args, out, err) -> int:
    run_bench(range(args.min_n, args.max_n + 1), args.samples, args.seed, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parkgame", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def profile_opts(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--prefs", help='preferences, e.g. "1,4,3,3,1,2,7" or "1 1 2 m=3"')
        src.add_argument("--file", help="one profile per line ('-' for stdin, '#' comments)")
        p.add_argument("--m", type=int, help="number of spots (default: number of cars)")
        p.add_argument("--format", choices=("table", "json"), default="table")

    for name, helptext in [
        ("check", "test whether a profile is a parking function"),
        ("displacement", "total and per-car displacement"),
        ("characteristic", "characteristic function values c(S)"),
        ("shapley", "Shapley value of the parking game"),
        ("supermodular", "brute-force supermodularity check"),
        ("leastcore", "least core value, allocation and Shapley gap"),
    ]:
        p = sub.add_parser(name, help=helptext)
        profile_opts(p)
        if name == "shapley":
            p.add_argument("--method", choices=tuple(METHODS), default="poly")
        if name == "characteristic":
            p.add_argument("--coalition", help='cars in S, e.g. "1,3" (default: every S)')
        if name == "supermodular":
            p.add_argument("--all-pairs", action="store_true",
                           help="compare every S ⊆ T instead of covers only")

    p = sub.add_parser("enumerate", help="list (n, m)-parking functions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--increasing", action="store_true", help="weakly increasing ones only")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("count", help="closed-form count of (n, m)-parking functions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("bench", help="time polynomial vs brute-force Shapley (CSV)")
    p.add_argument("--min-n", type=int, default=2)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    return parser


def run_command(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.command in PROFILE_COMMANDS:
        return _run_profile_command(args, out, err)
    if args.command == "enumerate":
        return _run_enumerate(args, out, err)
    if args.command == "count":
        return _run_count(args, out, err)
    return _run_bench(args, out, err)


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
