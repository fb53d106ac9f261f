"""Command-line entry point.

Exit status is 0 on success, 1 when a verification item fails and 2 for bad
input (unreadable or malformed configuration, inadmissible index data).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Iterable, TextIO

from .kmodel import ConfigError, IndexFunction, load_config
from .scenarios.four_conics import enumerate_four_conics
from .scenarios.keysb import KeySBInstance, keysb_expand, keysb_sweep
from .scenarios.models import InadmissibleConfig, analyze_index, analyze_quadric, brauer_violations
from .scenarios.quadrics import enumerate_three_quadrics, enumerate_two_quadrics
from .scenarios.suite import run_suite, suite_json, suite_table

OK, FAILED, BAD_INPUT = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _write(text: str, out: str | None, stdout: TextIO) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def compute(config_path: str, out: str | None, stdout: TextIO, stderr: TextIO) -> int:
    try:
        text = Path(config_path).read_text(encoding="utf-8")
    except OSError as exc:
        stderr.write(f"{config_path}: {exc.strerror}\n")
        return BAD_INPUT
    try:
        cfg = load_config(text)
        if isinstance(cfg, IndexFunction):
            problems = brauer_violations(cfg)
            if problems:
                raise InadmissibleConfig(problems)
            analysis = analyze_index(cfg, Path(config_path).stem)
        else:
            analysis = analyze_quadric(cfg).renamed(Path(config_path).stem)
    except ConfigError as exc:
        stderr.write(f"{config_path}: {exc}\n")
        return BAD_INPUT
    except InadmissibleConfig as exc:
        stderr.write(f"{config_path}: inadmissible configuration\n")
        for problem in exc.problems:
            stderr.write(f"  - {problem}\n")
        return BAD_INPUT
    report = analysis.report.to_json()
    report["torsion"] = list(analysis.torsion(2).divisors)
    report["config"] = cfg.to_json()
    _write(_dump(report), out, stdout)
    return OK


def verify(pattern: str | None, json_out: str | None, stdout: TextIO) -> int:
    results = run_suite(pattern)
    stdout.write(suite_table(results))
    if json_out:
        Path(json_out).write_text(suite_json(results), encoding="utf-8")
    return OK if all(r.ok for r in results) else FAILED


def keysb(args, stdout: TextIO, stderr: TextIO) -> int:
    try:
        if args.sweep:
            primes = (args.p,) if args.p else (3, 5)
            ns = (args.n,) if args.n else (2, 3)
            results = list(keysb_sweep(primes, ns))
        else:
            if args.p is None or args.m is None:
                stderr.write("keysb: give --p and --m, or --sweep\n")
                return BAD_INPUT
            n = args.n if args.n is not None else len(args.m)
            results = [keysb_expand(KeySBInstance(args.p, n, tuple(args.m)))]
    except ValueError as exc:
        stderr.write(f"keysb: {exc}\n")
        return BAD_INPUT
    stdout.write(f"{'p':>2} {'n':>2} {'m':<12} {'sum':>14}  divisible\n")
    for r in results:
        inst = r.instance
        m = ",".join(map(str, inst.m))
        stdout.write(f"{inst.p:>2} {inst.n:>2} {m:<12} {r.total:>14}  {'yes' if r.divisible else 'NO'}\n")
    return OK if all(r.divisible for r in results) else FAILED


FAMILIES = {
    "four-conics": enumerate_four_conics,
    "two-quadrics": enumerate_two_quadrics,
    "three-quadrics": enumerate_three_quadrics,
}


def enumerate_family(family: str, out: str | None, limit: int | None, stdout: TextIO) -> int:
    """One JSON object per line, written as each configuration finishes."""
    rows: Iterable = FAMILIES[family](limit)
    handle = open(out, "w", encoding="utf-8") if out else stdout
    try:
        count = 0
        for verdict in rows:
            handle.write(json.dumps(verdict.to_json(), ensure_ascii=False) + "\n")
            handle.flush()
            count += 1
    finally:
        if out:
            handle.close()
    if out:
        stdout.write(f"{count} configurations written to {out}\n")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ktorsion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="torsion report for one configuration file")
    p.add_argument("config")
    p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("verify", help="run the regression suite")
    p.add_argument("--filter", help="glob over scenario names, e.g. 'four-conics/*'")
    p.add_argument("--json", dest="json_out", help="also write the report as JSON")

    p = sub.add_parser("keysb", help="alternating coefficient sums and divisibility by p^2")
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int, nargs="+")
    p.add_argument("--sweep", action="store_true", help="all exponent vectors")

    p = sub.add_parser("enumerate", help="classify every admissible configuration of a family")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--out", help="write JSON lines here instead of stdout")
    p.add_argument("--limit", type=int, help="stop after this many configurations")
    return parser


def main(argv: list[str] | None = None, stdout: TextIO | None = None,
         stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else BAD_INPUT
    if args.command == "compute":
        return compute(args.config, args.out, stdout, stderr)
    if args.command == "verify":
        return verify(args.filter, args.json_out, stdout)
    if args.command == "keysb":
        return keysb(args, stdout, stderr)
    return enumerate_family(args.family, args.out, args.limit, stdout)


if __name__ == "__main__":
    sys.exit(main())
