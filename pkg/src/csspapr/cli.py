"""
Command-line interface.

    csspapr simulate --config exp.cfg --out ccdf.csv [--workers 4] [--trials ...]
    csspapr acf --n 32 --v 2 --partition adjacent --out acf.csv
    csspapr check-svsets --file sets.txt --n 128 --v 4 --criterion 2
    csspapr search-svsets --n 128 --v 4 --u 4 --partition adjacent --seed 0 \
        --iterations 10000 --out sets.txt

Exit codes: 0 success or criterion passed, 1 criterion failed (or search
found nothing), 2 configuration error.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
import warnings
from pathlib import Path

from .acf import acf_table
from .exceptions import ConfigurationError, PreconditionError, SearchFailedError
from .harness import SimConfig, format_ccdf_csv, load_config, parse_config, run_experiment
from .partition import PARTITION_KINDS, make_pattern
from .svsets import (
    check_criterion1,
    check_criterion2,
    criterion3_score,
    criterion3_verdict,
    format_sv_file,
    read_sv_file,
    search_sv_collection,
)

log = logging.getLogger("csspapr")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

_SIM_FLAGS = [f.name for f in dataclasses.fields(SimConfig) if f.name != "sv_collection"]
_SIM_FLAGS += ["sv_file", "sv_sets"]


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_simulate(args) -> int:
    overrides = {name: getattr(args, name) for name in _SIM_FLAGS}
    if args.config:
        config = load_config(args.config, overrides)
    else:
        config = parse_config("", overrides)
    log.info("running %d trials (%s, %s partition)", config.trials, config.scheme, config.partition_kind)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        table = run_experiment(config, workers=args.workers)
    for w in caught:
        log.warning("%s", w.message)
    _write(format_ccdf_csv(table), args.out)
    return EXIT_OK


def cmd_acf(args) -> int:
    kind = args.partition
    pattern = make_pattern(kind, args.n, args.v, args.seed)
    lines = ["m,numeric,closed_form,deviation"]
    for m, num, closed, dev in acf_table(pattern, args.subblock):
        lines.append(f"{m},{num:.15g},{closed:.15g},{dev:.3e}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    c = read_sv_file(args.file)
    if (args.n is not None and args.n != c.n) or (args.v is not None and args.v != c.v_count):
        raise ConfigurationError(
            f"file header says n={c.n}, v={c.v_count}; command line says n={args.n}, v={args.v}"
        )
    r1, r2 = check_criterion1(c), check_criterion2(c)
    ok3, _ = criterion3_verdict(c, args.min_gap)
    print(f"sets: {c.u_count}  n={c.n}  v={c.v_count}")
    for rep in (r1, r2):
        status = "pass" if rep.satisfied else f"FAIL ({len(rep.violations)} violations)"
        print(f"criterion {rep.criterion} (mod {rep.modulus}): {status}")
        for v in rep.violations[: args.max_violations]:
            print(f"  sets {v.pair}, subblocks {v.subblocks}: distance {v.distance}")
    try:
        s = criterion3_score(c)
        print(f"criterion 3 score: min_circular_gap={s.min_circular_gap} "
              f"mean_circular_gap={s.mean_circular_gap:.4f}  ({'pass' if ok3 else 'FAIL'})")
    except PreconditionError:
        print("criterion 3 score: undefined (criterion 1 violated)  (FAIL)")
    if args.criterion is None:
        return EXIT_OK
    passed = {1: r1.satisfied, 2: r2.satisfied, 3: ok3}[args.criterion]
    return EXIT_OK if passed else EXIT_FAIL


def cmd_search(args) -> int:
    c = search_sv_collection(args.n, args.v, args.u, args.partition, args.seed, args.iterations)
    _write(format_sv_file(c), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csspapr", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo CCDF experiment")
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--out", default="-", help="output CSV (default stdout)")
    p.add_argument("--workers", type=int, default=1)
    for name in _SIM_FLAGS:
        flags = [f"--{name.replace('_', '-')}"]
        if "_" in name:
            flags.append(f"--{name}")
        p.add_argument(*flags, dest=name, default=None, metavar=name.upper())
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("acf", help="numeric vs closed-form subblock ACF table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--partition", choices=PARTITION_KINDS + ("msequence",), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subblock", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_acf)

    p = sub.add_parser("check-svsets", help="check SV-set criteria")
    p.add_argument("--file", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--v", type=int)
    p.add_argument("--criterion", type=int, choices=(1, 2, 3))
    p.add_argument("--min-gap", type=int, default=None, help="criterion 3 pass threshold")
    p.add_argument("--max-violations", type=int, default=5)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search-svsets", help="random search for an SV collection")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--partition", choices=PARTITION_KINDS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigurationError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SearchFailedError as exc:
        print(f"search failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
