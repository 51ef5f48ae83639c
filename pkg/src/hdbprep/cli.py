"""Command-line interface.

Subcommands mirror the step-by-step preparation workflow: `identify`,
`recode-income` and `aggregate` run one stage each, `run` fuses everything
into a single pass, and `synth` generates a test database in the same
layout. Every flag mirrors a config key and wins over the file.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import replace
from pathlib import Path

from .errors import HdbError, IoError
from .identity import PrefixScheme
from .model import AgeEncoding, GenderEncoding, IncomeMode, ScaleKind, ScaleSpec
from .pipeline import (
    AGGREGATE_OUTPUTS,
    PipelineConfig,
    load_config,
    run_aggregate,
    run_identify,
    run_pipeline,
    run_recode,
)
from .synth import (
    LETTER_INCOME_FILE,
    NUMERIC_INCOME_FILE,
    SynthParams,
    generate,
    write_column_files,
    write_table,
)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, type=Path,
                        help="INI config file; relative paths resolve next to it")
    parser.add_argument("--out-dir", type=Path,
                        help="directory for outputs (default: the input directory)")
    parser.add_argument("--skip-header", type=int, metavar="N",
                        help="input lines to skip before data")
    parser.add_argument("--scheme", metavar="LETTERS",
                        help="prefix letters of the canonical key, e.g. RMCH or DMCH")
    parser.add_argument("--paper-literal", action="store_true",
                        help="legacy income table verbatim: F recodes to 115000 "
                             "and unknown letters to 0")
    parser.add_argument("--paper-sentinel", action="store_true",
                        help="emit the legacy 0.99 weight for unparseable members "
                             "instead of stopping with an error")
    parser.add_argument("--sort", action="store_true",
                        help="stable-sort persons by canonical key before grouping")
    parser.add_argument("--dmp-c", type=float, metavar="C",
                        help="DMP child discount, in [0,1]")
    parser.add_argument("--dmp-s", type=float, metavar="S",
                        help="DMP economies-of-scale exponent, in [0,1]")
    parser.add_argument("--scale", choices=["oxford", "faofam", "dmp", "none"],
                        help="which scale divides total income in households.csv")


def _configure(args: argparse.Namespace) -> PipelineConfig:
    config = load_config(args.config)
    updates = {}
    if args.out_dir is not None:
        updates["out_dir"] = args.out_dir
    if args.skip_header is not None:
        updates["skip_header"] = args.skip_header
    if args.scheme:
        updates["scheme"] = PrefixScheme.from_string(args.scheme)
    if args.paper_literal:
        updates["paper_literal"] = True
    if args.paper_sentinel:
        updates["paper_sentinel"] = True
    if args.sort:
        updates["sort"] = True
    if args.scale:
        updates["scaled_by"] = (
            None if args.scale == "none" else ScaleKind.from_config(args.scale)
        )
    if args.dmp_c is not None or args.dmp_s is not None:
        scales = []
        seen_dmp = False
        for spec in config.scales:
            if spec.kind is ScaleKind.DMP:
                seen_dmp = True
                scales.append(ScaleSpec(
                    ScaleKind.DMP,
                    dmp_c=args.dmp_c if args.dmp_c is not None else spec.dmp_c,
                    dmp_s=args.dmp_s if args.dmp_s is not None else spec.dmp_s,
                ))
            else:
                scales.append(spec)
        if not seen_dmp:
            scales.append(ScaleSpec(
                ScaleKind.DMP,
                dmp_c=args.dmp_c if args.dmp_c is not None else 0.5,
                dmp_s=args.dmp_s if args.dmp_s is not None else 0.7,
            ))
        updates["scales"] = tuple(scales)
    return replace(config, **updates) if updates else config


def _cmd_identify(args: argparse.Namespace) -> int:
    print(run_identify(_configure(args)).render())
    return 0


def _cmd_recode(args: argparse.Namespace) -> int:
    print(run_recode(_configure(args)).render())
    return 0


def _cmd_aggregate(args: argparse.Namespace) -> int:
    print(run_aggregate(_configure(args), only=args.only).render())
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    print(run_pipeline(_configure(args)).render())
    return 0


def _write_synth_config(out_dir: Path, params: SynthParams) -> Path:
    """Drop a ready-to-run config next to the generated files."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser["input"] = {"mode": "columns", "dir": "."}
    if params.income_mode is IncomeMode.LETTERS:
        parser["input"]["income"] = LETTER_INCOME_FILE
    elif params.income_mode is IncomeMode.NUMERIC:
        parser["input"]["income"] = NUMERIC_INCOME_FILE
    parser["identify"] = {"scheme": "".join(params.scheme_letters)}
    parser["variables"] = {
        "age_encoding": (
            "years" if params.age_encoding is AgeEncoding.YEARS else "classes"
        ),
        "gender_encoding": (
            "male0_female1"
            if params.gender_encoding is GenderEncoding.MALE0_FEMALE1
            else "male1_female2"
        ),
    }
    parser["income"] = {"mode": params.income_mode.value}
    parser["scales"] = {
        "oxford": "true",
        "faofam": "true",
        "dmp": "true",
        "dmp_c": repr(params.dmp_c),
        "dmp_s": repr(params.dmp_s),
        "scaled_by": params.scaled_by.value,
    }
    path = out_dir / "config.ini"
    try:
        with path.open("w", encoding="utf-8") as handle:
            parser.write(handle)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def _cmd_synth(args: argparse.Namespace) -> int:
    params = SynthParams(
        n_households=args.households,
        seed=args.seed,
        n_regions=args.regions,
        max_milieux=args.max_milieux,
        max_clusters=args.max_clusters,
        max_households_per_cluster=args.max_per_cluster,
        max_household_size=args.max_size,
        age_encoding=AgeEncoding.from_config(args.age_encoding),
        gender_encoding=GenderEncoding.from_config(args.gender_encoding),
        income_mode=IncomeMode.from_config(args.income),
        renumber_households=args.renumber,
        anomalies=args.anomalies,
    )
    result = generate(params)
    out_dir = Path(args.out_dir)
    paths = write_column_files(result, out_dir)
    if args.table:
        paths.append(write_table(result, out_dir / "persons.csv"))
    paths.append(_write_synth_config(out_dir, params))
    print(f"persons: {len(result.persons)}")
    print(f"households: {len(result.ground_truth)}")
    for path in paths:
        print(f"wrote: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdbprep",
        description="Prepare household survey microdata: canonical household "
                    "keys, adult-equivalence scales, income recoding and "
                    "streaming household-level aggregation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identify", help="write one canonical household key per person")
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_identify)

    p = sub.add_parser("recode-income",
                       help="recode letter-coded incomes to bracket amounts")
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_recode)

    p = sub.add_parser("aggregate",
                       help="write per-household statistic files")
    _add_config_flags(p)
    p.add_argument("--only", nargs="+", choices=AGGREGATE_OUTPUTS, metavar="WHAT",
                   help="write only these outputs "
                        f"(any of: {', '.join(AGGREGATE_OUTPUTS)})")
    p.set_defaults(handler=_cmd_aggregate)

    p = sub.add_parser("run", help="full pipeline: identify, recode, aggregate, "
                                   "combined table")
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_run)

    p = sub.add_parser("synth", help="generate a synthetic database with a "
                                     "ready-to-run config")
    p.add_argument("--seed", type=int, required=True, help="RNG seed; fixes all bytes")
    p.add_argument("--households", type=int, required=True, metavar="K",
                   help="number of households to generate")
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--regions", type=int, default=4)
    p.add_argument("--max-milieux", type=int, default=3)
    p.add_argument("--max-clusters", type=int, default=4)
    p.add_argument("--max-per-cluster", type=int, default=6)
    p.add_argument("--max-size", type=int, default=9,
                   help="largest household size to draw")
    p.add_argument("--age-encoding", choices=["years", "classes"], default="years")
    p.add_argument("--gender-encoding",
                   choices=["male0_female1", "male1_female2"],
                   default="male1_female2")
    p.add_argument("--income", choices=["none", "numeric", "letters"],
                   default="letters")
    p.add_argument("--renumber", action="store_true",
                   help="restart household numbering inside each cluster "
                        "(default: one continuous sequence)")
    p.add_argument("--anomalies", action="store_true",
                   help="inject a no-chief household, a two-chief household "
                        "and a dirty region token")
    p.add_argument("--table", action="store_true",
                   help="also write persons.csv, a single delimited table")
    p.set_defaults(handler=_cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except HdbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
