"""Command line interface: ``fuzzy-reduct {select,matrix,oracle,eval,scatter}``.

Exit codes: 0 success, 1 input error, 2 unsatisfiable or degenerate run,
3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .discernibility import Mode
from .fuzzy import Kernel, TConorm, TNorm
from .pipeline import (
    RunConfig,
    build_clauses,
    dump_clauses,
    dump_similarity,
    exit_code_for,
    export_scatter,
    load_input,
    loocv_eval,
    reduce_clauses,
    run_select,
    write_text,
)
from .reducer import brute_force_reducts

log = logging.getLogger("fuzzy_reduct")


def _kind_pair(text: str) -> tuple[str, str]:
    name, sep, kind = text.partition("=")
    if not sep or kind not in ("nominal", "real"):
        raise argparse.ArgumentTypeError(f"expected NAME=nominal|real (or *=KIND), got {text!r}")
    return name, kind


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("input", help="CSV/TSV file with a header row")
    p.add_argument("--delimiter", default=",", help="field delimiter (default ','; use '\\t' for TSV)")
    p.add_argument("--decision-column", default=None, help="decision column name (default: last)")
    p.add_argument("--kind", action="append", type=_kind_pair, default=[], metavar="NAME=KIND",
                   help="override inferred kind; '*=nominal' applies to every conditional column")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.FUZZY_PROPOSED.value)
    p.add_argument("--kernel", choices=[k.value for k in Kernel], default=Kernel.RANGE_LINEAR.value)
    p.add_argument("--tnorm", choices=[t.value for t in TNorm], default=TNorm.MINIMUM.value,
                   help="t-norm used to grade subsumption (default: minimum)")
    p.add_argument("--tconorm", choices=[s.value for s in TConorm], default=TConorm.LUKASIEWICZ.value)
    p.add_argument("--simplify", action=argparse.BooleanOptionalAction, default=True,
                   help="drop subsumed clauses (default: on)")
    p.add_argument("--sigma-ddof", type=int, default=0,
                   help="degrees of freedom for the std-dev kernel (0 population, 1 sample)")
    p.add_argument("--output", "-o", default=None, help="output path (default: stdout)")
    p.add_argument("--seed", type=int, default=None, help="reserved; all algorithms are deterministic")
    return p


def _config(args, **extra) -> RunConfig:
    delimiter = "\t" if args.delimiter in ("\\t", "tab") else args.delimiter
    return RunConfig(
        input=args.input, delimiter=delimiter, decision_column=args.decision_column,
        kind_overrides=dict(args.kind), mode=args.mode, kernel=args.kernel, tnorm=args.tnorm,
        tconorm=args.tconorm, simplify=args.simplify, sigma_ddof=args.sigma_ddof,
        seed=args.seed, **extra,
    )


def _features(text: str | None) -> list[str] | None:
    return [f.strip() for f in text.split(",") if f.strip()] if text else None


def _reduct_for(args, ds, config) -> list[str]:
    given = _features(getattr(args, "features", None))
    if given is not None:
        for f in given:
            ds.feature_index(f)
        return given
    return list(reduce_clauses(build_clauses(ds, config), config).features)


def cmd_select(args) -> int:
    config = _config(args, output_format=args.format, evaluate=args.eval, scatter_k=args.scatter)
    report = run_select(config)
    if args.format == "text":
        write_text(report.summary(), args.output)
    else:
        write_text(report.to_json(), args.output)
    if args.scatter is not None:
        ds = load_input(config)
        write_text(export_scatter(ds, report.reduct.features, args.scatter, config.delimiter),
                   args.scatter_output)
    if report.degenerate:
        for w in report.warnings:
            log.warning(w)
        return 2
    return 0


def cmd_matrix(args) -> int:
    config = _config(args)
    ds = load_input(config)
    if args.what == "similarity":
        if not args.feature:
            raise ValueError("--feature is required for similarity dumps")
        text = dump_similarity(ds, args.feature, config.kernel, config.sigma_ddof, config.delimiter)
    else:
        text = dump_clauses(build_clauses(ds, config), config.delimiter)
    write_text(text, args.output)
    return 0


def cmd_oracle(args) -> int:
    config = _config(args)
    ds = load_input(config)
    cs = build_clauses(ds, config)
    reducts = brute_force_reducts(cs, config.connectives)
    doc = {"mode": config.mode.value, "clauses": len(cs),
           "minimal_reducts": [sorted(r) for r in reducts]}
    write_text(json.dumps(doc, indent=2), args.output)
    return 0


def cmd_eval(args) -> int:
    config = _config(args)
    ds = load_input(config)
    reduct = _reduct_for(args, ds, config)
    doc = {"reduct": reduct, "method": "loocv_1nn", "accuracy": loocv_eval(ds, reduct)}
    write_text(json.dumps(doc, indent=2), args.output)
    return 0


def cmd_scatter(args) -> int:
    config = _config(args)
    ds = load_input(config)
    reduct = _reduct_for(args, ds, config)
    write_text(export_scatter(ds, reduct, args.k, config.delimiter), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzy-reduct",
                                     description="Discernibility-matrix feature selection.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("select", parents=[common], help="compute a reduct and write a report")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--eval", action="store_true", help="add 1-NN leave-one-out accuracy")
    p.add_argument("--scatter", type=int, default=None, metavar="K",
                   help="also export the first K reduct features per object")
    p.add_argument("--scatter-output", default=None, help="path for --scatter (default: stdout)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("matrix", parents=[common], help="dump a similarity or clause matrix")
    p.add_argument("--what", choices=["similarity", "clauses"], default="clauses")
    p.add_argument("--feature", default=None, help="feature (or decision column) for similarity")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("oracle", parents=[common], help="brute-force minimal reducts (<= 20 features)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("eval", parents=[common], help="1-NN leave-one-out accuracy of a reduct")
    p.add_argument("--features", default=None, help="comma-separated reduct (default: compute one)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scatter", parents=[common], help="export reduct-feature scatter data")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--features", default=None, help="comma-separated reduct (default: compute one)")
    p.set_defaults(func=cmd_scatter)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except Exception as exc:  # mapped to documented exit codes
        stage = getattr(exc, "stage", args.command)
        print(f"fuzzy-reduct: error in stage '{stage}': {exc}", file=sys.stderr)
        if args.verbose:
            raise
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
