"""
Command-line interface.

Exit codes: 0 success, 2 input or parse error, 3 evidence or parameter error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .convert import DEFAULT_VARIANT_CAP, apply_mapping, conversion_report, format_conversion_report
from .fs import Lexicon
from .lmf_io import LmfError, serialize_lmf
from .mapping import (
    EvidenceError,
    MappingParams,
    TableFormatError,
    format_report,
    learn_mapping,
    mapping_report,
    read_table,
    write_table,
)
from .merge import format_log, format_stats, lexicon_stats, merge
from .synth import GeneratorSpec, SpecError, format_truth, generate_pair, identity_spec, paperlike
from .units import OpenParams, discover, occurrence_vectors, units_dump

EXIT_INPUT = 2
EXIT_EVIDENCE = 3


class InputError(Exception):
    pass


def load_lexicon(path) -> Lexicon:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return Lexicon.from_xml(data, path.stem)
    except LmfError as exc:
        raise InputError(f"{path}: {exc}") from None


def save_lexicon(lex: Lexicon, path) -> None:
    Path(path).write_bytes(serialize_lmf(lex.to_document()))


def emit(text: str, path=None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _open_params(args) -> OpenParams:
    return OpenParams(args.open_abs, args.open_ratio)


def _mapping_params(args) -> MappingParams:
    return MappingParams(
        sim_threshold=args.sim_threshold,
        min_support=args.min_support,
        comax_eps=args.comax_eps,
        min_shared_lemmas=args.min_shared,
    )


def _oriented(args, lex_a: Lexicon, lex_b: Lexicon):
    return (lex_a, lex_b) if args.direction == "a2b" else (lex_b, lex_a)


# -- subcommands --------------------------------------------------------------


def cmd_units(args) -> int:
    lex = load_lexicon(args.lexicon)
    if not len(lex):
        emit("", args.output)
        return 0
    view, units = discover(lex, _open_params(args))
    emit(units_dump(units, occurrence_vectors(view, units)), args.output)
    return 0


def run_learn(args, lex_a, lex_b, table_path=None, report_path=None):
    src, tgt = _oriented(args, lex_a, lex_b)
    table = learn_mapping(src, tgt, _mapping_params(args), _open_params(args), args.workers)
    hist = mapping_report(table)
    emit(write_table(table), table_path)
    emit(format_report(hist), report_path)
    if args.figures:
        from .plots import plot_mapping_histogram

        plot_mapping_histogram(hist, Path(args.figures) / "mapping_histogram.png",
                               f"{table.direction[0]} -> {table.direction[1]}")
    return src, tgt


def cmd_learn(args) -> int:
    run_learn(args, load_lexicon(args.lex_a), load_lexicon(args.lex_b), args.output, args.report)
    return 0


def load_table(path):
    try:
        return read_table(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except TableFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def run_convert(args, lex, table, out_path=None, report_path=None) -> Lexicon:
    outcome = apply_mapping(lex, table, args.variant_cap)
    report = conversion_report(outcome)
    if out_path or report_path:
        emit(serialize_lmf(outcome.converted.to_document()).decode("utf-8"), out_path)
        emit(format_conversion_report(report), report_path)
    else:
        emit(serialize_lmf(outcome.converted.to_document()).decode("utf-8"))
        sys.stderr.write(format_conversion_report(report))
    return outcome.converted


def cmd_convert(args) -> int:
    run_convert(args, load_lexicon(args.lexicon), load_table(args.table), args.output, args.report)
    return 0


def run_merge(args, lex_a, lex_b, out_path=None, log_path=None, stats_path=None):
    result = merge(lex_a, lex_b)
    if out_path:
        save_lexicon(result.merged, out_path)
    else:
        emit(serialize_lmf(result.merged.to_document()).decode("utf-8"))
    emit(format_log(result), log_path)
    stats = {lex_a.name: lexicon_stats(lex_a), lex_b.name: lexicon_stats(lex_b),
             "merged": lexicon_stats(result.merged)}
    emit("".join(format_stats(s, name) for name, s in stats.items()), stats_path)
    if args.figures:
        from .plots import plot_merge_outcomes, plot_pos_sizes

        plot_pos_sizes(stats, Path(args.figures) / "lexicon_sizes.png")
        plot_merge_outcomes(result.stats, Path(args.figures) / "merge_outcomes.png")
    return result


def cmd_merge(args) -> int:
    run_merge(args, load_lexicon(args.lex_a), load_lexicon(args.lex_b), args.output, args.log, args.stats)
    return 0


PIPELINE_FILES = {
    "table": "table.tsv",
    "mapping_report": "mapping_report.tsv",
    "converted": "converted.xml",
    "conversion_report": "conversion_report.tsv",
    "merged": "merged.xml",
    "merge_log": "merge_log.tsv",
    "stats": "stats.tsv",
}


def cmd_pipeline(args) -> int:
    """learn, convert and merge, each reading what the previous step wrote."""
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    files = {k: out / v for k, v in PIPELINE_FILES.items()}
    lex_a, lex_b = load_lexicon(args.lex_a), load_lexicon(args.lex_b)
    src, tgt = run_learn(args, lex_a, lex_b, files["table"], files["mapping_report"])
    del lex_a, lex_b
    run_convert(args, src, load_table(files["table"]), files["converted"], files["conversion_report"])
    del src
    run_merge(args, load_lexicon(files["converted"]), tgt, files["merged"], files["merge_log"], files["stats"])
    return 0


def cmd_gen(args) -> int:
    if args.config:
        try:
            spec = GeneratorSpec.from_json(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise InputError(f"{args.config}: {exc}") from None
        if args.seed is not None:
            spec.seed = args.seed
    else:
        make = paperlike if args.preset == "paperlike" else identity_spec
        spec = make(args.seed or 0, args.lemmas or (5000 if args.preset == "paperlike" else 200))
    if args.lemmas is not None:
        spec.lemma_count = args.lemmas
    if args.b_unique is not None:
        spec.b_unique_count = args.b_unique
    lex_a, lex_b, truth = generate_pair(spec)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    save_lexicon(lex_a, out / f"{spec.a_name}.xml")
    save_lexicon(lex_b, out / f"{spec.b_name}.xml")
    (out / "truth.tsv").write_text(format_truth(truth), encoding="utf-8")
    return 0


def cmd_stats(args) -> int:
    stats = {}
    for path in args.lexicons:
        lex = load_lexicon(path)
        stats[lex.name] = lexicon_stats(lex)
    emit("".join(format_stats(s, name) for name, s in stats.items()), args.output)
    if args.figures:
        from .plots import plot_pos_sizes

        plot_pos_sizes(stats, Path(args.figures) / "lexicon_sizes.png")
    return 0


# -- argument parsing ---------------------------------------------------------


def _add_open(p):
    d = OpenParams()
    p.add_argument("--open-abs", type=int, default=d.absolute_min,
                   help="minimum distinct values for an open attribute (default %(default)s)")
    p.add_argument("--open-ratio", type=float, default=d.ratio,
                   help="distinct/occurrence ratio for an open attribute (default %(default)s)")


def _add_mapping(p):
    d = MappingParams()
    _add_open(p)
    p.add_argument("--sim-threshold", type=float, default=d.sim_threshold)
    p.add_argument("--min-support", type=int, default=d.min_support)
    p.add_argument("--comax-eps", type=float, default=d.comax_eps)
    p.add_argument("--min-shared", type=int, default=d.min_shared_lemmas,
                   help="shared lemmas required to learn (default %(default)s)")
    p.add_argument("--direction", choices=["a2b", "b2a"], default="a2b",
                   help="a2b maps the first lexicon into the second's tagset")
    p.add_argument("--workers", type=int, default=1)


def _add_figures(p):
    p.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lexmerge", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("units", help="dump minimal units of a lexicon")
    p.add_argument("lexicon")
    p.add_argument("-o", "--output")
    _add_open(p)
    p.set_defaults(func=cmd_units)

    p = sub.add_parser("learn", help="learn a mapping table")
    p.add_argument("lex_a")
    p.add_argument("lex_b")
    p.add_argument("-o", "--output", help="mapping table file")
    p.add_argument("--report", help="histogram of candidates per unit")
    _add_mapping(p)
    _add_figures(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("convert", help="rewrite a lexicon through a mapping table")
    p.add_argument("lexicon")
    p.add_argument("table")
    p.add_argument("-o", "--output")
    p.add_argument("--report", help="residue/variant report")
    p.add_argument("--variant-cap", type=int, default=DEFAULT_VARIANT_CAP)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("merge", help="unify two lexica sharing a tagset")
    p.add_argument("lex_a")
    p.add_argument("lex_b")
    p.add_argument("-o", "--output")
    p.add_argument("--log")
    p.add_argument("--stats")
    _add_figures(p)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("pipeline", help="learn + convert + merge")
    p.add_argument("lex_a")
    p.add_argument("lex_b")
    p.add_argument("--outdir", required=True)
    p.add_argument("--variant-cap", type=int, default=DEFAULT_VARIANT_CAP)
    _add_mapping(p)
    _add_figures(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("gen", help="generate a synthetic lexicon pair")
    p.add_argument("--outdir", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--preset", choices=["paperlike", "identity"], default="paperlike")
    p.add_argument("--config", help="GeneratorSpec as JSON")
    p.add_argument("--lemmas", type=int)
    p.add_argument("--b-unique", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="entry counts per PoS and word forms per entry")
    p.add_argument("lexicons", nargs="+")
    p.add_argument("-o", "--output")
    _add_figures(p)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (InputError, SpecError) as exc:
        print(f"lexmerge: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (EvidenceError, ValueError) as exc:
        print(f"lexmerge: {exc}", file=sys.stderr)
        return EXIT_EVIDENCE


if __name__ == "__main__":
    sys.exit(main())
