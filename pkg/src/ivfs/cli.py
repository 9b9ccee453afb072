"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or validation error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from ivfs import __version__
from ivfs.classify import CLASSIFIERS, ClassifierConfig, accuracy, classify_sample
from ivfs.clustering import DEFAULT_MAX_ITERATIONS, KMeansConfig
from ivfs.dataset import (
    CsvSchema,
    load_dataset,
    read_interval_rows,
    serialize_dataset,
    synthesize_dataset,
    write_planted,
)
from ivfs.exceptions import IvfsError
from ivfs.harness import ExperimentConfig, emit_report, parse_fractions, run_experiment
from ivfs.selection import build_knowledgebase, load_knowledgebase, save_knowledgebase

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage().rstrip()}")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write(text: str, path) -> None:
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def cmd_select(args) -> int:
    ifm = load_dataset(args.dataset)
    kb = build_knowledgebase(ifm, KMeansConfig(args.k, args.max_iterations, args.seed))
    fh, close = _open_out(args.out)
    try:
        save_knowledgebase(kb, fh)
    finally:
        if close:
            fh.close()
    if close:
        for entry in kb.classes:
            print(f"{entry.label}: {' '.join(map(str, entry.indices))}", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args) -> int:
    with open(args.kb, encoding="utf-8") as fh:
        kb = load_knowledgebase(fh)
    with open(args.queries, encoding="utf-8", newline="") as fh:
        data, labels = read_interval_rows(fh, CsvSchema(n_features=kb.d, label_required=False))
    cfg = ClassifierConfig(args.classifier, args.beta)
    lines = ["row,predicted," + ",".join(f"score_{c}" for c in kb.class_names)]
    preds = []
    for i, q in enumerate(data, start=1):
        label, scores = classify_sample(q, kb, cfg=cfg)
        preds.append(label)
        lines.append(f"{i},{label}," + ",".join(repr(s.score) for s in scores))
    known = [(p, t) for p, t in zip(preds, labels) if t is not None]
    if known:
        acc = accuracy([p for p, _ in known], [t for _, t in known])
        lines.append(f"# accuracy {acc!r} over {len(known)} labeled rows")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        dataset=args.dataset, classifier=args.classifier, beta=args.beta,
        fractions=parse_fractions(args.fractions), k_min=args.k_min, k_max=args.k_max,
        repetitions=args.reps, seed=args.seed, max_iterations=args.max_iterations)
    _write(emit_report(run_experiment(cfg), args.format), args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    ifm, planted = synthesize_dataset(args.classes, args.per_class, args.features, args.informative,
                                      args.separation, args.noise_width, args.seed)
    fh, close = _open_out(args.out)
    try:
        serialize_dataset(ifm, fh)
    finally:
        if close:
            fh.close()
    if close:
        with open(args.out + ".planted", "w", encoding="utf-8") as side:
            write_planted(planted, side)
    else:
        write_planted(planted, sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ivfs", description="Class-specific feature selection for interval data.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, dataset=True):
        if dataset:
            p.add_argument("--dataset", required=True, help="CSV path or bundled fixture name (iris)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output file (default: standard output)")

    def classifier(p):
        p.add_argument("--classifier", choices=CLASSIFIERS, default="c2")
        p.add_argument("--beta", type=float, default=1.0, help="gap decay of c2 (default 1)")

    p = sub.add_parser("select", help="build and save a feature knowledgebase")
    common(p)
    p.add_argument("--k", type=int, required=True, help="clusters (selected features) per class")
    p.add_argument("--max-iterations", type=int, default=DEFAULT_MAX_ITERATIONS)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("classify", help="classify query rows with a saved knowledgebase")
    p.add_argument("--kb", required=True, help="knowledgebase JSON from 'select'")
    p.add_argument("--queries", required=True, help="CSV of query rows; labels optional")
    p.add_argument("--out", default=None)
    classifier(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("experiment", help="split/K sweep comparing WFS with WoFS")
    common(p)
    classifier(p)
    p.add_argument("--k-min", type=int, default=None)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--fractions", default="0.3,0.4,0.5,0.6,0.7")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--max-iterations", type=int, default=DEFAULT_MAX_ITERATIONS)
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("synth", help="write a synthetic dataset with planted features")
    common(p, dataset=False)
    p.add_argument("--classes", type=int, default=3)
    p.add_argument("--per-class", type=int, default=20)
    p.add_argument("--features", type=int, default=10)
    p.add_argument("--informative", type=int, default=2)
    p.add_argument("--separation", type=float, default=10.0)
    p.add_argument("--noise-width", type=float, default=0.5)
    p.set_defaults(func=cmd_synth)
    return parser


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (IvfsError, OSError) as exc:
        print(f"ivfs {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
