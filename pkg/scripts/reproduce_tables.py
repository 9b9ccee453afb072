"""Print WFS/WoFS tables for user-supplied interval datasets.

    python scripts/reproduce_tables.py car.csv fish.csv water.csv:21 --reps 20

Each argument is a CSV in the ivfs dataset layout, optionally followed by
``:KMAX`` to cap the K sweep (the default sweep is 2..d-1).  Both
classifiers are run over train fractions 0.3..0.7.  The original splits are
unknown, so the numbers are not expected to match published ones exactly.
"""

import argparse

from ivfs.harness import ExperimentConfig, emit_report, run_experiment


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("datasets", nargs="+", help="PATH or PATH:KMAX")
    parser.add_argument("--reps", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    for spec in args.datasets:
        path, _, kmax = spec.partition(":")
        for kind in ("c1", "c2"):
            cfg = ExperimentConfig(path, kind, repetitions=args.reps, seed=args.seed,
                                   k_max=int(kmax) if kmax else None)
            print(emit_report(run_experiment(cfg), "table"))


if __name__ == "__main__":
    main()
