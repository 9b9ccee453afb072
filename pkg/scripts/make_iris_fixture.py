"""Regenerate src/ivfs/data/iris_interval.csv from Fisher's iris measurements.

Each class's 50 flowers are taken in their published order and cut into 10
consecutive groups of 5; every interval is the [min, max] of one
measurement over a group.  Needs scikit-learn (for the classical data only).
"""

import csv
import sys
from pathlib import Path

from sklearn.datasets import load_iris

FEATURES = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
GROUP = 5


def main(out: Path) -> None:
    iris = load_iris()
    names = ["setosa", "versicolor", "virginica"]
    with out.open("w", newline="", encoding="utf-8") as fh:
        fh.write("# Interval iris: 30 samples, 4 interval features, 3 classes of 10.\n")
        fh.write("# Each sample is the [min, max] over 5 consecutive flowers of one species\n")
        fh.write("# in Fisher's iris data (scripts/make_iris_fixture.py).\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"{f}_{b}" for f in FEATURES for b in ("lo", "hi")] + ["label"])
        for c, name in enumerate(names):
            rows = iris.data[iris.target == c]
            for g in range(0, len(rows), GROUP):
                block = rows[g:g + GROUP]
                cells = []
                for k in range(len(FEATURES)):
                    cells += [f"{block[:, k].min():.1f}", f"{block[:, k].max():.1f}"]
                writer.writerow(cells + [name])


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "src" / "ivfs" / "data" / "iris_interval.csv"
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else default)
