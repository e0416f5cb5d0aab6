"""Regenerate data/wdbc.csv from the copy of the UCI WDBC set bundled with scikit-learn.

The bundled copy has no patient id column. The diagnosis column is written
first, with malignant = 1 and benign = 0 (scikit-learn uses the opposite).
"""
import pathlib

from sklearn.datasets import load_breast_cancer


def main() -> None:
    d = load_breast_cancer()
    names = [n.replace(" ", "_") for n in d.feature_names]
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "wdbc.csv"
    with out.open("w") as f:
        f.write(",".join(["diagnosis"] + names) + "\n")
        for row, t in zip(d.data, d.target):
            f.write(",".join([str(1 - int(t))] + [repr(float(v)) for v in row]) + "\n")


if __name__ == "__main__":
    main()
