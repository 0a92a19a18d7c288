#!/usr/bin/env python3
"""Writes a synthetic stand-in for the breast-cancer Wisconsin table.

Layout matches the UCI file: sample ID, nine cytology scores in 1..10 and a
class label (2 benign, 4 malignant), comma separated, no header, with "?"
marking missing bare-nuclei scores. 715 rows are written, 16 of them with a
missing value, so 699 rows survive cleaning.
"""
import argparse

import numpy as np

CLEAN_ROWS = 699
MISSING_ROWS = 16


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/wdbc_standin.csv")
    parser.add_argument("--seed", type=int, default=20230101)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    total = CLEAN_ROWS + MISSING_ROWS
    malignant = rng.random(total) < 0.345
    # Scores cluster low for benign and high for malignant samples.
    centre = np.where(malignant, 7.0, 2.0)[:, None]
    spread = np.where(malignant, 2.5, 1.3)[:, None]
    scores = np.rint(centre + spread * rng.standard_normal((total, 9)))
    scores = np.clip(scores, 1, 10).astype(int)
    labels = np.where(malignant, 4, 2)
    ids = rng.choice(np.arange(1_000_000, 1_400_000), size=total, replace=False)
    missing = set(rng.choice(total, size=MISSING_ROWS, replace=False).tolist())

    with open(args.out, "w", newline="\n") as f:
        for i in range(total):
            cells = [str(ids[i])] + [str(v) for v in scores[i]] + [str(labels[i])]
            if i in missing:
                cells[6] = "?"
            f.write(",".join(cells) + "\n")


if __name__ == "__main__":
    main()
