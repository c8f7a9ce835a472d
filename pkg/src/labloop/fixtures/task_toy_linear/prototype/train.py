"""Baseline trainer for the toy single-feature regression task."""

import argparse
import csv
import json
from pathlib import Path

from labloop.mltools.toy_linear import fit_linear

LEARNING_RATE = 0.0001
EPOCHS = 200

HERE = Path(__file__).resolve().parent


def load_rows(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    xs = [float(row["x"]) for row in rows]
    ys = [float(row["y"]) for row in rows]
    return xs, ys


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--epochs", type=int, default=EPOCHS)
    parser.add_argument("--batch_size", type=int, default=1)
    parser.add_argument("--warmup_steps", type=int, default=0)
    parser.add_argument("--weight_decay", type=float, default=0.0)
    parser.add_argument("--learning_rate", type=float, default=LEARNING_RATE)
    parser.add_argument("--result_dir", default=".")
    args = parser.parse_args()

    xs, ys = load_rows(HERE / "data.csv")
    fit = fit_linear(
        xs,
        ys,
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        warmup_steps=args.warmup_steps,
        weight_decay=args.weight_decay,
    )
    result_dir = Path(args.result_dir)
    result_dir.mkdir(parents=True, exist_ok=True)
    with open(result_dir / "model.json", "w") as fh:
        json.dump({"kind": "linear", "w": fit.w, "b": fit.b}, fh)
    print(f"w={fit.w:.4f} b={fit.b:.4f} final_loss={fit.losses[-1]:.6f}")


if __name__ == "__main__":
    main()
