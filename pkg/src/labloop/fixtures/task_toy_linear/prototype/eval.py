"""Score the trained toy model and write metrics.json."""

import csv
import json
from pathlib import Path

HERE = Path(__file__).resolve().parent


def main():
    with open(HERE / "data.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    with open(HERE / "model.json") as fh:
        model = json.load(fh)
    w, b = model["w"], model["b"]
    errors = [(w * float(r["x"]) + b - float(r["y"])) ** 2 for r in rows]
    mse = sum(errors) / len(errors)
    with open(HERE / "metrics.json", "w") as fh:
        json.dump({"mse": mse}, fh)
    print(f"mse: {mse:.6f}")


if __name__ == "__main__":
    main()
