"""Write every nondegenerate symmetric form on the battery groups to tests/data/battery_forms.txt."""

import argparse
from pathlib import Path

from tymod.cli import parse_group
from tymod.forms import metric_forms

BATTERY = ["Z2", "Z3", "Z4", "Z5", "Z6", "Z8", "Z9", "Z2xZ2", "Z2xZ4", "Z3xZ3"]
DEFAULT_OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "battery_forms.txt"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    lines = ["# group|chi, one nondegenerate symmetric form per line"]
    for spec in BATTERY:
        for chi in metric_forms(parse_group(spec)):
            lines.append(f"{spec}|{chi}")
    args.out.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines) - 1} forms to {args.out}")


if __name__ == "__main__":
    main()
