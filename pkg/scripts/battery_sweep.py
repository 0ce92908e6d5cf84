"""Classify TY(A, chi, +-) for every form in the battery list and print a summary table."""

import argparse
import time
from pathlib import Path

from tymod.cli import parse_chi, parse_group
from tymod.classify import classify
from tymod.tycat import TYData

DEFAULT_FORMS = Path(__file__).resolve().parents[1] / "tests" / "data" / "battery_forms.txt"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--forms", type=Path, default=DEFAULT_FORMS)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    print(f"{'group':8} {'chi':22} tau  ind  eq  obs  gt    ff  secs")
    for line in args.forms.read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        spec, chi_spec = line.split("|")
        A = parse_group(spec)
        for tau in (1, -1):
            t0 = time.perf_counter()
            r = classify(TYData(A, parse_chi(chi_spec, A), tau), workers=args.workers)
            dt = time.perf_counter() - t0
            print(
                f"{spec:8} {chi_spec:22} {'+' if tau > 0 else '-':3} {len(r.induced):4} {len(r.equivariant):3}"
                f" {len(r.obstructed_fixed):4}  {str(r.group_theoretical).lower():5} {r.fiber_functor_count:3}  {dt:.2f}"
            )


if __name__ == "__main__":
    main()
