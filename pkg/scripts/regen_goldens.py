"""Regenerate tests/golden/*.json from the current engine.  Review the diff before committing."""

from pathlib import Path

from tymod.cli import RunConfig, cmd_classify, dump_json

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"

CASES = {
    "z2": ("Z2", "1/2"),
    "z4": ("Z4", "1/4"),
    "z2xz2_hyperbolic": ("Z2xZ2", "0,1/2;1/2,0"),
}


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, (group, chi) in CASES.items():
        for tau, tag in (("+", "plus"), ("-", "minus")):
            path = GOLDEN / f"{name}_{tag}.json"
            path.write_text(dump_json(cmd_classify(RunConfig("classify", group, chi, tau))))
            print(path)


if __name__ == "__main__":
    main()
