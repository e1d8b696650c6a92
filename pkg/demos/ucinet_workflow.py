"""End-to-end network workflow: DL file -> margins -> count estimate.

A classic sociometric survey asks every member of a group to name their
top choices on several relations ("who do you go to for advice?", ...),
giving a stack of zero-one nomination matrices.  The number of stacks
that share the observed margins (how often each actor nominates, how
often each is nominated, how dense each relation is) measures how much
the margins alone constrain the data: a null model for everything else.

This script writes a synthetic UCINET DL file for 18 actors and 10
relations with 3 nominations each, then drives the two command-line steps
a real analysis would use:

    cptables ingest-ucinet survey.dl --out survey.margins
    cptables estimate survey.margins --samples 1000 --bootstrap 500

Run:  python3 demos/ucinet_workflow.py
"""

import tempfile
from pathlib import Path

import numpy as np

from cptables.cli import main as cli_main


def synthetic_dl(n: int = 18, relations: int = 10, picks: int = 3) -> str:
    rng = np.random.default_rng(7)
    lines = [
        f"DL N={n} NM={relations}",
        "FORMAT = FULLMATRIX DIAGONAL PRESENT",
        "DATA:",
    ]
    for _ in range(relations):
        for i in range(n):
            row = [0] * n
            others = [j for j in range(n) if j != i]
            picks_idx = rng.choice(len(others), size=picks, replace=False)
            for rank, pick in enumerate(picks_idx, start=1):
                row[others[pick]] = rank
            lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        dl_path = Path(tmp) / "survey.dl"
        margins_path = Path(tmp) / "survey.margins"
        dl_path.write_text(synthetic_dl())

        print(f"$ cptables ingest-ucinet {dl_path.name} --out {margins_path.name}")
        rc = cli_main(["ingest-ucinet", str(dl_path), "--out", str(margins_path)])
        assert rc == 0

        print(f"\n$ cptables estimate {margins_path.name} --samples 1000 --bootstrap 500")
        rc = cli_main([
            "estimate", str(margins_path),
            "--samples", "1000", "--bootstrap", "500",
        ])
        assert rc == 0


if __name__ == "__main__":
    main()
