#!/usr/bin/env python3
"""Regenerate the CLI golden files from the fixtures in tests/data.

Run from anywhere: ``python3 tests/make_goldens.py``.  Goldens freeze the
byte-exact report of one example invocation per command; the CLI test
suite replays the same invocations and compares bytes.
"""

import contextlib
import io
import sys
from pathlib import Path

from matseries.cli import main

HERE = Path(__file__).resolve().parent
DATA = HERE / "data"
GOLDENS = HERE / "goldens"


def golden_commands() -> dict[str, list[str]]:
    d = str(DATA)
    return {
        "eval": ["eval", "--series", f"{d}/exp_series.json", "--matrix-T", f"{d}/T_small.json"],
        "diff": ["diff", "--series", f"{d}/exp_series.json", "--matrix-T", f"{d}/T_small.json",
                 "--matrix-h", f"{d}/h_small.json", "--algorithm", "direct"],
        "compare": ["compare", "--series", f"{d}/exp_series.json",
                    "--matrix-T", f"{d}/T_small.json", "--matrix-h", f"{d}/h_small.json"],
        "curve": ["curve", "--series", f"{d}/geometric_series.json",
                  "--curve", f"poly:{d}/curve_A0.json,{d}/curve_A1.json,{d}/curve_A2.json",
                  "--t", "0.2"],
        "integral": ["integral", "--series", f"{d}/exp_series.json",
                     "--W", f"{d}/W_nilpotent.json", "--u1", "0.0", "--u2", "1.0"],
        "identities": ["identities", "--trials", "20", "--dim", "3", "--seed", "7"],
    }


def run_capture(argv: list[str]) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def regenerate() -> None:
    GOLDENS.mkdir(exist_ok=True)
    for name, argv in golden_commands().items():
        code, out = run_capture(argv)
        if code != 0:
            raise SystemExit(f"golden command {name!r} exited {code}: {out}")
        (GOLDENS / f"{name}.json").write_text(out)
        print(f"wrote goldens/{name}.json ({len(out)} bytes)")


if __name__ == "__main__":
    sys.exit(regenerate())
