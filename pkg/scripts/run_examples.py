#!/usr/bin/env python3
"""Run the bundled example problems and report verdicts with timings.

Usage: python scripts/run_examples.py [--fix MODE] [--format FMT] [--full]

With --full the whole proof document is printed for each problem instead
of the one-line summary.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cni_prover.cli_dsl import SourceProgram, parse
from cni_prover.geometry_model import (
    FIX_MODES,
    build_system,
    fix_coordinates,
    substitute_declaratives,
)
from cni_prover.proof_emitter import FORMATS, emit_trace
from cni_prover.prover import ProverConfig, prove

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fix", choices=FIX_MODES, default="zero_one")
    ap.add_argument("--format", choices=FORMATS, default="text")
    ap.add_argument("--timeout", type=float, default=20.0)
    ap.add_argument("--full", action="store_true", help="print whole proof documents")
    args = ap.parse_args()

    files = sorted(PROBLEMS.glob("*.cni"))
    if not files:
        print(f"no .cni files under {PROBLEMS}", file=sys.stderr)
        return 1

    width = max(len(f.stem) for f in files)
    failures = 0
    for f in files:
        c = substitute_declaratives(parse(SourceProgram(f.read_text(), f.stem)))
        sys_ = fix_coordinates(build_system(c), c, args.fix)
        t0 = time.perf_counter()
        verdict = prove(sys_, ProverConfig(timeout=args.timeout))
        dt = time.perf_counter() - t0
        tag = verdict.outcome + (f" ({verdict.reason})" if verdict.reason else "")
        print(f"{f.stem:<{width}}  {tag:<20}  {dt:6.2f}s")
        if args.full:
            print(emit_trace(verdict, args.format).text())
            print()
        if verdict.outcome != "Proved":
            failures += 1
    return 0 if failures == 0 else 2


if __name__ == "__main__":
    sys.exit(main())
