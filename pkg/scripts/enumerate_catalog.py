"""Exhaustive search over 3x3 cube-root monomial matrices; prints counts and writes the catalog."""

import argparse
import json
import time
from pathlib import Path

from diracfrac import families as fam
from diracfrac.serialize import dumps, matrix_to_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("cubic_catalog.json"))
    args = ap.parse_args()

    start = time.perf_counter()
    certs = fam.enumerate_triples(3)
    elapsed = time.perf_counter() - start
    counts = fam.triple_counts(certs)
    for name, value in counts.items():
        print(f"{name:>52s}  {value}")
    print(f"search took {elapsed:.2f} s over {len(fam.cubic_candidates())} candidates")
    normalized = [c for c in certs if all(m.phase_normalized for m in c.codes)]
    args.out.write_text(dumps({
        "counts": counts,
        "phase_normalized_triples": [[matrix_to_json(m) for m in c.matrices] for c in normalized],
    }))
    print(f"wrote {args.out}")
    json.loads(args.out.read_text())


if __name__ == "__main__":
    main()
