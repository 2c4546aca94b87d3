#!/usr/bin/env python3
"""Rebuild every gadget stamp and its boundary signal table.

Writes ``<kind>.json`` (crease pattern), ``<kind>.svg`` and one
``tables.json`` with the signal rows of each stamp into the output
directory.  The clause crossover stamp takes a few minutes; skip it with
``--skip clause_crossover``.
"""
import argparse
import json
import sys
import time
from pathlib import Path

from rigami import sat
from rigami.pattern import export_svg, save_pattern


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-o", "--out", default="gadgets", help="output directory (default: gadgets)")
    ap.add_argument("--only", action="append", choices=sat.STAMP_KINDS, help="build just these kinds")
    ap.add_argument("--skip", action="append", default=[], choices=sat.STAMP_KINDS)
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tables = {}
    for kind in args.only or sat.STAMP_KINDS:
        if kind in args.skip:
            continue
        start = time.perf_counter()
        g = sat.make_gadget(kind)
        save_pattern(g.pattern, out / f"{kind}.json")
        export_svg(g.pattern, out / f"{kind}.svg")
        rows = sat.signal_table(g)
        tables[kind] = {
            "ports": {side: [list(w) for w in wires] for side, wires in g.ports.items()},
            "widths": {side: list(w) for side, w in g.widths.items()},
            "rows": [dict(row) for row in rows],
        }
        print(f"{kind}: {len(rows)} signal rows ({time.perf_counter() - start:.1f} s)", file=sys.stderr)
    (out / "tables.json").write_text(json.dumps(tables, indent=1, sort_keys=True) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
