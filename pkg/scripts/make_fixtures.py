#!/usr/bin/env python3
"""Regenerate the all-circles q-gon fixtures (q = 3..8) in the corpus directory.

The hand-entered symbols from the literature live next to them and are not
touched.  Run from the repository root:  python scripts/make_fixtures.py
"""

from pathlib import Path

from heckemap.generate import base_qgon_symbol
from heckemap.symbol import serialize_hfs

CORPUS = Path(__file__).resolve().parents[1] / "src" / "heckemap" / "fixtures" / "corpus"


def main():
    for q in range(3, 9):
        path = CORPUS / f"qgon_q{q}.hfs"
        path.write_text(serialize_hfs(base_qgon_symbol(q)))
        print("wrote", path.name)


if __name__ == "__main__":
    main()
