#!/usr/bin/env python3
"""Analyze every symbol in the bundled corpus and write one JSON report per symbol.

    python scripts/run_corpus.py --out results/corpus.json
"""

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from heckemap import fixture_path
from heckemap.analysis import AnalysisOptions, analyze
from heckemap.cli import load_symbol


@dataclass
class CorpusConfig:
    congruence: str = "both"
    max_oracle_size: int = 10**6
    emit_generators: bool = True
    out: str = "-"


def run(cfg: CorpusConfig):
    opts = AnalysisOptions(cfg.congruence, cfg.max_oracle_size, emit_generators=cfg.emit_generators)
    rows = {}
    for path in sorted(fixture_path("corpus").iterdir()):
        if not path.name.endswith(".hfs"):
            continue
        t0 = time.perf_counter()
        rep = analyze(load_symbol(path), opts)
        d = rep.as_dict(emit_generators=cfg.emit_generators)
        d["seconds"] = round(time.perf_counter() - t0, 3)
        rows[path.name[:-4]] = d
        c = d["congruence"]
        print(f"{path.name[:-4]:28s} q={d['q']} index={d['index']:3d} normal={d['normal']!s:5s} "
              f"level={d['invariants']['level']:3d} congruence={c['verdict']}", file=sys.stderr)
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(CorpusConfig()).items():
        flag = "--" + name.replace("_", "-")
        if isinstance(default, bool):
            p.add_argument(flag, action=argparse.BooleanOptionalAction, default=default)
        else:
            p.add_argument(flag, type=type(default), default=default)
    cfg = CorpusConfig(**vars(p.parse_args(argv)))
    payload = json.dumps({"config": asdict(cfg), "reports": run(cfg)}, indent=2, sort_keys=True)
    if cfg.out == "-":
        print(payload)
    else:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(payload + "\n")


if __name__ == "__main__":
    main()
