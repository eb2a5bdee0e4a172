#!/usr/bin/env python3
"""Census of randomly grown symbols: normality, congruence, relations vs oracle.

For each q the script grows `per_q` random valid symbols, analyzes them and
tallies how often the subgroup is normal and congruence.  On q = 3 both
congruence tests run and any disagreement aborts the run, so a clean exit is
itself a cross-validation result.

    python scripts/random_census.py --qs 3 4 5 6 --per-q 100 --seed 7
"""

import argparse
import json
import random
import time
from collections import Counter
from dataclasses import asdict, dataclass, field

from heckemap.analysis import AnalysisOptions, analyze
from heckemap.generate import GeneratorConfig, random_symbol


@dataclass
class CensusConfig:
    qs: list = field(default_factory=lambda: [3, 4, 5, 6, 7, 8])
    per_q: int = 20
    seed: int = 0
    max_expansions: int = 3
    max_oracle_size: int = 10**5


def census(cfg: CensusConfig):
    gen_cfg = GeneratorConfig(max_expansions=cfg.max_expansions)
    opts = AnalysisOptions("both", cfg.max_oracle_size)
    out = {}
    for q in cfg.qs:
        rng = random.Random(cfg.seed * 1000 + q)
        tally = Counter()
        indices = []
        t0 = time.perf_counter()
        for _ in range(cfg.per_q):
            rep = analyze(random_symbol(q, rng, gen_cfg), opts)
            indices.append(rep.index)
            tally["normal"] += rep.normal
            tally[f"congruence={rep.congruence['verdict']}"] += 1
            if rep.congruence.get("agreement") is not None:
                tally["hsu_oracle_compared"] += 1
        out[q] = {"symbols": cfg.per_q, "max_index": max(indices),
                  "mean_index": round(sum(indices) / len(indices), 2),
                  "seconds": round(time.perf_counter() - t0, 2), **dict(tally)}
        print(f"q={q}: {out[q]}")
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description="random symbol census")
    p.add_argument("--qs", type=int, nargs="+", default=CensusConfig().qs)
    p.add_argument("--per-q", type=int, default=CensusConfig.per_q)
    p.add_argument("--seed", type=int, default=CensusConfig.seed)
    p.add_argument("--max-expansions", type=int, default=CensusConfig.max_expansions)
    p.add_argument("--max-oracle-size", type=int, default=CensusConfig.max_oracle_size)
    p.add_argument("--json", action="store_true", help="print the final table as JSON")
    args = vars(p.parse_args(argv))
    as_json = args.pop("json")
    cfg = CensusConfig(**args)
    result = census(cfg)
    if as_json:
        print(json.dumps({"config": asdict(cfg), "census": result}, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
