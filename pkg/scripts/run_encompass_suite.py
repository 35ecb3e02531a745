"""Encompassing trees for random disjoint segment sets: CSV per instance
(size, epsilon retries, degree histogram, timing) plus a summary line."""
from __future__ import annotations

import argparse
import csv
import sys
import time
from collections import Counter
from dataclasses import dataclass

from bdtree import verify as V
from bdtree.encompass import EncompassConfig, encompass
from bdtree.generators import gen_random_segments
from bdtree.geom import format_coord


@dataclass
class EncompassSuiteConfig:
    instances: int = 200
    max_segments: int = 40
    seed: int = 5000
    max_retries: int = 32


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    cfg = EncompassSuiteConfig()
    for name, value in vars(cfg).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=value)
    cfg = EncompassSuiteConfig(**vars(ap.parse_args(argv)))
    w = csv.writer(sys.stdout)
    w.writerow(["seed", "segments", "retries", "epsilon", "deg1", "deg2", "deg3", "ms", "valid"])
    ok = 0
    t_all = time.perf_counter()
    for k in range(cfg.instances):
        n = 1 + k % cfg.max_segments
        segs = gen_random_segments(n, cfg.seed + k).segments
        t0 = time.perf_counter()
        res = encompass(segs, EncompassConfig(max_retries=cfg.max_retries))
        dt = time.perf_counter() - t0
        t = res.tree
        valid = V.check_encompassing(t.points, t.edges, segs).ok
        ok += valid
        h = Counter(t.degrees())
        w.writerow([cfg.seed + k, n, res.retries, format_coord(res.epsilon), h[1], h[2], h[3],
                    f"{dt * 1000:.1f}", int(valid)])
    print(f"# {ok}/{cfg.instances} valid in {time.perf_counter() - t_all:.1f}s", file=sys.stderr)
    return 0 if ok == cfg.instances else 1


if __name__ == "__main__":
    sys.exit(main())
