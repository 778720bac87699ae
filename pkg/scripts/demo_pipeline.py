"""Kill a perturbed product-free pair and compare determinantal ideals."""

import argparse
import time

from ainfkit.cli import bn_pipeline
from ainfkit.fixtures import kill_target_fixture


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--K", type=int, default=4)
    args = ap.parse_args()
    for seed in range(args.seeds):
        t0 = time.perf_counter()
        doc = bn_pipeline(kill_target_fixture(seed), 5, args.K)
        stages = [(s["stage"], s["sign"], s["residual_before"]) for s in doc["killlog"]["stages"]]
        ranks = {r: v["ideal_jet_equal"] for r, v in doc["ranks"].items()}
        print(f"seed {seed}: stages {stages} ranks {ranks} pass={doc['pass']} "
              f"({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
