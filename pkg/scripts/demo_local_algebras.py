"""Minimal models of k[x]/(x^n) and their dual algebras."""

import argparse

from ainfkit import dual_algebra, local_algebra_fixture, transfer


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--K", type=int, default=6)
    args = ap.parse_args()
    for n in range(2, args.max_n + 1):
        H = transfer(local_algebra_fixture(n, args.K), N=args.K).structure
        R = dual_algebra(H, args.K)
        nonzero = sorted(len(w) for w in H.table if all(H.deg[i] == 1 for i in w))
        print(f"n={n}: products on y^k for k in {nonzero}, hilbert {R.hilbert()}, relations {R.relation_words()}")


if __name__ == "__main__":
    main()
