#!/usr/bin/env python3
"""Greedy random search for a (J, L) QC-LDPC shift grid with girth >= 6.

Each column is chosen among random 4-cycle-free candidates to minimise the
number of new 6-cycles (block-level count).

Writes the grid in qc-exponent format. Used to produce the codes under codes/;
the output is a pure function of (J, L, p, seed).
"""
import argparse
import itertools
import random
import sys


def has_four_cycle(a, p, col):
    J = len(a)
    for j1, j2 in itertools.combinations(range(J), 2):
        for l in range(col):
            if (a[j1][col] - a[j2][col] + a[j2][l] - a[j1][l]) % p == 0:
                return True
    return False


def six_cycles(a, p, col):
    J = len(a)
    cols = range(col + 1)
    n = 0
    for j1, j2, j3 in itertools.permutations(range(J), 3):
        for l2 in cols:
            for l3 in cols:
                l1 = col
                if l1 == l2 or l2 == l3 or l3 == l1:
                    continue
                s = (a[j1][l1] - a[j2][l1] + a[j2][l2] - a[j3][l2]
                     + a[j3][l3] - a[j1][l3])
                if s % p == 0:
                    n += 1
    return n


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=4)
    ap.add_argument("--cols", type=int, default=24)
    ap.add_argument("--p", type=int, required=True)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--candidates", type=int, default=200)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    J, L, p = args.rows, args.cols, args.p
    a = [[0] * L for _ in range(J)]
    total = 0
    for col in range(L):
        best = None
        tried = 0
        while tried < args.candidates:
            cand = [rng.randrange(p) for _ in range(J)]
            for j in range(J):
                a[j][col] = cand[j]
            if has_four_cycle(a, p, col):
                continue
            tried += 1
            n = six_cycles(a, p, col)
            if best is None or n < best[0]:
                best = (n, cand)
            if n == 0:
                break
        if best is None:
            sys.exit(f"no 4-cycle-free column found for column {col}")
        for j in range(J):
            a[j][col] = best[1][j]
        total += best[0]

    print(f"# ({J},{L}) QC-LDPC, p={p}, girth >= 6, seed={args.seed}, "
          f"block-level 6-cycle count {total}")
    print(f"{J} {L} {p}")
    for row in a:
        print(" ".join(str(s) for s in row))


if __name__ == "__main__":
    main()
