"""Class counts on path graphs: flip graph of orders, cubillage flip graph, admissible packet sets."""

import argparse
import time

from cfl.cubillage import cubillage_flip_graph, ziegler_sets
from cfl.digraph import path_graph
from cfl.orders import flip_graph


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=6)
    args = parser.parse_args()
    print(f"{'n':>3} {'d':>3} {'orders':>8} {'cubillages':>11} {'admissible':>11} {'seconds':>8}")
    for d in (2, 3, 4):
        for n in range(d + 1, args.max_n + 1):
            start = time.perf_counter()
            counts = (len(flip_graph(path_graph(n), d)), len(cubillage_flip_graph(n, d)), len(ziegler_sets(n, d)))
            mark = "" if len(set(counts)) == 1 else "  MISMATCH"
            print(f"{n:>3} {d:>3} {counts[0]:>8} {counts[1]:>11} {counts[2]:>11} {time.perf_counter() - start:>8.2f}{mark}")


if __name__ == "__main__":
    main()
