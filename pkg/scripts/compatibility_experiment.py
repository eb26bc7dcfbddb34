"""Search for ideals of stable precedence that no representing chain passes through.

For every class sigma' of degree d+1 and every ideal I of its stable precedence
(enumerated exhaustively), take sigma = the class of degree d with anti-standard
set I. When sigma is realizable, look for a maximal chain representing sigma'
that passes through sigma and report any failure.
"""

import argparse

from cfl.bridge import compatibility_check
from cfl.cubillage import bits
from cfl.digraph import two_route_graph, path_graph
from cfl.orders import TypeAssignment, cortege_system, flip_graph, forced_relation_dag


def ideals(dag):
    m = dag.system.m
    seen = {0}
    stack = [0]
    while stack:
        mask = stack.pop()
        for j in range(m):
            if not mask >> j & 1 and dag.anc[j] & ~mask == 0:
                nxt = mask | 1 << j
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return sorted(seen)


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--max-n", type=int, default=5)
    args = parser.parse_args()
    graphs = [("example", two_route_graph())] + [(f"path{n}", path_graph(n)) for n in range(3, args.max_n + 1)]
    for name, g in graphs:
        system = cortege_system(g, 2)
        tested = unrealizable = missing = 0
        for sigma_prime in flip_graph(g, 3).nodes():
            dag = forced_relation_dag(sigma_prime)
            for mask in ideals(dag):
                ideal = frozenset(dag.system.lower[j] for j in bits(mask))
                if system.closure(system.mask_of(ideal)) is None:
                    unrealizable += 1
                    continue
                tested += 1
                report = compatibility_check(TypeAssignment(g, 2, ideal), ideal, sigma_prime)
                if not report.chain_found:
                    missing += 1
                    print(f"  {name}: no chain through {sorted(ideal)}")
        print(f"{name}: {tested} realizable ideals tested, {missing} without a chain, {unrealizable} ideals not realizable")


if __name__ == "__main__":
    main()
