"""Flip-graph poset checks, brute-force comparison and mirror check over all small DAGs."""

import argparse
import json
import time

from cfl.digraph import two_route_graph, small_dags
from cfl.orders import brute_force_orders, flip_graph, mirror_is_antiisomorphism, verify_poset


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-vertices", type=int, default=4)
    parser.add_argument("--degrees", default="2,3")
    parser.add_argument("--json-out")
    args = parser.parse_args()
    degrees = [int(x) for x in args.degrees.split(",")]
    rows = []
    start = time.perf_counter()
    for g in small_dags(args.max_vertices) + [two_route_graph()]:
        for d in degrees:
            fg = flip_graph(g, d)
            report = verify_poset(fg, strict=True)
            oracle = brute_force_orders(g, d) == fg.node_sets() if fg.system.m <= 8 else None
            mirror = mirror_is_antiisomorphism(fg, flip_graph(g.reversed(), d))
            rows.append(
                {
                    "edges": g.to_json()["edges"],
                    "vertices": len(g.vertices),
                    "d": d,
                    "corteges": len(fg.system.upper),
                    "classes": len(fg),
                    "poset_ok": report.ok,
                    "oracle": oracle,
                    "mirror": mirror,
                }
            )
    bad = [r for r in rows if not (r["poset_ok"] and r["oracle"] is not False and r["mirror"])]
    largest = max(rows, key=lambda r: r["classes"])
    print(f"{len(rows)} instances, {len(bad)} failing, {time.perf_counter() - start:.2f}s")
    print(f"largest: {largest['classes']} classes (d={largest['d']}, edges {largest['edges']})")
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
