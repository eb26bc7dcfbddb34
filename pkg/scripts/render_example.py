"""Draw the rhombus tilings of both routes of the five-vertex example graph.

The class used is the example order with (p1, p2) and (p1, p2*r) anti-standard;
the capsid of (p1, p2) is drawn in bold and natural-order arrows are overlaid.
"""

import argparse
from pathlib import Path

from cfl.bridge import route_cubillage
from cfl.cli import render_svg
from cfl.digraph import enumerate_routes, two_route_graph
from cfl.orders import TypeAssignment


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--out-dir", default="figures")
    args = parser.parse_args()
    g = two_route_graph()
    anti = frozenset({(("1", "2"), ("2", "3")), (("1", "2"), ("2", "3", "4'"))})
    sigma = TypeAssignment(g, 2, anti)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for route in enumerate_routes(g):
        q = route_cubillage(sigma, route).cubillage
        name = "route_" + "".join(v.replace("'", "p") for v in route) + ".svg"
        (out / name).write_text(render_svg(q, bold_packet=(1, 2, 3), arrows=True))
        print(out / name)


if __name__ == "__main__":
    main()
